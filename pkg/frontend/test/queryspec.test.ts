import { readFileSync, readdirSync } from "node:fs";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { TREATMENT_CLAIMS_PRESET } from "../src/presets.js";
import {
  SpecError,
  expandClaims,
  parseQuery,
  parseSuite,
  parseTemplates,
  serializeQuery,
  serializeSuite,
  serializeTemplates,
  templateVariables,
  validateQuery,
} from "../src/queryspec.js";

const ROOT = fileURLToPath(new URL("../..", import.meta.url));
const COOKBOOK = join(ROOT, "src", "infotriage", "data", "cookbook");
const GOLDEN = join(ROOT, "tests", "golden");

describe("cookbook round-trip", () => {
  const files = readdirSync(COOKBOOK).filter((f) => f.endsWith(".json")).sort();

  it("ships twelve spec files", () => {
    expect(files.length).toBe(12);
  });

  for (const name of files) {
    it(`re-serializes ${name} byte-identically`, () => {
      const text = readFileSync(join(COOKBOOK, name), "utf-8");
      const parsed = JSON.parse(text);
      if ("templates" in parsed) {
        expect(serializeTemplates(parseTemplates(text))).toBe(text);
      } else {
        expect(serializeSuite(parseSuite(text))).toBe(text);
      }
    });
  }
});

describe("query parsing", () => {
  it("round-trips a stance query with a keyword prefilter", () => {
    const text = serializeQuery({
      kind: "stance",
      keywords: [[{ pattern: "5g", mode: "substring" }]],
      claim: "5G towers spread the virus",
      targetStance: "disagree",
    });
    expect(serializeQuery(parseQuery(text))).toBe(text);
    expect(text.endsWith("\n")).toBe(true);
  });

  it("defaults keyword mode to substring", () => {
    const query = parseQuery(JSON.stringify({
      kind: "keyword_only",
      keywords: [[{ pattern: "covid" }]],
    }));
    expect(query.keywords![0][0].mode).toBe("substring");
  });

  it.each([
    ["not json", "not valid JSON"],
    ['["a"]', "must be a JSON object"],
    ['{"keywords": []}', "missing 'kind'"],
    ['{"kind": "vibes"}', "unknown query kind"],
    ['{"kind": "keyword_only", "keywords": [[{"pattern": "x"}]], "zap": 1}',
      "unknown fields"],
    ['{"kind": "keyword_only", "keywords": [[]]}', "non-empty"],
    ['{"kind": "keyword_only", "keywords": [[{"mode": "token"}]]}',
      "missing 'pattern'"],
    ['{"kind": "sentiment", "keywords": [[{"pattern": "x"}]]}',
      "target sentiment"],
    ['{"kind": "stance", "claim": "c", "target_stance": "discuss"}',
      "agree or disagree"],
  ])("rejects %s", (text, needle) => {
    expect(() => parseQuery(text)).toThrowError(needle);
  });

  it("rejects sentiment fields on a keyword query", () => {
    expect(() => validateQuery({
      kind: "keyword_only",
      keywords: [[{ pattern: "x", mode: "substring" }]],
      targetSentiment: "negative",
    })).toThrowError(SpecError);
  });

  it("requires a named tag on at least one aspect requirement", () => {
    expect(() => validateQuery({
      kind: "aspect",
      keywords: [[{ pattern: "x", mode: "substring" }]],
      aspectRequirements: [
        { keywords: [{ pattern: "x", mode: "substring" }], tag: "any" },
      ],
    })).toThrowError("name a tag");
  });
});

describe("claim templates", () => {
  const presetFile = parseTemplates(TREATMENT_CLAIMS_PRESET);

  it("embedded preset matches the packaged cookbook copy", () => {
    const packaged = readFileSync(join(COOKBOOK, "covidcq.json"), "utf-8");
    expect(TREATMENT_CLAIMS_PRESET).toBe(packaged);
  });

  it("expands the preset to the nine expected claims", () => {
    const expected = readFileSync(join(GOLDEN, "covidcq_claims.txt"), "utf-8")
      .split("\n").filter((line) => line !== "");
    const claims = presetFile.templates.flatMap((t) => expandClaims(t));
    expect(claims).toEqual(expected);
    expect(claims[2]).toBe("hydroxychloroquine is a cure for COVID");
  });

  it("negated expansion matches the golden file", () => {
    const expected = readFileSync(
      join(GOLDEN, "covidcq_claims_negated.txt"), "utf-8")
      .split("\n").filter((line) => line !== "");
    const negated = presetFile.templates.flatMap((t) => expandClaims(t, {
      negate: true, negationPrefix: presetFile.negationPrefix,
    }));
    expect(negated).toEqual(expected);
    for (const claim of negated) {
      expect(claim.startsWith("It is not the case that")).toBe(true);
    }
  });

  it("lists variables in first-appearance order", () => {
    expect(templateVariables({
      pattern: "⟨b⟩ then ⟨a⟩ then ⟨b⟩",
      bindings: { a: [], b: [] },
    })).toEqual(["b", "a"]);
  });

  it("repeated variable takes one binding per claim", () => {
    const claims = expandClaims({
      pattern: "⟨x⟩ and ⟨x⟩",
      bindings: { x: ["a", "b"] },
    });
    expect(claims).toEqual(["a and a", "b and b"]);
  });

  it("first variable varies slowest", () => {
    const claims = expandClaims({
      pattern: "⟨x⟩ cures ⟨c⟩",
      bindings: { x: ["garlic", "water"], c: ["COVID", "coronavirus"] },
    });
    expect(claims).toEqual([
      "garlic cures COVID",
      "garlic cures coronavirus",
      "water cures COVID",
      "water cures coronavirus",
    ]);
  });

  it("unbound variable is an error", () => {
    expect(() => expandClaims({ pattern: "⟨x⟩ helps", bindings: {} }))
      .toThrowError("unbound template variable x");
  });

  it("custom negation prefix is preserved on round-trip", () => {
    const text = serializeTemplates({
      negationPrefix: "Nope:",
      templates: [{ pattern: "water helps", bindings: {} }],
    });
    const reparsed = parseTemplates(text);
    expect(reparsed.negationPrefix).toBe("Nope:");
    expect(serializeTemplates(reparsed)).toBe(text);
    expect(expandClaims(reparsed.templates[0], {
      negate: true, negationPrefix: reparsed.negationPrefix,
    })).toEqual(["Nope: water helps"]);
  });

  it("omits the default negation prefix from serialized files", () => {
    const text = serializeTemplates({
      negationPrefix: "It is not the case that",
      templates: [{ pattern: "x", bindings: {} }],
    });
    expect(text.includes("negation_prefix")).toBe(false);
  });
});
