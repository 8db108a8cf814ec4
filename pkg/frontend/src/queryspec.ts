// Query spec wire model shared with the service and CLI.
//
// Serialization is canonical: fixed key order, two-space indent, one
// trailing newline. Anything we parse must re-serialize byte-identically,
// so the editor can load a spec file and save it back without churn.

export type MatchMode = "substring" | "token";
export type SentimentLabel = "positive" | "neutral" | "negative";
export type StanceLabel = "agree" | "disagree" | "discuss" | "unrelated";
export type QueryKind = "keyword_only" | "sentiment" | "aspect" | "stance";

export const ANY_TAG = "any";
export type AspectTagChoice = typeof ANY_TAG | SentimentLabel;

export const NEGATION_PREFIX = "It is not the case that";

export interface Keyword {
  pattern: string;
  mode: MatchMode;
}

// OR within a group, AND across groups.
export type KeywordGroup = Keyword[];

export interface AspectRequirement {
  keywords: Keyword[];
  tag: AspectTagChoice;
}

export interface Query {
  kind: QueryKind;
  keywords?: KeywordGroup[];
  targetSentiment?: SentimentLabel;
  aspectRequirements?: AspectRequirement[];
  claim?: string;
  targetStance?: StanceLabel;
}

export interface SuiteRow {
  label: string;
  query: Query;
}

export interface ClaimTemplate {
  pattern: string;
  bindings: Record<string, string[]>;
}

export interface TemplateFile {
  negationPrefix: string;
  templates: ClaimTemplate[];
}

export class SpecError extends Error {}

const SENTIMENTS: SentimentLabel[] = ["positive", "neutral", "negative"];
const STANCES: StanceLabel[] = ["agree", "disagree", "discuss", "unrelated"];
const KINDS: QueryKind[] = ["keyword_only", "sentiment", "aspect", "stance"];

function isRecord(v: unknown): v is Record<string, unknown> {
  return typeof v === "object" && v !== null && !Array.isArray(v);
}

function noExtras(obj: Record<string, unknown>, allowed: string[], where: string) {
  const extras = Object.keys(obj).filter((k) => !allowed.includes(k));
  if (extras.length) {
    throw new SpecError(`${where}: unknown fields ${extras.join(", ")}`);
  }
}

function parseKeyword(raw: unknown, where: string): Keyword {
  if (!isRecord(raw)) throw new SpecError(`${where}: keyword must be an object`);
  noExtras(raw, ["pattern", "mode"], where);
  const pattern = raw.pattern;
  if (typeof pattern !== "string" || pattern === "") {
    throw new SpecError(`${where}: missing 'pattern'`);
  }
  const mode = raw.mode ?? "substring";
  if (mode !== "substring" && mode !== "token") {
    throw new SpecError(`${where}: unknown keyword mode ${String(mode)}`);
  }
  return { pattern, mode };
}

function parseGroups(raw: unknown, where: string): KeywordGroup[] {
  if (!Array.isArray(raw)) {
    throw new SpecError(`${where}: keywords must be a list of OR-groups`);
  }
  return raw.map((group, gi) => {
    if (!Array.isArray(group) || group.length === 0) {
      throw new SpecError(`${where}: group ${gi} must be a non-empty list`);
    }
    return group.map((kw) => parseKeyword(kw, where));
  });
}

export function queryFromWire(raw: unknown): Query {
  if (!isRecord(raw)) throw new SpecError("query must be a JSON object");
  const kind = raw.kind;
  if (kind === undefined) throw new SpecError("query is missing 'kind'");
  if (!KINDS.includes(kind as QueryKind)) {
    throw new SpecError(`unknown query kind ${String(kind)}`);
  }
  noExtras(raw, ["kind", "keywords", "target_sentiment",
    "aspect_requirements", "claim", "target_stance"], "query");

  const query: Query = { kind: kind as QueryKind };
  if (raw.keywords !== undefined) {
    query.keywords = parseGroups(raw.keywords, "query");
  }
  if (raw.target_sentiment !== undefined) {
    if (!SENTIMENTS.includes(raw.target_sentiment as SentimentLabel)) {
      throw new SpecError(`unknown sentiment label ${String(raw.target_sentiment)}`);
    }
    query.targetSentiment = raw.target_sentiment as SentimentLabel;
  }
  if (raw.aspect_requirements !== undefined) {
    if (!Array.isArray(raw.aspect_requirements)) {
      throw new SpecError("aspect_requirements must be a list");
    }
    query.aspectRequirements = raw.aspect_requirements.map((r) => {
      if (!isRecord(r)) throw new SpecError("aspect requirement must be an object");
      noExtras(r, ["keywords", "tag"], "aspect requirement");
      if (r.keywords === undefined || r.tag === undefined) {
        throw new SpecError("aspect requirement needs 'keywords' and 'tag'");
      }
      if (!Array.isArray(r.keywords) || r.keywords.length === 0) {
        throw new SpecError("aspect requirement needs at least one keyword");
      }
      const tag = r.tag;
      if (tag !== ANY_TAG && !SENTIMENTS.includes(tag as SentimentLabel)) {
        throw new SpecError(`unknown aspect tag ${String(tag)}`);
      }
      return {
        keywords: r.keywords.map((kw) => parseKeyword(kw, "aspect requirement")),
        tag: tag as AspectTagChoice,
      };
    });
  }
  if (raw.claim !== undefined) {
    if (typeof raw.claim !== "string") throw new SpecError("claim must be a string");
    query.claim = raw.claim;
  }
  if (raw.target_stance !== undefined) {
    if (!STANCES.includes(raw.target_stance as StanceLabel)) {
      throw new SpecError(`unknown stance label ${String(raw.target_stance)}`);
    }
    query.targetStance = raw.target_stance as StanceLabel;
  }
  validateQuery(query);
  return query;
}

// Mirrors the server-side shape checks so a bad draft fails before it is
// posted. The service stays authoritative; this only catches the obvious.
export function validateQuery(query: Query): void {
  if (query.kind === "stance") {
    if (!query.claim) throw new SpecError("stance query needs a claim");
    if (query.targetStance !== "agree" && query.targetStance !== "disagree") {
      throw new SpecError("stance target must be agree or disagree");
    }
  } else {
    if (query.keywords === undefined) {
      throw new SpecError(`${query.kind} query needs a keyword expression`);
    }
    if (query.claim !== undefined || query.targetStance !== undefined) {
      throw new SpecError(`claim fields are not valid on a ${query.kind} query`);
    }
  }
  if (query.kind === "sentiment") {
    if (query.targetSentiment === undefined) {
      throw new SpecError("sentiment query needs a target sentiment");
    }
  } else if (query.targetSentiment !== undefined) {
    throw new SpecError(`target_sentiment is not valid on a ${query.kind} query`);
  }
  if (query.kind === "aspect") {
    const reqs = query.aspectRequirements ?? [];
    if (reqs.length === 0) {
      throw new SpecError("aspect query needs at least one requirement");
    }
    if (reqs.every((r) => r.tag === ANY_TAG)) {
      throw new SpecError("at least one aspect requirement must name a tag");
    }
  } else if (query.aspectRequirements !== undefined) {
    throw new SpecError(`aspect_requirements are not valid on a ${query.kind} query`);
  }
}

export function queryToWire(query: Query): Record<string, unknown> {
  validateQuery(query);
  const wire: Record<string, unknown> = { kind: query.kind };
  if (query.keywords !== undefined) {
    wire.keywords = query.keywords.map((group) =>
      group.map((kw) => ({ pattern: kw.pattern, mode: kw.mode })));
  }
  if (query.targetSentiment !== undefined) {
    wire.target_sentiment = query.targetSentiment;
  }
  if (query.aspectRequirements !== undefined) {
    wire.aspect_requirements = query.aspectRequirements.map((r) => ({
      keywords: r.keywords.map((kw) => ({ pattern: kw.pattern, mode: kw.mode })),
      tag: r.tag,
    }));
  }
  if (query.claim !== undefined) wire.claim = query.claim;
  if (query.targetStance !== undefined) wire.target_stance = query.targetStance;
  return wire;
}

function canonical(obj: unknown): string {
  return JSON.stringify(obj, null, 2) + "\n";
}

export function serializeQuery(query: Query): string {
  return canonical(queryToWire(query));
}

export function parseQuery(text: string): Query {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (e) {
    throw new SpecError(`query spec is not valid JSON: ${(e as Error).message}`);
  }
  return queryFromWire(raw);
}

// -- suites -----------------------------------------------------------

export function parseSuite(text: string): SuiteRow[] {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (e) {
    throw new SpecError(`suite file is not valid JSON: ${(e as Error).message}`);
  }
  if (!isRecord(raw)) throw new SpecError("suite file must be a JSON object");
  noExtras(raw, ["rows"], "suite file");
  if (!Array.isArray(raw.rows)) throw new SpecError("suite file needs a 'rows' list");
  return raw.rows.map((row) => {
    if (!isRecord(row)) throw new SpecError("suite row must be an object");
    noExtras(row, ["label", "query"], "suite row");
    if (row.label === undefined || row.query === undefined) {
      throw new SpecError("suite row needs 'label' and 'query'");
    }
    if (typeof row.label !== "string") throw new SpecError("label must be a string");
    return { label: row.label, query: queryFromWire(row.query) };
  });
}

export function serializeSuite(rows: SuiteRow[]): string {
  return canonical({
    rows: rows.map((row) => ({ label: row.label, query: queryToWire(row.query) })),
  });
}

// -- claim templates ---------------------------------------------------

export function parseTemplates(text: string): TemplateFile {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (e) {
    throw new SpecError(`template file is not valid JSON: ${(e as Error).message}`);
  }
  if (!isRecord(raw)) throw new SpecError("template file must be a JSON object");
  noExtras(raw, ["negation_prefix", "templates"], "template file");
  const prefix = raw.negation_prefix ?? NEGATION_PREFIX;
  if (typeof prefix !== "string") {
    throw new SpecError("negation_prefix must be a string");
  }
  if (!Array.isArray(raw.templates)) {
    throw new SpecError("template file needs a 'templates' list");
  }
  const templates = raw.templates.map((t) => {
    if (!isRecord(t)) throw new SpecError("template must be an object");
    noExtras(t, ["pattern", "bindings"], "template");
    if (typeof t.pattern !== "string") throw new SpecError("template missing 'pattern'");
    const bindings: Record<string, string[]> = {};
    const rawBindings = t.bindings ?? {};
    if (!isRecord(rawBindings)) throw new SpecError("bindings must be an object");
    for (const [name, values] of Object.entries(rawBindings)) {
      if (!Array.isArray(values) || values.some((v) => typeof v !== "string")) {
        throw new SpecError("bindings values must be string lists");
      }
      bindings[name] = values as string[];
    }
    return { pattern: t.pattern, bindings };
  });
  return { negationPrefix: prefix, templates };
}

export function serializeTemplates(file: TemplateFile): string {
  const obj: Record<string, unknown> = {};
  if (file.negationPrefix !== NEGATION_PREFIX) {
    obj.negation_prefix = file.negationPrefix;
  }
  obj.templates = file.templates.map((t) => ({
    pattern: t.pattern,
    bindings: t.bindings,
  }));
  return canonical(obj);
}

const VAR_RE = /⟨([^⟨⟩]*)⟩/g;

export function templateVariables(template: ClaimTemplate): string[] {
  const seen: string[] = [];
  for (const m of template.pattern.matchAll(VAR_RE)) {
    if (!seen.includes(m[1])) seen.push(m[1]);
  }
  return seen;
}

function negate(claim: string, prefix: string): string {
  if (!claim) return prefix;
  return `${prefix} ${claim[0].toLowerCase()}${claim.slice(1)}`;
}

// Cross-product expansion; the first variable varies slowest so claims
// come out in the order an analyst would write them.
export function expandClaims(
  template: ClaimTemplate,
  options: { negate?: boolean; negationPrefix?: string } = {},
): string[] {
  const names = templateVariables(template);
  for (const name of names) {
    if (!(name in template.bindings)) {
      throw new SpecError(`unbound template variable ${name}`);
    }
  }
  let combos: string[][] = [[]];
  for (const name of names) {
    const next: string[][] = [];
    for (const combo of combos) {
      for (const value of template.bindings[name]) {
        next.push([...combo, value]);
      }
    }
    combos = next;
  }
  const prefix = options.negationPrefix ?? NEGATION_PREFIX;
  return combos.map((combo) => {
    let claim = template.pattern;
    names.forEach((name, i) => {
      claim = claim.split(`⟨${name}⟩`).join(combo[i]);
    });
    return options.negate ? negate(claim, prefix) : claim;
  });
}
