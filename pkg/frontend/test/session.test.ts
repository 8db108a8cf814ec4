// Scripted analyst loop against a real service process: run a search,
// mark 3 of the 10 shown documents, revise, run again. Every number
// asserted here is read back from service responses.

import { ChildProcess, spawn } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ServiceClient, ServiceError } from "../src/api.js";
import { feedbackPrecision, formatRatio, SessionState } from "../src/state.js";
import { Query } from "../src/queryspec.js";

const POLL = { intervalMs: 50, factor: 1.2 };

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const server = createServer();
    server.listen(0, "127.0.0.1", () => {
      const address = server.address();
      if (address === null || typeof address === "string") {
        reject(new Error("no port assigned"));
        return;
      }
      server.close(() => resolve(address.port));
    });
  });
}

async function waitForService(base: string): Promise<void> {
  const deadline = Date.now() + 20000;
  for (;;) {
    try {
      const resp = await fetch(`${base}/backends`);
      if (resp.ok) return;
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) throw new Error(`service at ${base} never came up`);
    await new Promise((r) => setTimeout(r, 100));
  }
}

// 10 vaccine documents (4 with clearly negative wording) plus 2 noise
// documents the keyword prefilter should exclude. Gold mirrors the
// negative-sentiment docs so the service metrics are checkable too.
function corpusLines(): string {
  const rows: object[] = [];
  for (let i = 0; i < 10; i++) {
    const negative = i < 4;
    rows.push({
      id: `v${i}`,
      text: negative
        ? `vaccine story ${i} is terrible and harmful`
        : `vaccine story ${i} works fine`,
      gold: negative,
    });
  }
  rows.push({ id: "n0", text: "weather report for tuesday", gold: false });
  rows.push({ id: "n1", text: "sports scores roundup", gold: false });
  return rows.map((r) => JSON.stringify(r)).join("\n") + "\n";
}

describe("scripted live session", () => {
  let proc: ChildProcess;
  let workDir: string;
  let base: string;
  let client: ServiceClient;

  beforeAll(async () => {
    const port = await freePort();
    base = `http://127.0.0.1:${port}`;
    workDir = mkdtempSync(join(tmpdir(), "console-test-"));
    const config = join(workDir, "service.toml");
    writeFileSync(config, [
      "[server]",
      'host = "127.0.0.1"',
      `port = ${port}`,
      `store_dir = "${join(workDir, "store")}"`,
      "",
    ].join("\n"));
    proc = spawn("python3", ["-m", "infotriage.cli", "serve",
      "--config", config], { stdio: "ignore" });
    await waitForService(base);
    client = new ServiceClient(base);
  });

  afterAll(() => {
    proc?.kill("SIGKILL");
    rmSync(workDir, { recursive: true, force: true });
  });

  it("run, mark 3 of 10, revise, re-run", async () => {
    const meta = await client.uploadCorpus(corpusLines(), "docs.jsonl", "jsonl");
    expect(meta.documents).toBe(12);

    const state = new SessionState(client);
    await state.open(meta.corpus_id);

    const broad: Query = {
      kind: "keyword_only",
      keywords: [[{ pattern: "vaccine", mode: "substring" }]],
    };
    const first = await state.runSearch(broad, undefined, POLL);
    expect(first.status).toBe("done");

    const page = await client.getResults(first.search_id, 0, 50);
    expect(page.total).toBe(10);
    const shownIds = page.rows.map((row) => row.doc_id);
    expect(shownIds).toHaveLength(10);

    // every row carries a service-side rationale
    for (const row of page.rows) {
      expect(row.rationale.rule_fired).toBe("keyword-only");
      expect(row.rationale.matched_spans.length).toBeGreaterThan(0);
    }

    // no marks yet: the panel would say "unmarked"
    expect(feedbackPrecision(state.feedback(), shownIds)).toBeNull();

    for (const docId of ["v0", "v1", "v2"]) {
      await state.mark(docId, "relevant");
    }
    const ratio = feedbackPrecision(state.feedback(), shownIds);
    expect(ratio).toBe(0.3);
    expect(formatRatio(ratio)).toBe("0.30");

    const revised: Query = {
      kind: "sentiment",
      keywords: [[{ pattern: "vaccine", mode: "substring" }]],
      targetSentiment: "negative",
    };
    const second = await state.runSearch(revised, undefined, POLL);
    expect(second.status).toBe("done");

    const history = state.history();
    expect(history).toHaveLength(2);
    expect((history[0].query as { kind: string }).kind).toBe("keyword_only");
    expect((history[1].query as { kind: string }).kind).toBe("sentiment");
    expect(history[0].result_ids).toHaveLength(10);
    expect(history[1].result_ids).toEqual(["v0", "v1", "v2", "v3"]);

    // feedback marks survive the revision
    expect(Object.keys(state.feedback()).sort()).toEqual(["v0", "v1", "v2"]);

    // pipeline metrics come from the service, not local math
    const metrics = await client.metrics(second.search_id);
    expect(metrics.precision).toBe(1.0);
    expect(metrics.recall).toBe(1.0);
    expect(metrics.f1).toBe(1.0);
    expect(metrics.tp).toBe(4);
  });

  it("surfaces service errors with status and detail", async () => {
    const meta = await client.uploadCorpus(corpusLines(), "docs.jsonl", "jsonl");
    const state = new SessionState(client);
    await state.open(meta.corpus_id);
    const query: Query = {
      kind: "keyword_only",
      keywords: [[{ pattern: "vaccine", mode: "substring" }]],
    };
    try {
      await state.runSearch(query, "no-such-backend", POLL);
      expect.unreachable("unknown backend must be rejected");
    } catch (e) {
      expect(e).toBeInstanceOf(ServiceError);
      expect((e as ServiceError).status).toBe(404);
    }
  });

  it("clearing a mark removes it from the service view", async () => {
    const meta = await client.uploadCorpus(
      '{"id": "solo", "text": "one vaccine doc"}\n', "one.jsonl", "jsonl");
    const state = new SessionState(client);
    await state.open(meta.corpus_id);
    await state.mark("solo", "relevant");
    expect(state.feedback()).toEqual({ solo: "relevant" });
    await state.mark("solo", "clear");
    expect(state.feedback()).toEqual({});
  });
});
