import { describe, expect, it } from "vitest";

import { ServiceClient } from "../src/api.js";
import {
  SearchTimeout,
  feedbackPrecision,
  formatRatio,
  pollSearch,
} from "../src/state.js";
import { highlightSegments } from "../src/ui.js";

describe("feedback precision display math", () => {
  const shown = Array.from({ length: 10 }, (_, i) => `d${i}`);

  it("3 relevant of 10 shown reads 0.30", () => {
    const feedback = { d0: "relevant", d4: "relevant", d9: "relevant" };
    expect(feedbackPrecision(feedback, shown)).toBe(0.3);
    expect(formatRatio(feedbackPrecision(feedback, shown))).toBe("0.30");
  });

  it("no marks shows unmarked, not zero", () => {
    expect(feedbackPrecision({}, shown)).toBeNull();
    expect(formatRatio(null)).toBe("unmarked");
  });

  it("irrelevant marks count against the shown total", () => {
    const feedback = { d0: "relevant", d1: "irrelevant" };
    expect(feedbackPrecision(feedback, shown)).toBe(0.1);
  });

  it("marks on documents not shown do not count", () => {
    const feedback = { zz: "relevant" };
    expect(feedbackPrecision(feedback, shown)).toBeNull();
  });

  it("nothing shown is unmarked", () => {
    expect(feedbackPrecision({ d0: "relevant" }, [])).toBeNull();
  });
});

function fakeClient(statuses: string[]): ServiceClient {
  let i = 0;
  return {
    getSearch: async () => {
      const status = statuses[Math.min(i, statuses.length - 1)];
      i += 1;
      return { search_id: "q1", status };
    },
  } as unknown as ServiceClient;
}

describe("search polling", () => {
  it("waits with multiplicative backoff until done", async () => {
    const waits: number[] = [];
    const view = await pollSearch(fakeClient(["pending", "running", "done"]),
      "q1", {
        intervalMs: 10,
        factor: 1.5,
        sleep: async (ms) => { waits.push(ms); },
      });
    expect(view.status).toBe("done");
    expect(waits).toEqual([10, 15]);
  });

  it("caps the interval", async () => {
    const waits: number[] = [];
    await pollSearch(
      fakeClient(["running", "running", "running", "running", "done"]),
      "q1", {
        intervalMs: 10,
        factor: 10,
        maxIntervalMs: 25,
        sleep: async (ms) => { waits.push(ms); },
      });
    expect(waits).toEqual([10, 25, 25, 25]);
  });

  it("returns failed searches without throwing", async () => {
    const view = await pollSearch(fakeClient(["failed"]), "q1");
    expect(view.status).toBe("failed");
  });

  it("gives up after the timeout", async () => {
    await expect(pollSearch(fakeClient(["running"]), "q1", {
      intervalMs: 1,
      timeoutMs: 20,
    })).rejects.toThrowError(SearchTimeout);
  });
});

describe("highlight segmentation", () => {
  it("merges overlapping spans", () => {
    const segments = highlightSegments("abcdef",
      [[0, 2, "ab"], [1, 3, "bc"]]);
    expect(segments).toEqual([
      { text: "abc", hit: true },
      { text: "def", hit: false },
    ]);
  });

  it("keeps disjoint spans separate", () => {
    const segments = highlightSegments("covid and vaccine",
      [[0, 5, "covid"], [10, 17, "vaccine"]]);
    expect(segments).toEqual([
      { text: "covid", hit: true },
      { text: " and ", hit: false },
      { text: "vaccine", hit: true },
    ]);
  });

  it("no spans yields one plain segment", () => {
    expect(highlightSegments("plain", [])).toEqual([
      { text: "plain", hit: false },
    ]);
  });

  it("unsorted input is handled", () => {
    const segments = highlightSegments("abcdef",
      [[4, 6, "ef"], [0, 2, "ab"]]);
    expect(segments.map((s) => s.hit)).toEqual([true, false, true]);
  });
});
