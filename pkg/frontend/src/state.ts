// Session state and the small amount of display math the console is
// allowed to do itself: the marks-as-gold ratio over what is on screen.
// Pipeline numbers (search results, P/R/F1 against gold) always come
// from the service.

import { SearchView, ServiceClient, SessionView } from "./api.js";
import { Query } from "./queryspec.js";

export interface PollOptions {
  intervalMs?: number;   // first wait
  factor?: number;       // backoff multiplier
  maxIntervalMs?: number;
  timeoutMs?: number;
  sleep?: (ms: number) => Promise<void>;
}

const defaultSleep = (ms: number) =>
  new Promise<void>((resolve) => setTimeout(resolve, ms));

export class SearchTimeout extends Error {}

// Poll a search until it settles. 1 s between polls, backing off so a
// long search does not hammer the service.
export async function pollSearch(
  client: ServiceClient,
  searchId: string,
  options: PollOptions = {},
): Promise<SearchView> {
  const sleep = options.sleep ?? defaultSleep;
  const factor = options.factor ?? 1.5;
  const max = options.maxIntervalMs ?? 5000;
  const timeout = options.timeoutMs ?? 120000;
  let interval = options.intervalMs ?? 1000;

  const started = Date.now();
  for (;;) {
    const view = await client.getSearch(searchId);
    if (view.status === "done" || view.status === "failed") return view;
    if (Date.now() - started > timeout) {
      throw new SearchTimeout(`search ${searchId} still ${view.status}`);
    }
    await sleep(interval);
    interval = Math.min(interval * factor, max);
  }
}

export type FeedbackMark = "relevant" | "irrelevant";

// Share of the currently shown documents that the analyst marked
// relevant. Null when nothing is marked yet, so the panel can say
// "unmarked" instead of a misleading zero.
export function feedbackPrecision(
  feedback: Record<string, string>,
  shownIds: string[],
): number | null {
  if (shownIds.length === 0) return null;
  const marked = shownIds.filter((id) => id in feedback);
  if (marked.length === 0) return null;
  const relevant = shownIds.filter((id) => feedback[id] === "relevant");
  return relevant.length / shownIds.length;
}

export function formatRatio(value: number | null): string {
  return value === null ? "unmarked" : value.toFixed(2);
}

export interface HistoryEntry {
  query: unknown;
  result_ids: string[];
  timestamp: number;
}

// One analyst loop: draft -> run -> inspect -> mark -> revise. The
// console keeps only ids and the latest service views; re-fetching the
// session after every write keeps optimistic state honest.
export class SessionState {
  session: SessionView | null = null;
  lastSearch: SearchView | null = null;

  constructor(private client: ServiceClient) {}

  async open(corpusId: string): Promise<SessionView> {
    this.session = await this.client.createSession(corpusId);
    return this.session;
  }

  async refresh(): Promise<SessionView> {
    if (!this.session) throw new Error("no session open");
    this.session = await this.client.getSession(this.session.session_id);
    return this.session;
  }

  async runSearch(query: Query, backend?: string,
                  poll: PollOptions = {}): Promise<SearchView> {
    if (!this.session) throw new Error("no session open");
    const accepted = await this.client.submitSearch(
      this.session.session_id, query, backend);
    this.lastSearch = await pollSearch(this.client, accepted.search_id, poll);
    await this.refresh();
    return this.lastSearch;
  }

  async mark(docId: string, mark: FeedbackMark | "clear"): Promise<SessionView> {
    if (!this.session) throw new Error("no session open");
    this.session = await this.client.sendFeedback(
      this.session.session_id, docId, mark);
    return this.session;
  }

  history(): HistoryEntry[] {
    return this.session ? this.session.history as HistoryEntry[] : [];
  }

  feedback(): Record<string, string> {
    return this.session ? this.session.feedback : {};
  }
}
