// Typed client for the triage service HTTP API. Every number the console
// shows comes from these responses; nothing is recomputed locally.

import { queryToWire, Query } from "./queryspec.js";

export interface CorpusMeta {
    corpus_id: string;
    format: string;
    documents: number;
    created_at: number;
    created?: boolean;
}

export interface SessionView {
    session_id: string;
    corpus_id: string;
    history: { query: unknown; result_ids: string[]; timestamp: number }[];
    feedback: Record<string, string>;
}

export interface SearchView {
    search_id: string;
    session_id: string;
    corpus_id: string;
    backend: string;
    query: unknown;
    status: "pending" | "running" | "done" | "failed";
    created_at: number;
    error?: string;
    result_count?: number;
}

export interface Rationale {
    doc_id: string;
    matched_spans: [number, number, string][];
    classifier_output: string;
    rule_fired: string;
}

export interface ResultRow {
    doc_id: string;
    text: string;
    rationale: Rationale;
}

export interface ResultPage {
    search_id: string;
    total: number;
    offset: number;
    rows: ResultRow[];
    skipped: string[];
}

export interface MetricsView {
    search_id: string;
    precision: number;
    recall: number;
    f1: number;
    tp: number;
    fp: number;
    fn: number;
    tn: number;
    skipped: number;
}

export interface BackendInfo {
    name: string;
    type: string;
    capabilities: string[];
}

export class ServiceError extends Error {
    constructor(
        message: string,
        public status: number,
        public detail?: unknown,
    ) {
        super(message);
    }
}

async function decode(resp: Response): Promise<any> {
    const body = await resp.json().catch(() => ({}));
    if (!resp.ok) {
        throw new ServiceError(
            body.error ?? `request failed with status ${resp.status}`,
            resp.status,
            body.detail,
        );
    }
    return body;
}

export class ServiceClient {
    constructor(private base: string) {
        this.base = base.replace(/\/+$/, "");
    }

    private async get(path: string): Promise<any> {
        return decode(await fetch(this.base + path));
    }

    private async post(path: string, body: unknown): Promise<any> {
        return decode(await fetch(this.base + path, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(body),
        }));
    }

    async uploadCorpus(data: Blob | string, filename: string,
                       format: "jsonl" | "csv"): Promise<CorpusMeta> {
        const form = new FormData();
        const blob = typeof data === "string" ? new Blob([data]) : data;
        form.append("file", blob, filename);
        form.append("format", format);
        return decode(await fetch(`${this.base}/corpora`, {
            method: "POST",
            body: form,
        }));
    }

    async corpusMeta(corpusId: string): Promise<CorpusMeta> {
        return this.get(`/corpora/${corpusId}`);
    }

    async createSession(corpusId: string): Promise<SessionView> {
        return this.post("/sessions", { corpus_id: corpusId });
    }

    async getSession(sessionId: string): Promise<SessionView> {
        return this.get(`/sessions/${sessionId}`);
    }

    async submitSearch(sessionId: string, query: Query,
                       backend?: string): Promise<SearchView> {
        const body: Record<string, unknown> = { query: queryToWire(query) };
        if (backend !== undefined) body.backend = backend;
        return this.post(`/sessions/${sessionId}/searches`, body);
    }

    async getSearch(searchId: string): Promise<SearchView> {
        return this.get(`/searches/${searchId}`);
    }

    async getResults(searchId: string, offset = 0,
                     limit = 50): Promise<ResultPage> {
        return this.get(`/searches/${searchId}/results?offset=${offset}&limit=${limit}`);
    }

    async sendFeedback(sessionId: string, docId: string,
                       mark: "relevant" | "irrelevant" | "clear"): Promise<SessionView> {
        return this.post(`/sessions/${sessionId}/feedback`,
            { doc_id: docId, mark });
    }

    async metrics(searchId: string,
                  gold?: { doc_id: string; relevant: boolean }[]): Promise<MetricsView> {
        const body = gold === undefined ? {} : { gold };
        return this.post(`/searches/${searchId}/metrics`, body);
    }

    async listBackends(): Promise<BackendInfo[]> {
        const body = await this.get("/backends");
        return body.backends;
    }
}
