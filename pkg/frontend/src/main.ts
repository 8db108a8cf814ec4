// Console bootstrap: wires the query builder, result list, metric panel
// and claim-template editor to one service session.

import { ResultPage, ServiceClient, ServiceError } from "./api.js";
import { PRESETS } from "./presets.js";
import { Query, expandClaims, parseTemplates } from "./queryspec.js";
import { SessionState } from "./state.js";
import {
  Draft,
  emptyDraft,
  renderBuilder,
  renderError,
  renderHistory,
  renderMetricPanel,
  renderResults,
} from "./ui.js";

const PAGE_SIZE = 50;

function serviceBase(): string {
  const param = new URLSearchParams(window.location.search).get("service");
  return param ?? window.location.origin;
}

interface Panels {
  builder: HTMLElement;
  results: HTMLElement;
  metrics: HTMLElement;
  history: HTMLElement;
  error: HTMLElement;
  corpus: HTMLElement;
  claims: HTMLElement;
}

function panel(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id} container`);
  return node;
}

class Console {
  private client = new ServiceClient(serviceBase());
  private state = new SessionState(this.client);
  private draft: Draft = emptyDraft();
  private page: ResultPage | null = null;

  constructor(private panels: Panels) {}

  start(): void {
    this.renderCorpusPicker();
    this.renderAll();
    this.renderClaimEditor();
  }

  private renderAll(): void {
    renderBuilder(this.panels.builder, this.draft, {
      onRun: (query) => void this.run(query),
    });
    renderResults(this.panels.results, this.page, this.state.feedback(), {
      onMark: (docId, mark) => void this.mark(docId, mark),
    });
    renderMetricPanel(this.panels.metrics, this.state.feedback(),
      this.page ? this.page.rows.map((r) => r.doc_id) : [],
      this.state.history());
    renderHistory(this.panels.history, this.state.history());
  }

  private showError(e: unknown): void {
    const message = e instanceof ServiceError
      ? `${e.message}${e.detail ? ` (${JSON.stringify(e.detail)})` : ""}`
      : e instanceof Error ? e.message : String(e);
    renderError(this.panels.error, message);
  }

  private renderCorpusPicker(): void {
    const root = this.panels.corpus;
    const input = document.createElement("input");
    input.type = "file";
    const format = document.createElement("select");
    for (const fmt of ["jsonl", "csv"]) {
      const option = document.createElement("option");
      option.value = fmt;
      option.textContent = fmt;
      format.appendChild(option);
    }
    const upload = document.createElement("button");
    upload.textContent = "upload corpus";
    upload.addEventListener("click", () => void (async () => {
      const file = input.files?.[0];
      if (!file) return;
      renderError(this.panels.error, null);
      try {
        const meta = await this.client.uploadCorpus(
          file, file.name, format.value as "jsonl" | "csv");
        await this.state.open(meta.corpus_id);
        this.page = null;
        this.renderAll();
      } catch (e) {
        this.showError(e);
      }
    })());
    root.appendChild(input);
    root.appendChild(format);
    root.appendChild(upload);
  }

  private async run(query: Query): Promise<void> {
    renderError(this.panels.error, null);
    try {
      const search = await this.state.runSearch(query);
      if (search.status === "failed") {
        renderError(this.panels.error, search.error ?? "search failed");
        this.page = null;
      } else {
        this.page = await this.client.getResults(search.search_id, 0, PAGE_SIZE);
      }
      this.renderAll();
    } catch (e) {
      this.showError(e);
    }
  }

  private async mark(docId: string,
                     mark: "relevant" | "irrelevant" | "clear"): Promise<void> {
    try {
      await this.state.mark(docId, mark);
      this.renderAll();
    } catch (e) {
      this.showError(e);
    }
  }

  private renderClaimEditor(): void {
    const root = this.panels.claims;
    const picker = document.createElement("select");
    for (const preset of PRESETS) {
      const option = document.createElement("option");
      option.value = preset.name;
      option.textContent = preset.name;
      picker.appendChild(option);
    }
    const editor = document.createElement("textarea");
    editor.rows = 12;
    editor.value = PRESETS[0].content;
    picker.addEventListener("change", () => {
      const preset = PRESETS.find((p) => p.name === picker.value);
      if (preset) editor.value = preset.content;
    });

    const negate = document.createElement("input");
    negate.type = "checkbox";
    const negateLabel = document.createElement("label");
    negateLabel.textContent = "negate";
    negateLabel.prepend(negate);

    const output = document.createElement("pre");
    const expand = document.createElement("button");
    expand.textContent = "expand claims";
    expand.addEventListener("click", () => {
      try {
        const file = parseTemplates(editor.value);
        const claims = file.templates.flatMap((t) => expandClaims(t, {
          negate: negate.checked,
          negationPrefix: file.negationPrefix,
        }));
        output.textContent = claims.join("\n");
      } catch (e) {
        output.textContent = e instanceof Error ? e.message : String(e);
      }
    });

    root.appendChild(picker);
    root.appendChild(editor);
    root.appendChild(negateLabel);
    root.appendChild(expand);
    root.appendChild(output);
  }
}

window.addEventListener("DOMContentLoaded", () => {
  new Console({
    builder: panel("builder"),
    results: panel("results"),
    metrics: panel("metrics"),
    history: panel("history"),
    error: panel("error"),
    corpus: panel("corpus"),
    claims: panel("claims"),
  }).start();
});
