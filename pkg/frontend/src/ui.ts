// DOM rendering for the analyst console. Plain elements, no framework;
// each render function replaces the contents of its container.

import { Rationale, ResultPage, ResultRow } from "./api.js";
import {
  ANY_TAG,
  AspectRequirement,
  AspectTagChoice,
  Keyword,
  MatchMode,
  Query,
  QueryKind,
  SentimentLabel,
  SpecError,
  StanceLabel,
  serializeQuery,
} from "./queryspec.js";
import { feedbackPrecision, formatRatio } from "./state.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function clear(node: HTMLElement) {
  while (node.firstChild) node.removeChild(node.firstChild);
}

// -- query builder ------------------------------------------------------

export interface DraftKeyword {
  pattern: string;
  mode: MatchMode;
}

export interface Draft {
  kind: QueryKind;
  groups: DraftKeyword[][];
  targetSentiment: SentimentLabel;
  aspectRequirements: { keywords: DraftKeyword[]; tag: AspectTagChoice }[];
  claim: string;
  targetStance: "agree" | "disagree";
  negated: boolean;
}

export function emptyDraft(): Draft {
  return {
    kind: "keyword_only",
    groups: [[{ pattern: "", mode: "substring" }]],
    targetSentiment: "negative",
    aspectRequirements: [],
    claim: "",
    targetStance: "agree",
    negated: false,
  };
}

// Lowercase, collapse runs of whitespace, trim. The service applies the
// full cleaning pass; this just keeps obvious junk out of the chips.
function tidyPattern(raw: string): string {
  return raw.toLowerCase().replace(/\s+/g, " ").trim();
}

export function draftToQuery(draft: Draft): Query {
  const groups = draft.groups
    .map((group) => group
      .map((kw): Keyword => ({ pattern: tidyPattern(kw.pattern), mode: kw.mode }))
      .filter((kw) => kw.pattern !== ""))
    .filter((group) => group.length > 0);

  if (draft.kind === "stance") {
    const query: Query = {
      kind: "stance",
      claim: draft.claim.trim(),
      targetStance: draft.targetStance,
    };
    if (groups.length > 0) query.keywords = groups;
    return query;
  }
  if (groups.length === 0) {
    throw new SpecError("add at least one keyword");
  }
  if (draft.kind === "sentiment") {
    return { kind: "sentiment", keywords: groups,
             targetSentiment: draft.targetSentiment };
  }
  if (draft.kind === "aspect") {
    const reqs: AspectRequirement[] = draft.aspectRequirements.map((r) => ({
      keywords: r.keywords
        .map((kw): Keyword => ({ pattern: tidyPattern(kw.pattern), mode: kw.mode }))
        .filter((kw) => kw.pattern !== ""),
      tag: r.tag,
    })).filter((r) => r.keywords.length > 0);
    return { kind: "aspect", keywords: groups, aspectRequirements: reqs };
  }
  return { kind: "keyword_only", keywords: groups };
}

export interface BuilderCallbacks {
  onRun: (query: Query) => void;
}

export function renderBuilder(root: HTMLElement, draft: Draft,
                              callbacks: BuilderCallbacks): void {
  clear(root);
  const form = el("div", "query-builder");

  const kindRow = el("div", "row");
  kindRow.appendChild(el("label", "", "kind"));
  const kindSelect = el("select");
  for (const kind of ["keyword_only", "sentiment", "aspect", "stance"]) {
    const option = el("option", "", kind);
    option.value = kind;
    if (kind === draft.kind) option.selected = true;
    kindSelect.appendChild(option);
  }
  kindSelect.addEventListener("change", () => {
    draft.kind = kindSelect.value as QueryKind;
    if (draft.kind === "aspect" && draft.aspectRequirements.length === 0) {
      draft.aspectRequirements = [{
        keywords: [{ pattern: "", mode: "substring" }],
        tag: "negative",
      }];
    }
    renderBuilder(root, draft, callbacks);
  });
  kindRow.appendChild(kindSelect);
  form.appendChild(kindRow);

  if (draft.kind !== "stance" || draft.groups.length > 0) {
    form.appendChild(renderGroups(draft, () =>
      renderBuilder(root, draft, callbacks)));
  }

  if (draft.kind === "sentiment") {
    const row = el("div", "row");
    row.appendChild(el("label", "", "target sentiment"));
    const select = el("select");
    for (const label of ["positive", "neutral", "negative"]) {
      const option = el("option", "", label);
      option.value = label;
      if (label === draft.targetSentiment) option.selected = true;
      select.appendChild(option);
    }
    select.addEventListener("change", () => {
      draft.targetSentiment = select.value as SentimentLabel;
    });
    row.appendChild(select);
    form.appendChild(row);
  }

  if (draft.kind === "aspect") {
    form.appendChild(renderAspectRows(draft, () =>
      renderBuilder(root, draft, callbacks)));
  }

  if (draft.kind === "stance") {
    const row = el("div", "row");
    row.appendChild(el("label", "", "claim"));
    const claimInput = el("input");
    claimInput.value = draft.claim;
    claimInput.addEventListener("input", () => {
      draft.claim = claimInput.value;
    });
    row.appendChild(claimInput);

    const stanceSelect = el("select");
    for (const label of ["agree", "disagree"]) {
      const option = el("option", "", label);
      option.value = label;
      if (label === draft.targetStance) option.selected = true;
      stanceSelect.appendChild(option);
    }
    stanceSelect.addEventListener("change", () => {
      draft.targetStance = stanceSelect.value as "agree" | "disagree";
    });
    row.appendChild(stanceSelect);
    form.appendChild(row);
  }

  const errorBox = el("div", "draft-error");
  const actions = el("div", "row actions");
  const preview = el("pre", "spec-preview");
  const runButton = el("button", "", "run search");
  runButton.addEventListener("click", () => {
    errorBox.textContent = "";
    try {
      const query = draftToQuery(draft);
      preview.textContent = serializeQuery(query);
      callbacks.onRun(query);
    } catch (e) {
      errorBox.textContent = e instanceof Error ? e.message : String(e);
    }
  });
  actions.appendChild(runButton);
  form.appendChild(actions);
  form.appendChild(errorBox);
  form.appendChild(preview);
  root.appendChild(form);
}

function renderGroups(draft: Draft, rerender: () => void): HTMLElement {
  const box = el("div", "keyword-groups");
  box.appendChild(el("label", "", "keywords (OR within a group, AND across)"));
  draft.groups.forEach((group, gi) => {
    const groupBox = el("div", "keyword-group");
    group.forEach((kw, ki) => {
      const chip = el("span", "keyword-chip");
      const input = el("input");
      input.value = kw.pattern;
      input.placeholder = "pattern";
      input.addEventListener("input", () => {
        kw.pattern = input.value;
      });
      chip.appendChild(input);

      const modeButton = el("button", "mode-toggle", kw.mode);
      modeButton.addEventListener("click", () => {
        kw.mode = kw.mode === "substring" ? "token" : "substring";
        modeButton.textContent = kw.mode;
      });
      chip.appendChild(modeButton);

      const remove = el("button", "remove", "x");
      remove.addEventListener("click", () => {
        group.splice(ki, 1);
        if (group.length === 0) draft.groups.splice(gi, 1);
        rerender();
      });
      chip.appendChild(remove);
      groupBox.appendChild(chip);
    });
    const addKw = el("button", "", "+ or");
    addKw.addEventListener("click", () => {
      group.push({ pattern: "", mode: "substring" });
      rerender();
    });
    groupBox.appendChild(addKw);
    box.appendChild(groupBox);
  });
  const addGroup = el("button", "", "+ and group");
  addGroup.addEventListener("click", () => {
    draft.groups.push([{ pattern: "", mode: "substring" }]);
    rerender();
  });
  box.appendChild(addGroup);
  return box;
}

function renderAspectRows(draft: Draft, rerender: () => void): HTMLElement {
  const box = el("div", "aspect-rows");
  box.appendChild(el("label", "", "aspect requirements"));
  draft.aspectRequirements.forEach((req, ri) => {
    const row = el("div", "aspect-row");
    req.keywords.forEach((kw) => {
      const input = el("input");
      input.value = kw.pattern;
      input.placeholder = "aspect keyword";
      input.addEventListener("input", () => {
        kw.pattern = input.value;
      });
      row.appendChild(input);
    });
    const tagSelect = el("select");
    for (const tag of [ANY_TAG, "positive", "neutral", "negative"]) {
      const option = el("option", "", tag);
      option.value = tag;
      if (tag === req.tag) option.selected = true;
      tagSelect.appendChild(option);
    }
    tagSelect.addEventListener("change", () => {
      req.tag = tagSelect.value as AspectTagChoice;
    });
    row.appendChild(tagSelect);
    const remove = el("button", "remove", "x");
    remove.addEventListener("click", () => {
      draft.aspectRequirements.splice(ri, 1);
      rerender();
    });
    row.appendChild(remove);
    box.appendChild(row);
  });
  const add = el("button", "", "+ requirement");
  add.addEventListener("click", () => {
    draft.aspectRequirements.push({
      keywords: [{ pattern: "", mode: "substring" }],
      tag: "negative",
    });
    rerender();
  });
  box.appendChild(add);
  return box;
}

// -- results ------------------------------------------------------------

// Merge overlapping spans before wrapping so nested <mark>s never occur.
export function highlightSegments(
  text: string,
  spans: [number, number, string][],
): { text: string; hit: boolean }[] {
  const merged: [number, number][] = [];
  for (const [start, end] of [...spans].sort((a, b) => a[0] - b[0])) {
    const last = merged[merged.length - 1];
    if (last && start <= last[1]) {
      last[1] = Math.max(last[1], end);
    } else {
      merged.push([start, end]);
    }
  }
  const segments: { text: string; hit: boolean }[] = [];
  let cursor = 0;
  for (const [start, end] of merged) {
    if (start > cursor) segments.push({ text: text.slice(cursor, start), hit: false });
    segments.push({ text: text.slice(start, end), hit: true });
    cursor = end;
  }
  if (cursor < text.length) segments.push({ text: text.slice(cursor), hit: false });
  return segments;
}

export interface ResultCallbacks {
  onMark: (docId: string, mark: "relevant" | "irrelevant" | "clear") => void;
}

function renderRow(row: ResultRow, feedback: Record<string, string>,
                   callbacks: ResultCallbacks): HTMLElement {
  const box = el("div", "result-row");
  const header = el("div", "result-header");
  header.appendChild(el("span", "doc-id", row.doc_id));
  const rationale: Rationale = row.rationale;
  header.appendChild(el("span", "rule", rationale.rule_fired));
  if (rationale.classifier_output) {
    header.appendChild(el("span", "classifier", rationale.classifier_output));
  }
  box.appendChild(header);

  const body = el("div", "result-text");
  for (const segment of highlightSegments(row.text, rationale.matched_spans)) {
    if (segment.hit) {
      body.appendChild(el("mark", "", segment.text));
    } else {
      body.appendChild(document.createTextNode(segment.text));
    }
  }
  box.appendChild(body);

  const marks = el("div", "marks");
  for (const mark of ["relevant", "irrelevant", "clear"] as const) {
    const button = el("button",
      feedback[row.doc_id] === mark ? "mark active" : "mark", mark);
    button.addEventListener("click", () => callbacks.onMark(row.doc_id, mark));
    marks.appendChild(button);
  }
  box.appendChild(marks);
  return box;
}

export function renderResults(root: HTMLElement, page: ResultPage | null,
                              feedback: Record<string, string>,
                              callbacks: ResultCallbacks): void {
  clear(root);
  if (page === null) {
    root.appendChild(el("div", "empty-state", "run a search to see results"));
    return;
  }
  if (page.total === 0) {
    root.appendChild(el("div", "empty-state", "no documents matched"));
    return;
  }
  root.appendChild(el("div", "result-count",
    `${page.total} matched` +
    (page.skipped.length ? `, ${page.skipped.length} skipped` : "")));
  for (const row of page.rows) {
    root.appendChild(renderRow(row, feedback, callbacks));
  }
}

// -- metric panel ---------------------------------------------------------

export function renderMetricPanel(root: HTMLElement,
                                  feedback: Record<string, string>,
                                  shownIds: string[],
                                  history: { result_ids: string[] }[]): void {
  clear(root);
  const panel = el("div", "metric-panel");
  const ratio = feedbackPrecision(feedback, shownIds);
  panel.appendChild(el("div", "metric",
    `precision vs marks: ${formatRatio(ratio)}`));
  panel.appendChild(el("div", "metric", `searches run: ${history.length}`));
  root.appendChild(panel);
}

export function renderHistory(root: HTMLElement,
                              entries: { query: unknown; result_ids: string[] }[]): void {
  clear(root);
  root.appendChild(el("label", "", "history"));
  entries.forEach((entry, i) => {
    const row = el("div", "history-row");
    row.appendChild(el("span", "history-index", `#${i + 1}`));
    row.appendChild(el("span", "history-count",
      `${entry.result_ids.length} results`));
    const spec = el("pre", "history-spec");
    spec.textContent = JSON.stringify(entry.query, null, 2);
    row.appendChild(spec);
    root.appendChild(row);
  });
}

export function renderError(root: HTMLElement, message: string | null): void {
  clear(root);
  if (message) root.appendChild(el("div", "service-error", message));
}
