/**
 * Framework-free DOM rendering of questionnaire steps.
 *
 * Color swatches are fixed-size blocks filled with the item's RGB verbatim
 * (no color-space transformation) on the page's neutral background. Verbal
 * category labels never carry numbers. The submit button stays disabled
 * until the entered answer is complete and coherent, and a failed submit
 * keeps everything the respondent entered.
 */

import type { Answer, CategoryId } from "./api.js";
import {
  CATEGORY_LABELS,
  DemographicsQuestion,
  DirectScoresQuestion,
  PairChoiceQuestion,
  UiQuestion,
} from "./questions.js";
import type { Progress, SubmitOutcome } from "./state.js";

export type SubmitHandler = (answer: Answer) => Promise<SubmitOutcome>;

export interface RenderCallbacks {
  onSubmit: SubmitHandler;
  onAdvanced: () => void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function swatchBlock(doc: Document, name: string, cssColor: string): HTMLElement {
  const wrap = el(doc, "div", "swatch-block");
  const sw = el(doc, "div", "swatch");
  sw.style.backgroundColor = cssColor;
  sw.dataset.item = name;
  wrap.append(sw);
  return wrap;
}

/**
 * Selected value per radio-group name. A radio's change event fires exactly
 * when it becomes checked, so recording the event target mirrors the group
 * state without querying the DOM mid-dispatch.
 */
type Selections = Map<string, string>;

function radio(
  doc: Document,
  selections: Selections,
  name: string,
  value: string,
  labelText: string,
  refresh: () => void,
): HTMLLabelElement {
  const label = el(doc, "label", "choice");
  const input = doc.createElement("input");
  input.type = "radio";
  input.name = name;
  input.value = value;
  input.addEventListener("change", () => {
    selections.set(name, value);
    refresh();
  });
  label.append(input, doc.createTextNode(labelText));
  return label;
}

function errorBanner(
  doc: Document,
  message: string,
  onRetry: (() => void) | null,
): HTMLElement {
  const banner = el(doc, "div", "error-banner");
  banner.append(el(doc, "span", "error-text", message));
  if (onRetry) {
    const retry = el(doc, "button", "retry", "retry");
    retry.type = "button";
    retry.addEventListener("click", onRetry);
    banner.append(retry);
  }
  return banner;
}

/** Render one question into the container (cleared first). */
export function renderQuestion(
  container: HTMLElement,
  question: UiQuestion,
  callbacks: RenderCallbacks,
): void {
  container.replaceChildren();
  switch (question.kind) {
    case "PairChoice":
    case "RepeatChoice":
      renderPairChoice(container, question, callbacks);
      break;
    case "DirectScores":
      renderDirectScores(container, question, callbacks);
      break;
    case "Demographics":
      renderDemographics(container, question, callbacks);
      break;
  }
}

function wireSubmit(
  container: HTMLElement,
  submitButton: HTMLButtonElement,
  collect: () => Answer | null,
  callbacks: RenderCallbacks,
): () => void {
  const doc = container.ownerDocument;
  const refresh = () => {
    submitButton.disabled = collect() === null;
  };
  let busy = false;
  submitButton.addEventListener("click", async () => {
    const answer = collect();
    if (answer === null || busy) return;
    busy = true;
    submitButton.disabled = true;
    const outcome = await callbacks.onSubmit(answer);
    busy = false;
    container.querySelectorAll(".error-banner").forEach((b) => b.remove());
    if (outcome.status === "advanced") {
      callbacks.onAdvanced();
      return;
    }
    submitButton.disabled = false;
    // entered values stay in the DOM; a retry re-collects them
    const retry =
      outcome.status === "network-error" ? () => submitButton.click() : null;
    container.append(errorBanner(doc, outcome.message, retry));
  });
  return refresh;
}

function renderPairChoice(
  container: HTMLElement,
  q: PairChoiceQuestion,
  callbacks: RenderCallbacks,
): void {
  const doc = container.ownerDocument;
  const form = el(doc, "div", `question pair-choice${q.kind === "RepeatChoice" ? " repeat" : ""}`);
  form.append(el(doc, "h2", "prompt", "Which color do you prefer?"));

  const pair = el(doc, "div", "pair");
  pair.append(swatchBlock(doc, q.left.name, q.left.cssColor));
  pair.append(swatchBlock(doc, q.right.name, q.right.cssColor));
  form.append(pair);

  const submit = el(doc, "button", "submit", "continue");
  submit.type = "button";
  submit.disabled = true;

  const selections: Selections = new Map();
  const collect = (): Answer | null => {
    const preferred = selections.get("preferred") ?? null;
    const category = (selections.get("category") ?? null) as CategoryId | null;
    if (preferred === null || category === null) return null;
    const coherent =
      (preferred === "neither") === (category === "equal");
    if (!coherent) return null;
    return { pair: [q.left.name, q.right.name], preferred, category };
  };
  const refresh = wireSubmit(container, submit, collect, callbacks);

  const prefs = el(doc, "div", "preferred-selector");
  prefs.append(radio(doc, selections, "preferred", q.left.name, "left", refresh));
  prefs.append(radio(doc, selections, "preferred", q.right.name, "right", refresh));
  prefs.append(radio(doc, selections, "preferred", "neither", "no preference", refresh));
  form.append(prefs);

  form.append(el(doc, "h2", "prompt", "How strongly?"));
  const cats = el(doc, "div", "category-selector");
  for (const cat of q.categories) {
    cats.append(radio(doc, selections, "category", cat, CATEGORY_LABELS[cat], refresh));
  }
  form.append(cats);

  form.append(submit);
  container.append(form);
}

function renderDirectScores(
  container: HTMLElement,
  q: DirectScoresQuestion,
  callbacks: RenderCallbacks,
): void {
  const doc = container.ownerDocument;
  const form = el(doc, "div", "question direct-scores");
  form.append(
    el(doc, "h2", "prompt", "Rate each color from strong dislike to strong preference."),
  );

  const submit = el(doc, "button", "submit", "continue");
  submit.type = "button";
  submit.disabled = true;

  const selections: Selections = new Map();
  const collect = (): Answer | null => {
    const scores: Record<string, number> = {};
    for (const item of q.items) {
      const value = selections.get(`score-${item.name}`);
      if (value === undefined) return null;
      scores[item.name] = Number.parseInt(value, 10);
    }
    return { scores };
  };
  const refresh = wireSubmit(container, submit, collect, callbacks);

  for (const item of q.items) {
    const row = el(doc, "div", "score-row");
    row.append(swatchBlock(doc, item.name, item.cssColor));
    const scale = el(doc, "div", "score-scale");
    for (let v = q.min; v <= q.max; v += 1) {
      scale.append(
        radio(doc, selections, `score-${item.name}`, String(v), String(v), refresh),
      );
    }
    row.append(scale);
    form.append(row);
  }

  form.append(submit);
  container.append(form);
}

function renderDemographics(
  container: HTMLElement,
  q: DemographicsQuestion,
  callbacks: RenderCallbacks,
): void {
  const doc = container.ownerDocument;
  const form = el(doc, "div", "question demographics");
  form.append(el(doc, "h2", "prompt", "A few questions about you."));

  const submit = el(doc, "button", "submit", "continue");
  submit.type = "button";
  submit.disabled = true;

  const inputs = new Map<string, HTMLInputElement>();
  const collect = (): Answer | null => {
    const values: Record<string, string> = {};
    for (const field of q.fields) {
      const input = inputs.get(field);
      if (!input || input.value.trim() === "") return null;
      values[field] = input.value.trim();
    }
    return values as unknown as Answer;
  };
  const refresh = wireSubmit(container, submit, collect, callbacks);

  for (const field of q.fields) {
    const label = el(doc, "label", "field");
    label.append(el(doc, "span", "field-name", field));
    const input = doc.createElement("input");
    input.type = "text";
    input.name = field;
    input.addEventListener("input", refresh);
    inputs.set(field, input);
    label.append(input);
    form.append(label);
  }

  form.append(submit);
  container.append(form);
}

export function renderProgress(element: HTMLElement, progress: Progress): void {
  element.textContent = progress.label;
  element.setAttribute("aria-valuenow", String(progress.answered));
  element.setAttribute("aria-valuemax", String(progress.total));
}

export function renderDone(container: HTMLElement): void {
  container.replaceChildren();
  const done = el(container.ownerDocument, "div", "completion");
  done.append(
    el(container.ownerDocument, "h2", "prompt", "All done - thank you!"),
  );
  container.append(done);
}
