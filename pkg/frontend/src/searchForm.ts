/** Advanced search form: three fixed keyword slots, engagement thresholds,
 * date range, combine toggle, and sort selector.
 *
 * The keyword cap is an affordance, not an error path: the form has exactly
 * MAX_KEYWORDS slots, so it cannot express a fourth keyword at all. Blank
 * slots are dropped; submit stays disabled until at least one is filled.
 */

import type { FieldError } from "./api.js";
import { clear, el } from "./dom.js";
import { MAX_KEYWORDS, type AppState, type Combine, type Sort } from "./state.js";

export interface SearchFormElements {
  root: HTMLFormElement;
  keywordInputs: HTMLInputElement[];
  combineSelect: HTMLSelectElement;
  minLikes: HTMLInputElement;
  minReplies: HTMLInputElement;
  minRetweets: HTMLInputElement;
  fromInput: HTMLInputElement;
  toInput: HTMLInputElement;
  sortSelect: HTMLSelectElement;
  submit: HTMLButtonElement;
}

/** Groups API error fields onto the form row that owns them. */
const ERROR_ROW: Record<string, string> = {
  keywords: "keywords",
  combine: "combine",
  min_likes: "min_likes",
  min_replies: "min_replies",
  min_retweets: "min_retweets",
  from: "dates",
  to: "dates",
  date_range: "dates",
  sort: "sort",
};

function numberValue(input: HTMLInputElement): number {
  const n = Number(input.value);
  return Number.isInteger(n) && n >= 0 ? n : 0;
}

export function readForm(els: SearchFormElements): Omit<AppState, "page"> {
  return {
    keywords: els.keywordInputs
      .map((input) => input.value.trim())
      .filter((v) => v !== "")
      .slice(0, MAX_KEYWORDS),
    combine: els.combineSelect.value as Combine,
    minLikes: numberValue(els.minLikes),
    minReplies: numberValue(els.minReplies),
    minRetweets: numberValue(els.minRetweets),
    from: els.fromInput.value || null,
    to: els.toInput.value || null,
    sort: els.sortSelect.value as Sort,
  };
}

function refreshSubmitState(els: SearchFormElements): void {
  const anyKeyword = els.keywordInputs.some((input) => input.value.trim() !== "");
  els.submit.disabled = !anyKeyword;
}

export function showFieldErrors(els: SearchFormElements, errors: FieldError[]): void {
  clearFieldErrors(els);
  for (const { field, message } of errors) {
    const row = ERROR_ROW[field] ?? "form";
    const slot = els.root.querySelector(`[data-errors-for="${row}"]`);
    if (slot) {
      slot.append(el("span", { class: "field-error", "data-field": field }, [message]));
    }
  }
}

export function clearFieldErrors(els: SearchFormElements): void {
  for (const slot of Array.from(els.root.querySelectorAll("[data-errors-for]"))) {
    clear(slot);
  }
}

function row(label: string, errorKey: string, controls: HTMLElement[]): HTMLElement {
  return el("div", { class: "form-row" }, [
    el("label", { class: "form-label" }, [label]),
    el("div", { class: "form-controls" }, controls),
    el("div", { class: "form-errors", "data-errors-for": errorKey }),
  ]);
}

export function renderSearchForm(
  container: Element,
  initial: AppState,
  onSubmit: (state: Omit<AppState, "page">) => void,
): SearchFormElements {
  const keywordInputs: HTMLInputElement[] = [];
  for (let i = 0; i < MAX_KEYWORDS; i++) {
    keywordInputs.push(
      el("input", {
        type: "text",
        class: "keyword-slot",
        name: `keyword_${i + 1}`,
        placeholder: `keyword ${i + 1}${i === 0 ? "" : " (optional)"}`,
        value: initial.keywords[i] ?? "",
        autocomplete: "off",
      }),
    );
  }

  const combineSelect = el("select", { name: "combine" }, [
    el("option", { value: "all" }, ["match all keywords"]),
    el("option", { value: "any" }, ["match any keyword"]),
  ]);
  combineSelect.value = initial.combine;

  const threshold = (name: string, value: number) =>
    el("input", { type: "number", min: "0", step: "1", name, value: String(value) });
  const minLikes = threshold("min_likes", initial.minLikes);
  const minReplies = threshold("min_replies", initial.minReplies);
  const minRetweets = threshold("min_retweets", initial.minRetweets);

  const fromInput = el("input", { type: "date", name: "from", value: initial.from ?? "" });
  const toInput = el("input", { type: "date", name: "to", value: initial.to ?? "" });

  const sortSelect = el("select", { name: "sort" }, [
    el("option", { value: "recency_desc" }, ["newest first"]),
    el("option", { value: "likes_desc" }, ["most liked"]),
    el("option", { value: "retweets_desc" }, ["most retweeted"]),
  ]);
  sortSelect.value = initial.sort;

  const submit = el("button", { type: "submit", class: "primary" }, ["Search"]);

  const root = el("form", { class: "search-form", novalidate: "" }, [
    row("Keywords (up to 3)", "keywords", keywordInputs),
    row("Combine", "combine", [combineSelect]),
    row("Min likes", "min_likes", [minLikes]),
    row("Min replies", "min_replies", [minReplies]),
    row("Min retweets", "min_retweets", [minRetweets]),
    row("Date range", "dates", [fromInput, el("span", {}, ["to"]), toInput]),
    row("Sort", "sort", [sortSelect]),
    el("div", { class: "form-row" }, [
      el("div", { class: "form-errors", "data-errors-for": "form" }),
      submit,
    ]),
  ]);

  const els: SearchFormElements = {
    root,
    keywordInputs,
    combineSelect,
    minLikes,
    minReplies,
    minRetweets,
    fromInput,
    toInput,
    sortSelect,
    submit,
  };

  for (const input of keywordInputs) {
    input.addEventListener("input", () => refreshSubmitState(els));
  }
  refreshSubmitState(els);

  root.addEventListener("submit", (event) => {
    event.preventDefault();
    const state = readForm(els);
    if (state.keywords.length === 0) return;
    clearFieldErrors(els);
    onSubmit(state);
  });

  container.append(root);
  return els;
}
