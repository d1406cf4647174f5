// Thin DOM layer: renders the view models and wires handlers. No scoring
// logic lives here; handlers fetch fresh reports and re-render.

import type { PanelModel, RowModel } from "./view-model.js";
import { SCALES, type Answers } from "./questionnaire.js";

export function el<K extends keyof HTMLElementTagNameMap>(
    tag: K, attrs: Record<string, string> = {},
    ...children: (Node | string)[]): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  node.append(...children);
  return node;
}

export function clear(node: HTMLElement): void {
  while (node.firstChild) {
    node.removeChild(node.firstChild);
  }
}

export interface PanelHandlers {
  onToggle(propertyId: string): void;
  onSlider(min: number | null, max: number | null): void;
  onAddViaRecoin(propertyId: string): void;
}

export function renderIndicator(filled: number, total: number, label: string):
    HTMLElement {
  const bar = el("div", { class: "indicator", title: label,
                          "data-level": String(filled) });
  for (let i = 1; i <= total; i += 1) {
    bar.append(el("span", {
      class: i <= filled ? "segment on" : "segment",
    }));
  }
  bar.append(el("span", { class: "indicator-label" }, label));
  return bar;
}

function renderRow(row: RowModel, handlers: PanelHandlers,
                   canEdit: boolean): HTMLElement {
  const item = el("li", { class: "rec-row", "data-property": row.propertyId });
  if (row.selectable) {
    const box = el("input", { type: "checkbox", class: "rec-toggle" });
    box.checked = row.selected;
    box.addEventListener("change", () => handlers.onToggle(row.propertyId));
    item.append(box);
  }
  item.append(el("span", { class: "rec-property" }, row.propertyId));
  if (row.explanation !== null) {
    item.append(el("span", { class: "rec-explanation" }, row.explanation));
  } else {
    item.append(el("span", { class: "rec-percent" }, row.percent));
  }
  if (canEdit) {
    const add = el("button", { class: "rec-add", type: "button" }, "add");
    add.addEventListener("click", () => handlers.onAddViaRecoin(row.propertyId));
    item.append(add);
  }
  return item;
}

export function renderPanel(root: HTMLElement, model: PanelModel,
                            logicText: string, handlers: PanelHandlers,
                            canEdit: boolean): void {
  clear(root);
  root.append(el("h2", { class: "panel-title" }, model.title));
  root.append(renderIndicator(model.indicator.filled, model.indicator.total,
                              model.indicator.label));
  root.append(el("p", { class: "score" },
                 `Completeness score: `,
                 el("strong", { class: "score-value" }, model.scoreDisplay)));
  if (model.stale) {
    root.append(el("p", { class: "stale-banner" },
                   "Service unreachable; showing stale data."));
  }
  if (model.showLogicText && logicText) {
    root.append(el("p", { class: "logic-text" }, logicText));
  }
  if (model.showSlider) {
    const upper = String(model.sliderUpper);
    const minInput = el("input", { type: "range", min: "1", max: upper,
                                   value: "1", class: "slider-min" });
    const maxInput = el("input", { type: "range", min: "1", max: upper,
                                   value: upper, class: "slider-max" });
    const label = el("span", { class: "slider-label" },
                     `occurrence 1 – ${upper}`);
    const emit = () => {
      let lo = Number(minInput.value);
      let hi = Number(maxInput.value);
      if (lo > hi) {
        lo = hi;
        minInput.value = String(lo);
      }
      label.textContent = `occurrence ${lo} – ${hi}`;
      const neutral = lo === 1 && hi === model.sliderUpper;
      handlers.onSlider(neutral ? null : lo, neutral ? null : hi);
    };
    minInput.addEventListener("change", emit);
    maxInput.addEventListener("change", emit);
    root.append(el("div", { class: "slider" }, label, minInput, maxInput));
  }
  const list = el("ul", { class: "rec-list" });
  for (const row of model.rows) {
    list.append(renderRow(row, handlers, canEdit && !model.stale));
  }
  root.append(list);
}

export function renderClaims(root: HTMLElement,
                             claims: Record<string, string[]>): void {
  clear(root);
  const table = el("table", { class: "claims" });
  for (const [property, values] of Object.entries(claims)) {
    table.append(el("tr", {},
                    el("th", {}, property),
                    el("td", {}, values.join(", "))));
  }
  root.append(table);
}

export interface QuestionnaireHandlers {
  onSubmit(answers: Answers): void;
}

export function renderQuestionnaire(root: HTMLElement, headline: string,
                                    answers: Answers,
                                    handlers: QuestionnaireHandlers): void {
  clear(root);
  root.append(el("h2", { class: "grade-headline" }, headline));
  const form = el("form", { class: "questionnaire" });
  for (const scale of SCALES) {
    const fieldset = el("fieldset", { class: `scale-${scale.name}` },
                        el("legend", {}, scale.prompt));
    for (let value = scale.min; value <= scale.max; value += 1) {
      const input = el("input", { type: "radio", name: scale.name,
                                  value: String(value) });
      input.addEventListener("change", () => {
        (answers as unknown as Record<string, number>)[scale.name] = value;
      });
      fieldset.append(el("label", { class: "likert" }, input, String(value)));
    }
    const text = el("textarea", { rows: "2",
                                  placeholder: "optional: expand on your rating" });
    text.addEventListener("change", () => {
      if (text.value.trim()) {
        answers.freeText[scale.name] = text.value.trim();
      } else {
        delete answers.freeText[scale.name];
      }
    });
    fieldset.append(text);
    form.append(fieldset);
  }
  const error = el("p", { class: "form-error", hidden: "hidden" });
  const submit = el("button", { type: "submit" }, "Submit self-report");
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    handlers.onSubmit(answers);
  });
  form.append(error, submit);
  root.append(form);
}

export function showFormError(root: HTMLElement, message: string): void {
  const error = root.querySelector<HTMLElement>(".form-error");
  if (error) {
    error.hidden = false;
    error.textContent = message;
  }
}
