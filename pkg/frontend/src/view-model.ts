// Pure render models: map service responses onto what each design variant
// shows. Every number is copied verbatim from a response field.

import type { CompletenessReport, Recommendation } from "./api.js";
import type { PanelState, Variant } from "./state.js";

export const INDICATOR_SEGMENTS = 5;

export interface IndicatorModel {
  level: number;
  label: string;
  filled: number;
  total: number;
}

export function indicatorModel(report: CompletenessReport): IndicatorModel {
  return {
    level: report.level,
    label: report.level_label,
    filled: report.level,
    total: INDICATOR_SEGMENTS,
  };
}

/** RIX numerical explanation: "549 of 819 astronaut (67.03%)". The class
 * label defaults to the class id; labels are not modeled server-side. */
export function formatExplanation(rec: Recommendation, classLabel?: string): string {
  const label = classLabel ?? rec.class_id;
  return `${rec.count} of ${rec.class_size} ${label} (${rec.display})`;
}

export interface RowModel {
  propertyId: string;
  percent: string;
  explanation: string | null;
  count: number;
  selectable: boolean;
  selected: boolean;
}

export interface PanelModel {
  variant: Variant;
  title: string;
  score: number;
  scoreDisplay: string;
  indicator: IndicatorModel;
  rows: RowModel[];
  showLogicText: boolean;
  showSlider: boolean;
  showCheckboxes: boolean;
  sliderUpper: number;
  stale: boolean;
}

export function gating(variant: Variant) {
  return {
    showLogicText: variant === "RX",
    showSlider: variant === "RIX",
    showCheckboxes: variant === "RIX",
    numericalExplanations: variant === "RIX",
  };
}

/** The drop-down title; RIX anchors it to the item's class context. */
export function panelTitle(variant: Variant, report: CompletenessReport): string {
  if (variant === "RIX" && report.classes_used.length > 0) {
    return `Relative completeness among ${report.classes_used.join(", ")}`;
  }
  return "Relative completeness";
}

export function panelModel(state: PanelState): PanelModel | null {
  const report = state.report;
  if (report === null) {
    return null;
  }
  const gates = gating(state.variant);
  const rows = report.missing.map((rec) => ({
    propertyId: rec.property_id,
    percent: rec.display,
    explanation: gates.numericalExplanations ? formatExplanation(rec) : null,
    count: rec.count,
    selectable: gates.showCheckboxes && !state.stale,
    selected: !state.deselected.has(rec.property_id),
  }));
  let sliderUpper = 1;
  for (const rec of report.missing) {
    if (rec.class_size > sliderUpper) {
      sliderUpper = rec.class_size;
    }
  }
  return {
    variant: state.variant,
    title: panelTitle(state.variant, report),
    score: report.score,
    scoreDisplay: report.score_display,
    indicator: indicatorModel(report),
    rows,
    showLogicText: gates.showLogicText,
    showSlider: gates.showSlider && !state.stale,
    showCheckboxes: gates.showCheckboxes && !state.stale,
    sliderUpper,
    stale: state.stale,
  };
}
