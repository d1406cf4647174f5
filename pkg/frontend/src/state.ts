// UI state for the completeness panel. The displayed report always comes
// from the latest accepted service response; responses arriving out of order
// or from a different index snapshot are discarded.

import type { CompletenessReport, WhatIfBody } from "./api.js";

export type Variant = "R1" | "RX" | "RIX";

export interface PanelState {
  variant: Variant;
  itemId: string;
  report: CompletenessReport | null;
  deselected: Set<string>;
  sliderMin: number | null;
  sliderMax: number | null;
  requestSeq: number;
  appliedSeq: number;
  fingerprint: string | null;
  stale: boolean;
}

export function initialState(variant: Variant, itemId: string): PanelState {
  return {
    variant,
    itemId,
    report: null,
    deselected: new Set(),
    sliderMin: null,
    sliderMax: null,
    requestSeq: 0,
    appliedSeq: -1,
    fingerprint: null,
    stale: false,
  };
}

export function nextSeq(state: PanelState): number {
  state.requestSeq += 1;
  return state.requestSeq;
}

/** Accept a response only if it is newer than the last applied one and still
 * belongs to the index snapshot the panel is pinned to. Returns whether the
 * report became the displayed one. */
export function applyReport(state: PanelState, report: CompletenessReport,
                            seq: number): boolean {
  if (seq <= state.appliedSeq) {
    return false;
  }
  if (state.fingerprint !== null && report.fingerprint !== state.fingerprint) {
    return false;
  }
  state.fingerprint = report.fingerprint;
  state.report = report;
  state.appliedSeq = seq;
  state.stale = false;
  return true;
}

export function markStale(state: PanelState): void {
  state.stale = true;
}

export function toggleDeselect(state: PanelState, propertyId: string): void {
  if (state.deselected.has(propertyId)) {
    state.deselected.delete(propertyId);
  } else {
    state.deselected.add(propertyId);
  }
}

export function setSlider(state: PanelState, min: number | null,
                          max: number | null): void {
  state.sliderMin = min;
  state.sliderMax = max;
}

/** Largest class size among the displayed recommendations; the slider runs
 * over [1, that]. */
export function sliderUpperBound(report: CompletenessReport): number {
  let bound = 1;
  for (const rec of report.missing) {
    if (rec.class_size > bound) {
      bound = rec.class_size;
    }
  }
  return bound;
}

export function whatIfBody(state: PanelState): WhatIfBody {
  return {
    deselected: [...state.deselected].sort(),
    min_count: state.sliderMin,
    max_count: state.sliderMax,
  };
}

export function isNeutral(state: PanelState): boolean {
  return state.deselected.size === 0 && state.sliderMin === null
    && state.sliderMax === null;
}
