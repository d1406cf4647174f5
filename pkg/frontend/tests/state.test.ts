import { describe, expect, it } from "vitest";

import type { CompletenessReport } from "../src/api.js";
import {
  initialState,
  applyReport,
  isNeutral,
  nextSeq,
  setSlider,
  sliderUpperBound,
  toggleDeselect,
  whatIfBody,
} from "../src/state.js";
import { formatExplanation, gating, panelModel, panelTitle } from "../src/view-model.js";
import { formatClock, isExpired, remainingSeconds } from "../src/timer.js";

function report(overrides: Partial<CompletenessReport> = {}): CompletenessReport {
  return {
    level: 1,
    level_label: "least complete",
    score: 70.0,
    score_display: "70.00",
    avg_top5_missing: 30.0,
    avg_top5_display: "30.00",
    missing: [
      { property_id: "P2", count: 3, class_size: 4, relevance: 75.0,
        display: "75.00%", class_id: "QAST" },
      { property_id: "P3", count: 2, class_size: 4, relevance: 50.0,
        display: "50.00%", class_id: "QAST" },
    ],
    classes_used: ["QAST"],
    fingerprint: "abc123",
    ...overrides,
  };
}

describe("variant gating", () => {
  it("R1 shows neither explanation text nor interactive controls", () => {
    const gates = gating("R1");
    expect(gates.showLogicText).toBe(false);
    expect(gates.showSlider).toBe(false);
    expect(gates.showCheckboxes).toBe(false);
    expect(gates.numericalExplanations).toBe(false);
  });

  it("RX adds the logic text only", () => {
    const gates = gating("RX");
    expect(gates.showLogicText).toBe(true);
    expect(gates.showSlider).toBe(false);
    expect(gates.showCheckboxes).toBe(false);
  });

  it("RIX enables slider, checkboxes and numerical explanations", () => {
    const gates = gating("RIX");
    expect(gates.showLogicText).toBe(false);
    expect(gates.showSlider).toBe(true);
    expect(gates.showCheckboxes).toBe(true);
    expect(gates.numericalExplanations).toBe(true);
  });

  it("rows carry explanations only under RIX", () => {
    const rix = initialState("RIX", "A3");
    applyReport(rix, report(), nextSeq(rix));
    expect(panelModel(rix)!.rows[0].explanation).toBe("3 of 4 QAST (75.00%)");

    const r1 = initialState("R1", "A3");
    applyReport(r1, report(), nextSeq(r1));
    const row = panelModel(r1)!.rows[0];
    expect(row.explanation).toBeNull();
    expect(row.percent).toBe("75.00%");
    expect(row.selectable).toBe(false);
  });

  it("RIX title is anchored to the class context", () => {
    expect(panelTitle("RIX", report())).toBe(
      "Relative completeness among QAST");
    expect(panelTitle("R1", report())).toBe("Relative completeness");
  });

  it("an unreachable service disables the interactive controls", async () => {
    const { markStale } = await import("../src/state.js");
    const state = initialState("RIX", "A3");
    applyReport(state, report(), nextSeq(state));
    markStale(state);
    const model = panelModel(state)!;
    expect(model.stale).toBe(true);
    expect(model.showSlider).toBe(false);
    expect(model.showCheckboxes).toBe(false);
    expect(model.rows.every((r) => !r.selectable)).toBe(true);
  });
});

describe("explanation formatting", () => {
  const rec = { property_id: "P1", count: 549, class_size: 819,
                relevance: 67.03296703296703, display: "67.03%",
                class_id: "Q11631" };

  it("uses the numbers and pre-rounded display string verbatim", () => {
    expect(formatExplanation(rec, "astronaut")).toBe(
      "549 of 819 astronaut (67.03%)");
  });

  it("falls back to the class id without a label", () => {
    expect(formatExplanation(rec)).toBe("549 of 819 Q11631 (67.03%)");
  });

  it("handles the everyone-has-it case", () => {
    expect(formatExplanation({ ...rec, count: 819, display: "100.00%" }))
      .toBe("819 of 819 Q11631 (100.00%)");
  });
});

describe("what-if bodies", () => {
  it("deselection toggles round-trip and sort deterministically", () => {
    const state = initialState("RIX", "A3");
    toggleDeselect(state, "P3");
    toggleDeselect(state, "P2");
    expect(whatIfBody(state).deselected).toEqual(["P2", "P3"]);
    toggleDeselect(state, "P3");
    expect(whatIfBody(state).deselected).toEqual(["P2"]);
  });

  it("slider bounds stay within [1, max class size]", () => {
    expect(sliderUpperBound(report())).toBe(4);
    const state = initialState("RIX", "A3");
    applyReport(state, report(), nextSeq(state));
    setSlider(state, 2, 4);
    expect(whatIfBody(state)).toEqual(
      { deselected: [], min_count: 2, max_count: 4 });
  });

  it("neutral means no deselection and full range", () => {
    const state = initialState("RIX", "A3");
    expect(isNeutral(state)).toBe(true);
    setSlider(state, 2, null);
    expect(isNeutral(state)).toBe(false);
    setSlider(state, null, null);
    toggleDeselect(state, "P2");
    expect(isNeutral(state)).toBe(false);
  });
});

describe("timer", () => {
  const start = "2026-08-10T12:00:00+00:00";

  it("reaches zero exactly at the limit", () => {
    const startMs = Date.parse(start);
    expect(remainingSeconds(start, 600, startMs)).toBe(600);
    expect(remainingSeconds(start, 600, startMs + 599_000)).toBe(1);
    expect(remainingSeconds(start, 600, startMs + 600_000)).toBe(0);
    expect(remainingSeconds(start, 600, startMs + 601_000)).toBe(0);
    expect(isExpired(start, 600, startMs + 600_000)).toBe(true);
    expect(isExpired(start, 600, startMs + 599_999)).toBe(false);
  });

  it("formats mm:ss", () => {
    expect(formatClock(600)).toBe("10:00");
    expect(formatClock(61)).toBe("01:01");
    expect(formatClock(0)).toBe("00:00");
  });
});
