// Scripted RIX walkthrough against recorded service responses: every number
// the panel would display must be present in an API response body.

import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient, type CompletenessReport } from "../src/api.js";
import {
  applyReport,
  initialState,
  nextSeq,
  setSlider,
  toggleDeselect,
  whatIfBody,
} from "../src/state.js";
import { panelModel } from "../src/view-model.js";
import { loadExchanges, numbersIn, replayFetch } from "./replay.js";

const exchanges = loadExchanges();

describe("RIX walkthrough on the astro fixture", () => {
  let api: ApiClient;
  let responseNumbers: Set<number>;

  beforeEach(() => {
    const replay = replayFetch(exchanges);
    vi.stubGlobal("fetch", replay.fetch);
    api = new ApiClient();
    responseNumbers = new Set();
    for (const exchange of exchanges) {
      numbersIn(exchange.response, responseNumbers);
    }
  });

  afterEach(() => {
    vi.unstubAllGlobals();
  });

  function expectDisplayedNumbersComeFromResponses(report: CompletenessReport) {
    expect(responseNumbers.has(report.score)).toBe(true);
    expect(responseNumbers.has(report.level)).toBe(true);
    expect(responseNumbers.has(report.avg_top5_missing)).toBe(true);
    for (const rec of report.missing) {
      expect(responseNumbers.has(rec.count)).toBe(true);
      expect(responseNumbers.has(rec.class_size)).toBe(true);
      expect(responseNumbers.has(rec.relevance)).toBe(true);
    }
  }

  it("initial report renders only service-provided numbers", async () => {
    const state = initialState("RIX", "A3");
    const report = await api.completeness("A3");
    expect(applyReport(state, report, nextSeq(state))).toBe(true);

    const model = panelModel(state)!;
    expect(model.score).toBe(report.score);
    expect(model.scoreDisplay).toBe(report.score_display);
    expect(model.indicator.level).toBe(report.level);
    expect(model.rows.map((r) => r.percent)).toEqual(
      report.missing.map((m) => m.display));
    expect(model.rows[0].explanation).toBe("3 of 4 QAST (75.00%)");
    expectDisplayedNumbersComeFromResponses(report);
  });

  it("deselect-all drives the indicator to level 5", async () => {
    const state = initialState("RIX", "A3");
    const neutral = await api.completeness("A3");
    applyReport(state, neutral, nextSeq(state));

    for (const rec of neutral.missing) {
      toggleDeselect(state, rec.property_id);
    }
    const report = await api.whatIf("A3", whatIfBody(state));
    applyReport(state, report, nextSeq(state));

    const model = panelModel(state)!;
    expect(model.indicator.level).toBe(5);
    expect(model.indicator.filled).toBe(5);
    expect(model.score).toBe(100.0);
    // deselected rows stay listed, unchecked
    expect(model.rows.map((r) => r.selected)).toEqual([false, false, false]);
    expectDisplayedNumbersComeFromResponses(report);
  });

  it("slider moves never alter the displayed score", async () => {
    const state = initialState("RIX", "A3");
    const neutral = await api.completeness("A3");
    applyReport(state, neutral, nextSeq(state));

    setSlider(state, 2, null);
    const filtered = await api.whatIf("A3", whatIfBody(state));
    applyReport(state, filtered, nextSeq(state));

    const model = panelModel(state)!;
    expect(model.score).toBe(neutral.score);
    expect(model.scoreDisplay).toBe(neutral.score_display);
    expect(model.indicator.level).toBe(neutral.level);
    expect(model.rows.map((r) => r.propertyId)).toEqual(["P2", "P3"]);
    expectDisplayedNumbersComeFromResponses(filtered);
  });

  it("deselecting one property updates the score from the response", async () => {
    const state = initialState("RIX", "A3");
    applyReport(state, await api.completeness("A3"), nextSeq(state));

    toggleDeselect(state, "P2");
    const report = await api.whatIf("A3", whatIfBody(state));
    applyReport(state, report, nextSeq(state));

    const model = panelModel(state)!;
    expect(model.score).toBe(report.score);
    expect(model.score).toBe(85.0);
    expect(model.rows.find((r) => r.propertyId === "P2")!.selected).toBe(false);
  });

  it("stale responses are discarded by sequence and fingerprint", async () => {
    const state = initialState("RIX", "A3");
    const neutral = await api.completeness("A3");
    const older = nextSeq(state);
    const newer = nextSeq(state);
    expect(applyReport(state, neutral, newer)).toBe(true);

    const late = { ...neutral, score: 1.0 };
    expect(applyReport(state, late, older)).toBe(false);
    expect(state.report!.score).toBe(neutral.score);

    const foreign = { ...neutral, fingerprint: "deadbeef00000000" };
    expect(applyReport(state, foreign, nextSeq(state))).toBe(false);
    expect(state.report!.fingerprint).toBe(neutral.fingerprint);
  });
});
