// Page orchestration: load an item, run a timed session against the service,
// drive the completeness panel per design variant, then collect the
// questionnaire after grading.

import { ApiClient, ApiError, type SessionInfo, type TaskResult } from "./api.js";
import {
  applyReport,
  initialState,
  isNeutral,
  markStale,
  nextSeq,
  setSlider,
  toggleDeselect,
  whatIfBody,
  type PanelState,
  type Variant,
} from "./state.js";
import { panelModel } from "./view-model.js";
import { formatClock, isExpired, remainingSeconds } from "./timer.js";
import { emptyAnswers, gradeHeadline, toReportBody, validateAnswers } from "./questionnaire.js";
import {
  clear,
  el,
  renderClaims,
  renderPanel,
  renderQuestionnaire,
  showFormError,
} from "./dom.js";

const VARIANT_BY_CONDITION: Record<string, Variant | null> = {
  BASELINE: null,
  C1: "R1",
  C2: "R1",
  C3: "RX",
  C4: "RIX",
};

class App {
  api = new ApiClient();
  state: PanelState | null = null;
  session: SessionInfo | null = null;
  result: TaskResult | null = null;
  logicText = "";
  timerHandle: number | null = null;
  locked = false;

  panelRoot = document.querySelector<HTMLElement>("#panel")!;
  claimsRoot = document.querySelector<HTMLElement>("#claims")!;
  timerRoot = document.querySelector<HTMLElement>("#timer")!;
  reportRoot = document.querySelector<HTMLElement>("#report")!;
  statusRoot = document.querySelector<HTMLElement>("#status")!;

  async start(itemId: string, condition: string): Promise<void> {
    this.session = await this.api.createSession(itemId, condition);
    const variant = VARIANT_BY_CONDITION[this.session.condition] ?? null;
    const entity = await this.api.entity(itemId);
    renderClaims(this.claimsRoot, entity.claims);

    if (variant !== null) {
      this.state = initialState(variant, itemId);
      if (variant === "RX") {
        this.logicText = await fetch("content/rx-explanation.txt")
          .then((r) => (r.ok ? r.text() : ""))
          .catch(() => "");
      }
      applyReport(this.state, this.session.before, nextSeq(this.state));
      this.renderPanel();
    } else {
      clear(this.panelRoot);
    }
    this.startTimer();
    this.status(`Session ${this.session.session_id.slice(0, 8)} started `
      + `(${this.session.condition}); add statements below.`);
  }

  renderPanel(): void {
    if (!this.state) {
      return;
    }
    const model = panelModel(this.state);
    if (!model) {
      return;
    }
    renderPanel(this.panelRoot, model, this.logicText, {
      onToggle: (propertyId) => {
        toggleDeselect(this.state!, propertyId);
        void this.refreshWhatIf();
      },
      onSlider: (min, max) => {
        setSlider(this.state!, min, max);
        void this.refreshWhatIf();
      },
      onAddViaRecoin: (propertyId) => {
        const value = window.prompt(`Value for ${propertyId}:`);
        if (value) {
          void this.addStatement(propertyId, value, true);
        }
      },
    }, !this.locked && this.result === null);
  }

  async refreshWhatIf(): Promise<void> {
    if (!this.state) {
      return;
    }
    const seq = nextSeq(this.state);
    try {
      const report = isNeutral(this.state)
        ? await this.api.completeness(this.state.itemId)
        : await this.api.whatIf(this.state.itemId, whatIfBody(this.state));
      applyReport(this.state, report, seq);
    } catch (error) {
      if (!(error instanceof ApiError)) {
        markStale(this.state);
      }
    }
    this.renderPanel();
  }

  async addStatement(property: string, value: string,
                     viaRecoin: boolean): Promise<void> {
    if (!this.session) {
      return;
    }
    try {
      const ack = await this.api.edit(this.session.session_id, property, value,
                                      viaRecoin);
      this.status(`Added ${property} = ${value} `
        + `(${ack.edit_count} edits, ${ack.usage} via the recommender).`);
      const row = this.claimsRoot.querySelector("table");
      row?.append(el("tr", { class: "added" },
                     el("th", {}, property), el("td", {}, value)));
    } catch (error) {
      if (error instanceof ApiError && error.status === 410) {
        this.status("Time is up; proceed to the self-report.");
        this.stopTimer();
      } else {
        this.status(`Edit rejected: ${String((error as Error).message)}`);
      }
    }
  }

  startTimer(): void {
    const tick = () => {
      if (!this.session) {
        return;
      }
      const left = remainingSeconds(this.session.start,
                                    this.session.limit_seconds, Date.now());
      this.timerRoot.textContent = formatClock(left);
      if (isExpired(this.session.start, this.session.limit_seconds, Date.now())) {
        this.stopTimer();
        this.timerRoot.textContent = "00:00";
        this.status("Time is up; proceed to the self-report.");
      }
    };
    tick();
    this.timerHandle = window.setInterval(tick, 500);
  }

  stopTimer(): void {
    if (this.timerHandle !== null) {
      window.clearInterval(this.timerHandle);
      this.timerHandle = null;
    }
  }

  async finalize(): Promise<void> {
    if (!this.session || this.result !== null) {
      return;
    }
    this.stopTimer();
    this.result = await this.api.finalize(this.session.session_id);
    const answers = emptyAnswers();
    renderQuestionnaire(this.reportRoot, gradeHeadline(this.result), answers, {
      onSubmit: (submitted) => {
        const validation = validateAnswers(submitted);
        if (!validation.ok) {
          showFormError(this.reportRoot,
                        `Please answer: ${[...validation.missing,
                                           ...validation.outOfRange].join(", ")}`);
          return;
        }
        void this.submitReport();
      },
    });
    this.renderPanel();

    const submitAnswers = answers;
    this.submitReport = async () => {
      try {
        await this.api.submitReport(this.session!.session_id,
                                    toReportBody(submitAnswers));
        this.locked = true;
        clear(this.reportRoot);
        this.reportRoot.append(
          el("p", { class: "confirmation" },
             "Self-report recorded. The session is closed; thank you."));
      } catch (error) {
        showFormError(this.reportRoot,
                      `Submission rejected: ${(error as Error).message}`);
      }
    };
  }

  submitReport: () => Promise<void> = async () => {};

  status(message: string): void {
    this.statusRoot.textContent = message;
  }
}

function install(): void {
  const app = new App();
  const params = new URLSearchParams(window.location.search);
  const itemInput = document.querySelector<HTMLInputElement>("#item-id")!;
  const conditionSelect = document.querySelector<HTMLSelectElement>("#condition")!;
  itemInput.value = params.get("item") ?? "";
  conditionSelect.value = params.get("condition") ?? "C4";

  document.querySelector<HTMLButtonElement>("#start")!
    .addEventListener("click", () => {
      if (itemInput.value) {
        void app.start(itemInput.value, conditionSelect.value)
          .catch((error) => app.status(`Could not start: ${error.message}`));
      }
    });

  const form = document.querySelector<HTMLFormElement>("#add-form")!;
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const property = form.querySelector<HTMLInputElement>("[name=property]")!;
    const value = form.querySelector<HTMLInputElement>("[name=value]")!;
    if (property.value && value.value) {
      void app.addStatement(property.value, value.value, false);
      value.value = "";
    }
  });

  document.querySelector<HTMLButtonElement>("#finalize")!
    .addEventListener("click", () => {
      void app.finalize().catch((error) => app.status(String(error.message)));
    });
}

install();
