import { ApiError, ConsoleApi, OfflineError } from "./api.js";
import { clear, h } from "./dom.js";
import { renderDashboard } from "./views/dashboard.js";
import { renderInspection } from "./views/inspection.js";
import type { WhatIfResult } from "./views/inspection.js";
import { renderQueue } from "./views/queue.js";
import type {
  RecommendationDto,
  ReturnedItemDto,
  SessionDto,
  SustainabilityReportDto,
} from "./types.js";

export interface AppElements {
  banner: HTMLElement;
  intake: HTMLElement;
  queue: HTMLElement;
  inspection: HTMLElement;
  dashboard: HTMLElement;
}

/** Single-page console state. Polls the service (no push transport exists);
 * the only mutations it ever issues are POST /returns and POST
 * /returns/{id}/decision - everything else is read-only or what-if. */
export class ConsoleApp {
  private sessions: SessionDto[] = [];
  private report: SustainabilityReportDto | null = null;
  private selectedId: string | null = null;
  private recommendations = new Map<string, RecommendationDto>();
  private whatIfResult: WhatIfResult | null = null;
  private inspectionError: string | null = null;
  private busy = new Set<string>(); // at most one in-flight mutation per session
  private offline = false;
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private readonly els: AppElements,
    private readonly api: ConsoleApi,
    private readonly pollIntervalMs: number = 2000,
  ) {}

  start(): void {
    void this.pollOnce();
    this.timer = setInterval(() => void this.pollOnce(), this.pollIntervalMs);
    this.renderIntake();
  }

  stop(): void {
    if (this.timer !== null) clearInterval(this.timer);
    this.timer = null;
  }

  async pollOnce(): Promise<void> {
    try {
      const [sessions, report] = await Promise.all([
        this.api.listReturns(),
        this.api.sustainability(),
      ]);
      this.sessions = sessions;
      this.report = report;
      this.offline = false;
    } catch (err) {
      if (err instanceof OfflineError) {
        this.offline = true;
      } else {
        throw err;
      }
    }
    this.render();
  }

  async select(returnId: string): Promise<void> {
    this.selectedId = returnId;
    this.whatIfResult = null;
    this.inspectionError = null;
    if (!this.recommendations.has(returnId)) {
      try {
        this.recommendations.set(returnId, await this.api.getRecommendation(returnId));
      } catch (err) {
        if (err instanceof ApiError && err.status === 503) {
          // step-budget exhaustion is retry-able: keep the view, offer retry
          this.inspectionError = `service busy (${err.code}); retry`;
        } else if (err instanceof OfflineError) {
          this.offline = true;
        } else if (err instanceof ApiError) {
          this.inspectionError = err.message;
        } else {
          throw err;
        }
      }
    }
    this.render();
  }

  async runWhatIf(disposition: string): Promise<void> {
    const returnId = this.selectedId;
    if (returnId === null) return;
    try {
      const row = await this.api.whatIf(returnId, disposition);
      this.whatIfResult = { disposition, row };
    } catch (err) {
      if (err instanceof ApiError && err.status === 422) {
        this.whatIfResult = { disposition, infeasible: true };
      } else if (err instanceof ApiError) {
        this.whatIfResult = { disposition, error: err.message };
      } else if (err instanceof OfflineError) {
        this.offline = true;
      } else {
        throw err;
      }
    }
    this.render();
  }

  async confirm(disposition: string): Promise<void> {
    const returnId = this.selectedId;
    if (returnId === null || this.busy.has(returnId)) return;
    this.busy.add(returnId);
    this.render();
    try {
      await this.api.decide(returnId, disposition);
    } catch (err) {
      if (err instanceof ApiError && err.code === "already_decided") {
        // render the decided state, never an error dialog
      } else if (err instanceof ApiError) {
        this.inspectionError = err.message;
      } else if (err instanceof OfflineError) {
        this.offline = true;
      } else {
        this.busy.delete(returnId);
        throw err;
      }
    }
    this.busy.delete(returnId);
    await this.pollOnce(); // pull the decided session and fresh report
  }

  async submitIntake(item: ReturnedItemDto): Promise<string | null> {
    try {
      await this.api.createReturn(item);
      await this.pollOnce();
      return null;
    } catch (err) {
      if (err instanceof ApiError) return `${err.code}: ${err.message}`;
      if (err instanceof OfflineError) {
        this.offline = true;
        this.render();
        return "service unreachable";
      }
      throw err;
    }
  }

  selectedSession(): SessionDto | null {
    return this.sessions.find((s) => s.return_id === this.selectedId) ?? null;
  }

  render(): void {
    this.renderBanner();
    renderQueue(this.els.queue, this.sessions, this.selectedId, {
      onSelect: (id) => void this.select(id),
    });
    this.renderInspectionPane();
    if (this.report) {
      renderDashboard(this.els.dashboard, this.report);
    }
  }

  private renderBanner(): void {
    clear(this.els.banner);
    if (this.offline) {
      this.els.banner.append(
        h("div", { class: "offline-banner", "data-testid": "offline-banner" }, [
          "Decision service unreachable - retrying on the next poll.",
        ]),
      );
    }
  }

  private renderInspectionPane(): void {
    const session = this.selectedSession();
    if (session === null) {
      clear(this.els.inspection);
      this.els.inspection.append(
        h("p", { class: "empty-state" }, ["Select a return to inspect it."]),
      );
      return;
    }
    if (this.inspectionError !== null) {
      clear(this.els.inspection);
      const retry = h("button", { class: "retry-button", "data-testid": "retry" }, ["retry"]);
      retry.addEventListener("click", () => void this.select(session.return_id));
      this.els.inspection.append(
        h("p", { class: "inspection-error" }, [this.inspectionError]),
        retry,
      );
      return;
    }
    const recommendation = this.recommendations.get(session.return_id);
    if (!recommendation) {
      clear(this.els.inspection);
      this.els.inspection.append(h("p", { class: "empty-state" }, ["Loading recommendation..."]));
      return;
    }
    renderInspection(
      this.els.inspection,
      session,
      recommendation,
      this.whatIfResult,
      this.busy.has(session.return_id),
      {
        onWhatIf: (d) => void this.runWhatIf(d),
        onConfirm: (d) => void this.confirm(d),
      },
    );
  }

  renderIntake(): void {
    clear(this.els.intake);
    const fields: [string, string, string][] = [
      ["return_id", "text", ""],
      ["product_id", "text", ""],
      ["cosmetic_grade", "number", "4"],
      ["functional_grade", "number", "4"],
      ["completeness_grade", "number", "4"],
      ["age_months", "number", "0"],
    ];
    const inputs = new Map<string, HTMLInputElement>();
    const form = h("form", { class: "intake-form" });
    for (const [name, type, initial] of fields) {
      const input = h("input", { name, type, value: initial }) as HTMLInputElement;
      inputs.set(name, input);
      form.append(h("label", {}, [`${name} `, input]));
    }
    const reason = h("select", { name: "reason" }) as HTMLSelectElement;
    for (const value of [
      "defective", "end_of_life", "end_of_use",
      "customer_dissatisfaction", "usage_confusion", "recall",
    ]) {
      reason.append(h("option", { value }, [value]));
    }
    form.append(h("label", {}, ["reason ", reason]));
    const note = h("span", { class: "intake-note", "data-testid": "intake-note" });
    form.append(h("button", { type: "submit" }, ["register return"]), note);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.submitIntake({
        return_id: inputs.get("return_id")!.value,
        product_id: inputs.get("product_id")!.value,
        reason: reason.value,
        cosmetic_grade: Number(inputs.get("cosmetic_grade")!.value),
        functional_grade: Number(inputs.get("functional_grade")!.value),
        completeness_grade: Number(inputs.get("completeness_grade")!.value),
        age_months: Number(inputs.get("age_months")!.value),
        notes: "",
      }).then((error) => {
        note.textContent = error ?? "registered";
      });
    });
    this.els.intake.append(h("h2", {}, ["New return"]), form);
  }
}
