import { describe, expect, it } from "vitest";

import { renderInspection } from "../../src/views/inspection.js";
import { recommendation, session } from "./helpers.js";

function container(): HTMLElement {
  document.body.innerHTML = `<div id="inspection"></div>`;
  return document.getElementById("inspection")!;
}

const noop = { onWhatIf: () => {}, onConfirm: () => {} };

describe("inspection view", () => {
  it("shows the escalation badge and specialist panels for escalated returns", () => {
    const el = container();
    renderInspection(el, session("r-1", "recommended"), recommendation(), null, false, noop);
    expect(el.querySelector('[data-testid="rationale-badge"]')!.textContent).toBe(
      "rule-based escalation",
    );
    const specialists = el.querySelector('[data-testid="specialists"]')!;
    expect(specialists.textContent).toContain("substitute thermostat module");
    expect(specialists.textContent).toContain("recycled content is 0.26");
    expect(specialists.textContent).toContain("label m-cord as electronic");
  });

  it("marks the top-ranked row", () => {
    const el = container();
    renderInspection(el, session("r-1", "recommended"), recommendation(), null, false, noop);
    const top = el.querySelector("tr.top-ranked")!;
    expect(top.getAttribute("data-disposition")).toBe("repair");
  });

  it("renders exactly the numbers the service sent", () => {
    // deliberately inconsistent components: any client-side recomputation
    // would disagree with these raw values
    const quirky = recommendation({
      ranked: [
        { disposition: "repair", total: 0.999, env: 0.123456, econ: 0.2, case: 0.05 },
      ],
    });
    const el = container();
    renderInspection(el, session("r-1", "recommended"), quirky, null, false, noop);
    const row = el.querySelector('tr[data-disposition="repair"]')!;
    expect(row.querySelector(".score.total")!.getAttribute("data-raw")).toBe("0.999");
    expect(row.querySelector(".score.env")!.getAttribute("data-raw")).toBe("0.123456");
    expect(row.querySelector(".score.econ")!.getAttribute("data-raw")).toBe("0.2");
    expect(row.querySelector(".score.case")!.getAttribute("data-raw")).toBe("0.05");
  });

  it("displayed components sum to the displayed total within rounding", () => {
    const el = container();
    renderInspection(el, session("r-1", "recommended"), recommendation(), null, false, noop);
    for (const row of el.querySelectorAll("table.ranking tr[data-disposition]")) {
      const raw = (cls: string) =>
        Number(row.querySelector(`.score.${cls}`)!.getAttribute("data-raw"));
      expect(raw("env") + raw("econ") + raw("case")).toBeCloseTo(raw("total"), 9);
    }
  });

  it("renders an infeasible what-if as a chip, not a crash", () => {
    const el = container();
    renderInspection(
      el,
      session("r-1", "recommended"),
      recommendation(),
      { disposition: "reuse", infeasible: true },
      false,
      noop,
    );
    expect(el.querySelector('[data-testid="whatif-result"]')!.textContent).toContain("infeasible");
  });

  it("what-if on the top disposition renders delta 0", () => {
    const rec = recommendation();
    const el = container();
    renderInspection(
      el,
      session("r-1", "recommended"),
      rec,
      { disposition: "repair", row: rec.ranked[0] },
      false,
      noop,
    );
    expect(el.querySelector(".whatif-delta")!.getAttribute("data-raw")).toBe("0");
  });

  it("disables confirm controls once decided", () => {
    const el = container();
    renderInspection(el, session("r-1", "decided", "repair"), recommendation(), null, false, noop);
    const buttons = [...el.querySelectorAll(".confirm-button")] as HTMLButtonElement[];
    expect(buttons.length).toBeGreaterThan(0);
    expect(buttons.every((b) => b.disabled)).toBe(true);
    expect(el.querySelector('[data-testid="decided-note"]')!.textContent).toContain("repair");
  });

  it("confirm button reports the row disposition", () => {
    const el = container();
    const confirmed: string[] = [];
    renderInspection(el, session("r-1", "recommended"), recommendation(), null, false, {
      onWhatIf: () => {},
      onConfirm: (d) => confirmed.push(d),
    });
    const recycleRow = el.querySelector('tr[data-disposition="recycle"]')!;
    (recycleRow.querySelector(".confirm-button") as HTMLElement).click();
    expect(confirmed).toEqual(["recycle"]);
  });

  it("case-based recommendations show supporting cases instead of panels", () => {
    const rec = recommendation({
      rationale: "case-based",
      supporting_cases: ["case-000001", "case-000007"],
      specialist_solutions: { recover: [], redesign: [], disposal: [] },
    });
    const el = container();
    renderInspection(el, session("r-1", "recommended"), rec, null, false, noop);
    expect(el.querySelector('[data-testid="rationale-badge"]')!.textContent).toBe("case-based");
    expect(el.querySelector(".supporting-cases")!.textContent).toContain("case-000001");
    expect(el.querySelector('[data-testid="specialists"]')!.textContent).toContain(
      "Not consulted",
    );
  });
});
