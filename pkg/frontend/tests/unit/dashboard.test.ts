import { describe, expect, it } from "vitest";

import { renderDashboard } from "../../src/views/dashboard.js";
import { EMPTY_REPORT } from "./helpers.js";

function container(): HTMLElement {
  document.body.innerHTML = `<div id="dashboard"></div>`;
  return document.getElementById("dashboard")!;
}

describe("dashboard", () => {
  it("renders absent rates as n/a, never NaN", () => {
    const el = container();
    renderDashboard(el, EMPTY_REPORT);
    const rate = el.querySelector('[data-testid="recovery-rate"]')!;
    expect(rate.textContent).toBe("n/a");
    expect(rate.getAttribute("data-raw")).toBe("null");
    expect(el.textContent).not.toContain("NaN");
  });

  it("keeps the raw recovery rate verbatim from the body", () => {
    const el = container();
    renderDashboard(el, {
      ...EMPTY_REPORT,
      total_returns: 10,
      recovery_rate: 0.8,
      landfill_mass_g: 140.5,
      mean_env_score: 0.7541,
      per_disposition_counts: {
        reuse: 1, repair: 5, resale: 1, recycle: 1, redesign: 0, dispose: 2,
      },
    });
    expect(el.querySelector('[data-testid="recovery-rate"]')!.getAttribute("data-raw")).toBe("0.8");
    expect(el.querySelector('[data-testid="total-returns"]')!.getAttribute("data-raw")).toBe("10");
    expect(el.querySelector('[data-testid="landfill-mass"]')!.getAttribute("data-raw")).toBe("140.5");
  });

  it("lists all six dispositions", () => {
    const el = container();
    renderDashboard(el, EMPTY_REPORT);
    const rows = el.querySelectorAll("table.disposition-counts tr[data-disposition]");
    expect(rows).toHaveLength(6);
  });
});
