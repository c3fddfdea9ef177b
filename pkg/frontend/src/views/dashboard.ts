import { clear, h } from "../dom.js";
import { DISPOSITIONS } from "../types.js";
import type { SustainabilityReportDto } from "../types.js";

/** Sustainability dashboard; every number is rendered straight from the
 * report body with its raw value kept in data-raw. */
export function renderDashboard(root: HTMLElement, report: SustainabilityReportDto): void {
  clear(root);
  root.append(h("h2", {}, ["Sustainability"]));

  const rate = report.recovery_rate;
  const mean = report.mean_env_score;
  const metric = (label: string, testid: string, raw: string, shown: string) =>
    h("div", { class: "metric" }, [
      h("span", { class: "metric-label" }, [label]),
      h("span", { class: "metric-value", "data-testid": testid, "data-raw": raw }, [shown]),
    ]);

  root.append(
    h("div", { class: "metrics" }, [
      metric("decided returns", "total-returns", String(report.total_returns),
        String(report.total_returns)),
      metric("recovery rate", "recovery-rate",
        rate === null ? "null" : String(rate),
        rate === null ? "n/a" : `${(rate * 100).toFixed(1)}%`),
      metric("landfill mass", "landfill-mass", String(report.landfill_mass_g),
        `${report.landfill_mass_g.toFixed(1)} g`),
      metric("mean env score", "mean-env-score",
        mean === null ? "null" : String(mean),
        mean === null ? "n/a" : mean.toFixed(3)),
    ]),
  );

  const table = h("table", { class: "disposition-counts", "data-testid": "disposition-counts" });
  table.append(h("tr", {}, [h("th", {}, ["disposition"]), h("th", {}, ["count"])]));
  for (const disposition of DISPOSITIONS) {
    const count = report.per_disposition_counts[disposition] ?? 0;
    table.append(
      h("tr", { "data-disposition": disposition }, [
        h("td", {}, [disposition]),
        h("td", { "data-raw": String(count) }, [String(count)]),
      ]),
    );
  }
  root.append(table);
}
