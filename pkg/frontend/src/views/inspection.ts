import { clear, h, scoreCell } from "../dom.js";
import { DISPOSITIONS } from "../types.js";
import type { RecommendationDto, SessionDto } from "../types.js";

export interface WhatIfResult {
  disposition: string;
  row?: { total: number; env: number; econ: number; case: number };
  infeasible?: boolean;
  error?: string;
}

export interface InspectionCallbacks {
  onWhatIf(disposition: string): void;
  onConfirm(disposition: string): void;
}

function rationaleBadge(rationale: string): HTMLElement {
  const escalated = rationale === "rule-based escalation";
  return h(
    "span",
    {
      class: `badge ${escalated ? "badge-escalation" : "badge-case-based"}`,
      "data-testid": "rationale-badge",
    },
    [rationale],
  );
}

/** Stacked component bar: env first and widest-colored, then econ, then case,
 * all scaled against the top total so the ranking reads at a glance. */
function scoreBar(row: { total: number; env: number; econ: number; case: number }, topTotal: number): HTMLElement {
  const scale = topTotal > 0 ? 100 / topTotal : 0;
  const segment = (cls: string, value: number) =>
    h("span", { class: `bar-segment ${cls}`, style: `width:${(value * scale).toFixed(2)}%` });
  return h("span", { class: "score-bar" }, [
    segment("bar-env", row.env),
    segment("bar-econ", row.econ),
    segment("bar-case", row.case),
  ]);
}

export function renderInspection(
  root: HTMLElement,
  session: SessionDto,
  recommendation: RecommendationDto,
  whatIf: WhatIfResult | null,
  busy: boolean,
  callbacks: InspectionCallbacks,
): void {
  clear(root);
  root.append(
    h("h2", {}, [`Inspection - ${session.return_id}`]),
    h("p", { class: "inspection-meta" }, [
      `product ${session.item.product_id}, grades c${session.item.cosmetic_grade}/` +
        `f${session.item.functional_grade}/k${session.item.completeness_grade}, ` +
        `${session.item.age_months} months`,
      rationaleBadge(recommendation.rationale),
    ]),
  );

  const ranked = recommendation.ranked;
  const topTotal = ranked.length > 0 ? ranked[0].total : 0;
  const table = h("table", { class: "ranking", "data-testid": "ranking" });
  table.append(
    h("tr", {}, ["rank", "disposition", "total", "env", "econ", "case", "", ""].map((t) =>
      h("th", {}, [t]),
    )),
  );
  ranked.forEach((row, index) => {
    const confirm = h(
      "button",
      { class: "confirm-button", "data-disposition": row.disposition },
      [session.state === "decided" ? "decided" : "confirm"],
    ) as HTMLButtonElement;
    confirm.disabled = busy || session.state === "decided";
    confirm.addEventListener("click", () => callbacks.onConfirm(row.disposition));
    const tr = h(
      "tr",
      {
        class: index === 0 ? "top-ranked" : "",
        "data-disposition": row.disposition,
      },
      [
        h("td", {}, [index === 0 ? "1 ★" : String(index + 1)]),
        h("td", {}, [row.disposition]),
        scoreCell("td", "score total", row.total),
        scoreCell("td", "score env", row.env),
        scoreCell("td", "score econ", row.econ),
        scoreCell("td", "score case", row.case),
        h("td", {}, [scoreBar(row, topTotal)]),
        h("td", {}, [confirm]),
      ],
    );
    table.append(tr);
  });
  root.append(table);

  if (session.state === "decided" && session.decided) {
    root.append(
      h("p", { class: "decided-note", "data-testid": "decided-note" }, [
        `Decided: ${session.decided}`,
      ]),
    );
  }

  root.append(renderWhatIfPanel(ranked.map((r) => r.disposition), whatIf, topTotal, busy, callbacks));
  root.append(renderCompliance(recommendation));
  root.append(renderSupport(recommendation));
  root.append(renderSpecialists(recommendation));
}

function renderWhatIfPanel(
  feasible: string[],
  result: WhatIfResult | null,
  topTotal: number,
  busy: boolean,
  callbacks: InspectionCallbacks,
): HTMLElement {
  const panel = h("section", { class: "whatif", "data-testid": "whatif-panel" });
  panel.append(h("h3", {}, ["What-if"]));
  const buttons = h("div", { class: "whatif-buttons" });
  for (const disposition of DISPOSITIONS) {
    const button = h(
      "button",
      { class: "whatif-button", "data-disposition": disposition },
      [disposition],
    ) as HTMLButtonElement;
    button.disabled = busy;
    button.addEventListener("click", () => callbacks.onWhatIf(disposition));
    buttons.append(button);
  }
  panel.append(buttons);
  if (result) {
    if (result.infeasible) {
      panel.append(
        h("p", { class: "whatif-infeasible", "data-testid": "whatif-result" }, [
          `${result.disposition}: infeasible for this return`,
        ]),
      );
    } else if (result.row) {
      const delta = result.row.total - topTotal;
      const body = h("p", { class: "whatif-scores", "data-testid": "whatif-result" }, [
        `${result.disposition}: total `,
        scoreCell("span", "score total", result.row.total),
        " env ",
        scoreCell("span", "score env", result.row.env),
        " econ ",
        scoreCell("span", "score econ", result.row.econ),
        " case ",
        scoreCell("span", "score case", result.row.case),
        " delta vs top ",
        h("span", { class: "whatif-delta", "data-raw": String(delta) }, [
          `${delta >= 0 ? "+" : ""}${delta.toFixed(3)}`,
        ]),
      ]);
      panel.append(body);
    } else if (result.error) {
      panel.append(
        h("p", { class: "whatif-error", "data-testid": "whatif-result" }, [result.error]),
      );
    }
  }
  return panel;
}

function renderCompliance(recommendation: RecommendationDto): HTMLElement {
  const section = h("section", { class: "compliance", "data-testid": "compliance" });
  section.append(h("h3", {}, ["Rule violations"]));
  const compliance = recommendation.compliance;
  if (!compliance || compliance.evaluated.length === 0) {
    section.append(h("p", { class: "empty-state" }, ["No environmental rules configured."]));
    return section;
  }
  const failed = compliance.evaluated.filter((r) => !r.passed);
  if (failed.length === 0) {
    section.append(h("p", { class: "compliant" }, ["All rules pass."]));
    return section;
  }
  const list = h("ul", { class: "violations" });
  for (const rule of failed) {
    list.append(h("li", {}, [`${rule.rule_id}: observed ${rule.observed.toFixed(3)}`]));
  }
  section.append(list, h("p", {}, [`total penalty ${compliance.total_penalty.toFixed(3)}`]));
  return section;
}

function renderSupport(recommendation: RecommendationDto): HTMLElement {
  const section = h("section", { class: "supporting-cases" });
  section.append(h("h3", {}, ["Supporting cases"]));
  if (recommendation.supporting_cases.length === 0) {
    section.append(h("p", { class: "empty-state" }, ["None (no usable precedent)."]));
  } else {
    section.append(
      h("ul", {}, recommendation.supporting_cases.map((id) => h("li", {}, [id]))),
    );
  }
  return section;
}

function renderSpecialists(recommendation: RecommendationDto): HTMLElement {
  const { recover, redesign, disposal } = recommendation.specialist_solutions;
  const section = h("section", { class: "specialists", "data-testid": "specialists" });
  section.append(h("h3", {}, ["Specialist solutions"]));
  if (recommendation.rationale !== "rule-based escalation") {
    section.append(h("p", { class: "empty-state" }, ["Not consulted (case-based decision)."]));
    return section;
  }

  const recoverPanel = h("div", { class: "panel panel-recover" }, [h("h4", {}, ["Recover"])]);
  recoverPanel.append(
    recover.length === 0
      ? h("p", { class: "empty-state" }, ["No recovery options."])
      : h("ul", {}, recover.map((s) =>
          h("li", {}, [
            `${s.kind}: ${s.detail}` +
              (s.substitute_material ? ` [substitute: ${s.substitute_material}]` : ""),
          ]),
        )),
  );

  const redesignPanel = h("div", { class: "panel panel-redesign" }, [h("h4", {}, ["Redesign"])]);
  redesignPanel.append(
    redesign.length === 0
      ? h("p", { class: "empty-state" }, ["No redesign advice."])
      : h("ul", {}, redesign.map((a) =>
          h("li", {}, [`${a.kind}: ${a.detail} (${a.target_metric} ${a.suggested_delta >= 0 ? "+" : ""}${a.suggested_delta.toFixed(2)})`]),
        )),
  );

  const disposalPanel = h("div", { class: "panel panel-disposal" }, [h("h4", {}, ["Disposal"])]);
  for (const plan of disposal) {
    disposalPanel.append(
      h("p", {}, [
        `reclaimable: ${plan.reclaimable_components.join(", ") || "none"}; landfill `,
        h("span", { "data-raw": String(plan.landfill_mass_g) }, [
          `${plan.landfill_mass_g.toFixed(1)} g`,
        ]),
      ]),
      h("ul", {}, plan.labeling_actions.map(([materialId, label]) =>
        h("li", {}, [`label ${materialId} as ${label}`]),
      )),
    );
  }
  if (disposal.length === 0) {
    disposalPanel.append(h("p", { class: "empty-state" }, ["No disposal plan."]));
  }

  section.append(recoverPanel, redesignPanel, disposalPanel);
  return section;
}
