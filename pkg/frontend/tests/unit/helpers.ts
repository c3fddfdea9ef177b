import { vi } from "vitest";

import { ConsoleApi } from "../../src/api.js";
import { ConsoleApp } from "../../src/app.js";
import type { AppElements } from "../../src/app.js";
import type {
  RecommendationDto,
  SessionDto,
  SustainabilityReportDto,
} from "../../src/types.js";

export const EMPTY_REPORT: SustainabilityReportDto = {
  window: { from: null, to: null },
  total_returns: 0,
  recovery_rate: null,
  landfill_mass_g: 0,
  mean_env_score: null,
  per_disposition_counts: {
    reuse: 0, repair: 0, resale: 0, recycle: 0, redesign: 0, dispose: 0,
  },
};

export function session(
  returnId: string,
  state: SessionDto["state"] = "pending",
  decided: string | null = null,
): SessionDto {
  return {
    return_id: returnId,
    state,
    item: {
      return_id: returnId,
      product_id: "ktl-1",
      reason: "defective",
      cosmetic_grade: 2,
      functional_grade: 1,
      completeness_grade: 3,
      age_months: 36,
      notes: "",
    },
    recommendation: null,
    decided,
  };
}

export function recommendation(overrides: Partial<RecommendationDto> = {}): RecommendationDto {
  return {
    return_id: "r-1",
    ranked: [
      { disposition: "repair", total: 0.575, env: 0.425, econ: 0.15, case: 0.0 },
      { disposition: "recycle", total: 0.32389830508474576, env: 0.23389830508474577, econ: 0.09, case: 0.0 },
      { disposition: "dispose", total: 0.04406779661016949, env: 0.04406779661016949, econ: 0.0, case: 0.0 },
    ],
    supporting_cases: [],
    specialist_solutions: {
      recover: [
        {
          kind: "material_substitution",
          detail: "substitute thermostat module with power cord",
          affected_components: ["thermostat"],
          substitute_material: "m-cord",
        },
      ],
      redesign: [
        {
          kind: "recycled_content_increase",
          detail: "recycled content is 0.26; raise it to at least 0.50",
          target_metric: "recycled_content_fraction",
          suggested_delta: 0.238,
        },
      ],
      disposal: [
        {
          reclaimable_components: ["handle"],
          labeling_actions: [["m-cord", "electronic"], ["m-steel", "metal"]],
          landfill_mass_g: 140.0,
        },
      ],
    },
    rationale: "rule-based escalation",
    compliance: { evaluated: [], total_penalty: 0, compliant: true },
    ...overrides,
  };
}

export interface ServiceDouble {
  sessions: SessionDto[];
  report: SustainabilityReportDto;
  recommendations: Map<string, RecommendationDto>;
  requests: { method: string; path: string; body: unknown }[];
  failNetwork: boolean;
  decisionResponse?: { status: number; body: unknown };
}

/** In-memory stand-in for the decision service behind a fetch stub. */
export function stubService(double: ServiceDouble): void {
  vi.stubGlobal("fetch", async (url: string, init?: RequestInit) => {
    const method = init?.method ?? "GET";
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    const body = init?.body ? JSON.parse(init.body as string) : null;
    double.requests.push({ method, path, body });
    if (double.failNetwork) {
      throw new TypeError("fetch failed");
    }
    const json = (status: number, payload: unknown) =>
      new Response(JSON.stringify(payload), {
        status,
        headers: { "content-type": "application/json" },
      });

    if (method === "GET" && path === "/returns") {
      return json(200, { returns: double.sessions });
    }
    if (method === "GET" && path === "/reports/sustainability") {
      return json(200, double.report);
    }
    const recommendationMatch = path.match(/^\/returns\/([^/]+)\/recommendation$/);
    if (method === "GET" && recommendationMatch) {
      const rec = double.recommendations.get(recommendationMatch[1]);
      if (!rec) return json(404, { code: "not_found", message: "no session", detail: null });
      const owner = double.sessions.find((s) => s.return_id === recommendationMatch[1]);
      if (owner && owner.state === "pending") owner.state = "recommended";
      return json(200, rec);
    }
    const whatIfMatch = path.match(/^\/returns\/([^/]+)\/whatif$/);
    if (method === "POST" && whatIfMatch) {
      const rec = double.recommendations.get(whatIfMatch[1]);
      const row = rec?.ranked.find((r) => r.disposition === body.disposition);
      if (!row) {
        return json(422, {
          code: "infeasible_disposition",
          message: `${body.disposition} is not feasible`,
          detail: null,
        });
      }
      return json(200, row);
    }
    const decisionMatch = path.match(/^\/returns\/([^/]+)\/decision$/);
    if (method === "POST" && decisionMatch) {
      if (double.decisionResponse) {
        return json(double.decisionResponse.status, double.decisionResponse.body);
      }
      const owner = double.sessions.find((s) => s.return_id === decisionMatch[1]);
      if (owner) {
        owner.state = "decided";
        owner.decided = body.disposition;
      }
      return json(200, {
        sequence: 1,
        timestamp: "2024-01-01T00:00:00+00:00",
        return_id: decisionMatch[1],
        product_id: "ktl-1",
        chosen: body.disposition,
        recommendation_rank_of_chosen: 1,
        env_score_of_chosen: 0.85,
        landfill_mass_g: 0,
      });
    }
    if (method === "POST" && path === "/returns") {
      const created = session(body.return_id, "pending");
      double.sessions.push(created);
      return json(201, created);
    }
    return json(404, { code: "not_found", message: `no route ${method} ${path}`, detail: null });
  });
}

export function makeApp(pollIntervalMs = 2000): { app: ConsoleApp; els: AppElements } {
  document.body.innerHTML = `
    <div id="banner"></div>
    <div id="intake"></div>
    <div id="queue"></div>
    <div id="inspection"></div>
    <div id="dashboard"></div>
  `;
  const els: AppElements = {
    banner: document.getElementById("banner")!,
    intake: document.getElementById("intake")!,
    queue: document.getElementById("queue")!,
    inspection: document.getElementById("inspection")!,
    dashboard: document.getElementById("dashboard")!,
  };
  const app = new ConsoleApp(els, new ConsoleApi("http://svc.test"), pollIntervalMs);
  return { app, els };
}

export function freshDouble(): ServiceDouble {
  return {
    sessions: [],
    report: { ...EMPTY_REPORT, per_disposition_counts: { ...EMPTY_REPORT.per_disposition_counts } },
    recommendations: new Map(),
    requests: [],
    failNetwork: false,
  };
}
