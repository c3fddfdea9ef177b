// Payload shapes of the decision-service HTTP API. The console renders these
// verbatim; it never derives scores of its own.

export type SessionState = "pending" | "recommended" | "decided";

export const DISPOSITIONS = [
  "reuse",
  "resale",
  "repair",
  "redesign",
  "recycle",
  "dispose",
] as const;
export type Disposition = (typeof DISPOSITIONS)[number];

export interface ReturnedItemDto {
  return_id: string;
  product_id: string;
  reason: string;
  cosmetic_grade: number;
  functional_grade: number;
  completeness_grade: number;
  age_months: number;
  notes: string;
}

export interface RankedRowDto {
  disposition: string;
  total: number;
  env: number;
  econ: number;
  case: number;
}

export interface RecoverySolutionDto {
  kind: string;
  detail: string;
  affected_components: string[];
  substitute_material: string | null;
}

export interface RedesignAdviceDto {
  kind: string;
  detail: string;
  target_metric: string;
  suggested_delta: number;
}

export interface DisposalPlanDto {
  reclaimable_components: string[];
  labeling_actions: [string, string][];
  landfill_mass_g: number;
}

export interface ComplianceDto {
  evaluated: { rule_id: string; passed: boolean; observed: number }[];
  total_penalty: number;
  compliant: boolean;
}

export interface RecommendationDto {
  return_id: string;
  ranked: RankedRowDto[];
  supporting_cases: string[];
  specialist_solutions: {
    recover: RecoverySolutionDto[];
    redesign: RedesignAdviceDto[];
    disposal: DisposalPlanDto[];
  };
  rationale: string;
  compliance?: ComplianceDto;
}

export interface SessionDto {
  return_id: string;
  state: SessionState;
  item: ReturnedItemDto;
  recommendation: RecommendationDto | null;
  decided: string | null;
}

export interface DecisionEntryDto {
  sequence: number;
  timestamp: string;
  return_id: string;
  product_id: string;
  chosen: string;
  recommendation_rank_of_chosen: number;
  env_score_of_chosen: number;
  landfill_mass_g: number;
}

export interface SustainabilityReportDto {
  window: { from: string | null; to: string | null };
  total_returns: number;
  recovery_rate: number | null;
  landfill_mass_g: number;
  mean_env_score: number | null;
  per_disposition_counts: Record<string, number>;
}

export interface ConsoleConfig {
  baseUrl: string;
  pollIntervalMs: number;
}
