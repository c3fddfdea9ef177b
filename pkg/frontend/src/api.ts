import type {
  DecisionEntryDto,
  RankedRowDto,
  RecommendationDto,
  ReturnedItemDto,
  SessionDto,
  SustainabilityReportDto,
} from "./types.js";

/** Service answered with an error body ({code, message, detail}). */
export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
    public readonly detail: unknown = null,
  ) {
    super(message);
  }
}

/** The service could not be reached at all. */
export class OfflineError extends Error {
  constructor(cause: unknown) {
    super(`service unreachable: ${String(cause)}`);
  }
}

export class ConsoleApi {
  constructor(private readonly baseUrl: string) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await fetch(this.baseUrl + path, init);
    } catch (err) {
      throw new OfflineError(err);
    }
    const body = await response.json().catch(() => null);
    if (!response.ok) {
      const code = body && typeof body.code === "string" ? body.code : "error";
      const message = body && typeof body.message === "string" ? body.message : response.statusText;
      throw new ApiError(response.status, code, message, body ? body.detail : null);
    }
    return body as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  async listReturns(): Promise<SessionDto[]> {
    const body = await this.request<{ returns: SessionDto[] }>("/returns");
    return body.returns;
  }

  getSession(returnId: string): Promise<SessionDto> {
    return this.request(`/returns/${encodeURIComponent(returnId)}`);
  }

  getRecommendation(returnId: string): Promise<RecommendationDto> {
    return this.request(`/returns/${encodeURIComponent(returnId)}/recommendation`);
  }

  whatIf(returnId: string, disposition: string): Promise<RankedRowDto> {
    return this.post(`/returns/${encodeURIComponent(returnId)}/whatif`, { disposition });
  }

  decide(returnId: string, disposition: string): Promise<DecisionEntryDto> {
    return this.post(`/returns/${encodeURIComponent(returnId)}/decision`, { disposition });
  }

  createReturn(item: ReturnedItemDto): Promise<SessionDto> {
    return this.post("/returns", item);
  }

  sustainability(): Promise<SustainabilityReportDto> {
    return this.request("/reports/sustainability");
  }
}
