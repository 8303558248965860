import type {
  GroupsResponse,
  OverlayResponse,
  RerankResponse,
  RunDocument,
  RunSummary,
  Weights,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

/** Thin typed client over the results service. A fetch implementation can be
 * injected, which the tests use to simulate slow and out-of-order replies. */
export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async get<T>(path: string): Promise<T> {
    const res = await this.fetchImpl(this.baseUrl + path);
    if (!res.ok) throw new ApiError(res.status, `GET ${path} -> ${res.status}`);
    return (await res.json()) as T;
  }

  listRuns(): Promise<RunSummary[]> {
    return this.get("/runs");
  }

  getRun(
    runId: string,
    filters?: { minActivities?: number; contains?: string; minSupport?: number },
  ): Promise<RunDocument> {
    const params = new URLSearchParams();
    if (filters?.minActivities) params.set("min_activities", String(filters.minActivities));
    if (filters?.contains) params.set("contains", filters.contains);
    if (filters?.minSupport) params.set("min_support", String(filters.minSupport));
    const qs = params.toString();
    return this.get(`/runs/${runId}` + (qs ? `?${qs}` : ""));
  }

  async rerank(runId: string, weights: Weights): Promise<RerankResponse> {
    const res = await this.fetchImpl(`${this.baseUrl}/runs/${runId}/rerank`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(weights),
    });
    if (!res.ok) throw new ApiError(res.status, `rerank -> ${res.status}`);
    return (await res.json()) as RerankResponse;
  }

  overlay(runId: string, rank: number, attribute: string): Promise<OverlayResponse> {
    return this.get(`/runs/${runId}/lpms/${rank}/overlay?attribute=${encodeURIComponent(attribute)}`);
  }

  groups(runId: string, strategy: "alphabet" | "ranking"): Promise<GroupsResponse> {
    return this.get(`/runs/${runId}/groups?strategy=${strategy}`);
  }
}
