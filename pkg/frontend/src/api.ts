import type { TrialCreatedPayload, TrialStatusPayload, WhatIfPayload } from "./types.js";

/** Error carrying the HTTP status and the server's reason. */
export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    const reason =
      typeof body === "object" && body !== null && "error" in body
        ? String((body as { error: unknown }).error)
        : `request failed with status ${response.status}`;
    throw new ApiError(response.status, reason);
  }
  return body as T;
}

/** Thin typed client over the dosepath service. */
export class ApiClient {
  constructor(private readonly base: string = "") {}

  createTrial(doses: number, cohortSizes?: number[]): Promise<TrialCreatedPayload> {
    const body: Record<string, unknown> = { doses };
    if (cohortSizes !== undefined) body.cohort_sizes = cohortSizes;
    return request(`${this.base}/trials`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  getTrial(id: string): Promise<TrialStatusPayload> {
    return request(`${this.base}/trials/${encodeURIComponent(id)}`);
  }

  submitOutcome(id: string, size: number, dlts: number): Promise<TrialStatusPayload> {
    return request(`${this.base}/trials/${encodeURIComponent(id)}/outcomes`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ size, dlts }),
    });
  }

  undo(id: string): Promise<TrialStatusPayload> {
    return request(`${this.base}/trials/${encodeURIComponent(id)}/undo`, {
      method: "POST",
    });
  }

  whatIf(id: string): Promise<WhatIfPayload> {
    return request(`${this.base}/trials/${encodeURIComponent(id)}/whatif`);
  }
}
