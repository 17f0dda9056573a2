/** Thin client for the planning API; all values pass through untouched. */

import type { MapMeta, PredictRequest, PredictResponse } from "./types.js";

export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, detail: string) {
    super(`API ${status}: ${detail}`);
    this.status = status;
  }
}

export interface PredictClient {
  getMeta(): Promise<MapMeta>;
  predict(request: PredictRequest, signal?: AbortSignal): Promise<PredictResponse>;
}

export class ApiClient implements PredictClient {
  constructor(private readonly baseUrl: string) {}

  async getMeta(): Promise<MapMeta> {
    const response = await fetch(`${this.baseUrl}/map/meta`);
    if (!response.ok) {
      throw new ApiError(response.status, await response.text());
    }
    return (await response.json()) as MapMeta;
  }

  async predict(
    request: PredictRequest,
    signal?: AbortSignal,
  ): Promise<PredictResponse> {
    const response = await fetch(`${this.baseUrl}/predict`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(request),
      signal,
    });
    if (!response.ok) {
      throw new ApiError(response.status, await response.text());
    }
    return (await response.json()) as PredictResponse;
  }
}
