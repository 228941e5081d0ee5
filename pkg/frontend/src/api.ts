/** HTTP client for the fusion service.
 *
 * Everything the console displays comes back through this interface; the
 * console itself never computes a probability. Tests substitute a fake
 * implementation to intercept traffic.
 */

import type { Ack, Assessment, DraftItem, NetworkDoc, SessionInfo } from "./types.js";

export interface EvidenceSubmission {
  vital: string;
  state: string;
  source: string;
  timestamp_ms: number;
  model_version?: string;
}

/** A structured API rejection (4xx with a machine-readable code). */
export class ApiError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(status: number, code: string, reason: string) {
    super(reason);
    this.name = "ApiError";
    this.status = status;
    this.code = code;
  }
}

export interface ApiClient {
  submitEvidence(casualtyId: string, item: EvidenceSubmission): Promise<Ack>;
  getAssessment(casualtyId: string): Promise<Assessment>;
  whatIf(casualtyId: string | null, overlay: DraftItem[]): Promise<Assessment>;
  getSession(): Promise<SessionInfo>;
  getNetwork(): Promise<NetworkDoc>;
}

export class HttpApiClient implements ApiClient {
  readonly baseUrl: string;

  constructor(baseUrl: string) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  /** ws:// or wss:// address of the live assessment stream. */
  streamUrl(): string {
    return this.baseUrl.replace(/^http/, "ws") + "/api/stream";
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? {} : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let code = `HTTP_${response.status}`;
      let reason = response.statusText;
      try {
        const detail = (await response.json()).detail;
        if (detail && typeof detail === "object") {
          code = detail.code ?? code;
          reason = detail.reason ?? reason;
        }
      } catch {
        /* non-JSON error body, keep the status line */
      }
      throw new ApiError(response.status, code, reason);
    }
    return (await response.json()) as T;
  }

  submitEvidence(casualtyId: string, item: EvidenceSubmission): Promise<Ack> {
    return this.request("POST", `/api/casualties/${encodeURIComponent(casualtyId)}/evidence`, item);
  }

  getAssessment(casualtyId: string): Promise<Assessment> {
    return this.request("GET", `/api/casualties/${encodeURIComponent(casualtyId)}/assessment`);
  }

  whatIf(casualtyId: string | null, overlay: DraftItem[]): Promise<Assessment> {
    const body = casualtyId === null ? { overlay } : { casualty_id: casualtyId, overlay };
    return this.request("POST", "/api/whatif", body);
  }

  getSession(): Promise<SessionInfo> {
    return this.request("GET", "/api/session");
  }

  getNetwork(): Promise<NetworkDoc> {
    return this.request("GET", "/api/network");
  }
}
