/** Test doubles and element-tree utilities.
 *
 * FakeApi stands in for the HTTP client and records every call, which is
 * how the thin-client rule is checked: the console's entire traffic is
 * visible to the test.
 */

import { ApiError, type ApiClient, type EvidenceSubmission } from "../src/api.js";
import type { Ack, Assessment, DraftItem, NetworkDoc, SessionInfo } from "../src/types.js";
import type { VNode } from "../src/render.js";
import { COMMITTED, HYPOTHETICAL, NODES } from "./fixtures.js";

export class FakeApi implements ApiClient {
  /** Chronological record of every call kind. */
  calls: string[] = [];
  submits: { casualtyId: string; item: EvidenceSubmission }[] = [];
  whatifs: { casualtyId: string | null; overlay: DraftItem[] }[] = [];
  /** Vitals whose submission the fake rejects with INVALID_STATE. */
  rejectVitals = new Set<string>();
  whatifResponse: Assessment = HYPOTHETICAL;

  async submitEvidence(casualtyId: string, item: EvidenceSubmission): Promise<Ack> {
    this.calls.push("submitEvidence");
    this.submits.push({ casualtyId, item });
    if (this.rejectVitals.has(item.vital)) {
      throw new ApiError(422, "INVALID_STATE", `node ${item.vital} rejects ${item.state}`);
    }
    return {
      status: "accepted",
      casualty_id: casualtyId,
      vital: item.vital,
      timestamp_ms: item.timestamp_ms,
    };
  }

  async getAssessment(casualtyId: string): Promise<Assessment> {
    this.calls.push("getAssessment");
    return { ...COMMITTED, casualty_id: casualtyId };
  }

  async whatIf(casualtyId: string | null, overlay: DraftItem[]): Promise<Assessment> {
    this.calls.push("whatIf");
    this.whatifs.push({ casualtyId, overlay: overlay.map((o) => ({ ...o })) });
    return this.whatifResponse;
  }

  async getSession(): Promise<SessionInfo> {
    this.calls.push("getSession");
    return {
      model_name: "casualty-triage",
      model_version: "1.0.0",
      clock_ms: 0,
      golden_window_end_ms: 900000,
      casualty_ids: ["c01"],
    };
  }

  async getNetwork(): Promise<NetworkDoc> {
    this.calls.push("getNetwork");
    return {
      name: "casualty-triage",
      version: "1.0.0",
      nodes: NODES.map((n) => ({ ...n, parents: [], cpt: [] })),
    };
  }
}

/** Depth-first text fragments of a rendered tree. */
export function texts(node: VNode | string): string[] {
  if (typeof node === "string") return [node];
  return node.children.flatMap(texts);
}

export function textOf(node: VNode | string): string {
  return texts(node).join(" ");
}

export function findAll(node: VNode | string, pred: (v: VNode) => boolean): VNode[] {
  if (typeof node === "string") return [];
  const here = pred(node) ? [node] : [];
  return here.concat(node.children.flatMap((c) => findAll(c, pred)));
}

/** Nodes whose class attribute contains the given token. */
export function byClass(node: VNode | string, cls: string): VNode[] {
  return findAll(node, (v) => (v.attrs.class ?? "").split(" ").includes(cls));
}
