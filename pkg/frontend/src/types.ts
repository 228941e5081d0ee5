/** Wire types mirroring the fusion API's JSON bodies. */

export interface VitalEntry {
  state: string;
  provenance: "Observed" | "Inferred";
  distribution: number[];
}

export interface Assessment {
  casualty_id: string;
  report_timestamp_ms: number;
  model_version: string;
  vitals: Record<string, VitalEntry>;
}

export interface Ack {
  status: "accepted" | "superseded";
  casualty_id: string;
  vital: string;
  timestamp_ms: number;
}

export interface Rejection {
  status: "rejected";
  code: string;
  reason: string;
}

export interface SessionInfo {
  model_name: string;
  model_version: string;
  clock_ms: number;
  golden_window_end_ms: number | null;
  casualty_ids: string[];
}

export interface NetworkNode {
  name: string;
  states: string[];
  parents: string[];
  cpt: number[][];
}

export interface NetworkDoc {
  name: string;
  version: string;
  nodes: NetworkNode[];
}

/** One staged what-if edit. Timestamp is optional; the server (and the
 * commit path) default it past everything already recorded. */
export interface DraftItem {
  vital: string;
  state: string;
  timestamp_ms?: number;
}

export type StreamMessage =
  | ({ type: "hello" } & SessionInfo)
  | ({ type: "assessment" } & Assessment)
  | { type: "impossible"; casualty_id: string; code: string; reason: string }
  | { type: "model"; name: string; version: string };
