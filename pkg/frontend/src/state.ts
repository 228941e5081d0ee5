/** Client-side session state: a roster mirroring the stream, the selected
 * casualty, and the uncommitted what-if draft.
 *
 * Single user per tab. Stream updates and user edits reconcile here with
 * last-write-wins on the draft only; server state is only ever changed by
 * an explicit commit.
 */

import type { Ack, Assessment, DraftItem, Rejection, SessionInfo, StreamMessage } from "./types.js";

export interface RosterEntry {
  report: Assessment | null;
  /** Set when the server reports the casualty's evidence as contradictory. */
  impossible: { code: string; reason: string } | null;
}

export interface CommitResult {
  item: DraftItem;
  outcome: Ack | Rejection;
}

export interface ConsoleState {
  modelName: string | null;
  modelVersion: string | null;
  clockMs: number;
  goldenWindowEndMs: number | null;
  roster: Map<string, RosterEntry>;
  selectedId: string | null;
  draft: DraftItem[];
  /** Latest what-if response, shown beside the committed assessment. */
  hypothetical: Assessment | null;
  /** Per-item outcomes of the most recent commit, rendered inline. */
  commitLog: CommitResult[];
  notices: string[];
}

export function newConsoleState(): ConsoleState {
  return {
    modelName: null,
    modelVersion: null,
    clockMs: 0,
    goldenWindowEndMs: null,
    roster: new Map(),
    selectedId: null,
    draft: [],
    hypothetical: null,
    commitLog: [],
    notices: [],
  };
}

function rosterEntry(state: ConsoleState, casualtyId: string): RosterEntry {
  let entry = state.roster.get(casualtyId);
  if (!entry) {
    entry = { report: null, impossible: null };
    state.roster.set(casualtyId, entry);
  }
  return entry;
}

export function applyHello(state: ConsoleState, hello: SessionInfo): void {
  state.modelName = hello.model_name;
  state.modelVersion = hello.model_version;
  state.clockMs = Math.max(state.clockMs, hello.clock_ms);
  state.goldenWindowEndMs = hello.golden_window_end_ms;
  for (const id of hello.casualty_ids) rosterEntry(state, id);
}

export function applyStreamMessage(state: ConsoleState, msg: StreamMessage): void {
  switch (msg.type) {
    case "hello":
      applyHello(state, msg);
      return;
    case "assessment": {
      const { type: _tag, ...report } = msg;
      const entry = rosterEntry(state, msg.casualty_id);
      entry.report = report;
      entry.impossible = null;
      state.clockMs = Math.max(state.clockMs, msg.report_timestamp_ms);
      return;
    }
    case "impossible": {
      const entry = rosterEntry(state, msg.casualty_id);
      entry.impossible = { code: msg.code, reason: msg.reason };
      return;
    }
    case "model":
      // A hot-swap drops every ledger server-side; mirror that rather than
      // show assessments from a model that no longer exists.
      state.modelName = msg.name;
      state.modelVersion = msg.version;
      state.roster.clear();
      state.selectedId = null;
      state.draft = [];
      state.hypothetical = null;
      state.notices.push(`model swapped to ${msg.name} ${msg.version}, roster reset`);
      return;
  }
}

export function selectCasualty(state: ConsoleState, casualtyId: string | null): void {
  if (state.selectedId === casualtyId) return;
  state.selectedId = casualtyId;
  // The draft is an overlay on one casualty's ledger; it does not carry over.
  state.draft = [];
  state.hypothetical = null;
  state.commitLog = [];
}

/** Stage one edit. Last write wins per vital; order of first staging is kept. */
export function stageItem(state: ConsoleState, item: DraftItem): void {
  const existing = state.draft.findIndex((d) => d.vital === item.vital);
  if (existing >= 0) state.draft[existing] = item;
  else state.draft.push(item);
}

export function removeDraftItem(state: ConsoleState, vital: string): void {
  state.draft = state.draft.filter((d) => d.vital !== vital);
  if (state.draft.length === 0) state.hypothetical = null;
}

/** Drop the draft. Makes no server call, so it is side-effect-free there. */
export function discardDraft(state: ConsoleState): void {
  state.draft = [];
  state.hypothetical = null;
  state.commitLog = [];
}
