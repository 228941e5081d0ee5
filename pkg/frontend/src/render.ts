/** View layer: pure functions from state to a plain element tree.
 *
 * Every probability shown is a verbatim API value formatted to one decimal
 * place; nothing here normalizes, sums, or otherwise computes with the
 * distributions. The tree is data, so tests can assert on it without a DOM;
 * main.ts materializes it with document.createElement.
 */

import type { ConsoleState } from "./state.js";
import type { Assessment, VitalEntry } from "./types.js";

/** The slice of the network document the renderer needs: row order and
 * state vocabulary. */
export interface NodeInfo {
  name: string;
  states: string[];
}

export interface VNode {
  tag: string;
  attrs: Record<string, string>;
  children: (VNode | string)[];
}

export function h(tag: string, attrs: Record<string, string> = {}, ...children: (VNode | string)[]): VNode {
  return { tag, attrs, children };
}

/** One decimal place, the console's rendered precision for probabilities. */
export function pct(p: number): string {
  return (p * 100).toFixed(1) + "%";
}

/** Mission clock as m:ss (minutes unbounded). */
export function formatClock(ms: number): string {
  const total = Math.max(0, Math.floor(ms / 1000));
  const seconds = total % 60;
  return `${Math.floor(total / 60)}:${String(seconds).padStart(2, "0")}`;
}

/** Golden-window line. The window is inclusive of its end, matching the
 * scoring rubric, so zero remaining still reads as full credit. */
export function formatCountdown(clockMs: number, goldenWindowEndMs: number | null): string {
  if (goldenWindowEndMs === null) return "";
  const remaining = goldenWindowEndMs - clockMs;
  if (remaining < 0) return "golden window closed (late credit)";
  return `golden window ${formatClock(remaining)} remaining (full credit)`;
}

function bar(label: string, p: number): VNode {
  return h(
    "div",
    { class: "bar-row" },
    h("span", { class: "bar-label" }, label),
    h("div", { class: "bar" }, h("div", { class: "bar-fill", style: `width:${pct(p)}` })),
    h("span", { class: "bar-value" }, pct(p)),
  );
}

function vitalRow(node: NodeInfo, entry: VitalEntry | undefined): VNode {
  if (!entry) {
    return h(
      "div",
      { class: "vital-row missing", "data-vital": node.name },
      h("span", { class: "vital-name" }, node.name),
      h("span", { class: "vital-state" }, "no data"),
    );
  }
  const badge = h("span", { class: `badge ${entry.provenance.toLowerCase()}` }, entry.provenance);
  const count = Math.min(node.states.length, entry.distribution.length);
  const bars: VNode[] = [];
  for (let i = 0; i < count; i++) bars.push(bar(node.states[i], entry.distribution[i]));
  return h(
    "div",
    { class: "vital-row", "data-vital": node.name },
    h("span", { class: "vital-name" }, node.name),
    h("span", { class: "vital-state" }, entry.state),
    badge,
    h("div", { class: "bars" }, ...bars),
  );
}

/** Assessment panel: one row per network node, in network order. */
export function renderAssessment(
  report: Assessment | null,
  nodes: NodeInfo[],
  title: string,
): VNode {
  const head = h("h2", {}, title);
  if (!report) {
    return h("section", { class: "assessment" }, head, h("p", { class: "empty" }, "no assessment yet"));
  }
  const meta = h(
    "p",
    { class: "report-meta" },
    `as of ${formatClock(report.report_timestamp_ms)} (model ${report.model_version})`,
  );
  const rows = nodes.map((node) => vitalRow(node, report.vitals[node.name]));
  return h("section", { class: "assessment" }, head, meta, ...rows);
}

export function renderRoster(state: ConsoleState): VNode {
  const rows: VNode[] = [];
  for (const [id, entry] of state.roster) {
    const classes = ["roster-row"];
    if (id === state.selectedId) classes.push("selected");
    let summary = "no report";
    if (entry.impossible) summary = `conflict: ${entry.impossible.code}`;
    else if (entry.report) {
      const hemorrhage = entry.report.vitals["SevereHemorrhage"];
      summary = hemorrhage ? `hemorrhage ${hemorrhage.state}` : "report";
    }
    rows.push(
      h(
        "div",
        { class: classes.join(" "), "data-casualty": id },
        h("span", { class: "roster-id" }, id),
        h("span", { class: "roster-summary" }, summary),
      ),
    );
  }
  if (rows.length === 0) rows.push(h("p", { class: "empty" }, "no casualties yet"));
  return h("section", { class: "roster" }, h("h2", {}, "casualties"), ...rows);
}

export function renderStatus(state: ConsoleState): VNode {
  const model =
    state.modelName === null ? "not connected" : `${state.modelName} ${state.modelVersion}`;
  const parts: (VNode | string)[] = [
    h("span", { class: "status-model" }, model),
    h("span", { class: "status-clock" }, `mission clock ${formatClock(state.clockMs)}`),
  ];
  const countdown = formatCountdown(state.clockMs, state.goldenWindowEndMs);
  if (countdown) parts.push(h("span", { class: "status-window" }, countdown));
  for (const notice of state.notices.slice(-3)) {
    parts.push(h("span", { class: "status-notice" }, notice));
  }
  return h("header", { class: "status" }, ...parts);
}

export function renderDraft(state: ConsoleState): VNode {
  const children: (VNode | string)[] = [h("h2", {}, "what-if draft")];
  if (state.draft.length === 0) {
    children.push(h("p", { class: "empty" }, "nothing staged"));
  }
  for (const item of state.draft) {
    const when = item.timestamp_ms === undefined ? "" : ` @ ${formatClock(item.timestamp_ms)}`;
    children.push(
      h(
        "div",
        { class: "draft-item", "data-vital": item.vital },
        h("span", {}, `${item.vital} = ${item.state}${when}`),
        h("button", { class: "remove", "data-remove": item.vital }, "remove"),
      ),
    );
  }
  for (const result of state.commitLog) {
    const label =
      result.outcome.status === "rejected"
        ? `rejected (${result.outcome.code}: ${result.outcome.reason})`
        : result.outcome.status;
    children.push(
      h(
        "div",
        { class: `commit-result ${result.outcome.status}` },
        `${result.item.vital} = ${result.item.state}: ${label}`,
      ),
    );
  }
  return h("section", { class: "draft" }, ...children);
}

/** Whole-console tree: status bar, roster, committed and what-if panels
 * side by side, then the draft drawer. */
export function renderConsole(state: ConsoleState, nodes: NodeInfo[]): VNode {
  const selected = state.selectedId === null ? null : state.roster.get(state.selectedId);
  const panels: VNode[] = [];
  if (selected?.impossible) {
    panels.push(
      h(
        "section",
        { class: "assessment conflict" },
        h("h2", {}, "committed"),
        h("p", { class: "error" }, `evidence conflict: ${selected.impossible.reason}`),
      ),
    );
  } else {
    panels.push(renderAssessment(selected?.report ?? null, nodes, "committed"));
  }
  if (state.hypothetical) {
    panels.push(renderAssessment(state.hypothetical, nodes, "what-if"));
  }
  return h(
    "div",
    { class: "console" },
    renderStatus(state),
    renderRoster(state),
    h("main", { class: "panels" }, ...panels),
    renderDraft(state),
  );
}
