/** Staging and committing what-if evidence.
 *
 * Staging only ever calls POST /api/whatif, which mutates nothing on the
 * server; the hypothetical report it returns is shown beside the committed
 * one. Committing submits exactly one evidence POST per staged item, in
 * stage order, then clears the draft. A rejected item is reported inline
 * and does not stop the remaining submissions.
 */

import { ApiError, type ApiClient } from "./api.js";
import { stageItem, type CommitResult, type ConsoleState } from "./state.js";
import type { DraftItem } from "./types.js";

/** Stage one edit (last write per vital wins) and refresh the side panel. */
export async function stageAndPreview(
  api: ApiClient,
  state: ConsoleState,
  item: DraftItem,
): Promise<void> {
  stageItem(state, item);
  state.hypothetical = await api.whatIf(state.selectedId, state.draft);
}

/** Re-run the preview for the current draft (after removing an item). */
export async function refreshPreview(api: ApiClient, state: ConsoleState): Promise<void> {
  state.hypothetical = state.draft.length === 0 ? null : await api.whatIf(state.selectedId, state.draft);
}

/** Commit the draft to the selected casualty's ledger.
 *
 * Items without an explicit timestamp get mission clock + 1 + position,
 * mirroring how the what-if endpoint defaults them, so the committed
 * outcome matches the staged preview. The active model version is pinned
 * on each submission; a hot-swap between staging and commit rejects
 * cleanly instead of recording evidence against the wrong model.
 */
export async function commitDraft(api: ApiClient, state: ConsoleState): Promise<CommitResult[]> {
  if (state.selectedId === null) throw new Error("no casualty selected");
  const items = [...state.draft];
  const results: CommitResult[] = [];
  for (let i = 0; i < items.length; i++) {
    const item = items[i];
    const submission = {
      vital: item.vital,
      state: item.state,
      source: "console",
      timestamp_ms: item.timestamp_ms ?? state.clockMs + 1 + i,
      model_version: state.modelVersion ?? undefined,
    };
    try {
      results.push({ item, outcome: await api.submitEvidence(state.selectedId, submission) });
    } catch (err) {
      if (!(err instanceof ApiError)) throw err;
      results.push({
        item,
        outcome: { status: "rejected", code: err.code, reason: err.message },
      });
    }
  }
  state.draft = [];
  state.hypothetical = null;
  state.commitLog = results;
  return results;
}
