/** Batch browser model: rank badges, threshold filtering, row actions. */

import type { BatchDoc, OutputSummaryDoc } from "./api.js";

export interface BrowserRow {
  outputId: string;
  rank: number;
  distance: number;
  badge: string; // e.g. "#1"
  isBest: boolean;
}

export function browserRows(batch: BatchDoc, threshold?: number): BrowserRow[] {
  const rows = batch.outputs
    .filter((o): o is OutputSummaryDoc & { rank: number; distance: number } =>
      o.rank !== null && o.distance !== null)
    .map((o) => ({
      outputId: o.id,
      rank: o.rank,
      distance: o.distance,
      badge: `#${o.rank}`,
      isBest: o.rank === 1,
    }))
    .sort((a, b) => a.rank - b.rank);
  if (threshold === undefined) return rows;
  return rows.filter((row) => row.distance <= threshold);
}

export function bestOutput(batch: BatchDoc): BrowserRow | null {
  const rows = browserRows(batch);
  return rows.length ? rows[0] : null;
}
