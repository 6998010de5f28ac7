/** Canvas renderer for the multi-track piano roll with selection overlay. */

import type { PieceDoc } from "./api.js";
import { DEFAULT_LAYOUT, RollLayout, noteRects, rollSize } from "./layout.js";
import type { SelectionModel } from "./selection.js";

const LANE_COLORS = ["#3d7bd9", "#d9803d", "#4caf7d", "#b85cc4", "#c4b35c", "#5cc4c0"];

export function drawPianoRoll(
  ctx: CanvasRenderingContext2D,
  piece: PieceDoc,
  selection: SelectionModel,
  layout: RollLayout = DEFAULT_LAYOUT,
): void {
  const { width, height } = rollSize(piece, layout);
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#181a1f";
  ctx.fillRect(0, 0, width, height);

  // lanes
  piece.tracks.forEach((track, t) => {
    const top = layout.headerHeight + t * layout.laneHeight;
    ctx.fillStyle = t % 2 ? "#1e2128" : "#202430";
    ctx.fillRect(layout.labelWidth, top, width - layout.labelWidth, layout.laneHeight);
    ctx.fillStyle = "#aab2c0";
    ctx.font = "12px sans-serif";
    const label = track.name || `track ${t}`;
    const extra = track.is_percussion ? " (drums)" : ` prog ${track.program}`;
    ctx.fillText(`${label} ch${track.channel}${extra}`, 8, top + 16);
  });

  // selection highlight under the notes
  for (const bar of piece.bars) {
    for (let t = 0; t < piece.tracks.length; t++) {
      if (!selection.has(t, bar.index)) continue;
      ctx.fillStyle = "rgba(90, 160, 255, 0.25)";
      ctx.fillRect(
        layout.labelWidth + bar.start * layout.pixelsPerTick,
        layout.headerHeight + t * layout.laneHeight,
        (bar.end - bar.start) * layout.pixelsPerTick,
        layout.laneHeight,
      );
    }
  }

  // bar lines + numbers
  ctx.strokeStyle = "#343a46";
  ctx.fillStyle = "#6c7486";
  for (const bar of piece.bars) {
    const x = layout.labelWidth + bar.start * layout.pixelsPerTick;
    ctx.beginPath();
    ctx.moveTo(x, layout.headerHeight);
    ctx.lineTo(x, height);
    ctx.stroke();
    ctx.fillText(String(bar.index + 1), x + 4, 16);
  }

  // notes
  for (const rect of noteRects(piece, layout)) {
    ctx.fillStyle = LANE_COLORS[rect.track % LANE_COLORS.length];
    ctx.globalAlpha = 0.4 + 0.6 * (rect.velocity / 127);
    ctx.fillRect(rect.x, rect.y, rect.width, rect.height);
  }
  ctx.globalAlpha = 1;
}

export function emptyState(ctx: CanvasRenderingContext2D, width: number, height: number): void {
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#181a1f";
  ctx.fillRect(0, 0, width, height);
  ctx.fillStyle = "#6c7486";
  ctx.font = "14px sans-serif";
  ctx.fillText("Upload a seed MIDI file to begin", 20, height / 2);
}
