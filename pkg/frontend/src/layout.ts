/** Piano-roll geometry: tick/pitch to pixels and pointer hit-testing. */

import type { PieceDoc } from "./api.js";

export interface RollLayout {
  laneHeight: number;
  pixelsPerTick: number;
  labelWidth: number;
  headerHeight: number;
}

export const DEFAULT_LAYOUT: RollLayout = {
  laneHeight: 96,
  pixelsPerTick: 0.06,
  labelWidth: 140,
  headerHeight: 24,
};

export interface NoteRect {
  track: number;
  x: number;
  y: number;
  width: number;
  height: number;
  pitch: number;
  velocity: number;
}

export function rollSize(piece: PieceDoc, layout = DEFAULT_LAYOUT): { width: number; height: number } {
  const endTick = piece.bars[piece.bars.length - 1].end;
  return {
    width: layout.labelWidth + endTick * layout.pixelsPerTick,
    height: layout.headerHeight + piece.tracks.length * layout.laneHeight,
  };
}

export function barX(piece: PieceDoc, barIndex: number, layout = DEFAULT_LAYOUT): number {
  return layout.labelWidth + piece.bars[barIndex].start * layout.pixelsPerTick;
}

/** Map a note into its lane rectangle; pitch 0-127 spans the lane vertically. */
export function noteRects(piece: PieceDoc, layout = DEFAULT_LAYOUT): NoteRect[] {
  const rects: NoteRect[] = [];
  const pitchHeight = layout.laneHeight / 128;
  piece.tracks.forEach((track, t) => {
    const laneTop = layout.headerHeight + t * layout.laneHeight;
    for (const note of track.notes) {
      rects.push({
        track: t,
        x: layout.labelWidth + note.onset * layout.pixelsPerTick,
        y: laneTop + (127 - note.pitch) * pitchHeight,
        width: Math.max(1, note.duration * layout.pixelsPerTick),
        height: Math.max(1.5, pitchHeight),
        pitch: note.pitch,
        velocity: note.velocity,
      });
    }
  });
  return rects;
}

/** Pointer position to (track, bar) cell; null over labels, header, or gaps. */
export function cellAt(
  piece: PieceDoc,
  x: number,
  y: number,
  layout = DEFAULT_LAYOUT,
): [number, number] | null {
  if (x < layout.labelWidth || y < layout.headerHeight) return null;
  const track = Math.floor((y - layout.headerHeight) / layout.laneHeight);
  if (track < 0 || track >= piece.tracks.length) return null;
  const tick = (x - layout.labelWidth) / layout.pixelsPerTick;
  for (const bar of piece.bars) {
    if (tick >= bar.start && tick < bar.end) return [track, bar.index];
  }
  return null;
}

/** Center pixel coordinates of a cell, handy for simulated pointer input. */
export function cellCenter(
  piece: PieceDoc,
  track: number,
  bar: number,
  layout = DEFAULT_LAYOUT,
): { x: number; y: number } {
  const b = piece.bars[bar];
  return {
    x: layout.labelWidth + ((b.start + b.end) / 2) * layout.pixelsPerTick,
    y: layout.headerHeight + track * layout.laneHeight + layout.laneHeight / 2,
  };
}
