/** Bar-selection state: a mirrored set of (track, bar) cells plus drag logic. */

export type Cell = readonly [track: number, bar: number];

function key(track: number, bar: number): string {
  return `${track}:${bar}`;
}

export class SelectionModel {
  private cells = new Set<string>();
  private anchor: Cell | null = null;
  private dragAdds = true;
  private baseline = new Set<string>();

  constructor(
    public nTracks: number,
    public nBars: number,
  ) {}

  resize(nTracks: number, nBars: number): void {
    this.nTracks = nTracks;
    this.nBars = nBars;
    for (const k of [...this.cells]) {
      const [t, b] = k.split(":").map(Number);
      if (t >= nTracks || b >= nBars) this.cells.delete(k);
    }
  }

  private inBounds(track: number, bar: number): boolean {
    return track >= 0 && track < this.nTracks && bar >= 0 && bar < this.nBars;
  }

  has(track: number, bar: number): boolean {
    return this.cells.has(key(track, bar));
  }

  get size(): number {
    return this.cells.size;
  }

  toggle(track: number, bar: number): void {
    if (!this.inBounds(track, bar)) return;
    const k = key(track, bar);
    if (this.cells.has(k)) this.cells.delete(k);
    else this.cells.add(k);
  }

  clear(): void {
    this.cells.clear();
  }

  /** Begin a drag; dragging from a selected cell removes instead of adding. */
  beginDrag(track: number, bar: number): void {
    if (!this.inBounds(track, bar)) return;
    this.anchor = [track, bar];
    this.dragAdds = !this.has(track, bar);
    this.baseline = new Set(this.cells);
    this.applyDragTo(track, bar);
  }

  /** Extend the drag rectangle from the anchor to (track, bar). */
  dragTo(track: number, bar: number): void {
    if (this.anchor === null) return;
    this.applyDragTo(track, bar);
  }

  endDrag(): void {
    this.anchor = null;
    this.baseline = new Set();
  }

  get dragging(): boolean {
    return this.anchor !== null;
  }

  private applyDragTo(track: number, bar: number): void {
    const [at, ab] = this.anchor!;
    const t0 = Math.max(0, Math.min(at, track));
    const t1 = Math.min(this.nTracks - 1, Math.max(at, track));
    const b0 = Math.max(0, Math.min(ab, bar));
    const b1 = Math.min(this.nBars - 1, Math.max(ab, bar));
    this.cells = new Set(this.baseline);
    for (let t = t0; t <= t1; t++) {
      for (let b = b0; b <= b1; b++) {
        if (this.dragAdds) this.cells.add(key(t, b));
        else this.cells.delete(key(t, b));
      }
    }
  }

  /** The wire form used by generation requests, sorted for stability. */
  toSelection(): [number, number][] {
    return [...this.cells]
      .map((k) => k.split(":").map(Number) as [number, number])
      .sort((a, b) => a[0] - b[0] || a[1] - b[1]);
  }

  static fromSelection(cells: [number, number][], nTracks: number, nBars: number): SelectionModel {
    const model = new SelectionModel(nTracks, nBars);
    for (const [t, b] of cells) {
      if (t < nTracks && b < nBars) model.cells.add(key(t, b));
    }
    return model;
  }

  /** Tracks that appear in the selection, ascending. */
  selectedTracks(): number[] {
    const tracks = new Set<number>();
    for (const k of this.cells) tracks.add(Number(k.split(":")[0]));
    return [...tracks].sort((a, b) => a - b);
  }
}
