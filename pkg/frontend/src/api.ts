/** Typed HTTP client for the composition service. */

export interface NoteDoc {
  onset: number;
  duration: number;
  pitch: number;
  velocity: number;
  channel: number;
}

export interface BarDoc {
  index: number;
  start: number;
  end: number;
  numerator: number;
  denominator: number;
}

export interface TrackDoc {
  name: string;
  channel: number;
  program: number;
  is_percussion: boolean;
  instrument_group: number;
  notes: NoteDoc[];
}

export interface PieceDoc {
  ppq: number;
  tempo_map: { tempos: number[][]; time_signatures: number[][] };
  bars: BarDoc[];
  tracks: TrackDoc[];
}

export interface SessionDoc {
  id: string;
  created_at: string;
  parent_output: string | null;
  piece: PieceDoc;
}

export interface TrackParamsDoc {
  program?: number | null;
  group?: number | null;
  note_density: number;
  polyphony_min: number;
  polyphony_max: number;
  duration_min: string;
  duration_max: string;
}

export interface GlobalParamsDoc {
  temperature: number;
  polyphony_hard_limit: number;
  percentage: number;
  model_dim: number;
  tracks_per_step: number;
  bars_per_step: number;
  max_steps: number;
  tempo: number;
}

export interface GenerateRequestDoc {
  selection: [number, number][];
  global_params: GlobalParamsDoc;
  per_track: Record<string, TrackParamsDoc>;
  batch_size: number;
  seed: number;
}

export interface OutputSummaryDoc {
  id: string;
  seed: number;
  distance: number | null;
  rank: number | null;
}

export interface BatchDoc {
  id: string;
  session_id: string;
  status: "pending" | "running" | "done" | "failed";
  created_at: string;
  outputs: OutputSummaryDoc[];
  timing_seconds: number | null;
  error: string | null;
  failed_step: number | null;
}

export interface OutputDoc extends OutputSummaryDoc {
  batch_id: string;
  session_id: string;
  piece: PieceDoc;
}

export interface RankingEntryDoc {
  output_id: string;
  distance: number;
  rank: number;
}

export interface PlaybackEventDoc {
  event: string;
  at_ms: number;
  kind: "note_on" | "note_off" | "program_change" | "end";
  channel: number;
  pitch: number;
  velocity: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
  }
}

async function expectJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = (await response.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      /* non-JSON error body */
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  async createSession(midi: Blob | Uint8Array, filename = "seed.mid"): Promise<SessionDoc> {
    const form = new FormData();
    const blob = midi instanceof Blob ? midi : new Blob([midi as BlobPart], { type: "audio/midi" });
    form.append("file", blob, filename);
    return expectJson(await fetch(this.url("/sessions"), { method: "POST", body: form }));
  }

  async getSession(id: string): Promise<SessionDoc> {
    return expectJson(await fetch(this.url(`/sessions/${id}`)));
  }

  async getPiece(sessionId: string): Promise<PieceDoc> {
    return expectJson(await fetch(this.url(`/sessions/${sessionId}/piece`)));
  }

  async patchTrack(
    sessionId: string,
    index: number,
    patch: Partial<Pick<TrackDoc, "name" | "channel" | "program" | "is_percussion">>,
  ): Promise<PieceDoc> {
    return expectJson(
      await fetch(this.url(`/sessions/${sessionId}/tracks/${index}`), {
        method: "PATCH",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(patch),
      }),
    );
  }

  async generate(sessionId: string, request: GenerateRequestDoc): Promise<BatchDoc> {
    return expectJson(
      await fetch(this.url(`/sessions/${sessionId}/generate`), {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(request),
      }),
    );
  }

  async getBatch(batchId: string): Promise<BatchDoc> {
    return expectJson(await fetch(this.url(`/batches/${batchId}`)));
  }

  async waitForBatch(batchId: string, timeoutMs = 120_000, pollMs = 150): Promise<BatchDoc> {
    const deadline = Date.now() + timeoutMs;
    for (;;) {
      const batch = await this.getBatch(batchId);
      if (batch.status === "done" || batch.status === "failed") return batch;
      if (Date.now() > deadline) throw new ApiError(408, `batch ${batchId} timed out`);
      await new Promise((resolve) => setTimeout(resolve, pollMs));
    }
  }

  async getRanking(batchId: string, threshold?: number): Promise<RankingEntryDoc[]> {
    const query = threshold === undefined ? "" : `?threshold=${threshold}`;
    const doc = await expectJson<{ entries: RankingEntryDoc[] }>(
      await fetch(this.url(`/batches/${batchId}/ranking${query}`)),
    );
    return doc.entries;
  }

  async getOutput(outputId: string): Promise<OutputDoc> {
    return expectJson(await fetch(this.url(`/outputs/${outputId}`)));
  }

  async promoteOutput(outputId: string): Promise<SessionDoc> {
    return expectJson(await fetch(this.url(`/outputs/${outputId}/promote`), { method: "POST" }));
  }

  async exportMidi(kind: "session" | "output", id: string): Promise<Uint8Array> {
    const path = kind === "session" ? `/sessions/${id}/midi` : `/outputs/${id}/midi`;
    const response = await fetch(this.url(path));
    if (!response.ok) throw new ApiError(response.status, response.statusText);
    return new Uint8Array(await response.arrayBuffer());
  }

  midiDownloadUrl(kind: "session" | "output", id: string): string {
    return this.url(kind === "session" ? `/sessions/${id}/midi` : `/outputs/${id}/midi`);
  }

  async startPlayback(sessionId: string, options: { tempo_override?: number; output_id?: string } = {}): Promise<void> {
    await expectJson(
      await fetch(this.url(`/sessions/${sessionId}/playback`), {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(options),
      }),
    );
  }

  async stopPlayback(sessionId: string): Promise<void> {
    await expectJson(
      await fetch(this.url(`/sessions/${sessionId}/playback/stop`), { method: "POST" }),
    );
  }

  async getConstants(): Promise<Record<string, unknown>> {
    return expectJson(await fetch(this.url("/constants")));
  }

  /** Subscribe to the session event stream; returns an unsubscribe handle. */
  streamEvents(
    sessionId: string,
    onEvent: (doc: Record<string, unknown>) => void,
    limit?: number,
  ): { done: Promise<void>; cancel: () => void } {
    const controller = new AbortController();
    const query = limit === undefined ? "" : `?limit=${limit}`;
    const done = (async () => {
      const response = await fetch(this.url(`/sessions/${sessionId}/events${query}`), {
        signal: controller.signal,
      });
      if (!response.ok || !response.body) {
        throw new ApiError(response.status, "event stream unavailable");
      }
      const reader = response.body.getReader();
      const decoder = new TextDecoder();
      let buffer = "";
      for (;;) {
        const { done: finished, value } = await reader.read();
        if (finished) break;
        buffer += decoder.decode(value, { stream: true });
        let index;
        while ((index = buffer.indexOf("\n\n")) >= 0) {
          const chunk = buffer.slice(0, index);
          buffer = buffer.slice(index + 2);
          for (const line of chunk.split("\n")) {
            if (line.startsWith("data: ")) {
              onEvent(JSON.parse(line.slice("data: ".length)));
            }
          }
        }
      }
    })();
    return {
      done: done.catch((error) => {
        if (controller.signal.aborted) return;
        throw error;
      }),
      cancel: () => controller.abort(),
    };
  }
}
