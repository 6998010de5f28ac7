/** Playback client: consumes the event stream and drives a synth backend. */

import type { ApiClient, PlaybackEventDoc } from "./api.js";

/** Minimal surface a sound backend must provide. */
export interface Synth {
  noteOn(channel: number, pitch: number, velocity: number): void;
  noteOff(channel: number, pitch: number): void;
  programChange(channel: number, program: number): void;
  allOff(): void;
}

/** Counts voices without making sound; also the test backend. */
export class NullSynth implements Synth {
  readonly events: { kind: string; channel: number; pitch: number }[] = [];
  private voices = new Set<string>();

  noteOn(channel: number, pitch: number, _velocity: number): void {
    this.voices.add(`${channel}:${pitch}`);
    this.events.push({ kind: "note_on", channel, pitch });
  }

  noteOff(channel: number, pitch: number): void {
    this.voices.delete(`${channel}:${pitch}`);
    this.events.push({ kind: "note_off", channel, pitch });
  }

  programChange(channel: number, program: number): void {
    this.events.push({ kind: "program_change", channel, pitch: program });
  }

  allOff(): void {
    this.voices.clear();
  }

  get activeVoices(): number {
    return this.voices.size;
  }
}

/** Oscillator-per-voice WebAudio synth; enough to audition GM-ish playback. */
export class WebAudioSynth implements Synth {
  private voices = new Map<string, { osc: OscillatorNode; gain: GainNode }>();

  constructor(private context: AudioContext) {}

  private waveFor(channel: number): OscillatorType {
    return channel === 9 ? "square" : "triangle";
  }

  noteOn(channel: number, pitch: number, velocity: number): void {
    const key = `${channel}:${pitch}`;
    this.noteOff(channel, pitch);
    const osc = this.context.createOscillator();
    const gain = this.context.createGain();
    osc.type = this.waveFor(channel);
    osc.frequency.value = 440 * Math.pow(2, (pitch - 69) / 12);
    gain.gain.value = (velocity / 127) * 0.15;
    osc.connect(gain).connect(this.context.destination);
    osc.start();
    this.voices.set(key, { osc, gain });
  }

  noteOff(channel: number, pitch: number): void {
    const key = `${channel}:${pitch}`;
    const voice = this.voices.get(key);
    if (!voice) return;
    this.voices.delete(key);
    voice.gain.gain.setTargetAtTime(0, this.context.currentTime, 0.02);
    voice.osc.stop(this.context.currentTime + 0.1);
  }

  programChange(_channel: number, _program: number): void {
    // timbre mapping is out of scope for the oscillator backend
  }

  allOff(): void {
    for (const [key] of this.voices) {
      const [channel, pitch] = key.split(":").map(Number);
      this.noteOff(channel, pitch);
    }
  }
}

export interface TransportState {
  playing: boolean;
  lastEventMs: number;
  eventCount: number;
}

/**
 * Bridges the session event stream to a synth. The server does the timing;
 * the client just reacts to documents as they arrive.
 */
export class PlaybackClient {
  readonly state: TransportState = { playing: false, lastEventMs: 0, eventCount: 0 };
  private subscription: { cancel: () => void; done: Promise<void> } | null = null;

  constructor(
    private api: ApiClient,
    private sessionId: string,
    private synth: Synth,
  ) {}

  /** Start playback (optionally of a generated output) and consume events. */
  async play(options: { tempoOverride?: number; outputId?: string } = {}): Promise<void> {
    this.subscribe();
    await this.api.startPlayback(this.sessionId, {
      tempo_override: options.tempoOverride,
      output_id: options.outputId,
    });
    this.state.playing = true;
  }

  async stop(): Promise<void> {
    await this.api.stopPlayback(this.sessionId);
    this.state.playing = false;
    this.synth.allOff();
  }

  /** Detach from the stream without stopping server-side playback. */
  detach(): void {
    this.subscription?.cancel();
    this.subscription = null;
    this.synth.allOff();
  }

  handleEvent(doc: PlaybackEventDoc): void {
    if (doc.event !== "playback") return;
    this.state.lastEventMs = doc.at_ms;
    this.state.eventCount += 1;
    switch (doc.kind) {
      case "note_on":
        this.synth.noteOn(doc.channel, doc.pitch, doc.velocity);
        break;
      case "note_off":
        this.synth.noteOff(doc.channel, doc.pitch);
        break;
      case "program_change":
        this.synth.programChange(doc.channel, doc.pitch);
        break;
      case "end":
        this.state.playing = false;
        this.synth.allOff();
        break;
    }
  }

  private subscribe(): void {
    if (this.subscription) return;
    this.subscription = this.api.streamEvents(this.sessionId, (doc) =>
      this.handleEvent(doc as unknown as PlaybackEventDoc),
    );
  }
}
