import type { SceneView } from "./api.js";
import { clampPlayhead } from "./playback.js";

// Studio state: the scene mirror plus transient playback and selection.
// Mutations go through the store so every panel re-renders from one source.

export interface StudioState {
  scene: SceneView | null;
  playhead: number; // seconds, always within [0, scene duration]
  playing: boolean;
  selectedSpecId: string | null;
}

export type Listener = (state: StudioState) => void;

export class StudioStore {
  private state: StudioState = {
    scene: null,
    playhead: 0,
    playing: false,
    selectedSpecId: null,
  };
  private listeners: Listener[] = [];

  get(): StudioState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  setScene(scene: SceneView): void {
    const duration = scene.derived.duration_s;
    const selected = this.state.selectedSpecId;
    this.state = {
      ...this.state,
      scene,
      playhead: clampPlayhead(this.state.playhead, duration),
      selectedSpecId:
        selected !== null && scene.specs.some((s) => s.id === selected) ? selected : null,
    };
    this.emit();
  }

  setPlayhead(seconds: number): void {
    const duration = this.state.scene?.derived.duration_s ?? 0;
    this.state = { ...this.state, playhead: clampPlayhead(seconds, duration) };
    this.emit();
  }

  setPlaying(playing: boolean): void {
    if (playing === this.state.playing) return;
    this.state = { ...this.state, playing };
    this.emit();
  }

  selectSpec(specId: string | null): void {
    this.state = { ...this.state, selectedSpecId: specId };
    this.emit();
  }
}
