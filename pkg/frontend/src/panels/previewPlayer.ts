import type { StudioController } from "../controller.js";
import { el } from "../dom.js";
import { frameIndexForTime, snapToBoundary } from "../playback.js";

// Preview player: shows exactly the SVG the service rendered for the frame
// under the playhead, and steps frames at the scene's own fps while playing.

export class PreviewPlayer {
  readonly element: HTMLElement;
  private readonly frameHost: HTMLElement;
  private readonly scrubber: HTMLInputElement;
  private readonly playButton: HTMLButtonElement;
  private readonly label: HTMLElement;
  private timer: ReturnType<typeof setInterval> | null = null;
  private requestSeq = 0;
  private shownFrame = -1;
  private shownRevision = -1;

  constructor(private readonly controller: StudioController) {
    this.playButton = el("button", { textContent: "Play" });
    this.playButton.addEventListener("click", () => this.togglePlay());

    this.scrubber = el("input", {
      type: "range",
      min: "0",
      max: "0",
      step: "1",
      value: "0",
      className: "scrubber",
    });
    // The input event has no modifier state, so shift is tracked from the
    // pointer events that drive the drag.
    let shiftHeld = false;
    this.scrubber.addEventListener("pointerdown", (event) => {
      shiftHeld = event.shiftKey;
    });
    this.scrubber.addEventListener("pointermove", (event) => {
      if (event.buttons) shiftHeld = event.shiftKey;
    });
    // Scrubbing moves the playhead in seconds; shift-drag snaps to the
    // nearest period boundary.
    this.scrubber.addEventListener("input", () => {
      const scene = controller.store.get().scene;
      if (!scene) return;
      let seconds = Number(this.scrubber.value);
      if (shiftHeld) {
        seconds = snapToBoundary(seconds, scene.derived.period_boundaries, scene.settings.fps);
      }
      controller.store.setPlayhead(seconds);
    });

    this.label = el("span", { className: "player-label", textContent: "no scene" });
    this.frameHost = el("div", { className: "frame-host" });
    this.element = el("div", { className: "panel preview-player" }, [
      el("h2", { textContent: "Preview" }),
      this.frameHost,
      el("div", { className: "player-controls" }, [this.playButton, this.scrubber, this.label]),
    ]);

    controller.store.subscribe(() => this.sync());
  }

  private togglePlay(): void {
    const store = this.controller.store;
    const state = store.get();
    if (!state.scene) return;
    if (state.playing) {
      store.setPlaying(false);
      return;
    }
    // Restart from the top when the playhead sits at the end.
    if (state.playhead >= state.scene.derived.duration_s) store.setPlayhead(0);
    store.setPlaying(true);
  }

  private startTimer(): void {
    if (this.timer !== null) return;
    const scene = this.controller.store.get().scene;
    if (!scene) return;
    const fps = scene.settings.fps;
    const step = 1 / fps;
    this.timer = setInterval(() => {
      const state = this.controller.store.get();
      if (!state.scene || !state.playing) return;
      const next = state.playhead + step;
      if (next >= state.scene.derived.duration_s) {
        this.controller.store.setPlayhead(state.scene.derived.duration_s);
        this.controller.store.setPlaying(false);
      } else {
        this.controller.store.setPlayhead(next);
      }
    }, 1000 / fps);
  }

  private stopTimer(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  private sync(): void {
    const state = this.controller.store.get();
    const scene = state.scene;
    if (!scene) {
      this.label.textContent = "no scene";
      this.stopTimer();
      return;
    }

    if (state.playing) this.startTimer();
    else this.stopTimer();
    this.playButton.textContent = state.playing ? "Pause" : "Play";

    const { fps } = scene.settings;
    const { frame_count, duration_s } = scene.derived;
    this.scrubber.max = String(duration_s);
    this.scrubber.step = String(1 / fps);
    if (document.activeElement !== this.scrubber) {
      this.scrubber.value = String(state.playhead);
    }

    const frame = frameIndexForTime(state.playhead, fps, frame_count);
    this.label.textContent = `t=${state.playhead.toFixed(2)}s  frame ${frame + 1}/${frame_count}`;
    void this.showFrame(scene.revision, frame);
  }

  private async showFrame(revision: number, frame: number): Promise<void> {
    if (frame === this.shownFrame && revision === this.shownRevision) return;
    const seq = ++this.requestSeq;
    try {
      const svg = await this.controller.fetchFrame(frame);
      // A newer request may have finished first; never paint backwards.
      if (seq !== this.requestSeq) return;
      this.frameHost.innerHTML = svg;
      this.shownFrame = frame;
      this.shownRevision = revision;
    } catch {
      if (seq === this.requestSeq) this.label.textContent = "frame unavailable";
    }
  }
}
