import type { StudioController } from "../controller.js";
import { el } from "../dom.js";
import { buildMarkers } from "../markers.js";
import { snapToBoundary } from "../playback.js";

// Timeline: one horizontal track spanning the animation. Each foreshadow
// spec's active interval is a marked range with icons for its effects and a
// tick at the period it points to; the playhead is a draggable cursor.

export class TimelinePanel {
  readonly element: HTMLElement;
  private readonly track: HTMLElement;
  private readonly cursor: HTMLElement;
  private renderedRevision = -1;

  constructor(private readonly controller: StudioController) {
    this.track = el("div", { className: "timeline-track" });
    this.cursor = el("div", { className: "timeline-cursor" });
    this.element = el("div", { className: "panel timeline-panel" }, [
      el("h2", { textContent: "Timeline" }),
      this.track,
    ]);

    this.track.addEventListener("pointerdown", (event) => this.beginScrub(event));
    controller.store.subscribe(() => this.sync());
  }

  private secondsAt(event: PointerEvent): number {
    const scene = this.controller.store.get().scene;
    if (!scene) return 0;
    const rect = this.track.getBoundingClientRect();
    const fraction = rect.width > 0 ? (event.clientX - rect.left) / rect.width : 0;
    let seconds = Math.max(0, Math.min(1, fraction)) * scene.derived.duration_s;
    if (event.shiftKey) {
      seconds = snapToBoundary(seconds, scene.derived.period_boundaries, scene.settings.fps);
    }
    return seconds;
  }

  private beginScrub(down: PointerEvent): void {
    const store = this.controller.store;
    store.setPlayhead(this.secondsAt(down));
    const move = (event: PointerEvent) => store.setPlayhead(this.secondsAt(event));
    const up = () => {
      window.removeEventListener("pointermove", move);
      window.removeEventListener("pointerup", up);
    };
    window.addEventListener("pointermove", move);
    window.addEventListener("pointerup", up);
  }

  private sync(): void {
    const state = this.controller.store.get();
    const scene = state.scene;
    if (!scene) return;

    if (scene.revision !== this.renderedRevision) {
      this.renderTrack();
      this.renderedRevision = scene.revision;
    }

    const duration = scene.derived.duration_s;
    const fraction = duration > 0 ? state.playhead / duration : 0;
    this.cursor.style.left = `${fraction * 100}%`;

    for (const node of this.track.querySelectorAll<HTMLElement>(".timeline-marker")) {
      node.classList.toggle("selected", node.dataset.specId === state.selectedSpecId);
    }
  }

  private renderTrack(): void {
    const scene = this.controller.store.get().scene;
    if (!scene) return;
    const { duration_s, foreshadow_intervals, period_boundaries } = scene.derived;
    this.track.replaceChildren();

    for (const frame of period_boundaries) {
      const tick = el("div", { className: "timeline-period-tick" });
      const seconds = frame / scene.settings.fps;
      tick.style.left = `${duration_s > 0 ? (seconds / duration_s) * 100 : 0}%`;
      this.track.append(tick);
    }

    for (const marker of buildMarkers(foreshadow_intervals, scene.specs, duration_s)) {
      const range = el("div", { className: "timeline-marker", title: marker.specId }, [
        el("span", { className: "marker-icons", textContent: marker.icons }),
        el("span", { className: "marker-label", textContent: marker.specId }),
      ]);
      range.dataset.specId = marker.specId;
      range.style.left = `${marker.startFraction * 100}%`;
      range.style.width = `${marker.widthFraction * 100}%`;
      range.addEventListener("pointerdown", (event) => {
        event.stopPropagation();
        this.controller.store.selectSpec(marker.specId);
      });
      this.track.append(range);

      const target = el("div", { className: "timeline-target-tick", title: `${marker.specId} target` });
      target.style.left = `${marker.targetFraction * 100}%`;
      this.track.append(target);
    }

    this.track.append(this.cursor);
  }
}
