import type { StudioController } from "../controller.js";
import { el } from "../dom.js";

// Settings form: animation settings plus the canvas title. Values are drafts
// until Apply; the form re-reads the scene whenever a new revision arrives.

export class SettingsFormPanel {
  readonly element: HTMLElement;
  private readonly fps: HTMLInputElement;
  private readonly secondsPerPeriod: HTMLInputElement;
  private readonly topN: HTMLInputElement;
  private readonly easing: HTMLSelectElement;
  private readonly title: HTMLInputElement;
  private readonly status: HTMLElement;
  private renderedRevision = -1;

  constructor(private readonly controller: StudioController) {
    this.fps = el("input", { type: "number", min: "1", step: "1" });
    this.secondsPerPeriod = el("input", { type: "number", min: "0", step: "any" });
    this.topN = el("input", { type: "number", min: "1", step: "1" });
    this.easing = el("select", {}, [
      el("option", { value: "linear", textContent: "linear" }),
      el("option", { value: "cubic_in_out", textContent: "cubic_in_out" }),
    ]);
    this.title = el("input", { type: "text", placeholder: "chart title" });
    this.status = el("div", { className: "status" });

    const apply = el("button", { textContent: "Apply" });
    apply.addEventListener("click", () => void this.apply());

    const field = (label: string, control: HTMLElement) =>
      el("label", { className: "field" }, [label, control]);

    this.element = el("div", { className: "panel settings-form" }, [
      el("h2", { textContent: "Settings" }),
      field("fps", this.fps),
      field("seconds per period", this.secondsPerPeriod),
      field("top n", this.topN),
      field("easing", this.easing),
      field("title", this.title),
      apply,
      this.status,
    ]);

    controller.store.subscribe(() => this.sync());
  }

  private sync(): void {
    const scene = this.controller.store.get().scene;
    if (!scene || scene.revision === this.renderedRevision) return;
    this.renderedRevision = scene.revision;
    this.fps.value = String(scene.settings.fps);
    this.secondsPerPeriod.value = String(scene.settings.seconds_per_period);
    this.topN.value = String(scene.settings.top_n);
    this.easing.value = scene.settings.easing;
    this.title.value = scene.canvas.title;
    this.status.textContent = "";
  }

  private async apply(): Promise<void> {
    const scene = this.controller.store.get().scene;
    if (!scene) return;
    this.status.textContent = "";
    const result = await this.controller.saveSettings(
      {
        fps: Number(this.fps.value),
        seconds_per_period: Number(this.secondsPerPeriod.value),
        top_n: Number(this.topN.value),
        easing: this.easing.value as "linear" | "cubic_in_out",
      },
      { title: this.title.value },
    );
    if (!result.ok) {
      const detail = result.violations.map((v) => `${v.code}: ${v.message}`).join("; ");
      this.status.textContent = detail || `${result.code}: ${result.message}`;
    }
  }
}
