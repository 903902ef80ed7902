import type { EffectJson, SpecJson } from "../api.js";
import type { StudioController } from "../controller.js";
import { el } from "../dom.js";
import { iconsFor } from "../markers.js";

// Foreshadow editor: the list of specs on the scene plus a form for one
// draft. Saving sends the draft to the service; violations come back inline
// and the scene is untouched until a draft is accepted.

export class ForeshadowEditorPanel {
  readonly element: HTMLElement;
  private readonly list: HTMLElement;
  private readonly suggestions: HTMLElement;
  private readonly status: HTMLElement;

  private readonly specId: HTMLInputElement;
  private readonly usePrologue: HTMLInputElement;
  private readonly prologueText: HTMLInputElement;
  private readonly usePreScene: HTMLInputElement;
  private readonly useContour: HTMLInputElement;
  private readonly useDeEmphasis: HTMLInputElement;
  private readonly targets: HTMLSelectElement;
  private readonly timing: HTMLInputElement;
  private readonly duration: HTMLInputElement;
  private readonly targetPeriod: HTMLInputElement;

  private renderedRevision = -1;
  private loadedSpecId: string | null = null;

  constructor(private readonly controller: StudioController) {
    this.list = el("ul", { className: "spec-list" });
    this.suggestions = el("div", { className: "suggestions" });
    this.status = el("div", { className: "status" });

    this.specId = el("input", { type: "text", placeholder: "spec id" });
    this.usePrologue = el("input", { type: "checkbox" });
    this.prologueText = el("input", { type: "text", placeholder: "banner text" });
    this.usePreScene = el("input", { type: "checkbox" });
    this.useContour = el("input", { type: "checkbox" });
    this.useDeEmphasis = el("input", { type: "checkbox" });
    this.targets = el("select", { multiple: true, size: 5 });
    this.timing = el("input", { type: "number", min: "0", step: "any" });
    this.duration = el("input", { type: "number", min: "0", step: "any" });
    this.targetPeriod = el("input", { type: "number", min: "0", step: "any" });

    const save = el("button", { textContent: "Save spec" });
    save.addEventListener("click", () => void this.save());
    const fresh = el("button", { textContent: "New spec" });
    fresh.addEventListener("click", () => {
      controller.store.selectSpec(null);
      this.clearForm();
    });
    const detect = el("button", { textContent: "Detect events" });
    detect.addEventListener("click", () => void this.detect());

    const check = (box: HTMLInputElement, label: string) =>
      el("label", { className: "check" }, [box, label]);
    const field = (label: string, control: HTMLElement) =>
      el("label", { className: "field" }, [label, control]);

    this.element = el("div", { className: "panel foreshadow-editor" }, [
      el("h2", { textContent: "Foreshadowing" }),
      this.list,
      el("div", { className: "editor-form" }, [
        field("id", this.specId),
        el("div", { className: "effects" }, [
          check(this.usePrologue, "prologue"),
          this.prologueText,
          check(this.usePreScene, "pre-scene"),
          check(this.useContour, "contour"),
          check(this.useDeEmphasis, "de-emphasis"),
        ]),
        field("target items", this.targets),
        field("timing (periods)", this.timing),
        field("duration (periods)", this.duration),
        field("target period", this.targetPeriod),
        el("div", { className: "editor-buttons" }, [save, fresh, detect]),
        this.status,
      ]),
      this.suggestions,
    ]);

    controller.store.subscribe(() => this.sync());
  }

  private sync(): void {
    const state = this.controller.store.get();
    const scene = state.scene;
    if (!scene) return;

    if (scene.revision !== this.renderedRevision) {
      this.renderedRevision = scene.revision;
      this.renderList();
      this.renderTargetOptions();
    }

    if (state.selectedSpecId !== this.loadedSpecId) {
      this.loadedSpecId = state.selectedSpecId;
      const spec = scene.specs.find((s) => s.id === state.selectedSpecId);
      if (spec) this.loadSpec(spec);
    }

    for (const node of this.list.querySelectorAll<HTMLElement>("li")) {
      node.classList.toggle("selected", node.dataset.specId === state.selectedSpecId);
    }
  }

  private renderList(): void {
    const scene = this.controller.store.get().scene;
    if (!scene) return;
    this.list.replaceChildren(
      ...scene.specs.map((spec) => {
        const pick = el("button", {
          className: "spec-pick",
          textContent: `${iconsFor(spec.effects)} ${spec.id}  [${spec.timing}, ${
            spec.timing + spec.duration
          }) → p${spec.target_period}`,
        });
        pick.addEventListener("click", () => this.controller.store.selectSpec(spec.id));
        const remove = el("button", { className: "spec-delete", textContent: "✕", title: "delete" });
        remove.addEventListener("click", () => void this.remove(spec.id));
        const item = el("li", {}, [pick, remove]);
        item.dataset.specId = spec.id;
        return item;
      }),
    );
  }

  private renderTargetOptions(): void {
    const scene = this.controller.store.get().scene;
    if (!scene) return;
    const selected = new Set(
      Array.from(this.targets.selectedOptions).map((option) => option.value),
    );
    this.targets.replaceChildren(
      ...scene.dataset.items.map((item) =>
        el("option", {
          value: item.id,
          textContent: item.id,
          selected: selected.has(item.id),
        }),
      ),
    );
  }

  private loadSpec(spec: SpecJson): void {
    this.specId.value = spec.id;
    const kinds = new Set(spec.effects.map((e) => e.kind));
    this.usePrologue.checked = kinds.has("prologue");
    const prologue = spec.effects.find((e) => e.kind === "prologue");
    this.prologueText.value = prologue && "text" in prologue ? prologue.text : "";
    this.usePreScene.checked = kinds.has("pre_scene");
    this.useContour.checked = kinds.has("contour");
    this.useDeEmphasis.checked = kinds.has("de_emphasis");
    for (const option of this.targets.options) {
      option.selected = spec.target_items.includes(option.value);
    }
    this.timing.value = String(spec.timing);
    this.duration.value = String(spec.duration);
    this.targetPeriod.value = String(spec.target_period);
    this.status.textContent = "";
  }

  private clearForm(): void {
    this.specId.value = "";
    this.usePrologue.checked = false;
    this.prologueText.value = "";
    this.usePreScene.checked = false;
    this.useContour.checked = false;
    this.useDeEmphasis.checked = false;
    for (const option of this.targets.options) option.selected = false;
    this.timing.value = "";
    this.duration.value = "";
    this.targetPeriod.value = "";
    this.status.textContent = "";
    this.loadedSpecId = null;
  }

  draftFromForm(): SpecJson {
    const effects: EffectJson[] = [];
    if (this.usePrologue.checked) effects.push({ kind: "prologue", text: this.prologueText.value });
    if (this.usePreScene.checked) effects.push({ kind: "pre_scene" });
    if (this.useContour.checked) effects.push({ kind: "contour" });
    if (this.useDeEmphasis.checked) effects.push({ kind: "de_emphasis" });
    return {
      id: this.specId.value.trim(),
      effects,
      target_items: Array.from(this.targets.selectedOptions).map((option) => option.value),
      timing: Number(this.timing.value),
      duration: Number(this.duration.value),
      target_period: Number(this.targetPeriod.value),
    };
  }

  private async save(): Promise<void> {
    this.status.textContent = "";
    const result = await this.controller.submitSpec(this.draftFromForm());
    if (!result.ok) {
      const detail = result.violations
        .map((v) => (v.spec_id ? `${v.code} (${v.spec_id}): ${v.message}` : `${v.code}: ${v.message}`))
        .join("\n");
      this.status.textContent = detail || `${result.code}: ${result.message}`;
      return;
    }
    this.controller.store.selectSpec(this.draftFromForm().id || null);
  }

  private async remove(specId: string): Promise<void> {
    const result = await this.controller.deleteSpec(specId);
    if (!result.ok) {
      this.status.textContent = `${result.code}: ${result.message}`;
    } else if (this.loadedSpecId === specId) {
      this.clearForm();
    }
  }

  private async detect(): Promise<void> {
    const events = await this.controller.detectEvents();
    if (events.length === 0) {
      this.suggestions.replaceChildren(el("div", { textContent: "no events detected" }));
      return;
    }
    this.suggestions.replaceChildren(
      el("h3", { textContent: "Detected events" }),
      ...events.map((event) => {
        const pick = el("button", {
          className: "suggestion",
          textContent: `${event.kind} ${event.item_id} @ period ${event.period_index}`,
          title: "load a draft spec for this event",
        });
        pick.addEventListener("click", () => {
          this.controller.store.selectSpec(null);
          this.loadSpec(event.suggestion);
        });
        return pick;
      }),
    );
  }
}
