import { ApiError, StudioApi } from "./api.js";
import type { CanvasJson, SceneView, SettingsJson, SpecJson, EventJson, ViolationJson } from "./api.js";
import { FrameCache } from "./frameCache.js";
import { StudioStore } from "./state.js";

// Glue between panels and the service. Panels hold edits as drafts and hand
// them here; only a scene the service accepted ever reaches the store, so
// the mirror never drifts from what is persisted.

export type MutationResult =
  | { ok: true; scene: SceneView }
  | { ok: false; code: string; message: string; violations: ViolationJson[] };

export type ConflictHandler = (retry: () => Promise<MutationResult>) => void;
export type ErrorReporter = (error: ApiError) => void;

export class StudioController {
  readonly store: StudioStore;
  private readonly cache: FrameCache;
  private abort = new AbortController();
  private readonly inFlight = new Map<string, Promise<string>>();

  onConflict: ConflictHandler = () => {};
  onError: ErrorReporter = () => {};

  constructor(
    readonly api: StudioApi,
    store?: StudioStore,
    cache?: FrameCache,
  ) {
    this.store = store ?? new StudioStore();
    this.cache = cache ?? new FrameCache();
  }

  private get scene(): SceneView {
    const scene = this.store.get().scene;
    if (!scene) throw new Error("no scene loaded");
    return scene;
  }

  get sceneId(): string | null {
    return this.store.get().scene?.id ?? null;
  }

  // Adopting a new revision invalidates everything addressed to the old one.
  private adopt(scene: SceneView): SceneView {
    const previous = this.store.get().scene;
    if (!previous || previous.revision !== scene.revision || previous.id !== scene.id) {
      this.abort.abort();
      this.abort = new AbortController();
      this.inFlight.clear();
    }
    this.store.setScene(scene);
    return scene;
  }

  async createSceneFromCsv(csvText: string, sceneId?: string, title?: string): Promise<SceneView> {
    return this.adopt(await this.api.createScene(csvText, sceneId, title));
  }

  async loadScene(sceneId: string): Promise<SceneView> {
    return this.adopt(await this.api.getScene(sceneId));
  }

  async refresh(): Promise<SceneView> {
    return this.adopt(await this.api.getScene(this.scene.id));
  }

  private async mutate(
    run: (sceneId: string, revision: number) => Promise<SceneView>,
  ): Promise<MutationResult> {
    const { id, revision } = this.scene;
    try {
      return { ok: true, scene: this.adopt(await run(id, revision)) };
    } catch (error) {
      if (!(error instanceof ApiError)) throw error;
      if (error.isValidation) {
        return { ok: false, code: error.code, message: error.message, violations: error.violations };
      }
      if (error.isConflict) {
        this.onConflict(async () => {
          await this.refresh();
          return this.mutate(run);
        });
        return { ok: false, code: error.code, message: error.message, violations: [] };
      }
      this.onError(error);
      return { ok: false, code: error.code, message: error.message, violations: error.violations };
    }
  }

  saveSettings(settings?: Partial<SettingsJson>, canvas?: Partial<CanvasJson>): Promise<MutationResult> {
    return this.mutate((id, rev) => this.api.patchSettings(id, rev, settings, canvas));
  }

  editCell(item: string, period: string, value: number): Promise<MutationResult> {
    return this.mutate((id, rev) => this.api.editCell(id, rev, item, period, value));
  }

  // Add or replace depending on whether the id is already taken.
  submitSpec(spec: SpecJson): Promise<MutationResult> {
    const exists = this.scene.specs.some((s) => s.id === spec.id);
    return this.mutate((id, rev) =>
      exists ? this.api.updateSpec(id, rev, spec) : this.api.addSpec(id, rev, spec),
    );
  }

  deleteSpec(specId: string): Promise<MutationResult> {
    return this.mutate((id, rev) => this.api.deleteSpec(id, rev, specId));
  }

  detectEvents(): Promise<EventJson[]> {
    return this.api.events(this.scene.id);
  }

  // Single source of truth: every preview frame is fetched from the service,
  // keyed by (revision, frame index) so a stale frame can never be shown for
  // a newer scene.
  async fetchFrame(frameIndex: number): Promise<string> {
    const { id, revision } = this.scene;
    const cached = this.cache.get(revision, frameIndex);
    if (cached !== undefined) return cached;

    const key = FrameCache.key(revision, frameIndex);
    const pending = this.inFlight.get(key);
    if (pending) return pending;

    const signal = this.abort.signal;
    const fetchOne = this.api
      .fetchFrame(id, frameIndex, signal)
      .then((svg) => {
        if (!signal.aborted) this.cache.put(revision, frameIndex, svg);
        return svg;
      })
      .finally(() => {
        this.inFlight.delete(key);
      });
    this.inFlight.set(key, fetchOne);
    return fetchOne;
  }
}
