// Typed client for the scene service. Paths and body shapes mirror the
// HTTP API one to one; nothing here interprets scene data beyond JSON.

export interface ItemJson {
  id: string;
  category: string;
}

export interface DatasetJson {
  periods: string[];
  items: ItemJson[];
  values: number[][];
}

export interface SettingsJson {
  seconds_per_period: number;
  fps: number;
  top_n: number;
  easing: "linear" | "cubic_in_out";
}

export interface CanvasJson {
  width: number;
  height: number;
  margin_top: number;
  margin_right: number;
  margin_bottom: number;
  margin_left: number;
  bar_height_fraction: number;
  title: string;
  category_palette: Record<string, [number, number, number]>;
}

export type EffectJson =
  | { kind: "prologue"; text: string }
  | { kind: "pre_scene" }
  | { kind: "contour"; stroke_width?: number; color?: [number, number, number] }
  | { kind: "de_emphasis"; off_target_opacity?: number };

export interface SpecJson {
  id: string;
  effects: EffectJson[];
  target_items: string[];
  timing: number;
  duration: number;
  target_period: number;
}

export interface IntervalJson {
  spec_id: string;
  start_s: number;
  end_s: number;
  target_period_s: number;
}

export interface DerivedJson {
  frame_count: number;
  duration_s: number;
  period_boundaries: number[]; // frame indices of exact dataset columns
  foreshadow_intervals: IntervalJson[];
}

export interface SceneView {
  id: string;
  revision: number;
  dataset: DatasetJson;
  settings: SettingsJson;
  canvas: CanvasJson;
  specs: SpecJson[];
  derived: DerivedJson;
}

export interface ViolationJson {
  code: string;
  message: string;
  spec_id: string | null;
}

export interface EventJson {
  kind: string;
  item_id: string;
  period_index: number;
  magnitude: number;
  suggestion: SpecJson;
}

export interface ManifestJson {
  fps: number;
  frame_count: number;
  frames: { index: number; file: string; time_s: number }[];
  foreshadow_intervals: IntervalJson[];
  period_boundaries_s: number[];
  period_labels: string[];
}

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly violations: ViolationJson[];

  constructor(status: number, code: string, message: string, violations: ViolationJson[]) {
    super(message);
    this.name = "ApiError";
    this.status = status;
    this.code = code;
    this.violations = violations;
  }

  get isConflict(): boolean {
    return this.status === 409;
  }

  get isValidation(): boolean {
    return this.status === 422;
  }
}

async function toError(response: Response): Promise<ApiError> {
  let code = "HttpError";
  let message = `${response.status} ${response.statusText}`;
  let violations: ViolationJson[] = [];
  try {
    const body = await response.json();
    if (body && typeof body.code === "string") code = body.code;
    if (body && typeof body.message === "string") message = body.message;
    if (body && Array.isArray(body.violations)) violations = body.violations;
  } catch {
    // non-JSON error body; keep the status-line message
  }
  return new ApiError(response.status, code, message, violations);
}

export class StudioApi {
  constructor(private readonly baseUrl: string = "") {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await fetch(this.baseUrl + path, init);
    if (!response.ok) throw await toError(response);
    return response;
  }

  private async requestJson<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.request(path, init);
    return (await response.json()) as T;
  }

  private jsonInit(method: string, body: unknown, signal?: AbortSignal): RequestInit {
    return {
      method,
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
      signal,
    };
  }

  async createScene(csvText: string, sceneId?: string, title?: string): Promise<SceneView> {
    const form = new FormData();
    form.append("file", new Blob([csvText], { type: "text/csv" }), "data.csv");
    if (sceneId) form.append("scene_id", sceneId);
    if (title) form.append("title", title);
    return this.requestJson<SceneView>("/scenes", { method: "POST", body: form });
  }

  async listScenes(): Promise<string[]> {
    const body = await this.requestJson<{ scenes: string[] }>("/scenes");
    return body.scenes;
  }

  async getScene(sceneId: string, signal?: AbortSignal): Promise<SceneView> {
    return this.requestJson<SceneView>(`/scenes/${encodeURIComponent(sceneId)}`, { signal });
  }

  async patchSettings(
    sceneId: string,
    revision: number,
    settings?: Partial<SettingsJson>,
    canvas?: Partial<CanvasJson>,
  ): Promise<SceneView> {
    const body: Record<string, unknown> = { revision };
    if (settings) body.settings = settings;
    if (canvas) body.canvas = canvas;
    return this.requestJson<SceneView>(
      `/scenes/${encodeURIComponent(sceneId)}/settings`,
      this.jsonInit("PATCH", body),
    );
  }

  async editCell(
    sceneId: string,
    revision: number,
    item: string,
    period: string,
    value: number,
  ): Promise<SceneView> {
    return this.requestJson<SceneView>(
      `/scenes/${encodeURIComponent(sceneId)}/data`,
      this.jsonInit("PATCH", { revision, item, period, value }),
    );
  }

  async addSpec(sceneId: string, revision: number, spec: SpecJson): Promise<SceneView> {
    return this.requestJson<SceneView>(
      `/scenes/${encodeURIComponent(sceneId)}/specs`,
      this.jsonInit("POST", { revision, spec }),
    );
  }

  async updateSpec(sceneId: string, revision: number, spec: SpecJson): Promise<SceneView> {
    return this.requestJson<SceneView>(
      `/scenes/${encodeURIComponent(sceneId)}/specs/${encodeURIComponent(spec.id)}`,
      this.jsonInit("PUT", { revision, spec }),
    );
  }

  async deleteSpec(sceneId: string, revision: number, specId: string): Promise<SceneView> {
    const path =
      `/scenes/${encodeURIComponent(sceneId)}/specs/${encodeURIComponent(specId)}` +
      `?revision=${revision}`;
    return this.requestJson<SceneView>(path, { method: "DELETE" });
  }

  async fetchFrame(sceneId: string, frameIndex: number, signal?: AbortSignal): Promise<string> {
    const response = await this.request(
      `/scenes/${encodeURIComponent(sceneId)}/frames/${frameIndex}`,
      { signal },
    );
    return response.text();
  }

  async events(sceneId: string, topN?: number, jump?: number): Promise<EventJson[]> {
    const params = new URLSearchParams();
    if (topN !== undefined) params.set("top_n", String(topN));
    if (jump !== undefined) params.set("jump", String(jump));
    const query = params.toString();
    const path = `/scenes/${encodeURIComponent(sceneId)}/events${query ? "?" + query : ""}`;
    const body = await this.requestJson<{ events: EventJson[] }>(path);
    return body.events;
  }

  async exportScene(
    sceneId: string,
    outDir?: string,
  ): Promise<{ out_dir: string; manifest: ManifestJson }> {
    const body: Record<string, unknown> = {};
    if (outDir) body.out_dir = outDir;
    return this.requestJson(`/scenes/${encodeURIComponent(sceneId)}/export`, this.jsonInit("POST", body));
  }
}
