import { StudioApi } from "./api.js";
import { StudioController } from "./controller.js";
import { el } from "./dom.js";
import { DataTablePanel } from "./panels/dataTable.js";
import { ForeshadowEditorPanel } from "./panels/foreshadowEditor.js";
import { PreviewPlayer } from "./panels/previewPlayer.js";
import { SettingsFormPanel } from "./panels/settingsForm.js";
import { TimelinePanel } from "./panels/timeline.js";

// Entry point: scene chooser across the top, the five working panels below.
// The page is served by `prefigure serve --ui`; the API lives on the same
// origin one level up from /ui/.

const api = new StudioApi("..");
const controller = new StudioController(api);

const statusBar = el("div", { className: "status-bar" });

controller.onError = (error) => {
  statusBar.textContent = `${error.code}: ${error.message}`;
};
controller.onConflict = (retry) => {
  const reload = window.confirm(
    "The scene changed on the server since you loaded it. Reload and retry your edit?",
  );
  if (reload) {
    void retry().then((result) => {
      if (!result.ok) statusBar.textContent = `${result.code}: ${result.message}`;
    });
  } else {
    void controller.refresh();
  }
};

const sceneSelect = el("select", { className: "scene-select" });
const openButton = el("button", { textContent: "Open" });
const csvInput = el("textarea", {
  placeholder: "item,category,2018,2019,2020\nalpha,tech,10,22,25\n…",
  rows: 3,
  className: "csv-input",
});
const sceneIdInput = el("input", { type: "text", placeholder: "scene id (optional)" });
const createButton = el("button", { textContent: "Create scene" });

async function refreshSceneList(): Promise<void> {
  const ids = await api.listScenes();
  const current = controller.sceneId;
  sceneSelect.replaceChildren(
    ...ids.map((id) => el("option", { value: id, textContent: id, selected: id === current })),
  );
}

openButton.addEventListener("click", () => {
  const id = sceneSelect.value;
  if (!id) return;
  statusBar.textContent = "";
  // Reloading the page and opening the same scene must show exactly what the
  // service persisted, so opening always re-fetches.
  void controller.loadScene(id).catch((error) => {
    statusBar.textContent = String(error.message ?? error);
  });
});

createButton.addEventListener("click", () => {
  const csv = csvInput.value;
  if (!csv.trim()) {
    statusBar.textContent = "paste CSV data first";
    return;
  }
  statusBar.textContent = "";
  void controller
    .createSceneFromCsv(csv, sceneIdInput.value.trim() || undefined)
    .then(() => refreshSceneList())
    .catch((error) => {
      statusBar.textContent = String(error.message ?? error);
    });
});

const header = el("div", { className: "studio-header" }, [
  el("h1", { textContent: "prefigure studio" }),
  el("div", { className: "scene-chooser" }, [
    sceneSelect,
    openButton,
    csvInput,
    sceneIdInput,
    createButton,
  ]),
  statusBar,
]);

const preview = new PreviewPlayer(controller);
const timeline = new TimelinePanel(controller);
const settings = new SettingsFormPanel(controller);
const editor = new ForeshadowEditorPanel(controller);
const data = new DataTablePanel(controller);

document.body.append(
  header,
  el("div", { className: "studio-grid" }, [
    el("div", { className: "column main" }, [preview.element, timeline.element, data.element]),
    el("div", { className: "column side" }, [settings.element, editor.element]),
  ]),
);

void refreshSceneList().catch(() => {
  statusBar.textContent = "service unreachable";
});
