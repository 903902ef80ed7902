import type { StudioController } from "../controller.js";
import { el } from "../dom.js";

// Data table: items down, periods across, every value an editable cell.
// A cell edit is a draft until the service accepts it; on rejection the
// cell reverts to the stored value and the violation shows below the table.

export class DataTablePanel {
  readonly element: HTMLElement;
  private readonly tableHost: HTMLElement;
  private readonly status: HTMLElement;
  private renderedRevision = -1;

  constructor(private readonly controller: StudioController) {
    this.tableHost = el("div", { className: "table-host" });
    this.status = el("div", { className: "status" });
    this.element = el("div", { className: "panel data-table" }, [
      el("h2", { textContent: "Data" }),
      this.tableHost,
      this.status,
    ]);
    controller.store.subscribe(() => this.sync());
  }

  private sync(): void {
    const scene = this.controller.store.get().scene;
    if (!scene || scene.revision === this.renderedRevision) return;
    this.renderedRevision = scene.revision;
    this.status.textContent = "";

    const { periods, items, values } = scene.dataset;
    const head = el("tr", {}, [
      el("th", { textContent: "item" }),
      el("th", { textContent: "category" }),
      ...periods.map((p) => el("th", { textContent: p })),
    ]);

    const rows = items.map((item, row) =>
      el("tr", {}, [
        el("td", { textContent: item.id }),
        el("td", { textContent: item.category, className: "category" }),
        ...periods.map((period, col) => {
          const value = values[row]![col]!;
          const input = el("input", { type: "number", step: "any", value: String(value) });
          input.addEventListener("change", () => void this.commit(item.id, period, input, value));
          return el("td", {}, [input]);
        }),
      ]),
    );

    this.tableHost.replaceChildren(el("table", {}, [el("thead", {}, [head]), el("tbody", {}, rows)]));
  }

  private async commit(
    item: string,
    period: string,
    input: HTMLInputElement,
    previous: number,
  ): Promise<void> {
    const value = Number(input.value);
    if (!Number.isFinite(value)) {
      this.status.textContent = `NonNumericValue: ${input.value || "(empty)"} is not a number`;
      input.value = String(previous);
      return;
    }
    const result = await this.controller.editCell(item, period, value);
    if (!result.ok) {
      const detail = result.violations.map((v) => `${v.code}: ${v.message}`).join("; ");
      this.status.textContent = detail || `${result.code}: ${result.message}`;
      input.value = String(previous);
    }
  }
}
