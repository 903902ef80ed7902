import { describe, expect, it } from "vitest";
import type { IntervalJson, SpecJson } from "../src/api.js";
import { buildMarkers, iconsFor } from "../src/markers.js";

const spec: SpecJson = {
  id: "s1",
  effects: [{ kind: "de_emphasis" }, { kind: "prologue", text: "soon" }],
  target_items: ["delta"],
  timing: 0.5,
  duration: 1.0,
  target_period: 2.0,
};

const interval: IntervalJson = {
  spec_id: "s1",
  start_s: 1.0,
  end_s: 3.0,
  target_period_s: 4.0,
};

describe("buildMarkers", () => {
  it("passes interval seconds through unchanged", () => {
    const [marker] = buildMarkers([interval], [spec], 4.0);
    expect(marker!.startS).toBe(1.0);
    expect(marker!.endS).toBe(3.0);
    expect(marker!.targetS).toBe(4.0);
  });

  it("computes fractions of the total duration", () => {
    const [marker] = buildMarkers([interval], [spec], 4.0);
    expect(marker!.startFraction).toBeCloseTo(0.25, 12);
    expect(marker!.widthFraction).toBeCloseTo(0.5, 12);
    expect(marker!.targetFraction).toBeCloseTo(1.0, 12);
  });

  it("keeps one marker per interval in interval order", () => {
    const second: IntervalJson = { spec_id: "s2", start_s: 0, end_s: 1, target_period_s: 2 };
    const other: SpecJson = { ...spec, id: "s2", effects: [{ kind: "contour" }] };
    const markers = buildMarkers([interval, second], [spec, other], 4.0);
    expect(markers.map((m) => m.specId)).toEqual(["s1", "s2"]);
  });

  it("yields no markers for no intervals", () => {
    expect(buildMarkers([], [], 4.0)).toEqual([]);
  });

  it("survives a zero duration without dividing by zero", () => {
    const [marker] = buildMarkers([interval], [spec], 0);
    expect(marker!.startFraction).toBe(0);
    expect(marker!.widthFraction).toBe(0);
  });
});

describe("iconsFor", () => {
  it("maps every effect kind to a distinct glyph", () => {
    const icons = [
      iconsFor([{ kind: "prologue", text: "" }]),
      iconsFor([{ kind: "pre_scene" }]),
      iconsFor([{ kind: "contour" }]),
      iconsFor([{ kind: "de_emphasis" }]),
    ];
    expect(new Set(icons).size).toBe(4);
    expect(icons.every((icon) => icon.length > 0)).toBe(true);
  });

  it("concatenates icons in effect order", () => {
    expect(iconsFor(spec.effects)).toBe(
      iconsFor([spec.effects[0]!]) + iconsFor([spec.effects[1]!]),
    );
  });
});
