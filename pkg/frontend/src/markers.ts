import type { EffectJson, IntervalJson, SpecJson } from "./api.js";

// Timeline marker geometry. Fractions are of total animation duration, so
// they convert to percentages or pixels without further arithmetic. The
// numeric interval values pass through untouched; markers must agree exactly
// with the export manifest's foreshadow intervals.

export interface Marker {
  specId: string;
  startS: number;
  endS: number;
  targetS: number;
  startFraction: number;
  widthFraction: number;
  targetFraction: number;
  icons: string;
}

const EFFECT_ICONS: Record<EffectJson["kind"], string> = {
  prologue: "¶",
  pre_scene: "⧉",
  contour: "▭",
  de_emphasis: "◐",
};

export function iconsFor(effects: EffectJson[]): string {
  return effects.map((e) => EFFECT_ICONS[e.kind]).join("");
}

export function buildMarkers(
  intervals: IntervalJson[],
  specs: SpecJson[],
  durationS: number,
): Marker[] {
  const specById = new Map(specs.map((s) => [s.id, s]));
  return intervals.map((interval) => {
    const spec = specById.get(interval.spec_id);
    return {
      specId: interval.spec_id,
      startS: interval.start_s,
      endS: interval.end_s,
      targetS: interval.target_period_s,
      startFraction: durationS > 0 ? interval.start_s / durationS : 0,
      widthFraction: durationS > 0 ? (interval.end_s - interval.start_s) / durationS : 0,
      targetFraction: durationS > 0 ? interval.target_period_s / durationS : 0,
      icons: spec ? iconsFor(spec.effects) : "",
    };
  });
}
