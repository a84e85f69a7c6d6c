/**
 * UI-side question model: the wire descriptor plus display hints, validated.
 *
 * The UI never invents numeric scale values; only category identifiers and
 * integer scores ever go back over the wire.
 */

import type {
  CategoryId,
  ItemDescriptor,
  Rgb,
  WireQuestion,
} from "./api.js";

export interface Swatch {
  name: string;
  rgb: Rgb;
  cssColor: string;
}

export interface PairChoiceQuestion {
  kind: "PairChoice" | "RepeatChoice";
  step: number;
  totalSteps: number;
  left: Swatch;
  right: Swatch;
  /** Display order for the verbal labels; reversed for the repeat question. */
  categories: CategoryId[];
  categoriesReversed: boolean;
  pairReversed: boolean;
}

export interface DirectScoresQuestion {
  kind: "DirectScores";
  step: number;
  totalSteps: number;
  items: Swatch[];
  min: number;
  max: number;
}

export interface DemographicsQuestion {
  kind: "Demographics";
  step: number;
  totalSteps: number;
  fields: string[];
}

export type UiQuestion =
  | PairChoiceQuestion
  | DirectScoresQuestion
  | DemographicsQuestion;

export const CATEGORY_LABELS: Record<CategoryId, string> = {
  equal: "equally like",
  little: "like it a little bit more",
  moderate: "like it moderately more",
  much: "like it much more",
};

function swatch(item: ItemDescriptor): Swatch {
  const [r, g, b] = item.rgb;
  for (const channel of item.rgb) {
    if (!Number.isInteger(channel) || channel < 0 || channel > 255) {
      throw new Error(`invalid RGB for ${item.name}: ${item.rgb}`);
    }
  }
  return { name: item.name, rgb: item.rgb, cssColor: `rgb(${r}, ${g}, ${b})` };
}

function sameRgb(a: Rgb, b: Rgb): boolean {
  return a[0] === b[0] && a[1] === b[1] && a[2] === b[2];
}

/** Wire -> UI conversion; throws on malformed payloads. */
export function toUiQuestion(q: WireQuestion): UiQuestion {
  switch (q.kind) {
    case "pairwise":
    case "repeat": {
      const left = swatch(q.left);
      const right = swatch(q.right);
      if (left.name === right.name || sameRgb(q.left.rgb, q.right.rgb)) {
        throw new Error(
          `pair choice needs two distinct items, got ${left.name}/${right.name}`,
        );
      }
      return {
        kind: q.kind === "repeat" ? "RepeatChoice" : "PairChoice",
        step: q.step,
        totalSteps: q.total_steps,
        left,
        right,
        categories: [...q.categories],
        categoriesReversed: q.categories_reversed,
        pairReversed: q.pair_reversed,
      };
    }
    case "scoring":
      return {
        kind: "DirectScores",
        step: q.step,
        totalSteps: q.total_steps,
        items: q.items.map(swatch),
        min: q.min_score,
        max: q.max_score,
      };
    case "demographics":
      return {
        kind: "Demographics",
        step: q.step,
        totalSteps: q.total_steps,
        fields: [...q.fields],
      };
    case "done":
      throw new Error("done signal is not a renderable question");
  }
}
