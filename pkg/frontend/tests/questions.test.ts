import { describe, expect, it } from "vitest";

import type { PairWireQuestion, WireQuestion } from "../src/api.js";
import { toUiQuestion } from "../src/questions.js";

const PAIR: PairWireQuestion = {
  kind: "pairwise",
  step: 1,
  total_steps: 18,
  pair_index: 1,
  left: { name: "red", rgb: [189, 62, 57] },
  right: { name: "blue", rgb: [84, 110, 183] },
  categories: ["equal", "little", "moderate", "much"],
  pair_reversed: false,
  categories_reversed: false,
};

describe("toUiQuestion", () => {
  it("converts pairwise questions with css colors", () => {
    const q = toUiQuestion(PAIR);
    if (q.kind !== "PairChoice") throw new Error("wrong kind");
    expect(q.left.cssColor).toBe("rgb(189, 62, 57)");
    expect(q.right.cssColor).toBe("rgb(84, 110, 183)");
    expect(q.categories).toEqual(["equal", "little", "moderate", "much"]);
  });

  it("marks the repeat question and keeps the reversed hints", () => {
    const q = toUiQuestion({
      ...PAIR,
      kind: "repeat",
      categories: ["much", "moderate", "little", "equal"],
      pair_reversed: true,
      categories_reversed: true,
    });
    if (q.kind !== "RepeatChoice") throw new Error("wrong kind");
    expect(q.pairReversed).toBe(true);
    expect(q.categories[0]).toBe("much");
  });

  it("rejects a pair of identical items", () => {
    expect(() =>
      toUiQuestion({ ...PAIR, right: { name: "red", rgb: [189, 62, 57] } }),
    ).toThrow(/distinct/);
  });

  it("rejects a pair with identical RGB", () => {
    expect(() =>
      toUiQuestion({ ...PAIR, right: { name: "crimson", rgb: [189, 62, 57] } }),
    ).toThrow(/distinct/);
  });

  it("rejects out-of-range RGB channels", () => {
    expect(() =>
      toUiQuestion({ ...PAIR, left: { name: "red", rgb: [300, 0, 0] } }),
    ).toThrow(/invalid RGB/);
  });

  it("converts scoring questions", () => {
    const wire: WireQuestion = {
      kind: "scoring",
      step: 16,
      total_steps: 18,
      items: [PAIR.left, PAIR.right],
      min_score: 0,
      max_score: 10,
    };
    const q = toUiQuestion(wire);
    if (q.kind !== "DirectScores") throw new Error("wrong kind");
    expect(q.items).toHaveLength(2);
    expect(q.min).toBe(0);
    expect(q.max).toBe(10);
  });

  it("converts demographics questions", () => {
    const q = toUiQuestion({
      kind: "demographics",
      step: 17,
      total_steps: 18,
      fields: ["gender", "age", "county"],
    });
    if (q.kind !== "Demographics") throw new Error("wrong kind");
    expect(q.fields).toEqual(["gender", "age", "county"]);
  });

  it("refuses to render the done signal", () => {
    expect(() => toUiQuestion({ kind: "done", total_steps: 18 })).toThrow(/done/);
  });
});
