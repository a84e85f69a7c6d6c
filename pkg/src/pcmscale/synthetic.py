"""Synthetic respondent construction: planted-scale cohorts and random cohorts.

A *planted* respondent is built backwards from an integer score vector whose
pairwise ratios all land on scale values: the judgments are exactly the
categories a perfectly self-consistent respondent would give, so the implied
comparison matrix at the planted (s, m, l) point is consistent and its weight
vector reproduces the score weights. Calibration must therefore recover the
planted point.

Because direct scores are integers in 0..10, only scale values expressible as
ratios of two such integers can be planted (1.5 = 3/2 works, 1.7 = 17/10 does
not). :func:`plantable` lists valid level triples. Cohorts mix several block
layouts of the same level triple: a single three-level respondent leaves a
one-parameter family of scales that fit it exactly under log-least-squares,
and mixing layouts is what pins the cohort optimum to the planted point.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .dataset import Demographics, Judgment, Preferred, RespondentRecord
from .scales import ScaleParams, VerbalCategory

__all__ = [
    "DEFAULT_ITEM_NAMES",
    "planted_params",
    "plant_record",
    "plant_cohort",
    "random_record",
    "random_cohort",
]

DEFAULT_ITEM_NAMES = ("red", "green", "blue", "magenta", "turquoise", "yellow")

_CATEGORY_BY_RANK = (
    VerbalCategory.LITTLE,
    VerbalCategory.MODERATE,
    VerbalCategory.MUCH,
)

# Score multisets for six items over a (high, mid, low) level triple; varying
# the block sizes varies the exact-fit structure across cohort members.
_BLOCK_LAYOUTS = (
    (2, 2, 2),
    (3, 2, 1),
    (1, 2, 3),
    (2, 1, 3),
    (3, 1, 2),
    (1, 3, 2),
)


def _on_tenth_grid(r: Fraction) -> bool:
    return (10 * r.numerator) % r.denominator == 0


def planted_params(levels: tuple[int, int, int]) -> ScaleParams:
    """The (s, m, l) point implied by a (high, mid, low) integer level triple.

    The three pairwise ratios high/mid, mid/low, high/low must be distinct,
    lie on the 0.1 parameter grid, and fit the grid bounds; otherwise the
    triple cannot be planted and a ValueError explains why.
    """
    hi, mid, lo = levels
    if not (10 >= hi > mid > lo >= 1):
        raise ValueError(f"levels must satisfy 10 >= high > mid > low >= 1, got {levels}")
    ratios = [Fraction(hi, mid), Fraction(mid, lo), Fraction(hi, lo)]
    if len(set(ratios)) != 3:
        raise ValueError(f"levels {levels} give non-distinct ratios {ratios}")
    for r in ratios:
        if not _on_tenth_grid(r):
            raise ValueError(f"levels {levels}: ratio {r} is not on the 0.1 grid")
    s, m, l = sorted(float(r) for r in ratios)
    if s > 5.0 or m > 10.0 or l > 15.0:
        raise ValueError(f"levels {levels}: ratios exceed the grid bounds")
    return ScaleParams(s, m, l)


def plant_record(
    record_id: str,
    levels: tuple[int, int, int],
    layout: tuple[int, int, int] = (2, 2, 2),
    items: tuple[str, ...] = DEFAULT_ITEM_NAMES,
    rng: random.Random | None = None,
    score_noise: int = 0,
) -> RespondentRecord:
    """One respondent whose judgments encode the level triple exactly.

    ``layout`` gives how many items score at the high/mid/low level. With
    ``score_noise`` > 0, one randomly chosen item's score is nudged by up to
    that many points (judgments stay noiseless), producing a near-planted
    respondent.
    """
    if sum(layout) != len(items) or any(b < 1 for b in layout):
        raise ValueError(f"layout {layout} must use all {len(items)} items")
    params = planted_params(levels)
    rng = rng or random.Random(0)

    scores = [levels[0]] * layout[0] + [levels[1]] * layout[1] + [levels[2]] * layout[2]
    order = list(range(len(items)))
    rng.shuffle(order)
    scores = [scores[order[i]] for i in range(len(items))]

    judged_scores = list(scores)
    if score_noise:
        i = rng.randrange(len(items))
        nudged = scores[i] + rng.choice([-1, 1]) * rng.randint(1, score_noise)
        scores[i] = min(10, max(1, nudged))

    ranked = sorted({float(r) for r in (params.s, params.m, params.l)})
    pairs = list(itertools.combinations(range(len(items)), 2))
    presentation = list(range(1, len(pairs) + 1))
    rng.shuffle(presentation)

    judgments = []
    for (i, k), pos in zip(pairs, presentation):
        ra, rb = judged_scores[i], judged_scores[k]
        if ra == rb:
            pref, cat = Preferred.NEITHER, VerbalCategory.EQUAL
        else:
            mag = Fraction(max(ra, rb), min(ra, rb))
            cat = _CATEGORY_BY_RANK[ranked.index(float(mag))]
            pref = Preferred.A if ra > rb else Preferred.B
        judgments.append(
            Judgment(
                pair=(items[i], items[k]), preferred=pref, category=cat,
                presentation_order=pos,
            )
        )

    second = next(j for j in judgments if j.presentation_order == 2)
    repeated = Judgment(
        pair=second.pair, preferred=second.preferred, category=second.category,
        presentation_order=len(pairs) + 1, reversed_presentation=True,
    )
    return RespondentRecord(
        id=record_id, items=items, judgments=tuple(judgments),
        scores=tuple(scores), repeated=repeated,
        demographics=Demographics(gender="synthetic", age="0", county="-"),
    )


def plant_cohort(
    levels: tuple[int, int, int],
    size: int,
    seed: int = 0,
    noisy_fraction: float = 0.0,
) -> tuple[list[RespondentRecord], ScaleParams]:
    """A cohort of planted respondents cycling through block layouts.

    ``noisy_fraction`` of the cohort gets a one-point score perturbation.
    Returns the records and the planted optimum they encode.
    """
    params = planted_params(levels)
    rng = random.Random(seed)
    records = []
    n_noisy = round(size * noisy_fraction)
    for i in range(size):
        records.append(
            plant_record(
                record_id=f"planted-{i:03d}",
                levels=levels,
                layout=_BLOCK_LAYOUTS[i % len(_BLOCK_LAYOUTS)],
                rng=rng,
                score_noise=1 if i < n_noisy else 0,
            )
        )
    return records, params


def random_record(
    record_id: str,
    rng: random.Random,
    items: tuple[str, ...] = DEFAULT_ITEM_NAMES,
    ensure_coverage: bool = True,
    min_score: int = 1,
) -> RespondentRecord:
    """A respondent with uniformly random judgments and scores.

    With ``ensure_coverage`` the three non-equal categories are each used at
    least once, so the record survives cleaning when scores stay positive.
    """
    pairs = list(itertools.combinations(range(len(items)), 2))
    presentation = list(range(1, len(pairs) + 1))
    rng.shuffle(presentation)
    cats = list(VerbalCategory)
    assigned = [rng.choice(cats) for _ in pairs]
    if ensure_coverage:
        forced = rng.sample(range(len(pairs)), 3)
        for slot, cat in zip(forced, _CATEGORY_BY_RANK):
            assigned[slot] = cat
    judgments = []
    for (i, k), pos, cat in zip(pairs, presentation, assigned):
        if cat is VerbalCategory.EQUAL:
            pref = Preferred.NEITHER
        else:
            pref = rng.choice([Preferred.A, Preferred.B])
        judgments.append(
            Judgment(pair=(items[i], items[k]), preferred=pref, category=cat,
                     presentation_order=pos)
        )
    second = next(j for j in judgments if j.presentation_order == 2)
    repeated = Judgment(
        pair=second.pair, preferred=second.preferred, category=second.category,
        presentation_order=len(pairs) + 1, reversed_presentation=True,
    )
    return RespondentRecord(
        id=record_id, items=items, judgments=tuple(judgments),
        scores=tuple(rng.randint(min_score, 10) for _ in items),
        repeated=repeated,
        demographics=Demographics(gender="synthetic", age="0", county="-"),
    )


def random_cohort(
    size: int, seed: int = 0, items: tuple[str, ...] = DEFAULT_ITEM_NAMES, **kwargs
) -> list[RespondentRecord]:
    rng = random.Random(seed)
    return [
        random_record(f"random-{i:03d}", rng, items=items, **kwargs)
        for i in range(size)
    ]
