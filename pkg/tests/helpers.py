"""Shared builders for survey-record test fixtures."""

from __future__ import annotations

import itertools

from pcmscale.dataset import Demographics, Judgment, Preferred, RespondentRecord
from pcmscale.scales import VerbalCategory

ITEMS6 = ("red", "green", "blue", "magenta", "turquoise", "yellow")

_CAT = {c.value: c for c in VerbalCategory}


def make_judgment(pair, preferred, category, order, reversed_presentation=False):
    """preferred is an item name or 'neither'; category is a lowercase name."""
    if preferred == "neither":
        pref = Preferred.NEITHER
    elif preferred == pair[0]:
        pref = Preferred.A
    elif preferred == pair[1]:
        pref = Preferred.B
    else:
        raise ValueError(f"{preferred!r} not in {pair}")
    return Judgment(
        pair=tuple(pair),
        preferred=pref,
        category=_CAT[category],
        presentation_order=order,
        reversed_presentation=reversed_presentation,
    )


def make_record(
    record_id="r1",
    items=ITEMS6,
    answers=None,
    scores=None,
    repeat=None,
    demographics=None,
):
    """Build a full record from sparse answer specs.

    ``answers`` maps canonical pairs to (preferred_name, category_name);
    unspecified pairs default to ('neither', 'equal'). ``repeat`` overrides
    the repeated answer, defaulting to an exact copy of the second-presented
    judgment. Presentation order is the canonical pair enumeration order.
    """
    answers = dict(answers or {})
    scores = tuple(scores if scores is not None else [5] * len(items))
    pairs = list(itertools.combinations(items, 2))
    judgments = []
    for order, pair in enumerate(pairs, start=1):
        preferred, category = answers.get(pair, ("neither", "equal"))
        judgments.append(make_judgment(pair, preferred, category, order))
    second = judgments[1]
    if repeat is None:
        rep_pref = (
            "neither" if second.preferred is Preferred.NEITHER
            else (second.pair[0] if second.preferred is Preferred.A else second.pair[1])
        )
        rep_cat = second.category.value
    else:
        rep_pref, rep_cat = repeat
    repeated = make_judgment(
        second.pair, rep_pref, rep_cat, len(pairs) + 1, reversed_presentation=True
    )
    return RespondentRecord(
        id=record_id,
        items=tuple(items),
        judgments=tuple(judgments),
        scores=scores,
        repeated=repeated,
        demographics=demographics or Demographics(),
    )


def coverage_answers(items=ITEMS6):
    """Answers using little/moderate/much once each (cleaning-proof)."""
    pairs = list(itertools.combinations(items, 2))
    return {
        pairs[0]: (pairs[0][0], "little"),
        pairs[1]: (pairs[1][0], "moderate"),
        pairs[2]: (pairs[2][1], "much"),
    }
