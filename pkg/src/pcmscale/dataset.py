"""Survey data model, ingestion, cleaning rules, and descriptive analyses.

A respondent session consists of one verbal judgment per unordered item pair
(n(n-1)/2 judgments in presentation order), a direct 0-10 integer score per
item, a repeat of the second-presented pairwise question asked at the end of
the session in reversed orientation, and free-form demographics.

File formats
------------
CSV (header required)::

    id, pair_1_a, pair_1_b, pair_1_preferred, pair_1_category, ...,
    score_<item> (one column per item, canonical order), repeat_preferred,
    repeat_category, gender, age, county

JSONL: one session object per line with keys ``id``, ``judgments``,
``scores``, ``repeated``, ``demographics``; the key order of the ``scores``
object defines the canonical item order. Categories serialize as
``equal|little|moderate|much``, preferred sides as the item name or
``neither``. All exports are UTF-8 with LF line endings.
"""

from __future__ import annotations

import csv
import json
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import IO, Iterable, Sequence

import numpy as np

from .pcm import Pcm, consistency_report, normalize_weights
from .scales import Direction, ScaleParams, VerbalCategory, verbal_to_entry

__all__ = [
    "Preferred",
    "Judgment",
    "Demographics",
    "RespondentRecord",
    "RemovalReason",
    "CleaningOutcome",
    "IngestError",
    "ingest",
    "export_records",
    "clean",
    "build_pcm_from_record",
    "score_weights",
    "ratio_histogram",
    "encode_judgment",
    "repeated_step_distance",
    "distance_category_stats",
    "cr_histogram",
    "DistanceGroupStats",
]


class Preferred(Enum):
    """Which element of the canonical pair is preferred."""

    A = "a"
    B = "b"
    NEITHER = "neither"


class RemovalReason(Enum):
    SCALE_NOT_COVERED = "scale_not_covered"
    ZERO_SCORE = "zero_score"


class IngestError(ValueError):
    """Malformed input data; the message names the line and field."""


@dataclass(frozen=True)
class Judgment:
    """One verbal pairwise judgment, stored against the canonical pair order.

    ``preferred`` refers to the pair elements by identity (A = first item of
    the canonical pair), so the stored judgment does not depend on which side
    of the screen an item was displayed on.
    """

    pair: tuple[str, str]
    preferred: Preferred
    category: VerbalCategory
    presentation_order: int
    reversed_presentation: bool = False

    def __post_init__(self):
        if self.pair[0] == self.pair[1]:
            raise ValueError(f"judgment pair must be two distinct items, got {self.pair}")
        if (self.preferred is Preferred.NEITHER) != (
            self.category is VerbalCategory.EQUAL
        ):
            raise ValueError(
                f"preferred must be 'neither' exactly for EQUAL judgments, got "
                f"preferred={self.preferred.value!r} category={self.category.value!r}"
            )
        if self.presentation_order < 1:
            raise ValueError("presentation_order is 1-based")


@dataclass(frozen=True)
class Demographics:
    gender: str = ""
    age: str = ""
    county: str = ""


@dataclass(frozen=True)
class RespondentRecord:
    """One completed survey session."""

    id: str
    items: tuple[str, ...]
    judgments: tuple[Judgment, ...]
    scores: tuple[int, ...]
    repeated: Judgment
    demographics: Demographics = field(default_factory=Demographics)

    def __post_init__(self):
        items = tuple(self.items)
        if len(items) < 2 or len(set(items)) != len(items):
            raise ValueError("items must be >= 2 distinct names")
        object.__setattr__(self, "items", items)
        # canonical storage order: by presentation position
        object.__setattr__(
            self,
            "judgments",
            tuple(sorted(self.judgments, key=lambda j: j.presentation_order)),
        )
        object.__setattr__(self, "scores", tuple(int(s) for s in self.scores))

        n = len(items)
        expected_pairs = {
            (items[i], items[j]) for i in range(n) for j in range(i + 1, n)
        }
        index = {name: k for k, name in enumerate(items)}
        seen = set()
        for j in self.judgments:
            if j.pair[0] not in index or j.pair[1] not in index:
                raise ValueError(f"{self.id}: judgment names unknown item {j.pair}")
            if index[j.pair[0]] > index[j.pair[1]]:
                raise ValueError(
                    f"{self.id}: pair {j.pair} not in canonical item order"
                )
            if j.pair in seen:
                raise ValueError(f"{self.id}: duplicate judgment for pair {j.pair}")
            seen.add(j.pair)
        if seen != expected_pairs:
            missing = sorted(expected_pairs - seen)
            raise ValueError(f"{self.id}: missing judgments for pairs {missing}")
        orders = sorted(j.presentation_order for j in self.judgments)
        if orders != list(range(1, len(self.judgments) + 1)):
            raise ValueError(
                f"{self.id}: presentation orders must be a permutation of "
                f"1..{len(self.judgments)}"
            )

        if len(self.scores) != n:
            raise ValueError(f"{self.id}: need one score per item")
        for name, s in zip(items, self.scores):
            if not (0 <= s <= 10):
                raise ValueError(
                    f"{self.id}: score_{name}={s} out of range [0, 10]"
                )

        second = self.judgment_at(2)
        if self.repeated.pair != second.pair:
            raise ValueError(
                f"{self.id}: repeated judgment is for pair {self.repeated.pair}, "
                f"expected the second-presented pair {second.pair}"
            )

    @property
    def n(self) -> int:
        return len(self.items)

    def item_index(self, name: str) -> int:
        return self.items.index(name)

    def judgment_at(self, presentation_order: int) -> Judgment:
        for j in self.judgments:
            if j.presentation_order == presentation_order:
                return j
        raise KeyError(presentation_order)

    def score_of(self, name: str) -> int:
        return self.scores[self.item_index(name)]

    def categories_used(self) -> set[VerbalCategory]:
        return {j.category for j in self.judgments}


@dataclass(frozen=True)
class CleaningOutcome:
    kept: tuple[RespondentRecord, ...]
    removed: tuple[tuple[str, RemovalReason], ...]
    metadata: dict

    def removed_ids(self, reason: RemovalReason | None = None) -> list[str]:
        return [rid for rid, r in self.removed if reason is None or r is reason]


def clean(records: Sequence[RespondentRecord]) -> CleaningOutcome:
    """Apply the two cleaning rules, in order.

    Rule 1 removes sessions that never used one of the Little/Moderate/Much
    categories: an unused category would leave its scale parameter entirely
    unconstrained in the calibration. EQUAL is exempt because its numeric
    value is pinned to 1. Rule 2 then removes sessions containing a direct
    score of 0, which makes score ratios undefined.
    """
    required = {VerbalCategory.LITTLE, VerbalCategory.MODERATE, VerbalCategory.MUCH}
    kept: list[RespondentRecord] = []
    removed: list[tuple[str, RemovalReason]] = []
    for rec in records:
        if not required <= rec.categories_used():
            removed.append((rec.id, RemovalReason.SCALE_NOT_COVERED))
        else:
            kept.append(rec)
    final: list[RespondentRecord] = []
    for rec in kept:
        if any(s == 0 for s in rec.scores):
            removed.append((rec.id, RemovalReason.ZERO_SCORE))
        else:
            final.append(rec)
    return CleaningOutcome(
        kept=tuple(final),
        removed=tuple(removed),
        metadata={
            "rule_order": ["scale_not_covered", "zero_score"],
            "coverage_categories": sorted(c.value for c in required),
            "equal_exempt": True,
        },
    )


def build_pcm_from_record(record: RespondentRecord, params: ScaleParams) -> Pcm:
    """The respondent's comparison matrix under a scale parameterization."""
    n = record.n
    a = np.ones((n, n))
    for j in record.judgments:
        i, k = record.item_index(j.pair[0]), record.item_index(j.pair[1])
        if j.preferred is Preferred.NEITHER:
            direction = Direction.NONE
        elif j.preferred is Preferred.A:
            direction = Direction.ROW_PREFERRED
        else:
            direction = Direction.COLUMN_PREFERRED
        a[i, k] = verbal_to_entry(j.category, direction, params)
        a[k, i] = 1.0 / a[i, k]
    return Pcm(a)


def score_weights(record: RespondentRecord) -> np.ndarray:
    """Direct-scoring weights: scores normalized to sum 1. Rejects zero scores."""
    if any(s == 0 for s in record.scores):
        raise ValueError(
            f"{record.id}: zero scores present; record must be cleaned first"
        )
    return normalize_weights(np.asarray(record.scores, dtype=float))


def _score_ratio(record: RespondentRecord, j: Judgment) -> float:
    if j.preferred is Preferred.A:
        hi, lo = j.pair
    elif j.preferred is Preferred.B:
        hi, lo = j.pair[1], j.pair[0]
    else:  # EQUAL: canonical order, so both sub- and super-1 ratios occur
        hi, lo = j.pair
    return record.score_of(hi) / record.score_of(lo)


def ratio_histogram(
    records: Sequence[RespondentRecord],
    category: VerbalCategory,
    bin_width: float = 0.25,
    cap: float = 10.0,
) -> list[tuple[float, int]]:
    """Histogram of direct-score ratios for judgments of one verbal category.

    The ratio is preferred-item score over the other item's score (canonical
    a/b order for EQUAL). Ratios are rounded half-up to the nearest bin
    center on the ``bin_width`` grid; anything above ``cap`` lands in the cap
    bin. Returns (bin_center, count) pairs for non-empty bins, sorted.
    """
    if bin_width <= 0 or cap <= 0:
        raise ValueError("bin_width and cap must be positive")
    counts: Counter[int] = Counter()
    cap_k = int(np.floor(cap / bin_width + 0.5))
    for rec in records:
        for j in rec.judgments:
            if j.category is not category:
                continue
            ratio = _score_ratio(rec, j)
            k = int(np.floor(ratio / bin_width + 0.5))
            counts[min(k, cap_k)] += 1
    return [(k * bin_width, counts[k]) for k in sorted(counts)]


def encode_judgment(j: Judgment) -> int:
    """Signed position of a judgment on the combined 7-point verbal scale.

    0 for EQUAL; +1/+2/+3 for Little/Moderate/Much favoring the canonical
    first item, negative when favoring the second. Because ``preferred``
    identifies the item rather than a screen side, the encoding is free of
    presentation orientation.
    """
    step = j.category.strength
    return step if j.preferred is not Preferred.B else -step


def repeated_step_distance(record: RespondentRecord) -> int:
    """Steps between the second-presented judgment and its end-of-session repeat."""
    original = record.judgment_at(2)
    return abs(encode_judgment(original) - encode_judgment(record.repeated))


@dataclass(frozen=True)
class DistanceGroupStats:
    """Five-number summary of CR values for one repeat-distance group."""

    count: int
    min: float
    q1: float
    median: float
    q3: float
    max: float


def _record_cr(record: RespondentRecord, params: ScaleParams, ri: float) -> float:
    return consistency_report(build_pcm_from_record(record, params), ri).cr


def distance_category_stats(
    records: Sequence[RespondentRecord],
    params: ScaleParams,
    ri: float,
) -> dict[int, DistanceGroupStats]:
    """CR five-number summaries grouped by repeated-question step distance.

    Quartiles use inclusive linear interpolation (numpy's default), so a
    singleton group reports its single CR for all five numbers.
    """
    if ri <= 0:
        raise ValueError("ri must be positive")
    groups: dict[int, list[float]] = {}
    for rec in records:
        d = repeated_step_distance(rec)
        groups.setdefault(d, []).append(_record_cr(rec, params, ri))
    out = {}
    for d in sorted(groups):
        vals = np.asarray(groups[d])
        lo, q1, med, q3, hi = np.percentile(vals, [0, 25, 50, 75, 100])
        out[d] = DistanceGroupStats(
            count=vals.size, min=float(lo), q1=float(q1),
            median=float(med), q3=float(q3), max=float(hi),
        )
    return out


def cr_histogram(
    records: Sequence[RespondentRecord],
    params: ScaleParams,
    ri: float,
    bin_width: float = 0.005,
) -> list[tuple[float, int]]:
    """Respondent CR histogram; bins are left-closed right-open.

    Returns (bin_left, count) pairs for non-empty bins, sorted.
    """
    if ri <= 0:
        raise ValueError("ri must be positive")
    if bin_width <= 0:
        raise ValueError("bin_width must be positive")
    counts: Counter[int] = Counter()
    for rec in records:
        cr = _record_cr(rec, params, ri)
        counts[int(np.floor(cr / bin_width))] += 1
    return [(k * bin_width, counts[k]) for k in sorted(counts)]


# --- Serialization ----------------------------------------------------------

_REPEAT_COLUMNS = ["repeat_preferred", "repeat_category"]
_DEMOGRAPHIC_COLUMNS = ["gender", "age", "county"]


def _preferred_name(j: Judgment) -> str:
    if j.preferred is Preferred.NEITHER:
        return "neither"
    return j.pair[0] if j.preferred is Preferred.A else j.pair[1]


def _parse_preferred(
    pair: tuple[str, str], raw: str, where: str
) -> tuple[Preferred, VerbalCategory | None]:
    if raw == "neither":
        return Preferred.NEITHER, None
    if raw == pair[0]:
        return Preferred.A, None
    if raw == pair[1]:
        return Preferred.B, None
    raise IngestError(f"{where}: preferred item {raw!r} is not in pair {pair}")


def _parse_category(raw: str, where: str) -> VerbalCategory:
    try:
        return VerbalCategory(raw)
    except ValueError:
        raise IngestError(
            f"{where}: unknown category {raw!r} "
            f"(expected equal|little|moderate|much)"
        ) from None


def _csv_header(items: Sequence[str], n_pairs: int) -> list[str]:
    cols = ["id"]
    for k in range(1, n_pairs + 1):
        cols += [f"pair_{k}_a", f"pair_{k}_b", f"pair_{k}_preferred", f"pair_{k}_category"]
    cols += [f"score_{name}" for name in items]
    cols += _REPEAT_COLUMNS + _DEMOGRAPHIC_COLUMNS
    return cols


def export_records(
    records: Sequence[RespondentRecord], stream: IO[str], format: str = "csv"
) -> None:
    """Write records in the CSV or JSONL survey format (UTF-8, LF endings)."""
    fmt = format.lower()
    if fmt == "csv":
        _export_csv(records, stream)
    elif fmt == "jsonl":
        _export_jsonl(records, stream)
    else:
        raise ValueError(f"unknown format {format!r} (expected csv or jsonl)")


def _export_csv(records: Sequence[RespondentRecord], stream: IO[str]) -> None:
    records = list(records)
    if not records:
        return
    items = records[0].items
    n_pairs = len(records[0].judgments)
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(_csv_header(items, n_pairs))
    for rec in records:
        if rec.items != items:
            raise ValueError(
                f"{rec.id}: CSV export needs a uniform item set, "
                f"got {rec.items} vs {items}"
            )
        row = [rec.id]
        for k in range(1, n_pairs + 1):
            j = rec.judgment_at(k)
            row += [j.pair[0], j.pair[1], _preferred_name(j), j.category.value]
        row += [str(s) for s in rec.scores]
        row += [_preferred_name(rec.repeated), rec.repeated.category.value]
        row += [rec.demographics.gender, rec.demographics.age, rec.demographics.county]
        writer.writerow(row)


def _judgment_obj(j: Judgment, with_flag: bool = False) -> dict:
    obj = {
        "pair": list(j.pair),
        "preferred": _preferred_name(j),
        "category": j.category.value,
        "presentation_order": j.presentation_order,
    }
    if with_flag:
        obj["reversed_presentation"] = j.reversed_presentation
    return obj


def _export_jsonl(records: Sequence[RespondentRecord], stream: IO[str]) -> None:
    for rec in records:
        obj = {
            "id": rec.id,
            "judgments": [
                _judgment_obj(rec.judgment_at(k))
                for k in range(1, len(rec.judgments) + 1)
            ],
            "scores": {name: s for name, s in zip(rec.items, rec.scores)},
            "repeated": _judgment_obj(rec.repeated, with_flag=True),
            "demographics": {
                "gender": rec.demographics.gender,
                "age": rec.demographics.age,
                "county": rec.demographics.county,
            },
        }
        stream.write(json.dumps(obj, ensure_ascii=False, separators=(",", ": ")))
        stream.write("\n")


def ingest(stream: IO[str] | Iterable[str], format: str = "csv") -> list[RespondentRecord]:
    """Parse survey records from a character stream.

    Malformed input raises :class:`IngestError` naming the line number and
    the offending field.
    """
    fmt = format.lower()
    if fmt == "csv":
        return _ingest_csv(stream)
    if fmt == "jsonl":
        return _ingest_jsonl(stream)
    raise ValueError(f"unknown format {format!r} (expected csv or jsonl)")


def _canonical_judgment(
    items: Sequence[str],
    pair: tuple[str, str],
    preferred_raw: str,
    category_raw: str,
    order: int,
    where: str,
    reversed_presentation: bool = False,
) -> Judgment:
    index = {name: i for i, name in enumerate(items)}
    for name in pair:
        if name not in index:
            raise IngestError(f"{where}: unknown item {name!r}")
    if pair[0] == pair[1]:
        raise IngestError(f"{where}: pair has identical items {pair}")
    if index[pair[0]] > index[pair[1]]:
        pair = (pair[1], pair[0])
    category = _parse_category(category_raw, where)
    preferred, _ = _parse_preferred(pair, preferred_raw, where)
    try:
        return Judgment(
            pair=pair,
            preferred=preferred,
            category=category,
            presentation_order=order,
            reversed_presentation=reversed_presentation,
        )
    except ValueError as exc:
        raise IngestError(f"{where}: {exc}") from None


def _ingest_csv(stream: IO[str] | Iterable[str]) -> list[RespondentRecord]:
    reader = csv.DictReader(stream)
    if reader.fieldnames is None:
        return []
    fields = list(reader.fieldnames)
    items = tuple(
        f[len("score_"):] for f in fields if f.startswith("score_")
    )
    if not items:
        raise IngestError("header: no score_<item> columns found")
    n_pairs = 0
    while f"pair_{n_pairs + 1}_a" in fields:
        n_pairs += 1
    if n_pairs == 0:
        raise IngestError("header: no pair_<k>_* columns found")

    records: list[RespondentRecord] = []
    seen_ids: set[str] = set()
    for row in reader:
        line = reader.line_num
        where = f"line {line}"
        rid = (row.get("id") or "").strip()
        if not rid:
            raise IngestError(f"{where}: missing id")
        if rid in seen_ids:
            raise IngestError(f"{where}: duplicate respondent id {rid!r}")
        seen_ids.add(rid)

        judgments = []
        for k in range(1, n_pairs + 1):
            pair = (row[f"pair_{k}_a"], row[f"pair_{k}_b"])
            judgments.append(
                _canonical_judgment(
                    items, pair, row[f"pair_{k}_preferred"],
                    row[f"pair_{k}_category"], k, f"{where} pair_{k}",
                )
            )

        scores = []
        for name in items:
            col = f"score_{name}"
            raw = row[col]
            try:
                val = int(raw)
            except (TypeError, ValueError):
                raise IngestError(
                    f"{where}: {col}={raw!r} is not an integer"
                ) from None
            if not (0 <= val <= 10):
                raise IngestError(f"{where}: {col}={val} out of range [0, 10]")
            scores.append(val)

        second = next(j for j in judgments if j.presentation_order == 2)
        repeated = _canonical_judgment(
            items, second.pair, row["repeat_preferred"], row["repeat_category"],
            n_pairs + 1, f"{where} repeat", reversed_presentation=True,
        )
        demo = Demographics(
            gender=row.get("gender", ""), age=row.get("age", ""),
            county=row.get("county", ""),
        )
        try:
            records.append(
                RespondentRecord(
                    id=rid, items=items, judgments=tuple(judgments),
                    scores=tuple(scores), repeated=repeated, demographics=demo,
                )
            )
        except ValueError as exc:
            raise IngestError(f"{where}: {exc}") from None
    return records


def _ingest_jsonl(stream: IO[str] | Iterable[str]) -> list[RespondentRecord]:
    records: list[RespondentRecord] = []
    seen_ids: set[str] = set()
    for line_no, line in enumerate(stream, start=1):
        if not line.strip():
            continue
        where = f"line {line_no}"
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise IngestError(f"{where}: invalid JSON ({exc})") from None
        try:
            rid = str(obj["id"])
            scores_obj = obj["scores"]
            items = tuple(scores_obj)
            judgments = []
            for jo in obj["judgments"]:
                judgments.append(
                    _canonical_judgment(
                        items, tuple(jo["pair"]), jo["preferred"], jo["category"],
                        int(jo["presentation_order"]), where,
                    )
                )
            ro = obj["repeated"]
            repeated = _canonical_judgment(
                items, tuple(ro["pair"]), ro["preferred"], ro["category"],
                int(ro["presentation_order"]), f"{where} repeat",
                reversed_presentation=True,
            )
            demo_obj = obj.get("demographics", {})
            demo = Demographics(
                gender=str(demo_obj.get("gender", "")),
                age=str(demo_obj.get("age", "")),
                county=str(demo_obj.get("county", "")),
            )
        except KeyError as exc:
            raise IngestError(f"{where}: missing field {exc}") from None
        if rid in seen_ids:
            raise IngestError(f"{where}: duplicate respondent id {rid!r}")
        seen_ids.add(rid)
        scores = []
        for name in items:
            val = scores_obj[name]
            if not isinstance(val, int) or isinstance(val, bool) or not (0 <= val <= 10):
                raise IngestError(
                    f"{where}: score_{name}={val!r} out of range [0, 10]"
                )
            scores.append(val)
        try:
            records.append(
                RespondentRecord(
                    id=rid, items=items, judgments=tuple(judgments),
                    scores=tuple(scores), repeated=repeated, demographics=demo,
                )
            )
        except ValueError as exc:
            raise IngestError(f"{where}: {exc}") from None
    return records
