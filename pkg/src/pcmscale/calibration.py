"""Grid search for the numeric scale whose derived weights best match
direct scoring, per respondent and on cohort average.

For a respondent and a candidate (s, m, l) parameterization, the comparison
matrix implied by the verbal judgments is solved for weights (eigenvector or
log-least-squares method), both that vector and the direct-score vector are
normalized to sum 1, and their Euclidean distance is measured. The optimum is
the grid point minimizing the distance (individually) or the arithmetic mean
of distances (cohort average). Exact-value lexicographic tie-breaking on
(s, m, l) makes results independent of evaluation order and parallelism.

The sweep is vectorized: a respondent's judgments reduce to an integer code
matrix, candidate matrices for a whole grid chunk are materialized by table
lookup, and the eigenvector method runs as one batched power iteration.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

import numpy as np

from .dataset import RespondentRecord, encode_judgment, score_weights
from .pcm import ConvergenceError, batch_principal_eigen
from .scales import ScaleParams

__all__ = [
    "WeightMethod",
    "CalibrationResult",
    "respondent_distance",
    "calibrate_individual",
    "calibrate_average",
    "optimality_heatmap",
]

_SWEEP_CHUNK = 40_000  # grid points per batch; bounds peak memory


class WeightMethod(Enum):
    EM = "em"
    LLSM = "llsm"


_METADATA = {
    "normalization": "sum-1 on both weight and score vectors",
    "tie_break": "lexicographic smallest (s, m, l), exact value comparison",
    "aggregate": "arithmetic mean of respondent distances",
}


@dataclass(frozen=True)
class CalibrationResult:
    method: WeightMethod
    best: ScaleParams
    best_distance: float
    evaluated_count: int
    per_respondent: tuple[tuple[str, ScaleParams, float], ...] | None = None
    metadata: Mapping[str, str] = None

    def __post_init__(self):
        if self.best_distance < 0:
            raise ValueError("best_distance must be >= 0")
        if self.metadata is None:
            object.__setattr__(self, "metadata", dict(_METADATA))


def _code_matrix(record: RespondentRecord) -> np.ndarray:
    """Judgments as a signed category-strength matrix in {-3..3}."""
    n = record.n
    codes = np.zeros((n, n), dtype=np.int64)
    for j in record.judgments:
        a, b = record.item_index(j.pair[0]), record.item_index(j.pair[1])
        c = encode_judgment(j)
        codes[a, b] = c
        codes[b, a] = -c
    return codes


def _grid_array(grid: Sequence[ScaleParams]) -> np.ndarray:
    arr = np.array([(p.s, p.m, p.l) for p in grid], dtype=float)
    if arr.size == 0:
        raise ValueError("grid must be non-empty")
    return arr


def _value_table(grid_vals: np.ndarray) -> np.ndarray:
    """Per grid point, entry values for codes -3..3: [1/l, 1/m, 1/s, 1, s, m, l]."""
    g = grid_vals.shape[0]
    table = np.empty((g, 7))
    table[:, 3] = 1.0
    table[:, 4:7] = grid_vals
    table[:, 0:3] = 1.0 / grid_vals[:, ::-1]
    return table


def _distances_over_grid(
    codes: np.ndarray,
    target: np.ndarray,
    grid_vals: np.ndarray,
    method: WeightMethod,
) -> np.ndarray:
    """Euclidean distance to the target weights at every grid point."""
    g = grid_vals.shape[0]
    n = codes.shape[0]
    out = np.empty(g)
    if method is WeightMethod.LLSM:
        # Row log-weights are linear in (log s, log m, log l): one matmul
        # against the per-row code counts covers the entire grid.
        counts = np.zeros((n, 7))
        for c in range(-3, 4):
            counts[:, c + 3] = np.sum(codes == c, axis=1)
        log_table = np.concatenate(
            [-np.log(grid_vals[:, ::-1]), np.zeros((g, 1)), np.log(grid_vals)],
            axis=1,
        )
        logw = (counts @ log_table.T) / n  # (n, G)
        w = np.exp(logw)
        w /= w.sum(axis=0, keepdims=True)
        np.sqrt(((w - target[:, None]) ** 2).sum(axis=0), out=out)
        return out
    code_idx = codes + 3
    for lo in range(0, g, _SWEEP_CHUNK):
        chunk = grid_vals[lo : lo + _SWEEP_CHUNK]
        mats = _value_table(chunk)[:, code_idx]
        try:
            _, w = batch_principal_eigen(mats)
        except ConvergenceError as exc:
            # abort rather than skip: a silently dropped grid point would
            # bias the argmin
            s, m, l = grid_vals[lo + exc.indices[0]]
            raise RuntimeError(
                f"eigen iteration failed at scale ({s}, {m}, {l})"
            ) from exc
        out[lo : lo + chunk.shape[0]] = np.sqrt(((w - target) ** 2).sum(axis=1))
    return out


def respondent_distance(
    record: RespondentRecord, params: ScaleParams, method: WeightMethod
) -> float:
    """Distance between derived weights and direct-score weights at one point."""
    codes = _code_matrix(record)
    target = score_weights(record)
    grid_vals = np.array([[params.s, params.m, params.l]])
    return float(_distances_over_grid(codes, target, grid_vals, method)[0])


def _argmin_lexicographic(distances: np.ndarray, grid_vals: np.ndarray) -> int:
    best = distances.min()
    ties = np.nonzero(distances == best)[0]
    if ties.size == 1:
        return int(ties[0])
    tied = grid_vals[ties]
    order = np.lexsort((tied[:, 2], tied[:, 1], tied[:, 0]))
    return int(ties[order[0]])


def calibrate_individual(
    record: RespondentRecord,
    grid: Sequence[ScaleParams],
    method: WeightMethod,
) -> tuple[ScaleParams, float]:
    """Best grid point for one respondent, smallest-(s, m, l) on exact ties."""
    grid_vals = _grid_array(grid)
    codes = _code_matrix(record)
    target = score_weights(record)
    distances = _distances_over_grid(codes, target, grid_vals, method)
    i = _argmin_lexicographic(distances, grid_vals)
    return grid[i], float(distances[i])


def calibrate_average(
    records: Sequence[RespondentRecord],
    grid: Sequence[ScaleParams],
    method: WeightMethod,
    per_respondent: bool = False,
    workers: int = 1,
) -> CalibrationResult:
    """Grid point minimizing the mean respondent distance over a cohort.

    With ``workers`` > 1 the per-respondent sweeps run on a thread pool; the
    reduction always happens in respondent order, so results are identical
    for any worker count.
    """
    records = list(records)
    if not records:
        raise ValueError("records must be non-empty")
    grid_vals = _grid_array(grid)
    codes_targets = [(_code_matrix(r), score_weights(r)) for r in records]

    def sweep(ct):
        codes, target = ct
        return _distances_over_grid(codes, target, grid_vals, method)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            all_d = list(pool.map(sweep, codes_targets))
    else:
        all_d = [sweep(ct) for ct in codes_targets]

    total = np.zeros(grid_vals.shape[0])
    for d in all_d:  # respondent order, independent of scheduling
        total += d
    mean = total / len(records)
    i = _argmin_lexicographic(mean, grid_vals)

    per = None
    if per_respondent:
        rows = []
        for rec, d in zip(records, all_d):
            k = _argmin_lexicographic(d, grid_vals)
            rows.append((rec.id, grid[k], float(d[k])))
        per = tuple(rows)
    return CalibrationResult(
        method=method,
        best=grid[i],
        best_distance=float(mean[i]),
        evaluated_count=grid_vals.shape[0],
        per_respondent=per,
    )


def optimality_heatmap(
    per_respondent: Sequence[tuple[str, ScaleParams, float]],
    bounds: tuple[float, float, float] = (4.0, 4.0, 4.0),
) -> dict[ScaleParams, int]:
    """How many respondents each grid point was optimal for, within bounds."""
    s_max, m_max, l_max = bounds
    counts: dict[ScaleParams, int] = {}
    for _, params, _ in per_respondent:
        if params.s <= s_max and params.m <= m_max and params.l <= l_max:
            counts[params] = counts.get(params, 0) + 1
    return counts
