"""Pairwise comparison matrices: validation, consistency, and weight derivation.

A pairwise comparison matrix (PCM) is a positive square matrix whose (i, j)
entry states how strongly alternative i is preferred over alternative j, with
the reciprocity constraint a[j][i] = 1/a[i][j]. Two weight-derivation methods
are provided:

* the eigenvector method (EM): the componentwise-positive principal
  eigenvector, computed by power iteration;
* the logarithmic least squares method (LLSM): the minimizer of the squared
  log-deviations sum((ln a_ij - ln(w_i/w_j))**2), which for complete matrices
  is the vector of row geometric means.

Weight vectors are plain 1-D numpy arrays, strictly positive and normalized
to sum 1 (within ``Tolerances.weight_sum``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Tolerances",
    "TOLERANCES",
    "Pcm",
    "ConsistencyReport",
    "ConvergenceError",
    "principal_eigen",
    "batch_principal_eigen",
    "llsm_weights",
    "batch_llsm_weights",
    "consistency_index",
    "consistency_ratio",
    "consistency_report",
    "is_consistent",
    "make_consistent_pcm",
    "normalize_weights",
    "validate_weights",
]


@dataclass(frozen=True)
class Tolerances:
    """All numeric tolerances used by this module, collected in one record."""

    reciprocity: float = 1e-12  # relative, a[i][j] * a[j][i] vs 1
    weight_sum: float = 1e-12  # |sum(w) - 1|
    power_rel_change: float = 1e-12  # componentwise relative change per step
    power_max_iter: int = 10_000
    consistency: float = 1e-9  # default triad-check tolerance


TOLERANCES = Tolerances()


class ConvergenceError(RuntimeError):
    """Power iteration failed to converge within the iteration budget."""

    def __init__(self, iterations: int, residual: float, indices=()):
        self.iterations = iterations
        self.residual = residual
        self.indices = tuple(int(i) for i in indices)
        where = f" (batch indices {self.indices})" if self.indices else ""
        super().__init__(
            f"power iteration did not converge in {iterations} iterations, "
            f"last relative change {residual:.3e}{where}"
        )


@dataclass(frozen=True)
class Pcm:
    """A positive reciprocal square matrix of relative preferences.

    The entry array is copied and frozen on construction; invariants
    (positivity, unit diagonal, reciprocity within ``Tolerances.reciprocity``)
    are checked eagerly.
    """

    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"PCM must be a square matrix, got shape {a.shape}")
        n = a.shape[0]
        if n < 2:
            raise ValueError("PCM needs at least 2 alternatives")
        if not np.all(np.isfinite(a)) or np.any(a <= 0.0):
            raise ValueError("PCM entries must be finite and strictly positive")
        if np.any(np.abs(np.diag(a) - 1.0) > TOLERANCES.reciprocity):
            raise ValueError("PCM diagonal entries must equal 1")
        if np.any(np.abs(a * a.T - 1.0) > TOLERANCES.reciprocity):
            raise ValueError(
                "PCM must be reciprocal: a[j][i] must equal 1/a[i][j] "
                f"within relative tolerance {TOLERANCES.reciprocity}"
            )
        a.flags.writeable = False
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __eq__(self, other):
        if not isinstance(other, Pcm):
            return NotImplemented
        return self.entries.shape == other.entries.shape and bool(
            np.all(self.entries == other.entries)
        )


@dataclass(frozen=True)
class ConsistencyReport:
    """Spectral inconsistency summary of a PCM."""

    lambda_max: float
    ci: float
    ri: float
    cr: float


def normalize_weights(w) -> np.ndarray:
    """Scale a positive vector to sum 1."""
    w = np.asarray(w, dtype=float)
    if w.ndim != 1 or w.size < 2:
        raise ValueError("weights must be a 1-D vector of length >= 2")
    if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
        raise ValueError("weights must be finite and strictly positive")
    return w / w.sum()


def validate_weights(w, tol: float = TOLERANCES.weight_sum) -> np.ndarray:
    """Check the weight-vector contract: positive components summing to 1."""
    w = np.asarray(w, dtype=float)
    if w.ndim != 1 or np.any(w <= 0.0) or not np.all(np.isfinite(w)):
        raise ValueError("weights must be strictly positive finite reals")
    if abs(w.sum() - 1.0) > tol:
        raise ValueError(f"weights must sum to 1 within {tol}, got {w.sum()!r}")
    return w


def batch_principal_eigen(
    mats: np.ndarray,
    tol: float = TOLERANCES.power_rel_change,
    max_iter: int = TOLERANCES.power_max_iter,
) -> tuple[np.ndarray, np.ndarray]:
    """Principal eigenpairs of a stack of positive matrices by power iteration.

    Each matrix iterates w <- A w / sum(A w) from the uniform vector until the
    componentwise relative change drops to ``tol``; an entry is frozen at its
    own convergence step, so results are identical whether a matrix is solved
    alone or inside a larger batch. The dominant eigenvalue is estimated from
    the converged iterate as mean((A w)_i / w_i).

    Returns ``(lambda_max, weights)`` with shapes (B,) and (B, n).
    Raises ConvergenceError naming the offending batch indices.
    """
    mats = np.asarray(mats, dtype=float)
    if mats.ndim != 3 or mats.shape[1] != mats.shape[2]:
        raise ValueError(f"expected a (B, n, n) stack, got shape {mats.shape}")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    b, n, _ = mats.shape
    w = np.full((b, n), 1.0 / n)
    active = np.arange(b)
    last_rel = np.zeros(b)
    for _ in range(max_iter):
        if active.size == 0:
            break
        sub = mats[active]
        y = np.einsum("bij,bj->bi", sub, w[active])
        y /= y.sum(axis=1, keepdims=True)
        rel = np.max(np.abs(y - w[active]) / w[active], axis=1)
        w[active] = y
        last_rel[active] = rel
        active = active[rel > tol]
    if active.size:
        raise ConvergenceError(max_iter, float(last_rel[active].max()), active)
    lam = np.mean(np.einsum("bij,bj->bi", mats, w) / w, axis=1)
    return lam, w


def principal_eigen(
    pcm: Pcm,
    tol: float = TOLERANCES.power_rel_change,
    max_iter: int = TOLERANCES.power_max_iter,
) -> tuple[float, np.ndarray]:
    """Dominant eigenvalue and sum-1 principal eigenvector of a PCM.

    Convergence for positive matrices is guaranteed by Perron-Frobenius;
    non-convergence within ``max_iter`` raises ConvergenceError carrying the
    iteration count and the last relative change.
    """
    lam, w = batch_principal_eigen(pcm.entries[None, :, :], tol, max_iter)
    return float(lam[0]), w[0]


def batch_llsm_weights(mats: np.ndarray) -> np.ndarray:
    """Row-geometric-mean weights for a stack of positive matrices, sum-1."""
    mats = np.asarray(mats, dtype=float)
    g = np.exp(np.mean(np.log(mats), axis=2))
    return g / g.sum(axis=1, keepdims=True)


def llsm_weights(pcm: Pcm) -> np.ndarray:
    """LLSM weights: normalized row geometric means.

    This is the closed-form minimizer of the squared log-deviation objective
    for complete matrices.
    """
    return batch_llsm_weights(pcm.entries[None, :, :])[0]


def consistency_index(lambda_max: float, n: int) -> float:
    """CI = (lambda_max - n) / (n - 1)."""
    if n < 2:
        raise ValueError(f"consistency index needs n >= 2, got {n}")
    return (lambda_max - n) / (n - 1)


def consistency_ratio(ci: float, ri: float) -> float:
    """CR = CI / RI; a non-positive random index is rejected."""
    if ri <= 0.0:
        raise ValueError(f"random index must be positive, got {ri!r}")
    return ci / ri


def consistency_report(
    pcm: Pcm,
    ri: float,
    tol: float = TOLERANCES.power_rel_change,
    max_iter: int = TOLERANCES.power_max_iter,
) -> ConsistencyReport:
    """Full spectral consistency summary of a PCM under a given random index.

    2x2 matrices are reciprocal-consistent by construction, so their CR is
    reported as 0 regardless of the random index.
    """
    lam, _ = principal_eigen(pcm, tol, max_iter)
    ci = consistency_index(lam, pcm.n)
    if pcm.n == 2:
        return ConsistencyReport(lambda_max=lam, ci=0.0, ri=ri, cr=0.0)
    return ConsistencyReport(lambda_max=lam, ci=ci, ri=ri, cr=consistency_ratio(ci, ri))


def is_consistent(pcm: Pcm, tol: float = TOLERANCES.consistency) -> bool:
    """Exhaustive triad check: |a_ik - a_ij * a_jk| <= tol * a_ik for all i,j,k."""
    a = pcm.entries
    prod = a[:, :, None] * a[None, :, :]  # prod[i,j,k] = a_ij * a_jk
    direct = a[:, None, :]  # broadcast a_ik over j
    return bool(np.all(np.abs(direct - prod) <= tol * direct))


def make_consistent_pcm(weights) -> Pcm:
    """The consistent PCM a[i][j] = w_i / w_j generated by a positive vector."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size < 2 or np.any(w <= 0.0) or not np.all(np.isfinite(w)):
        raise ValueError("weights must be a 1-D strictly positive vector, length >= 2")
    a = np.outer(w, 1.0 / w)
    np.fill_diagonal(a, 1.0)  # w_i * (1/w_i) can be off by one ulp
    return Pcm(a)
