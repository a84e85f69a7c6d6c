"""Monte-Carlo estimation of the Random Index for arbitrary entry scales.

The Random Index for size n is the mean Consistency Index of randomly
generated n x n comparison matrices whose upper-triangle entries are drawn
independently and uniformly from a symmetric support. Following the classical
convention, the support is the given value set united with its reciprocals
and 1; for the fundamental 1..9 scale this yields 17 equiprobable entries,
and for a four-item verbal scale {1, s, m, l} it yields 7.

Reproducibility contract: results are bit-identical for a fixed
(n, values, samples, seed, workers) tuple. Each worker owns an independent
counter-based Philox stream keyed by (seed, worker index) and processes a
contiguous pre-assigned range of sample indices in fixed-size chunks; worker
partial sums are reduced in worker order. Different worker counts may
legitimately produce different bit patterns.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .pcm import ConvergenceError, batch_principal_eigen

__all__ = ["RiEstimate", "simulate_ri", "cr_multiplier", "symmetric_support"]

# Fixed chunk size; part of the deterministic sampling algorithm.
_CHUNK = 32_768


@dataclass(frozen=True)
class RiEstimate:
    """Monte-Carlo Random Index estimate and its sampling metadata."""

    n: int
    scale_values: tuple[float, ...]
    samples: int
    mean_ci: float
    std_error: float
    seed: int
    workers: int
    support: tuple[float, ...]

    def __post_init__(self):
        if self.samples < 1 or self.mean_ci < 0 or self.std_error < 0:
            raise ValueError("invalid estimate fields")

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "scale": list(self.scale_values),
            "samples": self.samples,
            "seed": self.seed,
            "mean_ci": self.mean_ci,
            "std_error": self.std_error,
            "workers": self.workers,
            "support": list(self.support),
        }


def symmetric_support(scale_values) -> np.ndarray:
    """Sampling support: values united with their reciprocals and 1, sorted.

    Because the support is symmetrized, a value set and its reciprocal set
    describe the same distribution.
    """
    vals = np.asarray(scale_values, dtype=float)
    if vals.ndim != 1 or vals.size == 0:
        raise ValueError("scale_values must be a non-empty 1-D sequence")
    if np.any(vals <= 0.0) or not np.all(np.isfinite(vals)):
        raise ValueError("scale_values must be positive finite reals")
    if np.any(np.diff(vals) <= 0.0):
        raise ValueError("scale_values must be strictly increasing")
    return np.unique(np.concatenate([vals, 1.0 / vals, [1.0]]))


def _simulate_range(args) -> tuple[float, float]:
    """Sum and sum-of-squares of CI over one worker's contiguous sample range."""
    n, support, start, count, seed, worker_index = args
    rng = np.random.Generator(
        np.random.Philox(np.random.SeedSequence(entropy=seed, spawn_key=(worker_index,)))
    )
    iu = np.triu_indices(n, 1)
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < count:
        b = min(_CHUNK, count - done)
        idx = rng.integers(0, support.size, size=(b, iu[0].size))
        mats = np.ones((b, n, n))
        mats[:, iu[0], iu[1]] = support[idx]
        mats[:, iu[1], iu[0]] = 1.0 / support[idx]
        try:
            lam, _ = batch_principal_eigen(mats)
        except ConvergenceError as exc:
            bad = start + done + exc.indices[0]
            raise ConvergenceError(
                exc.iterations, exc.residual, indices=(bad,)
            ) from None
        # lambda_max >= n holds exactly (Perron-Frobenius); negative
        # differences are eigensolver float noise on consistent samples.
        ci = np.maximum(lam - n, 0.0) / (n - 1)
        total += float(ci.sum())
        total_sq += float((ci * ci).sum())
        done += b
    return total, total_sq


def simulate_ri(
    n: int,
    scale_values,
    samples: int = 1_000_000,
    seed: int = 0,
    workers: int = 1,
) -> RiEstimate:
    """Estimate the Random Index for size-n matrices over a value scale.

    Every sample fills the upper triangle with independent uniform draws from
    :func:`symmetric_support`, mirrors the reciprocals, and measures the
    Consistency Index via the eigenvector method. A sample whose eigenvector
    iteration fails to converge aborts the whole run, carrying the sample
    index; samples are never skipped silently.
    """
    if n < 3:
        raise ValueError(f"random index needs n >= 3, got {n}")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    support = symmetric_support(scale_values)

    base, rem = divmod(samples, workers)
    tasks = []
    start = 0
    for w in range(workers):
        count = base + (1 if w < rem else 0)
        if count:
            tasks.append((n, support, start, count, seed, w))
        start += count

    if workers == 1 or len(tasks) == 1:
        partials = [_simulate_range(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(_simulate_range, tasks))

    total = 0.0
    total_sq = 0.0
    for part, part_sq in partials:  # fixed worker order keeps the sum deterministic
        total += part
        total_sq += part_sq
    mean = total / samples
    variance = max(total_sq / samples - mean * mean, 0.0)
    return RiEstimate(
        n=n,
        scale_values=tuple(float(v) for v in np.asarray(scale_values, dtype=float)),
        samples=samples,
        mean_ci=mean,
        std_error=float(np.sqrt(variance / samples)),
        seed=seed,
        workers=workers,
        support=tuple(float(v) for v in support),
    )


def cr_multiplier(ri_base: float, ri_modified: float) -> float:
    """How much larger CR becomes when the random index shrinks: base/modified."""
    if ri_base <= 0 or ri_modified <= 0:
        raise ValueError("both random indices must be positive")
    return ri_base / ri_modified
