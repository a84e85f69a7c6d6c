"""Verbal judgment categories, the parameterized four-item scale, and the
catalog of published numeric comparison scales.

The four verbal categories are *equally like* (always worth 1 in the matrix),
*like it a little bit more*, *like it moderately more*, and *like it much
more*. A :class:`ScaleParams` triple (s, m, l) assigns numeric matrix entries
to the three non-equal categories, with 1 < s < m < l strictly.

:func:`enumerate_grid` walks every admissible (s, m, l) combination on a
fixed step grid; with the default step 0.1 and bounds s <= 5, m <= 10,
l <= 15 there are exactly 236,880 combinations.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Mapping, Sequence

import numpy as np

__all__ = [
    "VerbalCategory",
    "Direction",
    "ScaleParams",
    "CatalogScale",
    "verbal_to_entry",
    "enumerate_grid",
    "grid_values",
    "catalog_names",
    "catalog_values",
    "catalog_scale",
    "catalog_csv",
]


class VerbalCategory(Enum):
    """The four verbal response options, ordered by preference strength."""

    EQUAL = "equal"
    LITTLE = "little"
    MODERATE = "moderate"
    MUCH = "much"

    @property
    def strength(self) -> int:
        """0 for EQUAL, 1..3 for LITTLE/MODERATE/MUCH."""
        return _STRENGTH[self]


_STRENGTH = {
    VerbalCategory.EQUAL: 0,
    VerbalCategory.LITTLE: 1,
    VerbalCategory.MODERATE: 2,
    VerbalCategory.MUCH: 3,
}


class Direction(Enum):
    """Which side of a comparison the judgment favors."""

    ROW_PREFERRED = "row"
    COLUMN_PREFERRED = "column"
    NONE = "none"


@dataclass(frozen=True)
class ScaleParams:
    """Numeric values for the Little/Moderate/Much categories, 1 < s < m < l."""

    s: float
    m: float
    l: float

    def __post_init__(self):
        if not (1.0 < self.s < self.m < self.l):
            raise ValueError(
                f"scale parameters must satisfy 1 < s < m < l, got "
                f"({self.s}, {self.m}, {self.l})"
            )

    def value_of(self, category: VerbalCategory) -> float:
        return (1.0, self.s, self.m, self.l)[category.strength]

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.s, self.m, self.l)


def verbal_to_entry(
    category: VerbalCategory, direction: Direction, params: ScaleParams
) -> float:
    """Matrix entry for a verbal judgment under a scale parameterization.

    EQUAL maps to 1 and must come with Direction.NONE; the other categories
    need an explicit direction and map to the parameter value (row preferred)
    or its reciprocal (column preferred).
    """
    if category is VerbalCategory.EQUAL:
        if direction is not Direction.NONE:
            raise ValueError("EQUAL judgments cannot carry a direction")
        return 1.0
    if direction is Direction.NONE:
        raise ValueError(f"{category.value!r} judgments need a direction")
    value = params.value_of(category)
    return value if direction is Direction.ROW_PREFERRED else 1.0 / value


def grid_values(
    step: float = 0.1,
    s_max: float = 5.0,
    m_max: float = 10.0,
    l_max: float = 15.0,
) -> np.ndarray:
    """The (s, m, l) grid as a (G, 3) float array in lexicographic order.

    Grid points are generated by integer index arithmetic (value = 1 + k*step)
    so the enumeration count is exact and floats are identical across columns.
    """
    if step <= 0.0:
        raise ValueError("step must be positive")
    for name, bound in (("s_max", s_max), ("m_max", m_max), ("l_max", l_max)):
        if bound < 1.0 + step:
            raise ValueError(f"{name} must be at least 1 + step, got {bound}")
    ks = math.floor(round((s_max - 1.0) / step, 9))
    km = math.floor(round((m_max - 1.0) / step, 9))
    kl = math.floor(round((l_max - 1.0) / step, 9))
    # rounding to the decimal lattice makes grid floats equal their literals
    # (1 + 14*0.1 is one ulp off 2.4 otherwise)
    values = np.round(1.0 + step * np.arange(kl + 1), 12)
    out = []
    for i in range(1, ks + 1):
        for j in range(i + 1, km + 1):
            if j + 1 > kl:
                continue
            tail = values[j + 1 : kl + 1]
            block = np.empty((tail.size, 3))
            block[:, 0] = values[i]
            block[:, 1] = values[j]
            block[:, 2] = tail
            out.append(block)
    if not out:
        return np.empty((0, 3))
    return np.concatenate(out, axis=0)


def enumerate_grid(
    step: float = 0.1,
    s_max: float = 5.0,
    m_max: float = 10.0,
    l_max: float = 15.0,
) -> list[ScaleParams]:
    """All admissible scale parameterizations on the step grid.

    Lexicographically ordered, duplicate-free; the default bounds produce
    236,880 combinations.
    """
    vals = grid_values(step, s_max, m_max, l_max)
    return [ScaleParams(s, m, l) for s, m, l in vals.tolist()]


# --- Catalog of published numeric scales -----------------------------------
#
# Each entry maps the nine verbal levels of the classical 1-9 elicitation to
# numbers. Definitions keep the general formula with its declared parameter
# ranges; defaults follow the parameter choices used in practice.


@dataclass(frozen=True)
class CatalogScale:
    """A realized catalog scale: name, chosen parameters, value list."""

    name: str
    parameters: Mapping[str, float]
    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError(f"scale {self.name!r}: values must be strictly increasing")
        if vals[0] < 1.0:
            raise ValueError(f"scale {self.name!r}: first value must be >= 1")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "parameters", dict(self.parameters))


@dataclass(frozen=True)
class _Definition:
    name: str
    formula: str
    defaults: Mapping[str, float]
    checks: Mapping[str, Callable[[float], bool]]
    constraints: Mapping[str, str]
    fn: Callable[..., Sequence[float]]


def _x19() -> np.ndarray:
    return np.arange(1, 10, dtype=float)


def _levels(n: float) -> np.ndarray:
    n = int(n)
    return np.arange(1, n + 1, dtype=float)


_DEFINITIONS = {
    d.name: d
    for d in [
        _Definition(
            "linear",
            "alpha * x",
            {"alpha": 1.0},
            {"alpha": lambda a: a > 0},
            {"alpha": "alpha > 0"},
            lambda alpha: alpha * _x19(),
        ),
        _Definition(
            "affine",
            "alpha * x + beta",
            {"alpha": 0.1, "beta": 1.0},
            {"alpha": lambda a: a > 0, "beta": lambda b: b > 0},
            {"alpha": "alpha > 0", "beta": "beta > 0"},
            lambda alpha, beta: alpha * _x19() + beta,
        ),
        _Definition(
            "power",
            "x ** alpha",
            {"alpha": 2.0},
            {"alpha": lambda a: a > 1},
            {"alpha": "alpha > 1"},
            lambda alpha: _x19() ** alpha,
        ),
        _Definition(
            "root",
            "x ** (1/alpha)",
            {"alpha": 2.0},
            {"alpha": lambda a: a > 1},
            {"alpha": "alpha > 1"},
            lambda alpha: _x19() ** (1.0 / alpha),
        ),
        _Definition(
            "geometric",
            "alpha ** (x - 1)",
            {"alpha": math.sqrt(2.0)},
            {"alpha": lambda a: a > 1},
            {"alpha": "alpha > 1"},
            lambda alpha: alpha ** (_x19() - 1.0),
        ),
        _Definition(
            "inverse-linear",
            "9 / (10 - x)",
            {},
            {},
            {},
            lambda: 9.0 / (10.0 - _x19()),
        ),
        _Definition(
            "asymptotic",
            "exp(atanh(sqrt(3) * (x - 1) / 14))",
            {},
            {},
            {},
            lambda: np.exp(np.arctanh(math.sqrt(3.0) * (_x19() - 1.0) / 14.0)),
        ),
        _Definition(
            # The x/(1-x) form over x in {0.5, 0.55, ..., 0.9} is identical to
            # this y-indexed form over y in {1, ..., 9}.
            "balanced",
            "(9 + y) / (11 - y)",
            {},
            {},
            {},
            lambda: (9.0 + _x19()) / (11.0 - _x19()),
        ),
        _Definition(
            "balanced-power",
            "9 ** ((x - 1) / (n - 1))",
            {"n": 9},
            {"n": lambda n: n >= 2 and float(n).is_integer()},
            {"n": "integer n >= 2"},
            lambda n: 9.0 ** ((_levels(n) - 1.0) / (n - 1.0)),
        ),
        _Definition(
            "logarithmic",
            "log_alpha(x + alpha - 1)",
            {"alpha": 2.0, "n": 9},
            {"alpha": lambda a: a > 1, "n": lambda n: n >= 2 and float(n).is_integer()},
            {"alpha": "alpha > 1", "n": "integer n >= 2"},
            lambda alpha, n: np.log(_levels(n) + alpha - 1.0) / np.log(alpha),
        ),
        _Definition(
            "koczkodaj",
            "1 + (x - 1) / (n - 1)",
            {"n": 9},
            {"n": lambda n: n >= 2 and float(n).is_integer()},
            {"n": "integer n >= 2"},
            lambda n: 1.0 + (_levels(n) - 1.0) / (n - 1.0),
        ),
    ]
}


def catalog_names() -> list[str]:
    return list(_DEFINITIONS)


def catalog_values(name: str, **parameters: float) -> list[float]:
    """Value list of a catalog scale, at its usual parameters unless overridden."""
    try:
        d = _DEFINITIONS[name]
    except KeyError:
        raise ValueError(
            f"unknown scale {name!r}; known: {', '.join(_DEFINITIONS)}"
        ) from None
    params = dict(d.defaults)
    for key, val in parameters.items():
        if key not in d.defaults:
            raise ValueError(f"scale {name!r} takes no parameter {key!r}")
        params[key] = val
    for key, ok in d.checks.items():
        if not ok(params[key]):
            raise ValueError(
                f"scale {name!r}: parameter {key}={params[key]!r} out of range "
                f"({d.constraints[key]})"
            )
    return [float(v) for v in d.fn(**params)]


def catalog_scale(name: str, **parameters: float) -> CatalogScale:
    values = catalog_values(name, **parameters)
    d = _DEFINITIONS[name]
    params = dict(d.defaults)
    params.update(parameters)
    return CatalogScale(name=name, parameters=params, values=tuple(values))


def catalog_csv() -> str:
    """The whole catalog as CSV text: name, parameter set, comma-joined values."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["name", "parameters", "values"])
    for name, d in _DEFINITIONS.items():
        scale = catalog_scale(name)
        params = " ".join(f"{k}={v:.10g}" for k, v in scale.parameters.items())
        writer.writerow(
            [name, params, ",".join(f"{v:.10g}" for v in scale.values)]
        )
    return buf.getvalue()
