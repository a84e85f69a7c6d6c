"""Numeric judgment scales: the published catalog and the parameterized grid.

Verbal answers ("I like it much more") must become numbers before any matrix
math can happen. This demo shows the classical proposals and the three-
parameter family this package calibrates.
"""

from pcmscale import catalog_csv, catalog_names, catalog_values, enumerate_grid
from pcmscale.scales import (
    Direction,
    ScaleParams,
    VerbalCategory,
    verbal_to_entry,
)

###############################################################################
# Eleven published scales map the nine classical verbal levels to numbers.
# Note how wildly they disagree about the top level: 2 for Koczkodaj,
# 81 for the power scale.

for name in catalog_names():
    values = catalog_values(name)
    print(f"{name:16s} {values[0]:.3g} .. {values[-1]:.6g}")

print("\npower scale of exponent 2:", catalog_values("power", alpha=2))
print("geometric with alpha=2:   ", catalog_values("geometric", alpha=2))

###############################################################################
# The whole catalog exports as CSV for documentation.

print("\n" + catalog_csv().splitlines()[0])
print(catalog_csv().splitlines()[6])

###############################################################################
# The survey in this package uses a four-item verbal scale: equal / little /
# moderate / much. Numeric meanings (s, m, l) with 1 < s < m < l are what the
# calibration searches over.

params = ScaleParams(1.5, 1.7, 2.0)
for cat in VerbalCategory:
    if cat is VerbalCategory.EQUAL:
        entry = verbal_to_entry(cat, Direction.NONE, params)
    else:
        entry = verbal_to_entry(cat, Direction.ROW_PREFERRED, params)
    print(f"{cat.value:10s} -> {entry}")

###############################################################################
# The search space: every (s, m, l) on a 0.1 grid with s <= 5, m <= 10,
# l <= 15. Enumeration is exact -- 236,880 combinations.

grid = enumerate_grid()
print(f"\nfull grid: {len(grid)} combinations")
print("first:", grid[0].as_tuple(), " last:", grid[-1].as_tuple())

small = enumerate_grid(s_max=4, m_max=4, l_max=4)
print(f"restricted to s,m,l <= 4: {len(small)} combinations")
