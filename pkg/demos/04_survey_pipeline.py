"""Survey data pipeline: ingest, clean, and describe respondent behavior.

Works on a synthetic cohort (the human-subject dataset behind the methodology
is not published), exercising the exact production path: serialization,
cleaning rules, score-ratio histograms, CR distribution, and test-retest
step distances.
"""

import io

from pcmscale import (
    ScaleParams,
    VerbalCategory,
    clean,
    cr_histogram,
    distance_category_stats,
    export_records,
    ingest,
    ratio_histogram,
)
from pcmscale.synthetic import random_cohort

###############################################################################
# A synthetic cohort with realistic imperfections: some respondents never use
# part of the verbal scale, some give zero scores.

cohort = random_cohort(150, seed=7, ensure_coverage=False, min_score=0)

buf = io.StringIO()
export_records(cohort, buf, format="csv")
records = ingest(io.StringIO(buf.getvalue()), format="csv")
print(f"ingested {len(records)} records "
      f"({len(buf.getvalue().splitlines()) - 1} CSV rows)")

###############################################################################
# Cleaning rule 1 drops respondents who skipped a verbal category (their
# optimal scale would be underdetermined); rule 2 drops zero scores (ratios
# would be undefined).

outcome = clean(records)
by_reason = {}
for _, reason in outcome.removed:
    by_reason[reason.value] = by_reason.get(reason.value, 0) + 1
print(f"kept {len(outcome.kept)}, removed {by_reason}")
kept = outcome.kept

###############################################################################
# What score ratios hide behind each verbal category? For coherent
# respondents the "much more" histogram should sit to the right of "little".

for cat in VerbalCategory:
    hist = ratio_histogram(kept, cat)
    total = sum(c for _, c in hist)
    mean_ratio = sum(center * c for center, c in hist) / total
    print(f"{cat.value:10s} n={total:4d}  mean binned ratio {mean_ratio:.2f}")

###############################################################################
# Matrix inconsistency across the cohort, using the calibrated scale and its
# re-simulated random index (see demo 03).

params = ScaleParams(1.5, 1.7, 2.0)
ri = 0.09224
hist = cr_histogram(kept, params, ri=ri, bin_width=0.05)
print("\nCR histogram (width 0.05):")
for left, count in hist:
    print(f"  [{left:4.2f}, {left + 0.05:4.2f})  {'#' * count} {count}")

###############################################################################
# The repeated question: how far is the second answer from the first, in
# steps of the signed 7-point verbal axis, and are unstable respondents
# also more inconsistent?

stats = distance_category_stats(kept, params, ri=ri)
print("\nrepeat-distance groups (CR five-number summaries):")
for d, group in stats.items():
    print(f"  {d} steps: n={group.count:3d}  median CR {group.median:.3f}  "
          f"[{group.min:.3f} .. {group.max:.3f}]")
