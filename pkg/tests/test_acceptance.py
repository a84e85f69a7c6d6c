"""Acceptance suite: one test per release criterion, at its stated tolerance.

Each criterion prints an ``ACCEPTANCE PASS`` line when it holds (visible with
``pytest -s`` or in failure reports). Monte-Carlo budgets follow the stated
sample counts, so this module runs for a few minutes.
"""

import http.client
import io
import itertools
import json
import random
import time
from decimal import ROUND_HALF_UP, Decimal

import numpy as np
import pytest

from helpers import coverage_answers, make_record
from pcmscale.app.service import SurveyHttpServer
from pcmscale.app.store import RecordLog
from pcmscale.calibration import WeightMethod, calibrate_average, calibrate_individual
from pcmscale.dataset import (
    RemovalReason,
    clean,
    cr_histogram,
    distance_category_stats,
    export_records,
    ingest,
    ratio_histogram,
    repeated_step_distance,
)
from pcmscale.pcm import (
    Pcm,
    is_consistent,
    llsm_weights,
    make_consistent_pcm,
    principal_eigen,
)
from pcmscale.ri import cr_multiplier, simulate_ri
from pcmscale.scales import VerbalCategory, catalog_values, enumerate_grid
from pcmscale.synthetic import plant_cohort, plant_record

SEED = 20250810
RI_SAMPLES = 1_000_000


def ok(name: str, detail: str = "") -> None:
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE PASS: {name}{suffix}")


# -- 1. grid cardinality --------------------------------------------------------


def test_grid_cardinality_and_runtime():
    start = time.perf_counter()
    grid = enumerate_grid()
    elapsed = time.perf_counter() - start
    assert len(grid) == 236_880
    assert elapsed < 1.0, f"grid enumeration took {elapsed:.2f}s"
    ok("grid cardinality", f"236880 points in {elapsed:.2f}s")


# -- 2 & 3. random-index reproduction -------------------------------------------


@pytest.fixture(scope="module")
def ri_fundamental():
    return simulate_ri(6, list(range(1, 10)), samples=RI_SAMPLES, seed=SEED, workers=2)


@pytest.fixture(scope="module")
def ri_modified():
    return simulate_ri(6, [1, 1.5, 1.7, 2], samples=RI_SAMPLES, seed=SEED, workers=2)


def test_ri_reproduction_fundamental(ri_fundamental):
    assert len(ri_fundamental.support) == 17
    assert ri_fundamental.mean_ci == pytest.approx(1.249, abs=0.01)
    ok("RI reproduction (fundamental scale)",
       f"mean CI {ri_fundamental.mean_ci:.5f} vs 1.249 +- 0.01")


def test_ri_modified_scale(ri_modified, ri_fundamental):
    assert len(ri_modified.support) == 7
    assert ri_modified.mean_ci == pytest.approx(0.09224, abs=0.002)
    multiplier = cr_multiplier(ri_fundamental.mean_ci, ri_modified.mean_ci)
    assert 13.2 <= multiplier <= 13.9
    ok("modified RI and CR multiplier",
       f"mean CI {ri_modified.mean_ci:.6f} vs 0.09224 +- 0.002, "
       f"multiplier {multiplier:.2f} in [13.2, 13.9]")


def test_ri_std_error_shrinks_as_sqrt_samples(ri_fundamental):
    small = simulate_ri(6, list(range(1, 10)), samples=10_000, seed=SEED + 1)
    mid = simulate_ri(6, list(range(1, 10)), samples=100_000, seed=SEED + 2)
    assert small.std_error / mid.std_error == pytest.approx(np.sqrt(10), rel=0.2)
    assert mid.std_error / ri_fundamental.std_error == pytest.approx(
        np.sqrt(10), rel=0.2
    )
    ok("RI standard error scales as 1/sqrt(samples)")


# -- 4. scale catalog ------------------------------------------------------------


def _printed(value, places):
    q = Decimal(1).scaleb(-places)
    return float(Decimal(repr(value)).quantize(q, rounding=ROUND_HALF_UP))


def test_scale_catalog_printed_precision():
    tables = {
        "linear": ([1, 2, 3, 4, 5, 6, 7, 8, 9], 2, {}),
        "affine": ([1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9], 2, {}),
        "power": ([1, 4, 9, 16, 25, 36, 49, 64, 81], 2, {}),
        "root": ([1, 1.41, 1.73, 2, 2.24, 2.45, 2.65, 2.83, 3], 2, {}),
        "geometric": ([1, 1.41, 2, 2.83, 4, 5.66, 8, 11.31, 16], 2, {}),
        "inverse-linear": ([1, 1.13, 1.29, 1.5, 1.8, 2.25, 3, 4.5, 9], 2, {}),
        "asymptotic": ([1, 1.13, 1.29, 1.48, 1.72, 2.06, 2.6, 3.73, 13.93], 2, {}),
        "balanced": ([1, 1.22, 1.5, 1.86, 2.33, 3, 4, 5.67, 9], 2, {}),
        "balanced-power": ([1, 1.32, 1.73, 2.28, 3, 3.95, 5.2, 6.84, 9], 2, {}),
        "logarithmic": ([1, 1.58, 2, 2.32, 2.58, 2.81, 3, 3.17, 3.32], 2, {}),
        "koczkodaj": ([1, 1.125, 1.25, 1.375, 1.5, 1.625, 1.75, 1.875, 2], 3, {}),
    }
    for name, (expected, places, params) in tables.items():
        values = catalog_values(name, **params)
        got = [_printed(v, places) for v in values]
        assert got == pytest.approx(expected), name
    # anchors called out explicitly in the table
    assert _printed(catalog_values("asymptotic")[-1], 2) == 13.93
    assert _printed(catalog_values("inverse-linear")[1], 2) == 1.13
    assert catalog_values("koczkodaj")[:3] == pytest.approx([1, 1.125, 1.25])
    assert catalog_values("geometric", alpha=2)[-1] == pytest.approx(256)
    ok("scale catalog printed-precision reproduction", "11 scales")


# -- 5. weight-method oracles ----------------------------------------------------


def _llsm_oracle(entries):
    """Numeric minimizer of the squared log-deviation objective (gauge-fixed)."""
    from scipy.optimize import minimize

    c = np.log(entries)
    n = entries.shape[0]

    def objective(u):
        v = np.concatenate([[0.0], u])
        resid = c - (v[:, None] - v[None, :])
        return np.sum(resid * resid)

    def gradient(u):
        v = np.concatenate([[0.0], u])
        resid = c - (v[:, None] - v[None, :])
        return -4.0 * resid.sum(axis=1)[1:]

    res = minimize(objective, np.zeros(n - 1), jac=gradient, method="L-BFGS-B",
                   options={"ftol": 1e-18, "gtol": 1e-14, "maxiter": 10_000})
    w = np.exp(np.concatenate([[0.0], res.x]))
    return w / w.sum()


def test_weight_method_oracles_on_1000_matrices():
    rng = np.random.default_rng(SEED)
    n = 4
    iu = np.triu_indices(n, 1)
    worst_gap = 0.0
    for k in range(1000):
        if k % 2 == 0:
            vals = np.exp(rng.uniform(-np.log(9), np.log(9), size=iu[0].size))
            a = np.ones((n, n))
            a[iu] = vals
            a[iu[1], iu[0]] = 1.0 / vals
            pcm = Pcm(a)
            consistent = is_consistent(pcm, tol=1e-9)
        else:
            pcm = make_consistent_pcm(rng.uniform(0.2, 4.0, size=n))
            consistent = True

        lam, em = principal_eigen(pcm)
        llsm = llsm_weights(pcm)

        # spectral lower bound, at measurement tolerance
        assert lam >= n - 1e-9
        # equality at the bound <=> triad consistency
        assert (abs(lam - n) <= 1e-9) == consistent
        if consistent:
            np.testing.assert_allclose(em, llsm, atol=1e-9)

        oracle = _llsm_oracle(pcm.entries)
        gap = float(np.max(np.abs(oracle - llsm)))
        worst_gap = max(worst_gap, gap)
        assert gap <= 1e-6
    ok("weight-method oracles", f"1000 matrices, worst LLSM-vs-minimizer gap {worst_gap:.1e}")


# -- 6. planted-scale recovery ---------------------------------------------------

# every distinct-ratio triple realizable with integer 0-10 scores exercises a
# different corner of the grid; direct scores are 11-point integers, so these
# are exactly the grid points a perfectly coherent respondent can encode
PLANT_LEVELS = [
    (3, 2, 1),   # (1.5, 2.0, 3.0)
    (7, 5, 2),   # (1.4, 2.5, 3.5)
    (8, 5, 2),   # (1.6, 2.5, 4.0)
    (9, 6, 2),   # (1.5, 3.0, 4.5)
    (6, 5, 2),   # (1.2, 2.5, 3.0)
    (10, 4, 2),  # (2.0, 2.5, 5.0)
    (9, 5, 2),   # (1.8, 2.5, 4.5)
]


@pytest.fixture(scope="module")
def full_grid():
    return enumerate_grid()


def test_planted_recovery_noiseless(full_grid):
    for levels in PLANT_LEVELS:
        records, p_star = plant_cohort(levels=levels, size=6, seed=SEED)
        for method in (WeightMethod.EM, WeightMethod.LLSM):
            result = calibrate_average(records, full_grid, method, workers=2)
            assert result.best == p_star, (levels, method)
            assert result.best_distance == pytest.approx(0.0, abs=1e-12)
    ok("planted-scale recovery (noiseless)",
       f"{len(PLANT_LEVELS)} planted grid points, EM and LLSM, full grid")


def test_planted_recovery_individual(full_grid):
    rec = plant_record("solo", levels=(7, 5, 2))
    for method in (WeightMethod.EM, WeightMethod.LLSM):
        best, dist = calibrate_individual(rec, full_grid, method)
        assert best.as_tuple() == (1.4, 2.5, 3.5)
        assert dist == pytest.approx(0.0, abs=1e-12)
    ok("planted-scale recovery (individual respondent)")


def test_planted_recovery_with_score_noise(full_grid):
    for levels in [(3, 2, 1), (7, 5, 2)]:
        records, p_star = plant_cohort(
            levels=levels, size=12, seed=SEED, noisy_fraction=0.34
        )
        for method in (WeightMethod.EM, WeightMethod.LLSM):
            result = calibrate_average(records, full_grid, method, workers=2)
            assert result.best == p_star, (levels, method)
            assert result.best_distance > 0.0  # noise keeps it off the floor
    ok("planted-scale recovery (perturbed scores)")


def test_full_grid_sweep_fifty_respondents_under_budget(full_grid):
    records, p_star = plant_cohort(
        levels=(3, 2, 1), size=50, seed=SEED, noisy_fraction=0.2
    )
    start = time.perf_counter()
    em = calibrate_average(records, full_grid, WeightMethod.EM, workers=2)
    llsm = calibrate_average(records, full_grid, WeightMethod.LLSM, workers=2)
    elapsed = time.perf_counter() - start
    assert em.best == llsm.best == p_star
    assert elapsed < 600.0, f"sweep took {elapsed:.0f}s"
    ok("50-respondent full-grid sweep",
       f"both methods in {elapsed:.1f}s (< 600s budget)")


# -- 7. cleaning bookkeeping -----------------------------------------------------


def test_cleaning_bookkeeping_exact():
    keepers = [
        make_record(f"keep-{i}", answers=coverage_answers(), scores=(2, 3, 4, 5, 6, 7))
        for i in range(5)
    ]
    no_coverage = [make_record(f"cov-{i}") for i in range(3)]
    zero_scores = [
        make_record(
            f"zero-{i}", answers=coverage_answers(), scores=(0, 5, 5, 5, 5, i + 1)
        )
        for i in range(2)
    ]
    both = [make_record("both-0", scores=(0, 5, 5, 5, 5, 5))]  # rule 1 wins
    cohort = keepers + no_coverage + zero_scores + both
    outcome = clean(cohort)
    assert {r.id for r in outcome.kept} == {r.id for r in keepers}
    removed = dict(outcome.removed)
    assert {rid for rid, r in outcome.removed if r is RemovalReason.SCALE_NOT_COVERED} \
        == {"cov-0", "cov-1", "cov-2", "both-0"}
    assert {rid for rid, r in outcome.removed if r is RemovalReason.ZERO_SCORE} \
        == {"zero-0", "zero-1"}
    assert len(removed) == 6

    second = clean(outcome.kept)
    assert second.kept == outcome.kept
    assert second.removed == ()
    ok("cleaning bookkeeping", "counts and reasons exact, idempotent")


# -- 8. repeat-distance semantics -------------------------------------------------


def test_repeat_distance_semantics_all_49_pairs():
    for e1 in range(-3, 4):
        for e2 in range(-3, 4):
            d = abs(e1 - e2)
            if d >= 3:
                # ordinal preference changed at least to indifference:
                # never the same strict direction on both askings
                assert not (e1 * e2 > 0), (e1, e2)
            if d > 3:
                # strict reversal
                assert e1 * e2 < 0, (e1, e2)
    ok("repeat-distance semantics", "all 49 encoded answer pairs")


# -- 9. protocol round-trip --------------------------------------------------------


class _Client:
    def __init__(self, port):
        self.conn = http.client.HTTPConnection("127.0.0.1", port)

    def call(self, method, path, body=None):
        payload = json.dumps(body).encode() if body is not None else None
        headers = {"Content-Type": "application/json"} if payload else {}
        self.conn.request(method, path, body=payload, headers=headers)
        resp = self.conn.getresponse()
        return resp.status, json.loads(resp.read().decode())

    def close(self):
        self.conn.close()


def _drive(client, rng):
    status, created = client.call("POST", "/sessions", {})
    assert status == 200
    sid = created["session_id"]
    steps = 0
    while True:
        status, q = client.call("GET", f"/sessions/{sid}/next")
        assert status == 200
        if q["kind"] == "done":
            return sid, steps
        steps += 1
        if q["kind"] in ("pairwise", "repeat"):
            names = [q["left"]["name"], q["right"]["name"]]
            category = rng.choice(q["categories"])
            preferred = "neither" if category == "equal" else rng.choice(names)
            answer = {"pair": names, "preferred": preferred, "category": category}
        elif q["kind"] == "scoring":
            answer = {"scores": {it["name"]: rng.randint(0, 10) for it in q["items"]}}
        else:
            answer = {"gender": rng.choice(["f", "m", "x"]),
                      "age": str(rng.randint(18, 80)), "county": "Pest"}
        status, out = client.call("POST", f"/sessions/{sid}/answers", answer)
        assert status == 200 and out["accepted"] is True


def test_protocol_round_trip_100_sessions(tmp_path):
    server = SurveyHttpServer(RecordLog(tmp_path / "acceptance.log"), port=0)
    server.start()
    rng = random.Random(SEED)
    try:
        client = _Client(server.port)
        for _ in range(100):
            sid, steps = _drive(client, rng)
            assert steps == 18
        client.close()

        conn = http.client.HTTPConnection("127.0.0.1", server.port)
        conn.request("GET", "/export?format=csv")
        csv_text = conn.getresponse().read().decode()
        conn.request("GET", "/export?format=jsonl")
        jsonl_text = conn.getresponse().read().decode()
        conn.close()
    finally:
        server.stop()

    records_csv = ingest(io.StringIO(csv_text), format="csv")
    records_jsonl = ingest(io.StringIO(jsonl_text), format="jsonl")
    assert len(records_csv) == 100
    assert records_csv == records_jsonl

    # byte-identical re-export
    buf = io.StringIO()
    export_records(records_csv, buf, format="csv")
    assert buf.getvalue() == csv_text

    # every exported record supports the repeat-distance analysis
    for rec in records_csv:
        assert 0 <= repeated_step_distance(rec) <= 6

    # cleaned subset flows through every analysis
    kept = clean(records_csv).kept
    assert kept, "random sessions should produce some analyzable records"
    from pcmscale.scales import ScaleParams

    params = ScaleParams(1.5, 1.7, 2.0)
    for cat in VerbalCategory:
        hist = ratio_histogram(kept, cat)
        expected = sum(1 for r in kept for j in r.judgments if j.category is cat)
        assert sum(c for _, c in hist) == expected
    assert sum(c for _, c in cr_histogram(kept, params, ri=0.09224)) == len(kept)
    stats = distance_category_stats(kept, params, ri=0.09224)
    assert sum(s.count for s in stats.values()) == len(kept)
    coarse = enumerate_grid(step=0.2, s_max=2.4, m_max=3.0, l_max=3.6)
    result = calibrate_average(kept, coarse, WeightMethod.LLSM)
    assert result.evaluated_count == len(coarse)
    ok("protocol round-trip", f"100 sessions, {len(kept)} records after cleaning")
