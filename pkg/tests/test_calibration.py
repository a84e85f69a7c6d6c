import numpy as np
import pytest

from helpers import coverage_answers, make_record
from pcmscale.calibration import (
    CalibrationResult,
    WeightMethod,
    calibrate_average,
    calibrate_individual,
    optimality_heatmap,
    respondent_distance,
)
from pcmscale.dataset import build_pcm_from_record, score_weights
from pcmscale.pcm import is_consistent, llsm_weights, principal_eigen
from pcmscale.scales import ScaleParams, enumerate_grid
from pcmscale.synthetic import plant_cohort, plant_record, random_cohort

BOTH_METHODS = [WeightMethod.EM, WeightMethod.LLSM]
SMALL_GRID = enumerate_grid(s_max=2.0, m_max=2.5, l_max=3.5)
P_STAR = ScaleParams(1.5, 2.0, 3.0)


@pytest.fixture(scope="module")
def planted():
    return plant_record("planted", levels=(3, 2, 1))


class TestRespondentDistance:
    @pytest.mark.parametrize("method", BOTH_METHODS)
    def test_planted_distance_zero_at_p_star(self, planted, method):
        assert respondent_distance(planted, P_STAR, method) == pytest.approx(
            0.0, abs=1e-12
        )

    @pytest.mark.parametrize("method", BOTH_METHODS)
    def test_all_equal_uniform_scores_zero_everywhere(self, method):
        rec = make_record()  # all equal judgments, uniform scores
        for params in (ScaleParams(1.1, 1.2, 1.3), ScaleParams(4.9, 9.9, 14.9)):
            assert respondent_distance(rec, params, method) == pytest.approx(
                0.0, abs=1e-12
            )

    @pytest.mark.parametrize("method", BOTH_METHODS)
    def test_perturbed_prefers_planted_point_over_far_one(self, method):
        rec = plant_record("noisy", levels=(3, 2, 1), score_noise=1,
                           rng=__import__("random").Random(5))
        near = respondent_distance(rec, P_STAR, method)
        far = respondent_distance(rec, ScaleParams(1.1, 5.0, 10.0), method)
        assert near < far

    def test_matches_direct_computation(self, planted):
        params = ScaleParams(1.3, 2.2, 3.1)
        pcm = build_pcm_from_record(planted, params)
        target = score_weights(planted)
        _, w_em = principal_eigen(pcm)
        d = respondent_distance(planted, params, WeightMethod.EM)
        assert d == pytest.approx(float(np.linalg.norm(w_em - target)), abs=1e-13)
        w_ll = llsm_weights(pcm)
        d = respondent_distance(planted, params, WeightMethod.LLSM)
        assert d == pytest.approx(float(np.linalg.norm(w_ll - target)), abs=1e-13)


class TestCalibrateIndividual:
    @pytest.mark.parametrize("method", BOTH_METHODS)
    def test_planted_recovery_on_default_grid(self, method):
        # (7, 5, 2) levels imply (1.4, 2.5, 3.5); that point is the unique
        # exact fit on the full default grid for both weight methods.
        rec = plant_record("p", levels=(7, 5, 2))
        best, dist = calibrate_individual(rec, enumerate_grid(), method)
        assert best.as_tuple() == (1.4, 2.5, 3.5)
        assert dist == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("method", BOTH_METHODS)
    def test_all_equal_ties_break_lexicographically(self, method):
        rec = make_record()
        best, dist = calibrate_individual(rec, SMALL_GRID, method)
        assert best.as_tuple() == (1.1, 1.2, 1.3)
        assert dist == pytest.approx(0.0, abs=1e-12)

    def test_single_point_grid(self, planted):
        grid = [ScaleParams(2.0, 3.0, 4.0)]
        best, _ = calibrate_individual(planted, grid, WeightMethod.LLSM)
        assert best is grid[0]

    def test_empty_grid_rejected(self, planted):
        with pytest.raises(ValueError):
            calibrate_individual(planted, [], WeightMethod.EM)


class TestCalibrateAverage:
    @pytest.mark.parametrize("method", BOTH_METHODS)
    def test_identical_cohort_recovers_plant(self, method):
        records = [plant_record(f"p{i}", levels=(3, 2, 1)) for i in range(5)]
        result = calibrate_average(records, SMALL_GRID, method)
        assert result.best.as_tuple() == (1.5, 2.0, 3.0)
        assert result.best_distance == pytest.approx(0.0, abs=1e-12)
        assert result.evaluated_count == len(SMALL_GRID)

    @pytest.mark.parametrize("method", BOTH_METHODS)
    def test_single_respondent_equals_individual(self, planted, method):
        avg = calibrate_average([planted], SMALL_GRID, method)
        best, dist = calibrate_individual(planted, SMALL_GRID, method)
        assert avg.best == best
        assert avg.best_distance == dist

    def test_empty_cohort_rejected(self):
        with pytest.raises(ValueError):
            calibrate_average([], SMALL_GRID, WeightMethod.EM)

    def test_per_respondent_results(self):
        records, p_star = plant_cohort(levels=(3, 2, 1), size=4, seed=1)
        result = calibrate_average(
            records, SMALL_GRID, WeightMethod.LLSM, per_respondent=True
        )
        assert len(result.per_respondent) == 4
        for rid, params, dist in result.per_respondent:
            assert rid.startswith("planted-")
            assert dist == pytest.approx(0.0, abs=1e-12)

    def test_parallel_evaluation_identical(self):
        records = random_cohort(6, seed=3)
        a = calibrate_average(records, SMALL_GRID, WeightMethod.EM, workers=1)
        b = calibrate_average(records, SMALL_GRID, WeightMethod.EM, workers=3)
        assert a.best == b.best
        assert a.best_distance == b.best_distance

    def test_metadata_documents_conventions(self):
        result = calibrate_average(random_cohort(2, seed=4), SMALL_GRID, WeightMethod.EM)
        assert "sum-1" in result.metadata["normalization"]
        assert "lexicographic" in result.metadata["tie_break"]
        assert "arithmetic mean" in result.metadata["aggregate"]


class TestInvariants:
    @pytest.mark.parametrize("method", BOTH_METHODS)
    def test_score_scale_invariance(self, method):
        base = make_record(
            "a", answers=coverage_answers(), scores=(1, 2, 3, 1, 2, 3)
        )
        doubled = make_record(
            "b", answers=coverage_answers(), scores=(2, 4, 6, 2, 4, 6)
        )
        for params in SMALL_GRID[::50]:
            da = respondent_distance(base, params, method)
            db = respondent_distance(doubled, params, method)
            assert da == pytest.approx(db, abs=1e-14)

    def test_method_agreement_on_consistent_respondents(self):
        records, p_star = plant_cohort(levels=(6, 3, 2), size=6, seed=2)
        em = calibrate_average(records, SMALL_GRID, WeightMethod.EM)
        llsm = calibrate_average(records, SMALL_GRID, WeightMethod.LLSM)
        assert em.best == llsm.best == p_star

    @pytest.mark.parametrize("method", BOTH_METHODS)
    def test_monotone_refinement(self, method):
        rec = random_cohort(1, seed=6)[0]
        coarse = enumerate_grid(step=0.2, s_max=2.0, m_max=2.6, l_max=3.0)
        fine = enumerate_grid(step=0.1, s_max=2.0, m_max=2.6, l_max=3.0)
        # every coarse point sits in the fine grid, so refinement cannot hurt
        coarse_set = {p.as_tuple() for p in coarse}
        assert coarse_set <= {p.as_tuple() for p in fine}
        _, d_coarse = calibrate_individual(rec, coarse, method)
        _, d_fine = calibrate_individual(rec, fine, method)
        assert d_fine <= d_coarse + 1e-15

    def test_restricted_grid_consistency(self):
        rec = plant_record("p", levels=(7, 5, 2))  # optimum (1.4, 2.5, 3.5)
        full = enumerate_grid()
        sub = enumerate_grid(s_max=4.0, m_max=4.0, l_max=4.0)
        best_full, _ = calibrate_individual(rec, full, WeightMethod.LLSM)
        best_sub, _ = calibrate_individual(rec, sub, WeightMethod.LLSM)
        assert best_full.as_tuple() == best_sub.as_tuple()


class TestHeatmap:
    def test_single_mass_point(self):
        records, p_star = plant_cohort(levels=(3, 2, 1), size=5, seed=3)
        result = calibrate_average(
            records, SMALL_GRID, WeightMethod.LLSM, per_respondent=True
        )
        heat = optimality_heatmap(result.per_respondent)
        assert heat == {p_star: 5}

    def test_two_subcohorts(self):
        rec_a, pa = plant_cohort(levels=(3, 2, 1), size=3, seed=4)  # (1.5, 2, 3)
        rec_b, pb = plant_cohort(levels=(8, 5, 2), size=2, seed=5)  # (1.6, 2.5, 4)
        grid = enumerate_grid(s_max=2.0, m_max=3.0, l_max=4.5)
        rows = []
        for rec in rec_a + rec_b:
            best, dist = calibrate_individual(rec, grid, WeightMethod.LLSM)
            rows.append((rec.id, best, dist))
        heat = optimality_heatmap(rows, bounds=(5.0, 5.0, 5.0))
        assert heat[pa] == 3
        assert heat[pb] == 2

    def test_bounds_filter(self):
        rows = [
            ("a", ScaleParams(1.5, 2.0, 3.0), 0.0),
            ("b", ScaleParams(1.5, 2.0, 4.5), 0.0),
        ]
        heat = optimality_heatmap(rows, bounds=(4.0, 4.0, 4.0))
        assert heat == {ScaleParams(1.5, 2.0, 3.0): 1}

    def test_empty(self):
        assert optimality_heatmap([]) == {}


class TestResultValidation:
    def test_negative_distance_rejected(self):
        with pytest.raises(ValueError):
            CalibrationResult(
                method=WeightMethod.EM, best=ScaleParams(1.5, 2.0, 3.0),
                best_distance=-0.1, evaluated_count=10,
            )


def test_em_failure_names_offending_scale(planted, monkeypatch):
    import pcmscale.calibration as cal
    from pcmscale.pcm import ConvergenceError

    def broken(mats, tol=1e-12, max_iter=10_000):
        raise ConvergenceError(max_iter, 0.5, indices=(1,))

    monkeypatch.setattr(cal, "batch_principal_eigen", broken)
    grid = [ScaleParams(1.5, 2.0, 3.0), ScaleParams(1.6, 2.1, 3.1)]
    with pytest.raises(RuntimeError, match=r"failed at scale \(1.6, 2.1, 3.1\)"):
        calibrate_individual(planted, grid, WeightMethod.EM)
