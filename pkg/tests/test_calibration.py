"""Threshold extraction, least-squares fits, and differential summaries."""

import numpy as np
import pytest

from percepta.calibration import (
    DifferentialSummary,
    LinearThresholdModel,
    ResponseRecord,
    extract_thresholds,
    fit_threshold_model,
    model_differential,
    raw_differential,
    read_response_csv,
    summarize_differentials,
    write_response_csv,
)
from percepta.errors import DataError, DegenerateDesignError, ParameterError
from percepta.topology import INF, MergeTree, TreeComponent


def record(**kw):
    base = dict(S=25.0, N=500, P=3.0, O=1.0, C=5, U=5, participant="p01")
    base.update(kw)
    return ResponseRecord(**base)


def tree_with_exact_threshold(target, count):
    """Tree whose count-`count` interval is centered on `target` (> 0)."""
    delta = target * 0.25
    comps = [TreeComponent(id=0, birth=0.0, death=INF)]
    for i in range(count - 1):
        comps.append(TreeComponent(id=i + 1, birth=0.0, death=target + delta))
    comps.append(TreeComponent(id=count, birth=0.0, death=target - delta))
    return MergeTree(unit="density", components=comps)


class TestRecords:
    def test_validation(self):
        with pytest.raises(ParameterError):
            record(U=0)
        with pytest.raises(ParameterError):
            record(C=0)

    def test_csv_round_trip(self, tmp_path):
        path = tmp_path / "resp.csv"
        records = [record(U=4), record(S=40.0, U=6, participant="p02")]
        write_response_csv(path, records)
        back = read_response_csv(path)
        assert back == records
        header = path.read_text().splitlines()[0]
        assert header == "participant,S,N,P,O,C,U"

    def test_csv_missing_column(self, tmp_path):
        path = tmp_path / "resp.csv"
        path.write_text("participant,S,N,P,O,C\np01,25,500,3,1,5\n")
        with pytest.raises(DataError, match="missing columns"):
            read_response_csv(path)

    def test_csv_bad_row_names_line(self, tmp_path):
        path = tmp_path / "resp.csv"
        path.write_text("participant,S,N,P,O,C,U\np01,25,500,3,1,5,x\n")
        with pytest.raises(DataError, match="row 2"):
            read_response_csv(path)


class TestExtraction:
    def test_fills_threshold_fields(self):
        records = [record(U=3), record(U=2)]
        trees = [tree_with_exact_threshold(0.4, 3), tree_with_exact_threshold(0.2, 2)]
        filled = extract_thresholds(records, trees)
        assert filled[0].extracted_threshold == pytest.approx(0.4)
        assert filled[0].extraction_exact
        assert filled[1].extracted_threshold == pytest.approx(0.2)
        lo, hi = filled[0].threshold_interval
        assert lo < 0.4 < hi

    def test_flags_inexact(self):
        trees = [tree_with_exact_threshold(0.4, 3)]
        filled = extract_thresholds([record(U=9)], trees)
        assert not filled[0].extraction_exact

    def test_alignment_enforced(self):
        with pytest.raises(ParameterError):
            extract_thresholds([record()], [])


class TestFit:
    def synth_records(self, rule, predictor_values, noise=0.0, seed=0):
        rng = np.random.default_rng(seed)
        records = []
        for vals in predictor_values:
            t = rule(vals)
            t *= 1.0 + noise * rng.uniform(-1, 1)
            records.append(record(
                S=vals.get("S", 25.0), N=vals.get("N", 500),
                P=vals.get("P", 3.0), O=vals.get("O", 1.0),
                extracted_threshold=t, extraction_exact=True,
                threshold_interval=(t, t)))
        return records

    def test_exact_recovery_single_factor(self):
        rule = lambda v: 0.004 * v["S"] + 0.12
        records = self.synth_records(rule, [{"S": s} for s in (10, 25, 40, 55, 70, 85)])
        model = fit_threshold_model(records, "S")
        assert model.coefficients == pytest.approx((0.004, 0.12), rel=1e-9)
        assert model.residual_rms == pytest.approx(0.0, abs=1e-12)
        for r in records:
            assert model.predict(r) == pytest.approx(r.extracted_threshold)

    def test_exact_recovery_interaction(self):
        rule = lambda v: 0.001 * v["N"] + 0.05 * v["P"] + 0.2
        grid = [{"N": n, "P": p} for n in (500, 2500, 12500) for p in (1, 3, 5, 7)]
        model = fit_threshold_model(self.synth_records(rule, grid), "N_and_P")
        assert model.coefficients == pytest.approx((0.001, 0.05, 0.2), rel=1e-9)

    def test_residual_orthogonality(self):
        rng = np.random.default_rng(5)
        records = self.synth_records(lambda v: 0.01 * v["P"] + 0.3,
                                     [{"P": float(p)} for p in rng.uniform(1, 9, 25)],
                                     noise=0.3, seed=6)
        model = fit_threshold_model(records, "P")
        residuals = np.array([r.extracted_threshold - model.predict(r)
                              for r in records])
        xs = np.array([r.P for r in records])
        assert abs(np.dot(xs, residuals)) < 1e-9
        assert abs(residuals.sum()) < 1e-9

    def test_affine_rescaling_of_predictor(self):
        rng = np.random.default_rng(7)
        values = [{"N": int(n)} for n in rng.integers(100, 20_000, 12)]
        records = self.synth_records(lambda v: 2e-4 * v["N"] + 0.1, values,
                                     noise=0.2, seed=8)
        model = fit_threshold_model(records, "N")
        scaled = [ResponseRecord(S=r.S, N=r.N * 10, P=r.P, O=r.O, C=r.C, U=r.U,
                                 extracted_threshold=r.extracted_threshold,
                                 extraction_exact=True)
                  for r in records]
        model10 = fit_threshold_model(scaled, "N")
        assert model10.coefficients[0] == pytest.approx(model.coefficients[0] / 10)
        assert model10.coefficients[1] == pytest.approx(model.coefficients[1])
        for r, r10 in zip(records, scaled):
            assert model10.predict(r10) == pytest.approx(model.predict(r))

    def test_rank_deficiency_raises(self):
        records = self.synth_records(lambda v: 0.5, [{"P": 3.0}] * 5)
        with pytest.raises(DegenerateDesignError):
            fit_threshold_model(records, "P")

    def test_needs_extraction_first(self):
        with pytest.raises(ParameterError, match="extract"):
            fit_threshold_model([record(), record(S=40.0)], "S")

    def test_too_few_records(self):
        records = self.synth_records(lambda v: 0.1, [{"N": 500, "P": 1.0}])
        with pytest.raises(ParameterError):
            fit_threshold_model(records, "N_and_P")

    def test_unknown_predictor(self):
        with pytest.raises(ParameterError):
            fit_threshold_model([], "Q")

    def test_model_json_round_trip(self):
        model = LinearThresholdModel(predictor="N_and_P",
                                     coefficients=(0.001, 0.05, 0.2),
                                     n_obs=12, residual_rms=0.003)
        back = LinearThresholdModel.from_dict(model.to_dict())
        assert back == model
        with pytest.raises(ParameterError):
            LinearThresholdModel(predictor="S", coefficients=(1.0, 2.0, 3.0),
                                 n_obs=4, residual_rms=0.0)


class TestDifferentials:
    def test_model_differential_zero_on_round_trip(self):
        rule = lambda v: 0.004 * v["S"] + 0.12
        svals = (10.0, 25.0, 40.0, 55.0, 70.0)
        records, trees = [], []
        for s in svals:
            t = rule({"S": s})
            trees.append(tree_with_exact_threshold(t, 4))
            records.append(record(S=s, U=4, C=4))
        filled = extract_thresholds(records, trees)
        model = fit_threshold_model(filled, "S")
        assert model.coefficients == pytest.approx((0.004, 0.12), rel=1e-6)
        for r, tree in zip(filled, trees):
            assert model_differential(r, model, tree) == 0

    def test_negative_prediction_clamps_to_zero(self):
        from percepta.topology import cluster_count_at

        model = LinearThresholdModel(predictor="S", coefficients=(-1.0, 0.0),
                                     n_obs=3, residual_rms=0.0)
        tree = tree_with_exact_threshold(0.5, 3)
        # prediction -25 counts at threshold 0 instead of raising
        expected = 3 - cluster_count_at(tree, 0.0)
        assert model_differential(record(S=25.0, U=3), model, tree) == expected

    def test_raw_differential(self):
        assert raw_differential(record(U=4, C=7)) == -3
        assert raw_differential(record(U=5, C=5)) == 0

    def test_summary_examples(self):
        summary = summarize_differentials([-1, 0, 1])
        assert summary.mean == pytest.approx(0.0)
        assert summary.std == pytest.approx(1.0)
        assert summary.bin_start == -1
        assert summary.counts == (1, 1, 1)

    def test_single_observation_flagged(self):
        summary = summarize_differentials([5])
        assert summary.std == 0.0
        assert summary.n_obs == 1
        assert summary.counts == (1,)

    def test_moments_match_known_distribution(self):
        rng = np.random.default_rng(9)
        # P(-1)=0.2, P(0)=0.5, P(1)=0.3: mean 0.1, var 0.49
        draws = rng.choice([-1, 0, 1], p=[0.2, 0.5, 0.3], size=1000)
        summary = summarize_differentials(list(draws))
        assert summary.mean == pytest.approx(0.1, abs=5 * 0.7 / np.sqrt(1000))
        assert summary.std == pytest.approx(0.7, abs=0.08)
        assert sum(summary.counts) == 1000

    def test_empty_rejected(self):
        with pytest.raises(ParameterError):
            summarize_differentials([])

    def test_summary_json(self):
        doc = summarize_differentials([2, 2, 3]).to_dict()
        assert doc["histogram"] == {"bin_start": 2, "counts": [2, 1]}
        assert doc["schema"] == 1
