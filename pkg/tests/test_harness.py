import math

import numpy as np
import pytest

from epithresh.estimators import relative_error
from epithresh.harness import (
    run_synthetic_experiment,
    run_t1_benchmark,
    theta_product_expected_degrees,
    write_curve_csv,
    write_records_csv,
)


class TestThetaProductModel:
    def test_pair_probabilities_are_exact_products(self):
        ed = theta_product_expected_degrees(50, seed=3)
        theta = ed.delta / ed.delta.sum() * math.sqrt(ed.S)
        # delta_i delta_j / S must equal theta_i theta_j
        outer = np.outer(ed.delta, ed.delta) / ed.S
        assert np.allclose(outer, np.outer(theta, theta), rtol=1e-12)
        assert ed.feasible
        assert theta.max() < 0.25

    def test_scale(self):
        # lambda of the product kernel is sum(theta^2), about n/48 for U(0, 1/4)
        ed = theta_product_expected_degrees(5000, seed=1)
        assert ed.mu2 / ed.mu1 == pytest.approx(5000 / 48, rel=0.1)


class TestBenchmark:
    def test_single_rep_reproducible(self):
        records_a, summary_a, _ = run_t1_benchmark(300, reps=1, seed=42)
        records_b, summary_b, _ = run_t1_benchmark(300, reps=1, seed=42)
        a, b = records_a[0], records_b[0]
        assert (a.seed, a.n, a.m, a.lambda_a, a.t1, a.e1) == (
            b.seed,
            b.n,
            b.m,
            b.lambda_a,
            b.t1,
            b.e1,
        )
        assert summary_a.mean_e1 == summary_b.mean_e1

    def test_summary_recomputable_from_records(self):
        records, summary, _ = run_t1_benchmark(400, reps=5, seed=7)
        errors = np.array([rec.e1 for rec in records])
        assert summary.mean_e1 == pytest.approx(float(errors.mean()), abs=1e-12)
        assert summary.sd_e1 == pytest.approx(float(errors.std(ddof=1)), abs=1e-12)

    def test_error_field_consistency(self):
        records, _, _ = run_t1_benchmark(400, reps=3, seed=1)
        for rec in records:
            assert rec.e1 == pytest.approx(
                relative_error(rec.t1, rec.lambda_a), abs=1e-15
            )


class TestSyntheticExperiment:
    def test_deterministic_outputs(self, tmp_path):
        kwargs = dict(
            model="chung-lu",
            n=400,
            seed=5,
            params={"deg_dist": "uniform", "low": 6.0, "high": 14.0},
            walk_seeds=3,
            thin=5,
        )
        result_a = run_synthetic_experiment(**kwargs)
        result_b = run_synthetic_experiment(**kwargs)
        assert result_a.records == result_b.records
        # curves can hold NaN placeholders (pre-sample budgets), so compare text
        assert repr(result_a.curve) == repr(result_b.curve)

        paths = []
        for tag, result in (("a", result_a), ("b", result_b)):
            rec = tmp_path / f"records_{tag}.csv"
            cur = tmp_path / f"curve_{tag}.csv"
            write_records_csv(str(rec), result.config, result.records)
            write_curve_csv(str(cur), result.config, result.curve, points=result.curve_points)
            paths.append((rec, cur))
        assert paths[0][0].read_bytes() == paths[1][0].read_bytes()
        assert paths[0][1].read_bytes() == paths[1][1].read_bytes()

    def test_references_consistent(self):
        result = run_synthetic_experiment(
            "chung-lu",
            400,
            seed=9,
            params={"deg_dist": "uniform", "low": 6.0, "high": 14.0},
            walk_seeds=2,
        )
        assert result.lambda_a > 0 and result.t1 > 0
        for rec in result.records:
            assert rec.e1 == pytest.approx(
                relative_error(result.t1, result.lambda_a), abs=1e-15
            )
            assert rec.eps_t1_t2 is not None and rec.eps_t1_t2 >= 0
            assert rec.nodes_seen <= result.component_n

    def test_curve_budgets_cover_fractions(self):
        result = run_synthetic_experiment(
            "pa",
            300,
            seed=2,
            params={"edges_per_node": 3},
            walk_seeds=2,
            budget_fractions=(0.1, 0.5, 1.0),
        )
        budgets = [row.budget for row in result.curve]
        assert budgets == sorted(budgets)
        assert budgets[-1] == result.component_n

    def test_csv_headers_self_describing(self, tmp_path):
        result = run_synthetic_experiment(
            "pa", 200, seed=1, params={"edges_per_node": 3}, walk_seeds=2
        )
        path = tmp_path / "records.csv"
        write_records_csv(str(path), result.config, result.records)
        text = path.read_text()
        assert text.startswith("# experiment=error-curve")
        assert "# model=pa" in text
        assert "walk_seeds=" in text
        header = [line for line in text.splitlines() if not line.startswith("#")][0]
        assert header.split(",")[:5] == ["seed", "n", "m", "lambda_a", "t1"]

    def test_unknown_model_rejected(self):
        with pytest.raises(ValueError, match="unknown model"):
            run_synthetic_experiment("erdos", 100, seed=0)

    def test_bipartite_component_warns(self, monkeypatch):
        # force a bipartite generated graph through the pa path: a 2-node
        # chung-lu with forced edge is the simplest bipartite component
        from epithresh.graph import build_graph

        monkeypatch.setattr(
            "epithresh.harness._generate_model_graph",
            lambda model, n, seed, params: (build_graph([(0, 1), (1, 2)], 3), {}),
        )
        with pytest.warns(RuntimeWarning, match="bipartite"):
            run_synthetic_experiment(
                "pa", 3, seed=0, walk_seeds=1, budget_fractions=(1.0,), t_star=2
            )

    def test_worker_count_does_not_change_results(self, monkeypatch):
        kwargs = dict(
            model="chung-lu",
            n=300,
            seed=3,
            params={"deg_dist": "uniform", "low": 5.0, "high": 12.0},
            walk_seeds=4,
            thin=3,
        )
        monkeypatch.delenv("EPITHRESH_THREADS", raising=False)
        sequential = run_synthetic_experiment(**kwargs)
        monkeypatch.setenv("EPITHRESH_THREADS", "4")
        threaded = run_synthetic_experiment(**kwargs)
        assert sequential.records == threaded.records
        assert repr(sequential.curve) == repr(threaded.curve)


class TestFiftyThousandNodeInstances:
    """Full-scale generator targets; these still run in a few seconds."""

    def test_power_law_edge_mass_scale(self):
        from epithresh.generators import power_law_expected_degrees, chung_lu_sample_fast

        ed = power_law_expected_degrees(50_000, 2.5, 1.0, seed=11)
        with pytest.warns(RuntimeWarning):
            g = chung_lu_sample_fast(ed, 2)
        assert 30_000 <= g.m <= 150_000  # the instance lands near 72k edges

    def test_estimators_track_each_other_at_scale(self):
        from epithresh.generators import power_law_expected_degrees, chung_lu_sample_fast
        from epithresh.spectral import spectral_radius
        from epithresh.estimators import t1_estimate

        ed = power_law_expected_degrees(50_000, 2.5, 1.0, seed=11)
        with pytest.warns(RuntimeWarning):
            g = chung_lu_sample_fast(ed, 2)
        lam = spectral_radius(g).value
        t1 = t1_estimate(g).t1
        assert relative_error(t1, lam) <= 0.25
