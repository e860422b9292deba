import json
import math

import numpy as np
import pytest

import hawkscan as hs


def one_node(alpha, mu=0.5, beta=1.0):
    return hs.HawkesModel([mu], [[alpha]], hs.Kernel.exponential(beta))


def test_kernel_cumulative():
    k = hs.Kernel.exponential(2.0)
    assert k.cumulative(1.0) == pytest.approx(1 - math.exp(-2.0))
    assert hs.Kernel.exponential(1.0, 1.0).cumulative(5.0) == pytest.approx(0.632120558)


def test_poisson_log_likelihood():
    model = one_node(0.0, mu=1.0)
    ll = hs.log_likelihood(model, [1.0, 2.0], [0, 0], 0.0, 10.0)
    assert ll == pytest.approx(-10.0)


def test_simulate_is_deterministic():
    model = one_node(0.3)
    t1, u1 = hs.simulate(model, 200.0, seed=4)
    t2, u2 = hs.simulate(model, 200.0, seed=4)
    assert np.array_equal(t1, t2) and np.array_equal(u1, u2)
    assert np.all(np.diff(t1) > 0)
    assert t1[-1] <= 200.0


def test_cusum_detects_change():
    pre, post = one_node(0.0), one_node(0.5)
    t, u = hs.simulate(pre, 600.0, seed=11, post=post, kappa=100.0)
    out = hs.detect("cusum", pre, t, u, 600.0, threshold=5.0, grid=0.5, post=post)
    assert out["alarmed"]
    assert out["stop_time"] > 50.0
    assert np.all(out["statistic"] >= 0.0)


def test_llr_is_zero_at_tau_equal_t():
    pre, post = one_node(0.2), one_node(0.4)
    t, u = hs.simulate(pre, 20.0, seed=1)
    assert hs.llr(pre, post, t, u, 5.0, 5.0) == 0.0


def test_kl_example():
    assert hs.kl_mean_field(one_node(0.0), one_node(0.5)) == pytest.approx(0.19315, abs=1e-5)


def test_em_recovers_alpha():
    model = one_node(0.5)
    t, u = hs.simulate(model, 3000.0, seed=9)
    fit = hs.em_fit(t, u, 0.0, 3000.0, beta=1.0, mu=[0.5])
    assert fit["a"][0, 0] == pytest.approx(0.5, abs=0.08)
    assert all(b >= a - 1e-9 for a, b in zip(fit["trace"], fit["trace"][1:]))


def test_score_detector_runs():
    model = one_node(0.3)
    info = hs.fisher_information(model, window=100.0, burn_in=50.0, reps=200, seed=2)
    inv = hs.regularized_inverse(info, 0.0)
    t, u = hs.simulate(model, 200.0, seed=3)
    out = hs.detect("score", model, t, u, 200.0, threshold=1e9, grid=1.0, window=50.0,
                    fisher_inverse=inv)
    assert not out["alarmed"]
    assert len(out["t"]) == 200


def test_model_json_round_trip(tmp_path):
    model = one_node(0.25)
    path = str(tmp_path / "m.json")
    hs.save_model(model, path)
    again = hs.load_model(path)
    assert np.allclose(again.a, model.a)
    assert json.loads(model.to_json())["mu"] == [0.5]


def test_invalid_input_raises():
    with pytest.raises(ValueError):
        hs.log_likelihood(one_node(0.2), [1.0], [0, 0], 0.0, 2.0)
    with pytest.raises(ValueError):
        hs.Kernel.exponential(-1.0)
