import numpy as np
import pytest

from wtrv import make_catalog, make_weight, parse_weight_spec, validate_weight

WEIGHT_INSTANCES = [
    ("power", {"c": 2.0}),
    ("power", {"c": 0.5}),
    ("scaled_power", {"alpha": 1.7, "beta": 2.2}),
    ("log1p_power", {"c": 2.5}),
    ("neg_log_sq", {}),
    ("exp_shift_sq", {}),
    ("expm1", {}),
    ("neg_x_log1m", {}),
    ("linear", {}),
]


@pytest.fixture(params=WEIGHT_INSTANCES, ids=lambda p: f"{p[0]}{p[1]}")
def weight(request):
    name, params = request.param
    return make_weight(name, dict(params))


def weight_grid(w, n=256):
    hi = w.domain_hint.hi
    hi = min(hi, 20.0) if np.isfinite(hi) else 20.0
    return np.linspace(hi * 1e-4, hi * (1 - 1e-4), n)


class TestWeightInvariants:
    def test_starts_at_zero(self, weight):
        assert abs(float(weight.w(0.0))) <= 1e-12

    def test_nondecreasing_on_grid(self, weight):
        xs = weight_grid(weight)
        vals = np.asarray(weight.w(xs), dtype=float)
        assert np.all(np.diff(vals) >= -1e-12)

    def test_derivative_matches(self, weight):
        xs = weight_grid(weight, n=64)[4:-4]
        h = 1e-6 * (1.0 + np.abs(xs))
        num = (np.asarray(weight.w(xs + h)) - np.asarray(weight.w(xs - h))) / (2 * h)
        wp = np.asarray(weight.w_prime(xs), dtype=float)
        rel = np.abs(num - wp) / (1e-12 + np.abs(wp))
        assert np.max(rel) <= 1e-5

    def test_derivative_nonnegative(self, weight):
        xs = weight_grid(weight)
        assert np.all(np.asarray(weight.w_prime(xs), dtype=float) >= 0.0)


class TestExamples:
    def test_power_two(self):
        w = make_weight("power", {"c": 2.0})
        assert float(w.w(0.5)) == pytest.approx(0.25, rel=1e-14)
        assert float(w.w_prime(0.5)) == pytest.approx(1.0, rel=1e-14)

    def test_neg_log_sq_derivative(self):
        w = make_weight("neg_log_sq", {})
        x = 0.3
        assert float(w.w_prime(x)) == pytest.approx(2 * x / (1 - x * x), rel=1e-12)

    def test_linear(self):
        w = make_weight("linear", {})
        assert float(w.w(3.7)) == pytest.approx(3.7)
        assert float(w.w_prime(100.0)) == pytest.approx(1.0)

    def test_unknown_weight(self):
        with pytest.raises(Exception):
            make_weight("cube_root", {})

    def test_spec_parsing(self):
        w = parse_weight_spec("power(c=2)")
        assert float(w.w(2.0)) == pytest.approx(4.0)


class TestValidation:
    def test_linear_exponential_all_pass(self):
        rep = validate_weight(make_weight("linear", {}),
                              make_catalog("exponential", {"lambda": 1.0}))
        assert rep.starts_at_zero and rep.nondecreasing_on_grid
        assert rep.integrability_ok
        assert rep.normalizer == pytest.approx(1.0, abs=1e-8)

    def test_power_two_lomax_one_diverges(self):
        rep = validate_weight(make_weight("power", {"c": 2.0}),
                              make_catalog("pareto_lomax", {"alpha": 1.0}))
        assert not rep.integrability_ok

    def test_sqrt_kumaraswamy_passes(self):
        rep = validate_weight(make_weight("power", {"c": 0.5}),
                              make_catalog("kumaraswamy", {"a": 2.0, "b": 3.0}))
        assert rep.starts_at_zero and rep.nondecreasing_on_grid
        assert rep.integrability_ok
        assert rep.normalizer is not None and rep.normalizer > 0
