import numpy as np
import pytest

from wtrv import (check_order, construct, make_catalog, make_weight,
                  named_fixture, randomized_theorem_audit, ratio_curve,
                  verify_theorem)
from wtrv.orders import FIXTURES, THEOREM_IDS


class TestCheckOrder:
    def test_exponential_lr_pair(self):
        x = make_catalog("exponential", {"lambda": 2.0})
        y = make_catalog("exponential", {"lambda": 1.0})
        v = check_order(x, y, "lr")
        assert v.holds_on_grid and v.bounds_ok

    def test_all_orders_follow_lr_pair(self):
        x = make_catalog("exponential", {"lambda": 2.0})
        y = make_catalog("exponential", {"lambda": 1.0})
        for order in ("fr", "rfr", "st"):
            assert check_order(x, y, order).holds_on_grid

    def test_reversed_pair_fails(self):
        x = make_catalog("exponential", {"lambda": 1.0})
        y = make_catalog("exponential", {"lambda": 2.0})
        v = check_order(x, y, "st")
        assert not v.holds_on_grid
        assert v.first_violation is not None

    def test_unknown_order(self):
        with pytest.raises(ValueError):
            check_order(make_catalog("uniform", {}),
                        make_catalog("uniform", {}), "hr2")

    def test_bounds_reported_separately(self):
        # ratio monotone on the common support while the upper bounds are
        # reversed: the grid verdict and the bounds flag must disagree
        x = make_catalog("exponential", {"lambda": 1.0})
        y = make_catalog("uniform", {})
        v = check_order(x, y, "rfr")
        assert not v.bounds_ok
        assert v.holds_on_grid


class TestNamedFixtures:
    def test_fixture_names(self):
        assert set(FIXTURES) == {"thm5i-example4", "thm9-example7",
                                 "thm10-example8"}

    def test_lr_preservation_fixture(self):
        x, y, w1, w2, which = named_fixture("thm5i-example4")
        rep = verify_theorem(x, y, w1, w2, which)
        assert rep.hypotheses_pass
        assert rep.conclusion is not None and rep.conclusion.holds_on_grid
        assert rep.consistent

    def test_fr_fixture_holds_but_lr_fails(self):
        x, y, w1, w2, which = named_fixture("thm9-example7")
        rep = verify_theorem(x, y, w1, w2, which)
        assert rep.hypotheses_pass and rep.conclusion.holds_on_grid
        xw, yw = construct(x, w1), construct(y, w2)
        lr = check_order(xw, yw, "lr")
        assert not lr.holds_on_grid

    def test_rfr_fixture(self):
        x, y, w1, w2, which = named_fixture("thm10-example8")
        rep = verify_theorem(x, y, w1, w2, which)
        assert rep.conclusion is not None and rep.conclusion.holds_on_grid
        assert rep.consistent

    def test_unknown_fixture(self):
        with pytest.raises(Exception):
            named_fixture("thm3-example99")


class TestVerifyTheorem:
    def test_unknown_id(self):
        with pytest.raises(ValueError):
            verify_theorem(make_catalog("uniform", {}),
                           make_catalog("uniform", {}),
                           make_weight("linear", {}),
                           make_weight("linear", {}), "thm42")

    def test_vanishing_initial_slope_blocks_hypotheses(self):
        # w1 = x^2 has w'(0) = 0, so the reversed-rate comparison with a
        # linear second weight is outside the hypothesis class
        rep = verify_theorem(make_catalog("exponential", {"lambda": 2.0}),
                             make_catalog("exponential", {"lambda": 1.0}),
                             make_weight("power", {"c": 2.0}),
                             make_weight("linear", {}), "thm6")
        assert not rep.hypotheses_pass
        assert rep.consistent

    def test_minimum_composition(self):
        x = make_catalog("exponential", {"lambda": 1.0})
        y = make_catalog("exponential", {"lambda": 2.0})
        w = make_weight("power", {"c": 0.7})
        rep = verify_theorem(x, y, w, w, "thm7")
        assert rep.hypotheses_pass
        assert rep.conclusion.holds_on_grid and rep.consistent

    def test_minimum_requires_common_weight(self):
        x = make_catalog("exponential", {"lambda": 1.0})
        rep = verify_theorem(x, x, make_weight("power", {"c": 0.7}),
                             make_weight("power", {"c": 0.8}), "thm7")
        assert not rep.hypotheses_pass

    def test_ratio_curve_shape(self):
        x, y, w1, w2, which = named_fixture("thm9-example7")
        xs, ratio = ratio_curve(x, y, w1, w2, grid_size=64)
        assert len(xs) == len(ratio) == 64
        assert np.all(np.isfinite(ratio)) and np.all(ratio >= 0)
        # the non-monotone shape: the ratio rises and then falls
        diffs = np.diff(ratio)
        assert np.any(diffs > 0) and np.any(diffs < 0)


class TestAudits:
    @pytest.mark.parametrize("which", ["thm5i", "thm5ii", "thm6", "thm7"])
    def test_small_audit_clean(self, which):
        rep = randomized_theorem_audit(which, trials=5, seed=11)
        assert rep.hypotheses_passed >= 1
        assert rep.conclusion_passed == rep.hypotheses_passed
        assert rep.counterexample is None

    def test_unknown_audit_id(self):
        with pytest.raises(ValueError):
            randomized_theorem_audit("thm0", trials=5, seed=1)

    def test_audit_ids_cover_all_theorems(self):
        assert set(THEOREM_IDS) == {"thm5i", "thm5ii", "thm6", "thm7", "thm8",
                                    "thm9", "thm10"}
