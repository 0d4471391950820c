"""Weight functions and numeric admissibility checks.

A weight is an increasing differentiable function on [0, u) with w(0) = 0
whose derivative is absolutely integrable against the base distribution.
Integrability is verified as finiteness of the single integral of
w'(x) * sf(x), which is the same criterion as the defining double integral
for nonnegative derivatives and doubles as the construction normalizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .distributions import DistributionHandle, parse_kv_spec
from .numerics import AccuracyError, Interval, integrate_adaptive


class IntegrabilityError(RuntimeError):
    """Weight derivative is not integrable against the base distribution."""


@dataclass(frozen=True)
class WeightFunction:
    name: str
    params: dict[str, float]
    w: Callable
    w_prime: Callable
    domain_hint: Interval

    def describe(self) -> str:
        args = ",".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"{self.name}({args})"


@dataclass(frozen=True)
class WeightValidityReport:
    starts_at_zero: bool
    nondecreasing_on_grid: bool
    integrability_ok: bool
    normalizer: float | None
    detail: str

    @property
    def ok(self) -> bool:
        return self.starts_at_zero and self.nondecreasing_on_grid and self.integrability_ok


def _arr(x):
    return np.asarray(x, dtype=float)


def _quiet(f):
    def wrapped(x):
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            return f(x)
    return wrapped


def _mk(name, params, w, w_prime, hi=math.inf):
    return WeightFunction(name=name, params=dict(params), w=_quiet(w),
                          w_prime=_quiet(w_prime),
                          domain_hint=Interval(0.0, hi))


def _positive(params, *names):
    for n in names:
        if not params.get(n, 0.0) > 0:
            raise ValueError(f"weight parameter {n!r} must be positive, got {params.get(n)}")


_WEIGHTS: dict[str, tuple[tuple[str, ...], Callable]] = {
    "power": (("c",), lambda p: _mk(
        "power", p,
        lambda x: _arr(x) ** p["c"],
        lambda x: p["c"] * _arr(x) ** (p["c"] - 1.0))),
    "scaled_power": (("alpha", "beta"), lambda p: _mk(
        "scaled_power", p,
        lambda x: (_arr(x) / p["beta"]) ** p["alpha"],
        lambda x: (p["alpha"] / p["beta"]) * (_arr(x) / p["beta"]) ** (p["alpha"] - 1.0))),
    "log1p_power": (("c",), lambda p: _mk(
        "log1p_power", p,
        lambda x: np.log1p(_arr(x) ** p["c"]),
        lambda x: p["c"] * _arr(x) ** (p["c"] - 1.0) / (1.0 + _arr(x) ** p["c"]))),
    "neg_log_sq": ((), lambda p: _mk(
        "neg_log_sq", p,
        lambda x: -np.log1p(-_arr(x) ** 2),
        lambda x: 2.0 * _arr(x) / (1.0 - _arr(x) ** 2),
        hi=1.0)),
    "exp_shift_sq": ((), lambda p: _mk(
        "exp_shift_sq", p,
        lambda x: np.exp((_arr(x) + 1.0) ** 2) - math.e,
        lambda x: 2.0 * (_arr(x) + 1.0) * np.exp((_arr(x) + 1.0) ** 2))),
    "expm1": ((), lambda p: _mk(
        "expm1", p,
        lambda x: np.expm1(_arr(x)),
        lambda x: np.exp(_arr(x)))),
    "neg_x_log1m": ((), lambda p: _mk(
        "neg_x_log1m", p,
        lambda x: -_arr(x) - np.log1p(-_arr(x)),
        lambda x: _arr(x) / (1.0 - _arr(x)),
        hi=1.0)),
    "linear": ((), lambda p: _mk(
        "linear", p,
        lambda x: _arr(x),
        lambda x: np.ones_like(_arr(x)))),
}

WEIGHT_NAMES = tuple(sorted(_WEIGHTS))


def make_weight(name: str, params: dict[str, float] | None = None) -> WeightFunction:
    """Build a catalog weight function with analytic w and w'."""
    if name not in _WEIGHTS:
        raise ValueError(f"unknown weight {name!r}; known: {', '.join(WEIGHT_NAMES)}")
    wanted, builder = _WEIGHTS[name]
    params = dict(params or {})
    missing = [k for k in wanted if k not in params]
    extra = [k for k in params if k not in wanted]
    if missing or extra:
        raise ValueError(f"weight {name} expects parameters {wanted}, got {tuple(params)}")
    _positive(params, *wanted)
    return builder(params)


def parse_weight_spec(text: str) -> WeightFunction:
    name, params = parse_kv_spec(text)
    return make_weight(name, params)


def tail_integrand(weight: WeightFunction, dist: DistributionHandle) -> Callable:
    """w'(x) * sf(x), with the overflow-times-underflow tail resolved to 0:
    once sf underflows to exactly 0 the product vanishes regardless of w'."""

    def integrand(x):
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            wp = _arr(weight.w_prime(x))
            s = _arr(dist.sf(x))
            out = wp * s
            return np.where((s == 0.0) & ~np.isfinite(wp), 0.0, out)

    return integrand


def weight_normalizer_integral(weight: WeightFunction, dist: DistributionHandle,
                               abs_tol: float = 1e-11, rel_tol: float = 1e-9) -> float:
    """E[w(X)] computed as the integral of w'(x) * sf(x) over the support."""
    hi = min(dist.support.hi, weight.domain_hint.hi)
    rng = Interval(dist.support.lo, hi)
    integrand = tail_integrand(weight, dist)

    try:
        res = integrate_adaptive(integrand, rng, abs_tol=abs_tol, rel_tol=rel_tol)
    except AccuracyError as exc:
        raise IntegrabilityError(
            f"integral of w'*sf for {weight.describe()} against {dist.describe()} "
            f"did not converge (best estimate {exc.estimate:.4g})") from exc
    if not math.isfinite(res.value) or res.value <= 0:
        raise IntegrabilityError(
            f"normalizer for {weight.describe()} against {dist.describe()} "
            f"is not a positive finite number: {res.value}")
    return res.value


def validate_weight(weight: WeightFunction, dist: DistributionHandle,
                    grid_size: int = 256) -> WeightValidityReport:
    """Check w(0)=0, grid monotonicity, and integrability of w' against X."""
    if dist.support.lo != 0.0:
        raise ValueError("weight validation requires a base distribution with lower bound 0")
    hi = min(dist.support.hi, weight.domain_hint.hi)
    w0 = float(weight.w(0.0))
    starts_at_zero = abs(w0) <= 1e-12

    if math.isinf(hi):
        grid = np.asarray(dist.quantile(np.linspace(1e-4, 1.0 - 1e-4, grid_size)))
    else:
        grid = np.linspace(0.0, hi, grid_size + 2)[1:-1]
    vals = _arr(weight.w(grid))
    scale = float(np.nanmax(np.abs(vals[np.isfinite(vals)]))) if np.isfinite(vals).any() else 1.0
    diffs = np.diff(vals)
    nondecreasing = bool(np.all(diffs[np.isfinite(diffs)] >= -1e-12 * max(scale, 1.0)))

    detail = ""
    normalizer: float | None = None
    try:
        normalizer = weight_normalizer_integral(weight, dist)
        integrable = True
    except IntegrabilityError as exc:
        integrable = False
        detail = str(exc)
    return WeightValidityReport(starts_at_zero=starts_at_zero,
                                nondecreasing_on_grid=nondecreasing,
                                integrability_ok=integrable,
                                normalizer=normalizer, detail=detail)
