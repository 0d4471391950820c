"""Construction engine for weighted tail random variables.

Given a base distribution X with lower bound 0 and an admissible weight w,
the constructed variable has density w'(x) * sf_X(x) / E[w(X)]. The cdf is
tabulated once by cumulative quadrature on a mass-refined grid and evaluated
through a monotone piecewise-cubic interpolant; the quantile inverts that
interpolant by bracketed root finding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .distributions import (DistributionHandle, make_catalog)
from .numerics import Interval, _gk15_cells, brent_root, integrate_adaptive
from .weights import (IntegrabilityError, WeightFunction, make_weight,
                      tail_integrand, validate_weight, weight_normalizer_integral)


def expected_weight(dist: DistributionHandle, weight: WeightFunction) -> float:
    """E[w(X)] via the tail identity: integral of w'(x) * sf(x)."""
    return weight_normalizer_integral(weight, dist, abs_tol=1e-12, rel_tol=1e-10)


@dataclass(frozen=True)
class WtrvDistribution(DistributionHandle):
    base: DistributionHandle = None
    weight: WeightFunction = None
    normalizer: float = float("nan")
    cdf_nodes: np.ndarray = field(default=None, repr=False)
    cdf_values: np.ndarray = field(default=None, repr=False)

    def describe(self) -> str:
        return f"wtrv[{self.base.describe()}; {self.weight.describe()}]"


def _tail_cutoff(g: Callable, dist: DistributionHandle, total: float) -> float:
    """Smallest doubling point past which the unnormalized tail mass is
    negligible relative to the normalizer."""
    from .numerics import AccuracyError
    x = max(1.0, float(dist.quantile(1.0 - 1e-9)))
    for _ in range(200):
        try:
            res = integrate_adaptive(g, Interval(x, math.inf),
                                     abs_tol=1e-14 * max(total, 1.0), rel_tol=1e-6)
            tail = res.value + res.abs_error_estimate
        except AccuracyError as exc:
            tail = exc.estimate + exc.abs_error_estimate
        if tail <= 1e-13 * total:
            return x
        x *= 2.0
    raise IntegrabilityError("could not locate a negligible-mass tail cutoff")


def _build_table(g: Callable, lo: float, x_max: float, total: float,
                 dist: DistributionHandle) -> tuple[np.ndarray, np.ndarray]:
    """Mass-refined cumulative table for the unnormalized density g."""
    u = np.linspace(1e-5, 1.0 - 1e-5, 257)
    qs = np.asarray(dist.quantile(u), dtype=float)
    nodes = np.unique(np.concatenate([
        np.linspace(lo, x_max, 257),
        np.clip(qs, lo, x_max),
        [lo, x_max],
    ]))
    a, b = nodes[:-1], nodes[1:]
    vals, errs, _ = _gk15_cells(g, a, b)
    mass_cap = total / 1024.0
    err_cap = 1e-12 * max(total, 1e-300)
    for _ in range(14):
        width_ok = (b - a) > 1e-14 * (1.0 + np.abs(a))
        mask = ((vals > mass_cap) | (errs > err_cap)) & width_ok
        if not mask.any() or len(a) > 16384:
            break
        sa, sb = a[mask], b[mask]
        sm = 0.5 * (sa + sb)
        na = np.concatenate([a[~mask], sa, sm])
        nb = np.concatenate([b[~mask], sm, sb])
        nv, ne, _ = _gk15_cells(g, np.concatenate([sa, sm]), np.concatenate([sm, sb]))
        vals = np.concatenate([vals[~mask], nv])
        errs = np.concatenate([errs[~mask], ne])
        order = np.argsort(na)
        a, b, vals, errs = na[order], nb[order], vals[order], errs[order]
    # cells that never met the error cap (typically a pdf singularity at an
    # endpoint) get their mass from the fully adaptive integrator instead
    from .numerics import AccuracyError
    stubborn = np.nonzero(errs > err_cap)[0]
    for i in stubborn[:64]:
        try:
            res = integrate_adaptive(g, Interval(float(a[i]), float(b[i])),
                                     abs_tol=err_cap, rel_tol=1e-12)
            vals[i] = res.value
        except AccuracyError as exc:
            vals[i] = exc.estimate
    masses = np.maximum(vals, 0.0)
    x = np.concatenate([[a[0]], b])
    cum = np.concatenate([[0.0], np.cumsum(masses)]) / total
    return x, np.minimum.accumulate(np.minimum(cum, 1.0)[::-1])[::-1]


def construct(dist: DistributionHandle, weight: WeightFunction) -> WtrvDistribution:
    """Build the weighted tail variable of (X, w) with tabulated cdf."""
    if dist.support.lo != 0.0:
        raise ValueError("construction requires a base distribution with lower bound 0")
    report = validate_weight(weight, dist)
    if not report.ok:
        raise IntegrabilityError(
            f"weight {weight.describe()} is not admissible for {dist.describe()}: "
            f"{report.detail or 'validity flags failed'}")
    z = expected_weight(dist, weight)
    hi = min(dist.support.hi, weight.domain_hint.hi)
    support = Interval(0.0, hi)

    g = tail_integrand(weight, dist)
    x_max = hi if math.isfinite(hi) else _tail_cutoff(g, dist, z)
    nodes, fvals = _build_table(g, 0.0, x_max, z, dist)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        slopes = np.asarray(g(nodes), dtype=float) / z
    slopes = np.where(np.isfinite(slopes) & (slopes >= 0.0), slopes, 0.0)
    interp = CubicHermiteSpline(nodes, fvals, slopes, extrapolate=False)
    f_end = float(fvals[-1])

    def pdf(x):
        arr = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = np.where((arr <= 0.0) | (arr >= hi), 0.0,
                           np.asarray(g(np.clip(arr, 0.0, None)), dtype=float) / z)
        return float(out) if np.isscalar(x) or arr.ndim == 0 else out

    def cdf(x):
        arr = np.asarray(x, dtype=float)
        inner = interp(np.clip(arr, nodes[0], nodes[-1]))
        out = np.where(arr <= 0.0, 0.0,
                       np.where(arr >= hi, 1.0,
                                np.where(arr >= nodes[-1], f_end,
                                         np.clip(inner, 0.0, 1.0))))
        return float(out) if np.isscalar(x) or arr.ndim == 0 else out

    def sf(x):
        arr = np.asarray(x, dtype=float)
        out = 1.0 - np.asarray(cdf(arr), dtype=float)
        return float(out) if np.isscalar(x) or arr.ndim == 0 else out

    def q_scalar(u: float) -> float:
        if u <= 0.0:
            return 0.0
        if u >= 1.0:
            return hi
        if u >= f_end:
            return float(nodes[-1])
        i = int(np.searchsorted(fvals, u, side="right"))
        i = min(max(i, 1), len(nodes) - 1)
        a, b = float(nodes[i - 1]), float(nodes[i])
        fa, fb = float(fvals[i - 1]), float(fvals[i])
        if fa >= u:
            return a
        if fb <= u:
            return b
        return brent_root(lambda t: float(interp(t)) - u, a, b, tol=1e-14 * (1.0 + abs(b)))

    def quantile(u):
        arr = np.asarray(u, dtype=float)
        if np.isscalar(u) or arr.ndim == 0:
            return q_scalar(float(arr))
        return np.array([q_scalar(float(v)) for v in arr.ravel()]).reshape(arr.shape)

    return WtrvDistribution(
        name="wtrv", params={**{f"base_{k}": v for k, v in dist.params.items()},
                             **{f"w_{k}": v for k, v in weight.params.items()}},
        support=support, pdf=pdf, cdf=cdf, sf=sf, quantile=quantile,
        base=dist, weight=weight, normalizer=z, cdf_nodes=nodes, cdf_values=fvals)


def equilibrium(dist: DistributionHandle) -> WtrvDistribution:
    """Equilibrium variable of X: the tail construction with the identity weight."""
    return construct(dist, make_weight("linear"))


def weighted_kumaraswamy(a: float, b: float, c: float) -> DistributionHandle:
    """Closed-form handle for the three-parameter weighted Kumaraswamy family."""
    return make_catalog("weighted_kumaraswamy", {"a": a, "b": b, "c": c})


def minimum_of(handles: Sequence[DistributionHandle]) -> DistributionHandle:
    """Distribution of the minimum of independent variables with common support."""
    if len(handles) < 2:
        raise ValueError("minimum requires at least two distributions")
    sup = handles[0].support
    for h in handles[1:]:
        if h.support != sup:
            raise ValueError("minimum requires identical supports")

    def sf(x):
        arr = np.asarray(x, dtype=float)
        out = np.prod([np.asarray(h.sf(arr), dtype=float) for h in handles], axis=0)
        return float(out) if np.isscalar(x) or arr.ndim == 0 else out

    def cdf(x):
        arr = np.asarray(x, dtype=float)
        out = 1.0 - np.asarray(sf(arr), dtype=float)
        return float(out) if np.isscalar(x) or arr.ndim == 0 else out

    def pdf(x):
        arr = np.asarray(x, dtype=float)
        sfs = [np.asarray(h.sf(arr), dtype=float) for h in handles]
        pdfs = [np.asarray(h.pdf(arr), dtype=float) for h in handles]
        total = np.prod(sfs, axis=0)
        out = np.zeros_like(np.atleast_1d(total), dtype=float)
        for s, p in zip(sfs, pdfs):
            with np.errstate(divide="ignore", invalid="ignore"):
                term = np.where(np.atleast_1d(s) > 0,
                                np.atleast_1d(p) * np.atleast_1d(total) / np.maximum(np.atleast_1d(s), 1e-300),
                                0.0)
            out = out + term
        out = out.reshape(np.shape(total))
        return float(out) if np.isscalar(x) or arr.ndim == 0 else out

    from .distributions import _quantile_via_root
    q = _quantile_via_root(cdf, sup)
    name = "min[" + ",".join(h.describe() for h in handles) + "]"
    return DistributionHandle(name=name, params={}, support=sup,
                              pdf=pdf, cdf=cdf, sf=sf, quantile=q)


def wtrv_of_minimum(dists: Sequence[DistributionHandle],
                    weight: WeightFunction) -> WtrvDistribution:
    """WTRV of the minimum of independent variables with common support."""
    return construct(minimum_of(dists), weight)


@dataclass(frozen=True)
class Table1Row:
    index: int
    base: str
    weight: str
    target: str
    sup_norm: float
    passed: bool
    note: str = ""


def _burr_power_target(c: float, k: float, a: float) -> DistributionHandle:
    """Closed-form density a x^(a-1) (1+x^c)^(-k) / (k B((ck-a)/c, (c+a)/c))."""
    from .numerics import beta_fn
    if not a < c * k:
        raise ValueError("requires a < c*k for integrability")
    norm = k * beta_fn((c * k - a) / c, (c + a) / c)
    base = make_catalog("burr12", {"c": c, "k": k})

    def pdf(x):
        arr = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(arr > 0, a * arr ** (a - 1) * (1 + arr ** c) ** (-k) / norm, 0.0)
        return float(out) if np.isscalar(x) or arr.ndim == 0 else out

    def cdf(x):
        arr = np.asarray(x, dtype=float)
        flat = np.atleast_1d(arr)
        vals = np.array([
            integrate_adaptive(pdf, Interval(0.0, float(v)), abs_tol=1e-12, rel_tol=1e-10).value
            if v > 0 else 0.0 for v in flat])
        out = np.clip(vals.reshape(arr.shape), 0.0, 1.0)
        return float(out) if np.isscalar(x) or arr.ndim == 0 else out

    from .distributions import _quantile_via_root
    sup = Interval(0.0, math.inf)
    return DistributionHandle(name="burr12_power_wtrv", params={"c": c, "k": k, "a": a},
                              support=sup, pdf=pdf, cdf=cdf,
                              sf=lambda x: 1.0 - cdf(x),
                              quantile=_quantile_via_root(cdf, sup))


def _table1_rows() -> list[tuple[str, DistributionHandle, WeightFunction, DistributionHandle, str]]:
    rt2 = math.sqrt(2.0)
    sigma6, sigma7 = 1.4, 0.9
    return [
        ("exponential -> exponential",
         make_catalog("exponential", {"lambda": 1.3}), make_weight("linear"),
         make_catalog("exponential", {"lambda": 1.3}), ""),
        ("exponential + power -> gamma",
         make_catalog("exponential", {"lambda": 1.5}), make_weight("power", {"c": 2.5}),
         make_catalog("gamma", {"k": 2.5, "lambda": 1.5}), ""),
        ("weibull -> weibull",
         make_catalog("weibull", {"alpha": 1.7, "beta": 2.2}),
         make_weight("scaled_power", {"alpha": 1.7, "beta": 2.2}),
         make_catalog("weibull", {"alpha": 1.7, "beta": 2.2}), ""),
        ("truncated power + power -> beta",
         make_catalog("truncated_power", {"beta": 3.5}), make_weight("power", {"c": 2.25}),
         make_catalog("beta", {"alpha": 2.25, "beta": 3.5}), ""),
        ("exponential(1/2) + power(k/2) -> chi-square",
         make_catalog("exponential", {"lambda": 0.5}), make_weight("power", {"c": 2.5}),
         make_catalog("chi_square", {"k": 5.0}), ""),
        ("rayleigh -> rayleigh",
         make_catalog("rayleigh", {"sigma": sigma6}),
         make_weight("scaled_power", {"alpha": 2.0, "beta": rt2 * sigma6}),
         make_catalog("rayleigh", {"sigma": sigma6}), ""),
        ("weibull(2, sqrt2*sigma) + linear scale -> half-normal",
         make_catalog("weibull", {"alpha": 2.0, "beta": rt2 * sigma7}),
         make_weight("scaled_power", {"alpha": 1.0, "beta": rt2 * sigma7}),
         make_catalog("half_normal", {"sigma": sigma7}), ""),
        ("weibull + power -> generalized gamma",
         make_catalog("weibull", {"alpha": 1.5, "beta": 2.0}),
         make_weight("scaled_power", {"alpha": 3.4, "beta": 2.0}),
         make_catalog("generalized_gamma", {"p": 1.5, "a": 2.0, "d": 3.4}),
         "weight exponent read as the target shape d"),
        ("burr12 + log1p -> burr12",
         make_catalog("burr12", {"c": 2.5, "k": 1.8}), make_weight("log1p_power", {"c": 2.5}),
         make_catalog("burr12", {"c": 2.5, "k": 1.8}), ""),
        ("burr12 + power -> burr12 tail family",
         make_catalog("burr12", {"c": 3.0, "k": 2.0}), make_weight("power", {"c": 2.0}),
         _burr_power_target(3.0, 2.0, 2.0), ""),
        ("kumaraswamy + power(a) -> kumaraswamy(a, b+1)",
         make_catalog("kumaraswamy", {"a": 2.0, "b": 3.0}), make_weight("power", {"c": 2.0}),
         make_catalog("kumaraswamy", {"a": 2.0, "b": 4.0}),
         "compared against Kw(a, b+1): the printed Kw(a,b) density is non-normalized"),
        ("kumaraswamy + power(c) -> weighted kumaraswamy",
         make_catalog("kumaraswamy", {"a": 2.0, "b": 3.0}), make_weight("power", {"c": 1.5}),
         make_catalog("weighted_kumaraswamy", {"a": 2.0, "b": 3.0, "c": 1.5}), ""),
    ]


def table1_oracle_suite(grid_size: int = 512, tolerance: float = 1e-6) -> list[Table1Row]:
    """Construct every closed-form catalog row numerically and report the
    sup-norm distance to the target density on an interior grid."""
    rows = []
    for i, (label, base, weight, target, note) in enumerate(_table1_rows(), start=1):
        built = construct(base, weight)
        if target.support.is_finite:
            grid = np.linspace(target.support.lo, target.support.hi, grid_size + 2)[1:-1]
        else:
            grid = np.asarray(target.quantile(np.linspace(1e-3, 1.0 - 1e-3, grid_size)))
        sup_norm = float(np.max(np.abs(np.asarray(built.pdf(grid)) - np.asarray(target.pdf(grid)))))
        rows.append(Table1Row(index=i, base=base.describe(), weight=weight.describe(),
                              target=f"{label}: {target.describe()}", sup_norm=sup_norm,
                              passed=sup_norm <= tolerance, note=note))
    return rows
