"""Base-distribution abstraction and the catalog of input families.

Every handle exposes vectorized pdf/cdf/sf/quantile plus support metadata.
Parameterizations follow the survival-function forms used throughout the
construction engine, e.g. Weibull sf = exp(-(x/beta)^alpha) and Lomax-style
Pareto sf = (1+x)^(-alpha).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import special as _sc

from .numerics import Interval, beta_fn, brent_root, incomplete_beta_upper


class CatalogError(ValueError):
    """Unknown family name or parameter set."""


@dataclass(frozen=True)
class DistributionHandle:
    name: str
    params: dict[str, float]
    support: Interval
    pdf: Callable = field(repr=False)
    cdf: Callable = field(repr=False)
    sf: Callable = field(repr=False)
    quantile: Callable = field(repr=False)

    def describe(self) -> str:
        args = ",".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"{self.name}({args})"


def _as_array(x):
    return np.asarray(x, dtype=float)


def _scalarize(fn: Callable) -> Callable:
    """Return fn but with scalar-in/scalar-out behaviour preserved."""

    def wrapped(x):
        arr = _as_array(x)
        out = fn(arr)
        if np.isscalar(x) or arr.ndim == 0:
            return float(out)
        return out

    return wrapped


def _quantile_via_root(cdf: Callable, support: Interval) -> Callable:
    """Numeric quantile by bracketed root finding on the cdf."""

    def q_scalar(u: float) -> float:
        if u <= 0.0:
            return support.lo
        if u >= 1.0:
            return support.hi
        hi = support.hi
        if math.isinf(hi):
            hi = max(1.0, support.lo + 1.0)
            while float(cdf(hi)) < u:
                hi *= 2.0
                if hi > 1e300:
                    return hi
        return brent_root(lambda x: float(cdf(x)) - u, support.lo, hi, tol=1e-13)

    def q(u):
        arr = _as_array(u)
        if np.isscalar(u) or arr.ndim == 0:
            return q_scalar(float(arr))
        return np.array([q_scalar(float(v)) for v in arr.ravel()]).reshape(arr.shape)

    return q


def _masked(support: Interval, inside: Callable, below: float, above: float) -> Callable:
    lo, hi = support.lo, support.hi

    def fn(x):
        x = _as_array(x)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = np.where(x <= lo, below, np.where(x >= hi, above,
                           inside(np.clip(x, lo, hi))))
        return out

    return _scalarize(fn)


def _handle(name, params, support, pdf, cdf, sf=None, quantile=None):
    pdf_m = _masked(support, pdf, 0.0, 0.0)
    cdf_m = _masked(support, cdf, 0.0, 1.0)
    if sf is None:
        sf_m = _scalarize(lambda x: 1.0 - _as_array(cdf_m(x)))
    else:
        sf_m = _masked(support, sf, 1.0, 0.0)
    if quantile is None:
        q = _quantile_via_root(cdf_m, support)
    else:
        q = _scalarize(lambda u: quantile(np.clip(_as_array(u), 0.0, 1.0)))
    return DistributionHandle(name=name, params=dict(params), support=support,
                              pdf=pdf_m, cdf=cdf_m, sf=sf_m, quantile=q)


def _require_positive(params: dict[str, float], *names: str) -> None:
    for n in names:
        if not params.get(n, 0.0) > 0:
            raise CatalogError(f"parameter {n!r} must be positive, got {params.get(n)}")


def _exponential(lam: float) -> DistributionHandle:
    sup = Interval(0.0, math.inf)
    return _handle(
        "exponential", {"lambda": lam}, sup,
        pdf=lambda x: lam * np.exp(-lam * x),
        cdf=lambda x: -np.expm1(-lam * x),
        sf=lambda x: np.exp(-lam * x),
        quantile=lambda u: -np.log1p(-_as_array(u)) / lam,
    )


def _gamma(k: float, lam: float) -> DistributionHandle:
    sup = Interval(0.0, math.inf)
    lg = _sc.gammaln(k)
    return _handle(
        "gamma", {"k": k, "lambda": lam}, sup,
        pdf=lambda x: np.exp(k * np.log(lam) + (k - 1) * np.log(x) - lam * x - lg),
        cdf=lambda x: _sc.gammainc(k, lam * x),
        sf=lambda x: _sc.gammaincc(k, lam * x),
        quantile=lambda u: _sc.gammaincinv(k, _as_array(u)) / lam,
    )


def _weibull(alpha: float, beta: float) -> DistributionHandle:
    sup = Interval(0.0, math.inf)
    return _handle(
        "weibull", {"alpha": alpha, "beta": beta}, sup,
        pdf=lambda x: (alpha / beta) * (x / beta) ** (alpha - 1) * np.exp(-((x / beta) ** alpha)),
        cdf=lambda x: -np.expm1(-((x / beta) ** alpha)),
        sf=lambda x: np.exp(-((x / beta) ** alpha)),
        quantile=lambda u: beta * (-np.log1p(-_as_array(u))) ** (1.0 / alpha),
    )


def _rayleigh(sigma: float) -> DistributionHandle:
    sup = Interval(0.0, math.inf)
    s2 = sigma * sigma
    return _handle(
        "rayleigh", {"sigma": sigma}, sup,
        pdf=lambda x: (x / s2) * np.exp(-x * x / (2 * s2)),
        cdf=lambda x: -np.expm1(-x * x / (2 * s2)),
        sf=lambda x: np.exp(-x * x / (2 * s2)),
        quantile=lambda u: sigma * np.sqrt(-2.0 * np.log1p(-_as_array(u))),
    )


def _half_normal(sigma: float) -> DistributionHandle:
    sup = Interval(0.0, math.inf)
    c = math.sqrt(2.0 / math.pi) / sigma
    rt2 = math.sqrt(2.0)
    return _handle(
        "half_normal", {"sigma": sigma}, sup,
        pdf=lambda x: c * np.exp(-x * x / (2 * sigma * sigma)),
        cdf=lambda x: _sc.erf(x / (sigma * rt2)),
        quantile=lambda u: sigma * rt2 * _sc.erfinv(_as_array(u)),
    )


def _generalized_gamma(p: float, a: float, d: float) -> DistributionHandle:
    sup = Interval(0.0, math.inf)
    lg = _sc.gammaln(d / p)
    return _handle(
        "generalized_gamma", {"p": p, "a": a, "d": d}, sup,
        pdf=lambda x: np.exp(np.log(p) + (d - 1) * np.log(x) - (x / a) ** p
                             - d * np.log(a) - lg),
        cdf=lambda x: _sc.gammainc(d / p, (x / a) ** p),
        sf=lambda x: _sc.gammaincc(d / p, (x / a) ** p),
        quantile=lambda u: a * _sc.gammaincinv(d / p, _as_array(u)) ** (1.0 / p),
    )


def _burr12(c: float, k: float) -> DistributionHandle:
    sup = Interval(0.0, math.inf)
    return _handle(
        "burr12", {"c": c, "k": k}, sup,
        pdf=lambda x: c * k * x ** (c - 1) * (1 + x ** c) ** (-(k + 1)),
        cdf=lambda x: 1.0 - (1 + x ** c) ** (-k),
        sf=lambda x: (1 + x ** c) ** (-k),
        quantile=lambda u: ((1.0 - _as_array(u)) ** (-1.0 / k) - 1.0) ** (1.0 / c),
    )


def _pareto_lomax(alpha: float) -> DistributionHandle:
    sup = Interval(0.0, math.inf)
    return _handle(
        "pareto_lomax", {"alpha": alpha}, sup,
        pdf=lambda x: alpha * (1 + x) ** (-(alpha + 1)),
        cdf=lambda x: 1.0 - (1 + x) ** (-alpha),
        sf=lambda x: (1 + x) ** (-alpha),
        quantile=lambda u: (1.0 - _as_array(u)) ** (-1.0 / alpha) - 1.0,
    )


def _uniform() -> DistributionHandle:
    sup = Interval(0.0, 1.0)
    return _handle(
        "uniform", {}, sup,
        pdf=lambda x: np.ones_like(x),
        cdf=lambda x: x,
        sf=lambda x: 1.0 - x,
        quantile=lambda u: _as_array(u),
    )


def _beta(alpha: float, beta: float) -> DistributionHandle:
    sup = Interval(0.0, 1.0)
    lb = _sc.betaln(alpha, beta)
    return _handle(
        "beta", {"alpha": alpha, "beta": beta}, sup,
        pdf=lambda x: np.exp((alpha - 1) * np.log(x) + (beta - 1) * np.log1p(-x) - lb),
        cdf=lambda x: _sc.betainc(alpha, beta, x),
        sf=lambda x: _sc.betaincc(alpha, beta, x),
        quantile=lambda u: _sc.betaincinv(alpha, beta, _as_array(u)),
    )


def _kumaraswamy(a: float, b: float) -> DistributionHandle:
    sup = Interval(0.0, 1.0)
    return _handle(
        "kumaraswamy", {"a": a, "b": b}, sup,
        pdf=lambda x: a * b * x ** (a - 1) * (1 - x ** a) ** (b - 1),
        cdf=lambda x: 1.0 - (1 - x ** a) ** b,
        sf=lambda x: (1 - x ** a) ** b,
        quantile=lambda u: (1.0 - (1.0 - _as_array(u)) ** (1.0 / b)) ** (1.0 / a),
    )


def _weighted_kumaraswamy(a: float, b: float, c: float) -> DistributionHandle:
    sup = Interval(0.0, 1.0)
    norm = b * beta_fn(1.0 + c / a, b)

    def sf_inside(x):
        xa = np.clip(x ** a, 0.0, 1.0)
        flat = np.atleast_1d(xa)
        vals = np.array([incomplete_beta_upper(float(v), c / a, b + 1.0) for v in flat])
        out = (c / (a * norm)) * vals.reshape(np.shape(xa))
        return np.clip(out, 0.0, 1.0)

    cdf_inside = lambda x: 1.0 - sf_inside(x)
    h = _handle(
        "weighted_kumaraswamy", {"a": a, "b": b, "c": c}, sup,
        pdf=lambda x: c * x ** (c - 1) * (1 - x ** a) ** b / norm,
        cdf=cdf_inside,
        sf=sf_inside,
    )
    return h


def wk_moment(a: float, b: float, c: float, n: int) -> float:
    """n-th raw moment of the weighted Kumaraswamy family."""
    _ = _require_positive({"a": a, "b": b, "c": c}, "a", "b", "c")
    return c * beta_fn((c + n) / a, b + 1.0) / (a * b * beta_fn(1.0 + c / a, b))


def kumaraswamy_moment(a: float, b: float, n: int) -> float:
    """n-th raw moment of the Kumaraswamy family: b * B(1 + n/a, b)."""
    return b * beta_fn(1.0 + n / a, b)


def _chi_square(k: float) -> DistributionHandle:
    h = _gamma(k / 2.0, 0.5)
    return DistributionHandle(name="chi_square", params={"k": k}, support=h.support,
                              pdf=h.pdf, cdf=h.cdf, sf=h.sf, quantile=h.quantile)


def _truncated_power(beta: float) -> DistributionHandle:
    # SF (1-x)^(beta-1) on (0, 1), requires beta > 1
    if not beta > 1:
        raise CatalogError(f"truncated_power requires beta > 1, got {beta}")
    sup = Interval(0.0, 1.0)
    return _handle(
        "truncated_power", {"beta": beta}, sup,
        pdf=lambda x: (beta - 1) * (1 - x) ** (beta - 2),
        cdf=lambda x: 1.0 - (1 - x) ** (beta - 1),
        sf=lambda x: (1 - x) ** (beta - 1),
        quantile=lambda u: 1.0 - (1.0 - _as_array(u)) ** (1.0 / (beta - 1)),
    )


_BUILDERS: dict[str, tuple[tuple[str, ...], Callable]] = {
    "exponential": (("lambda",), lambda p: _exponential(p["lambda"])),
    "gamma": (("k", "lambda"), lambda p: _gamma(p["k"], p["lambda"])),
    "weibull": (("alpha", "beta"), lambda p: _weibull(p["alpha"], p["beta"])),
    "rayleigh": (("sigma",), lambda p: _rayleigh(p["sigma"])),
    "half_normal": (("sigma",), lambda p: _half_normal(p["sigma"])),
    "generalized_gamma": (("p", "a", "d"), lambda p: _generalized_gamma(p["p"], p["a"], p["d"])),
    "burr12": (("c", "k"), lambda p: _burr12(p["c"], p["k"])),
    "pareto_lomax": (("alpha",), lambda p: _pareto_lomax(p["alpha"])),
    "uniform": ((), lambda p: _uniform()),
    "beta": (("alpha", "beta"), lambda p: _beta(p["alpha"], p["beta"])),
    "kumaraswamy": (("a", "b"), lambda p: _kumaraswamy(p["a"], p["b"])),
    "weighted_kumaraswamy": (("a", "b", "c"), lambda p: _weighted_kumaraswamy(p["a"], p["b"], p["c"])),
    "chi_square": (("k",), lambda p: _chi_square(p["k"])),
    "truncated_power": (("beta",), lambda p: _truncated_power(p["beta"])),
}

CATALOG_NAMES = tuple(sorted(_BUILDERS))


def make_catalog(name: str, params: dict[str, float] | None = None) -> DistributionHandle:
    """Build a catalog distribution by family name and named parameters."""
    if name not in _BUILDERS:
        raise CatalogError(f"unknown distribution {name!r}; known: {', '.join(CATALOG_NAMES)}")
    wanted, builder = _BUILDERS[name]
    params = dict(params or {})
    missing = [k for k in wanted if k not in params]
    extra = [k for k in params if k not in wanted]
    if missing or extra:
        raise CatalogError(f"{name} expects parameters {wanted}, got {tuple(params)}")
    if name != "truncated_power":
        _require_positive(params, *wanted)
    return builder(params)


_SPEC_RE = re.compile(r"^\s*([a-zA-Z_][a-zA-Z0-9_]*)\s*\(([^()]*)\)\s*$")


def parse_kv_spec(text: str) -> tuple[str, dict[str, float]]:
    """Parse the CLI text form "name(k1=v1,k2=v2)"; bare "name" is allowed."""
    text = text.strip()
    m = _SPEC_RE.match(text)
    if m is None:
        if re.fullmatch(r"[a-zA-Z_][a-zA-Z0-9_]*", text):
            return text, {}
        raise CatalogError(f"cannot parse spec {text!r}")
    name, body = m.group(1), m.group(2).strip()
    params: dict[str, float] = {}
    if body:
        for piece in body.split(","):
            if "=" not in piece:
                raise CatalogError(f"expected k=v in {text!r}, got {piece!r}")
            k, v = piece.split("=", 1)
            try:
                params[k.strip()] = float(v)
            except ValueError as exc:
                raise CatalogError(f"bad numeric value in {text!r}: {v!r}") from exc
    return name, params


def parse_dist_spec(text: str) -> DistributionHandle:
    name, params = parse_kv_spec(text)
    return make_catalog(name, params)


def sample(dist: DistributionHandle, n: int, seed: int) -> np.ndarray:
    """n i.i.d. inverse-transform draws; deterministic for a fixed seed."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    u = rng.random(n)
    return np.asarray(dist.quantile(u), dtype=float)
