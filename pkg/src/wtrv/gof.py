"""Goodness-of-fit tests against a fitted bounded-support model.

Implements Kolmogorov-Smirnov, Anderson-Darling, Cramer-von Mises, and
equal-probability chi-square tests. Default p-values are the asymptotic
parameters-known ones; a parametric bootstrap is available because fitting
the parameters on the same data invalidates the parameters-known asymptotics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.stats import chi2 as _chi2
from scipy.stats import cramervonmises as _scipy_cvm

from .distributions import DistributionHandle, sample as _draw
from .fit import MODELS, fit_mle, from_unit_values
from .numerics import kolmogorov_sf


class BinningError(ValueError):
    """Chi-square expected counts too small for the requested bins."""


class BootstrapError(RuntimeError):
    """Too many bootstrap replicates failed to refit."""


TEST_NAMES = ("ks", "ad", "cvm", "chisq")
DF_CONVENTIONS = ("bins-1", "bins-1-k", "calibrated")


def _pit(values: np.ndarray, model: DistributionHandle) -> np.ndarray:
    """Probability-integral transform with boundary nudge."""
    u = np.asarray(model.cdf(np.asarray(values, dtype=float)), dtype=float)
    return np.clip(u, 1e-12, 1.0 - 1e-12)


def ks_test(values, model: DistributionHandle) -> tuple[float, float]:
    """Two-sided KS statistic and asymptotic p-value."""
    x = np.sort(np.asarray(values, dtype=float))
    n = len(x)
    if n < 2:
        raise ValueError("need at least 2 observations")
    u = _pit(x, model)
    i = np.arange(1, n + 1)
    d = float(np.max(np.maximum(i / n - u, u - (i - 1) / n)))
    return d, kolmogorov_sf(math.sqrt(n) * d)


def _ad_pvalue(z: float) -> float:
    """Asymptotic (parameters-known) right tail of the A-squared statistic."""
    if z <= 0.0:
        return 1.0
    if z < 2.0:
        cdf = (math.exp(-1.2337141 / z) / math.sqrt(z)
               * (2.00012 + (0.247105 - (0.0649821 - (0.0347962
                  - (0.011672 - 0.00168691 * z) * z) * z) * z) * z))
    else:
        cdf = math.exp(-math.exp(1.0776 - (2.30695 - (0.43424 - (0.082433
                       - (0.008056 - 0.0003146 * z) * z) * z) * z) * z))
    return float(min(max(1.0 - cdf, 0.0), 1.0))


def ad_test(values, model: DistributionHandle) -> tuple[float, float]:
    """Anderson-Darling A-squared and asymptotic p-value."""
    x = np.sort(np.asarray(values, dtype=float))
    n = len(x)
    if n < 2:
        raise ValueError("need at least 2 observations")
    u = _pit(x, model)
    i = np.arange(1, n + 1)
    a2 = float(-n - np.sum((2 * i - 1) * (np.log(u) + np.log1p(-u[::-1]))) / n)
    return a2, _ad_pvalue(a2)


def cvm_test(values, model: DistributionHandle) -> tuple[float, float]:
    """Cramer-von Mises W-squared and asymptotic p-value."""
    x = np.sort(np.asarray(values, dtype=float))
    n = len(x)
    if n < 2:
        raise ValueError("need at least 2 observations")
    u = _pit(x, model)
    i = np.arange(1, n + 1)
    w2 = float(np.sum((u - (2 * i - 1) / (2 * n)) ** 2) + 1.0 / (12 * n))
    p = float(_scipy_cvm(u, "uniform").pvalue)
    return w2, p


def chisq_test(values, model: DistributionHandle, bins: int = 10,
               df_convention: str = "calibrated",
               n_params: int = 0) -> tuple[float, float]:
    """Equal-probability chi-square test.

    The "calibrated" convention uses df = bins - 1 - n_params, the convention
    that reproduces published p-values for this test family.
    """
    x = np.sort(np.asarray(values, dtype=float))
    n = len(x)
    if bins < 2:
        raise ValueError("bins must be at least 2")
    if n < bins:
        raise ValueError("need at least as many observations as bins")
    if df_convention not in DF_CONVENTIONS:
        raise ValueError(f"unknown df convention {df_convention!r}")
    expected = n / bins
    if expected < 1.0:
        raise BinningError(f"expected count {expected:.3g} < 1 with {bins} bins")
    edges = np.asarray(model.quantile(np.linspace(0.0, 1.0, bins + 1)), dtype=float)
    counts = np.diff(np.searchsorted(x, edges, side="right"))
    counts[0] += np.sum(x < edges[0])
    counts[-1] += np.sum(x > edges[-1])
    stat = float(np.sum((counts - expected) ** 2) / expected)
    if df_convention == "bins-1":
        df = bins - 1
    else:
        df = bins - 1 - n_params
    df = max(df, 1)
    return stat, float(_chi2.sf(stat, df))


_STATISTIC = {
    "ks": lambda x, m, bins, k: ks_test(x, m)[0],
    "ad": lambda x, m, bins, k: ad_test(x, m)[0],
    "cvm": lambda x, m, bins, k: cvm_test(x, m)[0],
    "chisq": lambda x, m, bins, k: chisq_test(x, m, bins=bins, n_params=k)[0],
}


def bootstrap_pvalue(values, family: str, fitted_params: dict[str, float],
                     test: str, replicates: int = 199, seed: int = 42,
                     bins: int = 10, starts: int = 4) -> float:
    """Parametric bootstrap p-value: simulate from the fitted model, refit,
    recompute the statistic; p = (1 + #{T* >= T_obs}) / (replicates + 1)."""
    if replicates < 99:
        raise ValueError("replicates must be at least 99")
    if test not in TEST_NAMES:
        raise ValueError(f"unknown test {test!r}")
    if family not in MODELS:
        raise ValueError(f"unknown model family {family!r}")
    x = np.sort(np.asarray(values, dtype=float))
    n = len(x)
    k = len(MODELS[family])
    from .fit import FitError, _CATALOG_NAME
    from .distributions import make_catalog
    fitted = make_catalog(_CATALOG_NAME[family], dict(fitted_params))
    t_obs = _STATISTIC[test](x, fitted, bins, k)

    exceed = failures = 0
    for r in range(replicates):
        sim = _draw(fitted, n, seed=seed + 1000 * (r + 1))
        try:
            refit = fit_mle(from_unit_values(sim), family, starts=starts,
                            seed=seed + r)
            t_star = _STATISTIC[test](np.sort(sim), refit.handle(), bins, k)
        except (FitError, ValueError):
            failures += 1
            continue
        if t_star >= t_obs:
            exceed += 1
    if failures > 0.1 * replicates:
        raise BootstrapError(f"{failures}/{replicates} bootstrap refits failed")
    return (1.0 + exceed) / (replicates + 1.0)


@dataclass(frozen=True)
class GofReport:
    model: str
    n: int
    tests: dict[str, dict]


def run_gof(values, model: DistributionHandle, model_name: str,
            tests: Sequence[str] = TEST_NAMES, method: str = "asymptotic",
            bins: int = 10, df_convention: str = "calibrated",
            family: Optional[str] = None, params: Optional[dict] = None,
            replicates: int = 199, seed: int = 42) -> GofReport:
    """Evaluate the selected tests and assemble a report."""
    if method not in ("asymptotic", "bootstrap"):
        raise ValueError(f"unknown p-value method {method!r}")
    x = np.sort(np.asarray(values, dtype=float))
    k = len(MODELS[family]) if family in MODELS else 0
    results: dict[str, dict] = {}
    for name in tests:
        if name == "ks":
            stat, p = ks_test(x, model)
        elif name == "ad":
            stat, p = ad_test(x, model)
        elif name == "cvm":
            stat, p = cvm_test(x, model)
        elif name == "chisq":
            stat, p = chisq_test(x, model, bins=bins,
                                 df_convention=df_convention, n_params=k)
        else:
            raise ValueError(f"unknown test {name!r}")
        entry = {"statistic": stat, "p_value": p, "method": "asymptotic"}
        if method == "bootstrap":
            if family is None or params is None:
                raise ValueError("bootstrap p-values need the fitted family and params")
            entry["p_value"] = bootstrap_pvalue(x, family, params, name,
                                                replicates=replicates, seed=seed,
                                                bins=bins)
            entry["method"] = "bootstrap"
        results[name] = entry
    return GofReport(model=model_name, n=len(x), tests=results)
