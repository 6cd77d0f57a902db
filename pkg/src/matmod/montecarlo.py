"""Monte Carlo checks of the distributional results.

Each scenario simulates a fixed configuration, compares an empirical quantity
with its theoretical value and returns a :class:`ScenarioResult`. Moment
checks report the largest deviation in standard errors (pass at <= 5);
distribution comparisons report the two-sample Kolmogorov-Smirnov distance
against its 1% critical value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import stats

from . import hypothesis as ht
from .arrays import Array, orthogonal_transform
from .linear_models import fit, one_way_layout
from .matrices import random_orthogonal, sqrt_spd
from .random_arrays import (
    GaussianSpec,
    covariance_block_se,
    empirical_covariance_array,
    iid_covariance,
    sample,
    sample_many,
    stream,
)
from .submodules import Submodule, complement, coordinates, from_rows, project
from .wishart import (
    WishartSpec,
    decompose,
    mean_columns_from_delta,
    sample_wishart_many,
    sample_wishart_with_means,
)

SE_LIMIT = 5.0
KS_ALPHA = 0.01


@dataclass
class ScenarioResult:
    name: str
    passed: bool
    deviation: float
    tolerance: float
    replicates: int
    seed: int
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: deviation {self.deviation:.4g} (tolerance {self.tolerance:.4g})"


def mean_and_se(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    values = np.asarray(values, dtype=float)
    return values.mean(axis=0), values.std(axis=0, ddof=1) / np.sqrt(values.shape[0])


def se_deviation(estimate, target, se) -> float:
    """Largest ``|estimate - target| / se``; zero-s.e. entries must match exactly."""
    diff = np.abs(np.asarray(estimate) - np.asarray(target))
    se = np.asarray(se)
    degenerate = se == 0
    if np.any(diff[degenerate] > 1e-12):
        return float("inf")
    z = np.where(degenerate, 0.0, diff / np.where(degenerate, 1.0, se))
    return float(np.max(z, initial=0.0))


def ks_critical(n1: int, n2: int, alpha: float = KS_ALPHA) -> float:
    """Asymptotic two-sample Kolmogorov-Smirnov critical distance."""
    return float(np.sqrt(-np.log(alpha / 2) / 2) * np.sqrt((n1 + n2) / (n1 * n2)))


def ks_distance(a, b) -> float:
    return float(stats.ks_2samp(a, b).statistic)


# -- scenario configurations --------------------------------------------------


@dataclass(frozen=True)
class InvarianceConfig:
    p: int = 2
    n: int = 5
    sigma: tuple = ((2.0, 0.6), (0.6, 1.0))
    replicates: int = 20000
    seed: int = 20240501


@dataclass(frozen=True)
class IndependenceConfig:
    p: int = 2
    n: int = 6
    sigma: tuple = ((1.5, -0.4), (-0.4, 0.8))
    replicates: int = 20000
    seed: int = 20240502


@dataclass(frozen=True)
class WishartConfig:
    sigma: tuple = ((2.0, 0.5, 0.0), (0.5, 1.0, 0.3), (0.0, 0.3, 1.5))
    df: int = 5
    chi2_df: int = 4
    replicates: int = 20000
    seed: int = 20240503


@dataclass(frozen=True)
class NoncentralityConfig:
    sigma: tuple = ((1.0, 0.3), (0.3, 2.0))
    means: tuple = ((1.0, 2.0, 0.0, -1.0), (0.5, -1.0, 1.5, 0.0))
    replicates: int = 5000
    seed: int = 20240504


@dataclass(frozen=True)
class FreenessConfig:
    group_sizes: tuple = (5, 5, 6)
    p: int = 2
    sigma: tuple = ((4.0, 1.5), (1.5, 2.0))
    shift: tuple = (3.0, -2.0)
    replicates: int = 5000
    seed: int = 20240505


@dataclass(frozen=True)
class UnbiasednessConfig:
    group_sizes: tuple = (4, 3, 5)
    sigma: tuple = ((1.0, 0.4, -0.2), (0.4, 2.0, 0.5), (-0.2, 0.5, 1.5))
    group_means: tuple = ((0.0, 1.0, -1.0), (2.0, 0.0, 1.0), (-1.0, 3.0, 0.5))
    replicates: int = 10000
    seed: int = 20240506


# -- scenarios ----------------------------------------------------------------


def orthogonal_invariance(cfg: InvarianceConfig = InvarianceConfig()) -> ScenarioResult:
    """Independent columns with covariance ``Sigma`` stay so under ``T -> T C``.

    Checks both a random orthogonal ``C`` and the coordinates relative to a
    random orthonormal generating basis.
    """
    sigma = np.array(cfg.sigma)
    rng = stream(cfg.seed, 2**32)
    c = random_orthogonal(cfg.n, rng)
    f_basis = random_orthogonal(cfg.n, rng)
    mean = Array(rng.normal(size=(cfg.p, cfg.n)))
    spec = GaussianSpec(mean, sigma, cfg.seed)
    target = iid_covariance(cfg.n, sigma).blocks
    rotated, coords = [], []
    for k in range(cfg.replicates):
        x = sample(spec, k)
        rotated.append(orthogonal_transform(x, c).data)
        coords.append(coordinates(x, f_basis).alphas)
    dev = 0.0
    for stack in (np.stack(rotated), np.stack(coords)):
        emp = empirical_covariance_array(stack).blocks
        dev = max(dev, se_deviation(emp, target, covariance_block_se(stack)))
    return ScenarioResult("orthogonal-invariance", dev <= SE_LIMIT, dev, SE_LIMIT, cfg.replicates, cfg.seed)


def projection_independence(cfg: IndependenceConfig = IndependenceConfig()) -> ScenarioResult:
    """Projections on orthogonal parts are uncorrelated and have mean ``proj E X``."""
    sigma = np.array(cfg.sigma)
    rng = stream(cfg.seed, 2**32)
    l1 = from_rows(rng.normal(size=(2, cfg.n)))
    parts = [l1, complement(l1)]
    mean = Array(rng.normal(size=(cfg.p, cfg.n)))
    spec = GaussianSpec(mean, sigma, cfg.seed)
    first, second = [], []
    for k in range(cfg.replicates):
        rep = decompose(sample(spec, k), parts)
        first.append(rep.projections[0].data.ravel())
        second.append(rep.projections[1].data.ravel())
    a, b = np.array(first), np.array(second)
    r = cfg.replicates
    a_std, b_std = a.std(axis=0), b.std(axis=0)
    keep_a, keep_b = a_std > 1e-12, b_std > 1e-12
    za = (a[:, keep_a] - a[:, keep_a].mean(axis=0)) / a_std[keep_a]
    zb = (b[:, keep_b] - b[:, keep_b].mean(axis=0)) / b_std[keep_b]
    corr = za.T @ zb / r
    corr_dev = float(np.max(np.abs(corr)) * np.sqrt(r))
    mean_dev = 0.0
    for stack, part in ((a, parts[0]), (b, parts[1])):
        est, se = mean_and_se(stack)
        mean_dev = max(mean_dev, se_deviation(est, project(mean, part).data.ravel(), se))
    dev = max(corr_dev, mean_dev)
    return ScenarioResult(
        "projection-independence", dev <= SE_LIMIT, dev, SE_LIMIT, r, cfg.seed,
        {"correlation_se": corr_dev, "mean_se": mean_dev},
    )


def wishart_moments(cfg: WishartConfig = WishartConfig()) -> ScenarioResult:
    """Wishart first moments, the chi-square case and the scale identity."""
    sigma = np.array(cfg.sigma)
    r = cfg.replicates
    draws = sample_wishart_many(WishartSpec(cfg.df, sigma), r, cfg.seed)
    est, se = mean_and_se(draws)
    mean_dev = se_deviation(est, cfg.df * sigma, se)

    chi2 = sample_wishart_many(WishartSpec(cfg.chi2_df, np.eye(1)), r, cfg.seed + 1)[:, 0, 0]
    est1, se1 = mean_and_se(chi2)
    chi2_dev = se_deviation(est1, cfg.chi2_df, se1)

    # W(Sigma) against Sigma^1/2 W(I) Sigma^1/2 from independent draws: first and second moments
    root = sqrt_spd(sigma)
    unit = sample_wishart_many(WishartSpec(cfg.df, np.eye(sigma.shape[0])), r, cfg.seed + 2)
    scaled = root @ unit @ root
    scale_dev = 0.0
    for f in (lambda w: w, lambda w: w * w):
        m1, s1 = mean_and_se(f(draws).reshape(r, -1))
        m2, s2 = mean_and_se(f(scaled).reshape(r, -1))
        scale_dev = max(scale_dev, se_deviation(m1, m2, np.sqrt(s1**2 + s2**2)))
    dev = max(mean_dev, chi2_dev, scale_dev)
    return ScenarioResult(
        "wishart-moments", dev <= SE_LIMIT, dev, SE_LIMIT, r, cfg.seed,
        {"mean_se": mean_dev, "chi2_se": chi2_dev, "scale_identity_se": scale_dev},
    )


def noncentrality_sufficiency(cfg: NoncentralityConfig = NoncentralityConfig()) -> ScenarioResult:
    """Two mean matrices with one scalar square give one Wishart law.

    Compares traces of draws built from the given means ``A`` and from the
    eigen-factorization of ``Delta = A A^T``.
    """
    sigma = np.array(cfg.sigma)
    a1 = np.array(cfg.means)
    delta = a1 @ a1.T
    a2 = mean_columns_from_delta(delta, a1.shape[1])
    r = cfg.replicates
    t1 = [np.trace(sample_wishart_with_means(a1, sigma, cfg.seed, k)) for k in range(r)]
    t2 = [np.trace(sample_wishart_with_means(a2, sigma, cfg.seed + 1, k)) for k in range(r)]
    d = ks_distance(t1, t2)
    crit = ks_critical(r, r)
    return ScenarioResult(
        "noncentrality-sufficiency", d < crit, d, crit, r, cfg.seed,
        {"factorization_gap": float(np.max(np.abs(a1 - a2)))},
    )


def freeness_samples(cfg: FreenessConfig = FreenessConfig()) -> tuple[dict, dict]:
    """Null root functionals under ``(0, I)`` and under a shifted mean in L1 with another Sigma."""
    model = one_way_layout(cfg.group_sizes)
    n = model.n
    spec = ht.HypothesisSpec(model.l, Submodule.mean(n))
    base = ht.simulate_roots(spec, cfg.p, cfg.replicates, cfg.seed)
    shifted_mean = Array(np.outer(cfg.shift, np.ones(n)))
    other = ht.simulate_roots(
        spec, cfg.p, cfg.replicates, cfg.seed + 1, mean=shifted_mean, sigma=np.array(cfg.sigma)
    )
    return ht.root_functionals_many(base), ht.root_functionals_many(other)


def distribution_freeness(cfg: FreenessConfig = FreenessConfig()) -> ScenarioResult:
    a, b = freeness_samples(cfg)
    dist = {name: ks_distance(a[name], b[name]) for name in ht.STATISTICS}
    worst = max(dist.values())
    crit = ks_critical(cfg.replicates, cfg.replicates)
    return ScenarioResult(
        "distribution-freeness", worst < crit, worst, crit, cfg.replicates, cfg.seed, {"ks": dist}
    )


def sigma_unbiasedness(cfg: UnbiasednessConfig = UnbiasednessConfig()) -> ScenarioResult:
    """Means of ``sigma_hat`` and ``m_hat`` over replicates against ``Sigma`` and ``E X``."""
    model = one_way_layout(cfg.group_sizes)
    sigma = np.array(cfg.sigma)
    means = np.array(cfg.group_means)
    mean = Array(np.repeat(means, cfg.group_sizes, axis=1))
    spec = GaussianSpec(mean, sigma, cfg.seed)
    sig, mh = [], []
    for k in range(cfg.replicates):
        f = fit(sample(spec, k), model)
        sig.append(f.sigma_hat)
        mh.append(f.m_hat.data)
    est, se = mean_and_se(np.array(sig))
    sigma_dev = se_deviation(est, sigma, se)
    est, se = mean_and_se(np.array(mh))
    m_dev = se_deviation(est, mean.data, se)
    dev = max(sigma_dev, m_dev)
    return ScenarioResult(
        "sigma-unbiasedness", dev <= SE_LIMIT, dev, SE_LIMIT, cfg.replicates, cfg.seed,
        {"sigma_hat_se": sigma_dev, "m_hat_se": m_dev},
    )


SCENARIOS: dict[str, tuple[Callable, type]] = {
    "orthogonal-invariance": (orthogonal_invariance, InvarianceConfig),
    "projection-independence": (projection_independence, IndependenceConfig),
    "wishart-moments": (wishart_moments, WishartConfig),
    "noncentrality-sufficiency": (noncentrality_sufficiency, NoncentralityConfig),
    "distribution-freeness": (distribution_freeness, FreenessConfig),
    "sigma-unbiasedness": (sigma_unbiasedness, UnbiasednessConfig),
}


def run_scenario(name: str, replicates: int | None = None, seed: int | None = None) -> ScenarioResult:
    try:
        func, config_cls = SCENARIOS[name]
    except KeyError:
        raise KeyError(f"unknown scenario {name!r}; choose from {sorted(SCENARIOS)}") from None
    overrides = {}
    if replicates is not None:
        overrides["replicates"] = int(replicates)
    if seed is not None:
        overrides["seed"] = int(seed)
    return func(config_cls(**overrides))


def power(
    spec: ht.HypothesisSpec,
    p: int,
    mean: Array,
    sigma=None,
    alpha: float = 0.05,
    replicates: int = 2000,
    seed: int = 0,
) -> dict[str, float]:
    """Rejection rate of each root functional at level ``alpha`` under ``mean``.

    Critical values come from a simulated null; the alternative is simulated
    with an independent seed.
    """
    null = ht.root_functionals_many(ht.simulate_roots(spec, p, replicates, seed))
    alt = ht.root_functionals_many(ht.simulate_roots(spec, p, replicates, seed + 1, mean=mean, sigma=sigma))
    out = {}
    for name in ht.STATISTICS:
        if name in ht.LOWER_TAIL:
            crit = np.quantile(null[name], alpha)
            out[name] = float(np.mean(alt[name] < crit))
        else:
            crit = np.quantile(null[name], 1 - alpha)
            out[name] = float(np.mean(alt[name] > crit))
    return out
