"""Hypothesis tests for the stability index and confidence intervals by test inversion.

All tests compare a Greenwood-type statistic against Monte Carlo quantiles
of its null distribution.  The statistic decreases stochastically as the
stability index grows, so a right-tail rejection region tests against
heavier-than-null tails (alternative ``alpha < alpha_star``), a left-tail
region against lighter tails, and a two-sided region against both.

Rejection regions are closed intervals inside ``[1/n, 1]``; the decision is
always recomputable from the observed value and the region alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping

import numpy as np

from .exceptions import EmptyConfidenceSetError, ParameterError
from .mc import NullSpec, QuantileCache, table_key_digest
from .statistics import GreenwoodValue, as_bivariate, greenwood, s1, s2

__all__ = [
    "TestConfig",
    "TestResult",
    "AlphaInterval",
    "test_alpha_right",
    "test_alpha_left",
    "test_alpha_two_sided",
    "test_bivariate_gaussian_s1",
    "test_bivariate_gaussian_s2",
    "test_bivariate_alpha_s1",
    "ci_alpha",
]

# Shared by every call that does not bring its own cache, so repeated tests
# against the same null reuse one simulation.
_SHARED_CACHE = QuantileCache()


@dataclass
class TestConfig:
    """Monte Carlo settings shared by the tests.

    ``rho`` is the correlation used when simulating bivariate nulls; any
    value gives a valid S1 test because that statistic's law does not
    depend on the correlation.
    """

    reps: int = 10_000
    seed: int = 0
    rho: float = 0.0
    workers: int = 1
    cache: QuantileCache | None = None

    def cache_or_shared(self) -> QuantileCache:
        return self.cache if self.cache is not None else _SHARED_CACHE


@dataclass(frozen=True)
class TestResult:
    """Outcome of one Monte Carlo test."""

    statistic: str
    observed: GreenwoodValue
    region: tuple[tuple[float, float], ...]
    reject: bool
    p_value: float
    level: float
    alternative: str
    null: NullSpec
    n: int
    cache_key: str

    @property
    def decision(self) -> str:
        return "reject" if self.reject else "retain"

    def to_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "observed": self.observed.value,
            "n": self.n,
            "region": [list(iv) for iv in self.region],
            "p_value": self.p_value,
            "decision": self.decision,
            "level": self.level,
            "alternative": self.alternative,
            "null": self.null.to_dict(),
            "cache_key": self.cache_key,
        }


def _in_region(value: float, region: tuple[tuple[float, float], ...]) -> bool:
    return any(lo <= value <= hi for lo, hi in region)


def _tail_test(
    statistic: str,
    table_stat: str,
    observed: GreenwoodValue,
    null: NullSpec,
    tail: str,
    level: float,
    cfg: TestConfig,
) -> TestResult:
    if not 0.0 < level < 1.0:
        raise ParameterError(f"significance level must lie in (0, 1), got {level}")
    cache = cfg.cache_or_shared()
    n = observed.n
    floor = 1.0 / n
    if tail == "right":
        levels = (1.0 - level,)
        alternative = "greater"
    elif tail == "left":
        levels = (level,)
        alternative = "less"
    elif tail == "both":
        levels = (level / 2.0, 1.0 - level / 2.0)
        alternative = "two-sided"
    else:  # pragma: no cover - internal misuse
        raise ParameterError(f"unknown tail {tail!r}")
    table = cache.get_or_compute(table_stat, null, n, levels, cfg.reps, cfg.seed, workers=cfg.workers)
    if tail == "right":
        region = ((table.values[0], 1.0),)
    elif tail == "left":
        region = ((floor, table.values[0]),)
    else:
        region = ((floor, table.values[0]), (table.values[1], 1.0))
    p_value = cache.pvalue(table_stat, observed, null, n, alternative, cfg.reps, cfg.seed, workers=cfg.workers)
    return TestResult(
        statistic=statistic,
        observed=observed,
        region=region,
        reject=_in_region(observed.value, region),
        p_value=p_value,
        level=level,
        alternative=alternative,
        null=null,
        n=n,
        cache_key=table_key_digest(table_stat, null, n, cfg.reps, cfg.seed, levels),
    )


def _as_vector(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float).ravel()
    if arr.size < 2:
        raise ParameterError("univariate tests need at least two observations")
    return arr


def test_alpha_right(x, alpha_star: float, level: float = 0.05, cfg: TestConfig | None = None) -> TestResult:
    """Test ``alpha >= alpha_star`` (or ``= alpha_star``) against ``alpha < alpha_star``.

    Rejects when the Greenwood statistic reaches the upper ``1 - level``
    null quantile, the null being symmetric alpha-stable with index
    ``alpha_star``.  With ``alpha_star = 2`` this is the Gaussianity test.
    """
    cfg = cfg or TestConfig()
    obs = greenwood(_as_vector(x))
    return _tail_test("greenwood", "greenwood", obs, NullSpec.sas(alpha_star), "right", level, cfg)


def test_alpha_left(x, alpha_star: float, level: float = 0.05, cfg: TestConfig | None = None) -> TestResult:
    """Test ``alpha <= alpha_star`` (or ``= alpha_star``) against ``alpha > alpha_star``."""
    cfg = cfg or TestConfig()
    obs = greenwood(_as_vector(x))
    return _tail_test("greenwood", "greenwood", obs, NullSpec.sas(alpha_star), "left", level, cfg)


def test_alpha_two_sided(x, alpha_star: float, level: float = 0.05, cfg: TestConfig | None = None) -> TestResult:
    """Test ``alpha = alpha_star`` against ``alpha != alpha_star``."""
    cfg = cfg or TestConfig()
    obs = greenwood(_as_vector(x))
    return _tail_test("greenwood", "greenwood", obs, NullSpec.sas(alpha_star), "both", level, cfg)


def test_bivariate_gaussian_s1(sample, level: float = 0.05, cfg: TestConfig | None = None) -> TestResult:
    """Test bivariate Gaussianity with the S1 statistic.

    The null quantile comes from bivariate Gaussian simulation; the S1 law
    is insensitive to the correlation, so ``cfg.rho`` merely names the
    structure used (0 by default).
    """
    cfg = cfg or TestConfig()
    obs = s1(as_bivariate(sample))
    return _tail_test("s1", "s1", obs, NullSpec.subgauss(2.0, cfg.rho), "right", level, cfg)


def test_bivariate_gaussian_s2(sample, level: float = 0.05, cfg: TestConfig | None = None) -> TestResult:
    """Test bivariate Gaussianity with the S2 statistic.

    Calibrates against the most conservative Gaussian null (eigenvalue
    ratio 0, i.e. perfect correlation), whose S2 law equals that of the
    Greenwood statistic on chi-square(1) samples.
    """
    cfg = cfg or TestConfig()
    obs = s2(as_bivariate(sample))
    return _tail_test("s2", "greenwood", obs, NullSpec.chi2_one(), "right", level, cfg)


def test_bivariate_alpha_s1(
    sample,
    alpha_star: float,
    level: float = 0.05,
    alternative: str = "less",
    cfg: TestConfig | None = None,
) -> TestResult:
    """Test the stability index of a bivariate sub-Gaussian sample via S1.

    ``alternative`` states the alternative for ``alpha``: ``"less"`` rejects
    for heavy tails (right tail of S1), ``"greater"`` for light tails,
    ``"two-sided"`` for both.  The null is sub-Gaussian with index
    ``alpha_star`` and correlation ``cfg.rho`` (irrelevant to the S1 law).
    """
    cfg = cfg or TestConfig()
    obs = s1(as_bivariate(sample))
    tail = {"less": "right", "greater": "left", "two-sided": "both"}.get(alternative)
    if tail is None:
        raise ParameterError(f"alternative must be 'less', 'greater' or 'two-sided', got {alternative!r}")
    return _tail_test("s1", "s1", obs, NullSpec.subgauss(alpha_star, cfg.rho), tail, level, cfg)


@dataclass(frozen=True)
class AlphaInterval:
    """Confidence interval for the stability index from test inversion.

    ``probes`` records every grid point the search evaluated together with
    its two-sided rejection decision, for auditability; the interval is the
    hull of the retained grid points found.
    """

    lower: float
    upper: float
    level: float
    grid_step: float
    probes: tuple[tuple[float, bool], ...] = field(default=())

    def __contains__(self, alpha: float) -> bool:
        return self.lower <= alpha <= self.upper

    def probe_map(self) -> Mapping[float, bool]:
        return dict(self.probes)

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "level": self.level,
            "grid_step": self.grid_step,
        }


def ci_alpha(x, level: float = 0.95, grid_step: float = 0.01, cfg: TestConfig | None = None) -> AlphaInterval:
    """Confidence interval for the stability index by inverting the two-sided test.

    Collects the grid points ``{grid_step, 2*grid_step, ..., 2}`` whose
    two-sided test retains at significance ``1 - level`` and returns their
    hull.  Because both null quantiles move monotonically with the tested
    index, the endpoints are located by bisection instead of a full scan;
    every probed point shares its quantile table with
    :func:`test_alpha_two_sided`, so probed decisions and test decisions
    agree exactly.

    Raises :class:`EmptyConfidenceSetError` when no grid point is retained.
    """
    cfg = cfg or TestConfig()
    if not 0.0 < level < 1.0:
        raise ParameterError(f"confidence level must lie in (0, 1), got {level}")
    if not 0.0 < grid_step <= 2.0:
        raise ParameterError(f"grid step must lie in (0, 2], got {grid_step}")
    cache = cfg.cache_or_shared()
    obs = greenwood(_as_vector(x))
    n = obs.n
    c = 1.0 - level
    levels = (c / 2.0, 1.0 - c / 2.0)
    k_max = max(int(np.ceil(2.0 / grid_step - 1e-9)), 1)

    def alpha_at(k: int) -> float:
        return min(round(k * grid_step, 12), 2.0)

    decisions: dict[int, tuple[bool, bool, bool]] = {}

    def evaluate(k: int) -> tuple[bool, bool, bool]:
        found = decisions.get(k)
        if found is None:
            null = NullSpec.sas(alpha_at(k))
            table = cache.get_or_compute("greenwood", null, n, levels, cfg.reps, cfg.seed, workers=cfg.workers)
            reject_low = obs.value <= table.values[0]
            reject_high = obs.value >= table.values[1]
            found = (reject_low or reject_high, reject_low, reject_high)
            decisions[k] = found
        return found

    # Find one retained grid point, scanning progressively finer subsets
    # from the top of the grid (data near the Gaussian boundary is the
    # common case).
    anchor = None
    count = 16
    while anchor is None:
        points = sorted({int(q) for q in np.linspace(1, k_max, min(count, k_max))}, reverse=True)
        for k in points:
            if not evaluate(k)[0]:
                anchor = k
                break
        if anchor is None:
            if count >= k_max:
                raise EmptyConfidenceSetError(
                    f"the two-sided test rejected every grid point at level {1 - level:g}"
                )
            count *= 2

    # Left endpoint: smallest k whose lower-tail condition retains.
    if not evaluate(1)[1]:
        lo = 1
    else:
        left, right = 1, anchor
        while right - left > 1:
            mid = (left + right) // 2
            if evaluate(mid)[1]:
                left = mid
            else:
                right = mid
        lo = right

    # Right endpoint: largest k whose upper-tail condition retains.
    if not evaluate(k_max)[2]:
        hi = k_max
    else:
        left, right = anchor, k_max
        while right - left > 1:
            mid = (left + right) // 2
            if evaluate(mid)[2]:
                right = mid
            else:
                left = mid
        hi = left

    # Monte Carlo noise can leave isolated rejections near the endpoints;
    # shrink toward the anchor until every probed point inside the interval
    # is retained and both endpoints are themselves retained.
    while True:
        if evaluate(lo)[0] and lo < anchor:
            lo += 1
            continue
        if evaluate(hi)[0] and hi > anchor:
            hi -= 1
            continue
        offenders = [k for k, dec in decisions.items() if lo <= k <= hi and dec[0]]
        if not offenders:
            break
        for k in offenders:
            if k < anchor:
                lo = max(lo, k + 1)
            elif k > anchor:
                hi = min(hi, k - 1)

    probes = tuple((alpha_at(k), decisions[k][0]) for k in sorted(decisions))
    return AlphaInterval(alpha_at(lo), alpha_at(hi), level, grid_step, probes)
