"""Power-study driver and the applied data pipeline.

The power study calibrates every statistic's critical value under its own
null convention, then estimates rejection frequencies over sub-Gaussian
alternatives on a grid of stability indexes, sample sizes and covariance
shapes.  The data pipeline ingests one- or two-column CSV series, extracts
VAR(1) residuals for a given coefficient matrix, optionally standardizes
them, and runs a battery of tests plus a confidence interval.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from .exceptions import (
    CsvFormatError,
    DegenerateCovarianceError,
    DegenerateSampleError,
    ParameterError,
)
from .mc import NullSpec, QuantileCache, statistic_function
from .rng import RngStream
from .sampling import _sub_gaussian_from
from .testing import (
    TestConfig,
    ci_alpha,
    test_alpha_right,
    test_bivariate_gaussian_s1,
    test_bivariate_gaussian_s2,
)

__all__ = [
    "PowerStudyConfig",
    "PowerCell",
    "Var1Model",
    "run_power_study",
    "power_curve_to_csv",
    "ingest_csv",
    "var1_residuals",
    "standardize",
    "analyze",
    "DEFAULT_ALPHA_GRID",
]

DEFAULT_ALPHA_GRID = tuple(round(1.80 + 0.02 * k, 2) for k in range(11))

# Null conventions: S1 calibrates on the bivariate Gaussian (any
# correlation), S2 on the eigenvalue-ratio-0 Gaussian null via the
# Greenwood statistic of chi-square(1) samples, the normality baselines on
# the bivariate Gaussian.
_NULL_CONVENTION = {
    "s1": ("s1", NullSpec.subgauss(2.0, 0.0)),
    "s2": ("greenwood", NullSpec.chi2_one()),
    "kurt": ("kurt", NullSpec.subgauss(2.0, 0.0)),
    "skew": ("skew", NullSpec.subgauss(2.0, 0.0)),
    "jb": ("jb", NullSpec.subgauss(2.0, 0.0)),
    "hz": ("hz", NullSpec.subgauss(2.0, 0.0)),
}


@dataclass
class PowerStudyConfig:
    """Grid and replication settings of a power study."""

    statistics: tuple[str, ...] = ("s1", "s2")
    alphas: tuple[float, ...] = DEFAULT_ALPHA_GRID
    sizes: tuple[int, ...] = (10, 30, 100)
    betas: tuple[float, ...] = (0.0,)
    level: float = 0.05
    null_reps: int = 10_000
    alt_reps: int = 1_000
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.statistics or not self.alphas or not self.sizes or not self.betas:
            raise ParameterError("statistics, alphas, sizes and betas must all be non-empty")
        for name in self.statistics:
            if name not in _NULL_CONVENTION:
                raise ParameterError(f"unknown power-study statistic {name!r}; known: {sorted(_NULL_CONVENTION)}")
        for a in self.alphas:
            if not 0.0 < a <= 2.0:
                raise ParameterError(f"alpha values must lie in (0, 2], got {a}")
        for b in self.betas:
            if not 0.0 <= b <= 1.0:
                raise ParameterError(f"beta values must lie in [0, 1], got {b}")
        if min(self.sizes) < 2:
            raise ParameterError("sample sizes must be at least 2")
        if not 0.0 < self.level < 1.0:
            raise ParameterError(f"level must lie in (0, 1), got {self.level}")
        if self.null_reps < 100 or self.alt_reps < 100:
            raise ParameterError("null_reps and alt_reps must be at least 100")


@dataclass(frozen=True)
class PowerCell:
    """Empirical power of one statistic at one grid point."""

    statistic: str
    n: int
    alpha: float
    beta: float
    power: float
    se: float
    alt_reps: int
    null_reps: int
    seed: int
    degenerate: int = 0


def run_power_study(
    cfg: PowerStudyConfig,
    cache: QuantileCache | None = None,
    workers: int = 1,
) -> list[PowerCell]:
    """Estimate rejection frequencies over the configured grid.

    Every (n, alpha, beta) cell draws its ``alt_reps`` alternative samples
    once and evaluates all configured statistics on the same draws;
    replicate ``j`` of cell ``i`` uses the stream ``RngStream(seed, (i, j))``,
    so results do not depend on scheduling or worker count.  Degenerate
    replicate evaluations are tallied per statistic; more than 0.1% of them
    in any cell fails the run.
    """
    cache = cache if cache is not None else QuantileCache()
    criticals: dict[tuple[str, int], float] = {}
    for name in cfg.statistics:
        table_stat, null = _NULL_CONVENTION[name]
        for n in cfg.sizes:
            table = cache.get_or_compute(
                table_stat, null, n, (1.0 - cfg.level,), cfg.null_reps, cfg.seed, workers=workers
            )
            criticals[(name, n)] = table.values[0]

    funcs = {name: statistic_function(name) for name in cfg.statistics}
    cells: list[PowerCell] = []
    ordinal = 0
    for n in cfg.sizes:
        for alpha in cfg.alphas:
            for beta in cfg.betas:
                rho = (1.0 - beta) / (1.0 + beta)
                cov = np.array([[1.0, rho], [rho, 1.0]])
                rejections = {name: 0 for name in cfg.statistics}
                degenerate = {name: 0 for name in cfg.statistics}
                for j in range(cfg.alt_reps):
                    gen = RngStream(cfg.seed, (ordinal, j)).generator()
                    sample = _sub_gaussian_from(gen, alpha, cov, n)
                    for name in cfg.statistics:
                        try:
                            value = funcs[name](sample)
                        except (DegenerateSampleError, DegenerateCovarianceError):
                            degenerate[name] += 1
                            continue
                        if value >= criticals[(name, n)]:
                            rejections[name] += 1
                for name in cfg.statistics:
                    if degenerate[name] > 0.001 * cfg.alt_reps:
                        raise DegenerateSampleError(
                            f"{degenerate[name]} of {cfg.alt_reps} alternative replicates were degenerate "
                            f"for statistic {name!r} at (n={n}, alpha={alpha}, beta={beta})"
                        )
                    p = rejections[name] / cfg.alt_reps
                    cells.append(
                        PowerCell(
                            statistic=name,
                            n=int(n),
                            alpha=float(alpha),
                            beta=float(beta),
                            power=p,
                            se=float(np.sqrt(p * (1.0 - p) / cfg.alt_reps)),
                            alt_reps=cfg.alt_reps,
                            null_reps=cfg.null_reps,
                            seed=cfg.seed,
                            degenerate=degenerate[name],
                        )
                    )
                ordinal += 1
    return cells


def power_curve_to_csv(cells: list[PowerCell], path) -> None:
    """Write power-study rows as tidy CSV."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["statistic", "n", "alpha", "beta", "power", "se", "B1", "B0", "seed"])
        for cell in cells:
            writer.writerow(
                [
                    cell.statistic,
                    cell.n,
                    repr(cell.alpha),
                    repr(cell.beta),
                    repr(cell.power),
                    repr(cell.se),
                    cell.alt_reps,
                    cell.null_reps,
                    cell.seed,
                ]
            )


def ingest_csv(path) -> np.ndarray:
    """Parse a one- or two-column numeric CSV file.

    A single leading header line is skipped when its fields are not
    numeric.  Returns shape ``(n,)`` for one column or ``(n, 2)`` for two.
    Ragged rows and non-numeric cells raise :class:`CsvFormatError` naming
    the offending line.
    """
    rows: list[list[float]] = []
    width: int | None = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            fields = [f.strip() for f in line.split(",")]
            try:
                values = [float(f) for f in fields]
            except ValueError:
                if not rows and lineno == 1:
                    continue  # header
                raise CsvFormatError(f"{path}: non-numeric value on line {lineno}: {line!r}") from None
            if width is None:
                width = len(values)
                if width not in (1, 2):
                    raise CsvFormatError(f"{path}: expected 1 or 2 columns, found {width} on line {lineno}")
            elif len(values) != width:
                raise CsvFormatError(
                    f"{path}: ragged row on line {lineno}: expected {width} fields, found {len(values)}"
                )
            rows.append(values)
    if not rows:
        raise CsvFormatError(f"{path}: no numeric data found")
    arr = np.asarray(rows, dtype=float)
    return arr[:, 0] if width == 1 else arr


@dataclass(frozen=True)
class Var1Model:
    """First-order vector autoregression coefficient matrix."""

    m: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.m, dtype=float)
        if m.shape != (2, 2) or not np.all(np.isfinite(m)):
            raise ParameterError("VAR(1) coefficient matrix must be a finite 2x2 matrix")
        object.__setattr__(self, "m", m)

    def simulate(self, innovations: np.ndarray, x0=None) -> np.ndarray:
        """Run the recursion ``X_t = M X_{t-1} + xi_t`` over given innovations."""
        xi = np.asarray(innovations, dtype=float)
        out = np.empty_like(xi)
        prev = np.zeros(2) if x0 is None else np.asarray(x0, dtype=float)
        for t in range(xi.shape[0]):
            prev = self.m @ prev + xi[t]
            out[t] = prev
        return out


def var1_residuals(series, model: Var1Model | np.ndarray) -> np.ndarray:
    """Residuals ``xi_t = X_t - M X_{t-1}`` for ``t = 2..T``; length ``T - 1``."""
    if not isinstance(model, Var1Model):
        model = Var1Model(np.asarray(model))
    arr = np.asarray(series, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ParameterError(f"VAR(1) filtering expects a (T, 2) series, got shape {arr.shape}")
    if arr.shape[0] < 2:
        raise ParameterError("VAR(1) filtering needs at least two observations")
    return arr[1:] - arr[:-1] @ model.m.T


def standardize(series, method: str = "none", window: int | None = None) -> np.ndarray:
    """Rescale a series (columns treated separately) by a dispersion estimate.

    ``"none"`` returns the input unchanged; ``"global-scale"`` divides each
    component by its mean absolute value; ``"rolling-conditional-std"``
    divides each observation by the standard deviation over the trailing
    ``window`` observations of its component (the first full window is used
    for the initial positions, so ``window = len(series)`` reduces to one
    global scale per component).
    """
    arr = np.asarray(series, dtype=float)
    squeeze = arr.ndim == 1
    cols = arr[:, None] if squeeze else arr
    if method == "none":
        out = cols.copy()
    elif method == "global-scale":
        scale = np.mean(np.abs(cols), axis=0)
        if np.any(scale == 0.0):
            raise ParameterError("a component has zero mean absolute value; cannot standardize")
        out = cols / scale
    elif method == "rolling-conditional-std":
        if window is None or window < 2:
            raise ParameterError("rolling standardization needs a window of at least 2")
        t_len = cols.shape[0]
        if window > t_len:
            raise ParameterError(f"window {window} exceeds series length {t_len}")
        out = np.empty_like(cols)
        for t in range(t_len):
            # Positions before the first full window borrow it.
            seg = cols[:window] if t < window - 1 else cols[t - window + 1 : t + 1]
            sd = np.std(seg, axis=0)
            if np.any(sd == 0.0):
                raise ParameterError(f"zero standard deviation in the window ending at position {t}")
            out[t] = cols[t] / sd
    else:
        raise ParameterError(
            f"unknown standardization {method!r}; expected 'none', 'global-scale' or 'rolling-conditional-std'"
        )
    return out[:, 0] if squeeze else out


@dataclass
class AnalyzeConfig:
    """Pipeline settings for :func:`analyze`."""

    m: np.ndarray | None = None
    standardize_method: str = "none"
    window: int | None = None
    tests: tuple[str, ...] = ("s1", "s2")
    with_ci: bool = False
    level: float = 0.05
    ci_level: float = 0.95
    grid_step: float = 0.01
    mc: TestConfig = field(default_factory=TestConfig)


def analyze(path, cfg: AnalyzeConfig | None = None) -> dict:
    """Run the ingestion / residual / standardization / testing pipeline on a file.

    For bivariate input the requested bivariate tests run on the pairs and
    the confidence interval (when asked for) is computed per component; for
    univariate input the Gaussianity test runs on the single series.
    Returns a JSON-serializable report.
    """
    from . import baselines

    cfg = cfg or AnalyzeConfig()
    data = ingest_csv(path)
    report: dict = {"input": str(path), "rows": int(np.atleast_1d(data).shape[0])}
    if cfg.m is not None:
        if data.ndim != 2:
            raise ParameterError("VAR(1) filtering requires two-column input")
        data = var1_residuals(data, Var1Model(cfg.m))
        report["var1"] = {"m": np.asarray(cfg.m, dtype=float).tolist(), "residual_rows": int(data.shape[0])}
    if cfg.standardize_method != "none":
        data = standardize(data, cfg.standardize_method, cfg.window)
        report["standardize"] = {"method": cfg.standardize_method, "window": cfg.window}

    results = []
    if data.ndim == 2:
        runners = {
            "s1": lambda: test_bivariate_gaussian_s1(data, cfg.level, cfg.mc),
            "s2": lambda: test_bivariate_gaussian_s2(data, cfg.level, cfg.mc),
            "kurt": lambda: baselines.mardia_kurtosis(data, cfg.level, cfg.mc),
            "skew": lambda: baselines.mardia_skewness(data, cfg.level, cfg.mc),
            "jb": lambda: baselines.jarque_bera_multivariate(data, cfg.level, cfg.mc),
            "hz": lambda: baselines.henze_zirkler(data, cfg.level, cfg.mc),
        }
        for name in cfg.tests:
            if name not in runners:
                raise ParameterError(f"unknown test {name!r}; known: {sorted(runners)}")
            results.append(runners[name]().to_dict())
        if cfg.with_ci:
            report["ci"] = {
                f"component{i + 1}": ci_alpha(data[:, i], cfg.ci_level, cfg.grid_step, cfg.mc).to_dict()
                for i in range(2)
            }
    else:
        results.append(test_alpha_right(data, 2.0, cfg.level, cfg.mc).to_dict())
        if cfg.with_ci:
            report["ci"] = {"component1": ci_alpha(data, cfg.ci_level, cfg.grid_step, cfg.mc).to_dict()}
    report["tests"] = results
    return report


def report_to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)
