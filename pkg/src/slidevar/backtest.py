"""Rolling historical simulation, parameter sweeps and synthetic regimes.

The backtest engine walks a loss series with a fixed-width window, prices
the next observation with each measure using only the window's history, and
records whether the realized loss exceeded the charge (a *violation*).  The
sweep engine prices Gaussian-mixture samples across a grid of stress
parameters; the regime generator produces synthetic series that switch
between mixture regimes at known points, so regime labels are available as
ground truth.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .empirical import EmpiricalDistribution, GaussianMixtureSpec, mixture_draws, sample_mixture
from .errors import InputError, ValidationError
from .measures import GlueVaRWeights, gluevar
from .slide import SlideVaRConfig, evaluate

__all__ = [
    "WindowConfig",
    "WindowRecord",
    "MeasureSummary",
    "BacktestReport",
    "SweepSpec",
    "SweepRow",
    "MixtureRegime",
    "RegimeSeriesSpec",
    "MEASURES",
    "rolling_backtest",
    "run_sweep",
    "regime_indices",
    "regime_series",
]

#: Column names of the measures every report carries, in output order.
MEASURES = ("var_beta", "cvar_alpha", "gluevar", "slidevar")


@dataclass(frozen=True)
class WindowConfig:
    """Rolling-window geometry: ``width`` observations, advanced by ``step``."""

    width: int = 250
    step: int = 1

    def __post_init__(self) -> None:
        if self.width < 2:
            raise ValidationError(f"window width must be at least 2, got {self.width!r}")
        if self.step < 1:
            raise ValidationError(f"window step must be at least 1, got {self.step!r}")


@dataclass(frozen=True)
class WindowRecord:
    """Charges and outcome for one prediction instant.

    ``index`` is the position of the predicted observation in the input
    series; the window covers the ``width`` observations just before it.
    """

    index: int
    label: str | None
    var_beta: float
    cvar_alpha: float
    gluevar: float
    slidevar: float
    tail_thickness: float
    weight: float
    realized: float
    regime: int | None = None

    def charge(self, measure: str) -> float:
        if measure not in MEASURES:
            raise ValidationError(f"unknown measure {measure!r}")
        return float(getattr(self, measure))

    def violated(self, measure: str) -> bool:
        """A violation is a realized loss strictly above the charge."""
        return self.realized > self.charge(measure)


@dataclass(frozen=True)
class MeasureSummary:
    """Violation and capital statistics of one measure over a backtest."""

    measure: str
    windows: int
    violations: int
    violation_rate: float
    mean_charge: float
    mean_excess: float


@dataclass(frozen=True)
class BacktestReport:
    """All window records plus per-measure summaries."""

    window: WindowConfig
    records: tuple[WindowRecord, ...]
    summaries: tuple[MeasureSummary, ...]

    def summary(self, measure: str) -> MeasureSummary:
        for s in self.summaries:
            if s.measure == measure:
                return s
        raise ValidationError(f"unknown measure {measure!r}")


def _summarize(records: Sequence[WindowRecord]) -> tuple[MeasureSummary, ...]:
    total = len(records)
    out = []
    for measure in MEASURES:
        charges = np.array([r.charge(measure) for r in records])
        realized = np.array([r.realized for r in records])
        hits = realized > charges
        count = int(hits.sum())
        mean_excess = float((realized[hits] - charges[hits]).mean()) if count else 0.0
        out.append(
            MeasureSummary(
                measure=measure,
                windows=total,
                violations=count,
                violation_rate=count / total,
                mean_charge=float(charges.mean()),
                mean_excess=mean_excess,
            )
        )
    return tuple(out)


def rolling_backtest(
    losses: Sequence[float],
    window: WindowConfig,
    config: SlideVaRConfig,
    weights: GlueVaRWeights,
    labels: Sequence[str] | None = None,
    regimes: Sequence[int] | None = None,
) -> BacktestReport:
    """Walk ``losses`` with a rolling window and price one step ahead.

    The window ending at position t prices the loss realized at t + 1, so
    every charge uses strictly past information.  ``labels`` (e.g. dates)
    and ``regimes`` (ground-truth regime indices) are optional per-
    observation annotations copied onto the records of the instants they
    describe.
    """
    series = np.asarray(losses, dtype=float).ravel()
    if not np.all(np.isfinite(series)):
        raise InputError("loss series must be finite")
    if series.size < window.width + 1:
        raise InputError(
            f"need at least {window.width + 1} observations for width {window.width}, "
            f"got {series.size}"
        )
    if labels is not None and len(labels) != series.size:
        raise InputError("labels must have one entry per observation")
    if regimes is not None and len(regimes) != series.size:
        raise InputError("regimes must have one entry per observation")

    records = []
    for end in range(window.width - 1, series.size - 1, window.step):
        segment = series[end - window.width + 1 : end + 1]
        d = EmpiricalDistribution(segment)
        breakdown = evaluate(d, config)
        glue = gluevar(d, config.beta, config.alpha, weights)
        target = end + 1
        records.append(
            WindowRecord(
                index=target,
                label=None if labels is None else str(labels[target]),
                var_beta=breakdown.var_beta,
                cvar_alpha=breakdown.cvar_alpha,
                gluevar=glue,
                slidevar=breakdown.value,
                tail_thickness=breakdown.tail_thickness,
                weight=breakdown.weight,
                realized=float(series[target]),
                regime=None if regimes is None else int(regimes[target]),
            )
        )
    return BacktestReport(window=window, records=tuple(records), summaries=_summarize(records))


@dataclass(frozen=True)
class SweepSpec:
    """A one-parameter sweep over Gaussian-mixture stress settings.

    ``parameter`` is the mixture field being swept ("sigma1" or "mu1");
    ``values`` its grid.  The other stress parameter keeps its fixed value.
    Each grid point gets its own child seed derived from ``seed`` and the
    point's position, so single points can be reproduced in isolation.
    """

    parameter: str
    values: tuple[float, ...]
    samples: int
    seed: int | tuple[int, ...]
    mu1: float = 0.0
    sigma1: float = 10.0
    mu2: float = 0.0
    sigma2: float = 5.0

    def __post_init__(self) -> None:
        if self.parameter not in ("sigma1", "mu1"):
            raise ValidationError(f"sweep parameter must be 'sigma1' or 'mu1', got {self.parameter!r}")
        if not self.values:
            raise ValidationError("a sweep needs at least one grid value")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    def mixture(self, k: int) -> GaussianMixtureSpec:
        """Mixture spec of grid point ``k``."""
        value = self.values[k]
        mu1, sigma1 = (self.mu1, value) if self.parameter == "sigma1" else (value, self.sigma1)
        base = self.seed if isinstance(self.seed, tuple) else (self.seed,)
        return GaussianMixtureSpec(
            mu1=mu1,
            sigma1=sigma1,
            mu2=self.mu2,
            sigma2=self.sigma2,
            samples=self.samples,
            seed=(*base, k),
        )


@dataclass(frozen=True)
class SweepRow:
    """Measures of one sampled grid point, with the sample kept for plots."""

    parameter: str
    value: float
    var_beta: float
    cvar_alpha: float
    gluevar: float
    slidevar: float
    tail_thickness: float
    weight: float
    distribution: EmpiricalDistribution


def run_sweep(
    spec: SweepSpec,
    config: SlideVaRConfig,
    weights: GlueVaRWeights,
) -> tuple[SweepRow, ...]:
    """Sample every grid point of ``spec`` and price it with all measures."""
    rows = []
    for k in range(len(spec.values)):
        d = sample_mixture(spec.mixture(k))
        breakdown = evaluate(d, config)
        rows.append(
            SweepRow(
                parameter=spec.parameter,
                value=spec.values[k],
                var_beta=breakdown.var_beta,
                cvar_alpha=breakdown.cvar_alpha,
                gluevar=gluevar(d, config.beta, config.alpha, weights),
                slidevar=breakdown.value,
                tail_thickness=breakdown.tail_thickness,
                weight=breakdown.weight,
                distribution=d,
            )
        )
    return tuple(rows)


@dataclass(frozen=True)
class MixtureRegime:
    """Mixture parameters of one market regime."""

    mu1: float
    sigma1: float
    mu2: float
    sigma2: float

    def __post_init__(self) -> None:
        if self.sigma1 <= 0.0 or self.sigma2 <= 0.0:
            raise ValidationError("regime standard deviations must be positive")


@dataclass(frozen=True)
class RegimeSeriesSpec:
    """A loss series that switches between mixture regimes at known points.

    ``switch_points`` are the strictly increasing positions at which a new
    segment starts; ``schedule`` names the regime of each segment, so it has
    exactly one more entry than there are switch points.
    """

    regimes: tuple[MixtureRegime, ...]
    switch_points: tuple[int, ...]
    schedule: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.regimes:
            raise ValidationError("a regime series needs at least one regime")
        points = tuple(int(p) for p in self.switch_points)
        schedule = tuple(int(s) for s in self.schedule)
        if any(p <= 0 for p in points):
            raise ValidationError(f"switch points must be positive, got {points!r}")
        if any(b <= a for a, b in zip(points, points[1:])):
            raise ValidationError(f"switch points must be strictly increasing, got {points!r}")
        if len(schedule) != len(points) + 1:
            raise ValidationError(
                f"schedule needs {len(points) + 1} entries for {len(points)} switch points, "
                f"got {len(schedule)}"
            )
        if any(not 0 <= s < len(self.regimes) for s in schedule):
            raise ValidationError(f"schedule references an unknown regime: {schedule!r}")
        object.__setattr__(self, "switch_points", points)
        object.__setattr__(self, "schedule", schedule)


def regime_indices(spec: RegimeSeriesSpec, length: int) -> np.ndarray:
    """Regime index of every observation of a series of ``length``."""
    if length < 1:
        raise ValidationError(f"series length must be positive, got {length!r}")
    if spec.switch_points and spec.switch_points[-1] >= length:
        raise ValidationError(
            f"switch points must lie inside the series, got {spec.switch_points!r} "
            f"for length {length}"
        )
    indices = np.zeros(length, dtype=int)
    bounds = (0, *spec.switch_points, length)
    for regime, (lo, hi) in zip(spec.schedule, zip(bounds[:-1], bounds[1:])):
        indices[lo:hi] = regime
    return indices


def regime_series(
    spec: RegimeSeriesSpec,
    length: int,
    seed: int | tuple[int, ...],
) -> tuple[np.ndarray, np.ndarray]:
    """Draw a synthetic loss series from ``spec``.

    Returns ``(losses, regimes)`` where ``regimes[t]`` is the index of the
    regime that generated ``losses[t]``.  A series with a single segment is
    draw-for-draw identical to sampling that regime's mixture directly with
    the same seed.
    """
    indices = regime_indices(spec, length)
    rng = np.random.default_rng(seed)
    params = {
        name: np.array([getattr(r, name) for r in spec.regimes])[indices]
        for name in ("mu1", "sigma1", "mu2", "sigma2")
    }
    losses = mixture_draws(rng, length, **params)
    return losses, indices
