"""Empirical loss distributions and exact step-quantile integration.

A sorted loss sample x_(1) <= ... <= x_(n) induces the empirical quantile
function

    F_inv(p) = x_(k),    k = floor(n * p) + 1,

i.e. the smallest order statistic whose cumulative probability k/n exceeds p.
F_inv is a step function, constant on each interval ((k-1)/n, k/n], so any
integral of F_inv against a weight function reduces to a finite sum over
order statistics once the weight's antiderivative is known.  Every risk
measure in this package is such an integral, which keeps the numerics exact
up to floating-point rounding: there is no quadrature grid anywhere on the
main path.

Losses follow the actuarial sign convention: positive values are losses.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import AlignmentError, DomainError, ValidationError

__all__ = [
    "EmpiricalDistribution",
    "ScenarioSet",
    "GaussianMixtureSpec",
    "quantile",
    "integrate_quantile",
    "combine",
    "sample_mixture",
    "mixture_draws",
]

#: Vectorised exact antiderivative W of an integration weight w, so that the
#: integral of w over [lo, hi] is W(hi) - W(lo).
Antiderivative = Callable[[np.ndarray], np.ndarray]

#: Probability of the first mixture component; the second carries the rest.
MIXTURE_WEIGHT_FIRST = 1.0 / 3.0


@dataclass(frozen=True, eq=False)
class EmpiricalDistribution:
    """A finite loss sample, stored sorted, with its step quantile function.

    Scenarios are equally weighted.  The input order carries no meaning;
    construction sorts ascending and freezes the array.
    """

    scenarios: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.scenarios, dtype=float).ravel()
        if values.size == 0:
            raise ValidationError("an empirical distribution needs at least one scenario")
        if not np.all(np.isfinite(values)):
            raise ValidationError("scenario values must be finite")
        values = np.sort(values)
        values.setflags(write=False)
        object.__setattr__(self, "scenarios", values)

    @property
    def n(self) -> int:
        """Number of scenarios."""
        return int(self.scenarios.size)

    @property
    def lowest(self) -> float:
        return float(self.scenarios[0])

    @property
    def highest(self) -> float:
        return float(self.scenarios[-1])

    def mean(self) -> float:
        return float(self.scenarios.mean())

    def quantile(self, p: float) -> float:
        return quantile(self, p)


def quantile(d: EmpiricalDistribution, p: float) -> float:
    """Empirical quantile of ``d`` at level ``p``.

    Returns x_(k) with k = floor(n*p) + 1, the smallest order statistic whose
    cumulative probability strictly exceeds ``p``.  The level must lie in
    [0, 1); the supremum p = 1 is reachable only through integrals.
    """
    if not 0.0 <= p < 1.0:
        raise DomainError(f"quantile level must lie in [0, 1), got {p!r}")
    k = int(np.floor(d.n * p))  # zero-based index of x_(floor(n*p)+1)
    return float(d.scenarios[min(k, d.n - 1)])


def integrate_quantile(
    d: EmpiricalDistribution,
    antiderivative: Antiderivative,
    lo: float,
    hi: float,
) -> float:
    """Exact integral of F_inv(p) * w(p) over [lo, hi].

    ``antiderivative`` must be an exact, vectorised antiderivative W of the
    weight w.  Because F_inv equals x_(k) on ((k-1)/n, k/n], the integral is

        sum_k  x_(k) * [ W(min(hi, k/n)) - W(max(lo, (k-1)/n)) ]

    over the intervals that intersect [lo, hi]; the only error is
    floating-point rounding of the sum.
    """
    if not (0.0 <= lo <= hi <= 1.0):
        raise DomainError(
            f"integration bounds must satisfy 0 <= lo <= hi <= 1, got [{lo!r}, {hi!r}]"
        )
    if lo == hi:
        return 0.0
    grid = np.arange(d.n + 1, dtype=float) / d.n
    upper = np.minimum(hi, grid[1:])
    lower = np.maximum(lo, grid[:-1])
    mask = upper > lower
    if not mask.any():
        return 0.0
    weights = np.asarray(antiderivative(upper[mask])) - np.asarray(antiderivative(lower[mask]))
    return float(np.sum(d.scenarios[mask] * weights))


@dataclass(frozen=True, eq=False)
class ScenarioSet:
    """Aligned loss scenarios for one or more positions.

    Row i holds the losses of position i; column j is one state of the
    world.  Alignment is what gives X + Y, lambda * X and X + a a meaning for
    empirical samples: positions are combined column by column *before*
    sorting.
    """

    positions: np.ndarray

    def __post_init__(self) -> None:
        try:
            values = np.atleast_2d(np.asarray(self.positions, dtype=float))
        except ValueError as exc:
            raise AlignmentError(f"positions must share one scenario count: {exc}") from None
        if values.ndim != 2 or values.size == 0:
            raise ValidationError("a scenario set needs a non-empty 2-d array of losses")
        if not np.all(np.isfinite(values)):
            raise ValidationError("scenario values must be finite")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "positions", values)

    @classmethod
    def of(cls, *positions: Sequence[float]) -> "ScenarioSet":
        """Build a set from per-position sequences, checking alignment."""
        if not positions:
            raise ValidationError("a scenario set needs at least one position")
        arrays = [np.asarray(p, dtype=float).ravel() for p in positions]
        counts = {a.size for a in arrays}
        if len(counts) != 1:
            raise AlignmentError(f"positions must share one scenario count, got {sorted(counts)}")
        return cls(np.vstack(arrays))

    @property
    def n_positions(self) -> int:
        return int(self.positions.shape[0])

    @property
    def n_scenarios(self) -> int:
        return int(self.positions.shape[1])

    def position(self, i: int) -> EmpiricalDistribution:
        """The marginal distribution of position ``i``."""
        return EmpiricalDistribution(self.positions[i])


def combine(s: ScenarioSet, op: str, value: float | None = None) -> EmpiricalDistribution:
    """Scenario-wise arithmetic on a set, followed by sorting.

    ``op`` is one of:

    * ``"sum"``   -- add all positions state by state (portfolio loss X + Y),
    * ``"scale"`` -- multiply a single position by ``value``,
    * ``"shift"`` -- add ``value`` to every scenario of a single position.
    """
    if op == "sum":
        return EmpiricalDistribution(s.positions.sum(axis=0))
    if op in ("scale", "shift"):
        if value is None:
            raise ValidationError(f"combine({op!r}) needs a value")
        if s.n_positions != 1:
            raise AlignmentError(
                f"combine({op!r}) acts on a single position, got {s.n_positions}"
            )
        row = s.positions[0]
        return EmpiricalDistribution(row * value if op == "scale" else row + value)
    raise ValidationError(f"unknown combine op {op!r}")


@dataclass(frozen=True)
class GaussianMixtureSpec:
    """Two-component Gaussian mixture with fixed weights 1/3 and 2/3.

    The first component (weight 1/3) is the stress leg whose location and
    dispersion are swept in simulations; the second (weight 2/3) is the calm
    bulk of the loss distribution.
    """

    mu1: float
    sigma1: float
    mu2: float
    sigma2: float
    samples: int
    seed: int | tuple[int, ...]

    def __post_init__(self) -> None:
        if self.sigma1 <= 0.0 or self.sigma2 <= 0.0:
            raise ValidationError("mixture standard deviations must be positive")
        if self.samples < 1:
            raise ValidationError("mixture sample count must be positive")

    def mean(self) -> float:
        """Population mean (mu1 + 2*mu2) / 3."""
        w = MIXTURE_WEIGHT_FIRST
        return w * self.mu1 + (1.0 - w) * self.mu2

    def variance(self) -> float:
        """Population variance via the conditional-variance decomposition."""
        w = MIXTURE_WEIGHT_FIRST
        second_moment = w * (self.mu1**2 + self.sigma1**2) + (1.0 - w) * (
            self.mu2**2 + self.sigma2**2
        )
        return second_moment - self.mean() ** 2


def mixture_draws(
    rng: np.random.Generator,
    size: int,
    mu1: float | np.ndarray,
    sigma1: float | np.ndarray,
    mu2: float | np.ndarray,
    sigma2: float | np.ndarray,
) -> np.ndarray:
    """Draw ``size`` values from the 1/3 - 2/3 Gaussian mixture.

    Parameters may be scalars or arrays of length ``size`` (per-draw
    regimes).  Exactly two rng calls are made, one uniform block for the
    component choice and one normal block, so the same generator state yields
    the same draws regardless of how the parameters vary.
    """
    first = rng.random(size) < MIXTURE_WEIGHT_FIRST
    z = rng.standard_normal(size)
    mu = np.where(first, mu1, mu2)
    sigma = np.where(first, sigma1, sigma2)
    return mu + sigma * z


def sample_mixture(spec: GaussianMixtureSpec) -> EmpiricalDistribution:
    """Draw an empirical distribution from a mixture parameterization."""
    rng = np.random.default_rng(spec.seed)
    draws = mixture_draws(rng, spec.samples, spec.mu1, spec.sigma1, spec.mu2, spec.sigma2)
    return EmpiricalDistribution(draws)
