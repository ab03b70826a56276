"""Classical risk measures on empirical distributions.

All measures here are integrals of the empirical step quantile function and
are therefore evaluated exactly via :func:`slidevar.empirical.integrate_quantile`
or as finite Choquet sums -- no sampling or quadrature on this path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .aversion import AversionFunction
from .empirical import EmpiricalDistribution, integrate_quantile, quantile
from .errors import DomainError, ValidationError

__all__ = [
    "var",
    "cvar",
    "spectral",
    "distortion",
    "gluevar",
    "lambda_var",
    "DistortionFunction",
    "GlueVaRWeights",
    "LambdaFunction",
    "LambdaVaRResult",
]


def var(d: EmpiricalDistribution, alpha: float) -> float:
    """Value-at-risk: the empirical quantile at level ``alpha`` in [0, 1)."""
    return quantile(d, alpha)


def cvar(d: EmpiricalDistribution, alpha: float) -> float:
    """Conditional value-at-risk (expected shortfall) at level ``alpha``.

    The average of the quantile function over [alpha, 1], computed as an
    exact tail integral; ``cvar(d, 0.0)`` is the plain mean.
    """
    if not 0.0 <= alpha < 1.0:
        raise DomainError(f"cvar level must lie in [0, 1), got {alpha!r}")
    return integrate_quantile(d, lambda p: p, alpha, 1.0) / (1.0 - alpha)


def spectral(d: EmpiricalDistribution, phi: AversionFunction) -> float:
    """Spectral risk measure: the integral of the quantile function against
    an admissible weight ``phi`` over the whole unit interval.

    Admissibility is enforced when ``phi`` is constructed, so any
    :class:`~slidevar.aversion.AversionFunction` is a valid spectrum here.
    """
    return integrate_quantile(d, phi.antiderivative, 0.0, 1.0)


@dataclass(frozen=True, eq=False)
class DistortionFunction:
    """A non-decreasing distortion g on [0, 1] with g(0) = 0 and g(1) = 1.

    Given as piecewise-linear knots ``(u, g(u))`` with non-decreasing
    abscissae; a repeated abscissa encodes a jump, read left to right.
    """

    knots: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        pairs = tuple((float(u), float(g)) for u, g in self.knots)
        if len(pairs) < 2:
            raise ValidationError("a distortion needs at least two knots")
        xs = np.array([u for u, _ in pairs])
        ys = np.array([g for _, g in pairs])
        if xs[0] != 0.0 or xs[-1] != 1.0:
            raise ValidationError("distortion knots must start at u=0 and end at u=1")
        if np.any(np.diff(xs) < 0.0):
            raise ValidationError("distortion knot abscissae must be non-decreasing")
        if np.any(np.diff(ys) < 0.0):
            raise ValidationError("a distortion must be non-decreasing")
        if ys[0] != 0.0 or ys[-1] != 1.0:
            raise ValidationError("a distortion must satisfy g(0) = 0 and g(1) = 1")
        xs.setflags(write=False)
        ys.setflags(write=False)
        object.__setattr__(self, "knots", pairs)
        object.__setattr__(self, "_xs", xs)
        object.__setattr__(self, "_ys", ys)

    def __call__(self, u):
        """Evaluate g at ``u`` (scalar or array) in [0, 1].

        At a jump abscissa the value from the left segment is returned, so
        g stays a genuine function; the jump mass is still picked up by
        differences g(k/n) - g((k-1)/n).
        """
        arr = np.asarray(u, dtype=float)
        if np.any(arr < 0.0) or np.any(arr > 1.0):
            raise DomainError("distortions are defined on [0, 1]")
        xs: np.ndarray = self._xs  # type: ignore[attr-defined]
        ys: np.ndarray = self._ys  # type: ignore[attr-defined]
        idx = np.searchsorted(xs, arr, side="left")
        idx = np.clip(idx, 0, xs.size - 1)
        exact = xs[idx] == arr
        left = np.clip(idx - 1, 0, xs.size - 1)
        run = xs[idx] - xs[left]
        with np.errstate(invalid="ignore", divide="ignore"):
            t = np.where(run > 0.0, (arr - xs[left]) / np.where(run > 0.0, run, 1.0), 0.0)
        values = ys[left] + t * (ys[idx] - ys[left])
        values = np.where(exact, ys[idx], values)
        return float(values) if values.ndim == 0 else values

    @staticmethod
    def identity() -> "DistortionFunction":
        """g(u) = u, reproducing the mean."""
        return DistortionFunction(((0.0, 0.0), (1.0, 1.0)))

    @staticmethod
    def expected_shortfall(alpha: float) -> "DistortionFunction":
        """g(u) = min(u / (1 - alpha), 1), reproducing cvar at ``alpha``."""
        if not 0.0 <= alpha < 1.0:
            raise DomainError(f"expected-shortfall level must lie in [0, 1), got {alpha!r}")
        return DistortionFunction(((0.0, 0.0), (1.0 - alpha, 1.0), (1.0, 1.0)))


def distortion(d: EmpiricalDistribution, g: DistortionFunction) -> float:
    """Distortion (Choquet) risk measure of ``d`` under ``g``.

    For an empirical distribution the Choquet integral is the finite sum of
    x_(i) weighted by g((n-i+1)/n) - g((n-i)/n), the distorted probability of
    the survival set falling from above x_(i-1) to above x_(i).
    """
    grid = np.arange(d.n + 1, dtype=float) / d.n
    gains = np.diff(np.asarray(g(grid)))
    return float(np.sum(d.scenarios * gains[::-1]))


@dataclass(frozen=True)
class GlueVaRWeights:
    """Convex weights on (VaR_beta, CVaR_beta, CVaR_alpha)."""

    omega1: float
    omega2: float
    omega3: float

    def __post_init__(self) -> None:
        w = (self.omega1, self.omega2, self.omega3)
        if any(x < 0.0 for x in w):
            raise ValidationError(f"gluevar weights must be non-negative, got {w!r}")
        if abs(sum(w) - 1.0) > 1e-9:
            raise ValidationError(f"gluevar weights must sum to one, got {sum(w)!r}")

    @classmethod
    def thirds(cls) -> "GlueVaRWeights":
        return cls(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)


def gluevar(
    d: EmpiricalDistribution,
    beta: float,
    alpha: float,
    weights: GlueVaRWeights,
) -> float:
    """Convex combination omega1*VaR_beta + omega2*CVaR_beta + omega3*CVaR_alpha.

    Requires beta <= alpha: the third term must look at least as far into the
    tail as the first two.
    """
    if not 0.0 <= beta <= alpha < 1.0:
        raise DomainError(f"gluevar needs 0 <= beta <= alpha < 1, got beta={beta!r}, alpha={alpha!r}")
    return (
        weights.omega1 * var(d, beta)
        + weights.omega2 * cvar(d, beta)
        + weights.omega3 * cvar(d, alpha)
    )


@dataclass(frozen=True, eq=False)
class LambdaFunction:
    """A non-decreasing map from loss levels to confidence levels in (0, 1).

    Defined by knots ``(x, level)`` with strictly increasing abscissae.  With
    ``kind="step"`` each level holds from its knot onward (right-continuous);
    with ``kind="linear"`` levels interpolate between knots.  The first level
    extends to -inf and the last to +inf.
    """

    knots: tuple[tuple[float, float], ...]
    kind: str = "step"

    def __post_init__(self) -> None:
        if self.kind not in ("step", "linear"):
            raise ValidationError(f"lambda function kind must be 'step' or 'linear', got {self.kind!r}")
        pairs = tuple((float(x), float(y)) for x, y in self.knots)
        if not pairs:
            raise ValidationError("a lambda function needs at least one knot")
        xs = np.array([x for x, _ in pairs])
        ys = np.array([y for _, y in pairs])
        if np.any(np.diff(xs) <= 0.0):
            raise ValidationError("lambda function abscissae must be strictly increasing")
        if np.any(np.diff(ys) < 0.0):
            raise ValidationError("a lambda function must be non-decreasing")
        if np.any(ys <= 0.0) or np.any(ys >= 1.0):
            raise ValidationError("lambda function levels must lie strictly inside (0, 1)")
        xs.setflags(write=False)
        ys.setflags(write=False)
        object.__setattr__(self, "knots", pairs)
        object.__setattr__(self, "_xs", xs)
        object.__setattr__(self, "_ys", ys)

    @classmethod
    def constant(cls, level: float) -> "LambdaFunction":
        return cls(((0.0, level),))

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        xs: np.ndarray = self._xs  # type: ignore[attr-defined]
        ys: np.ndarray = self._ys  # type: ignore[attr-defined]
        if self.kind == "linear":
            values = np.interp(arr, xs, ys)
        else:
            idx = np.searchsorted(xs, arr, side="right") - 1
            values = ys[np.clip(idx, 0, ys.size - 1)]
        return float(values) if np.ndim(values) == 0 else values


class LambdaVaRResult(NamedTuple):
    """Value of a lambda-VaR evaluation plus its saturation flag."""

    value: float
    saturated: bool


def lambda_var(d: EmpiricalDistribution, lam: LambdaFunction) -> LambdaVaRResult:
    """Smallest loss level whose empirical cdf exceeds the moving confidence
    requirement, i.e. inf { x : F(x) > Lambda(x) }.

    The empirical cdf reaches 1 at the sample maximum, where it exceeds any
    admissible level, so the scan runs over the order statistics strictly
    below the maximum; if none qualifies the measure *saturates* and the
    maximum is returned with ``saturated=True``.  With a constant
    Lambda = alpha this reduces to ``var(d, alpha)``.
    """
    if d.n > 1:
        candidates = d.scenarios[:-1]
        ranks = np.arange(1, d.n, dtype=float) / d.n
        hits = np.nonzero(ranks > np.asarray(lam(candidates), dtype=float))[0]
        if hits.size:
            return LambdaVaRResult(float(candidates[hits[0]]), False)
    return LambdaVaRResult(d.highest, True)
