"""Risk-aversion functions: tail weights with exact antiderivatives.

An aversion function phi for a base level beta is a weight on quantile
levels that is

* zero on [0, beta),
* non-negative and non-decreasing on [beta, 1],
* of unit integral over [beta, 1].

Integrating the empirical quantile function against phi yields the tail
thickness used by the sliding measure; integrating against phi over the full
unit interval yields a spectral risk measure.  Each built-in family carries a
closed-form antiderivative so those integrals are exact for step quantile
functions.  A custom density without an antiderivative falls back to
adaptive quadrature.

Admissibility (positivity, monotonicity on a fine grid, unit norm) is
enforced at construction; an inadmissible function never escapes into the
measures.
"""

from __future__ import annotations

import abc
import math
from dataclasses import dataclass
from typing import Callable, ClassVar

import numpy as np
from scipy.integrate import quad

from .errors import AdmissibilityError, ValidationError

__all__ = [
    "AversionFunction",
    "ExponentialAversion",
    "PowerConvexAversion",
    "PowerConcaveAversion",
    "FlatAversion",
    "StepAversion",
    "CustomAversion",
    "exponential",
    "power_convex",
    "power_concave",
    "flat",
    "step",
    "custom",
]

#: Spacing of the pointwise admissibility grid on [beta, 1).
GRID_STEP = 1e-4

#: Largest tolerated deviation of the norm from one.
NORM_TOLERANCE = 1e-9

#: Absolute tolerance of the quadrature fallback for custom densities.
QUAD_TOLERANCE = 1e-10


class AversionFunction(abc.ABC):
    """A tail weight phi with an exact antiderivative pinned to 0 at beta.

    Subclasses implement ``_density`` and ``_primitive`` on [beta, 1] only;
    this base class extends both by zero below beta and anchors the
    antiderivative so that ``antiderivative(p)`` equals the integral of phi
    over [beta, p] (hence ``antiderivative(1.0)`` is the norm).
    """

    family: ClassVar[str]
    beta: float

    def __call__(self, p):
        """Evaluate phi at ``p`` (scalar or array)."""
        arr = np.asarray(p, dtype=float)
        with np.errstate(divide="ignore"):
            values = np.where(arr < self.beta, 0.0, self._density(np.maximum(arr, self.beta)))
        return float(values) if values.ndim == 0 else values

    def antiderivative(self, p):
        """Integral of phi over [beta, p], zero for p <= beta."""
        arr = np.asarray(p, dtype=float)
        anchor = self._primitive(np.asarray(self.beta, dtype=float))
        values = np.where(arr < self.beta, 0.0, self._primitive(np.maximum(arr, self.beta)) - anchor)
        return float(values) if values.ndim == 0 else values

    def norm(self) -> float:
        """Integral of phi over [0, 1]; admissible functions return 1."""
        return float(self.antiderivative(1.0))

    @abc.abstractmethod
    def _density(self, p: np.ndarray) -> np.ndarray:
        """phi on [beta, 1]; may return inf at an integrable endpoint pole."""

    @abc.abstractmethod
    def _primitive(self, p: np.ndarray) -> np.ndarray:
        """Any antiderivative of ``_density`` on [beta, 1]."""

    def _check_level(self) -> None:
        if not 0.0 <= self.beta < 1.0:
            raise ValidationError(f"base level beta must lie in [0, 1), got {self.beta!r}")

    def _check_admissible(self) -> None:
        """Reject densities that are negative, decreasing or not of unit mass."""
        grid = np.arange(self.beta, 1.0, GRID_STEP)
        values = np.asarray(self(grid), dtype=float)
        if np.any(values < 0.0):
            where = grid[np.argmax(values < 0.0)]
            raise AdmissibilityError(f"{self.family} weight is negative at p={where:.6f}")
        slack = NORM_TOLERANCE * (1.0 + float(np.max(values, initial=0.0)))
        drops = np.diff(values) < -slack
        if np.any(drops):
            where = grid[1:][np.argmax(drops)]
            raise AdmissibilityError(f"{self.family} weight is decreasing near p={where:.6f}")
        norm = self.norm()
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise AdmissibilityError(
                f"{self.family} weight has integral {norm!r} over [beta, 1], expected 1"
            )


@dataclass(frozen=True)
class ExponentialAversion(AversionFunction):
    """phi(p) proportional to exp((p - 1) / gamma), gamma in (0, 1].

    Small gamma concentrates virtually all weight on the worst quantiles;
    gamma = 1 is a mild, nearly flat tilt.
    """

    beta: float
    gamma: float
    family: ClassVar[str] = "exponential"

    def __post_init__(self) -> None:
        self._check_level()
        if not 0.0 < self.gamma <= 1.0:
            raise ValidationError(f"exponential aversion needs gamma in (0, 1], got {self.gamma!r}")
        self._check_admissible()

    def _scale(self) -> float:
        return 1.0 - math.exp((self.beta - 1.0) / self.gamma)

    def _density(self, p):
        return np.exp((p - 1.0) / self.gamma) / (self.gamma * self._scale())

    def _primitive(self, p):
        return np.exp((p - 1.0) / self.gamma) / self._scale()


@dataclass(frozen=True)
class PowerConvexAversion(AversionFunction):
    """phi(p) proportional to (1 - p)^(-gamma), gamma in [0, 1).

    Convex, with an integrable pole at p = 1; gamma = 0 degenerates to the
    flat kernel.
    """

    beta: float
    gamma: float
    family: ClassVar[str] = "power-convex"

    def __post_init__(self) -> None:
        self._check_level()
        if not 0.0 <= self.gamma < 1.0:
            raise ValidationError(f"power-convex aversion needs gamma in [0, 1), got {self.gamma!r}")
        self._check_admissible()

    def _density(self, p):
        scale = (1.0 - self.beta) ** (1.0 - self.gamma)
        return (1.0 - self.gamma) * (1.0 - p) ** (-self.gamma) / scale

    def _primitive(self, p):
        scale = (1.0 - self.beta) ** (1.0 - self.gamma)
        return -((1.0 - p) ** (1.0 - self.gamma)) / scale


@dataclass(frozen=True)
class PowerConcaveAversion(AversionFunction):
    """phi(p) proportional to p^gamma, gamma in [0, 1].

    Concave: weight grows toward the tail but without a pole, the gentlest
    of the families.
    """

    beta: float
    gamma: float
    family: ClassVar[str] = "power-concave"

    def __post_init__(self) -> None:
        self._check_level()
        if not 0.0 <= self.gamma <= 1.0:
            raise ValidationError(
                f"power-concave aversion needs gamma in [0, 1], got {self.gamma!r}"
            )
        self._check_admissible()

    def _scale(self) -> float:
        return 1.0 - self.beta ** (1.0 + self.gamma)

    def _density(self, p):
        return (1.0 + self.gamma) * p**self.gamma / self._scale()

    def _primitive(self, p):
        return p ** (1.0 + self.gamma) / self._scale()


@dataclass(frozen=True)
class FlatAversion(AversionFunction):
    """Uniform tail weight 1 / (1 - beta): the expected-shortfall kernel."""

    beta: float
    family: ClassVar[str] = "flat"

    def __post_init__(self) -> None:
        self._check_level()
        self._check_admissible()

    def _density(self, p):
        return np.full_like(p, 1.0 / (1.0 - self.beta))

    def _primitive(self, p):
        return p / (1.0 - self.beta)


@dataclass(frozen=True)
class StepAversion(AversionFunction):
    """Piecewise-constant tail weight stacking expected-shortfall kernels.

    With levels beta < beta1 < beta2 and non-negative weights (w1, w2, w3)
    summing to one, phi equals w1/(1-beta) on [beta, beta1), gains
    w2/(1-beta1) at beta1 and w3/(1-beta2) at beta2.  The induced tail
    integral of a quantile function is then exactly

        w1 * CVaR_beta + w2 * CVaR_beta1 + w3 * CVaR_beta2.
    """

    beta: float
    beta1: float
    beta2: float
    weights: tuple[float, float, float]
    family: ClassVar[str] = "step"

    def __post_init__(self) -> None:
        self._check_level()
        if not self.beta < self.beta1 < self.beta2 < 1.0:
            raise ValidationError(
                "step aversion needs beta < beta1 < beta2 < 1, got "
                f"{self.beta!r}, {self.beta1!r}, {self.beta2!r}"
            )
        w = tuple(float(x) for x in self.weights)
        if len(w) != 3:
            raise ValidationError(f"step aversion needs exactly three weights, got {len(w)}")
        if any(x < 0.0 for x in w):
            raise ValidationError(f"step aversion weights must be non-negative, got {w!r}")
        if abs(sum(w) - 1.0) > NORM_TOLERANCE:
            raise ValidationError(f"step aversion weights must sum to one, got {sum(w)!r}")
        object.__setattr__(self, "weights", w)
        self._check_admissible()

    def _levels(self) -> tuple[float, float, float]:
        w1, w2, w3 = self.weights
        first = w1 / (1.0 - self.beta)
        second = first + w2 / (1.0 - self.beta1)
        third = second + w3 / (1.0 - self.beta2)
        return first, second, third

    def _density(self, p):
        first, second, third = self._levels()
        return np.select([p < self.beta1, p < self.beta2], [first, second], default=third)

    def _primitive(self, p):
        first, second, third = self._levels()
        return (
            first * (np.minimum(p, self.beta1) - self.beta)
            + second * np.clip(p - self.beta1, 0.0, self.beta2 - self.beta1)
            + third * np.maximum(p - self.beta2, 0.0)
        )


@dataclass(frozen=True, eq=False)
class CustomAversion(AversionFunction):
    """User-supplied tail weight.

    ``density_fn`` must accept numpy arrays of levels in [beta, 1].  When
    ``primitive_fn`` is given, integrals stay exact; without it the
    antiderivative is evaluated by adaptive quadrature from beta, which is
    slower and accurate to about ``QUAD_TOLERANCE``.
    """

    beta: float
    density_fn: Callable[[np.ndarray], np.ndarray]
    primitive_fn: Callable[[np.ndarray], np.ndarray] | None = None
    family: ClassVar[str] = "custom"

    def __post_init__(self) -> None:
        self._check_level()
        self._check_admissible()

    def _density(self, p):
        return np.asarray(self.density_fn(p), dtype=float)

    def _primitive(self, p):
        if self.primitive_fn is not None:
            return np.asarray(self.primitive_fn(p), dtype=float)
        flat_p = np.atleast_1d(np.asarray(p, dtype=float))
        values = [
            quad(self.density_fn, self.beta, x, epsabs=QUAD_TOLERANCE, limit=200)[0]
            for x in flat_p
        ]
        return np.asarray(values, dtype=float).reshape(np.shape(p))


def exponential(beta: float, gamma: float) -> ExponentialAversion:
    return ExponentialAversion(beta, gamma)


def power_convex(beta: float, gamma: float) -> PowerConvexAversion:
    return PowerConvexAversion(beta, gamma)


def power_concave(beta: float, gamma: float) -> PowerConcaveAversion:
    return PowerConcaveAversion(beta, gamma)


def flat(beta: float) -> FlatAversion:
    return FlatAversion(beta)


def step(
    beta: float,
    beta1: float,
    beta2: float,
    weights: tuple[float, float, float],
) -> StepAversion:
    return StepAversion(beta, beta1, beta2, weights)


def custom(
    beta: float,
    density_fn: Callable[[np.ndarray], np.ndarray],
    primitive_fn: Callable[[np.ndarray], np.ndarray] | None = None,
) -> CustomAversion:
    return CustomAversion(beta, density_fn, primitive_fn)
