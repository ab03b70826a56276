"""The sliding measure: a market-adaptive blend of VaR and CVaR.

The measure reads the beta-tail of a loss distribution through an aversion
weight (the *tail thickness*), maps that number to a blend weight s in
[0, 1] through a monotone normalization, and charges

    s * CVaR_alpha  +  (1 - s) * VaR_beta,        beta <= alpha.

Thin tails are priced like VaR at the lower level, thick tails like CVaR at
the upper level; between the two anchors the risk attitude slides with the
market instead of being fixed a priori.  Distributions whose tail thickness
reaches the saturation threshold of the normalization form the *risk tail
region*, on which the measure coincides with CVaR_alpha and inherits its
sub-additivity and convexity.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .aversion import AversionFunction
from .empirical import EmpiricalDistribution, integrate_quantile
from .errors import CapabilityError, ValidationError
from .measures import cvar, var

__all__ = [
    "NormalizationFunction",
    "LinearNormalization",
    "CustomNormalization",
    "SlideVaRConfig",
    "SlideVaRBreakdown",
    "tail_thickness",
    "normalize",
    "slide_var",
    "evaluate",
    "risk_tail_membership",
]


def tail_thickness(d: EmpiricalDistribution, phi: AversionFunction) -> float:
    """Aversion-weighted average of the beta-tail of ``d``.

    The integral of the quantile function against phi over [beta, 1].  Since
    phi has unit mass there, the value is a weighted average of tail
    quantiles and lies between the sample minimum and maximum; it is clipped
    to that range to shed floating-point dust.
    """
    u = integrate_quantile(d, phi.antiderivative, phi.beta, 1.0)
    return float(min(max(u, d.lowest), d.highest))


class NormalizationFunction(abc.ABC):
    """Monotone non-decreasing map from tail thickness to a weight in [0, 1]."""

    #: Infimum of the saturation set {u : S(u) = 1}, or None when unknown.
    saturation_threshold: float | None = None

    @abc.abstractmethod
    def __call__(self, u: float) -> float:
        """Blend weight for tail thickness ``u``."""


@dataclass(frozen=True)
class LinearNormalization(NormalizationFunction):
    """Ramp from 0 at ``a`` to 1 at ``b``, clamped outside [a, b].

    ``a`` is the tail thickness below which the market counts as calm, ``b``
    the level at which full aversion is reached.
    """

    a: float
    b: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.a) and np.isfinite(self.b)):
            raise ValidationError("normalization bounds must be finite")
        if not self.a < self.b:
            raise ValidationError(f"normalization needs a < b, got a={self.a!r}, b={self.b!r}")

    def __call__(self, u: float) -> float:
        return float(np.clip((u - self.a) / (self.b - self.a), 0.0, 1.0))

    @property
    def saturation_threshold(self) -> float:  # type: ignore[override]
        return self.b


@dataclass(frozen=True, eq=False)
class CustomNormalization(NormalizationFunction):
    """Caller-supplied normalization.

    Monotonicity is the caller's contract; values outside [0, 1] are
    rejected at evaluation time.  ``saturation_threshold`` may be provided
    when the caller knows where the function saturates at 1 -- without it
    the risk-tail membership test is unavailable.
    """

    fn: Callable[[float], float]
    saturation_threshold: float | None = None

    def __call__(self, u: float) -> float:
        value = float(self.fn(u))
        if not 0.0 <= value <= 1.0:
            raise ValidationError(f"normalization returned {value!r} outside [0, 1] at u={u!r}")
        return value


def normalize(normalization: NormalizationFunction, u: float) -> float:
    """Apply a normalization to a tail-thickness value."""
    return normalization(u)


@dataclass(frozen=True)
class SlideVaRConfig:
    """Everything needed to evaluate the sliding measure.

    ``beta`` is both the VaR anchor and the base level of ``phi``; ``alpha``
    is the CVaR anchor, at least as deep in the tail.
    """

    alpha: float
    beta: float
    phi: AversionFunction
    normalization: NormalizationFunction

    def __post_init__(self) -> None:
        if not 0.0 <= self.beta <= self.alpha < 1.0:
            raise ValidationError(
                f"levels must satisfy 0 <= beta <= alpha < 1, got beta={self.beta!r}, alpha={self.alpha!r}"
            )
        if abs(self.phi.beta - self.beta) > 1e-12:
            raise ValidationError(
                f"aversion base level {self.phi.beta!r} must equal beta {self.beta!r}"
            )


@dataclass(frozen=True)
class SlideVaRBreakdown:
    """One evaluation of the sliding measure with its moving parts."""

    var_beta: float
    cvar_alpha: float
    tail_thickness: float
    weight: float
    value: float


def evaluate(d: EmpiricalDistribution, config: SlideVaRConfig) -> SlideVaRBreakdown:
    """Evaluate the sliding measure and return the full breakdown."""
    u = tail_thickness(d, config.phi)
    s = normalize(config.normalization, u)
    v = var(d, config.beta)
    c = cvar(d, config.alpha)
    return SlideVaRBreakdown(
        var_beta=v,
        cvar_alpha=c,
        tail_thickness=u,
        weight=s,
        value=s * c + (1.0 - s) * v,
    )


def slide_var(d: EmpiricalDistribution, config: SlideVaRConfig) -> float:
    """Value of the sliding measure for ``d`` under ``config``."""
    return evaluate(d, config).value


def risk_tail_membership(d: EmpiricalDistribution, config: SlideVaRConfig) -> bool:
    """Whether ``d`` lies in the risk tail region {S(U) = 1} of ``config``.

    Needs a normalization with a known saturation threshold; a custom
    normalization without one cannot answer the question.
    """
    threshold = config.normalization.saturation_threshold
    if threshold is None:
        raise CapabilityError(
            "risk-tail membership needs a normalization with a known saturation threshold"
        )
    return tail_thickness(d, config.phi) >= threshold
