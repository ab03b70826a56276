"""Randomized property checks of the sliding measure.

Each property is a falsifiable mathematical statement about the measure:
bounds, monotonicity, behaviour under translation and scaling, and the
coherence properties that hold on the risk tail region.  A check draws
random loss distributions and configurations with a seeded generator,
evaluates the statement, and reports the first counterexample it finds, so
the command-line ``check`` subcommand and the test suite share one engine
and one notion of failure.

Inequalities are asserted with a relative slack proportional to the
magnitude of the quantities involved: the statements are exact in real
arithmetic and the slack only absorbs floating-point rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .aversion import (
    AversionFunction,
    exponential,
    flat,
    power_concave,
    power_convex,
    step,
)
from .empirical import EmpiricalDistribution
from .errors import ValidationError
from .measures import cvar
from .slide import (
    CustomNormalization,
    LinearNormalization,
    SlideVaRConfig,
    evaluate,
    risk_tail_membership,
    slide_var,
    tail_thickness,
)

__all__ = [
    "PropertyOutcome",
    "property_names",
    "describe_property",
    "run_property",
    "run_all",
    "NORM_GRID_GAMMAS",
    "NORM_GRID_BETAS",
]

#: Relative slack for inequality checks, scaled by operand magnitude.
REL_TOL = 1e-9

#: Absolute tolerance of the degeneration identities (P12).
DEGENERATION_TOL = 1e-12

#: Gamma grid of the norm suite; families clip it to their own domain.
NORM_GRID_GAMMAS = tuple(np.round(np.arange(0.05, 1.0, 0.05), 2))

#: Beta grid of the norm suite.
NORM_GRID_BETAS = (0.80, 0.85, 0.90, 0.925, 0.95, 0.975, 0.99)


@dataclass(frozen=True)
class PropertyOutcome:
    """Result of running one property over many random cases."""

    name: str
    description: str
    cases: int
    failures: int
    counterexample: dict | None

    @property
    def passed(self) -> bool:
        return self.failures == 0


def _tol(*values: float) -> float:
    return REL_TOL * (1.0 + max(abs(float(v)) for v in values))


def _random_scenarios(rng: np.random.Generator, n: int | None = None) -> np.ndarray:
    """A random loss sample of moderate scale with varied tail shapes."""
    if n is None:
        n = int(rng.integers(10, 301))
    shape = int(rng.integers(0, 4))
    scale = float(10.0 ** rng.uniform(-1.0, 1.5))
    loc = float(rng.uniform(-30.0, 30.0))
    if shape == 0:
        x = rng.normal(loc, scale, n)
    elif shape == 1:
        x = loc + scale * rng.standard_t(3, n)
    elif shape == 2:
        x = loc + scale * rng.lognormal(0.0, 1.0, n)
    else:
        x = loc + scale * np.where(rng.random(n) < 0.2, rng.normal(4.0, 2.0, n), rng.normal(0.0, 1.0, n))
    return x


def _random_phi(rng: np.random.Generator, beta: float) -> AversionFunction:
    family = int(rng.integers(0, 5))
    gamma = float(rng.uniform(0.05, 0.95))
    if family == 0:
        return exponential(beta, gamma)
    if family == 1:
        return power_convex(beta, gamma)
    if family == 2:
        return power_concave(beta, gamma)
    if family == 3:
        return flat(beta)
    beta1 = beta + (1.0 - beta) * float(rng.uniform(0.2, 0.5))
    beta2 = beta1 + (1.0 - beta1) * float(rng.uniform(0.2, 0.5))
    raw = rng.uniform(0.1, 1.0, 3)
    w = raw / raw.sum()
    w[2] = 1.0 - w[0] - w[1]  # force an exact unit sum
    return step(beta, beta1, beta2, (float(w[0]), float(w[1]), float(w[2])))


def _random_levels(rng: np.random.Generator) -> tuple[float, float]:
    beta = float(rng.uniform(0.80, 0.96))
    alpha = beta + float(rng.uniform(0.0, 1.0)) * (0.99 - beta)
    return alpha, beta


def _random_normalization(rng: np.random.Generator, u: float) -> LinearNormalization:
    """A ramp placed randomly relative to ``u``: below, straddling or above."""
    span = float(10.0 ** rng.uniform(-1.0, 1.5))
    placement = int(rng.integers(0, 3))
    if placement == 0:  # ramp above u: S(u) = 0
        a = u + span * float(rng.uniform(0.01, 1.0))
    elif placement == 1:  # ramp straddles u
        a = u - span * float(rng.uniform(0.0, 1.0))
    else:  # ramp below u: S(u) = 1
        a = u - span * float(rng.uniform(1.0, 2.0))
    return LinearNormalization(a, a + span)


def _random_config(
    rng: np.random.Generator,
    d: EmpiricalDistribution,
) -> tuple[SlideVaRConfig, float]:
    """A random configuration whose ramp is placed relative to ``d``'s tail."""
    alpha, beta = _random_levels(rng)
    phi = _random_phi(rng, beta)
    u = tail_thickness(d, phi)
    return SlideVaRConfig(alpha, beta, phi, _random_normalization(rng, u)), u


def _describe_config(config: SlideVaRConfig) -> dict:
    phi = config.phi
    detail: dict = {"family": phi.family, "beta": phi.beta}
    for field in ("gamma", "beta1", "beta2", "weights"):
        if hasattr(phi, field):
            value = getattr(phi, field)
            detail[field] = list(value) if isinstance(value, tuple) else value
    norm = config.normalization
    ramp = {"a": norm.a, "b": norm.b} if isinstance(norm, LinearNormalization) else {}
    return {"alpha": config.alpha, "beta": config.beta, "phi": detail, "normalization": ramp}


def _shift_into_region(
    rng: np.random.Generator,
    x: np.ndarray,
    config: SlideVaRConfig,
) -> np.ndarray:
    """Translate ``x`` until its tail thickness clears the saturation level.

    Tail thickness is translation-equivariant, so one shift suffices up to
    floating-point dust; the loop guards the pathological case where dust
    lands the value a hair below the threshold.
    """
    threshold = config.normalization.saturation_threshold
    margin = float(rng.uniform(0.1, 5.0))
    for _ in range(8):
        u = tail_thickness(EmpiricalDistribution(x), config.phi)
        if u >= threshold + margin * 0.5:
            return x
        x = x + (threshold + margin - u)
    raise ValidationError("could not shift a sample into the risk tail region")


# ---------------------------------------------------------------------------
# property bodies: each returns None when the statement holds for the drawn
# case, or a serializable counterexample description when it does not.


def _check_bounds(rng: np.random.Generator) -> dict | None:
    d = EmpiricalDistribution(_random_scenarios(rng))
    config, _ = _random_config(rng, d)
    b = evaluate(d, config)
    tol = _tol(b.var_beta, b.cvar_alpha, b.value)
    if b.var_beta - tol <= b.value <= b.cvar_alpha + tol:
        return None
    return {
        "scenarios": [float(v) for v in d.scenarios],
        "config": _describe_config(config),
        "var_beta": b.var_beta,
        "cvar_alpha": b.cvar_alpha,
        "slidevar": b.value,
    }


def _dominating_pair(
    rng: np.random.Generator,
) -> tuple[EmpiricalDistribution, EmpiricalDistribution]:
    """Two aligned samples with the first dominating scenario-wise."""
    smaller = _random_scenarios(rng)
    lift = rng.exponential(float(10.0 ** rng.uniform(-2.0, 1.0)), smaller.size)
    return EmpiricalDistribution(smaller + lift), EmpiricalDistribution(smaller)


def _check_monotonic_value(rng: np.random.Generator) -> dict | None:
    larger, smaller = _dominating_pair(rng)
    config, _ = _random_config(rng, larger)
    hi = slide_var(larger, config)
    lo = slide_var(smaller, config)
    if hi >= lo - _tol(hi, lo):
        return None
    return {
        "larger": [float(v) for v in larger.scenarios],
        "smaller": [float(v) for v in smaller.scenarios],
        "config": _describe_config(config),
        "slidevar_larger": hi,
        "slidevar_smaller": lo,
    }


def _check_monotonic_weight(rng: np.random.Generator) -> dict | None:
    larger, smaller = _dominating_pair(rng)
    config, _ = _random_config(rng, larger)
    s_hi = evaluate(larger, config).weight
    s_lo = evaluate(smaller, config).weight
    if s_hi >= s_lo - REL_TOL:
        return None
    return {
        "larger": [float(v) for v in larger.scenarios],
        "smaller": [float(v) for v in smaller.scenarios],
        "config": _describe_config(config),
        "weight_larger": s_hi,
        "weight_smaller": s_lo,
    }


def _check_translation_weight(rng: np.random.Generator) -> dict | None:
    x = _random_scenarios(rng)
    d = EmpiricalDistribution(x)
    config, u = _random_config(rng, d)
    a = float(rng.uniform(-20.0, 20.0))
    shifted = EmpiricalDistribution(x + a)
    u_shifted = tail_thickness(shifted, config.phi)
    detail = {
        "scenarios": [float(v) for v in x],
        "shift": a,
        "config": _describe_config(config),
        "u": u,
        "u_shifted": u_shifted,
    }
    if abs(u_shifted - (u + a)) > _tol(u, a):
        return {**detail, "reason": "tail thickness is not translation-equivariant"}
    s, s_shifted = config.normalization(u), config.normalization(u_shifted)
    if a >= 0.0 and s_shifted < s - REL_TOL:
        return {**detail, "reason": "weight fell after a non-negative shift"}
    if a <= 0.0 and s_shifted > s + REL_TOL:
        return {**detail, "reason": "weight rose after a non-positive shift"}
    return None


def _check_scaling_weight(rng: np.random.Generator) -> dict | None:
    x = _random_scenarios(rng)
    d = EmpiricalDistribution(x)
    config, u = _random_config(rng, d)
    lam = float(rng.uniform(0.0, 4.0))
    u_scaled = tail_thickness(EmpiricalDistribution(x * lam), config.phi)
    detail = {
        "scenarios": [float(v) for v in x],
        "lambda": lam,
        "config": _describe_config(config),
        "u": u,
        "u_scaled": u_scaled,
    }
    if abs(u_scaled - lam * u) > _tol(u_scaled, lam * u):
        return {**detail, "reason": "tail thickness is not positively homogeneous"}
    # On samples with non-negative tail thickness, scaling up by lam >= 1
    # cannot thin the tail, so the weight cannot fall.
    positive = x - u + float(rng.uniform(0.5, 20.0))
    lam_up = float(rng.uniform(1.0, 4.0))
    base = tail_thickness(EmpiricalDistribution(positive), config.phi)
    if base < 0.0:
        return None  # rounding swallowed the construction margin; nothing to test
    scaled = tail_thickness(EmpiricalDistribution(positive * lam_up), config.phi)
    s_base = config.normalization(base)
    s_scaled = config.normalization(scaled)
    if s_scaled >= s_base - REL_TOL:
        return None
    return {
        **detail,
        "lambda_up": lam_up,
        "u_base": base,
        "u_scaled_up": scaled,
        "weight_base": s_base,
        "weight_scaled": s_scaled,
        "reason": "weight fell after scaling up a thick-tailed sample",
    }


def _check_region_subadditive(rng: np.random.Generator) -> dict | None:
    n = int(rng.integers(10, 301))
    x = _random_scenarios(rng, n)
    y = _random_scenarios(rng, n)
    d = EmpiricalDistribution(x)
    config, _ = _random_config(rng, d)
    x = _shift_into_region(rng, x, config)
    y = _shift_into_region(rng, y, config)
    dx, dy = EmpiricalDistribution(x), EmpiricalDistribution(y)
    dxy = EmpiricalDistribution(x + y)
    if not (risk_tail_membership(dx, config) and risk_tail_membership(dy, config)):
        return {"reason": "region construction failed", "config": _describe_config(config)}
    joint = slide_var(dxy, config)
    parts = slide_var(dx, config) + slide_var(dy, config)
    if joint <= parts + _tol(joint, parts):
        return None
    return {
        "x": [float(v) for v in x],
        "y": [float(v) for v in y],
        "config": _describe_config(config),
        "slidevar_sum": joint,
        "slidevar_parts": parts,
    }


def _check_translation_value(rng: np.random.Generator) -> dict | None:
    x = _random_scenarios(rng)
    d = EmpiricalDistribution(x)
    config, _ = _random_config(rng, d)
    a = float(rng.uniform(-20.0, 20.0))
    base = slide_var(d, config)
    shifted = slide_var(EmpiricalDistribution(x + a), config)
    tol = _tol(base, a)
    # An upward shift also nudges the blend weight toward CVaR, so the charge
    # grows by at least a; a downward shift is the mirror image.
    if a >= 0.0 and shifted < base + a - tol:
        ok = False
    elif a <= 0.0 and shifted > base + a + tol:
        ok = False
    else:
        ok = True
    if ok:
        return None
    return {
        "scenarios": [float(v) for v in x],
        "shift": a,
        "config": _describe_config(config),
        "slidevar": base,
        "slidevar_shifted": shifted,
    }


def _check_scaling_value(rng: np.random.Generator) -> dict | None:
    x = _random_scenarios(rng)
    d = EmpiricalDistribution(x)
    config, u = _random_config(rng, d)
    # Anchor the sample so its tail thickness is positive: the scaling
    # comparisons below are one-sided and need a sign on U.
    x = x - u + float(rng.uniform(0.5, 20.0))
    d = EmpiricalDistribution(x)
    if tail_thickness(d, config.phi) < 0.0:
        return None
    base = slide_var(d, config)
    lam_up = float(rng.uniform(1.0, 4.0))
    lam_down = float(rng.uniform(0.0, 1.0))
    up = slide_var(EmpiricalDistribution(x * lam_up), config)
    down = slide_var(EmpiricalDistribution(x * lam_down), config)
    detail = {
        "scenarios": [float(v) for v in x],
        "config": _describe_config(config),
        "slidevar": base,
        "lambda_up": lam_up,
        "lambda_down": lam_down,
        "slidevar_up": up,
        "slidevar_down": down,
    }
    if up < lam_up * base - _tol(up, lam_up * base):
        return {**detail, "reason": "scaling up fell short of homogeneous growth"}
    if down > lam_down * base + _tol(down, lam_down * base):
        return {**detail, "reason": "scaling down overshot homogeneous shrinkage"}
    return None


def _check_region_convex(rng: np.random.Generator) -> dict | None:
    n = int(rng.integers(10, 301))
    x = _random_scenarios(rng, n)
    y = _random_scenarios(rng, n)
    config, _ = _random_config(rng, EmpiricalDistribution(x))
    x = _shift_into_region(rng, x, config)
    y = _shift_into_region(rng, y, config)
    lam = float(rng.uniform(0.0, 1.0))
    blend = EmpiricalDistribution(lam * x + (1.0 - lam) * y)
    mixed = slide_var(blend, config)
    split = lam * slide_var(EmpiricalDistribution(x), config) + (1.0 - lam) * slide_var(
        EmpiricalDistribution(y), config
    )
    if mixed <= split + _tol(mixed, split):
        return None
    return {
        "x": [float(v) for v in x],
        "y": [float(v) for v in y],
        "lambda": lam,
        "config": _describe_config(config),
        "slidevar_blend": mixed,
        "slidevar_split": split,
    }


def _check_region_upward_closed(rng: np.random.Generator) -> dict | None:
    n = int(rng.integers(10, 301))
    x = _random_scenarios(rng, n)
    config, _ = _random_config(rng, EmpiricalDistribution(x))
    x = _shift_into_region(rng, x, config)
    lift = rng.exponential(float(10.0 ** rng.uniform(-2.0, 1.0)), n)
    dominating = EmpiricalDistribution(x + lift)
    if risk_tail_membership(dominating, config):
        return None
    return {
        "x": [float(v) for v in x],
        "lift": [float(v) for v in lift],
        "config": _describe_config(config),
    }


def _norm_grid() -> tuple[tuple[str, float, float], ...]:
    combos = []
    for beta in NORM_GRID_BETAS:
        for gamma in NORM_GRID_GAMMAS:
            combos.append(("exponential", beta, float(gamma)))
            combos.append(("power-convex", beta, float(gamma)))
            combos.append(("power-concave", beta, float(gamma)))
        combos.append(("flat", beta, 0.0))
        combos.append(("step", beta, 0.0))
    return tuple(combos)


def _build_grid_phi(family: str, beta: float, gamma: float) -> AversionFunction:
    if family == "exponential":
        return exponential(beta, gamma)
    if family == "power-convex":
        return power_convex(beta, gamma)
    if family == "power-concave":
        return power_concave(beta, gamma)
    if family == "flat":
        return flat(beta)
    beta1 = beta + (1.0 - beta) / 3.0
    beta2 = beta + 2.0 * (1.0 - beta) / 3.0
    return step(beta, beta1, beta2, (0.5, 0.3, 0.2))


def _run_norm_grid(cases: int, seed: int) -> PropertyOutcome:
    """Unit-norm suite: deterministic grid, ``cases`` and ``seed`` unused."""
    del cases, seed
    combos = _norm_grid()
    failures = 0
    example = None
    for family, beta, gamma in combos:
        norm = _build_grid_phi(family, beta, gamma).norm()
        if abs(norm - 1.0) > 1e-9:
            failures += 1
            if example is None:
                example = {"family": family, "beta": beta, "gamma": gamma, "norm": norm}
    return PropertyOutcome(
        name="P11",
        description=_DESCRIPTIONS["P11"],
        cases=len(combos),
        failures=failures,
        counterexample=example,
    )


def _check_degeneration(rng: np.random.Generator) -> dict | None:
    d = EmpiricalDistribution(_random_scenarios(rng))
    alpha, beta = _random_levels(rng)
    phi = _random_phi(rng, beta)
    always = SlideVaRConfig(alpha, beta, phi, CustomNormalization(lambda u: 1.0, -np.inf))
    never = SlideVaRConfig(alpha, beta, phi, CustomNormalization(lambda u: 0.0, np.inf))
    as_cvar = slide_var(d, always)
    as_var = slide_var(d, never)
    c = cvar(d, alpha)
    v = d.quantile(beta)
    if abs(as_cvar - c) <= DEGENERATION_TOL and abs(as_var - v) <= DEGENERATION_TOL:
        return None
    return {
        "scenarios": [float(x) for x in d.scenarios],
        "alpha": alpha,
        "beta": beta,
        "slidevar_saturated": as_cvar,
        "cvar": c,
        "slidevar_floored": as_var,
        "var": v,
    }


_DESCRIPTIONS = {
    "P1": "the charge lies between VaR at beta and CVaR at alpha",
    "P2": "scenario-wise domination cannot lower the charge",
    "P3": "scenario-wise domination cannot lower the blend weight",
    "P4": "translation moves tail thickness one-for-one and the weight with it",
    "P5": "tail thickness is positively homogeneous; scaling up thick tails keeps the weight",
    "P6": "the charge is sub-additive on the risk tail region",
    "P7": "translation moves the charge by at least the shift (upward) and at most (downward)",
    "P8": "with non-negative tail thickness the charge scales at least (up) / at most (down) homogeneously",
    "P9": "the charge is convex along scenario-wise blends inside the risk tail region",
    "P10": "the risk tail region is upward closed under scenario-wise domination",
    "P11": "every built-in aversion family integrates to one across the level/shape grid",
    "P12": "a saturated weight reproduces CVaR at alpha, a floored weight VaR at beta",
}

_CHECKS: dict[str, Callable[[np.random.Generator], dict | None]] = {
    "P1": _check_bounds,
    "P2": _check_monotonic_value,
    "P3": _check_monotonic_weight,
    "P4": _check_translation_weight,
    "P5": _check_scaling_weight,
    "P6": _check_region_subadditive,
    "P7": _check_translation_value,
    "P8": _check_scaling_value,
    "P9": _check_region_convex,
    "P10": _check_region_upward_closed,
    "P12": _check_degeneration,
}

_ORDER = tuple(f"P{i}" for i in range(1, 13))


def property_names() -> tuple[str, ...]:
    """All property names in display order."""
    return _ORDER


def describe_property(name: str) -> str:
    if name not in _DESCRIPTIONS:
        raise ValidationError(f"unknown property {name!r}")
    return _DESCRIPTIONS[name]


def run_property(name: str, cases: int = 1000, seed: int = 0) -> PropertyOutcome:
    """Run one property over ``cases`` random draws.

    Every property derives its generator from ``(seed, ordinal)``, so the
    full suite is reproducible and each property is independent of how many
    others ran before it.
    """
    if name == "P11":
        return _run_norm_grid(cases, seed)
    if name not in _CHECKS:
        raise ValidationError(f"unknown property {name!r}")
    if cases < 1:
        raise ValidationError(f"property checks need at least one case, got {cases!r}")
    rng = np.random.default_rng((seed, _ORDER.index(name)))
    failures = 0
    example = None
    for case in range(cases):
        detail = _CHECKS[name](rng)
        if detail is not None:
            failures += 1
            if example is None:
                example = {"case": case, **detail}
    return PropertyOutcome(
        name=name,
        description=_DESCRIPTIONS[name],
        cases=cases,
        failures=failures,
        counterexample=example,
    )


def run_all(
    cases: int = 1000,
    seed: int = 0,
    names: tuple[str, ...] | None = None,
) -> tuple[PropertyOutcome, ...]:
    """Run the whole suite (or the ``names`` given) and collect outcomes."""
    return tuple(run_property(name, cases=cases, seed=seed) for name in (names or _ORDER))
