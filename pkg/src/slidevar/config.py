"""Run configuration: a YAML file mapped onto typed settings.

Unknown sections and keys are rejected rather than ignored, so a typo in a
config file fails loudly instead of silently running with defaults.  Every
section is optional; an empty file (or no file at all) yields the default
configuration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .aversion import (
    AversionFunction,
    exponential,
    flat,
    power_concave,
    power_convex,
    step,
)
from .backtest import MixtureRegime, RegimeSeriesSpec, SweepSpec, WindowConfig
from .errors import AdmissibilityError, ParseError, ValidationError
from .measures import GlueVaRWeights
from .slide import LinearNormalization, SlideVaRConfig

__all__ = [
    "MeasureSettings",
    "AversionSettings",
    "NormalizationSettings",
    "SweepSettings",
    "RegimeSettings",
    "CheckSettings",
    "OutputSettings",
    "RunConfig",
    "load_config",
    "default_config",
]

TABLE_FORMATS = ("csv", "json-lines")


@dataclass(frozen=True)
class MeasureSettings:
    alpha: float = 0.99
    beta: float = 0.95


@dataclass(frozen=True)
class AversionSettings:
    family: str = "exponential"
    gamma: float = 0.2
    levels: tuple[float, float] | None = None
    weights: tuple[float, float, float] | None = None


@dataclass(frozen=True)
class NormalizationSettings:
    a: float = 20.0
    b: float = 40.0


@dataclass(frozen=True)
class SweepSettings:
    samples: int = 100_000
    sigma1_values: tuple[float, ...] = (10.0, 15.0, 20.0, 25.0)
    mu1_values: tuple[float, ...] = (-5.0, 10.0, 20.0, 30.0)
    mu1: float = 0.0
    sigma1: float = 10.0
    mu2: float = 0.0
    sigma2: float = 5.0


@dataclass(frozen=True)
class RegimeSettings:
    length: int
    switch_points: tuple[int, ...]
    schedule: tuple[int, ...]
    regimes: tuple[MixtureRegime, ...]


@dataclass(frozen=True)
class CheckSettings:
    cases: int = 1000
    seed: int | None = None


@dataclass(frozen=True)
class OutputSettings:
    directory: str = "out"
    format: str = "csv"


@dataclass(frozen=True)
class RunConfig:
    """The full configuration of a run, assembled from YAML and defaults."""

    seed: int | None = None
    measure: MeasureSettings = field(default_factory=MeasureSettings)
    aversion: AversionSettings = field(default_factory=AversionSettings)
    normalization: NormalizationSettings = field(default_factory=NormalizationSettings)
    gluevar_weights: tuple[float, float, float] = (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)
    window: WindowConfig = field(default_factory=WindowConfig)
    sweep: SweepSettings = field(default_factory=SweepSettings)
    regime: RegimeSettings | None = None
    check: CheckSettings = field(default_factory=CheckSettings)
    output: OutputSettings = field(default_factory=OutputSettings)

    def build_aversion(self) -> AversionFunction:
        """Instantiate the configured aversion family at the measure's beta."""
        beta = self.measure.beta
        settings = self.aversion
        if settings.family == "exponential":
            return exponential(beta, settings.gamma)
        if settings.family == "power-convex":
            return power_convex(beta, settings.gamma)
        if settings.family == "power-concave":
            return power_concave(beta, settings.gamma)
        if settings.family == "flat":
            return flat(beta)
        if settings.family == "step":
            if settings.levels is None or settings.weights is None:
                raise ValidationError("step aversion needs 'levels' and 'weights' in the config")
            return step(beta, settings.levels[0], settings.levels[1], settings.weights)
        raise ValidationError(f"unknown aversion family {settings.family!r}")

    def slide_config(self) -> SlideVaRConfig:
        return SlideVaRConfig(
            alpha=self.measure.alpha,
            beta=self.measure.beta,
            phi=self.build_aversion(),
            normalization=LinearNormalization(self.normalization.a, self.normalization.b),
        )

    def gluevar(self) -> GlueVaRWeights:
        return GlueVaRWeights(*self.gluevar_weights)

    def sweep_specs(self, seed: int) -> tuple[SweepSpec, ...]:
        """One spec per non-empty sweep axis, with disjoint child seeds."""
        specs = []
        axes = (("sigma1", self.sweep.sigma1_values), ("mu1", self.sweep.mu1_values))
        for k, (parameter, values) in enumerate(axes):
            if values:
                specs.append(
                    SweepSpec(
                        parameter=parameter,
                        values=values,
                        samples=self.sweep.samples,
                        seed=(seed, k),
                        mu1=self.sweep.mu1,
                        sigma1=self.sweep.sigma1,
                        mu2=self.sweep.mu2,
                        sigma2=self.sweep.sigma2,
                    )
                )
        return tuple(specs)

    def regime_spec(self) -> RegimeSeriesSpec:
        if self.regime is None:
            raise ValidationError("the configuration has no regime section")
        return RegimeSeriesSpec(
            regimes=self.regime.regimes,
            switch_points=self.regime.switch_points,
            schedule=self.regime.schedule,
        )


def default_config() -> RunConfig:
    return RunConfig()


class _Section:
    """One mapping of a YAML document, with typed, checked key access."""

    def __init__(self, name: str, data: dict):
        self.name = name
        self.data = dict(data)

    def _pop(self, key, default):
        return self.data.pop(key, default)

    def number(self, key: str, default: float) -> float:
        value = self._pop(key, default)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ParseError(f"{self.name}.{key} must be a number, got {value!r}")
        return float(value)

    def integer(self, key: str, default: int | None) -> int | None:
        value = self._pop(key, default)
        if value is None:
            return None
        if isinstance(value, bool) or not isinstance(value, int):
            raise ParseError(f"{self.name}.{key} must be an integer, got {value!r}")
        return int(value)

    def integer_or(self, key: str, default: int) -> int:
        value = self.integer(key, default)
        return default if value is None else value

    def text(self, key: str, default: str) -> str:
        value = self._pop(key, default)
        if not isinstance(value, str):
            raise ParseError(f"{self.name}.{key} must be a string, got {value!r}")
        return value

    def numbers(self, key: str, default: tuple | None, length: int | None = None) -> tuple | None:
        value = self._pop(key, default)
        if value is None or value == default:
            return default
        if not isinstance(value, (list, tuple)):
            raise ParseError(f"{self.name}.{key} must be a list of numbers, got {value!r}")
        out = []
        for entry in value:
            if isinstance(entry, bool) or not isinstance(entry, (int, float)):
                raise ParseError(f"{self.name}.{key} must contain numbers, got {entry!r}")
            out.append(float(entry))
        if length is not None and len(out) != length:
            raise ParseError(f"{self.name}.{key} must have {length} entries, got {len(out)}")
        return tuple(out)

    def integers(self, key: str, default: tuple) -> tuple:
        values = self.numbers(key, default)
        assert values is not None
        out = []
        for v in values:
            if float(v) != int(v):
                raise ParseError(f"{self.name}.{key} must contain integers, got {v!r}")
            out.append(int(v))
        return tuple(out)

    def finish(self) -> None:
        if self.data:
            unknown = ", ".join(sorted(map(str, self.data)))
            raise ParseError(f"unknown key(s) in config section '{self.name}': {unknown}")


def _section(document: dict, name: str) -> _Section:
    raw = document.pop(name, {}) or {}
    if not isinstance(raw, dict):
        raise ParseError(f"config section '{name}' must be a mapping, got {raw!r}")
    return _Section(name, raw)


def _parse_regime(document: dict) -> RegimeSettings | None:
    raw = document.pop("regime", None)
    if raw is None:
        return None
    if not isinstance(raw, dict):
        raise ParseError(f"config section 'regime' must be a mapping, got {raw!r}")
    section = _Section("regime", raw)
    length = section.integer("length", None)
    if length is None:
        raise ParseError("regime.length is required")
    switch_points = section.integers("switch_points", ())
    schedule = section.integers("schedule", (0,))
    raw_regimes = section._pop("regimes", None)
    if not isinstance(raw_regimes, list) or not raw_regimes:
        raise ParseError("regime.regimes must be a non-empty list of mappings")
    regimes = []
    for i, entry in enumerate(raw_regimes):
        if not isinstance(entry, dict):
            raise ParseError(f"regime.regimes[{i}] must be a mapping, got {entry!r}")
        sub = _Section(f"regime.regimes[{i}]", entry)
        regimes.append(
            MixtureRegime(
                mu1=sub.number("mu1", 0.0),
                sigma1=sub.number("sigma1", 1.0),
                mu2=sub.number("mu2", 0.0),
                sigma2=sub.number("sigma2", 1.0),
            )
        )
        sub.finish()
    section.finish()
    return RegimeSettings(
        length=length,
        switch_points=switch_points,
        schedule=schedule,
        regimes=tuple(regimes),
    )


def load_config(path: Path | str) -> RunConfig:
    """Load a YAML run configuration, validating sections, keys and types."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        document = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ParseError(f"{path}: invalid YAML: {exc}") from None
    if document is None:
        document = {}
    if not isinstance(document, dict):
        raise ParseError(f"{path}: the config must be a mapping of sections")

    top = _Section("<top>", {"seed": document.pop("seed", None)})
    seed = top.integer("seed", None)

    measure_s = _section(document, "measure")
    measure = MeasureSettings(
        alpha=measure_s.number("alpha", 0.99),
        beta=measure_s.number("beta", 0.95),
    )
    measure_s.finish()

    aversion_s = _section(document, "aversion")
    aversion = AversionSettings(
        family=aversion_s.text("family", "exponential"),
        gamma=aversion_s.number("gamma", 0.2),
        levels=aversion_s.numbers("levels", None, length=2),
        weights=aversion_s.numbers("weights", None, length=3),
    )
    aversion_s.finish()

    normalization_s = _section(document, "normalization")
    normalization = NormalizationSettings(
        a=normalization_s.number("a", 20.0),
        b=normalization_s.number("b", 40.0),
    )
    normalization_s.finish()

    gluevar_s = _section(document, "gluevar")
    gluevar_weights = gluevar_s.numbers(
        "weights", (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0), length=3
    )
    gluevar_s.finish()

    window_s = _section(document, "window")
    try:
        window = WindowConfig(
            width=window_s.integer_or("width", 250),
            step=window_s.integer_or("step", 1),
        )
    except ValidationError as exc:
        raise ParseError(f"{path}: {exc}") from None
    window_s.finish()

    sweep_s = _section(document, "sweep")
    sweep = SweepSettings(
        samples=sweep_s.integer_or("samples", 100_000),
        sigma1_values=sweep_s.numbers("sigma1_values", (10.0, 15.0, 20.0, 25.0)) or (),
        mu1_values=sweep_s.numbers("mu1_values", (-5.0, 10.0, 20.0, 30.0)) or (),
        mu1=sweep_s.number("mu1", 0.0),
        sigma1=sweep_s.number("sigma1", 10.0),
        mu2=sweep_s.number("mu2", 0.0),
        sigma2=sweep_s.number("sigma2", 5.0),
    )
    sweep_s.finish()

    regime = _parse_regime(document)

    check_s = _section(document, "check")
    check = CheckSettings(
        cases=check_s.integer_or("cases", 1000),
        seed=check_s.integer("seed", None),
    )
    check_s.finish()

    output_s = _section(document, "output")
    output = OutputSettings(
        directory=output_s.text("directory", "out"),
        format=output_s.text("format", "csv"),
    )
    output_s.finish()
    if output.format not in TABLE_FORMATS:
        raise ParseError(
            f"output.format must be one of {', '.join(TABLE_FORMATS)}, got {output.format!r}"
        )

    if document:
        unknown = ", ".join(sorted(map(str, document)))
        raise ParseError(f"unknown config section(s): {unknown}")

    assert gluevar_weights is not None
    config = RunConfig(
        seed=seed,
        measure=measure,
        aversion=aversion,
        normalization=normalization,
        gluevar_weights=gluevar_weights,
        window=window,
        sweep=sweep,
        regime=regime,
        check=check,
        output=output,
    )
    # Fail at load time, with the file named, rather than deep inside a run.
    try:
        config.slide_config()
        config.gluevar()
        if config.regime is not None:
            config.regime_spec()
    except (ValidationError, AdmissibilityError) as exc:
        raise ParseError(f"{path}: {exc}") from None
    return config
