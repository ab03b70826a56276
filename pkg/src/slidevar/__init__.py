"""Market-adaptive tail risk measurement.

The package prices empirical loss distributions with a measure that blends
VaR and CVaR through a tail-thickness signal: calm markets are charged like
VaR at a base level, stressed markets like CVaR at a deeper level, and the
blend weight slides continuously in between.  Everything on the evaluation
path is an exact integral of the empirical step quantile function.
"""

from .aversion import (
    AversionFunction,
    CustomAversion,
    ExponentialAversion,
    FlatAversion,
    PowerConcaveAversion,
    PowerConvexAversion,
    StepAversion,
    custom,
    exponential,
    flat,
    power_concave,
    power_convex,
    step,
)
from .backtest import (
    BacktestReport,
    MeasureSummary,
    MixtureRegime,
    RegimeSeriesSpec,
    SweepRow,
    SweepSpec,
    WindowConfig,
    WindowRecord,
    regime_indices,
    regime_series,
    rolling_backtest,
    run_sweep,
)
from .checks import PropertyOutcome, property_names, run_all, run_property
from .config import RunConfig, default_config, load_config
from .dataio import PriceSeriesFile, Table, ingest, load_prices, read_table, write_table
from .empirical import (
    EmpiricalDistribution,
    GaussianMixtureSpec,
    ScenarioSet,
    combine,
    integrate_quantile,
    quantile,
    sample_mixture,
)
from .errors import (
    AdmissibilityError,
    AlignmentError,
    CapabilityError,
    DomainError,
    InputError,
    ParseError,
    SlideVaRError,
    ValidationError,
)
from .measures import (
    DistortionFunction,
    GlueVaRWeights,
    LambdaFunction,
    LambdaVaRResult,
    cvar,
    distortion,
    gluevar,
    lambda_var,
    spectral,
    var,
)
from .slide import (
    CustomNormalization,
    LinearNormalization,
    NormalizationFunction,
    SlideVaRBreakdown,
    SlideVaRConfig,
    evaluate,
    normalize,
    risk_tail_membership,
    slide_var,
    tail_thickness,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # distributions
    "EmpiricalDistribution",
    "ScenarioSet",
    "GaussianMixtureSpec",
    "quantile",
    "integrate_quantile",
    "combine",
    "sample_mixture",
    # aversion
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
    # measures
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
    # the sliding measure
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
    # backtesting
    "WindowConfig",
    "WindowRecord",
    "MeasureSummary",
    "BacktestReport",
    "SweepSpec",
    "SweepRow",
    "MixtureRegime",
    "RegimeSeriesSpec",
    "rolling_backtest",
    "run_sweep",
    "regime_indices",
    "regime_series",
    # property checks
    "PropertyOutcome",
    "property_names",
    "run_property",
    "run_all",
    # configuration and io
    "RunConfig",
    "load_config",
    "default_config",
    "PriceSeriesFile",
    "Table",
    "ingest",
    "load_prices",
    "read_table",
    "write_table",
    # errors
    "SlideVaRError",
    "DomainError",
    "ValidationError",
    "AdmissibilityError",
    "AlignmentError",
    "CapabilityError",
    "InputError",
    "ParseError",
]
