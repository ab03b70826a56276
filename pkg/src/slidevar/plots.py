"""Figure rendering for the report commands.

The delimited tables are the canonical output; the PNGs rendered here are a
convenience view of the same numbers, written alongside them.  The Agg
backend is forced so rendering works headless and produces identical bytes
for identical inputs.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .backtest import BacktestReport, SweepRow
from .slide import SlideVaRConfig

__all__ = ["save_sweep_figure", "save_backtest_figure"]

#: Display colour and base label of each measure column.
_STYLE = {
    "var_beta": ("tab:green", "VaR"),
    "cvar_alpha": ("tab:red", "CVaR"),
    "gluevar": ("tab:orange", "GlueVaR"),
    "slidevar": ("tab:blue", "SlideVaR"),
}

_DPI = 110


def _measure_labels(config: SlideVaRConfig) -> dict[str, str]:
    return {
        "var_beta": f"VaR {config.beta:g}",
        "cvar_alpha": f"CVaR {config.alpha:g}",
        "gluevar": "GlueVaR",
        "slidevar": "SlideVaR",
    }


def save_sweep_figure(
    rows: Sequence[SweepRow],
    config: SlideVaRConfig,
    path: Path | str,
) -> Path:
    """One panel per swept value: loss histogram with the measure levels."""
    path = Path(path)
    labels = _measure_labels(config)
    count = len(rows)
    fig, axes = plt.subplots(1, count, figsize=(3.6 * count, 3.2), squeeze=False)
    for ax, row in zip(axes[0], rows):
        ax.hist(row.distribution.scenarios, bins=80, density=True, color="0.82")
        for measure, (color, _) in _STYLE.items():
            ax.axvline(getattr(row, measure), color=color, lw=1.4, label=labels[measure])
        ax.set_title(f"{row.parameter} = {row.value:g}", fontsize=10)
        ax.set_xlabel("loss")
    axes[0][0].set_ylabel("density")
    axes[0][-1].legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def save_backtest_figure(
    report: BacktestReport,
    config: SlideVaRConfig,
    path: Path | str,
) -> Path:
    """Rolling charges against realized losses, with the blend weight below."""
    path = Path(path)
    labels = _measure_labels(config)
    index = np.array([r.index for r in report.records])
    fig, (top, bottom) = plt.subplots(
        2, 1, figsize=(9.0, 5.4), sharex=True, height_ratios=(3, 1)
    )
    top.plot(
        index,
        [r.realized for r in report.records],
        color="0.6",
        lw=0.6,
        label="realized loss",
    )
    for measure, (color, _) in _STYLE.items():
        top.plot(
            index,
            [r.charge(measure) for r in report.records],
            color=color,
            lw=1.1,
            label=labels[measure],
        )
    top.set_ylabel("loss / charge")
    top.legend(loc="upper left", fontsize=8, ncol=2)
    bottom.plot(index, [r.weight for r in report.records], color="tab:blue", lw=1.0)
    bottom.set_ylim(-0.05, 1.05)
    bottom.set_ylabel("weight")
    bottom.set_xlabel("observation")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path
