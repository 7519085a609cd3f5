"""
Static SVG charts of command outputs.

Output is byte-stable for identical input: the Agg backend is used, the SVG hash
salt is fixed and the date metadata is dropped.
"""

import logging
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

from enorm.errors import PlotInputError  # noqa: E402
from enorm.services.oscillator import Operator, energy_bracket  # noqa: E402

logger = logging.getLogger(__name__)

plt.rcParams["svg.hashsalt"] = "enorm"
plt.rcParams["svg.fonttype"] = "none"


def _require(frame: pd.DataFrame, columns: set[str], source: str) -> None:
    if frame.empty:
        raise PlotInputError(f"{source} has no rows to plot")
    missing = columns - set(frame.columns)
    if missing:
        raise PlotInputError(f"{source} lacks columns {sorted(missing)}")


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    logger.info("Wrote %s", path)
    return path


def plot_curve(frame: pd.DataFrame, path: Path, source: str = "curve") -> Path:
    """E against ‖A‖_E; position and momentum curves get their known bracket overlaid."""
    _require(frame, {"E", "value"}, source)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(frame["E"], frame["value"], marker="o", markersize=3, label="‖A‖_E")
    if "operator" in frame.columns and "omega" in frame.columns:
        op = str(frame["operator"].iloc[0])
        if op in (Operator.Q.value, Operator.P.value):
            omega = float(frame["omega"].iloc[0])
            energies = np.linspace(float(frame["E"].min()), float(frame["E"].max()), 200)
            brackets = np.array([energy_bracket(op, omega, e) for e in energies])
            ax.plot(energies, brackets[:, 0], linestyle="--", label="lower bracket")
            ax.plot(energies, brackets[:, 1], linestyle=":", label="upper bracket")
    ax.set_xlabel("E")
    ax.set_ylabel("E-norm")
    ax.legend(frameon=False, fontsize=8)
    return _save(fig, path)


def plot_ratios(frame: pd.DataFrame, path: Path, source: str = "ratios") -> Path:
    _require(frame, {"E", "ratio"}, source)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(frame["E"], frame["ratio"], marker="o", markersize=3)
    ax.set_xscale("log")
    ax.set_xlabel("E")
    ax.set_ylabel("‖A‖_E / √E")
    return _save(fig, path)


def plot_frontier(frame: pd.DataFrame, path: Path, source: str = "frontier") -> Path:
    _require(frame, {"a", "b"}, source)
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.scatter(frame["b"], frame["a"], s=14)
    ax.set_xlabel("b")
    ax.set_ylabel("a")
    ax.set_xlim(left=0)
    ax.set_ylim(bottom=0)
    return _save(fig, path)


def plot_y_curve(frame: pd.DataFrame, path: Path, source: str = "energy amplification") -> Path:
    _require(frame, {"E", "Y"}, source)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(frame["E"], frame["Y"], marker="o", markersize=3)
    ax.set_xlabel("E")
    ax.set_ylabel("Y(E)")
    return _save(fig, path)


def plot_table(frame: pd.DataFrame, path: Path, source: str) -> Path:
    """Pick the chart from the columns of ``frame``."""
    columns = set(frame.columns)
    if frame.empty:
        raise PlotInputError(f"{source} has no rows to plot")
    if {"a", "b"} <= columns:
        return plot_frontier(frame, path, source)
    if {"E", "Y"} <= columns:
        return plot_y_curve(frame, path, source)
    if {"E", "ratio"} <= columns:
        return plot_ratios(frame, path, source)
    if {"E", "value"} <= columns:
        return plot_curve(frame, path, source)
    raise PlotInputError(f"{source}: no chart for columns {sorted(columns)}")
