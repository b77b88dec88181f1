"""
Static SVG figures of temperature sweeps.

One field is drawn dashed, two fields solid.  Output is deterministic
(fixed SVG hash salt, no timestamp) so repeated runs give identical files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


__all__ = ["LINESTYLES", "plot_sweep", "plot_comparison", "comparison_temperatures"]

LINESTYLES = {"single": "--", "double": "-"}
_MODE_LABEL = {"single": "one field, dashed", "double": "two fields, solid"}
_SVG_META = {"Date": None, "Creator": "dressed_rf"}


def _save(fig, path: Path, title: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with matplotlib.rc_context({"svg.hashsalt": "dressed_rf", "svg.fonttype": "none"}):
        fig.savefig(path, format="svg", metadata={**_SVG_META, "Title": title})
    plt.close(fig)
    return path


def plot_sweep(spectra: dict, model: str, path) -> Path:
    """Overlay all temperatures of one model.

    ``spectra`` maps ``(mode, temperature) -> Spectrum``.
    """
    temps = sorted({t for _, t in spectra})
    cmap = plt.get_cmap("viridis")
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for (mode, t), spec in sorted(spectra.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        k = temps.index(t) / max(1, len(temps) - 1)
        ax.plot(spec.detunings, spec.values, LINESTYLES[mode], color=cmap(0.9 * k), lw=1.0,
                label=f"{t:g} K, {_MODE_LABEL[mode]}")
    ax.set_xlabel(r"detuning $\omega-\omega_L$ (rad/ns)")
    ax.set_ylabel("normalised intensity")
    ax.set_title(f"{model} damping")
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    return _save(fig, Path(path), f"sweep {model}")


def comparison_temperatures(temps) -> list[float]:
    """15 K and 60 K when swept, else the coldest and hottest."""
    temps = sorted(set(temps))
    chosen = [t for t in (15.0, 60.0) if t in temps]
    if len(chosen) < 2:
        chosen = sorted({temps[0], temps[-1]})
    return chosen


def plot_comparison(spectra: dict, path) -> Path:
    """One panel per comparison temperature, all models overlaid.

    ``spectra`` maps ``(model, mode, temperature) -> Spectrum``.
    """
    temps = comparison_temperatures([t for _, _, t in spectra])
    models = sorted({m for m, _, _ in spectra})
    colors = dict(zip(models, plt.get_cmap("tab10").colors))
    fig, axes = plt.subplots(len(temps), 1, figsize=(7, 3.2 * len(temps)), squeeze=False)
    for ax, t in zip(axes[:, 0], temps):
        for (model, mode, tt), spec in sorted(spectra.items()):
            if tt != t:
                continue
            ax.plot(spec.detunings, spec.values, LINESTYLES[mode], color=colors[model], lw=1.0,
                    label=f"{model}, {_MODE_LABEL[mode]}")
        ax.set_title(f"T = {t:g} K", fontsize=9)
        ax.set_ylabel("intensity")
        ax.legend(fontsize=7)
    axes[-1, 0].set_xlabel(r"detuning $\omega-\omega_L$ (rad/ns)")
    fig.tight_layout()
    return _save(fig, Path(path), "model comparison")
