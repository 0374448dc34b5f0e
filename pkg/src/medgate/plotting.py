"""Figure rendering for sweep output: one PNG next to each CSV.

Report-path plotting only; the CSV remains the canonical record and the
CLI accepts --no-plot to skip this module entirely.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _col(rows, columns, name):
    k = columns.index(name)
    return np.array([r[k] for r in rows])


def _heatmap(ax, x, y, z, xlabel, ylabel, title):
    xs, ys = np.unique(x), np.unique(y)
    grid = np.full((len(ys), len(xs)), np.nan)
    xi = np.searchsorted(xs, x)
    yi = np.searchsorted(ys, y)
    grid[yi, xi] = z
    mesh = ax.pcolormesh(xs, ys, grid, shading="nearest", cmap="viridis")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    return mesh


def render(mode, columns, rows, summary, path):
    fig, ax = plt.subplots(figsize=(7.0, 5.2))
    if mode == "dynamic-map":
        valid = _col(rows, columns, "valid").astype(bool)
        m = _heatmap(ax, _col(rows, columns, "j1p")[valid],
                     _col(rows, columns, "j2p")[valid],
                     _col(rows, columns, "eU")[valid],
                     "J1'", "J2'", "pulsed gate entangling power")
        fig.colorbar(m, ax=ax, label="e(U)")
    elif mode == "adiabatic-map":
        valid = _col(rows, columns, "valid").astype(bool)
        eu = _col(rows, columns, "eU")
        eu[~valid] = np.nan  # leakage patches stay blank
        m = _heatmap(ax, _col(rows, columns, "j1"), _col(rows, columns, "j2"),
                     eu, "J1 (1/ps)", "J2 (1/ps)",
                     "adiabatic gate entangling power")
        fig.colorbar(m, ax=ax, label="e(U)")
    elif mode == "spectrum":
        ratios = _col(rows, columns, "ratio")
        energy = _col(rows, columns, "energy")
        branch = _col(rows, columns, "branch").astype(int)
        for b in np.unique(branch):
            sel = branch == b
            ax.plot(ratios[sel], energy[sel], lw=0.9)
        ax.set_xlabel("Delta / Omega")
        ax.set_ylabel("energy (1/ps)")
        ax.set_title("instantaneous eigenspectrum")
    elif mode == "cphase-scan":
        taus = _col(rows, columns, "tau")
        ax.plot(taus, _col(rows, columns, "phi"), "o-", label="phi (wrapped)")
        ax.axhline(np.pi, color="gray", lw=0.8, ls="--")
        ax.axhline(-np.pi, color="gray", lw=0.8, ls="--")
        if summary.get("found"):
            ax.axvline(summary["tau_star"], color="crimson", lw=1.0,
                       label=f"tau* = {summary['tau_star']:.1f} ps")
        ax.set_xlabel("tau (ps)")
        ax.set_ylabel("controlled phase (rad)")
        ax.set_title("CPHASE phase vs pulse duration")
        ax.legend(loc="best")
    elif mode == "decoherence":
        gate = _col(rows, columns, "gate")
        inp = _col(rows, columns, "input")
        g0 = _col(rows, columns, "gamma0_ns")
        for name, color in (("dynamic", "tab:blue"), ("adiabatic", "tab:orange")):
            sel = (gate == name) & (inp == "avg")
            if not sel.any():
                continue
            ax.plot(g0[sel], _col(rows, columns, "purity")[sel], "o-",
                    color=color, label=f"{name} purity")
            ax.plot(g0[sel], _col(rows, columns, "population")[sel], "s--",
                    color=color, label=f"{name} population")
        ax.set_xlabel("decay rate (1/ns)")
        ax.set_ylabel("figure of merit")
        ax.set_title("decoherence of the two gate schemes")
        ax.legend(loc="best", fontsize=9)
    elif mode == "interference":
        t = _col(rows, columns, "t")
        ax.plot(t, _col(rows, columns, "pop_100g"), label="|100>|g>")
        ax.plot(t, _col(rows, columns, "pop_001g"), label="|001>|g>")
        ax.plot(t, _col(rows, columns, "pop_other"), lw=0.8, label="other")
        ax.set_xlabel("t (ps)")
        ax.set_ylabel("population")
        ax.set_title("single-excitation interference during the pulse")
        ax.legend(loc="best")
    else:
        plt.close(fig)
        raise ValueError(f"no renderer for mode {mode!r}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
