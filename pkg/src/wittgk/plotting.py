"""Figures for the report subcommands.  Everything renders off-screen to files."""
from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "figure.figsize": (6.0, 4.0),
    "axes.spines.top": False,
    "axes.spines.right": False,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 10,
    "legend.fontsize": 8,
    "savefig.dpi": 120,
}


def _loglog(ax, xs, ys, label, **kw):
    pts = [(x, y) for x, y in zip(xs, ys) if x > 0 and y > 0]
    if pts:
        ax.plot([p[0] for p in pts], [p[1] for p in pts], label=label, **kw)


def _reference_line(ax, xs, anchor_y, exponent, label):
    """Power law ``N^exponent`` passing through the last data point."""
    xs = [x for x in xs if x > 0]
    if not xs or anchor_y <= 0:
        return
    x1 = xs[-1]
    ax.plot(xs, [anchor_y * (x / x1) ** exponent for x in xs], ls="--", lw=0.8, color="0.4", label=label)


def growth_figure(path, grades, cumulative, spanning=None, free=None, bound_exponent=None, title=""):
    """Cumulative quotient dims on log-log axes, with the spanning count and the free algebra for contrast."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        _loglog(ax, grades, cumulative, "quotient (cumulative)", marker="o", ms=3)
        if spanning is not None:
            _loglog(ax, grades, spanning, "normal words", marker="s", ms=3)
        if free is not None:
            _loglog(ax, grades, free, "free (cumulative)", marker="^", ms=3)
        if bound_exponent is not None and spanning:
            _reference_line(ax, grades, spanning[-1], bound_exponent, f"N^{bound_exponent}")
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("N")
        ax.set_ylabel("dimension")
        ax.set_title(title)
        ax.legend()
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)


def sk_figure(path, grades, dims, k, title=""):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.step(grades, dims, where="mid", label="quotient dim")
        cum, total = [], 0
        for d in dims:
            total += d
            cum.append(total)
        ax.plot(grades, cum, marker="o", ms=3, label="cumulative")
        ax.set_xlabel("N")
        ax.set_ylabel("dimension")
        ax.set_title(title or f"S^{k}(W+) quotient")
        ax.legend()
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)


def verma_figure(path, grades, dims, title=""):
    """Graded and cumulative dims on a log scale; log(cum)/sqrt(N) levelling off marks subexponential growth."""
    with plt.rc_context(STYLE):
        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 3.8))
        cum, total = [], 0
        for d in dims:
            total += d
            cum.append(total)
        ax1.semilogy(grades, dims, marker="o", ms=3, label="dim")
        ax1.semilogy(grades, cum, marker="s", ms=3, label="cumulative")
        ax1.set_xlabel("n")
        ax1.legend()
        pos = [(n, c) for n, c in zip(grades, cum) if n > 0]
        ax2.plot([n for n, _ in pos], [math.log(c) / math.sqrt(n) for n, c in pos], marker="o", ms=3)
        ax2.set_xlabel("n")
        ax2.set_ylabel("log(cumulative) / sqrt(n)")
        fig.suptitle(title)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
