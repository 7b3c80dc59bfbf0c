"""Static phase-plane figures: a sampled trajectory over both environments' isoclines."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .envmodel import EnvironmentPair  # noqa: E402

_COLORS = ("tab:blue", "tab:red")


def phase_plot_svg(pair: EnvironmentPair, x, y, regime, path, extent: float | None = None) -> None:
    """Write an SVG with the path coloured by regime and the nullclines of each environment.

    The x-nullcline of environment i is ``a_i x + b_i y = 1`` (solid), the
    y-nullcline ``c_i x + d_i y = 1`` (dashed).
    """
    x, y, regime = np.asarray(x), np.asarray(y), np.asarray(regime)
    if extent is None:
        extent = 1.1 * max(max(e.p, 1 / e.b, 1 / e.c, e.p_hat) for e in (pair.env0, pair.env1))
    fig, ax = plt.subplots(figsize=(5, 5))
    xs = np.linspace(0.0, extent, 2)
    for i, env in enumerate((pair.env0, pair.env1)):
        ax.plot(xs, (1 - env.a * xs) / env.b, color=_COLORS[i], lw=1, label=f"E{i} isoclines")
        ax.plot(xs, (1 - env.c * xs) / env.d, color=_COLORS[i], lw=1, ls="--")
    for i in (0, 1):
        m = regime == i
        ax.plot(x[m], y[m], ".", ms=1, color=_COLORS[i], alpha=0.5)
    ax.set_xlim(0, extent)
    ax.set_ylim(0, extent)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.legend(loc="upper right", fontsize="small")
    plt.rcParams["svg.hashsalt"] = "lvswitch"
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
