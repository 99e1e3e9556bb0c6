"""Figure rendering for trajectories, analytic solutions and the atlas.

Everything is written straight to image files through the Agg backend;
there is no interactive mode.  These helpers back the CLI's ``--plot``
option and are equally usable from notebooks.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_FIGSIZE = (9.6, 4.2)
_DPI = 150


def _finish(fig, path: str) -> str:
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def save_trajectory_figure(times, states, path: str, events=(), title: str = "") -> str:
    """Positions over time plus the two phase-plane loops; collision events
    are marked with vertical lines."""
    q3 = [s.q3 for s in states]
    q4 = [s.q4 for s in states]
    p3 = [s.p3 for s in states]
    p4 = [s.p4 for s in states]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=_FIGSIZE)
    ax1.plot(times, q3, lw=1.0, label="$q_3$")
    ax1.plot(times, q4, lw=1.0, label="$q_4$")
    for ev in events:
        if ev.kind == "collision":
            ax1.axvline(ev.t, color="0.6", lw=0.6, ls=":")
    ax1.set_xlabel("$t$")
    ax1.set_ylabel("position")
    ax1.legend(loc="upper right", fontsize=8)
    if title:
        ax1.set_title(title, fontsize=9)
    ax2.plot(q3, p3, lw=0.8, label="body 3")
    ax2.plot(q4, p4, lw=0.8, label="body 4")
    ax2.set_xlabel("$q$")
    ax2.set_ylabel("$p$")
    ax2.legend(loc="upper right", fontsize=8)
    return _finish(fig, path)


def save_regularized_figure(reg, path: str, title: str = "") -> str:
    """Regularized run diagnostics: Q3 and the physical clock against
    fictitious time, and the energy-level residual |L|."""
    q3 = [s.Q3 for s in reg.states]
    fig, (ax1, ax2, ax3) = plt.subplots(1, 3, figsize=(12.0, 3.6))
    ax1.plot(reg.taus, q3, lw=1.0)
    ax1.axhline(0.0, color="0.6", lw=0.6, ls=":")
    ax1.set_xlabel(r"$\tau$")
    ax1.set_ylabel("$Q_3$")
    if title:
        ax1.set_title(title, fontsize=9)
    ax2.plot(reg.taus, reg.times, lw=1.0)
    ax2.set_xlabel(r"$\tau$")
    ax2.set_ylabel("$t$")
    ax3.semilogy(reg.taus, reg.level_values() + 1e-300, lw=0.8)
    ax3.set_xlabel(r"$\tau$")
    ax3.set_ylabel("$|L|$")
    return _finish(fig, path)


def save_atlas_figure(surfaces, path: str, title: str = "") -> str:
    """Resonant energies: h* rug over (-4, 0) and h* against the period
    multiple p."""
    h_stars = [s.h_star for s in surfaces]
    ps = [s.triple.p for s in surfaces]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=_FIGSIZE)
    ax1.eventplot(h_stars, orientation="horizontal", colors="k", lineoffsets=0.0, linelengths=0.9, lw=0.4)
    ax1.set_xlim(-4.0, 0.0)
    ax1.set_yticks([])
    ax1.set_xlabel("$h_*$")
    if title:
        ax1.set_title(title, fontsize=9)
    ax2.plot(h_stars, ps, ".", ms=2.5)
    ax2.set_xlabel("$h_*$")
    ax2.set_ylabel("$p$")
    return _finish(fig, path)
