"""Static figures rendered next to the CSV outputs."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "font.size": 10,
    "axes.labelsize": 11,
    "legend.fontsize": 9,
    "legend.frameon": False,
    "lines.linewidth": 1.4,
    "savefig.dpi": 150,
}


def _figure(width=5.0, height=3.6):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(width, height))
    return fig, ax


def _save(fig, path):
    with plt.rc_context(STYLE):
        fig.tight_layout()
        fig.savefig(path)
    plt.close(fig)


def plot_levels(p, energies, path, title=None):
    fig, ax = _figure()
    for n, e in enumerate(np.atleast_2d(energies)):
        ax.plot(p, e, label=f"$E_{n}$")
    ax.set_xlabel("$p$")
    ax.set_ylabel("energy")
    if title:
        ax.set_title(title)
    ax.legend()
    _save(fig, path)


def plot_wavefunctions(q, psi, path, title=None):
    fig, ax = _figure()
    styles = ["-", "--", "-.", ":"]
    for n, y in enumerate(np.atleast_2d(psi)):
        ax.plot(q, y, styles[n % 4], color="k", label=rf"$\psi_{n}$")
    ax.axhline(0.0, color="0.7", lw=0.6)
    ax.set_xlabel("$q$")
    ax.set_ylabel(r"$\psi_n(q)$")
    if title:
        ax.set_title(title)
    ax.legend()
    _save(fig, path)


def plot_response(p, e0, quadratic, tanh_model, path):
    fig, ax = _figure()
    ax.plot(p, e0, "k-", label="numerical")
    ax.plot(p, quadratic, "k--", label="second order")
    step = max(1, len(p) // 25)
    ax.plot(p[::step], tanh_model[::step], "ko", ms=3, label="tanh model")
    ax.set_xlabel("$p$")
    ax.set_ylabel("$E_0$")
    ax.set_ylim(min(e0.min(), tanh_model.min()) - 0.05, e0.max() + 0.05)
    ax.legend()
    _save(fig, path)


def plot_repulsion(p, e_lo, e_hi, model_lo, model_hi, path):
    fig, ax = _figure()
    ax.plot(p, e_lo, "k-", label="numerical")
    ax.plot(p, e_hi, "k-")
    ax.plot(p, model_lo, "k--", label="local quadratic")
    ax.plot(p, model_hi, "k--")
    ax.set_xlabel("$p$")
    ax.set_ylabel("energy")
    ax.legend()
    _save(fig, path)
