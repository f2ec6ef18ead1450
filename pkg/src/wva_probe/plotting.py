"""Minimal SVG renderers over the CSV data (matplotlib, imported lazily)."""

import numpy as np


def _plt():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "wva-probe"
    return plt


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None})
    fig.clf()


def heatmap_svg(path, x, y, z, xlabel, ylabel, zlabel):
    plt = _plt()
    fig, ax = plt.subplots(figsize=(6, 4.5))
    m = ax.pcolormesh(x, y, z, shading="nearest", cmap="viridis")
    ax.set_xscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    fig.colorbar(m, ax=ax, label=zlabel)
    _save(fig, path)


def fig1c_svg(path, grid, rows):
    plt = _plt()
    ok = [r for r in rows if r.spectrum is not None]
    deltas = np.array([r.delta for r in ok])
    dens = np.array([r.spectrum.density for r in ok])
    fig, ax = plt.subplots(figsize=(5, 6))
    ax.pcolormesh(grid.nodes, np.arange(len(ok)), dens, shading="nearest", cmap="magma")
    idx = np.arange(len(ok))
    ax.plot([r.mean_shift for r in ok], idx, "w--", lw=1, label="mean shift")
    fo = np.array([r.firstorder_shift for r in ok])
    keep = np.abs(fo) < grid.nodes[-1]
    ax.plot(fo[keep], idx[keep], "w:", lw=1, label="delta_e / 2 delta")
    ticks = idx[:: max(1, len(idx) // 8)]
    ax.set_yticks(ticks, [f"{deltas[i]:.3g}" for i in ticks])
    ax.set_xlim(grid.nodes[0], grid.nodes[-1])
    ax.set_xlabel("energy - e0")
    ax.set_ylabel("delta")
    ax.legend(loc="lower right", fontsize=7)
    _save(fig, path)


def fig3_svg(path, rows, deltas, inset):
    plt = _plt()
    fig, ax = plt.subplots(figsize=(6, 4.5))
    r = [row.rate for row in rows]
    ax.loglog(r, [row.snr_no_noise for row in rows], "g--", label="no slow noise")
    ax.loglog(r, [row.snr_conventional for row in rows], "b-", label="conventional")
    ax.loglog(r, [row.snr_wva for row in rows], "r-.", label="WVA")
    ax.set_xlabel("pump rate (1/T1)")
    ax.set_ylabel("SNR")
    ax.legend(loc="upper left", fontsize=8)
    sub = fig.add_axes([0.6, 0.2, 0.28, 0.25])
    sub.semilogx(deltas, inset, "r-")
    sub.set_xlabel("delta", fontsize=7)
    _save(fig, path)


def fig4_svg(path, deltas, gammas, shift, opt, inset):
    plt = _plt()
    fig, ax = plt.subplots(figsize=(6, 4.5))
    m = ax.pcolormesh(deltas, gammas, shift, shading="nearest", cmap="viridis")
    ax.plot([o.delta_opt for o in opt], [o.gamma_noise for o in opt], "w:", lw=1.5)
    ax.set_xscale("log")
    ax.set_xlabel("delta")
    ax.set_ylabel("gamma_noise")
    fig.colorbar(m, ax=ax, label="mean shift")
    sub = fig.add_axes([0.45, 0.55, 0.2, 0.25])
    rows = np.array(inset)
    for de in np.unique(rows[:, 0]):
        sel = rows[:, 0] == de
        sub.plot(rows[sel, 1], rows[sel, 2], label=f"{de:g}")
    sub.tick_params(labelsize=6)
    sub.legend(fontsize=5)
    _save(fig, path)
