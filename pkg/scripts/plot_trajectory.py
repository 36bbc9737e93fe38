"""Plot trajectory CSVs written by ``lyapdrive run`` / ``ring`` or the experiment scripts.

    python scripts/plot_trajectory.py run.csv [more.csv ...] [--overlay] [--save DIR]

Per file: the path in the plane, x / y / theta against time, and v / omega
against time. With --overlay all paths go into one figure (ring experiments).
"""
import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from lyapdrive.report import read_trajectory_csv  # noqa: E402


def path_axes(ax, cols, label=None):
    ax.plot(cols["x"], cols["y"], lw=1.2, label=label)
    ax.plot(cols["x"][0], cols["y"][0], "o", ms=4, color="tab:green")
    ax.plot(0, 0, "x", color="k")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.set_aspect("equal", adjustable="datalim")
    ax.grid(alpha=0.3)


def state_panel(cols, title):
    fig, axes = plt.subplots(3, 1, sharex=True, figsize=(7, 6))
    for ax, key, unit in zip(axes, ("x", "y", "theta"), ("m", "m", "rad")):
        ax.plot(cols["t"], cols[key], lw=1)
        ax.set_ylabel(f"{key} [{unit}]")
        ax.grid(alpha=0.3)
    axes[-1].set_xlabel("t [s]")
    axes[0].set_title(title)
    return fig


def input_panel(cols, title):
    fig, axes = plt.subplots(2, 1, sharex=True, figsize=(7, 4.5))
    axes[0].plot(cols["t"], cols["v"], lw=1)
    axes[0].set_ylabel("v [m/s]")
    axes[1].plot(cols["t"], cols["omega"], lw=1)
    axes[1].set_ylabel("omega [rad/s]")
    axes[1].set_xlabel("t [s]")
    for ax in axes:
        ax.grid(alpha=0.3)
    axes[0].set_title(title)
    return fig


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("csv", nargs="+")
    ap.add_argument("--overlay", action="store_true", help="all paths in one figure")
    ap.add_argument("--save", default=None, help="output directory (default: next to each CSV)")
    args = ap.parse_args()

    runs = [(Path(p), read_trajectory_csv(p)) for p in args.csv]
    if args.overlay:
        fig, ax = plt.subplots(figsize=(6, 6))
        for path, cols in runs:
            path_axes(ax, cols, label=path.stem)
        ax.legend(fontsize=7)
        dest = Path(args.save or runs[0][0].parent) / "paths.png"
        dest.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(dest, dpi=150, bbox_inches="tight")
        print(dest)

    for path, cols in runs:
        outdir = Path(args.save or path.parent)
        outdir.mkdir(parents=True, exist_ok=True)
        figs = {"states": state_panel(cols, path.stem), "inputs": input_panel(cols, path.stem)}
        if not args.overlay:
            fig, ax = plt.subplots(figsize=(6, 6))
            path_axes(ax, cols)
            ax.set_title(path.stem)
            figs["path"] = fig
        for kind, fig in figs.items():
            dest = outdir / f"{path.stem}_{kind}.png"
            fig.savefig(dest, dpi=150, bbox_inches="tight")
            plt.close(fig)
            print(dest)


if __name__ == "__main__":
    main()
