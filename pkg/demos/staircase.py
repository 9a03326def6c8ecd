"""Bound-state staircase and eigenvalue trajectories in the coupling.

Sweeping gamma from 0 to 13 the number of bound states jumps by +1 at
every threshold gamma_k, where a new state detaches from the upper
continuum edge E = +1, and by -1 at every threshold Gamma_j, where the
lowest-winding state dives into the lower edge E = -1.  The script draws
the integer staircase together with the E_N(gamma) trajectories that
produce it, and prints the jump table.  Outputs: a two-panel figure and
a CSV of the eigenvalue curves.
"""

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from dirac1d import build_root_tables, find_eigenvalue, interval_indices, staircase

GAMMA_MAX = 13.0
CURVE_POINTS = 53
CURVE_TOL = 1e-6
OUT_DIR = Path(__file__).resolve().parent / "output"


def main() -> None:
    OUT_DIR.mkdir(exist_ok=True)
    tables = build_root_tables(8)
    rows = staircase(0.05, GAMMA_MAX, 520, tables)

    jumps = [
        (g2, n2 - n1, c2 - c1)
        for (g1, n1, c1), (g2, n2, c2) in zip(rows, rows[1:])
        if (n1, c1) != (n2, c2)
    ]
    print(f"{len(jumps)} count jumps on (0, {GAMMA_MAX}]:")
    for g, dn, dc in jumps:
        kind = "gamma_k (state detaches at E=+1)" if dc > 0 else "Gamma_j (state dives at E=-1)"
        print(f"  near gamma = {g:7.4f}: count {dc:+d}, ground winding {dn:+d}   [{kind}]")

    # Eigenvalue trajectories for every winding alive below GAMMA_MAX.
    gammas = np.linspace(0.25, GAMMA_MAX, CURVE_POINTS)
    max_winding = max(interval_indices(tables, float(g))[1] for g in gammas) - 1
    curves = {}
    for N in range(max_winding + 1):
        es = np.full_like(gammas, np.nan)
        for i, g in enumerate(gammas):
            n, j = interval_indices(tables, float(g))
            if n <= N < j:
                e = find_eigenvalue(float(g), N, CURVE_TOL, tables)
                es[i] = np.nan if e is None else e
        curves[N] = es

    with (OUT_DIR / "staircase_curves.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["gamma"] + [f"E_{N}" for N in curves])
        for i, g in enumerate(gammas):
            writer.writerow(
                [f"{g:.9g}"] + [f"{curves[N][i]:.9g}" for N in curves]
            )

    fig, axes = plt.subplots(2, 1, figsize=(8.0, 7.0), sharex=True)
    axes[0].step([r[0] for r in rows], [r[2] for r in rows], where="post", color="tab:blue")
    for g in tables.gamma_seq:
        if g <= GAMMA_MAX:
            axes[0].axvline(g, color="tab:green", lw=0.8, ls=":")
    for g in tables.big_gamma_seq:
        if g <= GAMMA_MAX:
            axes[0].axvline(g, color="tab:red", lw=0.8, ls=":")
    axes[0].set_ylabel("bound states")
    axes[0].set_title("staircase N(gamma): up at gamma_k (green), down at Gamma_j (red)")

    for N, es in curves.items():
        axes[1].plot(gammas, es, marker=".", ms=3, label=f"N = {N}")
    axes[1].axhline(+1.0, color="0.6", lw=0.8)
    axes[1].axhline(-1.0, color="0.6", lw=0.8)
    axes[1].set_xlabel("gamma")
    axes[1].set_ylabel(r"$E_N$")
    axes[1].set_title("eigenvalue trajectories between the continuum edges")
    axes[1].legend(frameon=False, ncols=3, fontsize=8)

    fig.tight_layout()
    fig.savefig(OUT_DIR / "staircase.png", dpi=160)
    print(f"wrote {OUT_DIR / 'staircase.png'}")
    print(f"wrote {OUT_DIR / 'staircase_curves.csv'}")


if __name__ == "__main__":
    main()
