"""Full bound spectrum at strong coupling.

At gamma = 7.5 three saddles connectors exist, with winding numbers 1, 2
and 3: the would-be winding-0 state has already dived into the lower
continuum.  The script enumerates all bound states, prints the energy
ladder, and draws the densities together with the (u, v) phase portraits
whose loop counts display the windings directly.  Outputs: a two-row
figure and a CSV energy table.
"""

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from dirac1d import build_root_tables, enumerate_bound_states
from dirac1d.spectrum import count_crests

GAMMA = 7.5
TOL = 1e-8
OUT_DIR = Path(__file__).resolve().parent / "output"


def main() -> None:
    OUT_DIR.mkdir(exist_ok=True)
    tables = build_root_tables(8)
    summary = enumerate_bound_states(GAMMA, TOL, tables)
    print(f"gamma = {GAMMA}: ground winding {summary.ground_winding}, "
          f"{summary.count} bound states")
    print(f"{'N':>3} {'E_N':>14} {'crests':>7}")
    for state in summary.states:
        print(f"{state.winding.value:>3} {state.energy:>14.10f} "
              f"{count_crests(state.density):>7}")

    with (OUT_DIR / "spectrum_energies.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["winding", "energy", "crests"])
        for state in summary.states:
            writer.writerow(
                [state.winding.value, f"{state.energy:.12g}", count_crests(state.density)]
            )

    n = summary.count
    fig, axes = plt.subplots(2, n, figsize=(4.0 * n, 6.4))
    for col, state in enumerate(summary.states):
        keep = np.abs(state.s_grid) <= 14.0
        s = state.s_grid[keep][::10]
        axes[0, col].plot(s, state.density[keep][::10], color="tab:red")
        axes[0, col].set_title(f"N = {state.winding.value}, E = {state.energy:.6f}")
        axes[0, col].set_xlabel("s")
        if col == 0:
            axes[0, col].set_ylabel(r"$\rho(s)$")
        axes[1, col].plot(
            state.u_samples[keep][::10], state.v_samples[keep][::10], color="tab:blue", lw=0.9
        )
        axes[1, col].plot([0.0], [0.0], "k.", ms=4)
        axes[1, col].set_xlabel("u")
        axes[1, col].set_aspect("equal", adjustable="datalim")
        if col == 0:
            axes[1, col].set_ylabel("v")

    fig.suptitle(f"bound spectrum at gamma = {GAMMA}")
    fig.tight_layout()
    fig.savefig(OUT_DIR / "spectrum_scan.png", dpi=160)
    print(f"wrote {OUT_DIR / 'spectrum_scan.png'}")
    print(f"wrote {OUT_DIR / 'spectrum_energies.csv'}")


if __name__ == "__main__":
    main()
