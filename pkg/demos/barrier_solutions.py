"""Continuum-edge barrier solutions and their counting lemma.

At the continuum edges E = +1 and E = -1 the radial problem in the
variable r = gamma e^{-s} has closed-form boundary-value solutions w(r),
normalized to w(0) = 1, one per parity.  Their shape changes each time
gamma crosses a table threshold: on the k-th gamma interval the E = +1
solutions have floor(k/2 + 1) (odd) and floor(k/2 + 1/2) (even) critical
points, and on the j-th Gamma interval the E = -1 solutions have
floor(j/2) (odd) and floor(j/2 + 1/2) (even) roots.  The script prints
the verified counts on the first few intervals and draws the solutions
at the interval midpoints.  Outputs: a four-panel figure and a CSV count
table.
"""

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from dirac1d import (
    EnergySign,
    Parity,
    barrier_solution,
    build_root_tables,
    count_sign_changes,
)

N_PLUS_INTERVALS = 4
N_MINUS_INTERVALS = 3
OUT_DIR = Path(__file__).resolve().parent / "output"


def counted(sign: EnergySign, parity: Parity, g: float) -> tuple[np.ndarray, np.ndarray, int]:
    """Solution samples on (0, g] and the lemma count for that interval."""
    sol = barrier_solution(sign, parity, g)
    r = np.linspace(1e-6, g, 400)
    w = np.array([sol.evaluator(x) for x in r])
    probe = sol.derivative if sign is EnergySign.PLUS else sol.evaluator
    n = count_sign_changes(probe, 1e-6, g, grid=max(100, int(20 * g)))
    return r, w, n


def main() -> None:
    OUT_DIR.mkdir(exist_ok=True)
    tables = build_root_tables(8)
    bounds_plus = (0.0,) + tables.gamma_seq
    bounds_minus = (0.0,) + tables.big_gamma_seq

    rows = []
    for k in range(1, N_PLUS_INTERVALS + 1):
        mid = 0.5 * (bounds_plus[k - 1] + bounds_plus[k])
        for parity, want in ((Parity.ODD, (k + 2) // 2), (Parity.EVEN, (k + 1) // 2)):
            _, _, n = counted(EnergySign.PLUS, parity, mid)
            rows.append(("+1", parity.value, k, mid, n, want))
    for j in range(1, N_MINUS_INTERVALS + 1):
        mid = 0.5 * (bounds_minus[j - 1] + bounds_minus[j])
        for parity, want in ((Parity.ODD, j // 2), (Parity.EVEN, (j + 1) // 2)):
            _, _, n = counted(EnergySign.MINUS, parity, mid)
            rows.append(("-1", parity.value, j, mid, n, want))

    print(f"{'edge':>4} {'parity':>6} {'interval':>8} {'gamma':>9} {'count':>5} {'lemma':>5}")
    for edge, parity, k, mid, n, want in rows:
        flag = "" if n == want else "  <- mismatch"
        print(f"{edge:>4} {parity:>6} {k:>8} {mid:>9.4f} {n:>5} {want:>5}{flag}")

    with (OUT_DIR / "barrier_counts.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["edge", "parity", "interval", "gamma", "count", "lemma"])
        for edge, parity, k, mid, n, want in rows:
            writer.writerow([edge, parity, k, f"{mid:.9g}", n, want])

    fig, axes = plt.subplots(2, 2, figsize=(10.5, 7.0))
    panels = [
        (EnergySign.PLUS, Parity.ODD, bounds_plus, N_PLUS_INTERVALS, "E=+1 odd: critical points"),
        (EnergySign.PLUS, Parity.EVEN, bounds_plus, N_PLUS_INTERVALS, "E=+1 even: critical points"),
        (EnergySign.MINUS, Parity.ODD, bounds_minus, N_MINUS_INTERVALS, "E=-1 odd: roots"),
        (EnergySign.MINUS, Parity.EVEN, bounds_minus, N_MINUS_INTERVALS, "E=-1 even: roots"),
    ]
    for ax, (sign, parity, bounds, n_int, title) in zip(axes.flat, panels):
        for k in range(1, n_int + 1):
            mid = 0.5 * (bounds[k - 1] + bounds[k])
            r, w, n = counted(sign, parity, mid)
            ax.plot(r, w, label=f"interval {k}: {n}")
        ax.axhline(0.0, color="0.8", lw=0.8)
        ax.set_title(title, fontsize=10)
        ax.set_xlabel("r")
        ax.set_ylabel("w(r)")
        ax.legend(frameon=False, fontsize=8)
    fig.suptitle("boundary-value solutions at the continuum edges")
    fig.tight_layout()
    fig.savefig(OUT_DIR / "barrier_solutions.png", dpi=160)
    print(f"wrote {OUT_DIR / 'barrier_solutions.png'}")
    print(f"wrote {OUT_DIR / 'barrier_counts.csv'}")


if __name__ == "__main__":
    main()
