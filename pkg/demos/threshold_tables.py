"""Threshold tables from Whittaker traces and their tridiagonal shortcut.

The couplings at which the bound-state count changes are zeros and
critical points of two real oscillating traces: gamma_k come from
-i M_{-i,1/2}(ir) (thresholds at the upper continuum edge E = +1, at
gamma = r) and Gamma_j from its kappa = +i partner (lower edge E = -1).
The script computes both tables twice, by tridiagonal eigenvalues of the
truncated recurrence matrices and by direct bisection on the series,
prints them side by side, and draws the traces with the table entries
marked.  Outputs: one figure and the table CSV.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from dirac1d import RootMethod, build_root_tables, root_tables_to_csv, whittaker_m

COUNT = 8
OUT_DIR = Path(__file__).resolve().parent / "output"


def main() -> None:
    OUT_DIR.mkdir(exist_ok=True)
    ikebe = build_root_tables(COUNT)
    bisect = build_root_tables(COUNT, method=RootMethod.BISECTION)

    print(f"first {COUNT} thresholds of each family (tridiagonal vs bisection):")
    print(f"{'k':>3} {'gamma_k':>16} {'dev':>10} {'Gamma_k':>16} {'dev':>10}")
    for k in range(COUNT):
        dg = abs(ikebe.gamma_seq[k] - bisect.gamma_seq[k])
        dG = abs(ikebe.big_gamma_seq[k] - bisect.big_gamma_seq[k])
        print(
            f"{k + 1:>3} {ikebe.gamma_seq[k]:>16.10f} {dg:>10.2e} "
            f"{ikebe.big_gamma_seq[k]:>16.10f} {dG:>10.2e}"
        )
    margin = min(G - g for g, G in zip(ikebe.gamma_seq, ikebe.big_gamma_seq))
    print(f"separation min(Gamma_k - gamma_k) = {margin:.4f}")

    (OUT_DIR / "threshold_tables.csv").write_text(root_tables_to_csv(ikebe))

    # The two traces whose zeros and critical points are the table entries;
    # -i M_{-+i,1/2}(ir) is real for r > 0 in both cases.
    r = np.linspace(1e-3, 21.0, 1200)
    plus_trace = np.array([(-1j * whittaker_m(-1j, 0.5, 1j * x)).real for x in r])
    minus_trace = np.array([(-1j * whittaker_m(1j, 0.5, 1j * x)).real for x in r])

    fig, axes = plt.subplots(2, 1, figsize=(8.5, 6.2), sharex=True)
    axes[0].plot(r, plus_trace, color="tab:green")
    axes[0].axhline(0.0, color="0.8", lw=0.8)
    for k, g in enumerate(ikebe.gamma_seq):
        if g <= r[-1]:
            marker = "o" if k % 2 == 0 else "s"  # criticals at odd k+1, zeros at even
            axes[0].plot([g], [np.interp(g, r, plus_trace)], marker, color="k", ms=5)
    axes[0].set_ylabel(r"$-i\,M_{-i,1/2}(ir)$")
    axes[0].set_title("E = +1 family: criticals (circles) and zeros (squares) at gamma_k")

    axes[1].plot(r, minus_trace, color="tab:red")
    axes[1].axhline(0.0, color="0.8", lw=0.8)
    for k, g in enumerate(ikebe.big_gamma_seq):
        if g <= r[-1]:
            marker = "o" if k % 2 == 0 else "s"
            axes[1].plot([g], [np.interp(g, r, minus_trace)], marker, color="k", ms=5)
    axes[1].set_xlabel("r")
    axes[1].set_ylabel(r"$-i\,M_{i,1/2}(ir)$")
    axes[1].set_title("E = -1 family: criticals and zeros at Gamma_j")

    fig.tight_layout()
    fig.savefig(OUT_DIR / "threshold_tables.png", dpi=160)
    print(f"wrote {OUT_DIR / 'threshold_tables.png'}")
    print(f"wrote {OUT_DIR / 'threshold_tables.csv'}")


if __name__ == "__main__":
    main()
