"""Acceptance gate: nine end-to-end criteria, one printed verdict line each.

Every test measures its quantities first, prints

    criterion k: PASS (...)    or    criterion k: FAIL (...)

outside pytest's capture (so the scoreboard is visible in any run mode),
and only then asserts.  Criteria with a stated runtime budget time the
fresh computation; everything else reuses the session fixtures.
"""

from __future__ import annotations

import cmath
import math
import random
import time

import numpy as np

from dirac1d import (
    Direction,
    EnergySign,
    IntegratorConfig,
    ModelParams,
    Parity,
    PruferState,
    RootMethod,
    barrier_solution,
    build_root_tables,
    complex_gamma,
    count_crests,
    count_sign_changes,
    enumerate_bound_states,
    ikebe_critical_matrix,
    ikebe_zero_matrix,
    integrate,
    interval_indices,
    staircase,
    symmetric_tridiagonal_eigenvalues,
    whittaker_m,
    whittaker_m_prime,
    whittaker_w,
)

from oracles import uv_theta

# Reference thresholds: the first four entries of each family, gamma to
# nine digits and Gamma to five (the E = -1 family converges more slowly
# in the truncation order, hence the looser quoted precision).
GAMMA_ANCHORS = (1.230870178, 2.934791015, 5.218667468, 7.643742568)
BIG_GAMMA_ANCHORS = (7.3148, 11.6282, 15.3354, 18.9491)

# (ground winding, count) spot values with a per-coupling runtime budget.
COUNT_CASES = {0.5: (0, 1), 5.0: (0, 3), 7.5: (1, 3)}


def _verdict(capsys, k: int, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"\ncriterion {k}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {k}: {detail}"


def test_criterion_1_root_table_anchors(capsys):
    t0 = time.perf_counter()
    tables = build_root_tables(4)
    elapsed = time.perf_counter() - t0
    dev_g = max(abs(a - b) for a, b in zip(tables.gamma_seq, GAMMA_ANCHORS))
    dev_big = max(abs(a - b) for a, b in zip(tables.big_gamma_seq, BIG_GAMMA_ANCHORS))
    ok = dev_g < 1e-6 and dev_big < 1e-3 and elapsed < 30.0
    _verdict(
        capsys,
        1,
        ok,
        f"gamma dev {dev_g:.2e} < 1e-06, Gamma dev {dev_big:.2e} < 1e-03, "
        f"build {elapsed:.2f} s",
    )


def test_criterion_2_method_cross_validation(capsys, tables20):
    by_bisection = build_root_tables(20, method=RootMethod.BISECTION)
    dev_g = max(abs(a - b) for a, b in zip(tables20.gamma_seq, by_bisection.gamma_seq))
    dev_big = max(
        abs(a - b) for a, b in zip(tables20.big_gamma_seq, by_bisection.big_gamma_seq)
    )
    # lam(-T_eta) = lam(T_{-eta}): flipping eta negates the diagonal and
    # keeps the off-diagonal, an exact similarity of the Ikebe matrices.
    sim = 0.0
    for maker in (ikebe_zero_matrix, ikebe_critical_matrix):
        plus = np.array(symmetric_tridiagonal_eigenvalues(maker(0, 1.0, 200)))
        minus = np.array(symmetric_tridiagonal_eigenvalues(maker(0, -1.0, 200)))
        sim = max(sim, float(np.max(np.abs(np.sort(-plus) - np.sort(minus)))))
    ok = dev_g < 1e-6 and dev_big < 1e-6 and sim < 1e-10
    _verdict(
        capsys,
        2,
        ok,
        f"ikebe vs bisection dev {max(dev_g, dev_big):.2e} < 1e-06 over 20 entries, "
        f"eta similarity {sim:.2e} < 1e-10",
    )


def test_criterion_3_separation(capsys, tables20):
    margins = [
        big - small for small, big in zip(tables20.gamma_seq, tables20.big_gamma_seq)
    ]
    worst = min(margins)
    ok = worst > 2.31
    _verdict(
        capsys, 3, ok, f"min(Gamma_j - gamma_j) = {worst:.4f} > 2.31 for all j <= 20"
    )


def test_criterion_4_bound_state_counts(capsys, tables20):
    results = {}
    slowest = 0.0
    for g, want in COUNT_CASES.items():
        t0 = time.perf_counter()
        summary = enumerate_bound_states(g, 1e-8, tables20)
        slowest = max(slowest, time.perf_counter() - t0)
        results[g] = (summary.ground_winding, summary.count)
    ok = results == COUNT_CASES and slowest < 60.0
    _verdict(
        capsys,
        4,
        ok,
        f"(ground, count) = {sorted(results.items())} as expected, "
        f"slowest coupling {slowest:.1f} s < 60 s",
    )


def test_criterion_5_eigenvalues_against_oracle(capsys, spectra, fd_energies):
    worst = 0.0
    interior = increasing = counts_match = True
    for g, summary in spectra.items():
        energies = [s.energy for s in summary.states]
        interior &= all(-1.0 < e < 1.0 for e in energies)
        increasing &= all(b > a for a, b in zip(energies, energies[1:]))
        oracle = fd_energies[g]
        counts_match &= len(oracle) == len(energies)
        if len(oracle) == len(energies):
            worst = max(worst, float(np.max(np.abs(np.array(energies) - oracle))))
    ok = interior and increasing and counts_match and worst < 1e-5
    _verdict(
        capsys,
        5,
        ok,
        f"all E in (-1, 1): {interior}, increasing: {increasing}, "
        f"finite-difference oracle dev {worst:.2e} < 1e-05",
    )


def test_criterion_6_wavefunction_invariants(capsys, spectra):
    tight = IntegratorConfig(rel_tol=1e-12, abs_tol=1e-12)
    norm_dev = reflect_dev = pruefer_dev = 0.0
    crests_ok = True
    n_states = 0
    for g, summary in spectra.items():
        for state in summary.states:
            n_states += 1
            norm_dev = max(
                norm_dev, abs(float(np.trapezoid(state.density, state.s_grid)) - 1.0)
            )
            crests_ok &= count_crests(state.density) == state.winding.value + 1

            # Reflection: integrate fresh from the midpoint both ways; the
            # flow's s -> -s symmetry demands Theta(-s) = 2 Theta(0) - Theta(s).
            params = ModelParams(g, state.energy)
            theta0 = math.pi * (2.0 - state.winding.value)
            start = PruferState(0.0, theta0)
            fwd = integrate(params, start, Direction.FORWARD, config=tight, tau_end=8.0)
            back = integrate(
                params, start, Direction.BACKWARD, config=tight, tau_end=8.0
            )
            hi = min(8.0, float(fwd.taus[-1]), -float(back.taus[0]))
            ss = np.linspace(0.0, hi, 201)
            folded = back.theta_of_tau()(-ss) - (2.0 * theta0 - fwd.theta_of_tau()(ss))
            reflect_dev = max(reflect_dev, float(np.max(np.abs(folded))))

            # Pruefer phase against direct integration of the linear spinor
            # system, over the region where the potential is alive.
            s_eval = np.linspace(0.0, 6.0, 41)
            _, want = uv_theta(g, state.energy, 0.0, theta0, s_eval)
            got = state.orbit.theta_of_tau()(s_eval)
            pruefer_dev = max(pruefer_dev, float(np.max(np.abs(got - want))))
    ok = (
        norm_dev < 1e-6 and crests_ok and reflect_dev < 1e-6 and pruefer_dev < 1e-5
    )
    _verdict(
        capsys,
        6,
        ok,
        f"over {n_states} states: norm dev {norm_dev:.2e} < 1e-06, "
        f"crests = winding + 1: {crests_ok}, reflection dev {reflect_dev:.2e} "
        f"< 1e-06, spinor-phase dev {pruefer_dev:.2e} < 1e-05",
    )


def test_criterion_7_barrier_counts(capsys, tables8):
    def criticals(parity: Parity, g: float) -> int:
        sol = barrier_solution(EnergySign.PLUS, parity, g)
        return count_sign_changes(sol.derivative, 1e-6, g, grid=max(100, int(20 * g)))

    def roots(parity: Parity, g: float) -> int:
        sol = barrier_solution(EnergySign.MINUS, parity, g)
        return count_sign_changes(sol.evaluator, 1e-6, g, grid=max(100, int(20 * g)))

    bad = []
    bounds_g = (0.0,) + tables8.gamma_seq
    for k in range(1, 9):
        mid = 0.5 * (bounds_g[k - 1] + bounds_g[k])
        got = (criticals(Parity.ODD, mid), criticals(Parity.EVEN, mid))
        want = ((k + 2) // 2, (k + 1) // 2)  # floor(k/2 + 1), floor(k/2 + 1/2)
        if got != want:
            bad.append(("+1", k, got, want))
    bounds_big = (0.0,) + tables8.big_gamma_seq
    for j in range(1, 7):
        mid = 0.5 * (bounds_big[j - 1] + bounds_big[j])
        got = (roots(Parity.ODD, mid), roots(Parity.EVEN, mid))
        want = (j // 2, (j + 1) // 2)  # floor(j/2), floor(j/2 + 1/2)
        if got != want:
            bad.append(("-1", j, got, want))
    ok = not bad
    _verdict(
        capsys,
        7,
        ok,
        "all 28 critical-point/root counts match the lemma" if ok else f"mismatches {bad}",
    )


def test_criterion_8_special_function_residuals(capsys):
    # Whittaker ODE residual: w(r) = M_{kappa,1/2}(ir) obeys
    # w'' + (1/4 + sign/r) w = 0 for kappa = -+ i.  The second derivative
    # is a central difference of the analytic first derivative, which
    # keeps the rounding floor near 1e-12 instead of the 2e-8 that twice
    # differencing the values would give.
    h = 1e-4
    residual = 0.0
    for kappa, sign in ((-1j, +1.0), (1j, -1.0)):
        for r in np.linspace(0.1, 20.0, 120):
            w0 = whittaker_m(kappa, 0.5, 1j * r)
            dp = 1j * whittaker_m_prime(kappa, 0.5, 1j * (r + h))
            dm = 1j * whittaker_m_prime(kappa, 0.5, 1j * (r - h))
            residual = max(residual, abs((dp - dm) / (2 * h) + (0.25 + sign / r) * w0))

    gamma_dev = abs(abs(complex_gamma(1 + 1j)) ** 2 - math.pi / math.sinh(math.pi))

    # Small-argument limit of W_{-i,1/2}: the expansion is
    # 1/Gamma(1+i) + c z ln z + b z + O(z^2 ln z), so the constant is read
    # off by solving the 3-term model at three radii; the raw distance at
    # r = 1e-6 is 2.7e-5, dominated by the z ln z term.
    rows, vals = [], []
    for r in (1e-6, 1e-7, 1e-8):
        z = 1j * r
        rows.append([1.0, z * cmath.log(z), z])
        vals.append(whittaker_w(-1j, 0.5, z))
    limit = np.linalg.solve(np.array(rows), np.array(vals))[0]
    limit_dev = abs(limit - 1.0 / complex_gamma(1 + 1j))

    ok = residual < 1e-8 and gamma_dev < 1e-10 and limit_dev < 1e-6
    _verdict(
        capsys,
        8,
        ok,
        f"ODE residual {residual:.2e} < 1e-08, |Gamma(1+i)|^2 dev {gamma_dev:.2e} "
        f"< 1e-10, W limit dev {limit_dev:.2e} < 1e-06",
    )


def test_criterion_9_staircase_consistency(capsys, tables20):
    entries = list(tables20.gamma_seq) + list(tables20.big_gamma_seq)
    rng = random.Random(20260823)
    points: list[float] = []
    while len(points) < 50:
        g = rng.uniform(0.0, 12.0)
        # Rejected: points within 1e-2 of a threshold (the count is
        # ambiguous under the enumeration tolerance there) and couplings
        # below 0.05 (the ground state's support grows like gamma^-2 and
        # falls outside the reconstruction grid budget).
        if g < 0.05 or min(abs(g - e) for e in entries) < 1e-2:
            continue
        points.append(g)

    mismatches = []
    for g in points:
        n, j = interval_indices(tables20, g)
        summary = enumerate_bound_states(g, 1e-6, tables20)
        if (summary.ground_winding, summary.count) != (n, j - n):
            mismatches.append((g, (summary.ground_winding, summary.count), (n, j - n)))

    rows = staircase(0.05, 12.0, 481, tables20)
    stray_jumps = 0
    jumps = 0
    for (g1, n1, c1), (g2, n2, c2) in zip(rows, rows[1:]):
        if (n1, c1) != (n2, c2):
            jumps += 1
            if not any(g1 < e <= g2 for e in entries):
                stray_jumps += 1
    expected_jumps = sum(1 for e in entries if 0.05 < e <= 12.0)

    ok = not mismatches and stray_jumps == 0 and jumps == expected_jumps
    _verdict(
        capsys,
        9,
        ok,
        f"staircase vs enumeration agree at 50 random couplings "
        f"(mismatches {mismatches}), {jumps} jumps all at table entries "
        f"(expected {expected_jumps}, stray {stray_jumps})",
    )
