"""Tests for the complex special functions and barrier solutions.

High-precision reference values come from mpmath (tests/oracles.py); the
package itself never calls mpmath at evaluation time except to seed gamma
and digamma constants for its extended-precision path, so the comparisons
here are independent end to end.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from dirac1d import (
    BadParameter,
    BarrierSolution,
    DegenerateThreshold,
    DomainError,
    EnergySign,
    Parity,
    PoleError,
    barrier_solution,
    complex_gamma,
    coulomb_f,
    count_sign_changes,
    find_sign_changes,
    kummer_m,
    kummer_u_log_series,
    whittaker_m,
    whittaker_m_prime,
    whittaker_w,
    whittaker_w_prime,
)

from oracles import mp_kummer_u, mp_kummer_u_dz, mp_whittaker_m, mp_whittaker_w

# Thresholds gamma_k (roots/criticals of the E=+1 family) and Gamma_j
# (E=-1 family), refined to ~1e-10 by the root-table builder and frozen
# here so this module's tests do not depend on module roots.
GAMMA_SMALL = (
    1.230870178,
    2.934791015,
    5.218667468,
    7.643742568,
    10.277524009,
    12.969455249,
    15.758988393,
    18.578748645,
)
GAMMA_BIG = (
    7.314821275,
    11.628231232,
    15.335355558,
    18.949067837,
    22.433593863,
    25.883305400,
)

GAMMA_1_PLUS_I = 0.4980156681183560 - 0.1549498283018107j


def rel_err(got: complex, want: complex) -> float:
    return abs(got - want) / max(1.0, abs(want))


class TestKummerM:
    def test_value_at_origin_is_one(self):
        for a, b in [(1 + 1j, 2.0), (0.5 - 0.3j, 1.5 + 0.2j), (-2.0, 0.7)]:
            assert kummer_m(a, b, 0.0) == 1.0 + 0j

    def test_derivative_at_origin_is_a_over_b(self):
        # M'(a, b, 0) = a/b; central difference of the series at step 1e-6
        # has O(h^2) truncation, far below the 1e-9 tolerance.
        a, b = 1 + 1j, 2.0
        h = 1e-6
        fd = (kummer_m(a, b, h) - kummer_m(a, b, -h)) / (2 * h)
        assert abs(fd - (1 + 1j) / 2) < 1e-9

    def test_exponential_identity_double_path(self):
        z = 1 + 0.5j
        assert rel_err(kummer_m(0.7 + 0.2j, 0.7 + 0.2j, z), cmath.exp(z)) < 1e-13

    def test_exponential_identity_big_path(self):
        z = 12j
        assert rel_err(kummer_m(1.5 - 1j, 1.5 - 1j, z), cmath.exp(z)) < 1e-13

    def test_m_1_2_identity_both_paths(self):
        # M(1, 2, z) = (e^z - 1)/z on either side of the precision switch.
        for z in (0.7j, 3 - 2j, 8.5j, 14j):
            want = (cmath.exp(z) - 1.0) / z
            assert rel_err(kummer_m(1.0, 2.0, z), want) < 1e-12

    def test_rejects_nonpositive_integer_b(self):
        for b in (0.0, -3.0, -2 + 1e-13j):
            with pytest.raises(BadParameter):
                kummer_m(1 + 1j, b, 0.5j)

    def test_path_consistency_across_switch(self):
        # Values just below and just above the extended-precision switch
        # must both agree with the reference; any mismatch at the seam
        # would show up as a jump here.
        a, b = 1 + 1j, 2.0
        for r in (7.99, 8.01):
            want = mp_whittaker_m(-1j, 0.5, 1j * r) / (
                cmath.exp(-1j * r / 2) * (1j * r)
            )
            assert rel_err(kummer_m(a, b, 1j * r), want) < 1e-11

    @settings(max_examples=60, deadline=None)
    @given(
        are=st.floats(-2, 2),
        aim=st.floats(-2, 2),
        bre=st.floats(0.5, 3),
        bim=st.floats(-1, 1),
        zre=st.floats(-2, 2),
        zim=st.floats(-2, 2),
    )
    def test_contiguous_relation(self, are, aim, bre, bim, zre, zim):
        # DLMF 13.3.2 rearranged: M(a,b,z) - M(a-1,b,z) = (z/b) M(a,b+1,z).
        a, b, z = complex(are, aim), complex(bre, bim), complex(zre, zim)
        lhs = kummer_m(a, b, z) - kummer_m(a - 1, b, z)
        rhs = (z / b) * kummer_m(a, b + 1, z)
        assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(lhs), abs(rhs))


class TestKummerULogSeries:
    def test_only_b_equal_two_supported(self):
        with pytest.raises(BadParameter):
            kummer_u_log_series(1 + 1j, 3, 0.5j)

    def test_origin_is_singular(self):
        with pytest.raises(DomainError):
            kummer_u_log_series(1 + 1j, 2, 0.0)

    def test_rejects_nonpositive_integer_a(self):
        with pytest.raises(BadParameter):
            kummer_u_log_series(-1.0, 2, 0.5j)

    def test_against_reference_small_argument(self):
        for a in (1 + 1j, 1 - 1j, 0.7 + 0.3j):
            got = kummer_u_log_series(a, 2, 0.5j)
            want = mp_kummer_u(a, 2.0, 0.5j)
            assert rel_err(got, want) < 1e-10

    def test_against_reference_both_paths(self):
        for r in (1.0, 5.0, 12.0):
            got = kummer_u_log_series(1 + 1j, 2, 1j * r)
            want = mp_kummer_u(1 + 1j, 2.0, 1j * r)
            assert rel_err(got, want) < 1e-10

    def test_digamma_normalization(self):
        # The logarithmic series is seeded by psi(1) = -euler_gamma.
        from scipy.special import digamma

        assert abs(float(digamma(1.0)) + np.euler_gamma) < 1e-12


class TestComplexGamma:
    def test_integer_values(self):
        assert abs(complex_gamma(1.0) - 1.0) < 1e-14
        assert abs(complex_gamma(5.0) - 24.0) < 1e-12

    def test_reflection_identity(self):
        # |Gamma(1+i)|^2 = pi / sinh(pi).
        val = abs(complex_gamma(1 + 1j)) ** 2
        assert abs(val - math.pi / math.sinh(math.pi)) < 1e-12

    def test_gamma_one_plus_i(self):
        assert abs(complex_gamma(1 + 1j) - GAMMA_1_PLUS_I) < 1e-12

    def test_poles_raise(self):
        for z in (0.0, -1.0, -7.0, -3 + 1e-13j):
            with pytest.raises(PoleError):
                complex_gamma(z)


class TestWhittakerM:
    def test_value_at_origin(self):
        assert whittaker_m(-1j, 0.5, 0.0) == 0.0

    def test_radial_derivative_at_origin(self):
        # d/dr M_{-i,1/2}(ir) at r = 0 equals i: chain rule on the z
        # derivative, which is exactly 1 at the origin for mu = 1/2.
        assert 1j * whittaker_m_prime(-1j, 0.5, 0.0) == 1j
        h = 1e-8
        fd = whittaker_m(-1j, 0.5, 1j * h) / h
        assert abs(fd - 1j) < 1e-7

    def test_small_r_expansion(self):
        # M_{-i,1/2}(ir) = ir e^{-ir/2} (1 + ((1+i)/2) ir + O(r^2)); the
        # first omitted term contributes ~3e-10 at r = 1e-3.
        r = 1e-3
        z = 1j * r
        want = z * cmath.exp(-z / 2) * (1.0 + ((1 + 1j) / 2) * z)
        assert abs(whittaker_m(-1j, 0.5, z) - want) < 1e-9

    def test_against_reference(self):
        cases = [
            (-1j, 0.5, 3.2j),
            (1j, 0.5, 14.3j),
            (0.7j, 1.5, 2.4j),
            (-1j, 1.5, 9.1j),
        ]
        for kappa, mu, z in cases:
            assert rel_err(whittaker_m(kappa, mu, z), mp_whittaker_m(kappa, mu, z)) < 1e-10

    def test_prime_matches_finite_difference(self):
        h = 1e-5
        for kappa, mu, z in [(-1j, 0.5, 2.5j), (1j, 0.5, 11j), (0.5j, 1.5, 4j)]:
            fd = (whittaker_m(kappa, mu, z + h) - whittaker_m(kappa, mu, z - h)) / (2 * h)
            assert abs(whittaker_m_prime(kappa, mu, z) - fd) < 1e-7

    def test_prime_origin_cases(self):
        assert whittaker_m_prime(-1j, 1.5, 0.0) == 0.0
        with pytest.raises(DomainError):
            whittaker_m_prime(-1j, 0.3, 0.0)

    @pytest.mark.parametrize("kappa,sign", [(-1j, +1.0), (1j, -1.0)])
    def test_ode_residual(self, kappa, sign):
        # w(r) = M_{kappa,1/2}(ir) satisfies w'' + (1/4 + sign/r) w = 0.
        # The second derivative is a central difference (step 1e-4) of the
        # analytic first derivative; differencing the value twice instead
        # would amplify the evaluations' rounding (~ulp) by 1/h^2 = 1e8,
        # flooring the residual near 2e-8 even for perfectly rounded
        # doubles, while this form keeps the floor near 1e-12.
        h = 1e-4
        worst = 0.0
        for r in np.linspace(0.1, 20.0, 120):
            w0 = whittaker_m(kappa, 0.5, 1j * r)
            dp = 1j * whittaker_m_prime(kappa, 0.5, 1j * (r + h))
            dm = 1j * whittaker_m_prime(kappa, 0.5, 1j * (r - h))
            second = (dp - dm) / (2 * h)
            worst = max(worst, abs(second + (0.25 + sign / r) * w0))
        assert worst < 1e-8

    def test_interlacing_of_zeros_and_criticals(self):
        # -i M_{-i,1/2}(ir) is real for r > 0; its zeros and critical
        # points on [0, 30] strictly alternate.  Five scan points per unit
        # is ample: consecutive zeros are separated by more than 1.7.
        zero_f = lambda r: (-1j * whittaker_m(-1j, 0.5, 1j * r)).real
        crit_f = lambda r: whittaker_m_prime(-1j, 0.5, 1j * r).real
        zeros = find_sign_changes(zero_f, 0.0, 30.0, grid=150)
        crits = find_sign_changes(crit_f, 0.05, 30.0, grid=150)
        assert len(zeros) >= 5 and len(crits) >= 5
        merged = sorted([(z, "z") for z in zeros] + [(c, "c") for c in crits])
        kinds = [k for _, k in merged]
        assert all(kinds[i] != kinds[i + 1] for i in range(len(kinds) - 1))

    def test_minus_i_m_is_real_on_grid(self):
        worst = max(
            abs((-1j * whittaker_m(-1j, 0.5, 1j * r)).imag)
            for r in np.linspace(0.01, 30.0, 200)
        )
        assert worst < 1e-12


class TestWhittakerW:
    def test_mu_restriction(self):
        with pytest.raises(BadParameter):
            whittaker_w(-1j, 1.5, 0.5j)
        with pytest.raises(BadParameter):
            whittaker_w_prime(-1j, 0.0, 0.5j)

    def test_origin_is_singular(self):
        with pytest.raises(DomainError):
            whittaker_w(-1j, 0.5, 0.0)
        with pytest.raises(DomainError):
            whittaker_w_prime(-1j, 0.5, 0.0)

    def test_against_reference(self):
        for kappa, r in [(-1j, 1.0), (1j, 1.0), (-1j, 12.0), (1j, 6.5)]:
            got = whittaker_w(kappa, 0.5, 1j * r)
            want = mp_whittaker_w(kappa, 0.5, 1j * r)
            assert rel_err(got, want) < 1e-10

    def test_prime_against_assembled_reference(self):
        # W' = e^{-z/2} [(1 - z/2) U + z U'], with U and U' from the
        # high-precision oracle.
        for kappa, r in [(-1j, 1.0), (1j, 4.0), (-1j, 10.0)]:
            z = 1j * r
            a = 1.0 - kappa
            u = mp_kummer_u(a, 2.0, z)
            up = mp_kummer_u_dz(a, 2.0, z)
            want = cmath.exp(-z / 2) * ((1.0 - z / 2) * u + z * up)
            assert rel_err(whittaker_w_prime(kappa, 0.5, z), want) < 1e-10

    def test_limit_at_origin(self):
        # W_{-i,1/2}(z) = 1/Gamma(1+i) + c z ln z + b z + O(z^2 ln z); the
        # raw distance |W(i 1e-6) - 1/Gamma(1+i)| is 2.7e-5, dominated by
        # the z ln z term, so the limit is read off by fitting the 3-term
        # model at three radii and extracting the constant.
        radii = (1e-6, 1e-7, 1e-8)
        rows, vals = [], []
        for r in radii:
            z = 1j * r
            rows.append([1.0, z * cmath.log(z), z])
            vals.append(whittaker_w(-1j, 0.5, z))
        limit = np.linalg.solve(np.array(rows), np.array(vals))[0]
        want = 1.0 / complex_gamma(1 + 1j)
        assert abs(limit - want) < 1e-6

    def test_first_root_of_minus_family(self):
        # Re[Gamma(1-i) W_{i,1/2}(ir)] has its first positive root near
        # r = 7.55, just above the first E=-1 threshold Gamma_1 = 7.31.
        g = complex_gamma(1 - 1j)
        f = lambda r: (g * whittaker_w(1j, 0.5, 1j * r)).real
        roots = find_sign_changes(f, 0.3, 8.0, grid=1540)
        assert len(roots) == 1
        assert abs(roots[0] - 7.55) < 0.01
        assert roots[0] > GAMMA_BIG[0]


class TestCoulombF:
    def test_parameter_validation(self):
        with pytest.raises(BadParameter):
            coulomb_f(-1, 1.0, 2.0)
        with pytest.raises(BadParameter):
            coulomb_f(0, 1.0, -0.1)

    def test_regular_at_origin(self):
        assert coulomb_f(0, 1.0, 0.0) == 0.0
        assert abs(coulomb_f(0, 1.0, 1e-6)) < 1e-5
        assert abs(coulomb_f(2, -1.0, 1e-4)) < 1e-10

    def test_against_mpmath(self):
        import mpmath

        for L, eta, rho in [(0, 1.0, 3.0), (0, -1.0, 2.0), (1, 0.5, 4.0), (2, -0.7, 6.0)]:
            with mpmath.workdps(30):
                want = float(mpmath.coulombf(L, eta, rho))
            assert abs(coulomb_f(L, eta, rho) - want) < 1e-9 * max(1.0, abs(want))

    def test_zeros_at_repulsive_thresholds(self):
        # F_0(1, rho) vanishes at rho = Gamma_{2j}/2 (argument r = 2 rho).
        for big_gamma in (GAMMA_BIG[1], GAMMA_BIG[3]):
            rho = big_gamma / 2
            assert abs(coulomb_f(0, 1.0, rho)) < 1e-8
            assert coulomb_f(0, 1.0, rho - 0.05) * coulomb_f(0, 1.0, rho + 0.05) < 0

    def test_zeros_at_attractive_thresholds(self):
        # F_0(-1, rho) vanishes at rho = gamma_{2j}/2.
        for gamma in (GAMMA_SMALL[1], GAMMA_SMALL[3]):
            rho = gamma / 2
            assert abs(coulomb_f(0, -1.0, rho)) < 1e-8
            assert coulomb_f(0, -1.0, rho - 0.05) * coulomb_f(0, -1.0, rho + 0.05) < 0


class TestBarrierSolution:
    def test_rejects_bad_gamma(self):
        for g in (0.0, -1.0, math.inf, math.nan):
            with pytest.raises(BadParameter):
                barrier_solution(EnergySign.PLUS, Parity.ODD, g)

    def test_value_at_origin_is_one(self):
        sol = barrier_solution(EnergySign.PLUS, Parity.ODD, 0.5)
        assert sol.evaluator(0.0) == 1.0
        assert abs(sol.evaluator(1e-9) - 1.0) < 1e-7

    def test_derivative_singular_at_origin(self):
        sol = barrier_solution(EnergySign.PLUS, Parity.ODD, 0.5)
        with pytest.raises(DomainError):
            sol.derivative(0.0)

    def test_frozen_values_plus_odd_half(self):
        # Reference values computed with a 40-digit independent assembly
        # of the same Whittaker combination.
        sol = barrier_solution(EnergySign.PLUS, Parity.ODD, 0.5)
        for r, want in [
            (0.1, 1.41081329707),
            (0.25, 1.71534051988),
            (0.4, 1.84870257338),
            (0.5, 1.87109582704),
        ]:
            assert abs(sol.evaluator(r) - want) < 1e-9

    def test_boundary_conditions(self):
        for sign, parity, g in [
            (EnergySign.PLUS, Parity.ODD, 2.0),
            (EnergySign.PLUS, Parity.EVEN, 4.0),
            (EnergySign.MINUS, Parity.ODD, 5.0),
            (EnergySign.MINUS, Parity.EVEN, 5.0),
        ]:
            sol = barrier_solution(sign, parity, g)
            bc = sol.derivative(g) if parity is Parity.ODD else sol.evaluator(g)
            assert abs(bc) < 1e-8

    @pytest.mark.parametrize(
        "sign,parity,g",
        [
            (EnergySign.PLUS, Parity.ODD, 2.0),
            (EnergySign.PLUS, Parity.EVEN, 4.0),
            (EnergySign.MINUS, Parity.ODD, 5.0),
            (EnergySign.MINUS, Parity.EVEN, 9.5),
        ],
    )
    def test_realness_on_grid(self, sign, parity, g):
        sol = barrier_solution(sign, parity, g)
        worst = max(abs(sol.complex_at(r).imag) for r in np.linspace(0.0, g, 1000))
        assert worst < 1e-9

    def test_degenerate_threshold_raises(self):
        # Refine the first critical point of the E=+1 value function; odd
        # parity at exactly that coupling has a vanishing denominator.
        f = lambda g: whittaker_m_prime(-1j, 0.5, 1j * g).real
        gstar = brentq(f, 1.2, 1.26, xtol=1e-13)
        assert abs(gstar - GAMMA_SMALL[0]) < 1e-8
        with pytest.raises(DegenerateThreshold):
            barrier_solution(EnergySign.PLUS, Parity.ODD, gstar)

    def test_dataclass_fields(self):
        sol = barrier_solution(EnergySign.MINUS, Parity.EVEN, 3.0)
        assert isinstance(sol, BarrierSolution)
        assert sol.energy_sign is EnergySign.MINUS
        assert sol.parity is Parity.EVEN
        assert sol.gamma == 3.0


class TestLemmaCounts:
    """Spot checks of the critical-point/root counts; the full table over
    all intervals up to k = 8 and j = 6 runs in the acceptance suite."""

    @staticmethod
    def _criticals(sign, g):
        sol = barrier_solution(sign, Parity.ODD, g)
        return count_sign_changes(sol.derivative, 1e-6, g, grid=max(100, int(20 * g)))

    @staticmethod
    def _criticals_even(g):
        sol = barrier_solution(EnergySign.PLUS, Parity.EVEN, g)
        return count_sign_changes(sol.derivative, 1e-6, g, grid=max(100, int(20 * g)))

    @staticmethod
    def _roots(parity, g):
        sol = barrier_solution(EnergySign.MINUS, parity, g)
        return count_sign_changes(sol.evaluator, 1e-6, g, grid=max(100, int(20 * g)))

    def test_plus_odd_counts(self):
        # floor(k/2 + 1) critical points for gamma in [gamma_{k-1}, gamma_k).
        assert self._criticals(EnergySign.PLUS, 0.5 * GAMMA_SMALL[0]) == 1
        assert self._criticals(EnergySign.PLUS, 0.5) == 1
        assert self._criticals(EnergySign.PLUS, 0.5 * (GAMMA_SMALL[0] + GAMMA_SMALL[1])) == 2

    def test_plus_even_counts(self):
        # floor(k/2 + 1/2) critical points; gamma = 4 lies in
        # [gamma_2, gamma_3), so k = 3 and the count is 2.
        assert self._criticals_even(0.5 * GAMMA_SMALL[0]) == 1
        assert self._criticals_even(4.0) == 2

    def test_minus_odd_counts(self):
        # floor(j/2) roots for gamma in [Gamma_{j-1}, Gamma_j): none below
        # Gamma_1, one in the next interval.
        assert self._roots(Parity.ODD, 5.0) == 0
        assert self._roots(Parity.ODD, 0.5 * (GAMMA_BIG[0] + GAMMA_BIG[1])) == 1

    def test_minus_even_counts(self):
        # floor(j/2 + 1/2) roots.
        assert self._roots(Parity.EVEN, 5.0) == 1


class TestSignChangeCounting:
    def test_linear_function(self):
        assert count_sign_changes(lambda x: x - 0.5, 0.0, 1.0) == 1

    def test_zero_at_right_endpoint_counts_once(self):
        # sin has a zero exactly at the right endpoint and no interior
        # crossing on [0.5, pi]; the endpoint rule adds one.
        assert count_sign_changes(math.sin, 0.5, math.pi) == 1

    def test_interior_crossing_plus_endpoint(self):
        # One interior crossing at pi plus the endpoint zero at 2 pi.
        assert count_sign_changes(math.sin, 0.5, 2 * math.pi) == 2

    def test_find_locations(self):
        roots = find_sign_changes(math.sin, 1.0, 7.0)
        assert len(roots) == 2
        assert abs(roots[0] - math.pi) < 1e-9
        assert abs(roots[1] - 2 * math.pi) < 1e-9

    def test_grid_validation(self):
        with pytest.raises(BadParameter):
            count_sign_changes(math.sin, 0.0, 1.0, grid=50)
        with pytest.raises(BadParameter):
            find_sign_changes(math.sin, 0.0, 1.0, grid=50)
        with pytest.raises(BadParameter):
            count_sign_changes(math.sin, 1.0, 1.0)
