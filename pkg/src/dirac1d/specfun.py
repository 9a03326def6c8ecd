"""Complex special functions for the E = +/-1 barrier analysis.

Everything here is evaluated on or near the imaginary axis z = i r with
0 < r <~ 75, where the confluent hypergeometric series converge but cancel
catastrophically: individual terms of M(a, b, ir) grow to ~e^r before the
sum collapses to O(1).  Two evaluation paths are therefore used:

* |z| <= 8: plain double precision (cancellation eats < 12 digits).
* |z| >  8: gmpy2 multiprecision with log2(e^|z|) ~ 1.443 |z| guard bits on
  top of a fixed 133-bit budget, after which the result is rounded to a
  Python complex.

Series definitions follow DLMF 13.2.2 for M(a, b, z), DLMF 13.2.9 (the
b = 2 logarithmic case, the only one needed) for U(a, 2, z), DLMF 13.14.2-3
for the Whittaker forms, and DLMF 33.2.3-5 for the regular Coulomb wave
function normalization.  Complex values are represented by the builtin
``complex`` type throughout.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable

import gmpy2
import mpmath
import numpy as np
from scipy.special import digamma as _digamma
from scipy.special import gamma as _gamma

from .errors import (
    BadParameter,
    DegenerateThreshold,
    DomainError,
    NonConvergence,
    PoleError,
    ValidationFailure,
)

__all__ = [
    "EnergySign",
    "Parity",
    "BarrierSolution",
    "kummer_m",
    "kummer_u_log_series",
    "complex_gamma",
    "whittaker_m",
    "whittaker_m_prime",
    "whittaker_w",
    "whittaker_w_prime",
    "coulomb_f",
    "barrier_solution",
    "count_sign_changes",
    "find_sign_changes",
]

SERIES_CAP = 10_000

# |z| beyond which series cancellation outruns double precision.
BIG_SWITCH = 8.0

DEGENERATE_TOL = 1e-10

# Scan density for sign-change counting: zeros of the functions of interest
# are spaced > 1.7 apart, so 200 points per unit is ample.
GRID_PER_UNIT = 200
GRID_MIN = 100
REFINE_TOL = 1e-10


def _near_nonpositive_integer(x: complex, tol: float = 1e-12) -> bool:
    x = complex(x)
    if abs(x.imag) > tol:
        return False
    n = round(x.real)
    return n <= 0 and abs(x.real - n) <= tol


def _work_prec(z: complex) -> int:
    return 133 + int(1.443 * abs(z))


def _mp_dps(prec: int) -> int:
    return int(prec * 0.30103) + 10


def _to_mpc(x: mpmath.mpc, dps: int) -> gmpy2.mpc:
    # String round-trip keeps all digits; float round-trip would not.
    re = gmpy2.mpfr(mpmath.nstr(x.real, dps, strip_zeros=False))
    im = gmpy2.mpfr(mpmath.nstr(x.imag, dps, strip_zeros=False))
    return gmpy2.mpc(re, im)


@lru_cache(maxsize=256)
def _psi_base(a: complex, prec: int) -> gmpy2.mpc:
    dps = _mp_dps(prec)
    with mpmath.workdps(dps):
        val = mpmath.digamma(mpmath.mpc(a))
    return _to_mpc(val, dps)


@lru_cache(maxsize=256)
def _gamma_pair(a: complex, prec: int) -> tuple[gmpy2.mpc, gmpy2.mpc]:
    """(Gamma(a-1), Gamma(a)) at `prec` bits."""
    dps = _mp_dps(prec)
    with mpmath.workdps(dps):
        g1 = mpmath.gamma(mpmath.mpc(a) - 1)
        g0 = mpmath.gamma(mpmath.mpc(a))
    return _to_mpc(g1, dps), _to_mpc(g0, dps)


def _kummer_m_double(a: complex, b: complex, z: complex) -> complex:
    term = complex(1.0)
    total = complex(1.0)
    for s in range(1, SERIES_CAP):
        term *= (a + s - 1) * z / ((b + s - 1) * s)
        total += term
        if abs(term) < 1e-16 * abs(total):
            return total
    raise NonConvergence(
        f"Kummer M series hit the {SERIES_CAP}-term cap at a={a}, b={b}, |z|={abs(z):.3g}"
    )


def _kummer_m_big(a: complex, b: complex, z: complex) -> complex:
    prec = _work_prec(z)
    with gmpy2.context(precision=prec):
        az = gmpy2.mpc(a)
        bz = gmpy2.mpc(b)
        zz = gmpy2.mpc(z)
        term = gmpy2.mpc(1)
        total = gmpy2.mpc(1)
        eps = gmpy2.mpfr(2) ** (-(prec - 20))
        for s in range(1, SERIES_CAP):
            term = term * (az + s - 1) * zz / ((bz + s - 1) * s)
            total += term
            if abs(term) < eps * abs(total):
                return complex(total)
    raise NonConvergence(
        f"Kummer M series hit the {SERIES_CAP}-term cap at a={a}, b={b}, |z|={abs(z):.3g}"
    )


def kummer_m(a: complex, b: complex, z: complex) -> complex:
    """Confluent hypergeometric M(a, b, z) by direct power series.

    The series is summed until a term falls below the working epsilon times
    the partial sum (1e-16 in the double path, tighter in the extended
    path), capped at 10_000 terms.
    """
    if _near_nonpositive_integer(b):
        raise BadParameter(f"b = {b} is (nearly) a non-positive integer")
    z = complex(z)
    if z == 0:
        return complex(1.0)
    if abs(z) > BIG_SWITCH:
        return _kummer_m_big(complex(a), complex(b), z)
    return _kummer_m_double(complex(a), complex(b), z)


def _kummer_u2_double(a: complex, z: complex) -> tuple[complex, complex]:
    lnz = cmath.log(z)
    c = complex(1.0)  # (a)_k / ((2)_k k!)
    pa = complex(_digamma(complex(a)))
    p1 = float(_digamma(1.0))
    p2 = float(_digamma(2.0))
    S = c * (lnz + pa - p1 - p2)
    Sp = 1.0 / z  # k = 0 term of the derivative: d/dz of (ln z + const)
    zk = complex(1.0)  # z^{k-1} tracker
    converged = False
    for k in range(1, SERIES_CAP):
        c *= (a + k - 1) / ((k + 1) * k)
        pa += 1.0 / (a + k - 1)
        p1 += 1.0 / k
        p2 += 1.0 / (k + 1)
        d = lnz + pa - p1 - p2
        t = c * zk * z * d
        tp = c * zk * (k * d + 1)
        S += t
        Sp += tp
        zk *= z
        if k > 3 and abs(t) < 1e-16 * abs(S):
            converged = True
            break
    if not converged:
        raise NonConvergence(
            f"Kummer U log-series hit the {SERIES_CAP}-term cap at a={a}, |z|={abs(z):.3g}"
        )
    ga1 = complex(_gamma(complex(a) - 1))
    ga = complex(_gamma(complex(a)))
    val = S / ga1 + 1.0 / (ga * z)
    dval = Sp / ga1 - 1.0 / (ga * z * z)
    return val, dval


def _kummer_u2_big(a: complex, z: complex) -> tuple[complex, complex]:
    prec = _work_prec(z)
    with gmpy2.context(precision=prec):
        az = gmpy2.mpc(a)
        zz = gmpy2.mpc(z)
        lnz = gmpy2.log(zz)
        eul = gmpy2.const_euler()
        pa = gmpy2.mpc(_psi_base(complex(a), prec))
        p1 = gmpy2.mpfr(-eul)  # psi(1)
        p2 = 1 - eul  # psi(2)
        c = gmpy2.mpc(1)
        S = c * (lnz + pa - p1 - p2)
        Sp = 1 / zz
        zk = gmpy2.mpc(1)
        eps = gmpy2.mpfr(2) ** (-(prec - 20))
        converged = False
        for k in range(1, SERIES_CAP):
            c = c * (az + k - 1) / ((k + 1) * k)
            pa += 1 / (az + k - 1)
            p1 += gmpy2.mpfr(1) / k
            p2 += gmpy2.mpfr(1) / (k + 1)
            d = lnz + pa - p1 - p2
            t = c * zk * zz * d
            tp = c * zk * (k * d + 1)
            S += t
            Sp += tp
            zk *= zz
            if k > 3 and abs(t) < eps * abs(S):
                converged = True
                break
        if not converged:
            raise NonConvergence(
                f"Kummer U log-series hit the {SERIES_CAP}-term cap at a={a}, |z|={abs(z):.3g}"
            )
        ga1, ga = _gamma_pair(complex(a), prec)
        val = S / ga1 + 1 / (ga * zz)
        dval = Sp / ga1 - 1 / (ga * zz * zz)
        return complex(val), complex(dval)


def _kummer_u2_pair(a: complex, z: complex) -> tuple[complex, complex]:
    """(U(a, 2, z), dU/dz) via the b = 2 logarithmic series, DLMF 13.2.9."""
    if z == 0:
        raise DomainError("U(a, 2, z) has a logarithmic singularity at z = 0")
    if _near_nonpositive_integer(a):
        raise BadParameter(f"a = {a} is (nearly) a non-positive integer")
    if abs(z) > BIG_SWITCH:
        return _kummer_u2_big(complex(a), complex(z))
    return _kummer_u2_double(complex(a), complex(z))


def kummer_u_log_series(a: complex, n_plus_1: int, z: complex) -> complex:
    """Irregular confluent hypergeometric U(a, n+1, z); only n+1 = 2 is supported."""
    if n_plus_1 != 2:
        raise BadParameter("only the b = n + 1 = 2 logarithmic case is implemented")
    return _kummer_u2_pair(a, complex(z))[0]


def complex_gamma(z: complex) -> complex:
    """Gamma on the complex plane (poles at non-positive integers raise)."""
    if _near_nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at z = {z}")
    return complex(_gamma(complex(z)))


def _principal_power(z: complex, p: float) -> complex:
    if z == 0:
        if p > 0:
            return complex(0.0)
        raise DomainError(f"0^{p} is singular")
    return cmath.exp(p * cmath.log(z))


def whittaker_m(kappa: complex, mu: float, z: complex) -> complex:
    """M_{kappa,mu}(z) = e^{-z/2} z^{1/2+mu} M(1/2 + mu - kappa, 1 + 2 mu, z)."""
    z = complex(z)
    a = 0.5 + mu - kappa
    b = 1.0 + 2.0 * mu
    if z == 0:
        return complex(0.0) if 0.5 + mu > 0 else _principal_power(z, 0.5 + mu)
    return cmath.exp(-z / 2) * _principal_power(z, 0.5 + mu) * kummer_m(a, b, z)


def whittaker_m_prime(kappa: complex, mu: float, z: complex) -> complex:
    """d/dz of M_{kappa,mu}(z).

    Product rule on the defining form, with M'(a,b,z) = (a/b) M(a+1,b+1,z):
    e^{-z/2} z^{1/2+mu} [ -M/2 + ((1/2+mu)/z) M + (a/b) M(a+1, b+1, z) ].
    """
    z = complex(z)
    a = 0.5 + mu - kappa
    b = 1.0 + 2.0 * mu
    p = 0.5 + mu
    if z == 0:
        # Only the term differentiating z^{p} survives at the origin.
        if abs(p - 1.0) < 1e-15:
            return complex(1.0)
        if p > 1.0:
            return complex(0.0)
        raise DomainError("M_{kappa,mu}' is singular at z = 0 for mu < 1/2")
    m1 = kummer_m(a, b, z)
    m2 = kummer_m(a + 1, b + 1, z)
    return cmath.exp(-z / 2) * _principal_power(z, p) * (-0.5 * m1 + (p / z) * m1 + (a / b) * m2)


def whittaker_w(kappa: complex, mu: float, z: complex) -> complex:
    """W_{kappa,1/2}(z) = e^{-z/2} z U(1 - kappa, 2, z); only mu = 1/2 is supported."""
    if abs(mu - 0.5) > 1e-12:
        raise BadParameter("whittaker_w supports only mu = 1/2")
    z = complex(z)
    if z == 0:
        raise DomainError("W_{kappa,1/2} has a logarithmic branch point at z = 0")
    u, _ = _kummer_u2_pair(1.0 - kappa, z)
    return cmath.exp(-z / 2) * z * u


def whittaker_w_prime(kappa: complex, mu: float, z: complex) -> complex:
    """d/dz of W_{kappa,1/2}(z) = e^{-z/2} [ (1 - z/2) U + z U' ]."""
    if abs(mu - 0.5) > 1e-12:
        raise BadParameter("whittaker_w supports only mu = 1/2")
    z = complex(z)
    if z == 0:
        raise DomainError("W_{kappa,1/2}' is singular at z = 0")
    u, up = _kummer_u2_pair(1.0 - kappa, z)
    return cmath.exp(-z / 2) * ((1.0 - z / 2) * u + z * up)


def coulomb_f(L: int, eta: float, rho: float) -> float:
    """Regular Coulomb wave function F_L(eta, rho), DLMF 33.2 normalization.

    F_L(eta, rho) = C_L(eta) rho^{L+1} e^{-i rho} M(L+1-i eta, 2L+2, 2i rho)
    with C_L(eta) = 2^L e^{-pi eta / 2} |Gamma(L + 1 + i eta)| / Gamma(2L + 2).
    Since M_{i eta, L+1/2}(2i rho) = e^{-i rho} (2i rho)^{L+1} M(...), the
    Whittaker form carries an extra (2i)^{L+1}, giving the (-i/2)^{L+1}
    conversion factor below.  The assembled combination is real; the
    imaginary residue is rounding.
    """
    if not isinstance(L, (int, np.integer)) or L < 0:
        raise BadParameter("L must be a non-negative integer")
    if rho < 0:
        raise BadParameter("rho must be non-negative")
    if rho == 0:
        return 0.0
    c_norm = (
        2.0**L
        * math.exp(-math.pi * eta / 2.0)
        * abs(complex(_gamma(complex(L + 1, eta))))
        / math.gamma(2 * L + 2)
    )
    val = c_norm * (-0.5j) ** (L + 1) * whittaker_m(1j * eta, L + 0.5, 2j * rho)
    return val.real


class EnergySign(Enum):
    PLUS = +1  # E = +1, kappa = -i
    MINUS = -1  # E = -1, kappa = +i


class Parity(Enum):
    ODD = "odd"  # derivative vanishes at r = gamma
    EVEN = "even"  # value vanishes at r = gamma


@dataclass(frozen=True)
class BarrierSolution:
    """Closed-form solution of an E = +/-1 boundary-value problem on [0, gamma].

    evaluator(r) is the real part of the assembled Whittaker combination
    with w(0) = 1; derivative(r) its d/dr (r > 0 only: the W branch point
    makes the derivative logarithmically singular at the origin).
    complex_at(r) exposes the raw combination so tests can bound the
    imaginary residue.
    """

    energy_sign: EnergySign
    parity: Parity
    gamma: float
    evaluator: Callable[[float], float]
    derivative: Callable[[float], float]
    complex_at: Callable[[float], complex]


def barrier_solution(energy_sign: EnergySign, parity: Parity, gamma: float) -> BarrierSolution:
    """Assemble the E = +/-1 barrier solution for coupling gamma.

    With s = +/-1 the energy sign, kappa = -i s and G = Gamma(1 + i s):

        w(r) = Re[ -G * ratio * M_{kappa,1/2}(i r) + G * W_{kappa,1/2}(i r) ]

    where ratio = W'/M' at i gamma for odd parity (Neumann condition at
    r = gamma) and W/M for even parity (Dirichlet condition).  Despite the
    complex ingredients the combination is real.
    """
    if not (gamma > 0 and math.isfinite(gamma)):
        raise BadParameter(f"gamma must be positive and finite, got {gamma}")
    sign = energy_sign.value
    kappa = -1j * sign
    big_g = complex_gamma(1 + 1j * sign)
    zg = 1j * gamma
    if parity is Parity.ODD:
        den = whittaker_m_prime(kappa, 0.5, zg)
        num = whittaker_w_prime(kappa, 0.5, zg)
    else:
        den = whittaker_m(kappa, 0.5, zg)
        num = whittaker_w(kappa, 0.5, zg)
    if abs(den) <= DEGENERATE_TOL:
        raise DegenerateThreshold(
            f"gamma = {gamma} sits on a threshold: the {parity.value}-parity "
            f"denominator is {abs(den):.3e}"
        )
    ratio = num / den

    def complex_at(r: float) -> complex:
        if r == 0:
            return complex(1.0)
        z = 1j * r
        return -big_g * ratio * whittaker_m(kappa, 0.5, z) + big_g * whittaker_w(kappa, 0.5, z)

    def evaluator(r: float) -> float:
        return complex_at(r).real

    def derivative(r: float) -> float:
        if r == 0:
            raise DomainError("barrier derivative is log-singular at r = 0")
        z = 1j * r
        dval = 1j * (
            -big_g * ratio * whittaker_m_prime(kappa, 0.5, z)
            + big_g * whittaker_w_prime(kappa, 0.5, z)
        )
        return dval.real

    sol = BarrierSolution(energy_sign, parity, float(gamma), evaluator, derivative, complex_at)

    # Both boundary conditions are identities of the construction; checking
    # them catches precision-path regressions at large gamma.
    if abs(evaluator(1e-10) - 1.0) > 1e-8:
        raise ValidationFailure("barrier solution violates w(0) = 1")
    bc = derivative(gamma) if parity is Parity.ODD else evaluator(gamma)
    if abs(bc) > 1e-8:
        raise ValidationFailure(
            f"barrier solution violates the r = gamma boundary condition: {bc:.3e}"
        )
    return sol


def _bisect_sign_change(f: Callable[[float], float], lo: float, hi: float, flo: float) -> float:
    for _ in range(80):
        if hi - lo <= REFINE_TOL:
            break
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if flo * fm <= 0.0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def find_sign_changes(
    f: Callable[[float], float], a: float, b: float, grid: int | None = None
) -> list[float]:
    """Locations of sign changes of f on [a, b], each refined to 1e-10."""
    if not b > a:
        raise BadParameter("need b > a")
    if grid is None:
        grid = max(GRID_MIN, math.ceil(GRID_PER_UNIT * (b - a)))
    if grid < GRID_MIN:
        raise BadParameter(f"grid must be at least {GRID_MIN}, got {grid}")
    xs = np.linspace(a, b, grid)
    vals = np.array([f(x) for x in xs])
    roots: list[float] = []
    for i in range(grid - 1):
        v0, v1 = vals[i], vals[i + 1]
        if v0 == 0.0:
            if i == 0 or vals[i - 1] * v1 < 0.0 or (i > 0 and vals[i - 1] != 0.0 and v1 == 0.0):
                roots.append(float(xs[i]))
            continue
        if v0 * v1 < 0.0:
            roots.append(_bisect_sign_change(f, float(xs[i]), float(xs[i + 1]), float(v0)))
    return roots


def count_sign_changes(
    f: Callable[[float], float], a: float, b: float, grid: int | None = None
) -> int:
    """Number of sign changes of f on [a, b] detected on a uniform grid.

    A zero sitting exactly at the right endpoint (the constructed boundary
    condition of a barrier solution) counts once: it is detected by value,
    not by a crossing, and skipped when the last cell already crossed.
    """
    if not b > a:
        raise BadParameter("need b > a")
    if grid is None:
        grid = max(GRID_MIN, math.ceil(GRID_PER_UNIT * (b - a)))
    if grid < GRID_MIN:
        raise BadParameter(f"grid must be at least {GRID_MIN}, got {grid}")
    xs = np.linspace(a, b, grid)
    vals = np.array([f(x) for x in xs])
    finite = vals[np.isfinite(vals)]
    scale = float(np.max(np.abs(finite))) if len(finite) else 1.0
    count = 0
    for i in range(grid - 1):
        v0, v1 = vals[i], vals[i + 1]
        if v0 * v1 < 0.0:
            _bisect_sign_change(f, float(xs[i]), float(xs[i + 1]), float(v0))
            count += 1
    if abs(vals[-1]) < 1e-9 * max(1.0, scale) and vals[-2] * vals[-1] >= 0.0:
        count += 1
    return count
