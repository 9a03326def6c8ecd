"""Threshold sequences from zeros and critical points of Coulomb wave functions.

The bound-state count of the screened-potential problem changes at the
interleaved sequences gamma_j (zeros and critical points of the real
function -i M_{-i,1/2}(i r)) and Gamma_j (same for -i M_{+i,1/2}(i r)):
odd indices are critical points, even indices are zeros.

Zeros are computed by Ikebe's method (Ikebe 1975): rho != 0 is a zero of
the regular Coulomb function F_L(eta, .) exactly when 1/rho is an
eigenvalue of an infinite symmetric tridiagonal matrix obtained by
symmetrizing the three-term recurrence in L satisfied by F_L (DLMF 33.4.1),

    row ell = L+1, L+2, ...:
        diagonal       -eta / (ell (ell + 1))
        off-diagonal   sqrt(1 + eta^2/(ell+1)^2) / sqrt((2 ell + 1)(2 ell + 3)),

truncated at a finite order; the largest eigenvalues give the smallest
zeros.  Critical points come from the bordered variant with one extra row
at ell = L (diagonal -eta/(L+1)^2, off-diagonal
sqrt(1 + eta^2/(L+1)^2)/sqrt((L+1)(2L+3))), which encodes the derivative
condition through the recurrence for F_L'.  The Whittaker argument map is
r = 2 rho, and eta = -1 / +1 selects the gamma / Gamma family.

The matrix entries are not tabulated in standard references in this exact
symmetrized form, so every Ikebe-built table entry is cross-checked
against direct bisection on the Whittaker series before it is accepted.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

from .errors import BadParameter, CountMismatch, NonConvergence, ValidationFailure
from .specfun import find_sign_changes, whittaker_m, whittaker_m_prime

__all__ = [
    "RootMethod",
    "RootTables",
    "TridiagonalMatrix",
    "ikebe_zero_matrix",
    "ikebe_critical_matrix",
    "symmetric_tridiagonal_eigenvalues",
    "bisection_roots",
    "default_order",
    "build_root_tables",
    "interval_indices",
    "nearest_entry_distance",
    "root_tables_to_csv",
    "root_tables_to_dict",
    "root_tables_from_dict",
]

DEFAULT_ORDER = 400
CROSS_CHECK_TOL = 1e-6
SEPARATION_GAP = 2.31
GRID_LOCAL = 100


class RootMethod(Enum):
    IKEBE = "Ikebe"
    BISECTION = "Bisection"


@dataclass(frozen=True)
class TridiagonalMatrix:
    diagonal: np.ndarray
    off_diagonal: np.ndarray
    order: int

    def __post_init__(self) -> None:
        if self.order < 2:
            raise BadParameter("order must be at least 2")
        if len(self.diagonal) != self.order or len(self.off_diagonal) != self.order - 1:
            raise BadParameter("diagonal/off-diagonal lengths inconsistent with order")


@dataclass(frozen=True)
class RootTables:
    """Interleaved threshold sequences; gamma_0 = Gamma_0 = 0 are implicit.

    order records the Ikebe truncation used (None for pure bisection), so
    cached tables can be invalidated when the default changes.
    """

    gamma_seq: tuple[float, ...]
    big_gamma_seq: tuple[float, ...]
    count: int
    method: RootMethod
    order: int | None = None

    def __post_init__(self) -> None:
        if self.count != len(self.gamma_seq) or self.count != len(self.big_gamma_seq):
            raise BadParameter("count must equal the length of both sequences")
        for seq, name in ((self.gamma_seq, "gamma"), (self.big_gamma_seq, "Gamma")):
            if any(b <= a for a, b in zip(seq, seq[1:])) or (seq and seq[0] <= 0):
                raise ValidationFailure(f"{name} sequence is not strictly increasing and positive")
        for j, (g, bg) in enumerate(zip(self.gamma_seq, self.big_gamma_seq), start=1):
            if not g + SEPARATION_GAP < bg:
                raise ValidationFailure(
                    f"separation gamma_{j} + {SEPARATION_GAP} < Gamma_{j} violated: {g} vs {bg}"
                )


def _family_value(eta: float) -> Callable[[float], float]:
    kappa = 1j * eta
    return lambda r: (-1j * whittaker_m(kappa, 0.5, 1j * r)).real


def _family_derivative(eta: float) -> Callable[[float], float]:
    # d/dr [-i M(i r)] = M'(i r): the -i and the chain-rule i cancel.
    kappa = 1j * eta
    return lambda r: whittaker_m_prime(kappa, 0.5, 1j * r).real


def ikebe_zero_matrix(L: int, eta: float, order: int) -> TridiagonalMatrix:
    """Truncated Ikebe matrix whose positive eigenvalues are 1/zeros of F_L(eta, .)."""
    if order < 20:
        raise BadParameter("order must be at least 20 for meaningful truncation")
    if L < 0:
        raise BadParameter("L must be non-negative")
    ells = np.arange(L + 1, L + 1 + order, dtype=float)
    diag = -eta / (ells * (ells + 1.0))
    lo = ells[:-1]
    off = np.sqrt(1.0 + eta**2 / (lo + 1.0) ** 2) / np.sqrt((2.0 * lo + 1.0) * (2.0 * lo + 3.0))
    return TridiagonalMatrix(diag, off, order)


def ikebe_critical_matrix(L: int, eta: float, order: int) -> TridiagonalMatrix:
    """Bordered Ikebe matrix for critical points of F_L(eta, .)."""
    if order < 20:
        raise BadParameter("order must be at least 20 for meaningful truncation")
    if L < 0:
        raise BadParameter("L must be non-negative")
    inner = ikebe_zero_matrix(L, eta, order - 1)
    diag = np.concatenate(([-eta / (L + 1.0) ** 2], inner.diagonal))
    border = math.sqrt(1.0 + eta**2 / (L + 1.0) ** 2) / math.sqrt((L + 1.0) * (2.0 * L + 3.0))
    off = np.concatenate(([border], inner.off_diagonal))
    return TridiagonalMatrix(diag, off, order)


def symmetric_tridiagonal_eigenvalues(m: TridiagonalMatrix) -> list[float]:
    """All eigenvalues, ascending (LAPACK implicit-shift QL/QR via scipy)."""
    try:
        lam = eigh_tridiagonal(m.diagonal, m.off_diagonal, eigvals_only=True)
    except LinAlgError as exc:
        raise NonConvergence(f"tridiagonal eigensolver failed: {exc}") from exc
    return [float(x) for x in lam]


def _reciprocal_roots(m: TridiagonalMatrix, how_many: int) -> list[float]:
    lam = np.asarray(symmetric_tridiagonal_eigenvalues(m))
    pos = np.sort(lam[lam > 0.0])[::-1]
    if len(pos) < how_many:
        raise BadParameter(
            f"truncation order {m.order} yields only {len(pos)} positive eigenvalues, "
            f"need {how_many}"
        )
    return [float(2.0 / x) for x in pos[:how_many]]  # Whittaker argument r = 2 rho


def bisection_roots(
    f: Callable[[float], float], lo: float, hi: float, expected: int
) -> list[float]:
    """All sign-change roots of f on [lo, hi]; raises if the count is off."""
    roots = find_sign_changes(f, lo, hi)
    if len(roots) != expected:
        raise CountMismatch(
            f"found {len(roots)} sign changes on [{lo}, {hi}], expected {expected}"
        )
    return roots


def _bisection_refine_near(f: Callable[[float], float], center: float, half_width: float) -> float:
    lo = max(1e-9, center - half_width)
    roots = find_sign_changes(f, lo, center + half_width, grid=GRID_LOCAL)
    if len(roots) != 1:
        raise ValidationFailure(
            f"expected exactly one sign change near r = {center:.9g}, found {len(roots)}"
        )
    return roots[0]


def _interleave(crits: list[float], zeros: list[float], count: int) -> tuple[float, ...]:
    seq: list[float] = []
    for j in range(1, count + 1):
        if j % 2 == 1:
            seq.append(crits[(j - 1) // 2])
        else:
            seq.append(zeros[j // 2 - 1])
    return tuple(seq)


def _family_by_ikebe(eta: float, count: int, order: int) -> tuple[float, ...]:
    n_zeros = count // 2
    n_crits = count - n_zeros
    crits = _reciprocal_roots(ikebe_critical_matrix(0, eta, order), n_crits)
    zeros = _reciprocal_roots(ikebe_zero_matrix(0, eta, order), n_zeros)
    return _interleave(crits, zeros, count)


def _family_by_bisection(eta: float, count: int) -> tuple[float, ...]:
    # Entry spacing approaches 2 pi from below; 3.8 per entry plus slack is generous.
    hi = 3.8 * count + 10.0
    n_zeros = count // 2
    n_crits = count - n_zeros
    # Within one family, consecutive zeros (and consecutive criticals) are
    # separated by at least 3.9, so 4 scan points per unit cannot straddle
    # two roots; the refinement then bisects each bracket to 1e-10.
    grid = max(100, int(math.ceil(4.0 * hi)))
    zeros = find_sign_changes(_family_value(eta), 1e-6, hi, grid=grid)
    crits = find_sign_changes(_family_derivative(eta), 1e-6, hi, grid=grid)
    if len(zeros) < n_zeros or len(crits) < n_crits:
        raise CountMismatch(
            f"scan to r = {hi} found {len(crits)} criticals / {len(zeros)} zeros, "
            f"need {n_crits} / {n_zeros}"
        )
    return _interleave(crits[:n_crits], zeros[:n_zeros], count)


def default_order(count: int) -> int:
    """Truncation order giving ~1e-12 stable entries out to the count-th root."""
    return max(DEFAULT_ORDER, 22 * count)


def build_root_tables(
    count: int, method: RootMethod = RootMethod.IKEBE, order: int | None = None
) -> RootTables:
    """Build the first `count` entries of both threshold sequences.

    With the Ikebe method every entry is re-derived by local bisection on
    the Whittaker series and the two must agree to 1e-6, so a wrong matrix
    entry cannot pass silently.
    """
    if count < 1:
        raise BadParameter("count must be at least 1")
    if method is RootMethod.BISECTION:
        gamma_seq = _family_by_bisection(-1.0, count)
        big_gamma_seq = _family_by_bisection(+1.0, count)
        return RootTables(gamma_seq, big_gamma_seq, count, method, None)

    if order is None:
        order = default_order(count)
    gamma_seq = _family_by_ikebe(-1.0, count, order)
    big_gamma_seq = _family_by_ikebe(+1.0, count, order)
    for eta, seq, name in ((-1.0, gamma_seq, "gamma"), (+1.0, big_gamma_seq, "Gamma")):
        value_f = _family_value(eta)
        deriv_f = _family_derivative(eta)
        for j, entry in enumerate(seq, start=1):
            f = deriv_f if j % 2 == 1 else value_f
            check = _bisection_refine_near(f, entry, 0.5)
            if abs(check - entry) > CROSS_CHECK_TOL:
                raise ValidationFailure(
                    f"{name}_{j}: Ikebe {entry:.12g} vs bisection {check:.12g} "
                    f"disagree beyond {CROSS_CHECK_TOL}"
                )
    return RootTables(gamma_seq, big_gamma_seq, count, method, order)


def interval_indices(tables: RootTables, gamma: float) -> tuple[int, int]:
    """(n, j) with gamma in [Gamma_n, Gamma_{n+1}) and [gamma_{j-1}, gamma_j).

    j - n is the bound-state count and n the ground winding number.  Both
    lookups use the implicit zeroth entries gamma_0 = Gamma_0 = 0.
    """
    if gamma <= 0:
        raise BadParameter("gamma must be positive")
    j = bisect_right(tables.gamma_seq, gamma) + 1
    n = bisect_right(tables.big_gamma_seq, gamma)
    if gamma >= tables.gamma_seq[-1] or gamma >= tables.big_gamma_seq[-1]:
        raise BadParameter(
            f"gamma = {gamma} is beyond the computed tables (count = {tables.count}); "
            "build larger tables"
        )
    return n, j


def nearest_entry_distance(tables: RootTables, gamma: float) -> float:
    entries = tables.gamma_seq + tables.big_gamma_seq
    return min(abs(gamma - e) for e in entries)


def root_tables_to_csv(tables: RootTables) -> str:
    """CSV text: index, kind (zero/critical), gamma_value, big_gamma_value."""
    lines = ["index,kind,gamma_value,big_gamma_value"]
    for j in range(1, tables.count + 1):
        kind = "critical" if j % 2 == 1 else "zero"
        lines.append(
            f"{j},{kind},{tables.gamma_seq[j - 1]:.12g},{tables.big_gamma_seq[j - 1]:.12g}"
        )
    return "\n".join(lines) + "\n"


def root_tables_to_dict(tables: RootTables) -> dict:
    return {
        "count": tables.count,
        "method": tables.method.value,
        "order": tables.order,
        "gamma_seq": list(tables.gamma_seq),
        "big_gamma_seq": list(tables.big_gamma_seq),
    }


def root_tables_from_dict(data: dict) -> RootTables:
    return RootTables(
        tuple(float(x) for x in data["gamma_seq"]),
        tuple(float(x) for x in data["big_gamma_seq"]),
        int(data["count"]),
        RootMethod(data["method"]),
        data.get("order"),
    )
