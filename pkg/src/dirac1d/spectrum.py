"""Eigenvalue engine: shooting per winding number, enumeration, reconstruction.

A bound state of winding N is a saddles connector of the compactified flow,
found by shooting forward from the symmetric midpoint condition
Theta(0) = pi (2 - N) and bisecting the trial energy on the classification
of the terminal phase against the target Theta_inf = 2 pi - acos(E) - 2 pi N.
Raising E lowers the whole orbit (dG/dE = -2), so undershoot/overshoot
bracket the eigenvalue monotonically and bisection from the interval ends
(-1 + 1e-6, 1 - 1e-6) is safe.

The shot is integrated to a fixed horizon just past the numerical death of
the potential, 36 + ln(1 + gamma), where the sign of Theta - target is
already the settled verdict.  At that horizon the connector itself is
tracked to ~e^{-36}, so the bisection root coincides with the true
eigenvalue far below double precision even though the final orbit, at
practical tolerances, visibly detaches from the saddle before the horizon
(the separation grows like e^{2 sqrt(1-E^2) s}).  Reconstruction therefore
splices the orbit at its closest approach to the saddle phase and continues
with the exact asymptotic value, which reproduces the e^{-sqrt(1-E^2)|s|}
density tail without amplifying the detachment.

The two-sided orbit is never integrated: Theta(0) being a multiple of pi
makes the flow odd about the midpoint, Theta(-s) = 2 Theta(0) - Theta(s),
so the density is even in s and the left half is synthesized by reflection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .errors import (
    BadParameter,
    BracketFailure,
    CountMismatch,
    EnergyTooCloseToContinuum,
    NonNormalizable,
    ThresholdDegenerate,
    ValidationFailure,
)
from .model import ModelParams, PruferState, WindingNumber, winding_number
from .ode import (
    DEFAULT_CONFIG,
    Direction,
    IntegratorConfig,
    Orbit,
    TerminalKind,
    classify_terminal,
    default_margin,
    integrate,
)
from .roots import RootTables, interval_indices, nearest_entry_distance

__all__ = [
    "BoundState",
    "SpectrumSummary",
    "CONTINUUM_DELTA",
    "shooting_horizon",
    "shoot",
    "find_eigenvalue",
    "enumerate_bound_states",
    "reconstruct_wavefunction",
    "staircase",
    "count_crests",
]

# Exclusion zone around |E| = 1: classification margins collapse there.
CONTINUUM_DELTA = 1e-6

# Eigenvalues returned inside twice the exclusion zone get a LowConfidence flag.
LOW_CONFIDENCE_BAND = 2e-6

HORIZON_BASE = 36.0
S_GRID_STEP = 1e-3

# Grid extension target: analytic tail mass left beyond the grid, relative.
# At this level the endpoint density sits below 1e-12 of the peak for every
# lambda = sqrt(1 - E^2), so R at the grid ends is under 1e-6.
TAIL_MASS = 1e-13

# Largest acceptable distance from the orbit to the saddle phase at closest
# approach for reconstruction to regard it as a connector.
SPLICE_TOL = 0.05

CREST_PLATEAU = 1e-12
MAX_GRID_POINTS = 4_000_000
THRESHOLD_PROXIMITY = 1e-9


@dataclass(frozen=True)
class BoundState:
    """One bound state: eigenvalue, orbit, and reconstructed wavefunction.

    density = u_samples^2 + v_samples^2 = R^2 on s_grid, normalized so its
    trapezoidal integral over the grid is 1; thetas holds the (spliced)
    phase used for the reconstruction at each grid point.
    """

    winding: WindingNumber
    energy: float
    orbit: Orbit
    s_grid: np.ndarray
    thetas: np.ndarray
    density: np.ndarray
    u_samples: np.ndarray
    v_samples: np.ndarray
    normalization_residual: float
    low_confidence: bool = False

    def __post_init__(self) -> None:
        n = len(self.s_grid)
        if not (
            len(self.thetas)
            == len(self.density)
            == len(self.u_samples)
            == len(self.v_samples)
            == n
        ):
            raise BadParameter("grid arrays must have equal length")


@dataclass(frozen=True)
class SpectrumSummary:
    """All bound states at one coupling, ordered by winding number."""

    gamma: float
    n_index: int
    j_index: int
    ground_winding: int
    count: int
    states: tuple[BoundState, ...]

    def __post_init__(self) -> None:
        if self.ground_winding != self.n_index:
            raise ValidationFailure("ground winding must equal the Gamma-interval index n")
        if self.count != self.j_index - self.n_index or self.count != len(self.states):
            raise ValidationFailure("count must equal j - n and the number of states")
        windings = [s.winding.value for s in self.states]
        if windings != list(range(self.n_index, self.j_index)):
            raise ValidationFailure(f"windings {windings} are not consecutive n .. j-1")
        energies = [s.energy for s in self.states]
        if any(b <= a for a, b in zip(energies, energies[1:])):
            raise ValidationFailure(f"energies {energies} are not strictly increasing")


def shooting_horizon(gamma: float) -> float:
    """Integration horizon: past it gamma e^{-s} < 1e-15, verdicts are settled."""
    return HORIZON_BASE + math.log1p(max(gamma, 0.0))


def theta_target(energy: float, N: int) -> float:
    return 2.0 * math.pi - math.acos(energy) - 2.0 * math.pi * N


def shoot(
    params: ModelParams, N: int, config: IntegratorConfig = DEFAULT_CONFIG
) -> tuple[Orbit, TerminalKind]:
    """One forward shot from Theta(0) = pi (2 - N), classified against its target."""
    if N < 0:
        raise BadParameter("winding number must be non-negative")
    energy = params.energy
    if 1.0 - abs(energy) < CONTINUUM_DELTA:
        raise EnergyTooCloseToContinuum(
            f"|E| = {abs(energy)} is within {CONTINUUM_DELTA} of the continuum edge"
        )
    theta0 = math.pi * (2.0 - N)
    target = theta_target(energy, N)
    margin = default_margin(energy)
    orbit = integrate(
        params,
        PruferState(0.0, theta0),
        Direction.FORWARD,
        config,
        theta_target=target,
        tau_end=shooting_horizon(params.gamma),
        margin=margin,
    )
    kind = orbit.terminal.kind
    if kind is TerminalKind.TRUNCATED:
        kind = classify_terminal(orbit, target, margin)
    if kind is TerminalKind.CONVERGED:
        # Theta(-inf) = 2 Theta(0) - Theta(+inf) by the midpoint reflection.
        orbit = replace(orbit, winding=winding_number(2.0 * theta0 - target, target))
    return orbit, kind


def find_eigenvalue(
    gamma: float,
    N: int,
    tol: float,
    tables: RootTables,
    config: IntegratorConfig = DEFAULT_CONFIG,
) -> float | None:
    """Bisect for the winding-N eigenvalue at coupling gamma; None if absent.

    The root tables decide existence up front: winding N exists exactly for
    n <= N < j.  Classification is monotone in E (undershoot below the
    eigenvalue, overshoot above), so if both ends of (-1 + 1e-6, 1 - 1e-6)
    judge the same way the eigenvalue is pinched between that end and the
    continuum edge: the boundary value is returned unrefined, and the
    reconstruction flags it low-confidence.  The inverted pattern
    (overshoot below, undershoot above) contradicts monotonicity and
    signals a broken integration horizon.
    """
    if not (gamma > 0.0 and math.isfinite(gamma)):
        raise BadParameter("gamma must be positive")
    if tol < 1e-12:
        raise BadParameter("tol below 1e-12 exceeds shooting resolution")
    if N < 0:
        raise BadParameter("winding number must be non-negative")
    n, j = interval_indices(tables, gamma)
    if N < n or N >= j:
        return None

    def judge(energy: float) -> TerminalKind:
        return shoot(ModelParams(gamma, energy), N, config)[1]

    lo = -1.0 + CONTINUUM_DELTA
    hi = 1.0 - CONTINUUM_DELTA
    c_lo = judge(lo)
    if c_lo is TerminalKind.CONVERGED:
        return lo
    c_hi = judge(hi)
    if c_hi is TerminalKind.CONVERGED:
        return hi
    if c_lo is TerminalKind.OVERSHOOT and c_hi is TerminalKind.UNDERSHOOT:
        raise BracketFailure(
            f"classification inverted for gamma={gamma}, N={N}: overshoot at the "
            "bottom of the energy window and undershoot at the top contradict "
            "monotonicity; the integration budget is too small"
        )
    if c_lo is TerminalKind.OVERSHOOT:
        return lo  # eigenvalue pinched in (-1, -1 + 1e-6): report the edge
    if c_hi is TerminalKind.UNDERSHOOT:
        return hi  # eigenvalue pinched in (1 - 1e-6, 1): report the edge
    while hi - lo > 2.0 * tol:
        mid = 0.5 * (lo + hi)
        c = judge(mid)
        if c is TerminalKind.CONVERGED:
            return mid
        if c is TerminalKind.UNDERSHOOT:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def count_crests(density: np.ndarray) -> int:
    """Strict local maxima of the density, with a 1e-12 plateau tolerance."""
    density = np.asarray(density, dtype=float)
    if len(density) < 3:
        return 0
    thr = CREST_PLATEAU * float(np.max(density))
    d = np.diff(density)
    sgn = np.where(d > thr, 1, np.where(d < -thr, -1, 0))
    sgn = sgn[sgn != 0]
    if len(sgn) < 2:
        return 0
    return int(np.sum((sgn[:-1] == 1) & (sgn[1:] == -1)))


def _assemble_state(
    s_right: np.ndarray,
    theta_right: np.ndarray,
    theta0: float,
    N: int,
    energy: float,
    orbit: Orbit,
    low_confidence: bool,
) -> BoundState:
    log_r_right = cumulative_trapezoid(np.sin(theta_right), s_right, initial=0.0)
    s_full = np.concatenate((-s_right[:0:-1], s_right))
    theta_full = np.concatenate((2.0 * theta0 - theta_right[:0:-1], theta_right))
    log_r_full = np.concatenate((log_r_right[:0:-1], log_r_right))  # even in s

    r_un = np.exp(log_r_full)
    norm = float(np.trapezoid(r_un * r_un, s_full))
    if not (np.isfinite(norm) and norm > 0.0):
        raise NonNormalizable(f"density integral over the grid is {norm}")
    r_amp = r_un / math.sqrt(norm)
    rho = r_amp * r_amp
    peak = float(np.max(rho))
    if max(rho[0], rho[-1]) > 1e-8 * peak:
        raise NonNormalizable(
            "density has not decayed at the grid ends; the grid does not cover the support"
        )
    u = r_amp * np.cos(0.5 * theta_full)
    v = r_amp * np.sin(0.5 * theta_full)
    crests = count_crests(rho)
    if crests != N + 1:
        raise CountMismatch(
            f"density of the winding-{N} state shows {crests} crests, expected {N + 1}"
        )
    residual = abs(float(np.trapezoid(rho, s_full)) - 1.0)
    return BoundState(
        winding=WindingNumber(N),
        energy=energy,
        orbit=orbit,
        s_grid=s_full,
        thetas=theta_full,
        density=rho,
        u_samples=u,
        v_samples=v,
        normalization_residual=residual,
        low_confidence=low_confidence,
    )


def reconstruct_wavefunction(
    orbit: Orbit, params: ModelParams, s_grid: np.ndarray | None = None
) -> BoundState:
    """Rebuild R, u, v and the density from a connector orbit.

    log R is the cumulative trapezoidal integral of sin Theta from the
    midpoint; beyond the orbit's closest approach to the saddle phase the
    exact asymptotic Theta = target is used, and the grid is extended until
    the analytic tail mass drops below 1e-13 of the norm.  The left half
    follows from the midpoint reflection.
    """
    energy = params.energy
    if not -1.0 < energy < 1.0:
        raise BadParameter("reconstruction needs |E| < 1")
    theta0 = orbit.initial_theta
    n_real = 2.0 - theta0 / math.pi
    N = round(n_real)
    if abs(n_real - N) > 1e-9 or N < 0:
        raise BadParameter(
            f"orbit starts at Theta = {theta0}, not a symmetric shot pi(2 - N) with N >= 0"
        )
    target = theta_target(energy, N)
    dist = np.abs(orbit.thetas - target)
    i_best = int(np.argmin(dist))
    miss = float(dist[i_best])
    if miss > SPLICE_TOL:
        raise NonNormalizable(
            f"orbit misses the saddle phase by {miss:.3g} rad at closest approach; "
            "not a connector at this energy"
        )
    s_splice = float(orbit.taus[i_best])
    spline = orbit.theta_of_tau()
    lam = math.sqrt(1.0 - energy * energy)
    low_confidence = 1.0 - abs(energy) < LOW_CONFIDENCE_BAND
    orbit = replace(orbit, winding=WindingNumber(N))

    def theta_rule(s_abs: np.ndarray) -> np.ndarray:
        return np.where(s_abs <= s_splice, spline(np.minimum(s_abs, s_splice)), target)

    if s_grid is not None:
        s_grid = np.asarray(s_grid, dtype=float)
        if s_grid.ndim != 1 or len(s_grid) < 5:
            raise BadParameter("s_grid must be a 1-d array with at least 5 points")
        if not np.all(np.diff(s_grid) > 0.0):
            raise BadParameter("s_grid must be strictly increasing")
        if len(s_grid) % 2 == 0 or np.max(np.abs(s_grid + s_grid[::-1])) > 1e-9:
            raise BadParameter("s_grid must be symmetric about 0 and contain it")
        s_right = s_grid[len(s_grid) // 2 :].copy()
        s_right[0] = 0.0
        return _assemble_state(
            s_right, theta_rule(s_right), theta0, N, energy, orbit, low_confidence
        )

    h = S_GRID_STEP
    n1 = max(3, int(math.ceil(s_splice / h)) + 1)
    s1 = h * np.arange(n1)
    th1 = theta_rule(s1)
    log_r1 = cumulative_trapezoid(np.sin(th1), s1, initial=0.0)
    rho1 = np.exp(2.0 * log_r1)
    core = float(np.trapezoid(rho1, s1))
    tail = float(rho1[-1]) / (2.0 * lam)
    total = core + tail
    shrink = tail / (TAIL_MASS * total)
    extra = 0.0 if shrink <= 1.0 else math.log(shrink) / (2.0 * lam)
    n2 = int(math.ceil(extra / h))
    if n1 + n2 > MAX_GRID_POINTS:
        raise NonNormalizable(
            f"support extends over ~{(n1 + n2) * h:.0f} units (|E| too close to 1); "
            "refusing to build the grid"
        )
    s_right = h * np.arange(n1 + n2)
    return _assemble_state(s_right, theta_rule(s_right), theta0, N, energy, orbit, low_confidence)


def enumerate_bound_states(
    gamma: float,
    tol: float,
    tables: RootTables,
    config: IntegratorConfig = DEFAULT_CONFIG,
) -> SpectrumSummary:
    """All bound states at coupling gamma: windings n .. j-1 from the tables."""
    if not (gamma > 0.0 and math.isfinite(gamma)):
        raise BadParameter("gamma must be positive")
    if nearest_entry_distance(tables, gamma) < THRESHOLD_PROXIMITY:
        raise ThresholdDegenerate(
            f"gamma = {gamma} is within {THRESHOLD_PROXIMITY} of a threshold entry"
        )
    n, j = interval_indices(tables, gamma)
    states = []
    for N in range(n, j):
        energy = find_eigenvalue(gamma, N, tol, tables, config)
        if energy is None:  # unreachable: N ranges over the table interval
            raise ValidationFailure(f"winding {N} vanished from its own interval")
        params = ModelParams(gamma, energy)
        orbit, _ = shoot(params, N, config)
        states.append(reconstruct_wavefunction(orbit, params))
    return SpectrumSummary(
        gamma=gamma,
        n_index=n,
        j_index=j,
        ground_winding=n,
        count=j - n,
        states=tuple(states),
    )


def staircase(
    gamma_min: float, gamma_max: float, steps: int, tables: RootTables
) -> list[tuple[float, int, int]]:
    """(gamma, ground winding, count) on a uniform grid, from the tables alone."""
    if not (0.0 < gamma_min < gamma_max):
        raise BadParameter("need 0 < gamma_min < gamma_max")
    if steps < 2:
        raise BadParameter("need at least 2 steps")
    out = []
    for g in np.linspace(gamma_min, gamma_max, steps):
        g_eval = float(g)
        if nearest_entry_distance(tables, g_eval) < THRESHOLD_PROXIMITY:
            g_eval += THRESHOLD_PROXIMITY
        n, j = interval_indices(tables, g_eval)
        out.append((float(g), n, j - n))
    return out
