"""Adaptive integration of the compactified phase flow with shooting-aware halts.

The integrator is a hand-rolled Dormand-Prince 5(4) embedded pair (FSAL,
PI step-size control).  A bespoke loop is used instead of a library solver
because the halting rules are not plain events:

* Theta window with arming.  The caller supplies a target phase and the
  orbit is stopped once Theta leaves [target - 3 pi, target + 3 pi], but an
  exit only counts after the orbit has actually been inside the window.
  High-winding shots start above the window, and an unarmed upper bound
  would fire at tau = 0.  A window exit is a definitive verdict: below the
  window the free flow can never climb back past an attracting node
  (dTheta/dtau <= 2 (cos Theta - E) is < 0 at every node), so the orbit has
  overshot no matter what the potential still does.
* Potential-death horizon.  Once gamma exp(-|s|) is numerically dead the
  Theta flow is autonomous and monotone between equilibria, so the sign of
  Theta(tau_end) - target already decides overshoot versus undershoot;
  integrating further only burns steps.  The caller chooses tau_end so the
  horizon lies safely past the death of the potential.

Every accepted step is stored together with dTheta/dtau, so a cubic Hermite
interpolant of Theta(tau) is available for eigenfunction reconstruction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .errors import BadParameter, IndeterminateTerminal, StepSizeUnderflow
from .model import EPS_Z, HALF_PI, ModelParams, PruferState, WindingNumber

__all__ = [
    "Direction",
    "TerminalKind",
    "Terminal",
    "IntegratorConfig",
    "DEFAULT_CONFIG",
    "Orbit",
    "default_margin",
    "integrate",
    "classify_terminal",
]

THETA_WINDOW_HALF_WIDTH = 3.0 * math.pi

# Below this, gamma * exp(-|s|) cannot move Theta by more than ~1e-12 over the
# remaining integration, so terminal verdicts are already settled.
POTENTIAL_DEAD = 1e-12

# |dTheta/dtau| below this counts as stationary when judging truncated orbits.
STALL_RATE = 1e-9

MIN_STEP = 1e-14

# Dormand-Prince 5(4) tableau.  Stage 7 is evaluated at the fifth-order
# result, so its derivative seeds the next step (first-same-as-last).
_A = (
    (),
    (1.0 / 5.0,),
    (3.0 / 40.0, 9.0 / 40.0),
    (44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0),
    (19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0),
    (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0),
    (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0),
)
# Fifth-order minus fourth-order weights: the embedded error estimate.
_E = (
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)

_SAFETY = 0.9
_ALPHA = 0.7 / 5.0
_BETA = 0.4 / 5.0
_FAC_MIN = 0.2
_FAC_MAX = 10.0


class Direction(Enum):
    FORWARD = "forward"
    BACKWARD = "backward"


class TerminalKind(Enum):
    CONVERGED = "converged"
    OVERSHOOT = "overshoot"
    UNDERSHOOT = "undershoot"
    TRUNCATED = "truncated"


@dataclass(frozen=True)
class Terminal:
    """Why integration stopped; CONVERGED carries the phase it homed in on."""

    kind: TerminalKind
    target: float | None = None


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-10
    max_step: float = 1.0
    max_steps: int = 2_000_000

    def __post_init__(self) -> None:
        if not (self.rel_tol > 0.0 and self.abs_tol > 0.0 and self.max_step > 0.0):
            raise BadParameter("rel_tol, abs_tol and max_step must be positive")
        if self.max_steps <= 0:
            raise BadParameter("max_steps must be positive")


DEFAULT_CONFIG = IntegratorConfig()


@dataclass(frozen=True)
class Orbit:
    """A sampled trajectory of the (z, Theta) flow.

    taus ascend strictly; zs are non-decreasing because dz/dtau = cos^2 z
    never changes sign.  theta_dots holds dTheta/dtau in forward time at
    each sample (backward runs are stored reversed, so this convention is
    uniform).  winding is attached by the shooting layer once an orbit has
    been identified as a saddles connector.
    """

    taus: np.ndarray
    zs: np.ndarray
    thetas: np.ndarray
    theta_dots: np.ndarray
    terminal: Terminal
    winding: WindingNumber | None = None

    def __post_init__(self) -> None:
        n = len(self.taus)
        if n == 0 or not (len(self.zs) == len(self.thetas) == len(self.theta_dots) == n):
            raise BadParameter("sample arrays must be nonempty and of equal length")
        if n > 1:
            if not np.all(np.diff(self.taus) > 0.0):
                raise BadParameter("samples must be strictly increasing in tau")
            if not np.all(np.diff(self.zs) >= -1e-12):
                raise BadParameter("z samples must be non-decreasing")

    @property
    def samples(self) -> list[tuple[float, PruferState]]:
        return [
            (float(t), PruferState(float(min(max(z, -HALF_PI), HALF_PI)), float(th)))
            for t, z, th in zip(self.taus, self.zs, self.thetas)
        ]

    @property
    def initial_theta(self) -> float:
        return float(self.thetas[0])

    @property
    def final_theta(self) -> float:
        return float(self.thetas[-1])

    @property
    def final_state(self) -> PruferState:
        z = float(min(max(self.zs[-1], -HALF_PI), HALF_PI))
        return PruferState(z, float(self.thetas[-1]))

    def theta_of_tau(self) -> CubicHermiteSpline:
        """Cubic Hermite interpolant of Theta(tau) through the samples."""
        if len(self.taus) < 2:
            raise BadParameter("need at least two samples to interpolate")
        return CubicHermiteSpline(self.taus, self.thetas, self.theta_dots)


def default_margin(energy: float) -> float:
    """Half the distance from a saddle to its nearest attracting node, capped.

    The nodes adjacent to a saddle sit 2 acos(E) above and 2 pi - 2 acos(E)
    below it, so min(acos E, pi - acos E) separates "settled at the saddle"
    from "settled at a node"; pi/4 caps it away from sloppy verdicts.
    """
    if abs(energy) >= 1.0:
        return 0.25 * math.pi
    a = math.acos(energy)
    return min(0.25 * math.pi, a, math.pi - a)


def _forward_rates(z: float, theta: float, gamma: float, energy: float) -> tuple[float, float]:
    # Raw-float mirror of model.z_rhs / model.theta_rhs; pinned to them by tests.
    c = math.cos(z)
    if abs(z) >= HALF_PI - EPS_Z:
        pot = 0.0
    else:
        pot = gamma * math.exp(-abs(math.tan(z)))
    return c * c, 2.0 * math.cos(theta) - pot - 2.0 * energy


def _potential_settled(gamma: float, z: float) -> bool:
    if abs(z) >= HALF_PI - EPS_Z:
        return True
    return gamma * math.exp(-abs(math.tan(z))) <= POTENTIAL_DEAD


def _verdict(theta_f: float, theta_target: float | None, margin: float, settled: bool) -> Terminal:
    if theta_target is None or not settled:
        return Terminal(TerminalKind.TRUNCATED)
    d = theta_f - theta_target
    if abs(d) <= margin:
        return Terminal(TerminalKind.CONVERGED, theta_target)
    if d > 0.0:
        return Terminal(TerminalKind.UNDERSHOOT)
    return Terminal(TerminalKind.OVERSHOOT)


def integrate(
    params: ModelParams,
    initial: PruferState,
    direction: Direction = Direction.FORWARD,
    config: IntegratorConfig = DEFAULT_CONFIG,
    theta_target: float | None = None,
    tau_end: float | None = None,
    margin: float | None = None,
) -> Orbit:
    """Integrate the flow from `initial` until a halting rule fires.

    Halting rules, in the order checked after each accepted step:

    1. z within EPS_Z of a boundary circle (also checked at the start, so
       an orbit launched on a boundary halts immediately; launched at an
       equilibrium it is the stationary orbit).
    2. Theta left the armed window [theta_target - 3 pi, theta_target + 3 pi]:
       terminal OVERSHOOT below, UNDERSHOOT above.
    3. tau advanced by tau_end: verdict by the sign of Theta - theta_target
       with the given margin, but only if the potential is already dead
       there; otherwise TRUNCATED (extend tau_end).
    4. max_steps attempted: TRUNCATED.

    For Direction.BACKWARD the field is negated, tau_end bounds |tau|, and
    the samples are stored reversed so taus still ascend.
    """
    gamma = params.gamma
    energy = params.energy
    if margin is None:
        margin = default_margin(energy)
    sgn = 1.0 if direction is Direction.FORWARD else -1.0

    if theta_target is not None:
        window_lo = theta_target - THETA_WINDOW_HALF_WIDTH
        window_hi = theta_target + THETA_WINDOW_HALF_WIDTH
    else:
        window_lo = window_hi = None

    def g(z: float, theta: float) -> tuple[float, float]:
        fz, ft = _forward_rates(z, theta, gamma, energy)
        return sgn * fz, sgn * ft

    z = float(initial.z)
    th = float(initial.theta)
    k1z, k1t = g(z, th)

    xs = [0.0]  # virtual time, always advancing
    zs = [z]
    ths = [th]
    dths = [sgn * k1t]  # forward-time rate

    armed = window_lo is not None and window_lo <= th <= window_hi
    terminal: Terminal | None = None

    if abs(z) >= HALF_PI - EPS_Z:
        # Launched on a boundary circle: z cannot move, halt at once.
        if theta_target is not None:
            terminal = _verdict(th, theta_target, margin, True)
        elif abs(k1t) <= STALL_RATE:
            terminal = Terminal(TerminalKind.CONVERGED, th)
        else:
            terminal = Terminal(TerminalKind.TRUNCATED)

    x = 0.0
    h = min(config.max_step, 1e-2 / (1.0 + abs(k1t)))
    err_prev = 1.0
    attempts = 0

    while terminal is None:
        if tau_end is not None:
            remaining = tau_end - x
            if remaining <= 1e-12:
                terminal = _verdict(th, theta_target, margin, _potential_settled(gamma, z))
                break
            h = min(h, remaining)
        h = min(h, config.max_step)

        # One step attempt (retried with smaller h on error-test failure).
        while True:
            attempts += 1
            if attempts > config.max_steps:
                terminal = Terminal(TerminalKind.TRUNCATED)
                break
            if h < MIN_STEP:
                raise StepSizeUnderflow(
                    f"step size {h:.3e} fell below {MIN_STEP} at tau = {sgn * x:.6g}"
                )
            kz = [k1z]
            kt = [k1t]
            z_new = th_new = 0.0
            for i in range(1, 7):
                row = _A[i]
                sz = 0.0
                st = 0.0
                for aij, kzj, ktj in zip(row, kz, kt):
                    sz += aij * kzj
                    st += aij * ktj
                zi = z + h * sz
                ti = th + h * st
                if i == 6:
                    z_new, th_new = zi, ti  # fifth-order result (FSAL point)
                kiz, kit = g(zi, ti)
                kz.append(kiz)
                kt.append(kit)

            ez = et = 0.0
            for ei, kzj, ktj in zip(_E, kz, kt):
                ez += ei * kzj
                et += ei * ktj
            ez *= h
            et *= h
            sc_z = config.abs_tol + config.rel_tol * max(abs(z), abs(z_new))
            sc_t = config.abs_tol + config.rel_tol * max(abs(th), abs(th_new))
            err = math.sqrt(0.5 * ((ez / sc_z) ** 2 + (et / sc_t) ** 2))

            if err <= 1.0:
                fac = _FAC_MAX if err == 0.0 else _SAFETY * err**-_ALPHA * err_prev**_BETA
                h_next = h * min(_FAC_MAX, max(_FAC_MIN, fac))
                err_prev = max(err, 1e-4)
                break
            h *= max(_FAC_MIN, _SAFETY * err**-0.2)

        if terminal is not None:
            break

        x += h
        z = min(max(z_new, -HALF_PI), HALF_PI)
        th = th_new
        k1z, k1t = kz[6], kt[6]
        h = h_next

        xs.append(x)
        zs.append(z)
        ths.append(th)
        dths.append(sgn * k1t)

        if abs(z) >= HALF_PI - EPS_Z:
            terminal = _verdict(th, theta_target, margin, True)
            break
        if window_lo is not None:
            if window_lo <= th <= window_hi:
                armed = True
            elif armed:
                if th < window_lo:
                    terminal = Terminal(TerminalKind.OVERSHOOT)
                else:
                    terminal = Terminal(TerminalKind.UNDERSHOOT)
                break

    taus = sgn * np.asarray(xs)
    z_arr = np.asarray(zs)
    th_arr = np.asarray(ths)
    dth_arr = np.asarray(dths)
    if direction is Direction.BACKWARD:
        taus = taus[::-1].copy()
        z_arr = z_arr[::-1].copy()
        th_arr = th_arr[::-1].copy()
        dth_arr = dth_arr[::-1].copy()
    return Orbit(taus, z_arr, th_arr, dth_arr, terminal)


def classify_terminal(orbit: Orbit, theta_target: float, margin: float) -> TerminalKind:
    """Judge an orbit's final phase against a target saddle phase.

    CONVERGED within `margin` of the target, UNDERSHOOT above it (the orbit
    settled toward the node above the saddle), OVERSHOOT below.  An orbit
    that was truncated inside the margin while Theta was still moving is
    genuinely undecided and raises IndeterminateTerminal.
    """
    d = orbit.final_theta - theta_target
    if abs(d) <= margin:
        if (
            orbit.terminal.kind is TerminalKind.TRUNCATED
            and abs(float(orbit.theta_dots[-1])) > STALL_RATE
        ):
            raise IndeterminateTerminal(
                "orbit truncated within margin of the target while still moving; "
                "extend tau_end or raise max_steps"
            )
        return TerminalKind.CONVERGED
    if d > 0.0:
        return TerminalKind.UNDERSHOOT
    return TerminalKind.OVERSHOOT
