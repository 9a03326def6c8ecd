"""Physical parameters and the compactified phase flow.

A single electron in the screened point-nucleus potential ephi(s) =
(gamma/2) exp(-|s|) (units: m = 1, screening length = 1, gamma = Z e^2).
After the Pruefer substitution u = R cos(theta), v = R sin(theta) the phase
Theta = 2 theta decouples from the amplitude, and compactifying the line by
z = arctan(s) gives the autonomous planar system

    dz/dtau     = cos^2 z
    dTheta/dtau = G_E(z, Theta) = 2 cos(Theta) - gamma exp(-|tan z|) - 2 E

on the cylinder.  Because dz/dtau = dz/ds, the flow parameter tau advances
exactly like s; only the position coordinate is compactified.  Bound states
are heteroclinic connectors between the saddle-type equilibria on the two
boundary circles z = -pi/2 and z = +pi/2, labelled by the winding number
N = floor((Theta(-inf) - Theta(+inf)) / 2 pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import BadParameter, NoEquilibria

__all__ = [
    "ModelParams",
    "PruferState",
    "EquilibriumKind",
    "EquilibriumPoint",
    "WindingNumber",
    "screened_coupling",
    "theta_rhs",
    "z_rhs",
    "equilibria",
    "winding_number",
]

# Inside this distance of z = +/- pi/2 the potential term is taken at its
# limit 0; exp(-|tan z|) underflows long before the branch matters.
EPS_Z = 1e-12

HALF_PI = 0.5 * math.pi
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ModelParams:
    """Coupling gamma >= 0, trial energy E, and the frozen normalization.

    gamma = 0 is the free field and is allowed so the flow itself can be
    exercised without a potential; spectrum-level operations require
    gamma > 0.  mass and screening_length are carried for clarity but the
    equations assume the value 1, so other values are rejected.
    """

    gamma: float
    energy: float
    mass: float = 1.0
    screening_length: float = 1.0

    def __post_init__(self) -> None:
        if not (self.gamma >= 0.0 and math.isfinite(self.gamma)):
            raise BadParameter(f"gamma must be finite and >= 0, got {self.gamma}")
        if not math.isfinite(self.energy):
            raise BadParameter("energy must be finite")
        if self.mass != 1.0:
            raise BadParameter("mass is frozen at 1 by the nondimensionalization")
        if self.screening_length != 1.0:
            raise BadParameter("screening_length is frozen at 1")


@dataclass(frozen=True)
class PruferState:
    """A point (z, Theta) on the cylinder; Theta is a continuous unwrapped angle."""

    z: float
    theta: float

    def __post_init__(self) -> None:
        if not (-HALF_PI <= self.z <= HALF_PI):
            raise BadParameter(f"z must lie in [-pi/2, pi/2], got {self.z}")
        if not math.isfinite(self.theta):
            raise BadParameter("theta must be finite")


class EquilibriumKind(Enum):
    S_MINUS = "S_minus"
    S_PLUS = "S_plus"
    N_MINUS = "N_minus"
    N_PLUS = "N_plus"
    C_MINUS = "C_minus"
    C_PLUS = "C_plus"
    D_MINUS = "D_minus"
    D_PLUS = "D_plus"


@dataclass(frozen=True)
class EquilibriumPoint:
    """Equilibrium of the flow with its nonzero Jacobian eigenvalue.

    The z-direction eigenvalue is always 0 (the boundary circles are center
    manifolds); tangential_eigenvalue is the Theta-direction one,
    -2 sqrt(1-E^2) at S-points, +2 sqrt(1-E^2) at N-points, 0 at the
    degenerate |E| = 1 points.
    """

    kind: EquilibriumKind
    location: PruferState
    tangential_eigenvalue: float


@dataclass(frozen=True)
class WindingNumber:
    """Integer wrap count of a connector; negative values occur for E = -1 barriers."""

    value: int


def screened_coupling(s: float, params: ModelParams) -> float:
    """Potential energy ephi(s) = (gamma/2) exp(-|s|)."""
    return 0.5 * params.gamma * math.exp(-abs(s))


def theta_rhs(state: PruferState, params: ModelParams) -> float:
    """G_E(z, Theta) = 2 cos(Theta) - gamma exp(-|tan z|) - 2 E.

    At z = +/- pi/2 the potential term is its limit 0, so the tangent
    singularity never raises.
    """
    if abs(state.z) >= HALF_PI - EPS_Z:
        pot = 0.0
    else:
        pot = params.gamma * math.exp(-abs(math.tan(state.z)))
    return 2.0 * math.cos(state.theta) - pot - 2.0 * params.energy


def z_rhs(state: PruferState) -> float:
    """dz/dtau = cos^2 z; vanishes exactly on the boundary circles."""
    c = math.cos(state.z)
    return c * c


def equilibria(E: float) -> list[EquilibriumPoint]:
    """Equilibrium points of the flow at trial energy E.

    For |E| < 1 there are four: the saddle-type S-/S+ and node-type N-/N+
    on the boundary circles.  At E = -1 they merge pairwise into C-/C+ at
    Theta = pi, at E = +1 into D-/D+ at Theta = 0.  For |E| > 1 there are
    none and NoEquilibria is raised.
    """
    if abs(E) > 1.0:
        raise NoEquilibria(f"no equilibrium points for |E| = {abs(E)} > 1")
    if E == 1.0:
        return [
            EquilibriumPoint(EquilibriumKind.D_MINUS, PruferState(-HALF_PI, 0.0), 0.0),
            EquilibriumPoint(EquilibriumKind.D_PLUS, PruferState(HALF_PI, 0.0), 0.0),
        ]
    if E == -1.0:
        return [
            EquilibriumPoint(EquilibriumKind.C_MINUS, PruferState(-HALF_PI, math.pi), 0.0),
            EquilibriumPoint(EquilibriumKind.C_PLUS, PruferState(HALF_PI, math.pi), 0.0),
        ]
    alpha = math.acos(E)
    lam = 2.0 * math.sqrt(1.0 - E * E)
    return [
        EquilibriumPoint(EquilibriumKind.S_MINUS, PruferState(-HALF_PI, alpha), -lam),
        EquilibriumPoint(EquilibriumKind.S_PLUS, PruferState(HALF_PI, -alpha), -lam),
        EquilibriumPoint(EquilibriumKind.N_MINUS, PruferState(-HALF_PI, -alpha), lam),
        EquilibriumPoint(EquilibriumKind.N_PLUS, PruferState(HALF_PI, alpha), lam),
    ]


def winding_number(theta_at_minus_inf: float, theta_at_plus_inf: float) -> WindingNumber:
    """N = floor((Theta(-inf) - Theta(+inf)) / 2 pi).

    Differences that are within 1e-9 of an exact multiple of 2 pi (saddle
    to saddle) are snapped to the integer before flooring, so roundoff
    cannot push a boundary case to the wrong side.
    """
    if not (math.isfinite(theta_at_minus_inf) and math.isfinite(theta_at_plus_inf)):
        raise BadParameter("winding_number needs finite limits")
    x = (theta_at_minus_inf - theta_at_plus_inf) / TWO_PI
    nearest = round(x)
    if abs(x - nearest) < 1e-9:
        return WindingNumber(int(nearest))
    return WindingNumber(math.floor(x))
