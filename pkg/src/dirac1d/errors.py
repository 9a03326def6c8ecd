"""Exception hierarchy for the solver.

Every failure mode raised by the library derives from DiracSolverError so
callers (and the CLI) can distinguish solver problems from programming errors.
"""


class DiracSolverError(Exception):
    """Base class for all solver-specific failures."""


class NoEquilibria(DiracSolverError):
    """Requested equilibrium points for |E| > 1, where the flow has none."""


class StepSizeUnderflow(DiracSolverError):
    """The step controller drove the step size below its floor."""


class IndeterminateTerminal(DiracSolverError):
    """Orbit was truncated while still moving near the target; extend the run."""


class BadParameter(DiracSolverError):
    """Special-function parameter outside the supported domain."""


class NonConvergence(DiracSolverError):
    """Iteration cap hit before reaching the requested accuracy."""


class DomainError(DiracSolverError):
    """Function argument on a singularity (for example z = 0 under a logarithm)."""


class PoleError(DiracSolverError):
    """Gamma function evaluated at a non-positive integer."""


class DegenerateThreshold(DiracSolverError):
    """Barrier coupling sits on a zero of the closed-form denominator."""


class CountMismatch(DiracSolverError):
    """Root scan found a different number of sign changes than expected."""


class ValidationFailure(DiracSolverError):
    """Cross-validation between two independent methods disagreed."""


class EnergyTooCloseToContinuum(DiracSolverError):
    """Trial energy within the exclusion zone around |E| = 1."""


class BracketFailure(DiracSolverError):
    """Shooting classifications at both interval ends agree; no bracket."""


class ThresholdDegenerate(DiracSolverError):
    """Coupling coincides with a threshold table entry; counts are ambiguous."""


class NonNormalizable(DiracSolverError):
    """Density integral failed to converge; the orbit was not a bound state."""
