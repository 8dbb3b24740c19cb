"""Exception hierarchy for the dislocated-operator toolkit.

Every failure mode named by the numerical contracts gets its own class so
callers (and the CLI exit-code mapping) can distinguish "your input violates
a hypothesis" from "the solver is under-resolved" from "internal bug".
"""


class DislospecError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(DislospecError):
    """Invalid run configuration (CLI exit code 3)."""


class HypothesisViolation(DislospecError):
    """A spectral hypothesis needed by the theory fails numerically (CLI exit code 2)."""


# --- potential / symmetry ---------------------------------------------------

class NotRealValued(DislospecError):
    """Fourier coefficients do not satisfy c_{-l} = conj(c_l)."""


class SymmetryViolated(DislospecError):
    """A potential lacks the half-period symmetry required by the operation."""


# --- bloch / dirac ----------------------------------------------------------

class CutoffTooSmall(DislospecError):
    """Plane-wave cutoff K below the potential bandwidth."""


class SolverFailure(DislospecError):
    """Eigensolver or root-finder failed to converge."""


class NotDegenerate(DislospecError):
    """Expected two-fold band touching absent: no Dirac point."""


class SignMismatch(DislospecError):
    """Fermi velocity sign disagrees with the parity prediction."""


# --- coupling ---------------------------------------------------------------

class H2Violated(HypothesisViolation):
    """min_t |theta(t)| at or below tolerance: winding undefined."""


class NotOdd(DislospecError):
    """Winding number rounded to an even integer (under-resolved curve)."""


# --- bulk -------------------------------------------------------------------

class H1Violated(HypothesisViolation):
    """Spectral gap closes somewhere on the (s,t) scan."""


class GapClosedAtNode(DislospecError):
    """Bands n and n+1 collide at a torus grid node."""


class PlaquetteSaturated(DislospecError):
    """A lattice field-strength plaquette reached |F| >= pi - 0.1."""


class VortexOnLink(DislospecError):
    """A link overlap determinant vanished; frames are antipodal across the link."""


# --- dirac_line -------------------------------------------------------------

class OutOfRange(DislospecError):
    """Parameter outside the admissible open interval."""


class NoDecayingDirection(DislospecError):
    """Trial energy outside the essential gap: no exponentially decaying bulk solution."""


class BranchTrackingAmbiguous(DislospecError):
    """Two eigenbranches could not be disentangled between grid points."""


# --- edge -------------------------------------------------------------------

class DomainTooSmall(DislospecError):
    """Truncation half-length below the localization-scale requirement."""


class InGapViolation(DislospecError):
    """Floquet multiplier modulus within tolerance of 1: energy not inside the bulk gap."""


class CountMismatch(DislospecError):
    """Junction-state count disagrees with the effective-operator prediction."""


class UnclassifiedBranch(DislospecError):
    """A crossing branch sits too close to the junction/boundary classification threshold."""


# --- scenarios --------------------------------------------------------------

class FourierConditionViolated(DislospecError):
    """Base potentials miss a Fourier coefficient required by the scenario family."""


class ParameterViolation(DislospecError):
    """Scenario parameters outside the family's admissible set."""


# --- cli --------------------------------------------------------------------

class CacheCorrupt(DislospecError):
    """Cached artifact failed integrity checks; recompute."""
