"""Exception hierarchy for spingreen.

Every exception carries the process exit status the CLI reports for it.
"""

from typing import Optional


class SpinGreenError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class ParameterError(SpinGreenError, ValueError):
    """Invalid or unsupported parameters (usage error)."""

    exit_code = 1


class DomainError(SpinGreenError):
    """Evaluation requested outside the domain of a function."""

    exit_code = 2


class PoleError(DomainError):
    """Argument sits on (or within the pole distance of) a pole."""

    def __init__(self, message: str, location: Optional[complex] = None, level: Optional[int] = None):
        super().__init__(message)
        self.location = location
        self.level = level


class BranchCutError(DomainError):
    pass


class SpectrumError(DomainError):
    """Spectral parameter lies in the spectrum of the requested Hamiltonian."""


class SingularityError(DomainError):
    """Kernel requested at coinciding points."""


class WrongCaseError(DomainError):
    """Operation called for the wrong field case (free vs magnetic)."""


class DegenerateCaseError(DomainError):
    """kappa = 0 in a magnetic field; the Hamiltonian decouples."""


class GeometryError(DomainError):
    """Finite-difference stencil crosses the kernel singularity."""


class PreconditionError(DomainError):
    """A spectral collision makes an identity check meaningless."""


class AccuracyError(SpinGreenError):
    """Requested tolerance not reached."""

    exit_code = 3

    def __init__(self, message: str, achieved: Optional[float] = None):
        super().__init__(message)
        self.achieved = achieved
