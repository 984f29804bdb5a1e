"""Matter-wave duals of the electromagnetic field equations.

Submodules: ``params`` (mode inputs and constitutive constants),
``planewave`` (analytic amplitudes), ``fdtd`` (1D potential solver),
``circuit`` (voltage/current duals and two-port networks), ``quantum``
(truncated Fock-space operators), ``config`` and ``cli`` (scenario files
and the ``mwx`` command).
"""
from .errors import (
    ConsistencyError,
    DegenerateError,
    DomainError,
    NumericalBlowupError,
    RegimeWarning,
    SingularityError,
)
from .params import ConstitutiveSet, ModeSpec, derive_constitutive

__all__ = [
    "ConsistencyError",
    "ConstitutiveSet",
    "DegenerateError",
    "DomainError",
    "ModeSpec",
    "NumericalBlowupError",
    "RegimeWarning",
    "SingularityError",
    "derive_constitutive",
]
__version__ = "0.1.0"
