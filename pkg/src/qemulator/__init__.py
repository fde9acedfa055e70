"""Noiseless quantum emulation: final states computed directly, no gate-by-gate evolution."""

from .arithmetic import add, exponentiate, multiply
from .bigindex import Power, power_index
from .errors import (
    CapacityExceeded,
    EmulatorError,
    ExhaustedTrials,
    InsufficientData,
    LengthMismatch,
    NotAnEigenvector,
    NotNormalized,
    NotPowerOfTwo,
    NotUnitary,
    ParseError,
    ZeroSample,
    ZeroVector,
)
from .phase import PhaseEstimate, UnitaryMatrix, eigenvalue_for_vector, qpe
from .shor import FactoringOutcome, ShorConfig, Status, shors, shors_trial
from .state import DenseState, SparseState, load_state, measure, normalize, store_state
from .transforms import fft_kernel, inv_qft, qft

__version__ = "0.1.0"

__all__ = [
    "CapacityExceeded",
    "DenseState",
    "EmulatorError",
    "ExhaustedTrials",
    "FactoringOutcome",
    "InsufficientData",
    "LengthMismatch",
    "NotAnEigenvector",
    "NotNormalized",
    "NotPowerOfTwo",
    "NotUnitary",
    "ParseError",
    "PhaseEstimate",
    "Power",
    "ShorConfig",
    "SparseState",
    "Status",
    "UnitaryMatrix",
    "ZeroSample",
    "ZeroVector",
    "add",
    "eigenvalue_for_vector",
    "exponentiate",
    "fft_kernel",
    "inv_qft",
    "load_state",
    "measure",
    "multiply",
    "normalize",
    "power_index",
    "qft",
    "qpe",
    "shors",
    "shors_trial",
    "store_state",
]
