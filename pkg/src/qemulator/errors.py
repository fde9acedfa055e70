"""Exception hierarchy. Every domain failure derives from EmulatorError."""


class EmulatorError(Exception):
    pass


class ZeroVector(EmulatorError):
    """All amplitudes are numerically zero; no valid quantum state."""


class NotNormalized(EmulatorError):
    pass


class ParseError(EmulatorError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class LengthMismatch(EmulatorError):
    pass


class CapacityExceeded(EmulatorError):
    """Dense output would exceed the configured amplitude cap."""


class NotPowerOfTwo(EmulatorError):
    pass


class NotUnitary(EmulatorError):
    pass


class NotAnEigenvector(EmulatorError):
    pass


class ZeroSample(EmulatorError):
    """Measured zero in the period register; carries no period information."""


class ExhaustedTrials(EmulatorError):
    def __init__(self, message: str, last_outcome=None):
        self.last_outcome = last_outcome
        super().__init__(message)


class InsufficientData(EmulatorError):
    pass


class IndexOutOfRange(EmulatorError):
    pass


class InvalidConfig(EmulatorError):
    pass


class SymbolicIndexError(EmulatorError):
    """Operation needs concrete integer indices but the state holds symbolic ones."""
