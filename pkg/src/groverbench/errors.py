"""Exception types shared across the simulator backends and the benchmark layer."""


class SimulationError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(SimulationError):
    """Malformed argument: bad bitstring, out-of-range index, inconsistent shapes."""


class InvalidGate(SimulationError):
    """Gate matrix rejected: wrong shape, wrong dtype, or not unitary."""


class NumericalFailure(SimulationError):
    """A numerical routine (SVD, QR) did not converge or produced non-finite values."""


class CapacityExceeded(SimulationError):
    """Requested simulation does not fit the configured memory/qubit budget."""
