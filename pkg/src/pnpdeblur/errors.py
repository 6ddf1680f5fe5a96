"""Exception hierarchy shared by every module."""


class PnpDeblurError(Exception):
    """Base class for all package errors."""


class DimensionError(PnpDeblurError, ValueError):
    """Grid shapes are incompatible or degenerate."""


class DomainError(PnpDeblurError, ValueError):
    """A value violates the mathematical domain of an operation."""


class ParameterError(PnpDeblurError, ValueError):
    """A scalar parameter is outside its admissible range."""


class InternalError(PnpDeblurError, RuntimeError):
    """An internal consistency check failed (likely a bug or corrupt input)."""


class DivergenceError(PnpDeblurError, RuntimeError):
    """A solver iterate became non-finite."""

    def __init__(self, iteration: int, detail: str = ""):
        self.iteration = iteration
        msg = f"non-finite values at iteration {iteration}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class ProtocolError(PnpDeblurError, RuntimeError):
    """The external denoiser stream violated the wire protocol."""


class BridgeError(PnpDeblurError, RuntimeError):
    """The external denoiser subprocess failed outright."""
