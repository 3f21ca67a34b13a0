"""Exception types shared across the package."""


class FluxlineError(Exception):
    """Base class for errors raised by fluxline."""


class GeometryError(FluxlineError):
    """Invalid, degenerate, or unsupported geometry."""


class ClearanceError(FluxlineError):
    """Curves touch, or come closer than a required clearance."""


class UnderResolvedError(FluxlineError):
    """A quadrature landed too far from its quantized value to trust.

    Carries the offending partial result in `result` when available so
    callers can still report raw / rounded / residual.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class SchemaError(FluxlineError):
    """Malformed input file, config, or data layout."""
