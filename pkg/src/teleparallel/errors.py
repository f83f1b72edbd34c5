"""Exception hierarchy shared by the geometry, manifold and harness modules."""


class GeometryError(Exception):
    """Base class for every error raised by this package."""


class InvalidPoint(GeometryError):
    """A chart point (or a finite-difference stencil around it) is outside the manifold."""


class SingularFrame(GeometryError):
    """A frame or coframe matrix is singular or too ill-conditioned to invert."""


class SingularMetric(GeometryError):
    """A metric matrix is not symmetric positive definite or is ill-conditioned."""


class LeftManifold(GeometryError):
    """A curve left the valid region.

    Attributes
    ----------
    t : float
        Curve parameter at which validity failed.
    path : object or None
        Partial result computed before the failure, when available.
    """

    def __init__(self, t, message=None, path=None):
        self.t = float(t)
        self.path = path
        super().__init__(message or f"curve left the manifold at t={self.t:.6g}")


class TooFewSamples(GeometryError):
    """Not enough (or non-uniform) samples for a finite-difference stencil."""


class DomainError(GeometryError, ValueError):
    """An argument lies outside the domain of a closed-form formula."""


class SpecError(GeometryError, ValueError):
    """A frame specification or basis is degenerate."""


class NotUnitary(GeometryError, ValueError):
    """A matrix expected to be unitary is not."""


class ConfigError(GeometryError, ValueError):
    """A scenario configuration could not be parsed or validated."""

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
