"""Exception types raised by the geometry, basis, mesh and solver layers."""


class WachspressError(Exception):
    """Base class for all library errors."""


class DegenerateGeometry(WachspressError):
    """Input geometry is degenerate (zero-length edge, collinear loop, flat cell)."""


class NotConvex(WachspressError):
    """Polytope failed strict convexity validation."""


class NonPlanarFace(WachspressError):
    """A polyhedron face deviates from its best-fit plane beyond tolerance."""


class BadTopology(WachspressError):
    """Face/vertex incidence structure is open, inconsistent, or missing."""


class NonSimpleVertex(WachspressError):
    """Operation requires a vertex with exactly d incident faces."""


class PointNotInterior(WachspressError):
    """Evaluation point is on or outside the polytope boundary.

    Carries ``min_h``, the smallest perpendicular distance to any face plane.
    """

    def __init__(self, message: str, min_h: float = float("nan")):
        super().__init__(message)
        self.min_h = min_h


class ShapeError(WachspressError):
    """Array argument has the wrong length or shape."""


class DomainError(WachspressError):
    """Scalar argument outside the mathematically valid domain."""


class ParseError(WachspressError):
    """Malformed mesh or solution file.  Carries the offending line number."""

    def __init__(self, message: str, line: int = -1):
        super().__init__(f"line {line}: {message}" if line >= 0 else message)
        self.line = line


class SolveError(WachspressError):
    """Linear solver failed to converge.  Carries the residual history."""

    def __init__(self, message: str, residuals=None):
        super().__init__(message)
        self.residuals = list(residuals) if residuals is not None else []
