"""Wachspress coordinates on convex polytopes: evaluation, gradient bounds,
and a polyhedral finite element Poisson solver."""

from .basis import BasisEval, interpolate, mu_f, wachspress_2d, wachspress_3d
from .errors import (
    BadTopology,
    DegenerateGeometry,
    DomainError,
    NonPlanarFace,
    NonSimpleVertex,
    NotConvex,
    ParseError,
    PointNotInterior,
    ShapeError,
    SolveError,
    WachspressError,
)
from .geometry import (
    ConvexityReport,
    FacePlane,
    Polygon,
    Polyhedron,
    Tolerances,
    face_plane,
    h_f,
    h_star,
    order_incident_faces,
    outward_normals_2d,
    triangle_circumradius_check,
    validate,
)

__version__ = "0.1.0"
