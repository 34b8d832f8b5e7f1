"""Gradient-sum bounds for Wachspress coordinates.

``lambda_at`` evaluates the per-point gradient sum lambda(x); its supremum
over the polytope is bracketed between 1/h* and 2d/h* for simple convex
polytopes, and ``estimate_Lambda`` reports a certified sampled lower estimate
together with those closed-form brackets.  Exact vertex values come from
directional-derivative reconstruction: on polygons from the two incident
edges, on polyhedra (at simple vertices) from the three incident edges.

Closed-form calculators cover the special shapes with sharper constants:
simplices ((d+1)/h*), hyper-rectangles (exact Lambda), regular n-gons (sharp
vertex value and h*), and the angle-based polygon bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Tuple

import numpy as np

from . import sampling
from .basis import evaluate_many
from .errors import DegenerateGeometry, DomainError, NonSimpleVertex
from .geometry import Polygon, Polyhedron, Polytope, h_star, require_convex


@dataclass
class BoundReport:
    """Bracketing report for Lambda = sup of the gradient-norm sum.

    ``lambda_max_sampled`` is a certified lower estimate (maximum over the
    interior sample set plus near-vertex probes); ``lambda_vertex_max`` the
    maximum of the exact vertex values where those exist.  The true Lambda
    lies in [max(sampled, vertex), upper_bound_general].
    """

    h_star: float
    lambda_max_sampled: float
    lambda_vertex_max: Optional[float]
    upper_bound_general: float
    lower_bound_general: float
    special_shape: Optional[str] = None
    special_bound: Optional[float] = None
    non_simple_vertices: tuple = ()

    def to_dict(self) -> dict:
        """Flat key-value view for JSON/CSV serialization."""
        return {
            "h_star": self.h_star,
            "lambda_max_sampled": self.lambda_max_sampled,
            "lambda_vertex_max": self.lambda_vertex_max,
            "upper_bound_general": self.upper_bound_general,
            "lower_bound_general": self.lower_bound_general,
            "special_shape": self.special_shape,
            "special_bound": self.special_bound,
            "non_simple_vertices": list(self.non_simple_vertices),
        }

    @property
    def best_lower(self) -> float:
        if self.lambda_vertex_max is None:
            return self.lambda_max_sampled
        return max(self.lambda_max_sampled, self.lambda_vertex_max)


def lambda_at(p: Polytope, x) -> float:
    """Sum over vertices of the coordinate gradient norms at one point."""
    return float(lambda_many(p, np.asarray(x, dtype=float)[None, :])[0])


def lambda_many(p: Polytope, points: np.ndarray) -> np.ndarray:
    """Vectorized ``lambda_at`` over a batch of interior points."""
    _, dphi = evaluate_many(p, points)
    return np.linalg.norm(dphi, axis=2).sum(axis=1)


def lambda_at_vertex_2d(p: Polygon, i: int) -> float:
    """Exact gradient-norm sum at polygon vertex i.

    Only the vertex itself and its two neighbors have non-vanishing gradients
    at a vertex, with norms |e_i|, |e_i + e_{i-1}|, |e_{i-1}| over the edge
    cross product.
    """
    n = p.n_vertices
    e = p.edges
    e_prev = e[(i - 1) % n]
    e_i = e[i % n]
    cross = e_prev[0] * e_i[1] - e_prev[1] * e_i[0]
    if cross <= 0:
        raise DegenerateGeometry(f"edges at vertex {i} are collinear or reflex")
    return float(
        (np.linalg.norm(e_i) + np.linalg.norm(e_i + e_prev) + np.linalg.norm(e_prev))
        / cross
    )


def lambda_at_vertex_3d(p: Polyhedron, v: int) -> float:
    """Exact gradient-norm sum at a simple polyhedron vertex.

    With edge vectors e_1, e_2, e_3 to the three neighbors, the four
    non-vanishing gradients at v are (e_2 x e_3)/det, (e_3 x e_1)/det,
    (e_1 x e_2)/det and minus their sum; norms are taken of each.
    """
    nb = p.neighbors(v)
    if len(nb) != 3:
        raise NonSimpleVertex(f"vertex {v} has {len(nb)} neighbors, need exactly 3")
    e = p.vertices[list(nb)] - p.vertices[v]
    det = abs(float(np.linalg.det(e)))
    if det <= 0:
        raise DegenerateGeometry(f"edges at vertex {v} are coplanar")
    c12 = np.cross(e[0], e[1])
    c23 = np.cross(e[1], e[2])
    c31 = np.cross(e[2], e[0])
    own = np.linalg.norm(c12 + c23 + c31)
    return float((own + np.linalg.norm(c12) + np.linalg.norm(c23) + np.linalg.norm(c31)) / det)


def _check_bound_args(d: int, h_star_value: float) -> None:
    if int(d) != d or d < 2:
        raise DomainError(f"dimension must be an integer >= 2, got {d}")
    if not h_star_value > 0:
        raise DomainError(f"h_star must be positive, got {h_star_value}")


def bound_general(d: int, h_star_value: float) -> float:
    """Upper bound 2d/h* valid for every simple convex polytope."""
    _check_bound_args(d, h_star_value)
    return 2.0 * d / h_star_value


def bound_simplex(d: int, h_star_value: float) -> float:
    """Upper bound (d+1)/h* for d-simplices; attained by regular simplices."""
    _check_bound_args(d, h_star_value)
    return (d + 1.0) / h_star_value


def bound_hyper_rectangle(side_lengths) -> Tuple[float, float]:
    """Exact Lambda and h* of an axis-aligned hyper-rectangle.

    Lambda = sqrt(sum 1/s_i^2) + sum 1/s_i is attained at every vertex;
    h* is the smallest side.  Also checks Lambda <= (sqrt(d)+d)/h*.
    """
    s = np.asarray(side_lengths, dtype=float)
    if s.ndim != 1 or len(s) < 1 or np.any(s <= 0):
        raise DomainError("side lengths must be a 1-d array of positive values")
    lam = float(np.sqrt((1.0 / s**2).sum()) + (1.0 / s).sum())
    hs = float(s.min())
    d = len(s)
    assert lam <= (math.sqrt(d) + d) / hs * (1 + 1e-12)
    return lam, hs


class NgonReference(NamedTuple):
    h_star: float
    lambda_vertex: float
    lower_bound: float
    upper_bound: float


def regular_ngon_reference(n: int) -> NgonReference:
    """Closed forms for the regular n-gon inscribed in the unit circle:
    h* = 4 sin^2(pi/n) cos(pi/n), the exact vertex gradient sum (which is the
    sharp lower bound 2(1+cos(pi/n))/h*), and the general upper bound 4/h*."""
    if n < 3:
        raise DomainError("regular n-gon requires n >= 3")
    a = math.pi / n
    hs = 4.0 * math.sin(a) ** 2 * math.cos(a)
    lam_v = (1.0 + math.cos(a)) / (2.0 * math.sin(a) ** 2 * math.cos(a))
    return NgonReference(
        h_star=hs,
        lambda_vertex=lam_v,
        lower_bound=2.0 * (1.0 + math.cos(a)) / hs,
        upper_bound=4.0 / hs,
    )


def polygon_angle_bound(p: Polygon) -> float:
    """Per-vertex gradient bound 4/(d_* sin(b_*) sin(b^*)) from the minimum
    edge length d_* and the extreme interior angles; always at least as large
    as 4/h* because h* >= d_* sin(b_*) sin(b^*)."""
    require_convex(p)
    lengths = np.linalg.norm(p.edges, axis=1)
    d_star = float(lengths.min())
    angles = interior_angles(p)
    b_min = float(angles.min())
    b_max = float(angles.max())
    prod = d_star * math.sin(b_min) * math.sin(b_max)
    hs = h_star(p)
    assert hs >= prod * (1 - 1e-12)
    return 4.0 / prod


def interior_angles(p: Polygon) -> np.ndarray:
    """Interior angle at each vertex, in (0, pi) for a convex polygon."""
    v = p.vertices
    n = len(v)
    prev_dir = v[np.arange(-1, n - 1)] - v
    next_dir = v[(np.arange(n) + 1) % n] - v
    cross = prev_dir[:, 0] * next_dir[:, 1] - prev_dir[:, 1] * next_dir[:, 0]
    dot = (prev_dir * next_dir).sum(axis=1)
    # ccw loop: angle from next edge to previous edge, measured inside
    return np.arctan2(-cross, dot) % (2.0 * math.pi)


def estimate_Lambda(p: Polytope, budget: int = 1000, seed: int = 0) -> BoundReport:
    """Bracket Lambda by sampling.

    Evaluates lambda on ``budget`` deterministic Halton points inside p plus
    near-vertex probes, takes exact vertex values where the vertex gradient
    formulas apply, and reports the general brackets 1/h* and 2d/h* alongside
    a sharper special-case constant when the shape is recognized as a simplex,
    hyper-rectangle or regular n-gon (or falls back to the polygon angle
    bound in 2D).
    """
    require_convex(p)
    hs = h_star(p)
    d = p.dim

    pts = sampling.interior_points(p, budget, seed=seed)
    probes = sampling.vertex_probes(p, delta_rel=1e-6)
    lam_sampled = float(
        max(lambda_many(p, pts).max(), lambda_many(p, probes).max())
    )

    non_simple = []
    vertex_vals = []
    if isinstance(p, Polygon):
        vertex_vals = [lambda_at_vertex_2d(p, i) for i in range(p.n_vertices)]
    else:
        for v in range(p.n_vertices):
            if len(p.incident_faces[v]) == 3:
                vertex_vals.append(lambda_at_vertex_3d(p, v))
            else:
                non_simple.append(v)
    lam_vertex = max(vertex_vals) if vertex_vals else None

    shape, special = _detect_special_shape(p, hs)
    return BoundReport(
        h_star=hs,
        lambda_max_sampled=lam_sampled,
        lambda_vertex_max=lam_vertex,
        upper_bound_general=bound_general(d, hs),
        lower_bound_general=1.0 / hs,
        special_shape=shape,
        special_bound=special,
        non_simple_vertices=tuple(non_simple),
    )


_DETECT_RTOL = 1e-9


def _detect_special_shape(p: Polytope, hs: float):
    if isinstance(p, Polygon):
        if p.n_vertices == 3:
            return "simplex", bound_simplex(2, hs)
        if _is_rectangle(p):
            lengths = np.linalg.norm(p.edges, axis=1)
            lam, _ = bound_hyper_rectangle(lengths[:2])
            return "hyper-rectangle", lam
        if _is_regular_ngon(p):
            # scale the unit-circle closed form to this polygon's circumradius
            r = float(np.linalg.norm(p.vertices - p.centroid, axis=1).mean())
            return "regular-n-gon", regular_ngon_reference(p.n_vertices).lambda_vertex / r
        return "polygon-angle", polygon_angle_bound(p)
    if p.n_vertices == 4:
        return "simplex", bound_simplex(3, hs)
    if _is_box(p):
        sides = _box_sides(p)
        lam, _ = bound_hyper_rectangle(sides)
        return "hyper-rectangle", lam
    return None, None


def _is_rectangle(p: Polygon) -> bool:
    if p.n_vertices != 4:
        return False
    e = p.edges
    scale = p.diameter
    for i in range(4):
        if abs(np.dot(e[i], e[(i + 1) % 4])) > _DETECT_RTOL * scale**2:
            return False
    return True


def _is_regular_ngon(p: Polygon) -> bool:
    lengths = np.linalg.norm(p.edges, axis=1)
    radii = np.linalg.norm(p.vertices - p.centroid, axis=1)
    scale = p.diameter
    return (np.ptp(lengths) <= _DETECT_RTOL * scale
            and np.ptp(radii) <= _DETECT_RTOL * scale)


def _is_box(p: Polyhedron) -> bool:
    if p.n_vertices != 8 or p.n_faces != 6:
        return False
    if any(len(loop) != 4 for loop in p.faces):
        return False
    nrm = p.face_normals
    dots = np.abs(nrm @ nrm.T)
    # normals must be pairwise parallel or perpendicular
    return bool(np.all((dots < _DETECT_RTOL) | (dots > 1 - _DETECT_RTOL)))


def _box_sides(p: Polyhedron) -> np.ndarray:
    nrm = p.face_normals
    heights = (p.face_anchors * nrm).sum(axis=1)[:, None] - nrm @ p.vertices.T
    # distance between each pair of opposite parallel planes
    sides = []
    seen = set()
    for f in range(6):
        if f in seen:
            continue
        partner = next(
            g for g in range(6)
            if g != f and abs(nrm[f] @ nrm[g]) > 1 - _DETECT_RTOL
        )
        seen.update((f, partner))
        sides.append(float(heights[f].max()))
    return np.array(sides)
