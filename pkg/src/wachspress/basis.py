"""Wachspress coordinate evaluation on convex polygons and polyhedra.

The coordinates are rational functions built from scaled face normals
p_f(x) = n_f / h_f(x).  On polygons the weight of vertex i is the 2x2
determinant of the scaled normals of its two edges; on polyhedra the weight
of a vertex with incident faces f_1..f_k (counter-clockwise from outside) is
the fan sum of 3x3 determinants det(p_i, p_{i+1}, p_k), which handles simple
(k = 3) and non-simple (k > 3) vertices uniformly.  Gradients come from the
log-derivative identity  grad(phi_v) = phi_v (R_v - sum_u phi_u R_u)  with
R_v = grad(w_v)/w_v.

``wachspress_2d_many`` / ``wachspress_3d_many`` evaluate whole batches of
points with vectorized numpy and are the workhorses for quadrature-heavy
callers; the single-point functions wrap them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Tuple

import numpy as np

from .errors import BadTopology, PointNotInterior, ShapeError
from .geometry import DEFAULT_TOLERANCES, Polygon, Polyhedron, Polytope

# evaluation is defined on the open polytope only; points closer to a face
# plane than this (relative to diameter) are rejected
INTERIOR_REL_TOL = 1e-12


@dataclass
class BasisEval:
    """Per-vertex coordinate values and gradients at one point."""

    phi: np.ndarray   # (n,)
    dphi: np.ndarray  # (n, d)


def _check_interior(h_min: np.ndarray, diameter: float) -> None:
    tol = INTERIOR_REL_TOL * diameter
    worst = float(h_min.min())
    if worst <= tol:
        raise PointNotInterior(
            f"point is not strictly interior (min face distance {worst:.3e})",
            min_h=worst,
        )


def wachspress_2d_many(p: Polygon, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Coordinates and gradients at many points, shapes (m, n) and (m, n, 2)."""
    x = np.atleast_2d(np.asarray(points, dtype=float))
    if x.shape[1] != 2:
        raise ShapeError("points must have shape (m, 2)")
    v = p.vertices
    nrm = p.normals
    # h[m, i] = (v_i - x) . n_i, the distance of x to edge i
    h = (v * nrm).sum(axis=1)[None, :] - x @ nrm.T
    _check_interior(h.min(axis=1), p.diameter)

    pf = nrm[None, :, :] / h[:, :, None]          # (m, n, 2)
    pf_prev = np.roll(pf, 1, axis=1)
    w = pf_prev[:, :, 0] * pf[:, :, 1] - pf_prev[:, :, 1] * pf[:, :, 0]
    r = pf_prev + pf                              # (m, n, 2)

    phi = w / w.sum(axis=1)[:, None]
    phi_r = np.einsum("mi,mia->ma", phi, r)
    dphi = phi[:, :, None] * (r - phi_r[:, None, :])
    return phi, dphi


def wachspress_2d(p: Polygon, x) -> BasisEval:
    """Wachspress coordinates of a strictly interior point of a polygon."""
    phi, dphi = wachspress_2d_many(p, np.asarray(x, dtype=float)[None, :])
    return BasisEval(phi=phi[0], dphi=dphi[0])


def _vertex_face_table(p: Polyhedron):
    """Padded per-vertex incident-face indices: (fidx (n, kmax), count (n,))."""
    if p.vertex_faces is None:
        raise BadTopology("polyhedron has no vertex_faces; call order_incident_faces first")
    counts = np.array([len(c) for c in p.vertex_faces], dtype=int)
    kmax = int(counts.max())
    fidx = np.zeros((len(counts), kmax), dtype=int)
    for i, cyc in enumerate(p.vertex_faces):
        fidx[i, : len(cyc)] = cyc
    return fidx, counts


def wachspress_3d_many(p: Polyhedron, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Coordinates and gradients at many points, shapes (m, n) and (m, n, 3)."""
    x = np.atleast_2d(np.asarray(points, dtype=float))
    if x.shape[1] != 3:
        raise ShapeError("points must have shape (m, 3)")
    normals = p.face_normals
    anchors = p.face_anchors
    h_face = (anchors * normals).sum(axis=1)[None, :] - x @ normals.T
    _check_interior(h_face.min(axis=1), p.diameter)

    fidx, counts = _vertex_face_table(p)
    n, kmax = fidx.shape
    m = len(x)
    nv = normals[fidx]                                     # (n, kmax, 3)
    # h[m, i, j] = (v_i - x) . n_{f_j}; the vertex itself anchors its faces
    av = np.einsum("ic,ijc->ij", p.vertices, nv)
    h = av[None, :, :] - np.einsum("mc,ijc->mij", x, nv)
    valid = np.arange(kmax)[None, :] < counts[:, None]
    h = np.where(valid[None, :, :], h, 1.0)                # keep padding finite
    pf = nv[None, :, :, :] / h[:, :, :, None]              # (m, n, kmax, 3)

    last = (counts - 1)[None, :, None, None]
    pk = np.take_along_axis(pf, np.broadcast_to(last, (m, n, 1, 3)), axis=2)[:, :, 0, :]

    w = np.zeros((m, n))
    r_num = np.zeros((m, n, 3))
    for t in range(kmax - 2):
        active = (t + 2) < counts                          # fan triangle (t, t+1, k-1)
        if not active.any():
            break
        wt = np.einsum("mic,mic->mi", pf[:, :, t, :], np.cross(pf[:, :, t + 1, :], pk))
        wt = np.where(active[None, :], wt, 0.0)
        st = pf[:, :, t, :] + pf[:, :, t + 1, :] + pk
        w += wt
        r_num += wt[:, :, None] * st
    r = r_num / w[:, :, None]

    phi = w / w.sum(axis=1)[:, None]
    phi_r = np.einsum("mi,mia->ma", phi, r)
    dphi = phi[:, :, None] * (r - phi_r[:, None, :])
    return phi, dphi


def wachspress_3d(p: Polyhedron, x) -> BasisEval:
    """Wachspress coordinates of a strictly interior point of a polyhedron."""
    phi, dphi = wachspress_3d_many(p, np.asarray(x, dtype=float)[None, :])
    return BasisEval(phi=phi[0], dphi=dphi[0])


def evaluate(p: Polytope, x) -> BasisEval:
    """Dimension-dispatching single-point evaluation."""
    if isinstance(p, Polygon):
        return wachspress_2d(p, x)
    return wachspress_3d(p, x)


def evaluate_many(p: Polytope, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    if isinstance(p, Polygon):
        return wachspress_2d_many(p, points)
    return wachspress_3d_many(p, points)


def interpolate(basis: BasisEval, nodal_values) -> Tuple[float, np.ndarray]:
    """Value and gradient of the vertex-data interpolant at the evaluation point."""
    u = np.asarray(nodal_values, dtype=float)
    if u.shape != (len(basis.phi),):
        raise ShapeError(
            f"nodal_values has length {u.shape}, expected ({len(basis.phi)},)")
    return float(basis.phi @ u), basis.dphi.T @ u


def mu_f(p: Polytope, x, f: int) -> float:
    """Sum of the coordinates of the vertices of face f at x."""
    b = evaluate(p, x)
    return float(b.phi[list(p.face_vertices(f))].sum())
