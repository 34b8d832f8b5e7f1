"""Cell integration: centroid-fan tetrahedralization and a symmetric
4-point, degree-2 tetrahedral rule."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np

from .errors import DegenerateGeometry, NotConvex
from .geometry import Polyhedron

# barycentric nodes (a, b, b, b) and permutations of the classical symmetric
# degree-2 rule: a = (5 + 3 sqrt 5)/20, b = (5 - sqrt 5)/20
_TET4_A = 0.5854101966249685
_TET4_B = 0.1381966011250105
_TET4_BARY = np.full((4, 4), _TET4_B)
np.fill_diagonal(_TET4_BARY, _TET4_A)


@dataclass(frozen=True)
class QuadPoint:
    """One quadrature node: a strictly interior position and a positive weight."""

    position: np.ndarray
    weight: float


def tetrahedralize(cell: Polyhedron) -> np.ndarray:
    """Centroid-fan decomposition of a convex cell, shape (T, 4, 3).

    Each face edge (a, b) forms a tetrahedron with the face centroid and the
    cell centroid; with outward counter-clockwise face loops all tetrahedra
    are positively oriented, and their volumes sum to the cell volume.
    """
    c = cell.centroid
    tets: List[np.ndarray] = []
    for loop in cell.faces:
        pts = cell.vertices[list(loop)]
        cf = pts.mean(axis=0)
        for k in range(len(pts)):
            a = pts[k]
            b = pts[(k + 1) % len(pts)]
            tets.append(np.array([c, cf, a, b]))
    out = np.array(tets)
    if np.any(_tet_volumes(out) <= 0):
        raise NotConvex("centroid fan produced a non-positive tetrahedron; "
                        "cell is not convex or faces are misoriented")
    return out


def _tet_volumes(tets: np.ndarray) -> np.ndarray:
    e = tets[:, 1:, :] - tets[:, :1, :]
    return np.linalg.det(e) / 6.0


def rule_tet4(tet: np.ndarray) -> List[QuadPoint]:
    """Four-point symmetric rule on one positively oriented tetrahedron,
    exact for polynomials of total degree <= 2."""
    tet = np.asarray(tet, dtype=float)
    vol = float(_tet_volumes(tet[None, :, :])[0])
    if vol <= 0:
        raise DegenerateGeometry("tetrahedron is inverted or flat")
    pos = _TET4_BARY @ tet
    return [QuadPoint(position=p, weight=vol / 4.0) for p in pos]


def cell_rule(cell: Polyhedron) -> Tuple[np.ndarray, np.ndarray]:
    """All quadrature nodes of a cell as arrays: positions (Q, 3), weights (Q,)."""
    tets = tetrahedralize(cell)
    vols = _tet_volumes(tets)
    pos = np.einsum("ab,tbc->tac", _TET4_BARY, tets).reshape(-1, 3)
    wts = np.repeat(vols / 4.0, 4)
    return pos, wts


def cell_points(cell: Polyhedron) -> List[QuadPoint]:
    """Quadrature nodes of a cell as QuadPoint records."""
    pos, wts = cell_rule(cell)
    return [QuadPoint(position=p, weight=float(w)) for p, w in zip(pos, wts)]


def integrate_cell(cell: Polyhedron, f: Callable) -> float:
    """Integral of ``f`` over the cell; ``f`` maps an (m, 3) array to (m,)."""
    pos, wts = cell_rule(cell)
    vals = np.asarray(f(pos), dtype=float).reshape(-1)
    return float(wts @ vals)


def integrate_tets_quadratic(tets: np.ndarray, c0: float, g: np.ndarray,
                             H: np.ndarray) -> float:
    """Exact integral of the quadratic  c0 + g.x + x.H.x  over a tet union.

    Uses the second-moment identity int x_i x_j = V/20 (sum_k v_ki v_kj +
    s_i s_j) with s the vertex sum; independent of any quadrature rule, so it
    serves as the analytic oracle for degree-2 exactness checks.
    """
    tets = np.asarray(tets, dtype=float)
    vols = _tet_volumes(tets)
    s = tets.sum(axis=1)                       # (T, 3)
    centroids = s / 4.0
    m2 = (np.einsum("tka,tkb->tab", tets, tets) + np.einsum("ta,tb->tab", s, s)) / 20.0
    total = (
        c0 * vols
        + vols * (centroids @ g)
        + vols * np.einsum("tab,ab->t", m2, H)
    )
    return float(total.sum())
