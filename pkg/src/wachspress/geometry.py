"""Convex polytope geometry kernel.

Provides the polygon and polyhedron containers used throughout the library,
strict-convexity validation, face-plane construction, perpendicular distances
to face planes, the vertex-to-face quality measure ``h_star``, and the
derivation of per-vertex incident-face cycles needed by the coordinate
evaluator.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Union

import numpy as np

from .errors import BadTopology, DegenerateGeometry, NonPlanarFace, NotConvex


@dataclass(frozen=True)
class Tolerances:
    """Validation tolerances, relative to the polytope diameter.

    ``planar`` and ``side`` scale with diam(P), ``convex`` with diam(P)**2;
    ``length`` is the minimum edge length relative to diam(P) and ``rel`` is
    a dimensionless tolerance for exact-identity checks.
    """

    planar: float = 1e-9
    side: float = 1e-9
    convex: float = 1e-12
    length: float = 1e-12
    rel: float = 1e-12


DEFAULT_TOLERANCES = Tolerances()


@dataclass(eq=False)
class Polygon:
    """Strictly convex polygon with vertices in counter-clockwise order.

    ``vertices`` is an (n, 2) float array, n >= 3.  Treated as immutable;
    derived quantities are cached on first access.
    """

    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 3:
            raise DegenerateGeometry("polygon requires an (n, 2) vertex array with n >= 3")
        self.vertices = v

    @property
    def dim(self) -> int:
        return 2

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_faces(self) -> int:
        # faces of a polygon are its edges: edge i joins vertex i to i+1
        return len(self.vertices)

    def face_vertices(self, f: int) -> tuple:
        n = len(self.vertices)
        return (f % n, (f + 1) % n)

    @cached_property
    def diameter(self) -> float:
        return float(_max_pairwise_distance(self.vertices))

    @cached_property
    def edges(self) -> np.ndarray:
        """Edge vectors v_{i+1} - v_i, shape (n, 2)."""
        return np.roll(self.vertices, -1, axis=0) - self.vertices

    @cached_property
    def normals(self) -> np.ndarray:
        """Outward unit edge normals, shape (n, 2)."""
        return outward_normals_2d(self)

    @cached_property
    def centroid(self) -> np.ndarray:
        return self.vertices.mean(axis=0)


@dataclass(eq=False)
class Polyhedron:
    """Convex polyhedron given by vertices and oriented face loops.

    ``faces[f]`` lists vertex indices counter-clockwise as seen from outside.
    ``vertex_faces[v]``, when present, is the cycle of faces incident to
    vertex v, counter-clockwise as seen from outside; build it with
    :func:`order_incident_faces`.
    """

    vertices: np.ndarray
    faces: tuple
    vertex_faces: Optional[tuple] = None

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3 or v.shape[0] < 4:
            raise DegenerateGeometry("polyhedron requires an (n, 3) vertex array with n >= 4")
        self.vertices = v
        faces = tuple(tuple(int(i) for i in loop) for loop in self.faces)
        if len(faces) < 4:
            raise BadTopology("polyhedron requires at least 4 faces")
        for f, loop in enumerate(faces):
            if len(loop) < 3:
                raise BadTopology(f"face {f} has fewer than 3 vertices")
            if any(i < 0 or i >= len(v) for i in loop):
                raise BadTopology(f"face {f} references a vertex index out of range")
            if len(set(loop)) != len(loop):
                raise BadTopology(f"face {f} repeats a vertex")
        self.faces = faces
        if self.vertex_faces is not None:
            self.vertex_faces = tuple(tuple(int(f) for f in cyc) for cyc in self.vertex_faces)

    @property
    def dim(self) -> int:
        return 3

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def face_vertices(self, f: int) -> tuple:
        return self.faces[f]

    @cached_property
    def diameter(self) -> float:
        return float(_max_pairwise_distance(self.vertices))

    @cached_property
    def centroid(self) -> np.ndarray:
        return self.vertices.mean(axis=0)

    @cached_property
    def face_planes(self) -> tuple:
        return tuple(face_plane(self, f) for f in range(len(self.faces)))

    @cached_property
    def face_normals(self) -> np.ndarray:
        """Outward unit normals of all faces, shape (F, 3)."""
        return np.array([pl.unit_normal for pl in self.face_planes])

    @cached_property
    def face_anchors(self) -> np.ndarray:
        """One on-plane point per face (the first loop vertex), shape (F, 3)."""
        return np.array([pl.anchor for pl in self.face_planes])

    @cached_property
    def incident_faces(self) -> tuple:
        """Unordered incident-face index sets per vertex (derived from loops)."""
        inc = [[] for _ in range(len(self.vertices))]
        for f, loop in enumerate(self.faces):
            for i in loop:
                inc[i].append(f)
        return tuple(tuple(sorted(fs)) for fs in inc)

    @cached_property
    def edge_map(self) -> dict:
        """Map from directed edge (a, b) to the face whose loop contains it."""
        em = {}
        for f, loop in enumerate(self.faces):
            for k, a in enumerate(loop):
                b = loop[(k + 1) % len(loop)]
                if (a, b) in em:
                    raise BadTopology(f"directed edge {(a, b)} appears in two faces")
                em[(a, b)] = f
        return em

    def neighbors(self, v: int) -> tuple:
        """Vertices joined to v by an edge, sorted by index."""
        nb = set()
        for loop in self.faces:
            if v in loop:
                k = loop.index(v)
                nb.add(loop[(k - 1) % len(loop)])
                nb.add(loop[(k + 1) % len(loop)])
        return tuple(sorted(nb))

    @cached_property
    def volume(self) -> float:
        """Volume by the divergence theorem over the (outward, ccw) faces."""
        c = self.centroid
        total = 0.0
        for loop in self.faces:
            pts = self.vertices[list(loop)] - c
            a = pts[0]
            for k in range(1, len(pts) - 1):
                total += np.dot(a, np.cross(pts[k], pts[k + 1]))
        return float(total / 6.0)


Polytope = Union[Polygon, Polyhedron]


@dataclass(frozen=True)
class FacePlane:
    """Oriented supporting plane of a polyhedron face."""

    unit_normal: np.ndarray
    anchor: np.ndarray


@dataclass
class ConvexityReport:
    """Result of :func:`validate`: findings, never raised."""

    is_convex: bool
    is_simple: bool
    worst_planarity: float
    worst_side_violation: float
    offending_entities: list


def _max_pairwise_distance(pts: np.ndarray) -> float:
    d = pts[:, None, :] - pts[None, :, :]
    return np.sqrt((d * d).sum(axis=2)).max()


def _cross2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def outward_normals_2d(p: Polygon) -> np.ndarray:
    """Outward unit normals of the polygon edges.

    Normal i is perpendicular to the edge from vertex i to vertex i+1.  For a
    counter-clockwise loop the rotation (dy, -dx) of the edge vector points
    outward.
    """
    e = np.roll(p.vertices, -1, axis=0) - p.vertices
    lengths = np.linalg.norm(e, axis=1)
    tol = DEFAULT_TOLERANCES.length * p.diameter
    if np.any(lengths <= tol):
        i = int(np.argmin(lengths))
        raise DegenerateGeometry(f"edge {i} has length {lengths[i]:.3e}")
    return np.column_stack([e[:, 1], -e[:, 0]]) / lengths[:, None]


def face_plane(p: Polyhedron, f: int) -> FacePlane:
    """Supporting plane of face f: Newell normal of the loop, anchored at the
    first loop vertex.

    Raises NonPlanarFace when loop vertices stray from the plane by more than
    the planarity tolerance, DegenerateGeometry for (near-)collinear loops.
    """
    loop = p.faces[f]
    pts = p.vertices[list(loop)]
    nrm = _newell_normal(pts)
    norm = np.linalg.norm(nrm)
    if norm <= DEFAULT_TOLERANCES.convex * p.diameter ** 2:
        raise DegenerateGeometry(f"face {f} loop is collinear")
    nrm = nrm / norm
    anchor = pts[0]
    dev = np.abs((pts - anchor) @ nrm)
    if dev.max() > DEFAULT_TOLERANCES.planar * p.diameter:
        raise NonPlanarFace(f"face {f} deviates {dev.max():.3e} from its plane")
    return FacePlane(unit_normal=nrm, anchor=anchor.copy())


def _newell_normal(pts: np.ndarray) -> np.ndarray:
    nxt = np.roll(pts, -1, axis=0)
    n = np.array([
        np.sum((pts[:, 1] - nxt[:, 1]) * (pts[:, 2] + nxt[:, 2])),
        np.sum((pts[:, 2] - nxt[:, 2]) * (pts[:, 0] + nxt[:, 0])),
        np.sum((pts[:, 0] - nxt[:, 0]) * (pts[:, 1] + nxt[:, 1])),
    ])
    return n


def h_f(plane: FacePlane, x) -> float:
    """Signed perpendicular distance (anchor - x) . n; positive strictly inside."""
    x = np.asarray(x, dtype=float)
    return float((plane.anchor - x) @ plane.unit_normal)


def _polygon_face_heights(p: Polygon) -> np.ndarray:
    """H[f, v] = distance of vertex v to the line of edge f, shape (n, n)."""
    n = p.normals
    v = p.vertices
    # (v_f - v) . n_f for every (edge, vertex) pair
    return (v * n).sum(axis=1)[:, None] - n @ v.T


def _polyhedron_face_heights(p: Polyhedron) -> np.ndarray:
    """H[f, v] = distance of vertex v to face plane f, shape (F, n)."""
    nrm = p.face_normals
    anch = p.face_anchors
    return (anch * nrm).sum(axis=1)[:, None] - nrm @ p.vertices.T


def validate(p: Polytope, tolerances: Tolerances = DEFAULT_TOLERANCES) -> ConvexityReport:
    """Check strict convexity (and for polyhedra planarity, closedness and
    incident-face cycles).  Findings go in the report; nothing is raised."""
    if isinstance(p, Polygon):
        return _validate_polygon(p, tolerances)
    return _validate_polyhedron(p, tolerances)


def _validate_polygon(p: Polygon, tol: Tolerances) -> ConvexityReport:
    diam = p.diameter
    offenders = []
    ok = True

    e = np.roll(p.vertices, -1, axis=0) - p.vertices
    lengths = np.linalg.norm(e, axis=1)
    for i in np.nonzero(lengths <= tol.length * diam)[0]:
        offenders.append(("edge", int(i), "degenerate length"))
        ok = False

    cross = _cross2(np.roll(e, 1, axis=0), e)
    for i in np.nonzero(cross <= tol.convex * diam ** 2)[0]:
        offenders.append(("vertex", int(i), "non-convex turn"))
        ok = False

    worst_side = 0.0
    if ok:
        H = _polygon_face_heights(p)
        n = p.n_vertices
        mask = np.ones_like(H, dtype=bool)
        idx = np.arange(n)
        mask[idx, idx] = False
        mask[idx, (idx + 1) % n] = False
        worst_side = max(0.0, float(-(H[mask]).min()))
        if H[mask].min() <= tol.side * diam:
            ok = False
            offenders.append(("polygon", -1, "vertex on or behind a non-incident edge"))

    # every polygon vertex touches exactly 2 edges, so simple == convex in 2D
    return ConvexityReport(
        is_convex=ok,
        is_simple=ok,
        worst_planarity=0.0,
        worst_side_violation=worst_side,
        offending_entities=offenders,
    )


def _validate_polyhedron(p: Polyhedron, tol: Tolerances) -> ConvexityReport:
    diam = p.diameter
    offenders = []
    ok = True
    worst_planarity = 0.0
    worst_side = 0.0

    normals = np.zeros((len(p.faces), 3))
    anchors = np.zeros((len(p.faces), 3))
    for f, loop in enumerate(p.faces):
        pts = p.vertices[list(loop)]
        seg = np.roll(pts, -1, axis=0) - pts
        if np.any(np.linalg.norm(seg, axis=1) <= tol.length * diam):
            offenders.append(("face", f, "degenerate edge"))
            ok = False
            continue
        nrm = _newell_normal(pts)
        norm = np.linalg.norm(nrm)
        if norm <= tol.convex * diam ** 2:
            offenders.append(("face", f, "collinear loop"))
            ok = False
            continue
        normals[f] = nrm / norm
        anchors[f] = pts[0]
        dev = np.abs((pts - anchors[f]) @ normals[f]).max()
        worst_planarity = max(worst_planarity, float(dev))
        if dev > tol.planar * diam:
            offenders.append(("face", f, "non-planar"))
            ok = False

    if ok:
        H = (anchors * normals).sum(axis=1)[:, None] - normals @ p.vertices.T
        incident = np.zeros_like(H, dtype=bool)
        for f, loop in enumerate(p.faces):
            incident[f, list(loop)] = True
        outside = H[~incident]
        worst_side = max(0.0, float(-outside.min()))
        if outside.min() <= tol.side * diam:
            ok = False
            bad = np.nonzero(~incident & (H <= tol.side * diam))
            for f, v in zip(*bad):
                offenders.append(("face-vertex", (int(f), int(v)), "behind face plane"))

    # closed-surface check: every directed edge paired with its reverse
    try:
        em = p.edge_map
        for (a, b) in em:
            if (b, a) not in em:
                offenders.append(("edge", (a, b), "unpaired (open surface)"))
                ok = False
    except BadTopology as exc:
        offenders.append(("topology", -1, str(exc)))
        ok = False

    if p.vertex_faces is not None and ok:
        for v, cyc in enumerate(p.vertex_faces):
            if sorted(cyc) != list(p.incident_faces[v]):
                offenders.append(("vertex", v, "vertex_faces does not match incidence"))
                ok = False
                continue
            for k in range(len(cyc)):
                f1, f2 = cyc[k], cyc[(k + 1) % len(cyc)]
                if _shared_edge_through(p, f1, f2, v) is None:
                    offenders.append(("vertex", v, "consecutive faces share no edge"))
                    ok = False
                    break

    valences = np.array([len(fs) for fs in p.incident_faces])
    simple = bool(ok and np.all(valences == 3))
    return ConvexityReport(
        is_convex=ok,
        is_simple=simple,
        worst_planarity=worst_planarity,
        worst_side_violation=worst_side,
        offending_entities=offenders,
    )


def _shared_edge_through(p: Polyhedron, f1: int, f2: int, v: int):
    """The vertex u such that edge (v, u) lies on both faces, else None."""
    loops = (set(p.faces[f1]), set(p.faces[f2]))
    common = (loops[0] & loops[1]) - {v}
    for u in common:
        for f in (f1, f2):
            loop = p.faces[f]
            k = loop.index(v)
            if loop[(k - 1) % len(loop)] == u or loop[(k + 1) % len(loop)] == u:
                return u
    return None


def require_convex(p: Polytope, tolerances: Tolerances = DEFAULT_TOLERANCES) -> None:
    """Raise NotConvex when validation fails."""
    report = validate(p, tolerances)
    if not report.is_convex:
        raise NotConvex(f"validation failed: {report.offending_entities[:5]}")


def h_star(p: Polytope, tolerances: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Minimum distance between any vertex and the plane of a non-incident face.

    Strictly positive for strictly convex polytopes; the central geometric
    quality measure for all gradient bounds.
    """
    require_convex(p, tolerances)
    if isinstance(p, Polygon):
        H = _polygon_face_heights(p)
        n = p.n_vertices
        mask = np.ones_like(H, dtype=bool)
        idx = np.arange(n)
        mask[idx, idx] = False
        mask[idx, (idx + 1) % n] = False
    else:
        H = _polyhedron_face_heights(p)
        mask = np.ones_like(H, dtype=bool)
        for f, loop in enumerate(p.faces):
            mask[f, list(loop)] = False
    return float(H[mask].min())


def order_incident_faces(p: Polyhedron) -> Polyhedron:
    """Return a copy of p with per-vertex incident-face cycles populated.

    For each vertex the incident faces are walked through shared edges into a
    single cycle; the cyclic direction is fixed so that the scaled-normal
    determinant at the centroid comes out positive (counter-clockwise as seen
    from outside).  Cycles start at their smallest face index, which makes the
    operation idempotent.
    """
    em = p.edge_map
    for (a, b) in em:
        if (b, a) not in em:
            raise BadTopology(f"open surface: edge {(a, b)} has no partner")

    normals = p.face_normals
    anchors = p.face_anchors
    c = p.centroid
    hc = np.einsum("fk,fk->f", anchors - c[None, :], normals)
    if np.any(hc <= 0):
        raise BadTopology("centroid is not strictly inside every face plane; "
                          "faces may be inconsistently oriented")
    p_at_c = normals / hc[:, None]

    cycles = []
    for v in range(len(p.vertices)):
        incident = p.incident_faces[v]
        if not incident:
            raise BadTopology(f"vertex {v} belongs to no face")
        start = incident[0]
        cycle = [start]
        current = start
        while True:
            loop = p.faces[current]
            k = loop.index(v)
            succ = loop[(k + 1) % len(loop)]
            nxt = em.get((succ, v))
            if nxt is None:
                raise BadTopology(f"edge ({v}, {succ}) has no partner face")
            if nxt == start:
                break
            cycle.append(nxt)
            current = nxt
            if len(cycle) > len(incident):
                raise BadTopology(f"faces around vertex {v} do not close into one cycle")
        if len(cycle) != len(incident):
            raise BadTopology(f"faces around vertex {v} form more than one cycle")
        if _fan_weight(p_at_c, cycle) <= 0:
            cycle.reverse()
        if _fan_weight(p_at_c, cycle) <= 0:
            raise BadTopology(f"vertex {v}: no cycle direction gives a positive determinant")
        shift = cycle.index(min(cycle))
        cycles.append(tuple(cycle[shift:] + cycle[:shift]))
    return dataclasses.replace(p, vertex_faces=tuple(cycles))


def _fan_weight(p_f: np.ndarray, cycle) -> float:
    """Fan-summed determinant of scaled normals over one incident-face cycle."""
    q = p_f[list(cycle)]
    k = len(q)
    total = 0.0
    for i in range(k - 2):
        total += float(np.dot(q[i], np.cross(q[i + 1], q[k - 1])))
    return total


def triangle_circumradius_check(t: Polygon, tolerances: Tolerances = DEFAULT_TOLERANCES):
    """Circumradius of a triangle scaled to longest edge 1, and the 1/(2 h*) cap.

    Returns ``(r_circ, bound)`` and asserts the product identity
    r_circ = l_min * l_med / (2 h*) to relative tolerance.
    """
    if t.n_vertices != 3:
        raise DegenerateGeometry("circumradius check requires a triangle")
    lengths = np.linalg.norm(t.edges, axis=1)
    if lengths.min() <= tolerances.length * t.diameter:
        raise DegenerateGeometry("triangle has a degenerate edge")
    scaled = Polygon(t.vertices / lengths.max())
    a, b, c = np.sort(np.linalg.norm(scaled.edges, axis=1))
    area = 0.5 * _cross2(scaled.edges[0], -scaled.edges[2])
    if area <= tolerances.convex * scaled.diameter ** 2:
        raise DegenerateGeometry("triangle is (near-)collinear")
    r_circ = float(a * b * c / (4.0 * area))
    hs = h_star(scaled, tolerances)
    predicted = float(a * b / (2.0 * hs))
    if abs(r_circ - predicted) > tolerances.rel * max(r_circ, 1.0):
        raise DegenerateGeometry(
            f"circumradius identity violated: {r_circ} vs {predicted}")
    return r_circ, float(1.0 / (2.0 * hs))
