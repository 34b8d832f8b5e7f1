"""Constructors for the built-in reference shapes used by the CLI and tests."""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError
from .geometry import Polygon, Polyhedron, Polytope, order_incident_faces


def _oriented_polyhedron(vertices, faces) -> Polyhedron:
    """Build a polyhedron, flipping any face loop whose Newell normal points
    inward, then derive the incident-face cycles."""
    vertices = np.asarray(vertices, dtype=float)
    centroid = vertices.mean(axis=0)
    fixed = []
    for loop in faces:
        pts = vertices[list(loop)]
        nxt = np.roll(pts, -1, axis=0)
        nrm = np.array([
            np.sum((pts[:, 1] - nxt[:, 1]) * (pts[:, 2] + nxt[:, 2])),
            np.sum((pts[:, 2] - nxt[:, 2]) * (pts[:, 0] + nxt[:, 0])),
            np.sum((pts[:, 0] - nxt[:, 0]) * (pts[:, 1] + nxt[:, 1])),
        ])
        if (pts.mean(axis=0) - centroid) @ nrm < 0:
            loop = tuple(reversed(loop))
        fixed.append(tuple(loop))
    return order_incident_faces(Polyhedron(vertices=vertices, faces=tuple(fixed)))


def unit_square() -> Polygon:
    return Polygon(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]))


def regular_ngon(n: int, radius: float = 1.0) -> Polygon:
    """Regular n-gon inscribed in a circle of the given radius."""
    if n < 3:
        raise DomainError("regular n-gon requires n >= 3")
    if radius <= 0:
        raise DomainError("radius must be positive")
    theta = 2.0 * math.pi * np.arange(n) / n
    return Polygon(radius * np.column_stack([np.cos(theta), np.sin(theta)]))


def equilateral_triangle(edge: float = 1.0) -> Polygon:
    if edge <= 0:
        raise DomainError("edge must be positive")
    return Polygon(edge * np.array([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3.0) / 2.0]]))


def box(a: float, b: float, c: float) -> Polyhedron:
    """Axis-aligned box [0,a] x [0,b] x [0,c]."""
    if min(a, b, c) <= 0:
        raise DomainError("box side lengths must be positive")
    verts = np.array([
        [0, 0, 0], [a, 0, 0], [a, b, 0], [0, b, 0],
        [0, 0, c], [a, 0, c], [a, b, c], [0, b, c],
    ], dtype=float)
    faces = [
        (0, 3, 2, 1),  # bottom
        (4, 5, 6, 7),  # top
        (0, 1, 5, 4),  # y = 0
        (1, 2, 6, 5),  # x = a
        (2, 3, 7, 6),  # y = b
        (3, 0, 4, 7),  # x = 0
    ]
    return _oriented_polyhedron(verts, faces)


def unit_cube() -> Polyhedron:
    return box(1.0, 1.0, 1.0)


def regular_tetrahedron(edge: float = 1.0) -> Polyhedron:
    if edge <= 0:
        raise DomainError("edge must be positive")
    verts = edge * np.array([
        [0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [0.5, math.sqrt(3.0) / 2.0, 0.0],
        [0.5, math.sqrt(3.0) / 6.0, math.sqrt(2.0 / 3.0)],
    ])
    faces = [(0, 2, 1), (0, 1, 3), (1, 2, 3), (2, 0, 3)]
    return _oriented_polyhedron(verts, faces)


def regular_simplex(d: int) -> Polytope:
    """Regular simplex with unit edge: a triangle for d = 2, a tetrahedron for d = 3."""
    if d == 2:
        return equilateral_triangle(1.0)
    if d == 3:
        return regular_tetrahedron(1.0)
    raise DomainError("regular simplex shapes support d in {2, 3}")


def square_pyramid() -> Polyhedron:
    """Pyramid over the square [-1,1]^2 with apex (0,0,1); the apex touches
    four faces, making it the stock non-simple test case."""
    verts = np.array([
        [1.0, 1.0, 0.0], [-1.0, 1.0, 0.0], [-1.0, -1.0, 0.0], [1.0, -1.0, 0.0],
        [0.0, 0.0, 1.0],
    ])
    faces = [(0, 1, 2, 3), (0, 1, 4), (1, 2, 4), (2, 3, 4), (3, 0, 4)]
    return _oriented_polyhedron(verts, faces)


def prism(base: Polygon, height: float = 1.0, z0: float = 0.0) -> Polyhedron:
    """Right prism over a convex polygon; every prism vertex is simple."""
    if height <= 0:
        raise DomainError("prism height must be positive")
    n = base.n_vertices
    bottom = np.column_stack([base.vertices, np.full(n, z0)])
    top = np.column_stack([base.vertices, np.full(n, z0 + height)])
    verts = np.vstack([bottom, top])
    faces = [tuple(range(n - 1, -1, -1)), tuple(range(n, 2 * n))]
    for i in range(n):
        j = (i + 1) % n
        faces.append((i, j, n + j, n + i))
    return _oriented_polyhedron(verts, faces)


def hexagonal_prism(radius: float = 1.0, height: float = 1.0) -> Polyhedron:
    return prism(regular_ngon(6, radius), height)


def builtin(name: str) -> Polytope:
    """Resolve a ``builtin:<shape>`` CLI spec (without the prefix) to a shape.

    Supported: unit-square, unit-cube, regular-ngon:N, regular-simplex:D,
    box:A,B,C, square-pyramid, hexagonal-prism.
    """
    kind, _, arg = name.partition(":")
    try:
        if kind == "unit-square":
            return unit_square()
        if kind == "unit-cube":
            return unit_cube()
        if kind == "regular-ngon":
            return regular_ngon(int(arg))
        if kind == "regular-simplex":
            return regular_simplex(int(arg))
        if kind == "box":
            a, b, c = (float(s) for s in arg.split(","))
            return box(a, b, c)
        if kind == "square-pyramid":
            return square_pyramid()
        if kind == "hexagonal-prism":
            return hexagonal_prism()
    except ValueError as exc:
        raise DomainError(f"bad builtin shape arguments: {name!r} ({exc})") from exc
    raise DomainError(f"unknown builtin shape {name!r}")
