"""Deterministic low-discrepancy sampling inside convex polytopes."""

from __future__ import annotations

import numpy as np

from .errors import DomainError
from .geometry import Polygon, Polytope

_PRIMES = (2, 3, 5, 7, 11)


def halton(dim: int, count: int, start: int = 0) -> np.ndarray:
    """First ``count`` points of the Halton sequence in [0,1)^dim, skipping
    ``start`` leading points (index 0, the origin, is always skipped)."""
    if dim < 1 or dim > len(_PRIMES):
        raise DomainError(f"halton supports 1..{len(_PRIMES)} dimensions")
    if count < 0 or start < 0:
        raise DomainError("count and start must be non-negative")
    idx = np.arange(start + 1, start + count + 1, dtype=np.int64)
    out = np.empty((count, dim))
    for d in range(dim):
        # radical inverse of idx in base PRIMES[d]
        base = _PRIMES[d]
        i = idx.copy()
        value = np.zeros(count)
        denom = np.ones(count)
        while np.any(i > 0):
            denom *= base
            value += (i % base) / denom
            i //= base
        out[:, d] = value
    return out


def _bounding_box(p: Polytope):
    v = p.vertices
    return v.min(axis=0), v.max(axis=0)


def _face_heights(p: Polytope, x: np.ndarray) -> np.ndarray:
    """H[m, f]: distance of each point to each face plane (positive inside)."""
    if isinstance(p, Polygon):
        nrm = p.normals
        anch = p.vertices
    else:
        nrm = p.face_normals
        anch = p.face_anchors
    return (anch * nrm).sum(axis=1)[None, :] - x @ nrm.T


def interior_points(p: Polytope, count: int, seed: int = 0,
                    margin_rel: float = 1e-9) -> np.ndarray:
    """``count`` Halton points strictly inside p, by rejection against the
    face half-spaces.  Deterministic for fixed (polytope, count, seed); the
    seed offsets the start of the Halton sequence.  Points keep a clearance
    of ``margin_rel * diameter`` from every face plane."""
    if count <= 0:
        raise DomainError("count must be positive")
    lo, hi = _bounding_box(p)
    dim = p.dim
    margin = margin_rel * p.diameter
    accepted = []
    start = seed * 1_000_003
    got = 0
    # convex body fills a bounded fraction of its bounding box, so chunked
    # rejection terminates quickly; the cap guards degenerate callers
    for _ in range(10_000):
        chunk = max(64, 2 * (count - got))
        u = halton(dim, chunk, start=start)
        start += chunk
        x = lo + u * (hi - lo)
        keep = _face_heights(p, x).min(axis=1) > margin
        if keep.any():
            accepted.append(x[keep])
            got += int(keep.sum())
        if got >= count:
            return np.vstack(accepted)[:count]
    raise DomainError("rejection sampling failed; polytope may be degenerate")


def vertex_probes(p: Polytope, delta_rel: float = 1e-6) -> np.ndarray:
    """One point near each vertex, at distance delta_rel * diameter along the
    inward vertex-to-centroid direction."""
    c = p.centroid
    d = c[None, :] - p.vertices
    d = d / np.linalg.norm(d, axis=1)[:, None]
    return p.vertices + (delta_rel * p.diameter) * d
