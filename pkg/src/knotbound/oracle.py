"""Brute-force shortest path from Q to P outside ``B_P & B_Q``.

Independent of the closed form: it only uses the defining radial inequality
of the two bodies.  The boundary of the region in the upper half plane is
sampled uniformly in polar angle (V and both axis points always included),
tangent lines at consecutive samples are intersected to give a polygon that
encloses the region, and Dijkstra runs on the visibility graph over P, Q and
the polygon vertices.  Every graph path stays outside the region, so the
result bounds the true shortest length from above and decreases as the
sampling is refined.  The lower half plane is a mirror image and is not
searched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra

from knotbound.errors import DisconnectedGraphError, DomainError
from knotbound.geometry import _apex, check_config, junction_angle, pitch_angle

INTERIOR_TOL = 1e-12
SEGMENT_STEP = 1e-3
MIN_SEGMENT_SAMPLES = 32
_CHUNK_POINTS = 4_000_000


@dataclass(frozen=True)
class PlanarRegion:
    """``B_P & B_Q`` in the P-O-Q plane.

    ``boundary`` runs from the B_Q axis point ``(x_q, 0)`` through V to the
    B_P axis point ``(-x_p, 0)``; ``angles`` are the polar angles of the
    samples.  ``P = (-a, 0)``, ``Q = (b, 0)``.
    """

    t: float
    a: float
    b: float
    x_p: float
    x_q: float
    psi: float
    gamma: float
    angles: np.ndarray
    boundary: np.ndarray
    P: np.ndarray
    Q: np.ndarray

    @classmethod
    def build(cls, t, a, b, n_boundary, strict=True):
        check_config(t, a, b, strict=strict)
        psi = pitch_angle(t)
        x_p, x_q = _apex(t, a), _apex(t, b)
        gamma = junction_angle(x_p, x_q, psi)
        if not 0 < gamma < math.pi:
            raise DomainError(f"junction angle {gamma:.12g} outside (0, pi)")
        angles = np.linspace(0.0, math.pi, n_boundary + 1)
        angles = np.union1d(angles, [gamma])
        region = cls(
            t=float(t), a=float(a), b=float(b), x_p=x_p, x_q=x_q, psi=psi,
            gamma=gamma, angles=angles, boundary=np.empty((0, 2)),
            P=np.array([-float(a), 0.0]), Q=np.array([float(b), 0.0]),
        )
        r = region.radius(angles)
        object.__setattr__(
            region, "boundary", np.column_stack([r * np.cos(angles), r * np.sin(angles)])
        )
        return region

    def radius(self, theta):
        """``min`` of the two body radii at polar angle ``|theta|``."""
        th = np.abs(theta)
        k = math.tan(self.psi)
        return np.minimum(self.x_q * np.exp(th * k), self.x_p * np.exp((math.pi - th) * k))

    def depth(self, pts):
        """Positive inside the region: ``radius(angle) - |OX|``."""
        pts = np.asarray(pts, dtype=float)
        return self.radius(np.arctan2(pts[..., 1], pts[..., 0])) - np.hypot(pts[..., 0], pts[..., 1])

    def _tangent(self, theta, slope):
        # d/dtheta of r e^{i theta} is r (r'/r + i) e^{i theta}; r'/r = slope
        dx = slope * np.cos(theta) - np.sin(theta)
        dy = slope * np.sin(theta) + np.cos(theta)
        norm = np.hypot(dx, dy)
        return np.column_stack([dx / norm, dy / norm])

    def polygon(self):
        """Vertices of the enclosing polygon, from the B_Q axis point to the B_P axis point.

        On each spiral arc the tangent lines at consecutive samples are
        intersected; V and the two axis points are kept as they are.
        """
        th, pts = self.angles, self.boundary
        k = math.tan(self.psi)
        iv = int(np.argmin(np.abs(th - self.gamma)))
        verts = [pts[:1]]
        for lo, hi, slope in ((0, iv, k), (iv, len(th) - 1, -k)):
            d0 = self._tangent(th[lo:hi], slope)
            d1 = self._tangent(th[lo + 1:hi + 1], slope)
            verts.append(_intersect(pts[lo:hi], d0, pts[lo + 1:hi + 1], d1))
            verts.append(pts[hi:hi + 1])
        return np.concatenate(verts)


def _intersect(p0, d0, p1, d1):
    """Intersection of the lines ``p0 + s d0`` and ``p1 + u d1`` (rowwise)."""
    cross = d0[:, 0] * d1[:, 1] - d0[:, 1] * d1[:, 0]
    w = p1 - p0
    s = (w[:, 0] * d1[:, 1] - w[:, 1] * d1[:, 0]) / cross
    return p0 + s[:, None] * d0


def _clear(region, starts, ends, samples):
    """Rowwise: does the segment ``starts[i] -> ends[i]`` avoid the region interior?"""
    s = np.linspace(0.0, 1.0, samples)
    out = np.empty(len(starts), dtype=bool)
    step = max(1, _CHUNK_POINTS // samples)
    for i in range(0, len(starts), step):
        a, b = starts[i:i + step], ends[i:i + step]
        pts = a[:, None, :] + s[None, :, None] * (b - a)[:, None, :]
        out[i:i + step] = region.depth(pts).max(axis=1) <= INTERIOR_TOL
    return out


def _segment_samples(length, step):
    return max(MIN_SEGMENT_SAMPLES, int(math.ceil(length / step)) + 1)


def _edges_from(region, origin, verts, step):
    """Edges from one point to every polygon vertex that it sees."""
    starts = np.broadcast_to(origin, verts.shape)
    lengths = np.hypot(*(verts - origin).T)
    # cheap rejection first; survivors are rechecked at full resolution
    cand = np.flatnonzero(_clear(region, starts, verts, MIN_SEGMENT_SAMPLES))
    if cand.size == 0:
        return cand, lengths[cand]
    dense = _segment_samples(lengths[cand].max(), step)
    keep = cand[_clear(region, starts[cand], verts[cand], dense)]
    return keep, lengths[keep]


def _chain_edges(region, verts, step):
    """Edges ``i -> j`` (``j > i``) between polygon vertices.

    The enclosing polygon is convex, so what a vertex sees further along the
    chain is a contiguous run; scanning stops at the first hidden vertex.
    """
    n = len(verts)
    rows, cols = [], []
    active = np.arange(n - 1)
    offset = 1
    while active.size:
        j = active + offset
        inside = j < n
        active, j = active[inside], j[inside]
        if not active.size:
            break
        lengths = np.hypot(*(verts[j] - verts[active]).T)
        vis = _clear(region, verts[active], verts[j], _segment_samples(lengths.max(), step))
        rows.append(active[vis])
        cols.append(j[vis])
        active = active[vis]
        offset += 1
    return np.concatenate(rows), np.concatenate(cols)


def oracle_shortest_path(t, a, b, n_boundary, strict=True, segment_step=SEGMENT_STEP):
    """Shortest Q -> P path length in the visibility graph around the region.

    ``n_boundary`` sets the angular sampling: ``n_boundary + 1`` uniform
    angles on ``[0, pi]`` plus the junction angle.  Segments are tested at
    ``max(32, length / segment_step)`` points.
    """
    if n_boundary < 64:
        raise DomainError("n_boundary must be at least 64")
    region = PlanarRegion.build(t, a, b, n_boundary, strict=strict)
    verts = region.polygon()
    n = len(verts)
    i_q, i_p = n, n + 1
    rows, cols, weights = [], [], []

    r, c = _chain_edges(region, verts, segment_step)
    rows.append(r)
    cols.append(c)
    weights.append(np.hypot(*(verts[c] - verts[r]).T))
    for idx, point in ((i_q, region.Q), (i_p, region.P)):
        keep, lengths = _edges_from(region, point, verts, segment_step)
        rows.append(np.full(keep.size, idx))
        cols.append(keep)
        weights.append(lengths)
    pq = np.array([region.P]), np.array([region.Q])
    if _clear(region, *pq, _segment_samples(a + b, segment_step))[0]:
        rows.append(np.array([i_q]))
        cols.append(np.array([i_p]))
        weights.append(np.array([a + b]))

    rows, cols, weights = map(np.concatenate, (rows, cols, weights))
    # csgraph drops explicit zeros; a zero-length edge only joins coincident points
    positive = weights > 0
    graph = coo_matrix(
        (weights[positive], (rows[positive], cols[positive])), shape=(n + 2, n + 2)
    ).tocsr()
    best = dijkstra(graph, directed=False, indices=i_q)[i_p]
    if not np.isfinite(best):
        raise DisconnectedGraphError(
            f"no path from Q to P at t={t:.12g}, a={a:.12g}, b={b:.12g}"
        )
    return float(best)
