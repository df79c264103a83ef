"""Exact brute-force nearest-neighbour kernels, blocked for bounded memory.

All distances are Euclidean.  Squared distances are computed with the
expanded form ``|a|^2 + |b|^2 - 2 a.b`` (one matrix product per block), then
entries small enough to be dominated by cancellation error are recomputed
with the direct difference formula.  This keeps the kernels fast at tens of
thousands of points while making zero distances between identical points
exactly zero, which the closed-ball conventions downstream rely on.

Ball membership is closed (``distance <= radius``) and every comparison is
done on squared values so that a radius obtained from the k-th neighbour of
a point admits that neighbour exactly, with no square-root round-trip.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

DEFAULT_BLOCK_ROWS = 1024

# Entries of the expanded-form squared distance below _REFINE_FACTOR * eps *
# (|a|^2 + |b|^2) may carry full cancellation error and are recomputed
# directly.  64 leaves a wide margin over the worst-case error constant.
_REFINE_FACTOR = 64.0


def _row_norms_sq(points: np.ndarray) -> np.ndarray:
    return np.einsum("ij,ij->i", points, points)


def sq_dist_block(
    a: np.ndarray,
    b: np.ndarray,
    a_norms: np.ndarray | None = None,
    b_norms: np.ndarray | None = None,
) -> np.ndarray:
    """Dense (len(a), len(b)) matrix of exact-ish squared distances."""
    if a_norms is None:
        a_norms = _row_norms_sq(a)
    if b_norms is None:
        b_norms = _row_norms_sq(b)
    d = a_norms[:, None] + b_norms[None, :]
    scale = d.copy()
    d -= 2.0 * (a @ b.T)
    np.maximum(d, 0.0, out=d)
    # Recompute near-cancelled entries exactly.
    thresh = _REFINE_FACTOR * np.finfo(np.float64).eps
    suspect = d <= thresh * scale
    if np.any(suspect):
        ii, jj = np.nonzero(suspect)
        diff = a[ii] - b[jj]
        d[ii, jj] = np.einsum("ij,ij->i", diff, diff)
    return d


def iter_sq_dist_blocks(
    a: np.ndarray, b: np.ndarray, block_rows: int = DEFAULT_BLOCK_ROWS
) -> Iterator[tuple[int, int, np.ndarray]]:
    """Yield ``(row_start, row_stop, block)`` of squared distances a[start:stop] x b."""
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    if a.shape[1] != b.shape[1]:
        raise ValueError(f"dimension mismatch: {a.shape[1]} vs {b.shape[1]}")
    a_norms = _row_norms_sq(a)
    b_norms = _row_norms_sq(b)
    for start in range(0, a.shape[0], block_rows):
        stop = min(start + block_rows, a.shape[0])
        yield start, stop, sq_dist_block(a[start:stop], b, a_norms[start:stop], b_norms)


@dataclass(frozen=True)
class NeighborRadii:
    """Per-point k-th nearest-neighbour distances of a point set.

    ``radii_sq`` holds the exact squared order statistics used internally;
    ``radii`` is the Euclidean view.
    """

    k: int
    exclude_self: bool
    radii_sq: np.ndarray

    @property
    def radii(self) -> np.ndarray:
        return np.sqrt(self.radii_sq)


def knn_radii(
    points,
    k: int,
    *,
    exclude_self: bool = True,
    block_rows: int = DEFAULT_BLOCK_ROWS,
) -> NeighborRadii:
    """Distance from each point to its k-th nearest neighbour within the set.

    With ``exclude_self`` (the default) the point itself does not count as a
    neighbour, so duplicates yield zero radii only when at least k copies of
    the same value are present.  Requires ``len(points) >= k + exclude_self``.
    """
    pts = np.ascontiguousarray(np.atleast_2d(points), dtype=np.float64)
    n = pts.shape[0]
    need = k + 1 if exclude_self else k
    if k < 1:
        raise ValueError("k must be >= 1")
    if n < need:
        raise ValueError(f"need at least {need} points for k={k}, got {n}")
    out = np.empty(n, dtype=np.float64)
    kth = k if exclude_self else k - 1  # rank after masking self to +inf
    for start, stop, block in iter_sq_dist_blocks(pts, pts, block_rows):
        if exclude_self:
            block[np.arange(stop - start), np.arange(start, stop)] = np.inf
            out[start:stop] = np.partition(block, kth - 1, axis=1)[:, kth - 1]
        else:
            out[start:stop] = np.partition(block, kth, axis=1)[:, kth]
    return NeighborRadii(k=k, exclude_self=exclude_self, radii_sq=out)


@dataclass(frozen=True)
class BallCounts:
    """Marginals of the query-in-ball indicator matrix."""

    per_query: np.ndarray  # number of balls containing each query point
    per_center: np.ndarray  # number of query points inside each ball


def count_in_balls(
    queries,
    centers,
    radii,
    *,
    block_rows: int = DEFAULT_BLOCK_ROWS,
) -> BallCounts:
    """Count closed-ball memberships between query points and centred balls.

    ``radii`` may be a :class:`NeighborRadii` (preferred: exact squared values
    are compared) or a plain array of Euclidean radii, one per center.
    """
    q = np.ascontiguousarray(np.atleast_2d(queries), dtype=np.float64)
    c = np.ascontiguousarray(np.atleast_2d(centers), dtype=np.float64)
    if isinstance(radii, NeighborRadii):
        r_sq = radii.radii_sq
    else:
        r = np.asarray(radii, dtype=np.float64)
        r_sq = r * r
    if r_sq.shape != (c.shape[0],):
        raise ValueError("need exactly one radius per center")
    per_query = np.zeros(q.shape[0], dtype=np.int64)
    per_center = np.zeros(c.shape[0], dtype=np.int64)
    for start, stop, block in iter_sq_dist_blocks(q, c, block_rows):
        inside = block <= r_sq[None, :]
        per_query[start:stop] = inside.sum(axis=1)
        per_center += inside.sum(axis=0)
    return BallCounts(per_query=per_query, per_center=per_center)


def nearest_neighbor(
    queries,
    points,
    *,
    block_rows: int = DEFAULT_BLOCK_ROWS,
) -> tuple[np.ndarray, np.ndarray]:
    """Index and distance of each query's nearest point (ties: lowest index).

    A query that is also a member of ``points`` matches itself at distance 0.
    """
    q = np.ascontiguousarray(np.atleast_2d(queries), dtype=np.float64)
    p = np.ascontiguousarray(np.atleast_2d(points), dtype=np.float64)
    best_idx = np.zeros(q.shape[0], dtype=np.int64)
    best_sq = np.full(q.shape[0], np.inf)
    # Block over points so the argmin sees bounded slabs; keep the first
    # (lowest-index) minimum by only accepting strict improvements.
    p_norms = _row_norms_sq(p)
    q_norms = _row_norms_sq(q)
    for start in range(0, p.shape[0], block_rows):
        stop = min(start + block_rows, p.shape[0])
        block = sq_dist_block(q, p[start:stop], q_norms, p_norms[start:stop])
        local = np.argmin(block, axis=1)
        vals = block[np.arange(q.shape[0]), local]
        better = vals < best_sq
        best_sq[better] = vals[better]
        best_idx[better] = local[better] + start
    return best_idx, np.sqrt(best_sq)
