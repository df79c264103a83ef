"""Independent brute-force oracles for the test suite.

Everything here is written the slow, obvious way: row-at-a-time direct
difference distances, sorts instead of partitions, per-point loops, and no
imports from the package under test.  The production code computes the same
quantities through blocked GEMM kernels and fused sweeps; agreement between
the two routes is what the oracle tests check.
"""

import math

import numpy as np


def sq_dists(a, b) -> np.ndarray:
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    b = np.atleast_2d(np.asarray(b, dtype=np.float64))
    out = np.empty((a.shape[0], b.shape[0]))
    for i in range(a.shape[0]):
        diff = b - a[i]
        out[i] = np.sum(diff * diff, axis=1)
    return out


def knn_radii_sq(points, k: int, exclude_self: bool = True) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    d = sq_dists(pts, pts)
    out = np.empty(pts.shape[0])
    for i in range(pts.shape[0]):
        row = sorted(np.delete(d[i], i) if exclude_self else d[i])
        out[i] = row[k - 1]
    return out


def count_in_balls(queries, centers, radii_sq) -> tuple[np.ndarray, np.ndarray]:
    d = sq_dists(queries, centers)
    inside = d <= np.asarray(radii_sq)[None, :]
    return inside.sum(axis=1), inside.sum(axis=0)


def nearest(queries, points) -> tuple[np.ndarray, np.ndarray]:
    d = sq_dists(queries, points)
    idx = np.empty(d.shape[0], dtype=np.int64)
    dist = np.empty(d.shape[0])
    for i in range(d.shape[0]):
        best = 0
        for j in range(1, d.shape[1]):
            if d[i, j] < d[i, best]:
                best = j
        idx[i] = best
        dist[i] = math.sqrt(d[i, best])
    return idx, dist


def _ceil_div(num: int, den: int) -> int:
    return math.ceil(num / den)


def iprec(real, syn, k: int = 3) -> float:
    r = knn_radii_sq(real, k)
    d = sq_dists(syn, real)
    return float(np.mean(np.any(d <= r[None, :], axis=1)))


def irec(real, syn, k: int = 3) -> float:
    return iprec(syn, real, k)


def density(real, syn, k: int) -> float:
    r = knn_radii_sq(real, k)
    d = sq_dists(syn, real)
    total = int((d <= r[None, :]).sum())
    return total / (k * len(np.atleast_2d(syn)))


def coverage(real, syn, k: int) -> float:
    r = knn_radii_sq(real, k)
    d = sq_dists(syn, real)
    return float(np.mean(np.any(d <= r[None, :], axis=0)))


def coverage_expectation_mc(
    n_real: int, n_syn: int, k: int, trials: int, rng: np.random.Generator
) -> float:
    """Monte-Carlo same-law expected coverage (standard normal, 2-D)."""
    vals = []
    for _ in range(trials):
        real = rng.normal(size=(n_real, 2))
        syn = rng.normal(size=(n_syn, 2))
        vals.append(coverage(real, syn, k))
    return float(np.mean(vals))


def iap(real, syn, grid: int = 50) -> float:
    real = np.atleast_2d(real)
    syn = np.atleast_2d(syn)
    center = np.median(real, axis=0)
    d_real = np.sort(np.sum((real - center) ** 2, axis=1))
    d_syn = np.sum((syn - center) ** 2, axis=1)
    n = real.shape[0]
    alphas = [0.0] + [i / grid for i in range(1, grid + 1)]
    ps = [0.0]
    for i in range(1, grid + 1):
        radius = d_real[_ceil_div(n * i, grid) - 1]
        ps.append(float(np.mean(d_syn <= radius)))
    ps = np.asarray(ps)
    alphas = np.asarray(alphas)
    return float(1.0 - 2.0 * np.trapezoid(np.abs(ps - alphas), alphas))


def ibr(real, syn, recall_k: int = 5, grid: int = 50) -> float:
    real = np.atleast_2d(real)
    syn = np.atleast_2d(syn)
    center = np.median(syn, axis=0)
    d_center = np.sum((syn - center) ** 2, axis=1)
    rank = np.empty(len(syn), dtype=np.int64)
    rank[np.argsort(d_center, kind="stable")] = np.arange(len(syn))
    d_sorted = np.sort(d_center)

    tol = knn_radii_sq(real, recall_k)
    d = sq_dists(real, syn)
    n = real.shape[0]
    best = np.empty(n, dtype=np.int64)
    for i in range(n):
        # nearest synthetic point; ties break toward the smaller center rank
        cands = np.flatnonzero(d[i] == d[i].min())
        best[i] = cands[np.argmin(rank[cands])]
    near = d[np.arange(n), best] <= tol

    alphas = [0.0]
    rs = [0.0]
    ng = syn.shape[0]
    for i in range(1, grid + 1):
        threshold = d_sorted[_ceil_div(ng * i, grid) - 1]
        member = d_center[best] <= threshold
        rs.append(float(np.mean(near & member)))
        alphas.append(i / grid)
    rs = np.asarray(rs)
    alphas = np.asarray(alphas)
    return float(1.0 - 2.0 * np.trapezoid(np.abs(rs - alphas), alphas))


def cover_prec(real, syn, k_prime: int, membership: str = "at_least") -> float:
    r = knn_radii_sq(syn, k_prime)
    d = sq_dists(syn, real)
    counts = (d <= r[:, None]).sum(axis=1)
    k = _ceil_div(k_prime, 3)
    ok = counts >= k if membership == "at_least" else counts <= k
    return float(np.mean(ok))


def cover_rec(real, syn, k_prime: int, membership: str = "at_least") -> float:
    r = knn_radii_sq(real, k_prime)
    d = sq_dists(syn, real)
    counts = (d <= r[None, :]).sum(axis=0)
    k = _ceil_div(k_prime, 3)
    ok = counts >= k if membership == "at_least" else counts <= k
    return float(np.mean(ok))


def symprec(real, syn, k: int = 5) -> float:
    r_syn = knn_radii_sq(syn, k)
    d = sq_dists(syn, real)
    c_precision = float(np.mean(np.any(d <= r_syn[:, None], axis=1)))
    return min(c_precision, iprec(real, syn, k))


def symrec(real, syn, k: int = 5) -> float:
    return min(coverage(real, syn, k), irec(real, syn, k))


def _psr_products(targets, support, k: int, scale: float) -> np.ndarray:
    radii = np.sqrt(knn_radii_sq(support, k))
    big_r = scale * float(np.mean(radii))
    d = np.sqrt(sq_dists(targets, support))
    if big_r > 0.0:
        factors = np.minimum(d / big_r, 1.0)
    else:
        factors = (d > 0.0).astype(np.float64)
    return np.prod(factors, axis=1)


def pprec(real, syn, k: int = 4, scale: float = 1.2) -> float:
    return float(np.mean(1.0 - _psr_products(syn, real, k, scale)))


def prec_p(real, syn, k: int = 4, scale: float = 1.2) -> float:
    return float(np.mean(1.0 - _psr_products(real, syn, k, scale)))
