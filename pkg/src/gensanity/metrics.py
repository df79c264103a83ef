"""Twelve sample-based fidelity and diversity metrics over embedded sets.

Six metric pairs are implemented, each with one fidelity score (does the
synthetic data live on the real support?) and one diversity score (does the
real data live on the synthetic support?):

==========  ===========  ============================================
fidelity    diversity    family
==========  ===========  ============================================
iprec       irec         k-NN support membership
density     coverage     k-NN ball counting, calibrated k
iap         ibr          integrated quantile-ball precision / recall
cprec       crec         cover counts with log-scaled neighbourhoods
symprec     symrec       two-sided minima of membership rates
pprec       prec_p       product-of-overlaps support probability
==========  ===========  ============================================

All support estimates are unions of closed k-NN balls; memberships are
evaluated on squared distances against squared radii so results are exact at
boundaries (a point set compared with itself scores 1 where it should).

:func:`compute_all` evaluates any subset of the twelve in one fused pass:
per-set neighbour radii are obtained once and a single blocked sweep over the
cross-distance matrix feeds every enabled metric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .data import EmbeddedSet, SchemaMismatchError, as_points
from .neighbors import DEFAULT_BLOCK_ROWS, iter_sq_dist_blocks

METRIC_IDS = (
    "iprec",
    "irec",
    "density",
    "coverage",
    "iap",
    "ibr",
    "cprec",
    "crec",
    "symprec",
    "symrec",
    "pprec",
    "prec_p",
)

FIDELITY_METRICS = ("iprec", "density", "iap", "cprec", "symprec", "pprec")
DIVERSITY_METRICS = ("irec", "coverage", "ibr", "crec", "symrec", "prec_p")

METRIC_LABELS = {
    "iprec": "I-Prec",
    "irec": "I-Rec",
    "density": "Density",
    "coverage": "Coverage",
    "iap": "IAP",
    "ibr": "IBR",
    "cprec": "C-Prec",
    "crec": "C-Rec",
    "symprec": "symPrec",
    "symrec": "symRec",
    "pprec": "P-Prec",
    "prec_p": "P-Rec",
}


class MetricPreconditionError(ValueError):
    """An enabled metric cannot be computed on the given set sizes."""

    def __init__(self, metric: str, message: str):
        self.metric = metric
        super().__init__(f"{metric}: {message}")


@dataclass(frozen=True)
class MetricConfig:
    """Hyperparameters for all metric families.

    ``cover_membership`` selects how the cover-count indicator reads: a ball
    passes when it contains at least (``"at_least"``, the default) or at most
    (``"at_most"``) ``k`` points of the other set.
    """

    metrics: tuple[str, ...] = METRIC_IDS
    knn_k: int = 3  # iprec / irec
    sym_k: int = 5  # symprec / symrec
    psr_k: int = 4  # pprec / prec_p support radius
    psr_scale: float = 1.2
    coverage_target: float = 0.95
    coverage_max_k: int = 20
    alpha_grid: int = 50
    beta_recall_k: int = 5
    cover_membership: str = "at_least"
    block_rows: int = DEFAULT_BLOCK_ROWS

    def __post_init__(self):
        unknown = [m for m in self.metrics if m not in METRIC_IDS]
        if unknown:
            raise ValueError(f"unknown metric ids: {unknown}")
        if self.cover_membership not in ("at_least", "at_most"):
            raise ValueError("cover_membership must be 'at_least' or 'at_most'")

    def with_metrics(self, metrics) -> "MetricConfig":
        return replace(self, metrics=tuple(metrics))


def expected_coverage(n_real: int, n_synthetic: int, k: int) -> float:
    """Expected coverage when both sets are drawn from one continuous law.

    By exchangeability, a real point's k-NN ball (radius from its k-th
    nearest of the other ``n_real - 1`` real points) misses all synthetic
    points exactly when the k nearest of the pooled others are all real, so
    the expectation is distribution-free:

        1 - C(n_real - 1, k) / C(n_real - 1 + n_synthetic, k)
    """
    if k >= n_real:
        return 1.0
    prob_all_real = 1.0
    for i in range(k):
        prob_all_real *= (n_real - 1 - i) / (n_real - 1 + n_synthetic - i)
    return 1.0 - prob_all_real


@lru_cache(maxsize=4096)
def calibrate_coverage_k(
    n_real: int,
    n_synthetic: int,
    target: float = 0.95,
    max_k: int = 20,
) -> int:
    """Smallest k whose expected same-law coverage exceeds ``target``.

    Returns ``max_k`` when no k in range qualifies (heavily imbalanced sizes).
    """
    for k in range(1, max_k + 1):
        if expected_coverage(n_real, n_synthetic, k) > target:
            return k
    return max_k


def _cover_k_prime(n_real: int) -> int:
    return math.ceil(math.log(n_real) + 6)


def _ceil_div(num: int, den: int) -> int:
    return -((-num) // den)


def _self_radii_sq(pts: np.ndarray, ks, block_rows: int) -> dict[int, np.ndarray]:
    """Squared k-th neighbour distances (self excluded) for several k at once."""
    ks = sorted(set(ks))
    if not ks:
        return {}
    n = pts.shape[0]
    kth = [k - 1 for k in ks]  # ranks after masking self to +inf
    out = {k: np.empty(n, dtype=np.float64) for k in ks}
    for start, stop, block in iter_sq_dist_blocks(pts, pts, block_rows):
        block[np.arange(stop - start), np.arange(start, stop)] = np.inf
        part = np.partition(block, kth, axis=1)
        for k in ks:
            out[k][start:stop] = part[:, k - 1]
    return out


def _quantile_ball(sorted_sq: np.ndarray, count: int) -> float:
    """Closed-ball squared radius containing at least ``count`` points."""
    return sorted_sq[count - 1]


def _psr_factor(dist: np.ndarray, radius: float) -> np.ndarray:
    """Per-pair factor ``1 - f`` of the product-of-overlaps score."""
    if radius > 0.0:
        return np.minimum(dist / radius, 1.0)
    return (dist > 0.0).astype(np.float64)


def compute_all(
    real,
    synthetic,
    config: MetricConfig = MetricConfig(),
    *,
    collect_errors: bool = False,
):
    """Evaluate the configured metrics on a (real, synthetic) pair.

    Accepts :class:`EmbeddedSet` or plain arrays.  Returns a dict mapping
    metric id to float, in the canonical id order.  With ``collect_errors``
    the return value is ``(values, errors)`` and metrics whose preconditions
    fail are reported in ``errors`` instead of raising.
    """
    real_pts = as_points(real)
    syn_pts = as_points(synthetic)
    if real_pts.shape[1] != syn_pts.shape[1]:
        raise SchemaMismatchError(
            f"embedded dimensions differ: real {real_pts.shape[1]}, "
            f"synthetic {syn_pts.shape[1]}"
        )
    wanted = [m for m in METRIC_IDS if m in config.metrics]
    nr, ng = real_pts.shape[0], syn_pts.shape[0]

    errors: dict[str, str] = {}
    active: list[str] = []
    k_cov = calibrate_coverage_k(nr, ng, config.coverage_target, config.coverage_max_k)
    k_prime = _cover_k_prime(nr)
    needs = {
        "iprec": [("real", config.knn_k)],
        "irec": [("syn", config.knn_k)],
        "density": [("real", k_cov)],
        "coverage": [("real", k_cov)],
        "iap": [("real", 1)],
        "ibr": [("real", config.beta_recall_k)],
        "cprec": [("syn", k_prime)],
        "crec": [("real", k_prime)],
        "symprec": [("real", config.sym_k), ("syn", config.sym_k)],
        "symrec": [("real", config.sym_k), ("syn", config.sym_k)],
        "pprec": [("real", config.psr_k)],
        "prec_p": [("syn", config.psr_k)],
    }
    for m in wanted:
        shortfall = None
        for side, k in needs[m]:
            n = nr if side == "real" else ng
            if n < k + 1:
                shortfall = f"needs at least {k + 1} {side} points, got {n}"
                break
        if shortfall is None:
            active.append(m)
        else:
            errors[m] = shortfall
            if not collect_errors:
                raise MetricPreconditionError(m, shortfall)

    real_ks = sorted({k for m in active for side, k in needs[m] if side == "real"})
    syn_ks = sorted({k for m in active for side, k in needs[m] if side == "syn"})
    real_r = _self_radii_sq(real_pts, real_ks, config.block_rows)
    syn_r = _self_radii_sq(syn_pts, syn_ks, config.block_rows)

    values: dict[str, float] = {}

    # Quantile-ball precision needs no cross sweep, only center distances.
    grid = config.alpha_grid
    if "iap" in active:
        center = np.median(real_pts, axis=0)
        d_real = np.sort(_center_dists_sq(real_pts, center))
        d_syn = _center_dists_sq(syn_pts, center)
        ps = np.empty(grid + 1)
        ps[0] = 0.0
        for i in range(1, grid + 1):
            radius = _quantile_ball(d_real, _ceil_div(nr * i, grid))
            ps[i] = float(np.mean(d_syn <= radius))
        xs = np.arange(grid + 1) / grid
        values["iap"] = float(1.0 - 2.0 * np.trapezoid(np.abs(ps - xs), xs))

    ibr_order = None
    ibr_cuts = None
    if "ibr" in active:
        center = np.median(syn_pts, axis=0)
        d_syn_c = _center_dists_sq(syn_pts, center)
        ibr_order = np.argsort(d_syn_c, kind="stable")
        d_sorted = d_syn_c[ibr_order]
        cuts = np.empty(grid, dtype=np.int64)
        for i in range(1, grid + 1):
            base = _ceil_div(ng * i, grid)
            cuts[i - 1] = np.searchsorted(d_sorted, d_sorted[base - 1], side="right")
        ibr_cuts = cuts

    sweep_syn = syn_pts if ibr_order is None else syn_pts[ibr_order]
    syn_r_sorted = {
        k: (v if ibr_order is None else v[ibr_order]) for k, v in syn_r.items()
    }

    stats = _cross_sweep(
        sweep_syn,
        real_pts,
        real_r,
        syn_r_sorted,
        config,
        active,
        k_cov,
        k_prime,
        ibr_cuts,
    )

    if "iprec" in active:
        values["iprec"] = float(stats["syn_in_real"][config.knn_k].mean())
    if "irec" in active:
        values["irec"] = float(stats["real_in_syn"][config.knn_k].mean())
    if "density" in active:
        values["density"] = float(stats["density_total"] / (k_cov * ng))
    if "coverage" in active:
        values["coverage"] = float(stats["covered_real"].mean())
    if "cprec" in active:
        counts = stats["cprec_counts"]
        k = _ceil_div(k_prime, 3)
        ok = counts >= k if config.cover_membership == "at_least" else counts <= k
        values["cprec"] = float(ok.mean())
    if "crec" in active:
        counts = stats["crec_counts"]
        k = _ceil_div(k_prime, 3)
        ok = counts >= k if config.cover_membership == "at_least" else counts <= k
        values["crec"] = float(ok.mean())
    if "symprec" in active:
        values["symprec"] = min(
            float(stats["syn_ball_has_real"].mean()),
            float(stats["syn_in_real"][config.sym_k].mean()),
        )
    if "symrec" in active:
        values["symrec"] = min(
            float(stats["covered_real_sym"].mean()),
            float(stats["real_in_syn"][config.sym_k].mean()),
        )
    if "pprec" in active:
        values["pprec"] = float(np.mean(1.0 - stats["psr_prod_syn"]))
    if "prec_p" in active:
        values["prec_p"] = float(np.mean(1.0 - stats["psr_prod_real"]))
    if "ibr" in active:
        # A real point is recalled at level beta when its nearest synthetic
        # point overall is (a) inside the point's own k-NN ball and (b) inside
        # the synthetic quantile ball.  Requiring the nearest point overall,
        # rather than the nearest among ball members, keeps the curve pinned
        # to the diagonal when both sets coincide.
        rs = np.empty(grid + 1)
        rs[0] = 0.0
        near = stats["ibr_nn_sq"] <= real_r[config.beta_recall_k]
        ranks = stats["ibr_nn_rank"]
        for i in range(grid):
            rs[i + 1] = float(np.mean(near & (ranks < ibr_cuts[i])))
        xs = np.arange(grid + 1) / grid
        values["ibr"] = float(1.0 - 2.0 * np.trapezoid(np.abs(rs - xs), xs))

    ordered = {m: values[m] for m in METRIC_IDS if m in values}
    if collect_errors:
        return ordered, errors
    return ordered


def _center_dists_sq(pts: np.ndarray, center: np.ndarray) -> np.ndarray:
    diff = pts - center[None, :]
    return np.einsum("ij,ij->i", diff, diff)


def _cross_sweep(
    syn_pts: np.ndarray,
    real_pts: np.ndarray,
    real_r: dict[int, np.ndarray],
    syn_r: dict[int, np.ndarray],
    config: MetricConfig,
    active: list[str],
    k_cov: int,
    k_prime: int,
    ibr_cuts: np.ndarray | None,
) -> dict:
    """One blocked pass over the synthetic x real distance matrix.

    Rows are synthetic points (pre-sorted by ball-center distance when the
    integrated recall needs quantile-ball ranks), columns are real points.
    """
    nr = real_pts.shape[0]
    ng = syn_pts.shape[0]
    out: dict = {}

    syn_in_real_ks = []
    if "iprec" in active:
        syn_in_real_ks.append(config.knn_k)
    if "symprec" in active:
        syn_in_real_ks.append(config.sym_k)
    real_in_syn_ks = []
    if "irec" in active:
        real_in_syn_ks.append(config.knn_k)
    if "symrec" in active:
        real_in_syn_ks.append(config.sym_k)

    syn_in_real = {k: np.zeros(ng, dtype=bool) for k in set(syn_in_real_ks)}
    real_in_syn = {k: np.zeros(nr, dtype=bool) for k in set(real_in_syn_ks)}
    covered_real = np.zeros(nr, dtype=bool) if "coverage" in active else None
    covered_real_sym = np.zeros(nr, dtype=bool) if "symrec" in active else None
    density_total = 0
    cprec_counts = np.zeros(ng, dtype=np.int64) if "cprec" in active else None
    crec_counts = np.zeros(nr, dtype=np.int64) if "crec" in active else None
    syn_ball_has_real = np.zeros(ng, dtype=bool) if "symprec" in active else None
    psr_prod_syn = np.ones(ng) if "pprec" in active else None
    psr_prod_real = np.ones(nr) if "prec_p" in active else None
    need_dist = psr_prod_syn is not None or psr_prod_real is not None

    r_real = None
    if psr_prod_syn is not None:
        r_real = config.psr_scale * float(np.mean(np.sqrt(real_r[config.psr_k])))
    r_syn = None
    if psr_prod_real is not None:
        r_syn = config.psr_scale * float(np.mean(np.sqrt(syn_r[config.psr_k])))

    ibr_nn_sq = None
    ibr_nn_rank = None
    if ibr_cuts is not None:
        ibr_nn_sq = np.full(nr, np.inf)
        ibr_nn_rank = np.zeros(nr, dtype=np.int64)

    for start, stop, block in iter_sq_dist_blocks(syn_pts, real_pts, config.block_rows):
        for k in syn_in_real:
            syn_in_real[k][start:stop] = np.any(block <= real_r[k][None, :], axis=1)
        for k in real_in_syn:
            real_in_syn[k] |= np.any(block <= syn_r[k][start:stop, None], axis=0)
        if covered_real is not None or "density" in active:
            inside = block <= real_r[k_cov][None, :]
            if covered_real is not None:
                covered_real |= np.any(inside, axis=0)
            if "density" in active:
                density_total += int(inside.sum())
        if covered_real_sym is not None:
            covered_real_sym |= np.any(block <= real_r[config.sym_k][None, :], axis=0)
        if cprec_counts is not None:
            cprec_counts[start:stop] = (block <= syn_r[k_prime][start:stop, None]).sum(axis=1)
        if crec_counts is not None:
            crec_counts += (block <= real_r[k_prime][None, :]).sum(axis=0)
        if syn_ball_has_real is not None:
            syn_ball_has_real[start:stop] = np.any(
                block <= syn_r[config.sym_k][start:stop, None], axis=1
            )
        if need_dist:
            dist = np.sqrt(block)
            if psr_prod_syn is not None:
                psr_prod_syn[start:stop] = np.prod(_psr_factor(dist, r_real), axis=1)
            if psr_prod_real is not None:
                psr_prod_real *= np.prod(_psr_factor(dist, r_syn), axis=0)
        if ibr_nn_sq is not None:
            # Track each real point's nearest synthetic point; rows are
            # sorted by ball-center distance, so the stored rank doubles as
            # quantile-ball membership (rank < cut).  Strict improvement
            # keeps the smallest rank on exact ties.
            block_min = block.min(axis=0)
            block_arg = block.argmin(axis=0)
            better = block_min < ibr_nn_sq
            ibr_nn_sq[better] = block_min[better]
            ibr_nn_rank[better] = start + block_arg[better]

    out["syn_in_real"] = syn_in_real
    out["real_in_syn"] = real_in_syn
    out["covered_real"] = covered_real
    out["covered_real_sym"] = covered_real_sym
    out["density_total"] = density_total
    out["cprec_counts"] = cprec_counts
    out["crec_counts"] = crec_counts
    out["syn_ball_has_real"] = syn_ball_has_real
    out["psr_prod_syn"] = psr_prod_syn
    out["psr_prod_real"] = psr_prod_real
    out["ibr_nn_sq"] = ibr_nn_sq
    out["ibr_nn_rank"] = ibr_nn_rank
    return out


def knn_precision_recall(real, synthetic, k: int = 3) -> tuple[float, float]:
    """Support-membership fidelity/diversity pair (ids ``iprec``/``irec``)."""
    vals = compute_all(real, synthetic, MetricConfig(metrics=("iprec", "irec"), knn_k=k))
    return vals["iprec"], vals["irec"]


def density_coverage(real, synthetic, config: MetricConfig = MetricConfig()) -> tuple[float, float]:
    """Calibrated ball-counting pair (ids ``density``/``coverage``)."""
    vals = compute_all(real, synthetic, config.with_metrics(("density", "coverage")))
    return vals["density"], vals["coverage"]


def integrated_quantile_pair(real, synthetic, config: MetricConfig = MetricConfig()) -> tuple[float, float]:
    """Integrated quantile-ball pair (ids ``iap``/``ibr``)."""
    vals = compute_all(real, synthetic, config.with_metrics(("iap", "ibr")))
    return vals["iap"], vals["ibr"]


def cover_precision_recall(real, synthetic, config: MetricConfig = MetricConfig()) -> tuple[float, float]:
    """Cover-count pair with log-scaled neighbourhoods (ids ``cprec``/``crec``)."""
    vals = compute_all(real, synthetic, config.with_metrics(("cprec", "crec")))
    return vals["cprec"], vals["crec"]


def symmetric_precision_recall(real, synthetic, config: MetricConfig = MetricConfig()) -> tuple[float, float]:
    """Two-sided minimum pair (ids ``symprec``/``symrec``)."""
    vals = compute_all(real, synthetic, config.with_metrics(("symprec", "symrec")))
    return vals["symprec"], vals["symrec"]


def probabilistic_precision_recall(real, synthetic, config: MetricConfig = MetricConfig()) -> tuple[float, float]:
    """Product-of-overlaps pair (ids ``pprec``/``prec_p``)."""
    vals = compute_all(real, synthetic, config.with_metrics(("pprec", "prec_p")))
    return vals["pprec"], vals["prec_p"]
