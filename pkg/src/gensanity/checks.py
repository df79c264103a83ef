"""The catalog of 14 sanity checks and their execution into curves.

A check pairs a real and a synthetic distribution family and sweeps one
parameter (mean offset, scale, mode count, dataset size, ...) over a grid.
Running a check samples both sides at every grid point, embeds them, and
evaluates the configured metrics, repeated with independent seeds.

Checks are plain data (:class:`CheckSpec`) so the catalog can be exported,
audited, and extended with custom files.  One spec may contribute several
verdict-table rows: its variants carry a ``row`` key, and criteria are
attached per row (the combined sequential/simultaneous mode-dropping check
is the one case with two rows).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .data import (
    NUMERICAL,
    Column,
    Dataset,
    EmbeddedSet,
    RandomSource,
    ROLE_REAL,
    ROLE_SYNTHETIC,
)
from .embed import embed_pair
from .metrics import MetricConfig, compute_all
from .samplers import (
    BallUniform,
    DistributionSpec,
    GaussianMixture,
    HypercubeUniform,
    HypersphereSurface,
    IsotropicGaussian,
    ParetoTail,
    ProductOf,
    RoundedScaledGaussian1D,
    ScaledGaussian1D,
    TorusCircle,
    WithOutlier,
    hypercube_offset,
    sample,
    spec_dim,
    spec_from_json,
    spec_to_json,
)

EMBEDDING_MODES = ("simple", "one-class")


@dataclass(frozen=True)
class CheckCell:
    """One grid point: the distribution pair and sample sizes at sweep value x."""

    x: float
    real: DistributionSpec
    synthetic: DistributionSpec
    n_real: int
    n_synthetic: int

    def __post_init__(self):
        if min(self.n_real, self.n_synthetic) < 100:
            raise ValueError("cell sizes must be >= 100")
        if spec_dim(self.real) != spec_dim(self.synthetic):
            raise ValueError("real and synthetic specs must have equal dimension")


@dataclass(frozen=True)
class CheckVariant:
    """A sub-setting of a check (a dimension choice, role swap, or mode).

    ``row`` names the verdict-table row this variant aggregates into; all
    variants of a row must pass a criterion for the row to pass.
    """

    name: str
    row: str
    log_x: bool
    cells: tuple[CheckCell, ...]

    def __post_init__(self):
        xs = [c.x for c in self.cells]
        if not all(a < b for a, b in zip(xs, xs[1:])):
            raise ValueError(f"variant {self.name}: grid must be strictly increasing")

    @property
    def xs(self) -> np.ndarray:
        return np.array([c.x for c in self.cells])


@dataclass(frozen=True)
class CheckSpec:
    check: str
    title: str
    tabular: bool
    variants: tuple[CheckVariant, ...]

    def rows(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for v in self.variants:
            seen.setdefault(v.row, None)
        return tuple(seen)


@dataclass
class Curve:
    """Per-repeat metric values of one (check, variant, metric) pair."""

    check: str
    variant: str
    row: str
    metric: str
    xs: np.ndarray
    values: np.ndarray  # (repeats, len(xs))
    log_x: bool
    error: str | None = None

    @property
    def mean(self) -> np.ndarray:
        return self.values.mean(axis=0)


_GMD_RANGES = {1: 6.0, 8: 3.0, 64: 1.0}
_STD_EXPONENTS = {1: 3.0, 8: 1.0, 64: 0.5}
_DROP_STDS = {1: 1.0 / 6.0, 8: 1.0 / 3.0, 64: 1.0}
_MDI_SEED = 0


def _lin_grid(lo: float, hi: float, n: int) -> np.ndarray:
    return np.linspace(lo, hi, n)


def _log_grid(lo: float, hi: float, n: int) -> np.ndarray:
    return np.logspace(math.log10(lo), math.log10(hi), n)


def _log_int_grid(lo: float, hi: float, n: int) -> list[int]:
    vals = [int(round(v)) for v in _log_grid(lo, hi, n)]
    if any(a >= b for a, b in zip(vals, vals[1:])):
        raise ValueError("log integer grid collapsed; use fewer points")
    return vals


@lru_cache(maxsize=1)
def invention_component_means() -> tuple[tuple[float, float], ...]:
    """The 10 fixed 2-D component means of the dropping/invention check.

    Drawn once from a constant seed so every run, repeat, and master seed
    sees the same components.
    """
    rng = RandomSource(_MDI_SEED, ()).child("mode_dropping_invention", "components")
    means = rng.generator().normal(0.0, 10.0, size=(10, 2))
    return tuple((float(a), float(b)) for a, b in means)


def _mixture(means, std: float, weights=None) -> GaussianMixture:
    means = tuple(tuple(float(x) for x in m) for m in means)
    if weights is None:
        weights = tuple(1.0 / len(means) for _ in means)
    return GaussianMixture(means=means, std=std, weights=tuple(weights))


def build_catalog(
    base_size: int = 1000,
    grid: int = 13,
    sweep_min: int = 100,
    sweep_max: int = 10000,
) -> tuple[CheckSpec, ...]:
    """All 14 checks with the default sweep layout.

    ``grid`` is the resolution of continuous sweeps (odd values keep the
    identical-distribution point on the grid); the mode-dropping checks use
    their natural 10-step grids.  ``sweep_min``/``sweep_max`` bound the
    dataset-size sweeps.
    """
    if grid < 3 or grid % 2 == 0:
        raise ValueError("grid must be an odd integer >= 3")
    n = base_size
    specs: list[CheckSpec] = []

    def gmd_variants(wrap=None) -> list[CheckVariant]:
        """Mean-difference sweeps; `wrap` optionally adds an outlier role."""
        out = []
        for d, mu_max in _GMD_RANGES.items():
            roles = [None] if wrap is None else ["real", "synthetic"]
            for role in roles:
                cells = []
                for mu in _lin_grid(-mu_max, mu_max, grid):
                    real: DistributionSpec = IsotropicGaussian(dim=d, mean=0.0)
                    syn: DistributionSpec = IsotropicGaussian(dim=d, mean=float(mu))
                    if role is not None:
                        point = tuple([mu_max] * d)
                        if role == "real":
                            real = WithOutlier(real, point)
                        else:
                            syn = WithOutlier(syn, point)
                    cells.append(CheckCell(float(mu), real, syn, n, n))
                name = f"d{d}" if role is None else f"{role}_outlier_d{d}"
                out.append(
                    CheckVariant(name, row="", log_x=False, cells=tuple(cells))
                )
        return out

    def with_row(variants, row):
        return tuple(
            CheckVariant(v.name, row, v.log_x, v.cells) for v in variants
        )

    specs.append(
        CheckSpec(
            "gaussian_mean_difference",
            "Gaussian Mean Difference",
            False,
            with_row(gmd_variants(), "gaussian_mean_difference"),
        )
    )
    specs.append(
        CheckSpec(
            "gaussian_mean_difference_outlier",
            "Gaussian Mean Difference + Outlier",
            False,
            with_row(gmd_variants(wrap="outlier"), "gaussian_mean_difference_outlier"),
        )
    )

    pareto_cells = []
    for mu in _lin_grid(-6.0, 6.0, grid):
        tail = ParetoTail(alpha=1.01, scale=1.0)
        real = ProductOf((IsotropicGaussian(dim=1, mean=0.0), tail))
        syn = ProductOf((IsotropicGaussian(dim=1, mean=float(mu)), tail))
        pareto_cells.append(CheckCell(float(mu), real, syn, n, n))
    specs.append(
        CheckSpec(
            "gaussian_mean_difference_pareto",
            "Gaussian Mean Difference + Pareto",
            True,
            (
                CheckVariant(
                    "default",
                    "gaussian_mean_difference_pareto",
                    False,
                    tuple(pareto_cells),
                ),
            ),
        )
    )

    std_variants = []
    for d, expo in _STD_EXPONENTS.items():
        cells = [
            CheckCell(
                float(s),
                IsotropicGaussian(dim=d, std=1.0),
                IsotropicGaussian(dim=d, std=float(s)),
                n,
                n,
            )
            for s in _log_grid(10.0**-expo, 10.0**expo, grid)
        ]
        std_variants.append(
            CheckVariant(f"d{d}", "gaussian_std_difference", True, tuple(cells))
        )
    specs.append(
        CheckSpec(
            "gaussian_std_difference",
            "Gaussian Std. Deviation Difference",
            False,
            tuple(std_variants),
        )
    )

    drop_variants = []
    for mode in ("sequential", "simultaneous"):
        for d, std in _DROP_STDS.items():
            means = [[10.0 * i / 9.0] * d for i in range(10)]
            real = _mixture(means, std)
            cells = []
            for step in range(10):
                if mode == "sequential":
                    syn = _mixture(means[: 10 - step], std)
                else:
                    f = 1.0 - step / 9.0
                    weights = np.array([1.0] + [f] * 9)
                    syn = _mixture(means, std, weights / weights.sum())
                cells.append(CheckCell(float(step), real, syn, n, n))
            drop_variants.append(
                CheckVariant(
                    f"{mode}_d{d}", f"{mode}_mode_dropping", False, tuple(cells)
                )
            )
    specs.append(
        CheckSpec(
            "mode_dropping",
            "Sequential / Simultaneous Mode Dropping",
            False,
            tuple(drop_variants),
        )
    )

    comp_means = invention_component_means()
    mdi_cells = []
    real_mix = _mixture(comp_means[:5], 0.25)
    for m in range(1, 11):
        syn_mix = _mixture(comp_means[:m], 0.25)
        mdi_cells.append(CheckCell(float(m), real_mix, syn_mix, n, n))
    specs.append(
        CheckSpec(
            "mode_dropping_invention",
            "Mode Dropping + Invention",
            False,
            (
                CheckVariant(
                    "default", "mode_dropping_invention", False, tuple(mdi_cells)
                ),
            ),
        )
    )

    collapse_variants = []
    for d in (1, 8, 64):
        cells = []
        for mu in _lin_grid(0.0, 5.0, grid):
            half = [mu / 2.0] * d
            real = _mixture([[-v for v in half], half], 1.0)
            syn = IsotropicGaussian(dim=d, std=float(math.sqrt(1.0 + mu * mu)))
            cells.append(CheckCell(float(mu), real, syn, n, n))
        collapse_variants.append(
            CheckVariant(f"d{d}", "mode_collapse", False, tuple(cells))
        )
    specs.append(
        CheckSpec("mode_collapse", "Mode Collapse", False, tuple(collapse_variants))
    )

    sphere_variants = []
    for d in (2, 8, 128):
        cells = [
            CheckCell(
                float(r),
                HypersphereSurface(dim=d, radius=1.0),
                HypersphereSurface(dim=d, radius=float(r)),
                n,
                n,
            )
            for r in _lin_grid(0.1, 1.9, grid)
        ]
        sphere_variants.append(
            CheckVariant(f"d{d}", "hypersphere_surface", False, tuple(cells))
        )
    specs.append(
        CheckSpec(
            "hypersphere_surface", "Hypersphere Surface", False, tuple(sphere_variants)
        )
    )

    size_grid = _log_int_grid(sweep_min, sweep_max, grid)
    for check, title, syn_only in (
        ("hypercube_varying_sample_size", "Hypercube, Varying Sample Size", False),
        ("hypercube_varying_syn_size", "Hypercube, Varying Syn. Size", True),
    ):
        cube_variants = []
        for d in (1, 8, 64):
            offset = hypercube_offset(d, 0.2)
            cells = [
                CheckCell(
                    float(m),
                    HypercubeUniform(dim=d, offset=0.0),
                    HypercubeUniform(dim=d, offset=offset),
                    n if syn_only else m,
                    m,
                )
                for m in size_grid
            ]
            cube_variants.append(CheckVariant(f"d{d}", check, True, tuple(cells)))
        specs.append(CheckSpec(check, title, False, tuple(cube_variants)))

    torus_variants = []
    ball = BallUniform(radius=0.8)
    torus = TorusCircle(major=1.0, minor=0.1)
    for name, real, syn in (
        ("sphere_real", ball, torus),
        ("torus_real", torus, ball),
    ):
        cells = [
            CheckCell(float(m), real, syn, n, m) for m in size_grid
        ]
        torus_variants.append(
            CheckVariant(name, "sphere_vs_torus", True, tuple(cells))
        )
    specs.append(
        CheckSpec("sphere_vs_torus", "Sphere vs. Torus", False, tuple(torus_variants))
    )

    scaling_cells = []
    for s in _log_grid(1e-3, 1e3, grid):
        real = ProductOf((IsotropicGaussian(dim=1, mean=0.0), ScaledGaussian1D(float(s))))
        syn = ProductOf((IsotropicGaussian(dim=1, mean=6.0), ScaledGaussian1D(float(s))))
        scaling_cells.append(CheckCell(float(s), real, syn, n, n))
    specs.append(
        CheckSpec(
            "scaling_one_dimension",
            "Scaling One Dimension",
            False,
            (CheckVariant("default", "scaling_one_dimension", True, tuple(scaling_cells)),),
        )
    )

    disjoint_cells = []
    for d in _log_int_grid(1, 1000, grid):
        real = ProductOf((IsotropicGaussian(dim=1, mean=0.0), IsotropicGaussian(dim=d)))
        syn = ProductOf((IsotropicGaussian(dim=1, mean=6.0), IsotropicGaussian(dim=d)))
        disjoint_cells.append(CheckCell(float(d), real, syn, n, n))
    specs.append(
        CheckSpec(
            "one_disjoint_dim",
            "One Disjoint Dim. + Many Identical Dim.",
            False,
            (CheckVariant("default", "one_disjoint_dim", True, tuple(disjoint_cells)),),
        )
    )

    discrete_variants = []
    for name in ("discrete_real", "continuous_real"):
        cells = []
        for s in _log_grid(1.0, 1e3, grid):
            cont = ScaledGaussian1D(float(s))
            disc = RoundedScaledGaussian1D(float(s))
            real, syn = (disc, cont) if name == "discrete_real" else (cont, disc)
            cells.append(CheckCell(float(s), real, syn, n, n))
        discrete_variants.append(
            CheckVariant(name, "discrete_vs_continuous", True, tuple(cells))
        )
    specs.append(
        CheckSpec(
            "discrete_vs_continuous",
            "Discrete Num. vs. Continuous Num.",
            True,
            tuple(discrete_variants),
        )
    )

    order = (
        "gaussian_mean_difference",
        "gaussian_mean_difference_outlier",
        "gaussian_mean_difference_pareto",
        "gaussian_std_difference",
        "mode_dropping",
        "mode_dropping_invention",
        "mode_collapse",
        "hypersphere_surface",
        "hypercube_varying_sample_size",
        "hypercube_varying_syn_size",
        "sphere_vs_torus",
        "scaling_one_dimension",
        "one_disjoint_dim",
        "discrete_vs_continuous",
    )
    by_id = {s.check: s for s in specs}
    return tuple(by_id[c] for c in order)


ROW_TITLES = {
    "gaussian_mean_difference": "Gaussian Mean Difference",
    "gaussian_mean_difference_outlier": "Gaussian Mean Difference + Outlier",
    "gaussian_mean_difference_pareto": "Gaussian Mean Difference + Pareto",
    "gaussian_std_difference": "Gaussian Std. Deviation Difference",
    "sequential_mode_dropping": "Sequential Mode Dropping",
    "simultaneous_mode_dropping": "Simultaneous Mode Dropping",
    "mode_dropping_invention": "Mode Dropping + Invention",
    "mode_collapse": "Mode Collapse",
    "hypersphere_surface": "Hypersphere Surface",
    "hypercube_varying_sample_size": "Hypercube, Varying Sample Size",
    "hypercube_varying_syn_size": "Hypercube, Varying Syn. Size",
    "sphere_vs_torus": "Sphere vs. Torus",
    "scaling_one_dimension": "Scaling One Dimension",
    "one_disjoint_dim": "One Disjoint Dim. + Many Identical Dim.",
    "discrete_vs_continuous": "Discrete Num. vs. Continuous Num.",
}

TABULAR_ROWS = ("gaussian_mean_difference_pareto", "discrete_vs_continuous")


def spec_to_dict(spec: CheckSpec) -> dict:
    return {
        "check": spec.check,
        "title": spec.title,
        "tabular": spec.tabular,
        "variants": [
            {
                "name": v.name,
                "row": v.row,
                "log_x": v.log_x,
                "cells": [
                    {
                        "x": c.x,
                        "real": spec_to_json(c.real),
                        "synthetic": spec_to_json(c.synthetic),
                        "n_real": c.n_real,
                        "n_synthetic": c.n_synthetic,
                    }
                    for c in v.cells
                ],
            }
            for v in spec.variants
        ],
    }


def spec_from_dict(obj: dict) -> CheckSpec:
    variants = tuple(
        CheckVariant(
            v["name"],
            v["row"],
            bool(v["log_x"]),
            tuple(
                CheckCell(
                    float(c["x"]),
                    spec_from_json(c["real"]),
                    spec_from_json(c["synthetic"]),
                    int(c["n_real"]),
                    int(c["n_synthetic"]),
                )
                for c in v["cells"]
            ),
        )
        for v in obj["variants"]
    )
    return CheckSpec(obj["check"], obj["title"], bool(obj["tabular"]), variants)


def catalog_json(catalog) -> str:
    return json.dumps([spec_to_dict(s) for s in catalog], indent=2)


def load_catalog_json(text: str) -> tuple[CheckSpec, ...]:
    return tuple(spec_from_dict(obj) for obj in json.loads(text))


def _as_dataset(values: np.ndarray) -> Dataset:
    cols = tuple(Column(f"c{i}", NUMERICAL) for i in range(values.shape[1]))
    return Dataset(cols, values)


def run_cell(
    spec: CheckSpec,
    variant: CheckVariant,
    cell: CheckCell,
    cell_index: int,
    repeat: int,
    seed: int,
    config: MetricConfig,
    embedding: str = "simple",
) -> tuple[dict[str, float], dict[str, str]]:
    """Sample, embed, and score one grid point of one repeat.

    Returns (metric values, metric errors); values are NaN where errored.
    The random stream is keyed by the full cell path so results do not
    depend on which other cells run, or in what order.
    """
    if embedding not in EMBEDDING_MODES:
        raise ValueError(f"embedding must be one of {EMBEDDING_MODES}")
    root = RandomSource(seed).child(
        spec.check, variant.name, repeat, cell_index
    )
    real_vals = sample(cell.real, cell.n_real, root.child("real"))
    syn_vals = sample(cell.synthetic, cell.n_synthetic, root.child("synthetic"))

    if spec.tabular:
        real_emb, syn_emb = embed_pair(_as_dataset(real_vals), _as_dataset(syn_vals))
    else:
        real_emb = EmbeddedSet(real_vals, ROLE_REAL)
        syn_emb = EmbeddedSet(syn_vals, ROLE_SYNTHETIC)

    values, errors = compute_all(real_emb, syn_emb, config, collect_errors=True)

    quantile_ids = [m for m in ("iap", "ibr") if m in config.metrics]
    if embedding == "one-class" and quantile_ids:
        from .embed import OneClassConfig, fit_one_class

        oc = fit_one_class(real_emb, root.child("one_class"), OneClassConfig())
        oc_real = EmbeddedSet(oc.transform(real_emb.points), ROLE_REAL)
        oc_syn = EmbeddedSet(oc.transform(syn_emb.points), ROLE_SYNTHETIC)
        oc_vals, oc_errs = compute_all(
            oc_real, oc_syn, config.with_metrics(tuple(quantile_ids)),
            collect_errors=True,
        )
        values.update(oc_vals)
        errors.update(oc_errs)

    out: dict[str, float] = {}
    errs: dict[str, str] = dict(errors)
    for m in config.metrics:
        if m in values:
            v = float(values[m])
            if math.isfinite(v):
                out[m] = v
            else:
                errs[m] = f"non-finite value {v!r}"
                out[m] = float("nan")
        else:
            out[m] = float("nan")
    return out, errs


def run_variant_repeat(
    spec: CheckSpec,
    variant: CheckVariant,
    repeat: int,
    seed: int,
    config: MetricConfig,
    embedding: str = "simple",
) -> tuple[dict[str, np.ndarray], dict[str, str]]:
    """All grid points of one (variant, repeat): metric id -> value vector."""
    rows = {m: np.full(len(variant.cells), np.nan) for m in config.metrics}
    errors: dict[str, str] = {}
    for i, cell in enumerate(variant.cells):
        vals, errs = run_cell(spec, variant, cell, i, repeat, seed, config, embedding)
        for m, v in vals.items():
            rows[m][i] = v
        for m, msg in errs.items():
            errors.setdefault(m, f"x={cell.x:g}, repeat {repeat}: {msg}")
    return rows, errors


def run_check(
    spec: CheckSpec,
    config: MetricConfig = MetricConfig(),
    seed: int = 0,
    repeats: int = 10,
    embedding: str = "simple",
) -> list[Curve]:
    """Execute a check serially; the harness parallelizes the same cells."""
    curves: list[Curve] = []
    for variant in spec.variants:
        per_metric = {
            m: np.full((repeats, len(variant.cells)), np.nan) for m in config.metrics
        }
        errors: dict[str, str] = {}
        for rep in range(repeats):
            rows, errs = run_variant_repeat(spec, variant, rep, seed, config, embedding)
            for m, vec in rows.items():
                per_metric[m][rep] = vec
            for m, msg in errs.items():
                errors.setdefault(m, msg)
        for m in config.metrics:
            curves.append(
                Curve(
                    check=spec.check,
                    variant=variant.name,
                    row=variant.row,
                    metric=m,
                    xs=variant.xs,
                    values=per_metric[m],
                    log_x=variant.log_x,
                    error=errors.get(m),
                )
            )
    return curves
