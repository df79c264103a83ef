"""Synthetic distribution builders used by the sanity checks.

Every distribution is described by a small frozen dataclass so check
definitions are plain data: they serialize to tagged JSON dicts and sample
deterministically from a :class:`~gensanity.data.RandomSource`.

Also provided: analytic separation bounds (squared Hellinger distance and
the derived total-variation bracket) for the Gaussian families the checks
sweep, plus a quadrature reference for the one-dimensional cases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Union

import numpy as np
from scipy import integrate, stats

from .data import RandomSource


@dataclass(frozen=True)
class IsotropicGaussian:
    """N(mean, std^2 I) in ``dim`` dimensions; mean may be scalar or vector."""

    dim: int
    mean: tuple[float, ...] | float = 0.0
    std: float = 1.0


@dataclass(frozen=True)
class GaussianMixture:
    """Equal-covariance isotropic mixture with explicit component weights."""

    means: tuple[tuple[float, ...], ...]
    std: float
    weights: tuple[float, ...]


@dataclass(frozen=True)
class HypersphereSurface:
    """Uniform on the surface of a ``dim``-sphere of the given radius."""

    dim: int
    radius: float = 1.0


@dataclass(frozen=True)
class HypercubeUniform:
    """Uniform on the unit cube shifted by ``offset`` along every axis."""

    dim: int
    offset: float = 0.0


@dataclass(frozen=True)
class BallUniform:
    """Uniform in a solid 3-ball, sampled by rejection from the cube."""

    radius: float = 0.8
    dim: int = 3


@dataclass(frozen=True)
class TorusCircle:
    """Uniform product of angles on a torus: tube circle swept around the z axis."""

    major: float = 1.0
    minor: float = 0.1


@dataclass(frozen=True)
class ParetoTail:
    """Pareto with density ``alpha / x^(alpha+1)`` on ``x >= scale``."""

    alpha: float = 1.01
    scale: float = 1.0


@dataclass(frozen=True)
class ScaledGaussian1D:
    """One numeric column: ``mean + scale * z`` with standard normal z."""

    scale: float = 1.0
    mean: float = 0.0


@dataclass(frozen=True)
class RoundedScaledGaussian1D:
    """Like :class:`ScaledGaussian1D` but values are rounded to integers."""

    scale: float = 1.0
    mean: float = 0.0


@dataclass(frozen=True)
class ProductOf:
    """Independent concatenation of component distributions (one per column block)."""

    parts: tuple["DistributionSpec", ...]


@dataclass(frozen=True)
class WithOutlier:
    """Base distribution plus one fixed point appended after sampling.

    Note ``sample(WithOutlier(base, p), n)`` returns ``n + 1`` rows.
    """

    base: "DistributionSpec"
    point: tuple[float, ...]


DistributionSpec = Union[
    IsotropicGaussian,
    GaussianMixture,
    HypersphereSurface,
    HypercubeUniform,
    BallUniform,
    TorusCircle,
    ParetoTail,
    ScaledGaussian1D,
    RoundedScaledGaussian1D,
    ProductOf,
    WithOutlier,
]

_SPEC_TYPES = {
    "isotropic_gaussian": IsotropicGaussian,
    "gaussian_mixture": GaussianMixture,
    "hypersphere_surface": HypersphereSurface,
    "hypercube_uniform": HypercubeUniform,
    "ball_uniform": BallUniform,
    "torus_circle": TorusCircle,
    "pareto_tail": ParetoTail,
    "scaled_gaussian_1d": ScaledGaussian1D,
    "rounded_scaled_gaussian_1d": RoundedScaledGaussian1D,
    "product_of": ProductOf,
    "with_outlier": WithOutlier,
}
_SPEC_TAGS = {cls: tag for tag, cls in _SPEC_TYPES.items()}


def spec_dim(spec: DistributionSpec) -> int:
    """Number of columns the spec samples."""
    if isinstance(spec, (IsotropicGaussian, HypercubeUniform)):
        return spec.dim
    if isinstance(spec, HypersphereSurface):
        return spec.dim
    if isinstance(spec, GaussianMixture):
        return len(spec.means[0])
    if isinstance(spec, BallUniform):
        return spec.dim
    if isinstance(spec, TorusCircle):
        return 3
    if isinstance(spec, (ParetoTail, ScaledGaussian1D, RoundedScaledGaussian1D)):
        return 1
    if isinstance(spec, ProductOf):
        return sum(spec_dim(p) for p in spec.parts)
    if isinstance(spec, WithOutlier):
        return spec_dim(spec.base)
    raise TypeError(f"unknown spec {spec!r}")


def sample(spec: DistributionSpec, n: int, rng: RandomSource) -> np.ndarray:
    """Draw ``n`` rows from the spec (``n + 1`` when an outlier is attached)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if spec_dim(spec) < 1:
        raise ValueError(f"spec samples no columns: {spec!r}")
    gen = rng.generator()
    return _sample_with(spec, n, gen)


def _sample_with(spec: DistributionSpec, n: int, gen: np.random.Generator) -> np.ndarray:
    if isinstance(spec, IsotropicGaussian):
        mean = np.broadcast_to(
            np.atleast_1d(np.asarray(spec.mean, dtype=np.float64)), (spec.dim,)
        )
        return mean + spec.std * gen.standard_normal((n, spec.dim))
    if isinstance(spec, GaussianMixture):
        means = np.asarray(spec.means, dtype=np.float64)
        weights = np.asarray(spec.weights, dtype=np.float64)
        if len(weights) != len(means):
            raise ValueError("one weight per component required")
        cum = np.cumsum(weights / weights.sum())
        # One dedicated uniform per point picks its component.
        comps = np.searchsorted(cum, gen.uniform(size=n), side="right")
        comps = np.minimum(comps, len(means) - 1)
        return means[comps] + spec.std * gen.standard_normal((n, means.shape[1]))
    if isinstance(spec, HypersphereSurface):
        g = gen.standard_normal((n, spec.dim))
        norms = np.linalg.norm(g, axis=1, keepdims=True)
        norms[norms == 0.0] = 1.0
        return spec.radius * g / norms
    if isinstance(spec, HypercubeUniform):
        return spec.offset + gen.uniform(size=(n, spec.dim))
    if isinstance(spec, BallUniform):
        out = np.empty((0, spec.dim))
        r_sq = spec.radius * spec.radius
        while out.shape[0] < n:
            batch = max(2 * (n - out.shape[0]), 8)
            cand = gen.uniform(-spec.radius, spec.radius, size=(batch, spec.dim))
            keep = np.einsum("ij,ij->i", cand, cand) <= r_sq
            out = np.vstack([out, cand[keep]])
        return out[:n]
    if isinstance(spec, TorusCircle):
        theta = gen.uniform(0.0, 2.0 * np.pi, size=n)
        psi = gen.uniform(0.0, 2.0 * np.pi, size=n)
        ring = spec.major + spec.minor * np.cos(psi)
        return np.column_stack(
            [ring * np.cos(theta), ring * np.sin(theta), spec.minor * np.sin(psi)]
        )
    if isinstance(spec, ParetoTail):
        u = gen.uniform(size=(n, 1))
        return spec.scale * u ** (-1.0 / spec.alpha)
    if isinstance(spec, ScaledGaussian1D):
        return spec.mean + spec.scale * gen.standard_normal((n, 1))
    if isinstance(spec, RoundedScaledGaussian1D):
        return np.round(spec.mean + spec.scale * gen.standard_normal((n, 1)))
    if isinstance(spec, ProductOf):
        return np.hstack([_sample_with(p, n, gen) for p in spec.parts])
    if isinstance(spec, WithOutlier):
        base = _sample_with(spec.base, n, gen)
        point = np.asarray(spec.point, dtype=np.float64)[None, :]
        if point.shape[1] != base.shape[1]:
            raise ValueError("outlier dimension does not match base distribution")
        return np.vstack([base, point])
    raise TypeError(f"unknown spec {spec!r}")


def spec_to_json(spec: DistributionSpec) -> dict:
    out = {"type": _SPEC_TAGS[type(spec)]}
    for f in fields(spec):
        v = getattr(spec, f.name)
        if f.name == "parts":
            out[f.name] = [spec_to_json(p) for p in v]
        elif f.name == "base":
            out[f.name] = spec_to_json(v)
        elif isinstance(v, tuple):
            out[f.name] = [list(x) if isinstance(x, tuple) else x for x in v]
        else:
            out[f.name] = v
    return out


def spec_from_json(obj: dict) -> DistributionSpec:
    kind = obj["type"]
    cls = _SPEC_TYPES[kind]
    kwargs = {}
    for f in fields(cls):
        if f.name not in obj:
            continue
        v = obj[f.name]
        if f.name == "parts":
            kwargs[f.name] = tuple(spec_from_json(p) for p in v)
        elif f.name == "base":
            kwargs[f.name] = spec_from_json(v)
        elif isinstance(v, list):
            kwargs[f.name] = tuple(tuple(x) if isinstance(x, list) else x for x in v)
        else:
            kwargs[f.name] = v
    return cls(**kwargs)


def hypercube_offset(dim: int, overlap: float = 0.2) -> float:
    """Per-axis shift of a unit cube whose overlap with [0,1]^dim is ``overlap``.

    The intersection of [0,1]^d and [t,1+t]^d has volume (1-t)^d, so
    t = 1 - overlap^(1/d).
    """
    if not 0.0 < overlap <= 1.0:
        raise ValueError("overlap must be in (0, 1]")
    return 1.0 - overlap ** (1.0 / dim)


def gaussian_mean_hellinger_sq(shift_per_dim: float, dim: int) -> float:
    """Squared Hellinger distance between N(0, I) and N(shift * 1, I)."""
    return 1.0 - math.exp(-dim * shift_per_dim * shift_per_dim / 8.0)


def gaussian_std_hellinger_sq(std_ratio: float, dim: int) -> float:
    """Squared Hellinger distance between N(0, I) and N(0, s^2 I)."""
    if std_ratio <= 0.0:
        raise ValueError("std ratio must be positive")
    bc_one_dim = 2.0 * std_ratio / (1.0 + std_ratio * std_ratio)
    return 1.0 - bc_one_dim ** (dim / 2.0)


def tv_bounds_from_hellinger_sq(h_sq: float) -> tuple[float, float]:
    """Total-variation bracket implied by a squared Hellinger distance."""
    h_sq = min(max(h_sq, 0.0), 1.0)
    return h_sq, math.sqrt(h_sq) * math.sqrt(2.0 - h_sq)


def gaussian_tv_numeric(kind: str, param: float) -> float:
    """Quadrature total variation for the 1-d Gaussian sweeps.

    ``kind`` is ``"mean"`` (N(0,1) vs N(param,1)) or ``"std"`` (N(0,1) vs
    N(0,param^2)).
    """
    if kind == "mean":
        p = stats.norm(0.0, 1.0)
        q = stats.norm(param, 1.0)
        lo, hi = min(-8.0, param - 8.0), max(8.0, param + 8.0)
        # Densities with equal scale cross once, midway between the means.
        crossings = [param / 2.0]
    elif kind == "std":
        p = stats.norm(0.0, 1.0)
        q = stats.norm(0.0, param)
        span = 8.0 * max(1.0, param)
        lo, hi = -span, span
        if param == 1.0:
            crossings = []
        else:
            s_sq = param * param
            x_c = math.sqrt(2.0 * s_sq * math.log(param) / (s_sq - 1.0))
            crossings = [-x_c, x_c]
        # The narrow component's tail past the crossing is a boundary layer
        # quad will skip on an interval thousands of times wider, so mark
        # where each component peaks and where it has decayed to nothing.
        for scale in (1.0, param):
            crossings.extend((-scale, scale, -8.0 * scale, 8.0 * scale))
    else:
        raise ValueError(f"unknown kind {kind!r}")
    # |p - q| has kinks at the crossings, and when the two scales differ by
    # orders of magnitude the narrow bump occupies a sliver of [lo, hi] that
    # quad's initial grid can step over entirely.  Breakpoints force
    # subdivision at every feature.
    hints = sorted({x for x in crossings if lo < x < hi})
    val, _ = integrate.quad(
        lambda x: abs(p.pdf(x) - q.pdf(x)), lo, hi, limit=400, points=hints
    )
    return 0.5 * val
