"""Embeddings that map tabular datasets into metric space.

The default embedding is deliberately simple: numerical columns are z-scored
with statistics of the *real* data (population standard deviation), and
categorical columns are expanded to one-hot indicators.  The same fitted
transform is applied to both datasets so that the comparison happens in one
shared space.

An optional learned embedding is also provided: a small fixed-architecture
network trained by plain gradient descent to pull the real data toward a
frozen center point, in the spirit of one-class representation learning.  It
is a coarse stand-in for heavier learned embeddings and is off by default.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .data import (
    CATEGORICAL,
    NUMERICAL,
    ROLE_REAL,
    Column,
    Dataset,
    EmbeddedSet,
    RandomSource,
    SchemaMismatchError,
)


class ConstantColumnWarning(UserWarning):
    """A numerical column had zero spread in the real data; scale left at 1."""


@dataclass(frozen=True)
class TabularEmbedding:
    """Fitted z-score + one-hot transform, keyed to a column schema."""

    columns: tuple[Column, ...]
    means: np.ndarray  # one entry per numerical column, in schema order
    stds: np.ndarray

    @property
    def dim(self) -> int:
        return sum(c.categories if c.kind == CATEGORICAL else 1 for c in self.columns)


def fit_tabular(real: Dataset) -> TabularEmbedding:
    """Fit normalization statistics on the real dataset.

    Standard deviations are population ones (divide by n).  A constant column
    gets scale 1.0 and raises :class:`ConstantColumnWarning`.
    """
    means = []
    stds = []
    for j, col in enumerate(real.columns):
        if col.kind != NUMERICAL:
            continue
        vals = real.values[:, j]
        means.append(float(vals.mean()))
        std = float(vals.std())
        if std == 0.0:
            warnings.warn(
                f"column {col.name!r} is constant in the real data; leaving scale at 1",
                ConstantColumnWarning,
                stacklevel=2,
            )
            std = 1.0
        stds.append(std)
    return TabularEmbedding(
        columns=real.columns,
        means=np.asarray(means, dtype=np.float64),
        stds=np.asarray(stds, dtype=np.float64),
    )


def apply_tabular(emb: TabularEmbedding, ds: Dataset, role: str) -> EmbeddedSet:
    """Apply a fitted embedding to a dataset with the same schema."""
    if ds.columns != emb.columns:
        raise SchemaMismatchError(
            f"dataset schema {[c.name for c in ds.columns]!r} does not match "
            f"embedding schema {[c.name for c in emb.columns]!r}"
        )
    parts = []
    num_idx = 0
    for j, col in enumerate(ds.columns):
        vals = ds.values[:, j]
        if col.kind == NUMERICAL:
            parts.append(((vals - emb.means[num_idx]) / emb.stds[num_idx])[:, None])
            num_idx += 1
        else:
            onehot = np.zeros((ds.n, col.categories), dtype=np.float64)
            onehot[np.arange(ds.n), vals.astype(np.int64)] = 1.0
            parts.append(onehot)
    return EmbeddedSet(points=np.hstack(parts), role=role)


def embed_pair(real: Dataset, synthetic: Dataset) -> tuple[EmbeddedSet, EmbeddedSet]:
    """Fit on the real dataset, apply to both."""
    emb = fit_tabular(real)
    return (
        apply_tabular(emb, real, ROLE_REAL),
        apply_tabular(emb, synthetic, "synthetic"),
    )


@dataclass(frozen=True)
class OneClassConfig:
    hidden_width: int = 32
    output_dim: int = 8
    epochs: int = 200
    learning_rate: float = 1e-3


@dataclass(frozen=True)
class OneClassEmbedding:
    """A trained two-hidden-layer tanh network plus its frozen center."""

    weights: tuple[np.ndarray, ...] = field(repr=False)
    biases: tuple[np.ndarray, ...] = field(repr=False)
    center: np.ndarray = field(repr=False)

    def transform(self, points: np.ndarray) -> np.ndarray:
        h = np.asarray(points, dtype=np.float64)
        last = len(self.weights) - 1
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            h = h @ w + b
            if i < last:
                h = np.tanh(h)
        return h


def fit_one_class(
    real: EmbeddedSet,
    rng: RandomSource,
    config: OneClassConfig = OneClassConfig(),
) -> OneClassEmbedding:
    """Train the one-class network on real points by full-batch gradient descent.

    The center is the mean network output right after initialization and is
    never updated; training minimizes the mean squared distance of outputs to
    that center.  Fully deterministic given the RandomSource.
    """
    x = real.points
    n, m = x.shape
    if n < 2:
        raise ValueError("one-class embedding needs at least 2 real points")
    gen = rng.generator()
    sizes = [m, config.hidden_width, config.hidden_width, config.output_dim]
    weights = [
        gen.normal(0.0, 1.0 / np.sqrt(sizes[i]), size=(sizes[i], sizes[i + 1]))
        for i in range(3)
    ]
    biases = [np.zeros(sizes[i + 1]) for i in range(3)]

    def forward(inp):
        h1 = np.tanh(inp @ weights[0] + biases[0])
        h2 = np.tanh(h1 @ weights[1] + biases[1])
        out = h2 @ weights[2] + biases[2]
        return h1, h2, out

    _, _, out0 = forward(x)
    center = out0.mean(axis=0)

    lr = config.learning_rate
    for _ in range(config.epochs):
        h1, h2, out = forward(x)
        # d/dout of mean |out - c|^2
        g_out = 2.0 * (out - center) / n
        g_w2 = h2.T @ g_out
        g_b2 = g_out.sum(axis=0)
        g_h2 = (g_out @ weights[2].T) * (1.0 - h2 * h2)
        g_w1 = h1.T @ g_h2
        g_b1 = g_h2.sum(axis=0)
        g_h1 = (g_h2 @ weights[1].T) * (1.0 - h1 * h1)
        g_w0 = x.T @ g_h1
        g_b0 = g_h1.sum(axis=0)
        weights[0] -= lr * g_w0
        weights[1] -= lr * g_w1
        weights[2] -= lr * g_w2
        biases[0] -= lr * g_b0
        biases[1] -= lr * g_b1
        biases[2] -= lr * g_b2

    return OneClassEmbedding(
        weights=tuple(weights), biases=tuple(biases), center=center
    )
