"""Curve-shape criteria and verdict evaluation for the sanity checks.

Each check row declares, per desideratum, what the mean metric curve must
look like: a bell around the identical-distribution point, a monotone ramp,
a horizontal line, convergence, or proximity to a target value at specific
sweep positions.  Fidelity and diversity metrics can have different
requirements, and diversity requirements may come in a high/low pair (a
diversity metric may either track the real spread or reward any superset of
it; it must commit to one behaviour consistently across variants).

Verdict letters: T pass, F fail, H/L the two consistent diversity
behaviours, E a metric that errored while computing its curves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .checks import CheckSpec, Curve
from .metrics import DIVERSITY_METRICS, FIDELITY_METRICS

DESIDERATA = ("purpose", "syn_size", "data_size", "bounds", "invariance")

DESIDERATUM_TITLES = {
    "purpose": "Purpose",
    "syn_size": "Synthetic Size",
    "data_size": "Data Size",
    "bounds": "Bounds",
    "invariance": "Invariance",
}

# Grid positions criteria can reference: the sweep extremes, an exact sweep
# value (resolved to the nearest grid point, in log space for log sweeps),
# or a quantile of the grid index range (round half up).
Position = tuple


@dataclass(frozen=True)
class Bell:
    """Low at the extremes, peak at the given sweep position."""

    peak_x: float
    rise: float = 0.2
    slack: float = 0.1


@dataclass(frozen=True)
class LowToHigh:
    rise: float = 0.2
    slack: float = 0.1


@dataclass(frozen=True)
class HighToLow:
    fall: float = 0.2
    slack: float = 0.1


@dataclass(frozen=True)
class HighToLowWithDrop:
    """High-to-low that has already fallen by ``min_drop`` at the quantile."""

    drop_quantile: float
    min_drop: float = 0.1
    fall: float = 0.2
    slack: float = 0.1


@dataclass(frozen=True)
class Horizontal:
    spread: float = 0.05


@dataclass(frozen=True)
class Converging:
    """Spread of the values from the quantile position rightward is small."""

    quantile: float
    spread: float = 0.05


@dataclass(frozen=True)
class PointClose:
    """Curve value at a position is within ``tol`` of ``target``."""

    position: Position
    target: float
    tol: float = 0.05


Criterion = Union[
    Bell, LowToHigh, HighToLow, HighToLowWithDrop, Horizontal, Converging, PointClose
]


def quantile_index(n: int, q: float) -> int:
    """Nearest grid index to quantile q of the index range, half rounds up."""
    return int(np.floor(q * (n - 1) + 0.5))


def _position_index(xs: np.ndarray, log_x: bool, position: Position) -> int:
    kind = position[0]
    if kind == "left":
        return 0
    if kind == "right":
        return len(xs) - 1
    if kind == "x":
        target = position[1]
        if log_x:
            return int(np.argmin(np.abs(np.log(xs) - np.log(target))))
        return int(np.argmin(np.abs(xs - target)))
    if kind == "quantile":
        return quantile_index(len(xs), position[1])
    raise ValueError(f"unknown position {position!r}")


@dataclass(frozen=True)
class BulletResult:
    description: str
    margin: float  # >= 0 means satisfied, with that much slack

    @property
    def passed(self) -> bool:
        return self.margin >= 0.0


@dataclass(frozen=True)
class ShapeResult:
    passed: bool
    bullets: tuple[BulletResult, ...]

    @property
    def margin(self) -> float:
        return min(b.margin for b in self.bullets)


def eval_shape(
    xs: np.ndarray, ys: np.ndarray, criterion: Criterion, log_x: bool = False
) -> ShapeResult:
    """Evaluate one criterion on a mean curve, reporting per-bullet margins."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if len(xs) < 3:
        raise ValueError("criteria need at least 3 grid points")
    bullets: list[BulletResult] = []

    def at_least(desc: str, value: float, bound: float):
        bullets.append(BulletResult(desc, value - bound))

    def at_most(desc: str, value: float, bound: float):
        bullets.append(BulletResult(desc, bound - value))

    if isinstance(criterion, Bell):
        mid = _position_index(xs, log_x, ("x", criterion.peak_x))
        at_least("left-to-peak rise", ys[mid] - ys[0], criterion.rise)
        at_least("right-to-peak rise", ys[mid] - ys[-1], criterion.rise)
        at_most("peak near maximum", ys.max() - ys[mid], criterion.slack)
        at_most(
            "an extreme near minimum", min(ys[0], ys[-1]) - ys.min(), criterion.slack
        )
    elif isinstance(criterion, LowToHigh):
        at_least("left-to-right rise", ys[-1] - ys[0], criterion.rise)
        at_most("left near minimum", ys[0] - ys.min(), criterion.slack)
        at_most("right near maximum", ys.max() - ys[-1], criterion.slack)
    elif isinstance(criterion, (HighToLow, HighToLowWithDrop)):
        at_least("left-to-right fall", ys[0] - ys[-1], criterion.fall)
        at_most("right near minimum", ys[-1] - ys.min(), criterion.slack)
        at_most("left near maximum", ys.max() - ys[0], criterion.slack)
        if isinstance(criterion, HighToLowWithDrop):
            idx = quantile_index(len(xs), criterion.drop_quantile)
            at_least(
                f"fallen by index {idx}", ys[0] - ys[idx], criterion.min_drop
            )
    elif isinstance(criterion, Horizontal):
        at_most("overall spread", ys.max() - ys.min(), criterion.spread)
    elif isinstance(criterion, Converging):
        idx = quantile_index(len(xs), criterion.quantile)
        tail = ys[idx:]
        at_most("tail spread", tail.max() - tail.min(), criterion.spread)
    elif isinstance(criterion, PointClose):
        idx = _position_index(xs, log_x, criterion.position)
        at_most(
            f"|value@{xs[idx]:g} - {criterion.target:g}|",
            abs(ys[idx] - criterion.target),
            criterion.tol,
        )
    else:
        raise TypeError(f"unknown criterion {criterion!r}")
    return ShapeResult(all(b.passed for b in bullets), tuple(bullets))


@dataclass(frozen=True)
class MetricCriteria:
    """Criteria for one metric kind; either a single set or a high/low pair."""

    single: tuple[Criterion, ...] | None = None
    high: tuple[Criterion, ...] | None = None
    low: tuple[Criterion, ...] | None = None

    def __post_init__(self):
        dual = self.high is not None and self.low is not None
        if dual == (self.single is not None):
            raise ValueError("provide either single or both high and low")

    @property
    def is_dual(self) -> bool:
        return self.single is None


@dataclass(frozen=True)
class Verdict:
    row: str
    desideratum: str
    metric: str
    letter: str  # T, F, H, L, or E
    detail: str = ""
    variant_results: dict = field(default_factory=dict)


def _close(position: Position, target: float, tol: float = 0.05) -> PointClose:
    return PointClose(position, target, tol)


_LEFT: Position = ("left",)
_RIGHT: Position = ("right",)


def _row_criteria() -> dict:
    """(row, desideratum, kind) -> criteria or per-variant mapping.

    ``kind`` is "fidelity" or "diversity".  The value is a MetricCriteria,
    or a dict keyed by variant name when variants differ (role-swap checks
    where the two directions have different bound targets).
    """
    bell0 = MetricCriteria(single=(Bell(0.0),))
    bounds_zero_one_zero = MetricCriteria(
        single=(_close(_LEFT, 0.0), _close(("x", 0.0), 1.0), _close(_RIGHT, 0.0))
    )
    table: dict = {}

    for row in (
        "gaussian_mean_difference",
        "gaussian_mean_difference_outlier",
        "gaussian_mean_difference_pareto",
    ):
        table[row, "purpose", "fidelity"] = bell0
        table[row, "purpose", "diversity"] = bell0
        table[row, "bounds", "fidelity"] = bounds_zero_one_zero
        table[row, "bounds", "diversity"] = bounds_zero_one_zero

    table["gaussian_std_difference", "purpose", "fidelity"] = MetricCriteria(
        single=(HighToLow(),)
    )
    table["gaussian_std_difference", "purpose", "diversity"] = MetricCriteria(
        high=(LowToHigh(),), low=(Bell(1.0),)
    )
    table["gaussian_std_difference", "bounds", "fidelity"] = MetricCriteria(
        single=(_close(_LEFT, 1.0), _close(("x", 1.0), 1.0), _close(_RIGHT, 0.0))
    )
    table["gaussian_std_difference", "bounds", "diversity"] = MetricCriteria(
        high=(_close(_LEFT, 0.0), _close(("x", 1.0), 1.0), _close(_RIGHT, 1.0)),
        low=(_close(_LEFT, 0.0), _close(("x", 1.0), 1.0), _close(_RIGHT, 0.0)),
    )

    for row, drop_q in (
        ("sequential_mode_dropping", 0.5),
        ("simultaneous_mode_dropping", 0.95),
    ):
        table[row, "purpose", "fidelity"] = MetricCriteria(single=(Horizontal(),))
        table[row, "purpose", "diversity"] = MetricCriteria(
            single=(HighToLowWithDrop(drop_q),)
        )
        table[row, "bounds", "fidelity"] = MetricCriteria(
            single=(_close(_LEFT, 1.0), _close(_RIGHT, 1.0))
        )
        table[row, "bounds", "diversity"] = MetricCriteria(
            single=(_close(_LEFT, 1.0),)
        )

    table["mode_dropping_invention", "purpose", "fidelity"] = MetricCriteria(
        single=(HighToLow(),)
    )
    table["mode_dropping_invention", "purpose", "diversity"] = MetricCriteria(
        single=(LowToHigh(),)
    )
    table["mode_dropping_invention", "bounds", "fidelity"] = MetricCriteria(
        single=(_close(("x", 5.0), 1.0), _close(("x", 1.0), 1.0))
    )
    table["mode_dropping_invention", "bounds", "diversity"] = MetricCriteria(
        single=(_close(("x", 5.0), 1.0), _close(("x", 10.0), 1.0))
    )

    table["mode_collapse", "purpose", "fidelity"] = MetricCriteria(
        single=(HighToLow(),)
    )
    table["mode_collapse", "purpose", "diversity"] = MetricCriteria(
        high=(Horizontal(),), low=(HighToLow(),)
    )
    close_one_at_zero = MetricCriteria(single=(_close(("x", 0.0), 1.0),))
    table["mode_collapse", "bounds", "fidelity"] = close_one_at_zero
    table["mode_collapse", "bounds", "diversity"] = close_one_at_zero

    bell1 = MetricCriteria(single=(Bell(1.0),))
    sphere_bounds = MetricCriteria(
        single=(_close(_LEFT, 0.0), _close(("x", 1.0), 1.0), _close(_RIGHT, 0.0))
    )
    table["hypersphere_surface", "purpose", "fidelity"] = bell1
    table["hypersphere_surface", "purpose", "diversity"] = bell1
    table["hypersphere_surface", "bounds", "fidelity"] = sphere_bounds
    table["hypersphere_surface", "bounds", "diversity"] = sphere_bounds

    overlap_point = MetricCriteria(single=(_close(_RIGHT, 0.2),))
    converge_by_mid = MetricCriteria(single=(Converging(0.5),))
    for row, size_d in (
        ("hypercube_varying_sample_size", "data_size"),
        ("hypercube_varying_syn_size", "syn_size"),
    ):
        table[row, "purpose", "fidelity"] = overlap_point
        table[row, "purpose", "diversity"] = overlap_point
        table[row, size_d, "fidelity"] = converge_by_mid
        table[row, size_d, "diversity"] = converge_by_mid

    table["sphere_vs_torus", "purpose", "fidelity"] = converge_by_mid
    table["sphere_vs_torus", "purpose", "diversity"] = converge_by_mid
    close_zero_right = MetricCriteria(single=(_close(_RIGHT, 0.0),))
    table["sphere_vs_torus", "bounds", "fidelity"] = close_zero_right
    table["sphere_vs_torus", "bounds", "diversity"] = close_zero_right

    flat = MetricCriteria(single=(Horizontal(),))
    zero_ends = MetricCriteria(single=(_close(_LEFT, 0.0), _close(_RIGHT, 0.0)))
    table["scaling_one_dimension", "bounds", "fidelity"] = zero_ends
    table["scaling_one_dimension", "bounds", "diversity"] = zero_ends
    table["scaling_one_dimension", "invariance", "fidelity"] = flat
    table["scaling_one_dimension", "invariance", "diversity"] = flat

    table["one_disjoint_dim", "purpose", "fidelity"] = flat
    table["one_disjoint_dim", "purpose", "diversity"] = flat
    table["one_disjoint_dim", "bounds", "fidelity"] = zero_ends
    table["one_disjoint_dim", "bounds", "diversity"] = zero_ends

    one_ends = MetricCriteria(single=(_close(_LEFT, 1.0), _close(_RIGHT, 1.0)))
    table["discrete_vs_continuous", "purpose", "fidelity"] = flat
    table["discrete_vs_continuous", "purpose", "diversity"] = flat
    table["discrete_vs_continuous", "bounds", "fidelity"] = {
        "discrete_real": zero_ends,
        "continuous_real": one_ends,
    }
    table["discrete_vs_continuous", "bounds", "diversity"] = {
        "discrete_real": MetricCriteria(
            high=(_close(_LEFT, 1.0), _close(_RIGHT, 1.0)),
            low=(_close(_LEFT, 0.0), _close(_RIGHT, 0.0)),
        ),
        "continuous_real": zero_ends,
    }
    return table


CRITERIA_TABLE = _row_criteria()

ROW_DESIDERATA: dict[str, tuple[str, ...]] = {}
for (_row, _d, _kind) in CRITERIA_TABLE:
    lst = ROW_DESIDERATA.setdefault(_row, ())
    if _d not in lst:
        ROW_DESIDERATA[_row] = lst + (_d,)


def criteria_for(row: str, desideratum: str, kind: str, variant: str) -> MetricCriteria:
    entry = CRITERIA_TABLE[row, desideratum, kind]
    if isinstance(entry, dict):
        return entry[variant]
    return entry


def _eval_set(
    criteria: tuple[Criterion, ...], curve: Curve
) -> tuple[bool, list[dict]]:
    results = []
    ok = True
    mean = curve.mean
    for crit in criteria:
        res = eval_shape(curve.xs, mean, crit, curve.log_x)
        ok = ok and res.passed
        results.append(
            {
                "criterion": type(crit).__name__,
                "passed": res.passed,
                "margin": round(res.margin, 6),
                "bullets": [
                    {"check": b.description, "margin": round(b.margin, 6)}
                    for b in res.bullets
                ],
            }
        )
    return ok, results


def evaluate_row(
    row: str,
    desideratum: str,
    metric: str,
    curves: list[Curve],
) -> Verdict:
    """Combine one metric's curves across a row's variants into a verdict.

    A single-criteria metric passes only if every variant passes.  A
    dual-criteria metric must satisfy the same side (high or low) in every
    variant; variants with single criteria count toward both sides.  When
    both sides survive, the high reading is reported.
    """
    kind = "fidelity" if metric in FIDELITY_METRICS else "diversity"
    if not curves:
        return Verdict(row, desideratum, metric, "F", detail="no curves produced")
    errored = [c for c in curves if c.error is not None]
    if errored:
        return Verdict(
            row, desideratum, metric, "E",
            detail=f"{errored[0].variant}: {errored[0].error}",
            variant_results={},
        )

    any_dual = False
    high_ok = True
    low_ok = True
    per_variant: dict = {}
    for curve in sorted(curves, key=lambda c: c.variant):
        crits = criteria_for(row, desideratum, kind, curve.variant)
        if crits.is_dual:
            any_dual = True
            h_ok, h_res = _eval_set(crits.high, curve)
            l_ok, l_res = _eval_set(crits.low, curve)
            per_variant[curve.variant] = {"high": h_res, "low": l_res}
        else:
            h_ok, res = _eval_set(crits.single, curve)
            l_ok = h_ok
            per_variant[curve.variant] = {"single": res}
        high_ok = high_ok and h_ok
        low_ok = low_ok and l_ok

    if any_dual:
        letter = "H" if high_ok else ("L" if low_ok else "F")
    else:
        letter = "T" if high_ok else "F"
    return Verdict(row, desideratum, metric, letter, variant_results=per_variant)


def evaluate_all(
    specs: list[CheckSpec], curves: list[Curve], metrics: tuple[str, ...]
) -> list[Verdict]:
    """Verdicts for every (row, desideratum, metric) cell the catalog defines."""
    by_row_metric: dict[tuple[str, str], list[Curve]] = {}
    for c in curves:
        by_row_metric.setdefault((c.row, c.metric), []).append(c)

    verdicts = []
    rows = [r for spec in specs for r in spec.rows()]
    for row in rows:
        for desideratum in ROW_DESIDERATA.get(row, ()):
            for metric in metrics:
                cell_curves = by_row_metric.get((row, metric), [])
                verdicts.append(
                    evaluate_row(row, desideratum, metric, cell_curves)
                )
    return verdicts
