"""Suite orchestration: run checks in parallel, evaluate, and export.

The unit of work is one (check, variant, repeat) sweep.  Workers pull tasks
from a shared pool; the merge is keyed by the task id, so results are
identical regardless of worker count or completion order.  Randomness is
derived per cell from the master seed (see checks.run_cell), never from
worker identity.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import multiprocessing
import os
import time
from dataclasses import asdict, dataclass, field, fields

import numpy as np
from threadpoolctl import threadpool_limits

from . import checks as checks_mod
from .checks import (
    EMBEDDING_MODES,
    ROW_TITLES,
    TABULAR_ROWS,
    CheckSpec,
    Curve,
    build_catalog,
    catalog_json,
    load_catalog_json,
)
from .criteria import (
    CRITERIA_TABLE,
    DESIDERATA,
    DESIDERATUM_TITLES,
    MetricCriteria,
    Verdict,
    evaluate_all,
)
from .metrics import (
    DIVERSITY_METRICS,
    FIDELITY_METRICS,
    METRIC_IDS,
    METRIC_LABELS,
    MetricConfig,
)

RESULTS_FORMAT_VERSION = 1
TABLE_LETTERS = ("T", "F", "H", "L", "E")


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 0
    repeats: int = 10
    checks: tuple[str, ...] | None = None  # None = all catalog checks
    metrics: tuple[str, ...] = METRIC_IDS
    embedding: str = "simple"
    workers: int = 1
    base_size: int = 1000
    grid: int = 13
    sweep_min: int = 100
    sweep_max: int = 10000
    fast: bool = False

    def __post_init__(self):
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.embedding not in EMBEDDING_MODES:
            raise ValueError(f"embedding must be one of {EMBEDDING_MODES}")
        unknown = [m for m in self.metrics if m not in METRIC_IDS]
        if unknown:
            raise ValueError(f"unknown metrics: {unknown}")
        if not self.metrics:
            raise ValueError("at least one metric required")

    @property
    def effective_grid(self) -> int:
        if not self.fast:
            return self.grid
        half = self.grid // 2
        if half % 2 == 0:
            half += 1
        return max(3, half)

    @property
    def effective_repeats(self) -> int:
        return max(1, self.repeats // 2) if self.fast else self.repeats

    def metric_config(self) -> MetricConfig:
        return MetricConfig(metrics=self.metrics)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["checks"] = list(self.checks) if self.checks is not None else None
        d["metrics"] = list(self.metrics)
        return d


def config_from_dict(obj: dict) -> SuiteConfig:
    kwargs = dict(obj)
    if kwargs.get("checks") is not None:
        kwargs["checks"] = tuple(kwargs["checks"])
    kwargs["metrics"] = tuple(kwargs.get("metrics", METRIC_IDS))
    names = {f.name for f in fields(SuiteConfig)}
    extra = set(kwargs) - names
    if extra:
        raise ValueError(f"unknown config fields: {sorted(extra)}")
    return SuiteConfig(**kwargs)


@dataclass
class SuiteResults:
    config: SuiteConfig
    specs: tuple[CheckSpec, ...]
    curves: list[Curve]
    verdicts: list[Verdict]
    provenance: dict = field(default_factory=dict)


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _criterion_payload(criterion) -> dict:
    d = asdict(criterion)
    for k, v in d.items():
        if isinstance(v, tuple):
            d[k] = list(v)
    return {"shape": type(criterion).__name__, **d}


def _metric_criteria_payload(mc: MetricCriteria) -> dict:
    def conv(items):
        return None if items is None else [_criterion_payload(c) for c in items]

    return {"single": conv(mc.single), "high": conv(mc.high), "low": conv(mc.low)}


def criteria_json() -> str:
    """Canonical JSON of the whole criteria table, used for provenance."""
    entries = []
    for (row, desid, kind), val in sorted(CRITERIA_TABLE.items()):
        if isinstance(val, dict):
            payload = {
                "per_variant": {v: _metric_criteria_payload(mc) for v, mc in sorted(val.items())}
            }
        else:
            payload = _metric_criteria_payload(val)
        entries.append({"row": row, "desideratum": desid, "kind": kind, **payload})
    return json.dumps(entries, sort_keys=True)


# ---------------------------------------------------------------------------
# Task execution.  _WORKER holds per-process state set up by _init_worker;
# with the fork start method the initializer runs once per child.

_WORKER: dict = {}


def _metric_config_to_dict(cfg: MetricConfig) -> dict:
    d = asdict(cfg)
    d["metrics"] = list(cfg.metrics)
    return d


def _metric_config_from_dict(obj: dict) -> MetricConfig:
    kwargs = dict(obj)
    kwargs["metrics"] = tuple(kwargs["metrics"])
    return MetricConfig(**kwargs)


def _init_worker(catalog_payload: str, mcfg: dict, seed: int, embedding: str):
    _WORKER["specs"] = {s.check: s for s in load_catalog_json(catalog_payload)}
    _WORKER["config"] = _metric_config_from_dict(mcfg)
    _WORKER["seed"] = seed
    _WORKER["embedding"] = embedding


def _run_task(task: tuple[str, int, int]):
    check, variant_idx, repeat = task
    spec = _WORKER["specs"][check]
    started = time.perf_counter()
    # Single-threaded BLAS inside each task keeps floating-point results
    # identical across worker counts.
    with threadpool_limits(limits=1):
        values, errors = checks_mod.run_variant_repeat(
            spec,
            spec.variants[variant_idx],
            repeat,
            _WORKER["seed"],
            _WORKER["config"],
            _WORKER["embedding"],
        )
    payload = {m: v.tolist() for m, v in values.items()}
    return task, payload, errors, time.perf_counter() - started


def run_suite(config: SuiteConfig) -> SuiteResults:
    started = time.time()
    wall_start = time.perf_counter()
    catalog = build_catalog(
        base_size=config.base_size,
        grid=config.effective_grid,
        sweep_min=config.sweep_min,
        sweep_max=config.sweep_max,
    )
    by_id = {s.check: s for s in catalog}
    if config.checks is None:
        specs = tuple(catalog)
    else:
        missing = [c for c in config.checks if c not in by_id]
        if missing:
            raise ValueError(f"unknown checks: {missing}")
        specs = tuple(by_id[c] for c in config.checks)

    repeats = config.effective_repeats
    payload = catalog_json(specs)
    mcfg = config.metric_config()
    tasks = [
        (spec.check, vi, r)
        for spec in specs
        for vi in range(len(spec.variants))
        for r in range(repeats)
    ]

    results: dict = {}
    task_seconds: dict[str, float] = {}

    def _collect(outputs):
        for key, values, errors, seconds in outputs:
            results[key] = (values, errors)
            task_seconds[key[0]] = task_seconds.get(key[0], 0.0) + seconds

    init_args = (payload, _metric_config_to_dict(mcfg), config.seed, config.embedding)
    if config.workers == 1:
        _init_worker(*init_args)
        _collect(map(_run_task, tasks))
    else:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(
            processes=config.workers, initializer=_init_worker, initargs=init_args
        ) as pool:
            _collect(pool.imap_unordered(_run_task, tasks, chunksize=1))

    curves: list[Curve] = []
    for spec in specs:
        for vi, variant in enumerate(spec.variants):
            grid_len = len(variant.cells)
            for metric in config.metrics:
                mat = np.full((repeats, grid_len), np.nan)
                error = None
                for r in range(repeats):
                    values, errors = results[(spec.check, vi, r)]
                    mat[r] = values[metric]
                    if error is None and metric in errors:
                        error = errors[metric]
                curves.append(
                    Curve(
                        check=spec.check,
                        variant=variant.name,
                        row=variant.row,
                        metric=metric,
                        xs=variant.xs,
                        values=mat,
                        log_x=variant.log_x,
                        error=error,
                    )
                )

    verdicts = evaluate_all(list(specs), curves, config.metrics)
    provenance = {
        "package": "gensanity",
        "seed": config.seed,
        "workers": config.workers,
        "config": config.to_dict(),
        "config_sha256": _sha256(json.dumps(config.to_dict(), sort_keys=True)),
        "catalog_sha256": _sha256(payload),
        "criteria_sha256": _sha256(criteria_json()),
        "started_unix": started,
        "wall_seconds": time.perf_counter() - wall_start,
        "check_seconds": {k: round(v, 6) for k, v in sorted(task_seconds.items())},
    }
    return SuiteResults(config, specs, curves, verdicts, provenance)


# ---------------------------------------------------------------------------
# Exports


def _fmt(value: float) -> str:
    return repr(float(value))


def curve_csv(curves: list[Curve], repeats: int) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(
        ["check", "variant", "metric", "x", "mean"]
        + [f"repeat_{r}" for r in range(repeats)]
    )
    for curve in curves:
        mean = curve.mean
        for i, x in enumerate(curve.xs):
            writer.writerow(
                [curve.check, curve.variant, curve.metric, _fmt(x), _fmt(mean[i])]
                + [_fmt(v) for v in curve.values[:, i]]
            )
    return out.getvalue()


def write_curve_csvs(results: SuiteResults, out_dir: str) -> list[str]:
    paths = []
    repeats = results.config.effective_repeats
    by_check: dict[str, list[Curve]] = {}
    for c in results.curves:
        by_check.setdefault(c.check, []).append(c)
    for spec in results.specs:
        path = os.path.join(out_dir, f"curves_{spec.check}.csv")
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(curve_csv(by_check.get(spec.check, []), repeats))
        paths.append(path)
    return paths


def _table_rows(verdicts: list[Verdict]) -> list[tuple[str, str]]:
    """(desideratum, row) pairs in render order: desideratum groups, then title."""
    present = {(v.desideratum, v.row) for v in verdicts}
    ordered = []
    for desid in DESIDERATA:
        group = sorted(
            (r for d, r in present if d == desid), key=lambda r: ROW_TITLES[r]
        )
        ordered.extend((desid, r) for r in group)
    return ordered


def render_table(results: SuiteResults, kind: str) -> tuple[str, str]:
    """One verdict table as (markdown, csv) text.  kind: fidelity|diversity."""
    order = FIDELITY_METRICS if kind == "fidelity" else DIVERSITY_METRICS
    cols = [m for m in order if m in results.config.metrics]
    vmap = {(v.row, v.desideratum, v.metric): v for v in results.verdicts}
    rows = _table_rows([v for v in results.verdicts if v.metric in cols])

    md = io.StringIO()
    md.write("| Desideratum | Check | Tab. | " + " | ".join(METRIC_LABELS[m] for m in cols) + " |\n")
    md.write("|" + " --- |" * (3 + len(cols)) + "\n")
    csv_out = io.StringIO()
    writer = csv.writer(csv_out, lineterminator="\n")
    writer.writerow(["desideratum", "row", "check", "tabular"] + list(cols))
    for desid, row in rows:
        tab = row in TABULAR_ROWS
        letters = [vmap[(row, desid, m)].letter for m in cols]
        md.write(
            f"| {DESIDERATUM_TITLES[desid]} | {ROW_TITLES[row]} | "
            + ("*" if tab else "")
            + " | "
            + " | ".join(letters)
            + " |\n"
        )
        writer.writerow(
            [desid, row, ROW_TITLES[row], "true" if tab else "false"] + letters
        )
    return md.getvalue(), csv_out.getvalue()


def parse_table_csv(text: str) -> dict[tuple[str, str, str], str]:
    """Inverse of the CSV table: (row, desideratum, metric) -> letter."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    metric_cols = header[4:]
    out = {}
    for record in reader:
        desid, row = record[0], record[1]
        for metric, letter in zip(metric_cols, record[4:]):
            out[(row, desid, metric)] = letter
    return out


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def results_bundle(results: SuiteResults) -> dict:
    curves = []
    for c in results.curves:
        curves.append(
            {
                "check": c.check,
                "variant": c.variant,
                "row": c.row,
                "metric": c.metric,
                "log_x": c.log_x,
                "xs": [float(x) for x in c.xs],
                "values": [[_json_safe(float(v)) for v in row] for row in c.values],
                "error": c.error,
            }
        )
    verdicts = [
        {
            "row": v.row,
            "desideratum": v.desideratum,
            "metric": v.metric,
            "letter": v.letter,
            "detail": v.detail,
            "variants": v.variant_results,
        }
        for v in results.verdicts
    ]
    return {
        "format_version": RESULTS_FORMAT_VERSION,
        "config": results.config.to_dict(),
        "effective": {
            "grid": results.config.effective_grid,
            "repeats": results.config.effective_repeats,
        },
        "catalog_sha256": results.provenance.get("catalog_sha256", ""),
        "criteria_sha256": results.provenance.get("criteria_sha256", ""),
        "curves": curves,
        "verdicts": verdicts,
    }


def load_results(path: str) -> SuiteResults:
    """Rebuild SuiteResults from a results.json bundle (no recomputation)."""
    with open(path, encoding="utf-8") as fh:
        bundle = json.load(fh)
    config = config_from_dict(bundle["config"])
    catalog = build_catalog(
        base_size=config.base_size,
        grid=config.effective_grid,
        sweep_min=config.sweep_min,
        sweep_max=config.sweep_max,
    )
    by_id = {s.check: s for s in catalog}
    if config.checks is None:
        specs = tuple(catalog)
    else:
        specs = tuple(by_id[c] for c in config.checks)
    curves = []
    for c in bundle["curves"]:
        values = np.array(
            [[np.nan if v is None else v for v in row] for row in c["values"]],
            dtype=np.float64,
        )
        curves.append(
            Curve(
                check=c["check"],
                variant=c["variant"],
                row=c["row"],
                metric=c["metric"],
                xs=np.asarray(c["xs"], dtype=np.float64),
                values=values,
                log_x=c["log_x"],
                error=c["error"],
            )
        )
    verdicts = [
        Verdict(
            row=v["row"],
            desideratum=v["desideratum"],
            metric=v["metric"],
            letter=v["letter"],
            detail=v.get("detail", ""),
            variant_results=v.get("variants", {}),
        )
        for v in bundle["verdicts"]
    ]
    return SuiteResults(config, specs, curves, verdicts, provenance={
        "catalog_sha256": bundle.get("catalog_sha256", ""),
        "criteria_sha256": bundle.get("criteria_sha256", ""),
    })


def export_suite(results: SuiteResults, out_dir: str) -> dict[str, object]:
    """Write curve CSVs, tables, results.json, and provenance.json."""
    os.makedirs(out_dir, exist_ok=True)
    paths: dict[str, object] = {}
    paths["curves"] = write_curve_csvs(results, out_dir)
    for kind in ("fidelity", "diversity"):
        md, table_csv = render_table(results, kind)
        md_path = os.path.join(out_dir, f"table_{kind}.md")
        csv_path = os.path.join(out_dir, f"table_{kind}.csv")
        with open(md_path, "w", encoding="utf-8") as fh:
            fh.write(md)
        with open(csv_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(table_csv)
        paths[f"table_{kind}"] = [md_path, csv_path]
    results_path = os.path.join(out_dir, "results.json")
    with open(results_path, "w", encoding="utf-8") as fh:
        json.dump(results_bundle(results), fh, indent=1)
        fh.write("\n")
    paths["results"] = results_path
    prov_path = os.path.join(out_dir, "provenance.json")
    with open(prov_path, "w", encoding="utf-8") as fh:
        json.dump(results.provenance, fh, indent=1, sort_keys=True)
        fh.write("\n")
    paths["provenance"] = prov_path
    return paths
