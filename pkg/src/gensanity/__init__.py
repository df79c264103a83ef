"""Sanity-check benchmark for generative model fidelity and diversity metrics."""

from .data import (
    CATEGORICAL,
    NUMERICAL,
    ROLE_REAL,
    ROLE_SYNTHETIC,
    Column,
    Dataset,
    EmbeddedSet,
    RandomSource,
    SchemaMismatchError,
    load_dataset,
    save_dataset,
)
from .embed import (
    ConstantColumnWarning,
    OneClassConfig,
    TabularEmbedding,
    apply_tabular,
    embed_pair,
    fit_one_class,
    fit_tabular,
)
from .metrics import (
    DIVERSITY_METRICS,
    FIDELITY_METRICS,
    METRIC_IDS,
    METRIC_LABELS,
    MetricConfig,
    calibrate_coverage_k,
    compute_all,
    cover_precision_recall,
    density_coverage,
    expected_coverage,
    integrated_quantile_pair,
    knn_precision_recall,
    probabilistic_precision_recall,
    symmetric_precision_recall,
)
from .neighbors import (
    BallCounts,
    NeighborRadii,
    count_in_balls,
    knn_radii,
    nearest_neighbor,
)
from .checks import (
    ROW_TITLES,
    TABULAR_ROWS,
    CheckSpec,
    CheckVariant,
    Curve,
    build_catalog,
    run_check,
)
from .criteria import (
    CRITERIA_TABLE,
    DESIDERATA,
    Verdict,
    eval_shape,
    evaluate_all,
)
from .harness import (
    SuiteConfig,
    SuiteResults,
    export_suite,
    load_results,
    render_table,
    run_suite,
)

__version__ = "0.1.0"

__all__ = [
    "CATEGORICAL",
    "NUMERICAL",
    "ROLE_REAL",
    "ROLE_SYNTHETIC",
    "Column",
    "Dataset",
    "EmbeddedSet",
    "RandomSource",
    "SchemaMismatchError",
    "load_dataset",
    "save_dataset",
    "ConstantColumnWarning",
    "OneClassConfig",
    "TabularEmbedding",
    "apply_tabular",
    "embed_pair",
    "fit_one_class",
    "fit_tabular",
    "DIVERSITY_METRICS",
    "FIDELITY_METRICS",
    "METRIC_IDS",
    "METRIC_LABELS",
    "MetricConfig",
    "calibrate_coverage_k",
    "compute_all",
    "cover_precision_recall",
    "density_coverage",
    "expected_coverage",
    "integrated_quantile_pair",
    "knn_precision_recall",
    "probabilistic_precision_recall",
    "symmetric_precision_recall",
    "BallCounts",
    "NeighborRadii",
    "count_in_balls",
    "knn_radii",
    "nearest_neighbor",
    "ROW_TITLES",
    "TABULAR_ROWS",
    "CheckSpec",
    "CheckVariant",
    "Curve",
    "build_catalog",
    "run_check",
    "CRITERIA_TABLE",
    "DESIDERATA",
    "Verdict",
    "eval_shape",
    "evaluate_all",
    "SuiteConfig",
    "SuiteResults",
    "export_suite",
    "load_results",
    "render_table",
    "run_suite",
    "__version__",
]
