"""sortlab: an interchange-free quicksort variant and heapsort, measured.

The package splits into five layers: ``sort_core`` (the algorithms and
their exact operation counts), ``workload`` (deterministic input
generation and array files), ``bench`` (the Monte Carlo timing harness
and its CSV format), ``stats`` (the n log n runtime model, its OLS
diagnostics, and crossover estimators), and ``report``/``figures``/
``cli`` (rendering and the command-line front end).
"""

from .bench import (
    CSV_FIELDS,
    DEFAULT_REPS,
    BenchConfig,
    BenchRecord,
    SchemaError,
    SortIntegrityError,
    load_table1,
    nlog2n,
    read_csv,
    run_cell,
    run_grid,
    write_csv,
)
from .figures import render_comparison, render_fit_diagnostics, render_times_curve
from .report import (
    fit_from_dict,
    fit_to_dict,
    format_fit_report,
    read_fit_json,
    write_fit_json,
)
from .sort_core import (
    SORTERS,
    NonFiniteKeyError,
    OpCounts,
    PartitionOutcome,
    heap_sort,
    is_sorted,
    k_sort,
    ksort_partition,
)
from .stats import (
    BracketError,
    CrossoverEstimate,
    DesignRow,
    DiagnosticsSeries,
    DiffModel,
    FitError,
    Observation,
    RegressionFit,
    build_design,
    crossover_empirical,
    crossover_model,
    diagnostics_series,
    diff_model,
    f_pvalue,
    ols_fit,
    predict,
    t_pvalue_two_sided,
)
from .workload import (
    GOLDEN_GAMMA,
    SplitMix64,
    WorkloadSpec,
    derive_seed,
    duplicate,
    generate,
    mix64,
    read_binary,
    read_text,
    write_binary,
    write_text,
)

__version__ = "0.1.0"

__all__ = [
    "BenchConfig",
    "BenchRecord",
    "BracketError",
    "CSV_FIELDS",
    "CrossoverEstimate",
    "DEFAULT_REPS",
    "DesignRow",
    "DiagnosticsSeries",
    "DiffModel",
    "FitError",
    "GOLDEN_GAMMA",
    "NonFiniteKeyError",
    "Observation",
    "OpCounts",
    "PartitionOutcome",
    "RegressionFit",
    "SORTERS",
    "SchemaError",
    "SortIntegrityError",
    "SplitMix64",
    "WorkloadSpec",
    "__version__",
    "build_design",
    "crossover_empirical",
    "crossover_model",
    "derive_seed",
    "diagnostics_series",
    "diff_model",
    "duplicate",
    "f_pvalue",
    "fit_from_dict",
    "fit_to_dict",
    "format_fit_report",
    "generate",
    "heap_sort",
    "is_sorted",
    "k_sort",
    "ksort_partition",
    "load_table1",
    "mix64",
    "nlog2n",
    "ols_fit",
    "predict",
    "read_binary",
    "read_csv",
    "read_fit_json",
    "read_text",
    "render_comparison",
    "render_fit_diagnostics",
    "render_times_curve",
    "run_cell",
    "run_grid",
    "t_pvalue_two_sided",
    "write_binary",
    "write_csv",
    "write_fit_json",
    "write_text",
]
