"""Topology-based estimation of perceived cluster counts in scatterplots.

Points are synthesized into cluster stimuli, rasterized, and analyzed
through merge trees of either center distances or image density; the
persistence threshold plot turns a tree into a cluster count, and the
calibration layer fits thresholds to human responses.
"""

from .calibration import (
    PREDICTORS,
    DifferentialSummary,
    LinearThresholdModel,
    ResponseRecord,
    extract_thresholds,
    fit_threshold_model,
    model_differential,
    raw_differential,
    read_response_csv,
    summarize_differentials,
    write_response_csv,
)
from .charts import step_chart_svg, write_step_chart
from .density import (
    MODES,
    DensityHistogram,
    ScanPoint,
    build_density_tree,
    compute_histogram,
    estimate_count_density,
    resolution_scan,
)
from .distance import (
    as_centers,
    build_distance_tree,
    estimate_count_distance,
    load_centers_csv,
)
from .errors import (
    DataError,
    DegenerateDesignError,
    ParameterError,
    PerceptaError,
    StructuralError,
)
from .images import (
    from_bytes_grid,
    png_bytes,
    read_image,
    read_pgm,
    read_png,
    to_bytes_grid,
    write_image,
    write_pgm,
    write_png,
)
from .jsonutil import SCHEMA_VERSION, canonical_json
from .pipeline import run_compare, run_estimate, run_generate, run_render
from .synth import (
    NOISE_ORIGIN,
    Dataset,
    GenParams,
    RenderParams,
    StimulusImage,
    cover_counts,
    generate_dataset,
    max_visual_density,
    noise_point_count,
    rasterize,
)
from .topology import (
    INF,
    MergeTree,
    PersistencePair,
    ThresholdPick,
    ThresholdPlot,
    TreeComponent,
    cluster_count_at,
    persistence_pairs,
    threshold_for_count,
    threshold_plot,
)

__version__ = "0.1.0"

__all__ = [
    "PREDICTORS",
    "DifferentialSummary",
    "LinearThresholdModel",
    "ResponseRecord",
    "extract_thresholds",
    "fit_threshold_model",
    "model_differential",
    "raw_differential",
    "read_response_csv",
    "summarize_differentials",
    "write_response_csv",
    "step_chart_svg",
    "write_step_chart",
    "MODES",
    "DensityHistogram",
    "ScanPoint",
    "build_density_tree",
    "compute_histogram",
    "estimate_count_density",
    "resolution_scan",
    "as_centers",
    "build_distance_tree",
    "estimate_count_distance",
    "load_centers_csv",
    "DataError",
    "DegenerateDesignError",
    "ParameterError",
    "PerceptaError",
    "StructuralError",
    "from_bytes_grid",
    "png_bytes",
    "read_image",
    "read_pgm",
    "read_png",
    "to_bytes_grid",
    "write_image",
    "write_pgm",
    "write_png",
    "SCHEMA_VERSION",
    "canonical_json",
    "run_compare",
    "run_estimate",
    "run_generate",
    "run_render",
    "NOISE_ORIGIN",
    "Dataset",
    "GenParams",
    "RenderParams",
    "StimulusImage",
    "cover_counts",
    "generate_dataset",
    "max_visual_density",
    "noise_point_count",
    "rasterize",
    "INF",
    "MergeTree",
    "PersistencePair",
    "ThresholdPick",
    "ThresholdPlot",
    "TreeComponent",
    "cluster_count_at",
    "persistence_pairs",
    "threshold_for_count",
    "threshold_plot",
    "__version__",
]
