"""Calibrating verbal pairwise-comparison scales against direct scoring."""

from .pcm import (
    Pcm,
    ConsistencyReport,
    ConvergenceError,
    Tolerances,
    TOLERANCES,
    consistency_index,
    consistency_ratio,
    consistency_report,
    is_consistent,
    llsm_weights,
    make_consistent_pcm,
    principal_eigen,
)
from .scales import (
    CatalogScale,
    Direction,
    ScaleParams,
    VerbalCategory,
    catalog_csv,
    catalog_names,
    catalog_scale,
    catalog_values,
    enumerate_grid,
    verbal_to_entry,
)
from .ri import RiEstimate, cr_multiplier, simulate_ri
from .dataset import (
    CleaningOutcome,
    Demographics,
    IngestError,
    Judgment,
    Preferred,
    RemovalReason,
    RespondentRecord,
    build_pcm_from_record,
    clean,
    cr_histogram,
    distance_category_stats,
    encode_judgment,
    export_records,
    ingest,
    ratio_histogram,
    repeated_step_distance,
    score_weights,
)
from .calibration import (
    CalibrationResult,
    WeightMethod,
    calibrate_average,
    calibrate_individual,
    optimality_heatmap,
    respondent_distance,
)

__version__ = "0.1.0"
