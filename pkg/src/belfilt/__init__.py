"""Belief-mass fusion, temporal filtering and evaluation of per-frame
evidence streams."""

from .errors import (
    AlphaOutOfRangeError,
    BadSubsetError,
    BeliefError,
    ConfigError,
    EmptyInputError,
    FrameMismatchError,
    InconsistentPriorError,
    MissingParameterError,
    NegativeMassError,
    NonFiniteInputError,
    NonNormalizedMeasurementError,
    NotNormalizedError,
    PartitionOverlapError,
    RaggedRowsError,
    TotalConflictError,
    TraceParseError,
)
from .evaluation import (
    ActionReport,
    EvalReport,
    Metrics,
    SegmentAnnotation,
    decide,
    decide_stream,
    gain_report,
    segment_metrics,
)
from .filtering import (
    BatchResult,
    EvolutionModel,
    FilterConfig,
    FilterState,
    ModelSwitch,
    StepResult,
    TransitionInterval,
    WarningCleared,
    WarningStarted,
    cusum_update,
    event_to_json,
    initialize,
    model_mass,
    predict,
    run_batch,
    step,
)
from .fuzzy import (
    FuzzyPartition,
    PartitionReport,
    TrapezoidMembership,
    fuzzify_value,
    validate_memberships,
    validate_partition,
)
from .masses import (
    FrameOfDiscernment,
    MassDistribution,
    binary_frame,
    certain,
    combine_conjunctive,
    combine_disjunctive,
    conflict_mass,
    dempster_normalize,
    discount,
    make_mass,
    mass_from_json_map,
    mass_to_json_map,
    pignistic,
    vacuous,
)
from .pipeline import PipelineConfig, config_from_dict, load_config, run_pipeline
from .rules import And, FrameEvidence, Leaf, Or, evaluate_rule, fuse_frame, rule_from_json
from .synthetic import ActionScript, Burst, SyntheticSpec, generate_synthetic
from .traces import ParameterTrace, load_trace, read_mass_csv, write_mass_csv

__version__ = "0.1.0"
