"""Certified lower bounds on linear-classifier accuracy via single-axis
threshold scans, exact and Monte Carlo, over very wide feature embeddings."""

from .axiscore import (
    AxisResult,
    FeatureMatrix,
    LabeledDataset,
    Orientation,
    ThresholdClassifier,
    as_linear_classifier,
    axis_accuracy,
    classifier_accuracy,
    linear_predict,
    r_min_deterministic,
)
from .datagen import (
    DATASET_KINDS,
    DatasetSpec,
    StandardizeRecord,
    dataset_from_csv,
    dataset_to_csv,
    gen_circles,
    gen_linear_separable,
    gen_multi_cluster,
    generate,
    spec_from_json,
    spec_to_json,
    standardize,
    stratified_split,
)
from .featmap import (
    EncodingCircuitSpec,
    LazyProxyFeatures,
    PauliString,
    ProjectionSpec,
    encode_state,
    feature_matrix_from_csv,
    feature_matrix_to_csv,
    load_feature_matrix,
    pauli_expectation,
    pauli_feature_matrix,
    pauli_string,
    projection_column,
    proxy_embed,
    save_feature_matrix,
)
from .harness import (
    CSV_HEADER,
    ExperimentConfig,
    ExperimentReport,
    default_datasets,
    derive_seed,
    emit_report,
    parse_config,
    reports_equivalent,
    run_experiment,
)
from .sampling import (
    CoverageQuery,
    EstimateResult,
    EstimatorMethod,
    PilotStats,
    StopReason,
    SurvivalFunction,
    adaptive_estimate,
    conservative_estimate,
    coverage_probability_bound,
    coverage_probability_exact,
    deterministic_estimate,
    pilot_estimate,
    sample_axes,
    sample_size,
    survival_function,
)
from .svmref import (
    SvmModel,
    decision_function,
    model_from_json,
    model_to_json,
    svm_predict,
    svm_train,
)

__version__ = "0.1.0"

__all__ = [
    "AxisResult",
    "CSV_HEADER",
    "CoverageQuery",
    "DATASET_KINDS",
    "DatasetSpec",
    "EncodingCircuitSpec",
    "EstimateResult",
    "EstimatorMethod",
    "ExperimentConfig",
    "ExperimentReport",
    "FeatureMatrix",
    "LabeledDataset",
    "LazyProxyFeatures",
    "Orientation",
    "PauliString",
    "PilotStats",
    "ProjectionSpec",
    "StandardizeRecord",
    "StopReason",
    "SurvivalFunction",
    "SvmModel",
    "ThresholdClassifier",
    "adaptive_estimate",
    "as_linear_classifier",
    "axis_accuracy",
    "classifier_accuracy",
    "conservative_estimate",
    "coverage_probability_bound",
    "coverage_probability_exact",
    "dataset_from_csv",
    "dataset_to_csv",
    "decision_function",
    "default_datasets",
    "derive_seed",
    "deterministic_estimate",
    "emit_report",
    "encode_state",
    "feature_matrix_from_csv",
    "feature_matrix_to_csv",
    "gen_circles",
    "gen_linear_separable",
    "gen_multi_cluster",
    "generate",
    "linear_predict",
    "load_feature_matrix",
    "model_from_json",
    "model_to_json",
    "parse_config",
    "pauli_expectation",
    "pauli_feature_matrix",
    "pauli_string",
    "pilot_estimate",
    "projection_column",
    "proxy_embed",
    "r_min_deterministic",
    "reports_equivalent",
    "run_experiment",
    "sample_axes",
    "sample_size",
    "save_feature_matrix",
    "spec_from_json",
    "spec_to_json",
    "standardize",
    "stratified_split",
    "survival_function",
    "svm_predict",
    "svm_train",
]
