"""
Core Package - Infrastructure shared by the engine, harness and API.

This package provides:
- Type-safe data models (Pydantic)
- Configuration management
- Structured logging
- Error hierarchy with graceful degradation
- Result validation and the background job registry
"""

from core.models import (
    AnsatzForm,
    ErrorClass,
    ShotMode,
    RecalcMode,
    TrialClass,
    TrialStatus,
    QubitCalibration,
    GateCalibration,
    DeviceCalibration,
    NoiseConfig,
    AnsatzSpec,
    ShotPolicy,
    RecalcPolicy,
    SpsaConfig,
    MitigationSettings,
    HamiltonianSource,
    ExperimentConfig,
    GroupProbabilities,
    TrialRecord,
    SummaryStats,
    SimilarityReport,
    SimilarityAnalysis,
)

from core.config import (
    Settings,
    get_settings,
    configure
)

from core.logging import (
    LabLogger,
    get_engine_logger,
    get_harness_logger,
    log_step,
    StepTracker
)

from core.errors import (
    LabError,
    ErrorSeverity,
    InvalidArgumentError,
    ResourceLimitError,
    DimensionMismatchError,
    SymmetryViolationError,
    UnsupportedLabelError,
    ChannelError,
    CalibrationError,
    CalibrationSchemaError,
    DataLoadError,
    ConfigurationError,
    OptimizationAborted,
    TrialError,
    GracefulDegradation
)

from core.validator import ResultValidator

from core.job_manager import JobManager, JobStatus, job_manager

__all__ = [
    # Models
    "AnsatzForm",
    "ErrorClass",
    "ShotMode",
    "RecalcMode",
    "TrialClass",
    "TrialStatus",
    "QubitCalibration",
    "GateCalibration",
    "DeviceCalibration",
    "NoiseConfig",
    "AnsatzSpec",
    "ShotPolicy",
    "RecalcPolicy",
    "SpsaConfig",
    "MitigationSettings",
    "HamiltonianSource",
    "ExperimentConfig",
    "GroupProbabilities",
    "TrialRecord",
    "SummaryStats",
    "SimilarityReport",
    "SimilarityAnalysis",

    # Config
    "Settings",
    "get_settings",
    "configure",

    # Logging
    "LabLogger",
    "get_engine_logger",
    "get_harness_logger",
    "log_step",
    "StepTracker",

    # Errors
    "LabError",
    "ErrorSeverity",
    "InvalidArgumentError",
    "ResourceLimitError",
    "DimensionMismatchError",
    "SymmetryViolationError",
    "UnsupportedLabelError",
    "ChannelError",
    "CalibrationError",
    "CalibrationSchemaError",
    "DataLoadError",
    "ConfigurationError",
    "OptimizationAborted",
    "TrialError",
    "GracefulDegradation",

    # Validation / jobs
    "ResultValidator",
    "JobManager",
    "JobStatus",
    "job_manager",
]
