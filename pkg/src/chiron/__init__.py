"""Bayesian-network evidence fusion and mission scoring for casualty triage."""

from .network import (
    Cpt,
    ModelFormatError,
    ModelValidationError,
    NetworkSpec,
    NodeSpec,
    cpt_row_index,
    forward_sample,
    joint_probability,
    parse_network,
    serialize_network,
    validate_network,
)
from .inference import (
    Factor,
    ImpossibleEvidenceError,
    Posterior,
    eliminate_posterior,
    enumerate_posterior,
    map_state,
    posterior_all,
)
from .triage import (
    ALERTNESS_FIELDS,
    TRAUMA_FIELDS,
    VITAL_FIELDS,
    VITAL_STATES,
    LinkAnnotation,
    default_annotations,
    default_network,
    validate_convention,
)
from .fusion import (
    AssessmentReport,
    Evidence,
    EvidenceLedger,
    VitalAssessment,
    assess,
    assess_whatif,
    ingest,
)
from .simulate import (
    CasualtyCase,
    CasualtyScore,
    GroundTruth,
    MissionLog,
    Mode,
    Scenario,
    ScoreCard,
    SensorModel,
    emit_observations,
    generate_scenario,
    metrics,
    run_mission,
    score_casualty,
    score_mission,
)

__version__ = "0.1.0"

__all__ = [
    "Cpt",
    "ModelFormatError",
    "ModelValidationError",
    "NetworkSpec",
    "NodeSpec",
    "cpt_row_index",
    "forward_sample",
    "joint_probability",
    "parse_network",
    "serialize_network",
    "validate_network",
    "Factor",
    "ImpossibleEvidenceError",
    "Posterior",
    "eliminate_posterior",
    "enumerate_posterior",
    "map_state",
    "posterior_all",
    "ALERTNESS_FIELDS",
    "TRAUMA_FIELDS",
    "VITAL_FIELDS",
    "VITAL_STATES",
    "LinkAnnotation",
    "default_annotations",
    "default_network",
    "validate_convention",
    "AssessmentReport",
    "Evidence",
    "EvidenceLedger",
    "VitalAssessment",
    "assess",
    "assess_whatif",
    "ingest",
    "CasualtyCase",
    "CasualtyScore",
    "GroundTruth",
    "MissionLog",
    "Mode",
    "Scenario",
    "ScoreCard",
    "SensorModel",
    "emit_observations",
    "generate_scenario",
    "metrics",
    "run_mission",
    "score_casualty",
    "score_mission",
]
