"""Treatment-path process mining toolkit.

Pipeline stages: patient CSV parsing, event-log transformation, process
discovery, alignment-based conformance checking, cohort statistics, decision
mining, and a seeded cohort simulator. See the CLI module for the command
surface.
"""

from .conformance import (
    Alignment,
    ConformanceReport,
    align,
    conformance_report,
    f1,
    fitness,
    generalization,
    precision,
    simplicity,
)
from .decision_mining import (
    DecisionInstance,
    distribution,
    extract_instances,
    mine_place,
    train_classifier,
)
from .discovery import build_dfg, build_footprint, mine_alpha, mine_dfm
from .model import (
    Event,
    EventLog,
    Outcome,
    PatientDatum,
    PatientSequence,
    Phenotype,
    build_sequences,
    classify_phenotype,
)
from .net_io import read_net_json, write_dot, write_net_json
from .patient_csv import parse_patient_csv, write_patient_csv
from .petri import Marking, PetriNet, build_dejure, decision_points, enabled, fire
from .simulate import SimulationConfig, load_config, simulate
from .stats import compare_cohorts, count_c, count_l, dunn_bonferroni, kruskal_wallis
from .transform import split_sequence, trans_post, trans_pre, transform_log
from .xes import read_xes, write_xes

__version__ = "0.1.0"

__all__ = [
    "Alignment",
    "ConformanceReport",
    "DecisionInstance",
    "Event",
    "EventLog",
    "Marking",
    "Outcome",
    "PatientDatum",
    "PatientSequence",
    "PetriNet",
    "Phenotype",
    "SimulationConfig",
    "align",
    "build_dejure",
    "build_dfg",
    "build_footprint",
    "build_sequences",
    "classify_phenotype",
    "compare_cohorts",
    "conformance_report",
    "count_c",
    "count_l",
    "decision_points",
    "distribution",
    "dunn_bonferroni",
    "enabled",
    "extract_instances",
    "f1",
    "fire",
    "fitness",
    "generalization",
    "kruskal_wallis",
    "load_config",
    "mine_alpha",
    "mine_dfm",
    "mine_place",
    "parse_patient_csv",
    "precision",
    "read_net_json",
    "read_xes",
    "simplicity",
    "simulate",
    "split_sequence",
    "trans_post",
    "trans_pre",
    "train_classifier",
    "transform_log",
    "write_dot",
    "write_net_json",
    "write_patient_csv",
    "write_xes",
]
