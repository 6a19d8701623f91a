"""Data ingestion, simulation studies and the command-line interface."""
from .data import FractionalPartition, ingest_csv, loglik_fractional, write_csv
from .study import METHODS, StudyConfig, StudyReport, run_replication, run_study

__all__ = [
    "FractionalPartition",
    "ingest_csv",
    "loglik_fractional",
    "write_csv",
    "METHODS",
    "StudyConfig",
    "StudyReport",
    "run_replication",
    "run_study",
]
