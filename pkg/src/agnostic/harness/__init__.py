"""Experiment harness: RMDS dataset files, JSON experiment specs, CSV reports and the CLI."""

from .experiment import (
    ESTIMATORS,
    ExperimentSpec,
    SpecError,
    TrialRecord,
    bench,
    load_spec,
    parse_spec,
    read_csv,
    simulate,
)
from .rmds import FormatError, StoredDataset, load, save
