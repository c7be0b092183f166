"""Simulation oracle, experiment harness, brute-force oracle and CLI."""

from .harness import (FitResult, SweepConfig, TrialResult, VerifyReport, exhaustive_verify,
                      fit_constants, run_trial, sweep, sweep_csv)
from .minlength import MinLength, brute_force_min_length
from .oracle import TestOracle

__all__ = [
    "FitResult", "MinLength", "SweepConfig", "TestOracle", "TrialResult", "VerifyReport",
    "brute_force_min_length", "exhaustive_verify", "fit_constants", "run_trial", "sweep",
    "sweep_csv",
]
