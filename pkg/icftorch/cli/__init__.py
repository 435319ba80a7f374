#!/usr/bin/env python3

from .app import build_parser, main
from .config import (
    build_config,
    config_hash,
    DataConfig,
    EvalConfig,
    ExperimentConfig,
    flatten_config,
    format_config,
    load_config,
    parse_config_text,
    PmfConfig,
    POLICIES,
    SplitConfig,
    validate_config,
)
from .demo import demo_session, DemoResult
from .experiment import compare, evaluate_run, load_dataset, prepare, run_experiment

__all__ = [
    "DataConfig",
    "DemoResult",
    "EvalConfig",
    "ExperimentConfig",
    "POLICIES",
    "PmfConfig",
    "SplitConfig",
    "build_config",
    "build_parser",
    "compare",
    "config_hash",
    "demo_session",
    "evaluate_run",
    "flatten_config",
    "format_config",
    "load_config",
    "load_dataset",
    "main",
    "parse_config_text",
    "prepare",
    "run_experiment",
    "validate_config",
]
