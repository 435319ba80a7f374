#!/usr/bin/env python3

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

from ..models import load_checkpoint, QNetwork
from ..utils.errors import CheckpointError, ConfigError
from .config import build_config, config_keys, ExperimentConfig, load_config, POLICIES
from .demo import demo_session
from .experiment import CHECKPOINT_FILES, compare, evaluate_run, load_dataset, prepare, run_experiment

_logger = logging.getLogger("icftorch.cli")

COMMANDS = ("prepare", "train", "evaluate", "compare", "demo")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="icftorch", description="Interactive collaborative filtering experiments")
    parser.add_argument("command", choices=COMMANDS, help="What to run")
    parser.add_argument("runs", nargs="*", help="Result directories (compare only)")
    parser.add_argument("--config", type=Path, help="Flat 'key = value' configuration file")
    parser.add_argument("--seed", help="Seed of training and evaluation")
    parser.add_argument("--policy", choices=POLICIES, help="Policy to train or evaluate")
    parser.add_argument("--out", help="Output directory")
    parser.add_argument("--verbose", "-v", action="store_true", help="Log debug messages")
    group = parser.add_argument_group("configuration keys")
    for key in config_keys():
        if "." in key:
            group.add_argument(f"--{key}", dest=key, metavar="VALUE")
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, str]:
    keys = [k for k in config_keys() if "." in k] + ["seed", "policy", "out"]
    return {key: str(getattr(args, key)) for key in keys if getattr(args, key, None) is not None}


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    overrides = _overrides(args)
    if args.config is not None:
        return load_config(args.config, overrides)
    return build_config(overrides)


def _demo(cfg: ExperimentConfig) -> None:
    path = Path(cfg.out) / CHECKPOINT_FILES["nicf"]
    qnet = load_checkpoint(path, QNetwork)
    titles = load_dataset(cfg).titles if cfg.data.path else {}
    demo_session(qnet, titles, sys.stdin, sys.stdout, horizon=cfg.eval.horizon)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(name)s %(levelname)s: %(message)s",
    )
    try:
        if args.command == "compare":
            table = compare(args.runs)
            sys.stdout.write(table.to_string(float_format=lambda v: f"{v:.6g}") + "\n")
            if args.out:
                Path(args.out).mkdir(parents=True, exist_ok=True)
                table.to_csv(Path(args.out) / "comparison.csv", float_format="%.6g", lineterminator="\n")
            return 0
        cfg = resolve_config(args)
        if args.command == "prepare":
            prepare(cfg)
        elif args.command == "train":
            run_experiment(cfg)
        elif args.command == "evaluate":
            evaluate_run(cfg)
        else:
            _demo(cfg)
    except (ConfigError, CheckpointError, ValueError, FileNotFoundError) as e:
        _logger.error(str(e))
        return 2
    return 0
