#!/usr/bin/env python3

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple, Union

import pandas as pd

from ..agent import evaluate, Evaluation, GreedyQPolicy, Policy, train
from ..bandits import fit_pmf, PmfModel, PmfPolicy, PopPolicy, RandomPolicy, tune_ucb_constant
from ..data import load_movielens_items, load_topics, parse_ratings, RatingLog, split_users, TopicCatalog, UserSplit
from ..models import load_checkpoint, QNetwork, save_checkpoint
from ..utils.errors import ConfigError
from ..version import __version__
from .config import config_hash, ExperimentConfig, format_config, validate_config

_logger = logging.getLogger(__name__)

METRIC_COLUMNS = ("policy", "T", "precision", "recall", "alpha_ndcg", "seed")
COMPARE_CUTOFFS = (5, 10, 20, 40)
CHECKPOINT_FILES = {"nicf": "checkpoint.pt", "pmf": "pmf.pt"}


@dataclass
class Dataset:
    log: RatingLog
    split: UserSplit
    catalog: Optional[TopicCatalog] = None
    titles: Dict[int, str] = field(default_factory=dict)


def load_dataset(cfg: ExperimentConfig) -> Dataset:
    """Parses the rating log and the optional item files of :attr:`cfg`, and splits the users."""
    validate_config(cfg)
    with open(cfg.data.path, encoding=cfg.data.encoding) as stream:
        log = parse_ratings(stream, cfg.data.format, cfg.data.max_rating)
    split = split_users(log, cfg.split.fractions, cfg.split.seed)
    catalog, titles = None, {}
    if cfg.data.items_path:
        with open(cfg.data.items_path, encoding=cfg.data.items_encoding) as stream:
            catalog, titles = load_movielens_items(stream, log)
    if cfg.data.topics_path:
        with open(cfg.data.topics_path, encoding=cfg.data.encoding) as stream:
            catalog = load_topics(stream, log)
    _logger.info(
        f"Loaded {len(log)} ratings of {log.n_users} users on {log.n_items} items; "
        f"split {len(split.train)}/{len(split.valid)}/{len(split.test)}"
    )
    return Dataset(log, split, catalog, titles)


def _out_dir(cfg: ExperimentConfig) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def write_manifest(cfg: ExperimentConfig, out: Path) -> None:
    extra = {"config_hash": config_hash(cfg), "version": __version__}
    (out / "manifest.cfg").write_text(format_config(cfg, extra))


def prepare(cfg: ExperimentConfig) -> Dataset:
    """Ingests and splits the data, writing ``split.csv`` and the manifest."""
    dataset = load_dataset(cfg)
    out = _out_dir(cfg)
    dataset.split.to_frame(dataset.log).to_csv(out / "split.csv", index=False, lineterminator="\n")
    write_manifest(cfg, out)
    return dataset


def _pmf_policy(cfg: ExperimentConfig, model: PmfModel, dataset: Dataset) -> PmfPolicy:
    constant = cfg.pmf.ucb_constant
    if cfg.policy == "pmf_ucb" and cfg.pmf.tune_ucb and dataset.split.valid:
        constant = tune_ucb_constant(model, dataset.log, dataset.split.valid, horizon=cfg.eval.horizon, seed=cfg.seed)
        _logger.info(f"Tuned GLM-UCB constant: {constant}")
    return PmfPolicy(model, cfg.policy, epsilon=cfg.pmf.epsilon, ucb_constant=constant)


def fit_policy(cfg: ExperimentConfig, dataset: Dataset, out: Path) -> Policy:
    """Builds the configured policy on the training users, saving its checkpoint and training log."""
    if cfg.policy == "random":
        return RandomPolicy()
    if cfg.policy == "pop":
        return PopPolicy(dataset.log.item_counts(dataset.split.train))
    if cfg.policy == "nicf":
        qnet, history = train(dataset.log, dataset.split, cfg.train_config(), out / CHECKPOINT_FILES["nicf"])
        history.to_csv(out / "training_log.csv")
        return GreedyQPolicy(qnet)
    model = fit_pmf(
        dataset.log,
        dataset.split.train,
        latent_dim=cfg.pmf.latent_dim,
        noise_var=cfg.pmf.noise_var,
        prior_var=cfg.pmf.prior_var,
        iters=cfg.pmf.iters,
        seed=cfg.seed,
    )
    save_checkpoint(model, out / CHECKPOINT_FILES["pmf"])
    return _pmf_policy(cfg, model, dataset)


def restore_policy(cfg: ExperimentConfig, dataset: Dataset, out: Path) -> Policy:
    """Rebuilds the configured policy from the checkpoint of an earlier ``train`` run in :attr:`out`."""
    if cfg.policy in ("random", "pop"):
        return fit_policy(cfg, dataset, out)
    kind = "nicf" if cfg.policy == "nicf" else "pmf"
    path = out / CHECKPOINT_FILES[kind]
    if not path.is_file():
        raise ConfigError(f"No {kind} checkpoint in {out}; run 'train' first")
    if kind == "nicf":
        return GreedyQPolicy(load_checkpoint(path, QNetwork))
    return _pmf_policy(cfg, load_checkpoint(path, PmfModel), dataset)


def _test_users(cfg: ExperimentConfig, dataset: Dataset) -> Sequence[int]:
    users = sorted(dataset.split.test)
    return users if cfg.eval.max_users is None else users[: cfg.eval.max_users]


def _fmt(value: float) -> str:
    return f"{value:.6g}"


def write_results(cfg: ExperimentConfig, result: Evaluation, out: Path) -> None:
    """Writes ``metrics.csv`` (one row per cutoff) and ``curves.csv`` (one row per step)."""
    rows = [
        [cfg.policy, str(int(row.T)), _fmt(row.precision), _fmt(row.recall), _fmt(row.alpha_ndcg), str(cfg.seed)]
        for row in result.table.itertuples()
    ]
    pd.DataFrame(rows, columns=list(METRIC_COLUMNS)).to_csv(out / "metrics.csv", index=False, lineterminator="\n")
    curves = result.curves.copy()
    for column in ("precision", "recall", "alpha_ndcg"):
        curves[column] = curves[column].map(_fmt)
    curves.to_csv(out / "curves.csv", index=False, lineterminator="\n")


def _evaluate(cfg: ExperimentConfig, policy: Policy, dataset: Dataset) -> Evaluation:
    users = _test_users(cfg, dataset)
    if not users:
        raise ConfigError("The split has no test users to evaluate")
    return evaluate(
        policy,
        dataset.log,
        users,
        cfg.eval.horizon,
        cfg.eval.cutoffs,
        dataset.catalog,
        cfg.eval.alpha,
        seed=cfg.seed,
    )


def run_experiment(cfg: ExperimentConfig) -> Evaluation:
    """
    Trains the configured policy, evaluates it on the test users and writes the result bundle
    (``metrics.csv``, ``curves.csv``, ``manifest.cfg``, plus checkpoint and ``training_log.csv`` when applicable).
    """
    dataset = load_dataset(cfg)
    out = _out_dir(cfg)
    write_manifest(cfg, out)
    policy = fit_policy(cfg, dataset, out)
    result = _evaluate(cfg, policy, dataset)
    write_results(cfg, result, out)
    return result


def evaluate_run(cfg: ExperimentConfig) -> Evaluation:
    """Re-evaluates the policy saved in the output directory without training."""
    dataset = load_dataset(cfg)
    out = _out_dir(cfg)
    result = _evaluate(cfg, restore_policy(cfg, dataset, out), dataset)
    write_results(cfg, result, out)
    return result


def compare(run_dirs: Sequence[Union[str, Path]], cutoffs: Tuple[int, ...] = COMPARE_CUTOFFS) -> pd.DataFrame:
    """
    Side-by-side table of several result bundles: one row per cutoff, one column per (metric, run).

    :raises ValueError: with fewer than two runs, or if the runs were evaluated on different cutoff grids.
    """
    if len(run_dirs) < 2:
        raise ValueError("compare needs at least two result directories")
    frames, labels = [], []
    for run in run_dirs:
        frame = pd.read_csv(Path(run) / "metrics.csv")
        frames.append(frame.set_index("T"))
        label = str(frame["policy"].iloc[0])
        labels.append(label if label not in labels else f"{label} ({Path(run).name})")
    grids = {tuple(frame.index) for frame in frames}
    if len(grids) > 1:
        raise ValueError(f"Result bundles use different cutoff grids: {sorted(grids)}")
    shown = [t for t in cutoffs if t in frames[0].index] or list(frames[0].index)
    columns = {
        (metric, label): frame.loc[shown, metric]
        for metric in ("precision", "recall", "alpha_ndcg")
        for frame, label in zip(frames, labels)
    }
    table = pd.DataFrame(columns)
    table.columns = pd.MultiIndex.from_tuples(table.columns, names=["metric", "policy"])
    return table
