#!/usr/bin/env python3

import dataclasses
import hashlib
import typing
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

from ..agent.learner import TrainConfig
from ..data.ratings import FORMATS
from ..utils.errors import ConfigError

POLICIES = ("nicf", "random", "pop", "mf_greedy", "pmf_eps", "pmf_ts", "pmf_ucb")


@dataclass
class DataConfig:
    path: str = ""
    format: str = "movielens_dat"
    max_rating: int = 5
    encoding: str = "utf-8"
    items_path: str = ""
    items_encoding: str = "latin-1"
    topics_path: str = ""


@dataclass
class SplitConfig:
    train: float = 0.85
    valid: float = 0.05
    test: float = 0.10
    seed: int = 0

    @property
    def fractions(self) -> Tuple[float, float, float]:
        return (self.train, self.valid, self.test)


@dataclass
class PmfConfig:
    latent_dim: int = 10
    noise_var: float = 0.25
    prior_var: float = 1.0
    iters: int = 20
    epsilon: float = 0.1
    ucb_constant: float = 0.1
    tune_ucb: bool = False


@dataclass
class EvalConfig:
    horizon: int = 40
    cutoffs: Tuple[int, ...] = (5, 10, 20, 40)
    alpha: float = 0.5
    max_users: Optional[int] = None


@dataclass
class ExperimentConfig:
    """
    Everything one run depends on. Flattened, every field is a dotted key (``train.epochs``, ``pmf.latent_dim``);
    the top-level ``policy``, ``seed`` and ``out`` keys have no section. ``train.seed`` is always taken from ``seed``.
    """

    policy: str = "nicf"
    seed: int = 0
    out: str = "runs/default"
    data: DataConfig = field(default_factory=DataConfig)
    split: SplitConfig = field(default_factory=SplitConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    pmf: PmfConfig = field(default_factory=PmfConfig)
    eval: EvalConfig = field(default_factory=EvalConfig)

    def train_config(self) -> TrainConfig:
        return dataclasses.replace(self.train, seed=self.seed, horizon=self.eval.horizon)


_SECTIONS = ("data", "split", "train", "pmf", "eval")
_DERIVED = {"train.seed", "train.horizon"}


def _unwrap_optional(tp):
    if typing.get_origin(tp) is Union:
        args = [a for a in typing.get_args(tp) if a is not type(None)]
        return args[0], True
    return tp, False


def _coerce(key: str, raw: str, tp):
    tp, optional = _unwrap_optional(tp)
    text = raw.strip()
    if optional and text.lower() in ("", "none"):
        return None
    try:
        if tp is bool:
            if text.lower() in ("1", "true", "yes", "on"):
                return True
            if text.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(text)
        if tp is int:
            return int(text)
        if tp is float:
            return float(text)
        if typing.get_origin(tp) is tuple:
            return tuple(int(part) for part in text.replace(" ", "").split(",") if part)
        return text
    except ValueError:
        raise ConfigError(f"Invalid value {raw!r} for {key}") from None


def _format(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ",".join(str(v) for v in value)
    return str(value)


def parse_config_text(text: str) -> Dict[str, str]:
    """
    Reads the flat ``key = value`` format. Blank lines and lines starting with ``#`` are ignored,
    later keys override earlier ones.

    :raises ConfigError: on a line without ``=``.
    """
    pairs: Dict[str, str] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {number}: expected 'key = value', got {line!r}")
        key, value = line.split("=", 1)
        pairs[key.strip()] = value.strip()
    return pairs


def config_keys() -> Tuple[str, ...]:
    """Every settable dotted key."""
    return tuple(flatten_config(ExperimentConfig()))


def build_config(pairs: Mapping[str, str], base: Optional[ExperimentConfig] = None) -> ExperimentConfig:
    """
    Applies dotted ``key -> text`` overrides to :attr:`base` (defaults when omitted) and validates the result.

    :raises ConfigError: on unknown keys, unparsable values or invalid settings.
    """
    cfg = dataclasses.replace(base) if base is not None else ExperimentConfig()
    sections = {name: dataclasses.replace(getattr(cfg, name)) for name in _SECTIONS}
    top = {}
    for key, raw in pairs.items():
        if key in _DERIVED:
            raise ConfigError(f"{key} is derived from the top-level settings and cannot be set")
        if "." in key:
            section, name = key.split(".", 1)
            if section not in sections:
                raise ConfigError(f"Unknown config section {section!r} in {key}")
            target = sections[section]
        else:
            name, target = key, cfg
        hints = typing.get_type_hints(type(target))
        if name not in hints or (target is cfg and name in _SECTIONS):
            raise ConfigError(f"Unknown config key {key!r}")
        value = _coerce(key, raw, hints[name])
        if target is cfg:
            top[name] = value
        else:
            setattr(target, name, value)
    try:
        sections["train"] = dataclasses.replace(sections["train"])
    except ValueError as e:
        raise ConfigError(str(e)) from e
    cfg = dataclasses.replace(cfg, **top, **sections)
    validate_config(cfg, check_paths=False)
    return cfg


def load_config(path: Union[str, Path], overrides: Optional[Mapping[str, str]] = None) -> ExperimentConfig:
    pairs = parse_config_text(Path(path).read_text())
    pairs.update(overrides or {})
    return build_config(pairs)


def flatten_config(cfg: ExperimentConfig) -> Dict[str, str]:
    """Dotted key to text, in declaration order."""
    flat: Dict[str, str] = {}
    for f in dataclasses.fields(cfg):
        value = getattr(cfg, f.name)
        if f.name in _SECTIONS:
            for sub in dataclasses.fields(value):
                key = f"{f.name}.{sub.name}"
                if key not in _DERIVED:
                    flat[key] = _format(getattr(value, sub.name))
        else:
            flat[f.name] = _format(value)
    return flat


def format_config(cfg: ExperimentConfig, extra: Optional[Mapping[str, str]] = None) -> str:
    """Config file text of :attr:`cfg`. Entries of :attr:`extra` are written as comments, so the text loads back."""
    lines = [f"# {key} = {value}" for key, value in (extra or {}).items()]
    lines.extend(f"{key} = {value}" for key, value in flatten_config(cfg).items())
    return "\n".join(lines) + "\n"


def config_hash(cfg: ExperimentConfig) -> str:
    """SHA-256 of the flattened configuration, excluding the output directory."""
    flat = flatten_config(cfg)
    flat.pop("out")
    text = "\n".join(f"{k} = {v}" for k, v in flat.items())
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def validate_config(cfg: ExperimentConfig, check_paths: bool = True) -> None:
    """
    :raises ConfigError: if the policy, format, fractions, metric settings or (with :attr:`check_paths`)
        input paths are invalid.
    """
    if cfg.policy not in POLICIES:
        raise ConfigError(f"Unknown policy {cfg.policy!r}; expected one of {POLICIES}")
    if cfg.data.format not in FORMATS:
        raise ConfigError(f"Unknown data format {cfg.data.format!r}; expected one of {FORMATS}")
    fractions = cfg.split.fractions
    if min(fractions) < 0 or abs(sum(fractions) - 1.0) > 1e-9:
        raise ConfigError(f"Split fractions must be nonnegative and sum to 1, got {fractions}")
    if cfg.eval.horizon < 1 or not cfg.eval.cutoffs or min(cfg.eval.cutoffs) < 1:
        raise ConfigError("eval.horizon and eval.cutoffs must be positive")
    if not 0 < cfg.eval.alpha < 1:
        raise ConfigError(f"eval.alpha must lie in (0, 1), got {cfg.eval.alpha}")
    if cfg.pmf.latent_dim < 1 or cfg.pmf.noise_var <= 0 or cfg.pmf.prior_var <= 0:
        raise ConfigError("pmf.latent_dim, pmf.noise_var and pmf.prior_var must be positive")
    if check_paths:
        paths: Iterable[Tuple[str, str]] = (
            ("data.path", cfg.data.path),
            ("data.items_path", cfg.data.items_path),
            ("data.topics_path", cfg.data.topics_path),
        )
        if not cfg.data.path:
            raise ConfigError("data.path is required")
        for key, path in paths:
            if path and not Path(path).is_file():
                raise ConfigError(f"{key} does not exist: {path}")
