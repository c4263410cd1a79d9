"""Run configuration: a single YAML document, validated in one pass and echoed with defaults filled."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import yaml

from .encoder.config import ConfigError, ModelConfig, TrainSpec, preset
from .evaluation.report import ROLES
from .tokenizer import DEFAULT_VOCAB_SIZE

OUTPUT_DIR_ENV = "NEPEMB_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "nepemb-out"
ECHO_NAME = "config.yaml"

MODEL_OVERRIDES = ("num_layers", "num_heads", "hidden_dim", "ff_dim", "dropout")
TRAIN_FIELDS = ("epochs", "mask_prob", "batch_size", "learning_rate", "clip_norm")
PROBE_FIELDS = ("epochs", "batch_size", "learning_rate")
PROBE_DEFAULTS = {"epochs": 60, "batch_size": 16, "learning_rate": 1e-2}


class ConfigValidationError(ConfigError):
    """Every problem found in a config document, each prefixed with its location."""

    def __init__(self, errors: list[str], source: str = "config"):
        self.errors = list(errors)
        self.source = source
        super().__init__(f"{source}: {len(errors)} error(s)\n" + "\n".join(f"  {e}" for e in errors))


@dataclass
class RolePaths:
    checkpoint: str
    vocab: str


@dataclass
class RunConfig:
    output_dir: str
    seed: int = 0
    preset: str = "small"
    model: dict[str, Any] = field(default_factory=dict)
    max_len: int = 128
    vocab_size: int = DEFAULT_VOCAB_SIZE
    pooling: str = "mean"
    train: dict[str, Any] = field(default_factory=lambda: _train_defaults())
    probe: dict[str, Any] = field(default_factory=lambda: dict(PROBE_DEFAULTS))
    corpora: dict[str, list[str]] = field(default_factory=lambda: {"regulated": [], "unregulated": []})
    lexicon: str | None = None
    normalization_map: str | None = None
    suffixes: str | None = None
    vocab: str | None = None
    checkpoints: dict[str, RolePaths] = field(default_factory=dict)
    eval_sets: list[str] = field(default_factory=list)
    classification: dict[str, str] | None = None

    def model_config(self, vocab_size: int) -> ModelConfig:
        return preset(self.preset, vocab_size, max_len=self.max_len, **self.model)

    def train_spec(self) -> TrainSpec:
        return TrainSpec(seed=self.seed, **self.train)

    def probe_spec(self) -> TrainSpec:
        return TrainSpec(seed=self.seed, **self.probe)

    def to_dict(self) -> dict:
        data = asdict(self)
        data["checkpoints"] = {role: asdict(p) for role, p in self.checkpoints.items()}
        return data

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.to_dict(), allow_unicode=True, sort_keys=True)


def _train_defaults() -> dict[str, Any]:
    spec = TrainSpec()
    return {name: getattr(spec, name) for name in TRAIN_FIELDS}


def default_output_dir() -> str:
    return os.environ.get(OUTPUT_DIR_ENV) or DEFAULT_OUTPUT_DIR


class _Checker:
    """Collects errors instead of stopping at the first one."""

    def __init__(self, base: Path):
        self.base = base
        self.errors: list[str] = []

    def fail(self, where: str, message: str) -> None:
        self.errors.append(f"{where}: {message}")

    def path(self, value, where: str, must_exist: bool = True) -> str | None:
        if not isinstance(value, str) or not value:
            self.fail(where, f"expected a path string, got {value!r}")
            return None
        resolved = Path(value) if Path(value).is_absolute() else self.base / value
        resolved = Path(os.path.normpath(resolved))
        if must_exist and not resolved.exists():
            self.fail(where, f"path does not exist: {resolved}")
        return str(resolved)

    def integer(self, value, where: str, minimum: int = 0):
        if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
            self.fail(where, f"expected an integer >= {minimum}, got {value!r}")
            return None
        return value

    def number(self, value, where: str):
        if isinstance(value, str):
            # YAML 1.1 reads "5e-5" (no decimal point) as a string
            try:
                value = float(value)
            except ValueError:
                pass
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            self.fail(where, f"expected a number, got {value!r}")
            return None
        return float(value)

    def mapping(self, value, where: str, allowed) -> dict:
        if value is None:
            return {}
        if not isinstance(value, dict):
            self.fail(where, f"expected a mapping, got {type(value).__name__}")
            return {}
        for key in value:
            if key not in allowed:
                self.fail(f"{where}.{key}", f"unknown field (expected one of {', '.join(allowed)})")
        return {k: v for k, v in value.items() if k in allowed}

    def path_list(self, value, where: str) -> list[str]:
        if value is None:
            return []
        if isinstance(value, str):
            value = [value]
        if not isinstance(value, list):
            self.fail(where, f"expected a path or a list of paths, got {value!r}")
            return []
        out = [self.path(v, f"{where}[{i}]") for i, v in enumerate(value)]
        return [p for p in out if p is not None]


TOP_LEVEL = (
    "output_dir", "seed", "preset", "model", "max_len", "vocab_size", "pooling", "train", "probe",
    "corpora", "lexicon", "normalization_map", "suffixes", "vocab", "checkpoints", "eval_sets",
    "classification",
)


def validate_data(data: Any, base: str | Path = ".", source: str = "config") -> RunConfig:
    """Build a RunConfig from a parsed document; relative paths resolve against ``base``."""
    check = _Checker(Path(base).resolve())
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigValidationError([f"<root>: expected a mapping, got {type(data).__name__}"], source)
    data = check.mapping(data, "<root>", TOP_LEVEL)
    cfg: dict[str, Any] = {}

    # an explicit output_dir is relative to the config file, the default to the working directory
    out = data.get("output_dir") or str(Path.cwd() / default_output_dir())
    cfg["output_dir"] = check.path(out, "output_dir", must_exist=False)
    cfg["seed"] = check.integer(data.get("seed", 0), "seed")
    name = data.get("preset", "small")
    if name not in ("small", "oracle"):
        check.fail("preset", f"expected 'small' or 'oracle', got {name!r}")
    cfg["preset"] = name
    cfg["max_len"] = check.integer(data.get("max_len", 128), "max_len", minimum=3)
    cfg["vocab_size"] = check.integer(data.get("vocab_size", DEFAULT_VOCAB_SIZE), "vocab_size", minimum=1)
    pooling = data.get("pooling", "mean")
    if pooling not in ("mean", "cls"):
        check.fail("pooling", f"expected 'mean' or 'cls', got {pooling!r}")
    cfg["pooling"] = pooling

    model = check.mapping(data.get("model"), "model", MODEL_OVERRIDES)
    for key, value in model.items():
        if key == "dropout":
            check.number(value, f"model.{key}")
        else:
            check.integer(value, f"model.{key}", minimum=1)
    cfg["model"] = model

    for section, allowed, defaults in (
        ("train", TRAIN_FIELDS, _train_defaults()),
        ("probe", PROBE_FIELDS, PROBE_DEFAULTS),
    ):
        given = check.mapping(data.get(section), section, allowed)
        merged = dict(defaults)
        for key, value in given.items():
            if key in ("epochs", "batch_size"):
                merged[key] = check.integer(value, f"{section}.{key}", minimum=0 if key == "epochs" else 1)
            else:
                merged[key] = check.number(value, f"{section}.{key}")
        cfg[section] = merged

    corpora = check.mapping(data.get("corpora"), "corpora", ("regulated", "unregulated"))
    cfg["corpora"] = {cat: check.path_list(corpora.get(cat), f"corpora.{cat}") for cat in ("regulated", "unregulated")}

    for key in ("lexicon", "normalization_map", "suffixes", "vocab"):
        cfg[key] = check.path(data[key], key) if data.get(key) is not None else None

    roles = check.mapping(data.get("checkpoints"), "checkpoints", ROLES)
    cfg["checkpoints"] = {}
    for role, entry in roles.items():
        entry = check.mapping(entry, f"checkpoints.{role}", ("checkpoint", "vocab"))
        paths = {k: check.path(entry.get(k), f"checkpoints.{role}.{k}") for k in ("checkpoint", "vocab")}
        if all(paths.values()):
            cfg["checkpoints"][role] = RolePaths(**paths)

    cfg["eval_sets"] = check.path_list(data.get("eval_sets"), "eval_sets")
    if data.get("classification") is not None:
        split = check.mapping(data["classification"], "classification", ("train", "test"))
        paths = {k: check.path(split.get(k), f"classification.{k}") for k in ("train", "test")}
        cfg["classification"] = paths if all(paths.values()) else None
    else:
        cfg["classification"] = None

    if not check.errors:
        # cross-field checks only make sense once every field parsed
        try:
            TrainSpec(seed=cfg["seed"], **cfg["train"])
            TrainSpec(seed=cfg["seed"], **cfg["probe"])
            preset(cfg["preset"], 10, max_len=cfg["max_len"], **cfg["model"])
        except ConfigError as exc:
            check.fail("model/train/probe", str(exc))
    if check.errors:
        raise ConfigValidationError(check.errors, source)
    return RunConfig(**cfg)


def validate_config(path: str | Path) -> RunConfig:
    """Parse and validate a YAML config file, reporting every error at once."""
    path = Path(path)
    if not path.is_file():
        raise ConfigValidationError([f"config file not found: {path}"], str(path))
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except (yaml.YAMLError, UnicodeDecodeError) as exc:
        raise ConfigValidationError([f"cannot parse YAML: {exc}"], str(path)) from exc
    return validate_data(data, base=path.parent, source=str(path))


def echo_config(config: RunConfig, directory: str | Path | None = None) -> Path:
    """Write the fully defaulted config (absolute paths) into the output dir."""
    directory = Path(directory or config.output_dir)
    directory.mkdir(parents=True, exist_ok=True)
    target = directory / ECHO_NAME
    target.write_text(config.to_yaml(), encoding="utf-8")
    return target
