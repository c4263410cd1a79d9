from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ModelConfig:
    num_layers: int
    num_heads: int
    hidden_dim: int
    ff_dim: int
    vocab_size: int
    max_len: int = 128
    dropout: float = 0.1

    def __post_init__(self):
        for name in ("num_layers", "num_heads", "hidden_dim", "ff_dim", "vocab_size", "max_len"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
                raise ConfigError(f"{name} must be a positive integer, got {value!r}")
        if self.hidden_dim % self.num_heads:
            raise ConfigError(
                f"hidden_dim {self.hidden_dim} is not divisible by num_heads {self.num_heads}"
            )
        if not 0.0 <= self.dropout < 1.0:
            raise ConfigError(f"dropout must be in [0, 1), got {self.dropout}")

    @property
    def head_dim(self) -> int:
        return self.hidden_dim // self.num_heads

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ModelConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown model config fields: {sorted(unknown)}")
        return cls(**data)

    def with_(self, **changes) -> "ModelConfig":
        return replace(self, **changes)


def preset(name: str, vocab_size: int, max_len: int = 128, **overrides) -> ModelConfig:
    """``small``: 6 heads, 300 hidden (6 layers by default); ``oracle``: 12 layers, 12 heads, 768 hidden."""
    name = name.lower()
    if name == "small":
        base = dict(num_layers=6, num_heads=6, hidden_dim=300, ff_dim=1200)
    elif name == "oracle":
        base = dict(num_layers=12, num_heads=12, hidden_dim=768, ff_dim=3072)
    else:
        raise ConfigError(f"unknown preset {name!r} (expected 'small' or 'oracle')")
    base.update(vocab_size=vocab_size, max_len=max_len)
    base.update(overrides)
    if "hidden_dim" in overrides and "ff_dim" not in overrides:
        base["ff_dim"] = 4 * base["hidden_dim"]
    return ModelConfig(**base)


@dataclass(frozen=True)
class TrainSpec:
    mask_prob: float = 0.15
    epochs: int = 60
    batch_size: int = 16
    learning_rate: float = 5e-5
    seed: int = 0
    clip_norm: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.mask_prob < 1.0:
            raise ConfigError(f"mask_prob must be in (0, 1), got {self.mask_prob}")
        if not isinstance(self.epochs, int) or self.epochs < 0:
            raise ConfigError(f"epochs must be a non-negative integer, got {self.epochs!r}")
        if not isinstance(self.batch_size, int) or self.batch_size <= 0:
            raise ConfigError(f"batch_size must be a positive integer, got {self.batch_size!r}")
        if not self.learning_rate > 0:
            raise ConfigError(f"learning_rate must be positive, got {self.learning_rate}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "TrainSpec":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown training fields: {sorted(unknown)}")
        return cls(**data)
