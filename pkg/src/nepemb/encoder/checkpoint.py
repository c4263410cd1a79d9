"""Checkpoint container: 8-byte header length, JSON header, little-endian float32 tensor data."""

from __future__ import annotations

import copy
import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import ConfigError, ModelConfig
from .model import param_shapes

FORMAT_VERSION = 1
_DTYPE = np.dtype("<f4")


class CheckpointError(Exception):
    pass


@dataclass
class Checkpoint:
    config: ModelConfig
    weights: dict[str, np.ndarray]
    optimizer_state: dict[str, np.ndarray] | None = None
    step: int = 0
    format_version: int = FORMAT_VERSION
    meta: dict = field(default_factory=dict)

    def copy(self) -> "Checkpoint":
        return Checkpoint(
            config=self.config,
            weights={k: v.copy() for k, v in self.weights.items()},
            optimizer_state=None
            if self.optimizer_state is None
            else {k: v.copy() for k, v in self.optimizer_state.items()},
            step=self.step,
            format_version=self.format_version,
            meta=copy.deepcopy(self.meta),
        )

    def validate(self) -> None:
        expected = param_shapes(self.config)
        for name, shape in expected.items():
            if name not in self.weights:
                raise CheckpointError(f"missing tensor {name!r}")
            if tuple(self.weights[name].shape) != shape:
                raise CheckpointError(
                    f"tensor {name!r} has shape {tuple(self.weights[name].shape)}, config implies {shape}"
                )
        extra = set(self.weights) - set(expected)
        if extra:
            raise CheckpointError(f"unexpected tensors {sorted(extra)}")
        for name, arr in (self.optimizer_state or {}).items():
            base = name.split(".", 2)[-1]
            if base not in expected or tuple(arr.shape) != expected[base]:
                raise CheckpointError(f"optimizer tensor {name!r} does not match any weight")


def checkpoints_equal(a: Checkpoint, b: Checkpoint) -> bool:
    """Bitwise equality of config, step and every tensor."""
    if a.config != b.config or a.step != b.step or a.format_version != b.format_version:
        return False

    def same(x, y):
        if (x is None) != (y is None):
            return False
        if x is None:
            return True
        return x.keys() == y.keys() and all(
            x[k].dtype == y[k].dtype and x[k].shape == y[k].shape and x[k].tobytes() == y[k].tobytes()
            for k in x
        )

    return same(a.weights, b.weights) and same(a.optimizer_state, b.optimizer_state)


def _tensor_items(ckpt: Checkpoint):
    for name in param_shapes(ckpt.config):
        yield "weights", name, ckpt.weights[name]
    for name in sorted(ckpt.optimizer_state or {}):
        yield "optimizer", name, ckpt.optimizer_state[name]


def to_bytes(ckpt: Checkpoint) -> bytes:
    ckpt.validate()
    table, chunks, offset = [], [], 0
    for group, name, arr in _tensor_items(ckpt):
        data = np.ascontiguousarray(arr, dtype=_DTYPE).tobytes()
        table.append(
            {"group": group, "name": name, "shape": list(arr.shape), "offset": offset, "nbytes": len(data)}
        )
        chunks.append(data)
        offset += len(data)
    header = {
        "format_version": ckpt.format_version,
        "config": ckpt.config.to_dict(),
        "step": ckpt.step,
        "meta": ckpt.meta,
        "dtype": "float32-le",
        "data_bytes": offset,
        "tensors": table,
    }
    raw = json.dumps(header, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")
    return struct.pack("<Q", len(raw)) + raw + b"".join(chunks)


def save_checkpoint(ckpt: Checkpoint, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(to_bytes(ckpt))
    tmp.replace(path)
    return path


def from_bytes(buf: bytes, source: str = "<bytes>") -> Checkpoint:
    if len(buf) < 8:
        raise CheckpointError(f"{source}: truncated (no header)")
    (hlen,) = struct.unpack("<Q", buf[:8])
    if 8 + hlen > len(buf):
        raise CheckpointError(f"{source}: truncated header")
    try:
        header = json.loads(buf[8 : 8 + hlen].decode("utf-8"))
    except (UnicodeDecodeError, ValueError) as exc:
        raise CheckpointError(f"{source}: unreadable header: {exc}") from exc
    version = header.get("format_version")
    if version != FORMAT_VERSION:
        raise CheckpointError(f"{source}: format_version {version} is not supported (expected {FORMAT_VERSION})")
    try:
        config = ModelConfig.from_dict(header["config"])
    except (ConfigError, KeyError, TypeError) as exc:
        raise CheckpointError(f"{source}: invalid config: {exc}") from exc

    data = buf[8 + hlen :]
    if len(data) != header.get("data_bytes"):
        raise CheckpointError(
            f"{source}: truncated or padded tensor data ({len(data)} bytes, header declares {header.get('data_bytes')})"
        )
    expected = param_shapes(config)
    weights: dict[str, np.ndarray] = {}
    optim: dict[str, np.ndarray] = {}
    for entry in header["tensors"]:
        name, shape = entry["name"], tuple(entry["shape"])
        group = weights if entry["group"] == "weights" else optim
        want = expected.get(name if group is weights else name.split(".", 2)[-1])
        if want is None:
            raise CheckpointError(f"{source}: unexpected tensor {name!r}")
        if shape != want:
            raise CheckpointError(f"{source}: tensor {name!r} has shape {shape}, config implies {want}")
        count = int(np.prod(shape)) if shape else 1
        start, nbytes = entry["offset"], entry["nbytes"]
        if nbytes != count * _DTYPE.itemsize or start < 0 or start + nbytes > len(data):
            raise CheckpointError(f"{source}: tensor {name!r} has an inconsistent offset table entry")
        arr = np.frombuffer(data, dtype=_DTYPE, count=count, offset=start).reshape(shape)
        group[name] = arr.astype(np.float32)
    missing = [n for n in expected if n not in weights]
    if missing:
        raise CheckpointError(f"{source}: missing tensor {missing[0]!r}")
    return Checkpoint(
        config=config,
        weights=weights,
        optimizer_state=optim or None,
        step=int(header["step"]),
        format_version=version,
        meta=header.get("meta", {}),
    )


def load_checkpoint(path: str | Path) -> Checkpoint:
    path = Path(path)
    try:
        buf = path.read_bytes()
    except OSError as exc:
        raise CheckpointError(f"cannot read checkpoint {path}: {exc}") from exc
    return from_bytes(buf, source=str(path))
