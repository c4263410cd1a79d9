"""Initialization, MLM corruption, Adam updates, fine-tuning and held-out perplexity."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..tokenizer import MASK, NUM_SPECIALS
from .checkpoint import Checkpoint
from .config import ModelConfig, TrainSpec
from .model import _check_inputs, _encode, _head, init_weights, log_softmax, mlm_loss_and_grads

ADAM_BETAS = (0.9, 0.999)
ADAM_EPS = 1e-8


class NumericError(RuntimeError):
    """Training produced a non-finite loss or gradient."""


def init(config: ModelConfig, seed: int, dtype=np.float32) -> Checkpoint:
    return Checkpoint(config=config, weights=init_weights(config, seed, dtype=dtype), meta={"init_seed": seed})


@dataclass
class MLMBatch:
    ids: np.ndarray  # corrupted inputs [B, T]
    mask: np.ndarray  # attention mask [B, T]
    positions: tuple[np.ndarray, np.ndarray]
    labels: np.ndarray  # original ids at positions

    @property
    def num_labels(self) -> int:
        return len(self.labels)


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def mlm_corrupt(ids, mask_prob: float, seed, vocab_size: int):
    """BERT-style corruption of non-special tokens.

    Each non-special token is selected with probability ``mask_prob``; a selected
    token becomes [MASK] 80% of the time, a random non-special token 10%, and stays
    unchanged 10%. Returns ``(corrupted, positions, labels)`` where ``positions``
    is the ``np.nonzero`` tuple of selected coordinates.
    """
    ids = np.asarray(ids, dtype=np.int64)
    rng = _rng(seed)
    eligible = ids >= NUM_SPECIALS
    selected = eligible & (rng.random(ids.shape) < mask_prob)
    action = rng.random(ids.shape)
    replacement = rng.integers(NUM_SPECIALS, max(vocab_size, NUM_SPECIALS + 1), size=ids.shape)
    corrupted = ids.copy()
    corrupted[selected & (action < 0.8)] = MASK
    swap = selected & (action >= 0.8) & (action < 0.9)
    corrupted[swap] = replacement[swap]
    positions = np.nonzero(selected)
    return corrupted, positions, ids[positions]


def make_batch(ids, mask, mask_prob: float, seed, vocab_size: int) -> MLMBatch:
    ids = np.atleast_2d(ids)
    mask = np.atleast_2d(mask)
    corrupted, positions, labels = mlm_corrupt(ids, mask_prob, seed, vocab_size)
    return MLMBatch(corrupted, mask, positions, labels)


def _adam_update(ckpt: Checkpoint, grads: dict[str, np.ndarray], lr: float, clip_norm: float | None) -> None:
    total = math.sqrt(sum(float(np.vdot(g.ravel(), g.ravel())) for g in grads.values()))
    if not math.isfinite(total):
        raise NumericError(f"non-finite gradient norm at step {ckpt.step}")
    factor = min(1.0, clip_norm / (total + 1e-6)) if clip_norm else 1.0
    if ckpt.optimizer_state is None:
        ckpt.optimizer_state = {}
    state = ckpt.optimizer_state
    b1, b2 = ADAM_BETAS
    t = ckpt.step + 1
    step_size = lr * math.sqrt(1.0 - b2**t) / (1.0 - b1**t)
    eps = ADAM_EPS * math.sqrt(1.0 - b2**t)
    for name, g in grads.items():
        w = ckpt.weights[name]
        if factor != 1.0:
            g *= w.dtype.type(factor)
        m = state.setdefault(f"adam.m.{name}", np.zeros_like(w))
        v = state.setdefault(f"adam.v.{name}", np.zeros_like(w))
        m *= b1
        m += (1 - b1) * g
        v *= b2
        np.multiply(g, g, out=g)
        g *= 1 - b2
        v += g
        denom = np.sqrt(v)
        denom += eps
        np.divide(m, denom, out=denom)
        denom *= step_size
        w -= denom


def train_step(ckpt: Checkpoint, batch: MLMBatch, spec: TrainSpec, rng=None) -> tuple[Checkpoint, float]:
    """One Adam step on the mean masked-token cross-entropy.

    Updates ``ckpt`` in place and returns it with the pre-update loss. A batch with
    no label positions is a no-op with loss 0. Dropout randomness defaults to a
    generator keyed on ``(spec.seed, ckpt.step)``.
    """
    if batch.num_labels == 0:
        return ckpt, 0.0
    if rng is None:
        rng = np.random.default_rng([spec.seed, ckpt.step])
    loss, grads = mlm_loss_and_grads(
        ckpt.config, ckpt.weights, batch.ids, batch.mask, batch.positions, batch.labels, rng=rng
    )
    if not math.isfinite(loss):
        raise NumericError(f"non-finite loss {loss} at step {ckpt.step}")
    _adam_update(ckpt, grads, spec.learning_rate, spec.clip_norm)
    ckpt.step += 1
    return ckpt, loss


def finetune(
    ckpt: Checkpoint,
    ids: np.ndarray,
    mask: np.ndarray,
    spec: TrainSpec,
    *,
    heldout: Optional[tuple[np.ndarray, np.ndarray]] = None,
    on_epoch: Optional[Callable[[dict], None]] = None,
) -> Checkpoint:
    """Run ``spec.epochs`` epochs of MLM updates over seeded shuffles of the corpus.

    The input checkpoint is left untouched. ``on_epoch`` receives one record per
    epoch: ``{"epoch", "step", "loss"}`` plus ``"perplexity"`` when ``heldout`` is given.
    """
    ids = np.asarray(ids)
    mask = np.asarray(mask)
    if ids.size and ids.max() >= ckpt.config.vocab_size:
        raise ValueError(f"corpus uses token id {ids.max()} but the model vocabulary has {ckpt.config.vocab_size}")
    out = ckpt.copy()
    out.meta.setdefault("finetune", []).append(
        {"documents": int(len(ids)), **spec.to_dict()}
    )
    n = len(ids)
    for epoch in range(1, spec.epochs + 1):
        order = np.random.default_rng([spec.seed, epoch]).permutation(n)
        weighted, count = 0.0, 0
        for b, start in enumerate(range(0, n, spec.batch_size)):
            rows = order[start : start + spec.batch_size]
            batch = make_batch(ids[rows], mask[rows], spec.mask_prob, [spec.seed, epoch, b, 1], out.config.vocab_size)
            out, loss = train_step(out, batch, spec)
            weighted += loss * batch.num_labels
            count += batch.num_labels
        record = {"epoch": epoch, "step": out.step, "loss": weighted / count if count else 0.0}
        if heldout is not None:
            record["perplexity"] = perplexity(out, heldout[0], heldout[1], spec.mask_prob, spec.seed)
        if on_epoch is not None:
            on_epoch(record)
    return out


def masked_nll(ckpt: Checkpoint, batch: MLMBatch) -> tuple[float, int]:
    """Summed negative log-likelihood over the batch's label positions (no dropout)."""
    if batch.num_labels == 0:
        return 0.0, 0
    ids, mask = _check_inputs(ckpt.config, batch.ids, batch.mask)
    hidden, _, _ = _encode(ckpt.config, ckpt.weights, ids, mask)
    logits, _ = _head(ckpt.weights, hidden[batch.positions[0], batch.positions[1]])
    logp = log_softmax(logits.astype(np.float64))
    return float(-logp[np.arange(batch.num_labels), batch.labels].sum()), batch.num_labels


def perplexity(ckpt: Checkpoint, ids, mask, mask_prob: float = 0.15, seed: int = 0, batch_size: int = 64) -> float:
    """exp of mean cross-entropy over seeded masked positions of a held-out set."""
    ids = np.atleast_2d(np.asarray(ids))
    mask = np.atleast_2d(np.asarray(mask))
    if len(ids) == 0:
        raise ValueError("perplexity needs a non-empty held-out corpus")
    corrupted, positions, labels = mlm_corrupt(ids, mask_prob, seed, ckpt.config.vocab_size)
    if len(labels) == 0:
        raise ValueError("held-out corpus produced no masked positions; nothing to score")
    total, count = 0.0, 0
    rows_all, cols_all = positions
    for start in range(0, len(ids), batch_size):
        sel = (rows_all >= start) & (rows_all < start + batch_size)
        batch = MLMBatch(
            corrupted[start : start + batch_size],
            mask[start : start + batch_size],
            (rows_all[sel] - start, cols_all[sel]),
            labels[sel],
        )
        nll, n = masked_nll(ckpt, batch)
        total += nll
        count += n
    return math.exp(total / count)
