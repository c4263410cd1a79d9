"""Contextual vectors from a checkpoint: per token, per word (over contexts), per sentence."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .encoder.checkpoint import Checkpoint
from .encoder.model import forward
from .tokenizer import CLS, PAD, SEP, Vocab

POOLINGS = ("mean", "cls")


class EmbeddingError(ValueError):
    pass


@dataclass
class EmbeddingMatrix:
    vectors: np.ndarray  # [n_items, hidden_dim]
    keys: list[str]
    source: str = ""

    def __post_init__(self):
        self.vectors = np.asarray(self.vectors)
        if self.vectors.ndim != 2 or len(self.keys) != self.vectors.shape[0]:
            raise EmbeddingError(
                f"{len(self.keys)} keys do not match a vector matrix of shape {self.vectors.shape}"
            )
        if not np.all(np.isfinite(self.vectors)):
            raise EmbeddingError("embedding matrix contains non-finite values")

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return len(self.keys)


@dataclass
class _Encoded:
    ids: np.ndarray
    mask: np.ndarray
    spans: list[list[tuple[int, int]]]  # per text: word -> [start, end) sequence positions


def _encode_words(texts: Sequence[str], vocab: Vocab, max_len: int) -> _Encoded:
    """Encode like ``tokenizer.encode`` but remember which positions each word occupies.

    Sequences are padded only to the longest text in the batch; outputs at real
    positions do not depend on the amount of padding.
    """
    rows, spans = [], []
    for text in texts:
        pos, row, word_spans = 1, [CLS], []
        for pieces in vocab.segment(text):
            pieces = pieces[: max(0, max_len - 1 - pos)]
            word_spans.append((pos, pos + len(pieces)))
            row.extend(pieces)
            pos += len(pieces)
        row.append(SEP)
        rows.append(row)
        spans.append(word_spans)
    width = max((len(r) for r in rows), default=2)
    ids = np.full((len(rows), width), PAD, dtype=np.int64)
    mask = np.zeros((len(rows), width), dtype=np.int8)
    for i, r in enumerate(rows):
        ids[i, : len(r)] = r
        mask[i, : len(r)] = 1
    return _Encoded(ids, mask, spans)


def _hidden(ckpt: Checkpoint, vocab: Vocab, texts: Sequence[str], batch_size: int = 64):
    max_len = ckpt.config.max_len
    for start in range(0, len(texts), batch_size):
        enc = _encode_words(texts[start : start + batch_size], vocab, max_len)
        out = forward(ckpt.config, ckpt.weights, enc.ids, enc.mask, with_logits=False)
        for i in range(len(enc.ids)):
            yield out.hidden[i], int(enc.mask[i].sum()), enc.spans[i]


def embed_tokens(ckpt: Checkpoint, vocab: Vocab, text: str) -> np.ndarray:
    """Final-layer states at the real subword positions of ``text`` (no CLS/SEP/PAD)."""
    hidden, length, _ = next(_hidden(ckpt, vocab, [text]))
    return hidden[1 : length - 1].copy()


def embed_sentences(
    ckpt: Checkpoint, vocab: Vocab, texts: Sequence[str], pooling: str = "mean", batch_size: int = 64
) -> np.ndarray:
    if pooling not in POOLINGS:
        raise EmbeddingError(f"unknown pooling {pooling!r}; expected one of {POOLINGS}")
    out = np.zeros((len(texts), ckpt.config.hidden_dim), dtype=np.float32)
    for i, (hidden, length, _) in enumerate(_hidden(ckpt, vocab, texts, batch_size)):
        if length <= 2:
            raise EmbeddingError(f"text {i} ({texts[i]!r}) encodes to no real tokens")
        out[i] = hidden[0] if pooling == "cls" else hidden[1 : length - 1].mean(0)
    return out


def embed_sentence(ckpt: Checkpoint, vocab: Vocab, text: str, pooling: str = "mean") -> np.ndarray:
    """Mean (or CLS) of the final-layer states of one sentence."""
    return embed_sentences(ckpt, vocab, [text], pooling)[0]


def embed_word(ckpt: Checkpoint, vocab: Vocab, word: str, contexts: Sequence[str] | None = None) -> np.ndarray:
    return embed_words(ckpt, vocab, [word], {word: list(contexts)} if contexts else None)[0]


def embed_words(
    ckpt: Checkpoint,
    vocab: Vocab,
    words: Sequence[str],
    contexts: dict[str, Sequence[str]] | None = None,
) -> np.ndarray:
    """One vector per word: the mean over all its subword positions in all contexts.

    Words without contexts are embedded on their own, as a one-word sentence.
    Every given context must contain the word as a whitespace-delimited token.
    """
    jobs: list[tuple[int, str, str]] = []
    for wi, word in enumerate(words):
        ctxs = (contexts or {}).get(word) or [word]
        for sentence in ctxs:
            if word not in sentence.split():
                raise EmbeddingError(f"word {word!r} does not occur in context {sentence!r}")
            jobs.append((wi, word, sentence))

    sums = np.zeros((len(words), ckpt.config.hidden_dim), dtype=np.float64)
    counts = np.zeros(len(words), dtype=np.int64)
    sentences = [s for _, _, s in jobs]
    for (wi, word, sentence), (hidden, _, spans) in zip(jobs, _hidden(ckpt, vocab, sentences)):
        for token, (start, end) in zip(sentence.split(), spans):
            if token == word and end > start:
                sums[wi] += hidden[start:end].sum(0)
                counts[wi] += end - start
        if counts[wi] == 0:
            raise EmbeddingError(f"word {word!r} falls outside max_len in context {sentence!r}")
    return (sums / counts[:, None]).astype(np.float32)


def contexts_for(words: Sequence[str], sentences: Sequence[str], limit: int = 5) -> dict[str, list[str]]:
    """First ``limit`` sentences containing each word as a whole token."""
    wanted = set(words)
    found: dict[str, list[str]] = {w: [] for w in words}
    for sentence in sentences:
        for token in set(sentence.split()) & wanted:
            if len(found[token]) < limit:
                found[token].append(sentence)
    return {w: s for w, s in found.items() if s}


# -- vector files --------------------------------------------------------------

def export_vectors(matrix: EmbeddingMatrix, path: str | Path) -> None:
    """Write ``n dim`` then ``key v1 ... vdim`` per line; float32 values round-trip exactly."""
    if len(set(matrix.keys)) != len(matrix.keys):
        dup = next(k for k in matrix.keys if matrix.keys.count(k) > 1)
        raise EmbeddingError(f"duplicate key {dup!r}")
    for key in matrix.keys:
        if not key or any(ch.isspace() for ch in key):
            raise EmbeddingError(f"key {key!r} is empty or contains whitespace")
    vecs = matrix.vectors.astype(np.float32)
    lines = [f"{len(matrix)} {matrix.dim}"]
    for key, row in zip(matrix.keys, vecs):
        lines.append(key + " " + " ".join(format(float(x), ".9g") for x in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def import_vectors(path: str | Path, source: str = "") -> EmbeddingMatrix:
    try:
        lines = Path(path).read_text(encoding="utf-8").split("\n")
    except (OSError, UnicodeDecodeError) as exc:
        raise EmbeddingError(f"cannot read {path}: {exc}") from exc
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise EmbeddingError(f"{path}: empty vector file")
    try:
        n, dim = (int(x) for x in lines[0].split())
    except ValueError:
        raise EmbeddingError(f"{path}: malformed header {lines[0]!r}") from None
    if len(lines) - 1 != n:
        raise EmbeddingError(f"{path}: header declares {n} items, found {len(lines) - 1}")
    keys, rows = [], np.zeros((n, dim), dtype=np.float32)
    for i, line in enumerate(lines[1:]):
        parts = line.split(" ")
        if len(parts) != dim + 1:
            raise EmbeddingError(f"{path}:{i + 2}: expected {dim} values, found {len(parts) - 1}")
        try:
            rows[i] = [float(x) for x in parts[1:]]
        except ValueError:
            raise EmbeddingError(f"{path}:{i + 2}: non-numeric value") from None
        keys.append(parts[0])
    if len(set(keys)) != len(keys):
        raise EmbeddingError(f"{path}: duplicate keys")
    return EmbeddingMatrix(rows, keys, source=source or str(path))
