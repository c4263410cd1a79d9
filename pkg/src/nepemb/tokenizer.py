"""Subword vocabulary: frequency-greedy pair merging and greedy longest-match encoding."""

from __future__ import annotations

import heapq
from collections import Counter, defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

PAD, UNK, CLS, SEP, MASK = 0, 1, 2, 3, 4
SPECIAL_TOKENS = ("[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]")
NUM_SPECIALS = len(SPECIAL_TOKENS)
CONTINUATION = "##"
DEFAULT_MAX_LEN = 128
DEFAULT_VOCAB_SIZE = 16000


class VocabError(Exception):
    pass


class Vocab:
    """Immutable token list; id is the position in the list."""

    def __init__(self, tokens: Sequence[str], continuation_marker: str = CONTINUATION):
        tokens = tuple(tokens)
        if tokens[:NUM_SPECIALS] != SPECIAL_TOKENS:
            raise VocabError(f"vocabulary must start with {SPECIAL_TOKENS}")
        index = {}
        for i, tok in enumerate(tokens):
            if not tok or any(ch.isspace() for ch in tok):
                raise VocabError(f"invalid token {tok!r} at id {i}")
            if tok in index:
                raise VocabError(f"duplicate token {tok!r} at ids {index[tok]} and {i}")
            index[tok] = i
        self.tokens = tokens
        self.continuation_marker = continuation_marker
        self._index = index
        self._max_piece = max((len(t) for t in tokens[NUM_SPECIALS:]), default=1)

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Vocab) and self.tokens == other.tokens

    def id(self, token: str) -> int:
        return self._index.get(token, UNK)

    def save(self, path: str | Path) -> None:
        Path(path).write_text("".join(t + "\n" for t in self.tokens), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "Vocab":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise VocabError(f"cannot read vocabulary {path}: {exc}") from exc
        return cls(text.split("\n")[:-1] if text.endswith("\n") else text.split("\n"))

    # -- segmentation ------------------------------------------------------

    def segment_word(self, word: str) -> list[int]:
        """Greedy longest-match pieces; an unmatched codepoint becomes UNK."""
        ids, i, n = [], 0, len(word)
        marker = self.continuation_marker
        while i < n:
            prefix = marker if i > 0 else ""
            for j in range(min(n, i + self._max_piece), i, -1):
                tok_id = self._index.get(prefix + word[i:j])
                if tok_id is not None and tok_id >= NUM_SPECIALS:
                    ids.append(tok_id)
                    i = j
                    break
            else:
                ids.append(UNK)
                i += 1
        return ids

    def segment(self, text: str) -> list[list[int]]:
        """Per-word piece ids of whitespace-split text."""
        return [self.segment_word(w) for w in text.split()]


def _alphabet(word_counts: Counter) -> list[str]:
    symbols = set()
    for word in word_counts:
        symbols.update(word)
        symbols.update(CONTINUATION + ch for ch in word[1:])
    return sorted(symbols)


def min_vocab_size(texts: Iterable[str]) -> int:
    counts = Counter(w for t in texts for w in t.split())
    return NUM_SPECIALS + len(_alphabet(counts))


def train_vocab(texts: Iterable[str], vocab_size: int = DEFAULT_VOCAB_SIZE) -> Vocab:
    """Learn merges by repeatedly joining the most frequent adjacent symbol pair.

    Every codepoint of the corpus is in the initial alphabet (bare form, plus the
    continuation form for codepoints seen word-internally). Ties between equally
    frequent pairs go to the lexicographically smallest pair.
    """
    word_counts = Counter(w for t in texts for w in t.split())
    if not word_counts:
        raise VocabError("cannot train a vocabulary on an empty corpus")
    alphabet = _alphabet(word_counts)
    minimum = NUM_SPECIALS + len(alphabet)
    if vocab_size < minimum:
        raise VocabError(f"vocab_size {vocab_size} is below the minimum {minimum} (specials + alphabet)")

    tokens = list(SPECIAL_TOKENS) + alphabet
    known = set(tokens)
    words = sorted(word_counts)
    freqs = [word_counts[w] for w in words]
    splits = [[w[0]] + [CONTINUATION + ch for ch in w[1:]] for w in words]

    pair_counts: Counter = Counter()
    where: dict[tuple[str, str], set[int]] = defaultdict(set)
    for wi, syms in enumerate(splits):
        for pair in zip(syms, syms[1:]):
            pair_counts[pair] += freqs[wi]
            where[pair].add(wi)

    heap = [(-c, p) for p, c in pair_counts.items()]
    heapq.heapify(heap)
    while len(tokens) < vocab_size:
        while heap:
            neg, pair = heapq.heappop(heap)
            if pair_counts.get(pair, 0) == -neg > 0:
                break
        else:
            break
        a, b = pair
        merged = a + b[len(CONTINUATION):]
        if merged not in known:
            tokens.append(merged)
            known.add(merged)
        touched = set()
        for wi in sorted(where.pop(pair, ())):
            syms = splits[wi]
            for p in zip(syms, syms[1:]):
                pair_counts[p] -= freqs[wi]
                touched.add(p)
            out, i = [], 0
            while i < len(syms):
                if i + 1 < len(syms) and syms[i] == a and syms[i + 1] == b:
                    out.append(merged)
                    i += 2
                else:
                    out.append(syms[i])
                    i += 1
            splits[wi] = out
            for p in zip(out, out[1:]):
                pair_counts[p] += freqs[wi]
                where[p].add(wi)
                touched.add(p)
        pair_counts.pop(pair, None)
        touched.discard(pair)
        for p in touched:
            if pair_counts[p] > 0:
                heapq.heappush(heap, (-pair_counts[p], p))
    return Vocab(tokens)


@dataclass
class Encoding:
    ids: np.ndarray  # int64 [max_len]
    mask: np.ndarray  # int8 [max_len]


def encode(text: str, vocab: Vocab, max_len: int = DEFAULT_MAX_LEN) -> Encoding:
    """``[CLS] pieces [SEP]`` truncated to ``max_len`` (SEP kept last) and PAD-filled."""
    if max_len < 2:
        raise VocabError("max_len must leave room for [CLS] and [SEP]")
    pieces = [i for word in vocab.segment(text) for i in word][: max_len - 2]
    real = [CLS, *pieces, SEP]
    ids = np.full(max_len, PAD, dtype=np.int64)
    ids[: len(real)] = real
    mask = np.zeros(max_len, dtype=np.int8)
    mask[: len(real)] = 1
    return Encoding(ids, mask)


def encode_batch(texts: Sequence[str], vocab: Vocab, max_len: int = DEFAULT_MAX_LEN) -> tuple[np.ndarray, np.ndarray]:
    encs = [encode(t, vocab, max_len) for t in texts]
    if not encs:
        return np.zeros((0, max_len), dtype=np.int64), np.zeros((0, max_len), dtype=np.int8)
    return np.stack([e.ids for e in encs]), np.stack([e.mask for e in encs])


def decode(ids: Iterable[int], vocab: Vocab) -> str:
    """Inverse of ``encode`` for in-vocabulary text: specials dropped, pieces rejoined."""
    words: list[str] = []
    marker = vocab.continuation_marker
    for raw in ids:
        i = int(raw)
        if not 0 <= i < len(vocab):
            raise VocabError(f"token id {i} out of range for vocabulary of size {len(vocab)}")
        if i < NUM_SPECIALS:
            continue
        tok = vocab.tokens[i]
        if tok.startswith(marker) and len(tok) > len(marker):
            if words:
                words[-1] += tok[len(marker):]
            else:
                words.append(tok[len(marker):])
        else:
            words.append(tok)
    return " ".join(words)
