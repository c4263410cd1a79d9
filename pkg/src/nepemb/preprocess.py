"""Preprocessing stages: Hindi-lexicon filtering, vowel-sign standardization, suffix splitting."""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import Corpus, CorpusError, Document, Stage


class PreprocessError(Exception):
    pass


def _data_lines(path: str | Path | None, default: str) -> list[str]:
    if path is None:
        text = resources.files("nepemb.data").joinpath(default).read_text(encoding="utf-8")
    else:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise PreprocessError(f"cannot read {path}: {exc}") from exc
    return [line for line in text.split("\n") if line.strip() and not line.startswith("#")]


def _nfc(s: str) -> str:
    return unicodedata.normalize("NFC", s)


# -- tokenisation of words for matching ---------------------------------------

def _is_boundary(ch: str) -> bool:
    return ch.isspace() or unicodedata.category(ch)[0] in "PSZ"


def words(text: str) -> list[str]:
    """Split on whitespace and punctuation/symbol characters (danda included)."""
    out, cur = [], []
    for ch in text:
        if _is_boundary(ch):
            if cur:
                out.append("".join(cur))
                cur = []
        else:
            cur.append(ch)
    if cur:
        out.append("".join(cur))
    return out


# -- Hindi lexicon filter -------------------------------------------------------

@dataclass(frozen=True)
class HindiLexicon:
    entries: tuple[str, ...]

    def __post_init__(self):
        seen = set()
        for entry in self.entries:
            if not entry or any(ch.isspace() for ch in entry):
                raise PreprocessError(f"invalid lexicon entry {entry!r}")
            if entry in seen:
                raise PreprocessError(f"duplicate lexicon entry {entry!r}")
            seen.add(entry)

    @classmethod
    def load(cls, path: str | Path | None = None) -> "HindiLexicon":
        return cls(tuple(_nfc(line.strip()) for line in _data_lines(path, "hindi_lexicon.txt")))

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class FilterDecision:
    keep: bool
    matched: tuple[str, ...] = ()


def filter_non_nepali(doc: Document | str, lexicon: HindiLexicon) -> FilterDecision:
    """Drop the document iff some whole word equals a lexicon entry.

    Matching is done on the NFC form of both sides; matched words are reported
    in order of first occurrence.
    """
    text = doc.text if isinstance(doc, Document) else doc
    entries = set(lexicon.entries)
    matched: list[str] = []
    for word in words(_nfc(text)):
        if word in entries and word not in matched:
            matched.append(word)
    return FilterDecision(keep=not matched, matched=tuple(matched))


# -- standardization -----------------------------------------------------------

# dependent vowel signs U+093A..U+094C (minus nukta/avagraha), U+094E/F, U+0955..7, U+0962/3
_VOWEL_SIGNS = "\u093a\u093b\u093e-\u094c\u094e\u094f\u0955-\u0957\u0962\u0963"
_REPEATED_SIGN = re.compile(f"([{_VOWEL_SIGNS}])\\1+")


@dataclass(frozen=True)
class NormalizationMap:
    rules: tuple[tuple[str, str], ...]

    def __post_init__(self):
        for pattern, replacement in self.rules:
            if not pattern:
                raise PreprocessError("normalization rule with empty pattern")
            if len(replacement) > len(pattern):
                raise PreprocessError(f"rule {pattern!r} -> {replacement!r} expands text")

    @classmethod
    def load(cls, path: str | Path | None = None) -> "NormalizationMap":
        rules = []
        for line in _data_lines(path, "normalization_map.tsv"):
            pattern, sep, replacement = line.partition("\t")
            if not sep:
                raise PreprocessError(f"normalization rule without a tab: {line!r}")
            rules.append((_nfc(pattern), _nfc(replacement) if replacement else ""))
        return cls(tuple(rules))


def _standardize_once(text: str, rules: Sequence[tuple[str, str]]) -> str:
    text = _nfc(text)
    for pattern, replacement in rules:
        text = text.replace(pattern, replacement)
    return _REPEATED_SIGN.sub(r"\1", text)


def standardize(text: str, nmap: NormalizationMap) -> str:
    """NFC, then the map's rules, then collapse runs of one repeated vowel sign.

    The composition is iterated to a fixpoint so the result is idempotent
    whatever rule interactions the map contains.
    """
    for _ in range(16):
        out = _standardize_once(text, nmap.rules)
        if out == text:
            return out
        text = out
    raise PreprocessError("normalization map does not converge")


# -- suffix splitting ----------------------------------------------------------

@dataclass(frozen=True)
class SuffixTable:
    suffixes: tuple[str, ...]
    min_stem_len: int = 2
    max_strips: int = 2

    def __post_init__(self):
        if self.min_stem_len < 1:
            raise PreprocessError("min_stem_len must be positive")
        if len(set(self.suffixes)) != len(self.suffixes):
            raise PreprocessError("duplicate suffix in table")
        if any(not s for s in self.suffixes):
            raise PreprocessError("empty suffix in table")

    @classmethod
    def load(cls, path: str | Path | None = None, min_stem_len: int = 2, max_strips: int = 2) -> "SuffixTable":
        entries = tuple(_nfc(line.strip()) for line in _data_lines(path, "suffixes.txt"))
        return cls(entries, min_stem_len=min_stem_len, max_strips=max_strips)


def lexical_split(word: str, table: SuffixTable) -> list[str]:
    """Split trailing postpositions off a word: ``[stem, suffix, ...]``.

    Right to left, the longest table suffix that leaves at least
    ``min_stem_len`` codepoints of stem is stripped, at most ``max_strips`` times.
    """
    by_length = sorted(table.suffixes, key=len, reverse=True)
    stem, stripped = word, []
    for _ in range(table.max_strips):
        for suffix in by_length:
            if stem.endswith(suffix) and len(stem) - len(suffix) >= table.min_stem_len:
                stripped.append(suffix)
                stem = stem[: -len(suffix)]
                break
        else:
            break
    return [stem, *reversed(stripped)]


def lex_text(text: str, table: SuffixTable) -> str:
    return " ".join(tok for word in text.split() for tok in lexical_split(word, table))


# -- pipeline ------------------------------------------------------------------

@dataclass
class StageCount:
    input: int = 0
    kept: int = 0
    dropped: int = 0

    def to_dict(self) -> dict[str, int]:
        return {"input": self.input, "kept": self.kept, "dropped": self.dropped}


@dataclass
class PipelineReport:
    filter: StageCount = field(default_factory=StageCount)
    standardize: StageCount = field(default_factory=StageCount)
    lex: StageCount = field(default_factory=StageCount)
    dropped: dict[str, list[str]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "filter": self.filter.to_dict(),
            "standardize": self.standardize.to_dict(),
            "lex": self.lex.to_dict(),
            "dropped": {k: list(v) for k, v in self.dropped.items()},
        }


def process_document(
    doc: Document, lexicon: HindiLexicon, nmap: NormalizationMap, table: SuffixTable
) -> tuple[Document | None, FilterDecision]:
    if doc.stage is not Stage.RAW:
        raise CorpusError(f"document {doc.id} is at stage {doc.stage.value}, expected raw")
    decision = filter_non_nepali(doc, lexicon)
    if not decision.keep:
        return None, decision
    doc = doc.advance(Stage.FILTERED)
    doc = doc.advance(Stage.STANDARDIZED, standardize(doc.text, nmap))
    doc = doc.advance(Stage.LEXED, lex_text(doc.text, table))
    return doc, decision


def run_pipeline(
    corpus: Corpus | Iterable[Document],
    lexicon: HindiLexicon | None = None,
    nmap: NormalizationMap | None = None,
    table: SuffixTable | None = None,
) -> tuple[Corpus, PipelineReport]:
    """Filter, standardize and split every raw document; survivors end at stage Lexed."""
    lexicon = lexicon or HindiLexicon.load()
    nmap = nmap or NormalizationMap.load()
    table = table or SuffixTable.load()
    name = corpus.name if isinstance(corpus, Corpus) else "corpus"
    out = Corpus(name=name)
    report = PipelineReport()
    for doc in corpus:
        processed, decision = process_document(doc, lexicon, nmap, table)
        report.filter.input += 1
        if processed is None:
            report.filter.dropped += 1
            report.dropped[doc.id] = list(decision.matched)
            continue
        report.filter.kept += 1
        for stage in (report.standardize, report.lex):
            stage.input += 1
            stage.kept += 1
        out.add(processed)
    return out, report
