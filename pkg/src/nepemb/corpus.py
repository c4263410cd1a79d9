"""Document store: ingestion of newline-delimited text, persistence, and corpus accounting."""

from __future__ import annotations

import enum
import hashlib
import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Iterator


class CorpusError(Exception):
    """Raised for unreadable inputs, id collisions and malformed corpus directories."""


class SourceCategory(str, enum.Enum):
    REGULATED = "regulated"
    UNREGULATED = "unregulated"

    @classmethod
    def parse(cls, value: str | "SourceCategory") -> "SourceCategory":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise CorpusError(f"unknown source category {value!r}") from None


class Stage(str, enum.Enum):
    RAW = "raw"
    FILTERED = "filtered"
    STANDARDIZED = "standardized"
    LEXED = "lexed"

    @property
    def rank(self) -> int:
        return _STAGE_ORDER.index(self)


_STAGE_ORDER = [Stage.RAW, Stage.FILTERED, Stage.STANDARDIZED, Stage.LEXED]


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    source_category: SourceCategory
    origin: str
    stage: Stage = Stage.RAW

    def advance(self, stage: Stage, text: str | None = None) -> "Document":
        """Return a copy moved to a later stage, optionally with new text."""
        if stage.rank <= self.stage.rank:
            raise CorpusError(
                f"document {self.id}: cannot move from {self.stage.value} to {stage.value}"
            )
        return replace(self, stage=stage, text=self.text if text is None else text)


@dataclass(frozen=True)
class CorpusStats:
    word_token_count: int
    word_type_count: int
    document_count: int

    def to_dict(self) -> dict[str, int]:
        return {
            "word_token_count": self.word_token_count,
            "word_type_count": self.word_type_count,
            "document_count": self.document_count,
        }


@dataclass
class IngestResult:
    ids: list[str]
    rejects: int = 0
    rejected_lines: list[str] = field(default_factory=list)


class Corpus:
    """An ordered, id-unique collection of documents."""

    def __init__(self, documents: Iterable[Document] = (), name: str = "corpus"):
        self.name = name
        self._docs: dict[str, Document] = {}
        for doc in documents:
            self.add(doc)

    def add(self, doc: Document) -> None:
        if doc.id in self._docs:
            raise CorpusError(f"duplicate document id {doc.id!r}")
        self._docs[doc.id] = doc

    def replace(self, doc: Document) -> None:
        if doc.id not in self._docs:
            raise CorpusError(f"unknown document id {doc.id!r}")
        self._docs[doc.id] = doc

    def __len__(self) -> int:
        return len(self._docs)

    def __iter__(self) -> Iterator[Document]:
        return iter(self._docs.values())

    def __getitem__(self, doc_id: str) -> Document:
        return self._docs[doc_id]

    def __contains__(self, doc_id: object) -> bool:
        return doc_id in self._docs

    @property
    def ids(self) -> list[str]:
        return list(self._docs)

    def texts(self) -> list[str]:
        return [d.text for d in self._docs.values()]

    def filter(self, category: SourceCategory | str) -> "Corpus":
        category = SourceCategory.parse(category)
        return Corpus((d for d in self if d.source_category is category), name=self.name)

    def stats(self) -> CorpusStats:
        return corpus_stats(self)

    def stats_by_stage(self) -> dict[str, CorpusStats]:
        out = {}
        for stage in _STAGE_ORDER:
            docs = [d for d in self if d.stage is stage]
            if docs:
                out[stage.value] = corpus_stats(docs)
        return out

    def save(self, directory: str | Path) -> Path:
        return save_corpus(self, directory)

    @classmethod
    def load(cls, directory: str | Path) -> "Corpus":
        return load_corpus(directory)


def _doc_id(category: SourceCategory, origin: str, lineno: int) -> str:
    digest = hashlib.sha1(f"{origin}\0{lineno}".encode("utf-8")).hexdigest()[:16]
    return f"{category.value[0]}-{digest}"


def _input_files(path: Path) -> list[Path]:
    if path.is_dir():
        return sorted(p for p in path.rglob("*") if p.is_file() and not p.name.startswith("."))
    if path.is_file():
        return [path]
    raise CorpusError(f"cannot read {path}: no such file or directory")


def ingest(
    path: str | Path,
    source_category: SourceCategory | str,
    corpus: Corpus | None = None,
) -> tuple[Corpus, IngestResult]:
    """Read one document per non-empty line from a file or a directory of files.

    Lines that are not valid UTF-8 are skipped and counted in ``rejects``.
    Documents are appended to ``corpus`` (a fresh one if omitted).
    """
    category = SourceCategory.parse(source_category)
    corpus = Corpus() if corpus is None else corpus
    result = IngestResult(ids=[])
    for file in _input_files(Path(path)):
        try:
            raw = file.read_bytes()
        except OSError as exc:
            raise CorpusError(f"cannot read {file}: {exc}") from exc
        origin = str(file)
        for lineno, line in enumerate(raw.split(b"\n"), start=1):
            try:
                text = line.decode("utf-8")
            except UnicodeDecodeError:
                result.rejects += 1
                result.rejected_lines.append(f"{origin}:{lineno}")
                continue
            text = text.strip()
            if not text:
                continue
            doc = Document(
                id=_doc_id(category, origin, lineno),
                text=text,
                source_category=category,
                origin=f"{origin}:{lineno}",
            )
            corpus.add(doc)
            result.ids.append(doc.id)
    return corpus, result


def corpus_stats(documents: Iterable[Document]) -> CorpusStats:
    """Whitespace-token and distinct-type counts over the documents' current text."""
    tokens = 0
    types: set[str] = set()
    n_docs = 0
    for doc in documents:
        words = doc.text.split()
        tokens += len(words)
        types.update(words)
        n_docs += 1
    return CorpusStats(tokens, len(types), n_docs)


def merge(a: Corpus, b: Corpus, name: str | None = None) -> Corpus:
    """Union of two corpora with disjoint ids; order is a's documents then b's."""
    clash = next((doc_id for doc_id in b.ids if doc_id in a), None)
    if clash is not None:
        raise CorpusError(f"cannot merge: document id {clash!r} present in both corpora")
    return Corpus([*a, *b], name=name or a.name)


# -- persistence -----------------------------------------------------------

META_FILE = "metadata.json"


def save_corpus(corpus: Corpus, directory: str | Path) -> Path:
    """Write ``<stage>.txt`` files (one document per line) plus a metadata sidecar.

    Within each stage file, line order follows the order of ``documents`` in the
    sidecar restricted to that stage.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for stale in directory.glob("*.txt"):
        stale.unlink()
    by_stage: dict[Stage, list[str]] = {}
    meta = []
    for doc in corpus:
        if "\n" in doc.text:
            raise CorpusError(f"document {doc.id} contains a newline")
        by_stage.setdefault(doc.stage, []).append(doc.text)
        meta.append(
            {
                "id": doc.id,
                "source_category": doc.source_category.value,
                "origin": doc.origin,
                "stage": doc.stage.value,
            }
        )
    for stage, lines in by_stage.items():
        (directory / f"{stage.value}.txt").write_text(
            "".join(line + "\n" for line in lines), encoding="utf-8"
        )
    (directory / META_FILE).write_text(
        json.dumps({"name": corpus.name, "documents": meta}, ensure_ascii=False, indent=1) + "\n",
        encoding="utf-8",
    )
    return directory


def load_corpus(directory: str | Path) -> Corpus:
    directory = Path(directory)
    meta_path = directory / META_FILE
    if not meta_path.is_file():
        raise CorpusError(f"{directory} is not a corpus directory (missing {META_FILE})")
    try:
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        entries = meta["documents"]
    except (ValueError, KeyError) as exc:
        raise CorpusError(f"malformed {meta_path}: {exc}") from exc

    lines: dict[Stage, Iterator[str]] = {}
    for stage in _STAGE_ORDER:
        path = directory / f"{stage.value}.txt"
        if path.is_file():
            text = path.read_text(encoding="utf-8")
            lines[stage] = iter(text.split("\n")[:-1] if text else [])

    corpus = Corpus(name=meta.get("name", directory.name))
    for entry in entries:
        stage = Stage(entry["stage"])
        try:
            text = next(lines[stage])
        except (KeyError, StopIteration):
            raise CorpusError(f"{directory}: missing text for document {entry['id']}") from None
        corpus.add(
            Document(
                id=entry["id"],
                text=text,
                source_category=SourceCategory(entry["source_category"]),
                origin=entry["origin"],
                stage=stage,
            )
        )
    for stage, rest in lines.items():
        if next(rest, None) is not None:
            raise CorpusError(f"{directory}: {stage.value}.txt has more lines than metadata entries")
    return corpus
