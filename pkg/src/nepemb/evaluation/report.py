"""Intrinsic (clustering purity) and extrinsic (topic probe) evaluation, and model comparison tables."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from ..embeddings import EmbeddingMatrix, embed_sentences
from ..encoder.checkpoint import Checkpoint, to_bytes
from ..encoder.config import TrainSpec
from ..tokenizer import Vocab
from .clustering import EvaluationError, kmeans, project_2d, purity
from .metrics import PROBE_SPEC, MacroMetrics, macro_metrics, train_classifier

# canonical names of the three word sets, keyed by lower-cased file stem
SET_NAMES = {"sentiment": "Sentiment", "relatedness": "Relatedness", "namedentity": "NamedEntity", "named_entity": "NamedEntity"}
SET_LABELS = {"NamedEntity": "Named Entity"}
ROLES = ("baseline", "candidate", "oracle")

Prepare = Optional[Callable[[str], str]]


# -- labelled data ---------------------------------------------------------------

@dataclass
class LabeledSet:
    """Items (words or sentences) with gold categories, read from ``item<TAB>category`` lines."""

    name: str
    items: list[str]
    labels: list[str]

    def __post_init__(self):
        if len(self.items) != len(self.labels):
            raise EvaluationError(f"set {self.name!r}: {len(self.items)} items for {len(self.labels)} labels")
        if not self.items:
            raise EvaluationError(f"set {self.name!r} is empty")

    @property
    def categories(self) -> list[str]:
        return sorted(set(self.labels))

    @property
    def n_categories(self) -> int:
        return len(self.categories)


def set_name_for(path: str | Path) -> str:
    stem = Path(path).stem
    return SET_NAMES.get(stem.lower(), stem)


def load_labeled_set(path: str | Path, name: str | None = None) -> LabeledSet:
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except (OSError, UnicodeDecodeError) as exc:
        raise EvaluationError(f"cannot read {path}: {exc}") from exc
    items, labels = [], []
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
            raise EvaluationError(f"{path}:{lineno}: expected 'item<TAB>category', got {line!r}")
        items.append(parts[0].strip())
        labels.append(parts[1].strip())
    return LabeledSet(name or set_name_for(path), items, labels)


def checkpoint_id(ckpt: Checkpoint) -> str:
    """Content hash of the weights and config (optimizer state excluded)."""
    bare = Checkpoint(ckpt.config, ckpt.weights, None, ckpt.step, ckpt.format_version, ckpt.meta)
    return hashlib.sha256(to_bytes(bare)).hexdigest()[:12]


def embed_set(
    ckpt: Checkpoint, vocab: Vocab, labeled: LabeledSet, prepare: Prepare = None, pooling: str = "mean"
) -> EmbeddingMatrix:
    """One vector per item: the pooled final-layer states of the (prepared) item text."""
    texts = [prepare(t) if prepare else t for t in labeled.items]
    vectors = embed_sentences(ckpt, vocab, texts, pooling=pooling)
    keys = [f"{i}:{item}" for i, item in enumerate(labeled.items)]
    return EmbeddingMatrix(vectors, keys, source=f"{checkpoint_id(ckpt)}/{pooling}")


# -- intrinsic -------------------------------------------------------------------

@dataclass
class SetClustering:
    items: list[str]
    gold: list[str]
    assignments: np.ndarray
    coords: Optional[np.ndarray]


@dataclass
class IntrinsicReport:
    model_id: str
    per_set_purity: dict[str, float]
    average: float
    clusterings: dict[str, SetClustering] = field(default_factory=dict, repr=False)

    def to_dict(self) -> dict:
        return {"model_id": self.model_id, "per_set_purity": dict(self.per_set_purity), "average": self.average}


def average_purity(values: Sequence[float]) -> float:
    if not len(values):
        raise EvaluationError("no purities to average")
    return float(sum(values) / len(values))


def intrinsic_eval(
    ckpt: Checkpoint,
    vocab: Vocab,
    labeled_sets: Sequence[LabeledSet],
    seed: int = 0,
    *,
    prepare: Prepare = None,
    pooling: str = "mean",
    model_id: str | None = None,
) -> IntrinsicReport:
    """Cluster each set with k = number of gold categories and score purity."""
    if not labeled_sets:
        raise EvaluationError("intrinsic evaluation needs at least one labelled set")
    scores, clusterings = {}, {}
    for labeled in labeled_sets:
        matrix = embed_set(ckpt, vocab, labeled, prepare, pooling)
        result = kmeans(matrix.vectors, labeled.n_categories, seed=seed)
        scores[labeled.name] = purity(result.labels, labeled.labels)
        try:
            coords = project_2d(matrix.vectors).coords
        except EvaluationError:
            coords = None  # too few or identical points to project
        clusterings[labeled.name] = SetClustering(list(labeled.items), list(labeled.labels), result.labels, coords)
    return IntrinsicReport(
        model_id or checkpoint_id(ckpt), scores, average_purity(list(scores.values())), clusterings
    )


# -- extrinsic -------------------------------------------------------------------

@dataclass
class ExtrinsicReport:
    model_id: str
    precision: float
    recall: float
    f1: float
    classes: list[str]
    per_class: dict[str, dict[str, float]]
    confusion: list[list[int]]
    epochs: int

    @classmethod
    def from_metrics(cls, metrics: MacroMetrics, model_id: str, epochs: int) -> "ExtrinsicReport":
        per_class = {
            str(c): {"precision": s.precision, "recall": s.recall, "f1": s.f1, "support": s.support}
            for c, s in metrics.per_class.items()
        }
        return cls(
            model_id,
            metrics.precision,
            metrics.recall,
            metrics.f1,
            [str(c) for c in metrics.classes],
            per_class,
            metrics.confusion.tolist(),
            epochs,
        )

    def to_dict(self) -> dict:
        return {
            "model_id": self.model_id,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "classes": self.classes,
            "per_class": self.per_class,
            "confusion": self.confusion,
            "epochs": self.epochs,
        }


def extrinsic_eval(
    ckpt: Checkpoint,
    vocab: Vocab,
    train: LabeledSet,
    test: LabeledSet,
    spec: TrainSpec = PROBE_SPEC,
    *,
    prepare: Prepare = None,
    pooling: str = "mean",
    model_id: str | None = None,
) -> ExtrinsicReport:
    """Train a linear probe on frozen train-sentence vectors and score it on the test sentences."""
    X_train = embed_set(ckpt, vocab, train, prepare, pooling).vectors
    X_test = embed_set(ckpt, vocab, test, prepare, pooling).vectors
    probe = train_classifier(X_train, train.labels, spec)
    classes = sorted(set(train.labels) | set(test.labels))
    metrics = macro_metrics(probe.predict(X_test), test.labels, classes=classes)
    return ExtrinsicReport.from_metrics(metrics, model_id or checkpoint_id(ckpt), spec.epochs)


# -- comparison and rendering ----------------------------------------------------

def deviation(candidate: float, baseline: float) -> str:
    """Gap in percentage points, e.g. 0.76 against 0.53 is a "23% lead"."""
    points = round((candidate - baseline) * 100)
    if points == 0:
        return "0% gap"
    return f"{abs(points)}% {'lead' if points > 0 else 'lag'}"


def winners(rows: dict[str, dict[str, float]], columns: Sequence[str]) -> dict[str, list[str]]:
    """Per column, every model attaining the maximum value."""
    out = {}
    for col in columns:
        best = max(r[col] for r in rows.values())
        out[col] = [name for name, r in rows.items() if r[col] == best]
    return out


def _table(title_col: str, columns: Sequence[str], labels: Sequence[str], rows: dict[str, dict[str, float]]) -> str:
    header = [title_col, *labels]
    body = [[name, *(f"{r[c]:.2f}" for c in columns)] for name, r in rows.items()]
    widths = [max(len(line[i]) for line in [header, *body]) for i in range(len(header))]

    def fmt(line):
        return "  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip()

    return "\n".join([fmt(header), fmt(["-" * w for w in widths]), *map(fmt, body)]) + "\n"


def intrinsic_table(reports: dict[str, IntrinsicReport]) -> tuple[list[str], dict[str, dict[str, float]]]:
    sets = list(next(iter(reports.values())).per_set_purity)
    rows = {name: {**r.per_set_purity, "Average": r.average} for name, r in reports.items()}
    return [*sets, "Average"], rows


def extrinsic_table(reports: dict[str, ExtrinsicReport]) -> tuple[list[str], dict[str, dict[str, float]]]:
    rows = {name: {"Precision": r.precision, "Recall": r.recall, "F1-Score": r.f1} for name, r in reports.items()}
    return ["Precision", "Recall", "F1-Score"], rows


def render_intrinsic(reports: dict[str, IntrinsicReport]) -> str:
    columns, rows = intrinsic_table(reports)
    return _table("Model", columns, [SET_LABELS.get(c, c) for c in columns], rows)


def render_extrinsic(reports: dict[str, ExtrinsicReport]) -> str:
    columns, rows = extrinsic_table(reports)
    return _table("Model", columns, columns, rows)


@dataclass
class ComparisonReport:
    intrinsic: dict[str, IntrinsicReport]
    extrinsic: dict[str, ExtrinsicReport]

    def _section(self, columns, rows, reports):
        section = {
            "columns": columns,
            "rows": {name: {"model_id": reports[name].model_id, **rows[name]} for name in rows},
            "winners": winners(rows, columns),
        }
        if "baseline" in rows and "candidate" in rows:
            section["deviations"] = {
                c: deviation(rows["candidate"][c], rows["baseline"][c]) for c in columns
            }
        return section

    def to_dict(self) -> dict:
        out = {}
        if self.intrinsic:
            out["intrinsic"] = self._section(*intrinsic_table(self.intrinsic), self.intrinsic)
        if self.extrinsic:
            out["extrinsic"] = self._section(*extrinsic_table(self.extrinsic), self.extrinsic)
            out["extrinsic"]["details"] = {name: r.to_dict() for name, r in self.extrinsic.items()}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        data = self.to_dict()
        parts = []
        for key, render, title in (
            ("intrinsic", render_intrinsic, "Intrinsic evaluation (purity)"),
            ("extrinsic", render_extrinsic, "Extrinsic evaluation (macro metrics)"),
        ):
            if key not in data:
                continue
            section = data[key]
            lines = [title, "", render(getattr(self, key))]
            lines.append("winners: " + ", ".join(
                f"{SET_LABELS.get(c, c)}={'/'.join(w)}" for c, w in section["winners"].items()
            ))
            if "deviations" in section:
                lines.append("candidate vs baseline: " + ", ".join(
                    f"{SET_LABELS.get(c, c)} {d}" for c, d in section["deviations"].items()
                ))
            parts.append("\n".join(lines))
        return "\n\n".join(parts) + "\n"


def compare_models(
    models: dict[str, tuple[Checkpoint, Vocab]],
    labeled_sets: Sequence[LabeledSet],
    classification: tuple[LabeledSet, LabeledSet] | None = None,
    seed: int = 0,
    *,
    spec: TrainSpec = PROBE_SPEC,
    prepare: Prepare = None,
    pooling: str = "mean",
) -> ComparisonReport:
    """Evaluate each role's checkpoint with its own vocabulary on the same data.

    ``models`` maps a role (``baseline``, ``candidate``, ``oracle``) to its
    checkpoint and vocabulary; roles are reported in that order.
    """
    if not models:
        raise EvaluationError("compare_models needs at least one model")
    unknown = set(models) - set(ROLES)
    if unknown:
        raise EvaluationError(f"unknown model roles {sorted(unknown)}; expected a subset of {ROLES}")
    ordered = [r for r in ROLES if r in models]
    intrinsic = {
        role: intrinsic_eval(*models[role], labeled_sets, seed, prepare=prepare, pooling=pooling) for role in ordered
    } if labeled_sets else {}
    extrinsic = {}
    if classification is not None:
        train, test = classification
        extrinsic = {role: extrinsic_eval(*models[role], train, test, spec, prepare=prepare, pooling=pooling) for role in ordered}
    return ComparisonReport(intrinsic, extrinsic)
