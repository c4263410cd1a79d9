"""Macro-averaged precision/recall/F1 and the linear probe used for extrinsic evaluation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np

from ..encoder.config import TrainSpec
from .clustering import EvaluationError

PROBE_SPEC = TrainSpec(epochs=60, batch_size=16, learning_rate=1e-2, seed=0)


@dataclass
class ClassScores:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass
class MacroMetrics:
    precision: float
    recall: float
    f1: float
    classes: list
    confusion: np.ndarray  # rows gold, columns predicted, in ``classes`` order
    per_class: dict = field(default_factory=dict)


def f1_score(precision: float, recall: float) -> float:
    return 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)


def metrics_from_confusion(confusion, classes: Sequence[Hashable] | None = None) -> MacroMetrics:
    cm = np.asarray(confusion, dtype=np.int64)
    if cm.ndim != 2 or cm.shape[0] != cm.shape[1] or cm.shape[0] == 0:
        raise EvaluationError(f"confusion matrix must be square and non-empty, got shape {cm.shape}")
    classes = list(range(len(cm))) if classes is None else list(classes)
    per_class = {}
    for i, c in enumerate(classes):
        tp = int(cm[i, i])
        predicted = int(cm[:, i].sum())
        actual = int(cm[i, :].sum())
        p = tp / predicted if predicted else 0.0
        r = tp / actual if actual else 0.0
        per_class[c] = ClassScores(p, r, f1_score(p, r), actual)
    k = len(classes)
    return MacroMetrics(
        precision=sum(s.precision for s in per_class.values()) / k,
        recall=sum(s.recall for s in per_class.values()) / k,
        f1=sum(s.f1 for s in per_class.values()) / k,
        classes=classes,
        confusion=cm,
        per_class=per_class,
    )


def macro_metrics(predictions: Sequence[Hashable], gold: Sequence[Hashable], classes=None) -> MacroMetrics:
    """Unweighted class means of per-class precision, recall and F1.

    Classes are the sorted union of gold and predicted labels unless given. A
    class never predicted has precision 0; F1 is 0 when precision + recall is 0.
    """
    if len(predictions) != len(gold):
        raise EvaluationError(f"{len(predictions)} predictions for {len(gold)} gold labels")
    if not len(gold):
        raise EvaluationError("no predictions to score")
    if classes is None:
        classes = sorted(set(gold) | set(predictions), key=str)
    index = {c: i for i, c in enumerate(classes)}
    cm = np.zeros((len(classes), len(classes)), dtype=np.int64)
    for p, g in zip(predictions, gold):
        cm[index[g], index[p]] += 1
    return metrics_from_confusion(cm, classes)


# -- linear probe --------------------------------------------------------------

@dataclass
class LinearProbe:
    weight: np.ndarray  # [dim, n_classes]
    bias: np.ndarray  # [n_classes]
    classes: list

    def logits(self, X) -> np.ndarray:
        return np.asarray(X, dtype=np.float64) @ self.weight + self.bias

    def predict(self, X) -> list:
        return [self.classes[i] for i in self.logits(X).argmax(1)]

    def accuracy(self, X, y) -> float:
        return float(np.mean([p == t for p, t in zip(self.predict(X), y)]))


def train_classifier(X, y: Sequence[Hashable], spec: TrainSpec = PROBE_SPEC) -> LinearProbe:
    """Softmax regression on frozen vectors, trained with Adam for ``spec.epochs`` epochs."""
    X = np.asarray(X, dtype=np.float64)
    if len(X) != len(y) or len(X) == 0:
        raise EvaluationError(f"{len(X)} vectors for {len(y)} labels")
    classes = sorted(set(y), key=str)
    if len(classes) < 2:
        raise EvaluationError("classifier training needs at least two classes")
    index = {c: i for i, c in enumerate(classes)}
    targets = np.array([index[c] for c in y])
    rng = np.random.default_rng(spec.seed)
    W = rng.normal(0.0, 0.01, size=(X.shape[1], len(classes)))
    b = np.zeros(len(classes))
    params = [W, b]
    m = [np.zeros_like(p) for p in params]
    v = [np.zeros_like(p) for p in params]
    b1, b2, eps = 0.9, 0.999, 1e-8
    t = 0
    n = len(X)
    for epoch in range(spec.epochs):
        order = np.random.default_rng([spec.seed, epoch]).permutation(n)
        for start in range(0, n, spec.batch_size):
            rows = order[start : start + spec.batch_size]
            logits = X[rows] @ W + b
            logits -= logits.max(1, keepdims=True)
            probs = np.exp(logits)
            probs /= probs.sum(1, keepdims=True)
            probs[np.arange(len(rows)), targets[rows]] -= 1.0
            probs /= len(rows)
            grads = [X[rows].T @ probs, probs.sum(0)]
            t += 1
            for p, g, mi, vi in zip(params, grads, m, v):
                mi *= b1
                mi += (1 - b1) * g
                vi *= b2
                vi += (1 - b2) * g * g
                p -= spec.learning_rate * (mi / (1 - b1**t)) / (np.sqrt(vi / (1 - b2**t)) + eps)
    if not (np.all(np.isfinite(W)) and np.all(np.isfinite(b))):
        raise EvaluationError("classifier training diverged")
    return LinearProbe(W, b, classes)


def cross_entropy(probe: LinearProbe, X, y) -> float:
    logits = probe.logits(X)
    logits -= logits.max(1, keepdims=True)
    logp = logits - np.log(np.exp(logits).sum(1, keepdims=True))
    idx = [probe.classes.index(c) for c in y]
    return float(-logp[np.arange(len(idx)), idx].mean())

