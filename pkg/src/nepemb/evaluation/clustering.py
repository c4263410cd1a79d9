"""k-means, purity and the 2-D PCA projection used for cluster plots."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Hashable, Sequence

import numpy as np


class EvaluationError(ValueError):
    pass


@dataclass
class KMeansResult:
    labels: np.ndarray
    centroids: np.ndarray
    wcss: float
    n_iter: int
    history: list[float] = field(default_factory=list)  # WCSS after each update, best restart


def _sq_dist(X, C):
    d = (X * X).sum(1)[:, None] - 2.0 * X @ C.T + (C * C).sum(1)[None, :]
    return np.maximum(d, 0.0)


def _plus_plus(X, k, rng):
    n = len(X)
    centers = [int(rng.integers(n))]
    closest = _sq_dist(X, X[centers])[:, 0]
    for _ in range(1, k):
        total = closest.sum()
        if total > 0:
            idx = int(rng.choice(n, p=closest / total))
        else:
            idx = int(rng.choice(np.setdiff1d(np.arange(n), centers)))
        centers.append(idx)
        closest = np.minimum(closest, _sq_dist(X, X[[idx]])[:, 0])
    return X[centers].copy()


def _lloyd(X, centroids, max_iter):
    labels = None
    history = []
    it = 0
    for it in range(1, max_iter + 1):
        new = _sq_dist(X, centroids).argmin(1)
        if labels is not None and np.array_equal(new, labels):
            it -= 1
            break
        labels = new
        for j in range(len(centroids)):
            members = X[labels == j]
            if len(members):
                centroids[j] = members.mean(0)
        history.append(float(((X - centroids[labels]) ** 2).sum()))
    return labels, centroids, history, it


def kmeans(vectors, k: int, seed: int = 0, n_init: int = 10, max_iter: int = 300) -> KMeansResult:
    """Lloyd's algorithm from k-means++ seeds; the restart with the lowest WCSS wins.

    Iteration stops at an assignment fixpoint or after ``max_iter`` rounds.
    """
    X = np.asarray(vectors, dtype=np.float64)
    if X.ndim != 2 or len(X) == 0:
        raise EvaluationError("kmeans needs a non-empty [n_items, dim] matrix")
    n = len(X)
    if not 1 <= k <= n:
        raise EvaluationError(f"k={k} must lie between 1 and the number of items ({n})")
    if k == n:
        return KMeansResult(np.arange(n), X.copy(), 0.0, 0, [0.0])
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(n_init):
        labels, centroids, history, it = _lloyd(X, _plus_plus(X, k, rng), max_iter)
        wcss = history[-1]
        if best is None or wcss < best.wcss:
            best = KMeansResult(labels, centroids, wcss, it, history)
    return best


def purity(assignments: Sequence[Hashable], gold: Sequence[Hashable]) -> float:
    """Fraction of items carrying their cluster's majority gold label."""
    if len(assignments) != len(gold):
        raise EvaluationError(f"{len(assignments)} assignments for {len(gold)} gold labels")
    if not len(gold):
        raise EvaluationError("purity of an empty clustering is undefined")
    members: dict[Hashable, Counter] = defaultdict(Counter)
    for a, g in zip(assignments, gold):
        members[_hashable(a)][g] += 1
    return sum(max(c.values()) for c in members.values()) / len(gold)


def _hashable(x):
    return x.item() if isinstance(x, np.generic) else x


@dataclass
class Projection:
    coords: np.ndarray  # [n_items, 2]
    components: np.ndarray  # [2, dim]
    explained_variance: np.ndarray  # [2]
    mean: np.ndarray


def project_2d(vectors) -> Projection:
    """Top-two principal components with a fixed sign convention.

    Each component is oriented so its largest-magnitude loading is positive,
    which makes the output independent of the SVD routine's sign choice.
    """
    X = np.asarray(vectors, dtype=np.float64)
    if X.ndim != 2 or len(X) < 3:
        raise EvaluationError("projection needs at least 3 items")
    if len(np.unique(X, axis=0)) < 2:
        raise EvaluationError("projection needs at least 2 distinct points")
    mean = X.mean(0)
    Xc = X - mean
    _, s, vt = np.linalg.svd(Xc, full_matrices=False)
    comps = np.zeros((2, X.shape[1]))
    var = np.zeros(2)
    for i in range(min(2, len(s))):
        v = vt[i]
        if v[np.argmax(np.abs(v))] < 0:
            v = -v
        comps[i] = v
        var[i] = s[i] ** 2 / (len(X) - 1)
    return Projection(Xc @ comps.T, comps, var, mean)


def write_projection(path: str | Path, keys, coords, clusters, gold) -> None:
    """One ``key x y cluster gold`` line per item."""
    lines = [
        f"{k} {x:.6f} {y:.6f} {int(c)} {g}" for k, (x, y), c, g in zip(keys, coords, clusters, gold)
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
