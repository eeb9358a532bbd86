"""Expertise-profile clustering: PCA, k-means, silhouette-driven K choice.

Everything is implemented over numpy directly so the exact conventions
(median silhouette, largest qualifying K, type-7 quartiles) are pinned
down and testable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDataError


class PcaReducer:
    """Principal-component projection keeping ≥ the requested variance."""

    def __init__(self, variance_threshold: float = 0.95):
        self.variance_threshold = variance_threshold

    def get_params(self) -> dict:
        return {"variance_threshold": self.variance_threshold}

    def fit(self, data) -> "PcaReducer":
        X = np.asarray(data, dtype=float)
        if X.ndim != 2 or X.shape[0] < 2:
            raise DegenerateDataError("PCA needs a 2-D matrix with at least 2 rows")
        self.mean_ = X.mean(axis=0)
        centered = X - self.mean_
        if not np.any(np.abs(centered) > 1e-15):
            raise DegenerateDataError("all rows identical; no variance to analyze")
        _, s, vt = np.linalg.svd(centered, full_matrices=False)
        var = s**2
        ratios = var / var.sum()
        cumulative = np.cumsum(ratios)
        m = int(np.searchsorted(cumulative, self.variance_threshold - 1e-12) + 1)
        m = min(m, len(ratios))
        self.components_ = vt[:m]
        self.n_components_ = m
        self.explained_variance_ratio_ = ratios[:m]
        return self

    def transform(self, data) -> np.ndarray:
        X = np.asarray(data, dtype=float)
        return (X - self.mean_) @ self.components_.T

    def fit_transform(self, data) -> np.ndarray:
        return self.fit(data).transform(data)

    def inverse_transform(self, reduced) -> np.ndarray:
        return np.asarray(reduced, dtype=float) @ self.components_ + self.mean_


def pca_reduce(matrix, variance_threshold: float = 0.95) -> np.ndarray:
    return PcaReducer(variance_threshold).fit_transform(matrix)


class KMeans:
    """Lloyd's algorithm with seeded k-means++ initialization."""

    def __init__(self, n_clusters: int, seed: int = 0, max_iter: int = 300):
        self.n_clusters = n_clusters
        self.seed = seed
        self.max_iter = max_iter

    def get_params(self) -> dict:
        return {
            "n_clusters": self.n_clusters,
            "seed": self.seed,
            "max_iter": self.max_iter,
        }

    def _init_centers(self, X: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        n = X.shape[0]
        centers = [X[rng.integers(n)]]
        for _ in range(1, self.n_clusters):
            d2 = np.min(
                ((X[:, None, :] - np.asarray(centers)[None, :, :]) ** 2).sum(-1),
                axis=1,
            )
            total = d2.sum()
            if total <= 0:
                centers.append(X[rng.integers(n)])
                continue
            probs = d2 / total
            centers.append(X[rng.choice(n, p=probs)])
        return np.asarray(centers, dtype=float)

    def fit(self, data) -> "KMeans":
        X = np.asarray(data, dtype=float)
        n = X.shape[0]
        if not 1 <= self.n_clusters <= n:
            raise ValueError(f"n_clusters={self.n_clusters} outside 1..{n}")
        rng = np.random.default_rng(self.seed)
        centers = self._init_centers(X, rng)
        labels = np.zeros(n, dtype=int)
        self.inertia_history_: list[float] = []
        for _ in range(self.max_iter):
            d2 = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(-1)
            new_labels = d2.argmin(axis=1)
            # repair empties with the point farthest from its own centroid
            for c in range(self.n_clusters):
                if not np.any(new_labels == c):
                    far = int(d2[np.arange(n), new_labels].argmax())
                    new_labels[far] = c
                    centers[c] = X[far]
            inertia = float(((X - centers[new_labels]) ** 2).sum())
            self.inertia_history_.append(inertia)
            converged = np.array_equal(new_labels, labels) and len(
                self.inertia_history_
            ) > 1
            labels = new_labels
            for c in range(self.n_clusters):
                members = X[labels == c]
                if len(members):
                    centers[c] = members.mean(axis=0)
            if converged:
                break
        self.labels_ = labels
        self.cluster_centers_ = centers
        self.inertia_ = float(((X - centers[labels]) ** 2).sum())
        return self


def median_silhouette(data, labels) -> float:
    """Median over points of (b−a)/max(a,b); singleton points score 0."""
    X = np.asarray(data, dtype=float)
    labels = np.asarray(labels)
    uniq = np.unique(labels)
    if len(uniq) < 2:
        raise DegenerateDataError("silhouette undefined for a single cluster")
    dists = np.sqrt(((X[:, None, :] - X[None, :, :]) ** 2).sum(-1))
    scores = np.zeros(len(X))
    for i in range(len(X)):
        own = labels == labels[i]
        own_size = own.sum()
        if own_size == 1:
            scores[i] = 0.0
            continue
        a = dists[i][own].sum() / (own_size - 1)
        b = min(
            dists[i][labels == other].mean() for other in uniq if other != labels[i]
        )
        denom = max(a, b)
        scores[i] = 0.0 if denom == 0 else (b - a) / denom
    return float(np.median(scores))


@dataclass
class Clustering:
    k: int
    labels: np.ndarray
    centroids: np.ndarray
    median_silhouette: float
    qualified: bool  # median silhouette met the threshold
    curve: list[tuple[int, float]]  # (k, median silhouette) examined


def select_k(
    data,
    k_max: int = 100,
    threshold: float = 0.90,
    seed: int = 0,
) -> Clustering:
    """Largest K in 2..k_max whose median silhouette meets the threshold.

    Falls back (flagged) to the silhouette-maximizing K when none does.
    """
    X = np.asarray(data, dtype=float)
    n = X.shape[0]
    upper = min(k_max, n)
    if upper < 2:
        raise DegenerateDataError("need at least 2 points to cluster")
    results: dict[int, KMeans] = {}
    curve: list[tuple[int, float]] = []
    for k in range(2, upper + 1):
        model = KMeans(k, seed=(seed * 1000003 + k) % 2**32).fit(X)
        sil = median_silhouette(X, model.labels_)
        results[k] = model
        curve.append((k, sil))
    qualifying = [k for k, sil in curve if sil >= threshold]
    if qualifying:
        best_k = max(qualifying)
        qualified = True
    else:
        best_k = max(curve, key=lambda pair: (pair[1], -pair[0]))[0]
        qualified = False
    model = results[best_k]
    sil = dict(curve)[best_k]
    return Clustering(
        k=best_k,
        labels=model.labels_,
        centroids=model.cluster_centers_,
        median_silhouette=sil,
        qualified=qualified,
        curve=curve,
    )


def gini(sizes) -> float:
    """Standard Gini index of a positive size distribution."""
    x = np.asarray(list(sizes), dtype=float)
    if x.size == 0:
        raise ValueError("gini requires a non-empty size list")
    if np.any(x < 0):
        raise ValueError("sizes must be non-negative")
    total = x.sum()
    if total == 0 or x.size == 1:
        return 0.0
    diffs = np.abs(x[:, None] - x[None, :]).sum()
    return float(diffs / (2 * x.size * total))


@dataclass(frozen=True)
class DiffValueRecord:
    cluster: int
    ku: int  # 1-based KU index
    diff_value: float
    flagged: bool


def diff_values(p_ku, labels) -> list[DiffValueRecord]:
    """Cluster-vs-dataset median differences per KU, IQR-flagged.

    A record is flagged when the cluster's median for that KU falls
    outside the dataset's [Q1, Q3] (linear-interpolation quartiles).
    """
    X = np.asarray(p_ku, dtype=float)
    labels = np.asarray(labels)
    records: list[DiffValueRecord] = []
    for ku in range(X.shape[1]):
        column = X[:, ku]
        q1, q3 = np.percentile(column, [25, 75])
        overall = float(np.median(column))
        for cluster in sorted(set(labels.tolist())):
            med = float(np.median(column[labels == cluster]))
            records.append(
                DiffValueRecord(
                    cluster=int(cluster),
                    ku=ku + 1,
                    diff_value=med - overall,
                    flagged=not (q1 <= med <= q3),
                )
            )
    return records
