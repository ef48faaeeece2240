"""Expectation-maximization clustering with diagonal Gaussian components.

Fits K=2 components to the encoded feature matrix without labels, then maps
each cluster to the majority training label of the rows it claims. The
log-likelihood trace is kept per iteration; EM guarantees it never decreases.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ..errors import SchemaMismatchError, TooFewRowsError, UnfittedModelError
from .encoding import FeatureMatrix

VARIANCE_FLOOR = 1e-9


@dataclass(frozen=True)
class EMConfig:
    k: int = 2
    max_iterations: int = 200
    tolerance: float = 1e-6
    seed: int = 0
    restarts: int = 5


@dataclass(frozen=True)
class EMModel:
    weights: np.ndarray                   # (k,)
    means: np.ndarray                     # (k, width)
    variances: np.ndarray                 # (k, width), floored
    ll_trace: tuple[float, ...]
    cluster_labels: tuple[int, ...] | None = None

    def to_dict(self) -> dict:
        return {
            "weights": [float(w) for w in self.weights],
            "means": [[float(v) for v in row] for row in self.means],
            "variances": [[float(v) for v in row] for row in self.variances],
            "cluster_labels": list(self.cluster_labels) if self.cluster_labels else None,
            "log_likelihood_trace": [float(v) for v in self.ll_trace],
        }

    def with_mapping(self, mapping: tuple[int, ...]) -> "EMModel":
        return replace(self, cluster_labels=mapping)


def _log_densities(x: np.ndarray, weights, means, variances) -> np.ndarray:
    """log(w_k) + log N(x | mu_k, diag var_k), shape (n, k)."""
    n, width = x.shape
    k = means.shape[0]
    out = np.empty((n, k), dtype=np.float64)
    for j in range(k):
        diff2 = (x - means[j]) ** 2 / variances[j]
        out[:, j] = (
            np.log(weights[j])
            - 0.5 * (width * np.log(2.0 * np.pi) + np.log(variances[j]).sum())
            - 0.5 * diff2.sum(axis=1)
        )
    return out


def _normalize_log(scores: np.ndarray) -> tuple[np.ndarray, float]:
    """Row-normalize in log space; returns (responsibilities, total log-likelihood)."""
    m = scores.max(axis=1, keepdims=True)
    shifted = np.exp(scores - m)
    norm = shifted.sum(axis=1, keepdims=True)
    resp = shifted / norm
    ll = float((m[:, 0] + np.log(norm[:, 0])).sum())
    return resp, ll


def responsibilities(model: EMModel, x: np.ndarray) -> np.ndarray:
    """Posterior component memberships for each row; rows sum to 1."""
    resp, _ = _normalize_log(_log_densities(x, model.weights, model.means, model.variances))
    return resp


def _init_means(x: np.ndarray, rng: np.random.Generator, k: int) -> np.ndarray:
    """Seeded distance-weighted pick of k distinct rows as starting means."""
    n = x.shape[0]
    chosen = [int(rng.integers(n))]
    for _ in range(k - 1):
        d2 = np.min(
            [((x - x[i]) ** 2).sum(axis=1) for i in chosen], axis=0
        )
        total = d2.sum()
        if total == 0.0:
            chosen.append((chosen[-1] + 1) % n)
        else:
            chosen.append(int(rng.choice(n, p=d2 / total)))
    return x[chosen].copy()


def _fit_once(x: np.ndarray, config: EMConfig, restart: int) -> EMModel:
    n, width = x.shape
    k = config.k
    rng = np.random.default_rng([config.seed, restart])
    means = _init_means(x, rng, k)
    variances = np.ones((k, width), dtype=np.float64)
    weights = np.full(k, 1.0 / k, dtype=np.float64)

    trace: list[float] = []
    for _ in range(config.max_iterations):
        resp, ll = _normalize_log(_log_densities(x, weights, means, variances))
        trace.append(ll)
        if len(trace) >= 2 and trace[-1] - trace[-2] < config.tolerance:
            break
        nk = np.maximum(resp.sum(axis=0), 1e-12)
        weights = nk / nk.sum()
        means = (resp.T @ x) / nk[:, None]
        for j in range(k):
            variances[j] = resp[:, j] @ (x - means[j]) ** 2 / nk[j]
        variances = np.maximum(variances, VARIANCE_FLOOR)
    return EMModel(weights, means, variances, tuple(trace))


def em_fit(matrix: FeatureMatrix, config: EMConfig = EMConfig()) -> EMModel:
    """Best of ``config.restarts`` seeded EM runs, judged by final log-likelihood."""
    x = matrix.rows
    if x.shape[0] < 2 * config.k:
        raise TooFewRowsError(f"EM with k={config.k} needs at least {2 * config.k} rows")
    best: EMModel | None = None
    for r in range(config.restarts):
        candidate = _fit_once(x, config, r)
        if best is None or candidate.ll_trace[-1] > best.ll_trace[-1]:
            best = candidate
    assert best is not None
    return best


def map_clusters(model: EMModel, matrix: FeatureMatrix) -> tuple[int, ...]:
    """Majority training label per cluster under hard assignment.

    If every cluster lands on the same label, the cluster with the larger
    attack fraction takes label 1 and the other label 0.
    """
    if not model.ll_trace:
        raise UnfittedModelError("model has no training trace")
    if matrix.labels is None:
        raise SchemaMismatchError("cluster mapping needs labeled rows")
    hard = responsibilities(model, matrix.rows).argmax(axis=1)
    labels = np.asarray(matrix.labels)
    k = model.means.shape[0]
    attack_fraction = np.empty(k, dtype=np.float64)
    for j in range(k):
        members = labels[hard == j]
        attack_fraction[j] = members.mean() if members.size else 0.0
    mapping = [1 if f >= 0.5 else 0 for f in attack_fraction]  # exact tie -> attack
    if len(set(mapping)) == 1 and k == 2:
        hottest = int(attack_fraction.argmax())
        mapping = [0, 0]
        mapping[hottest] = 1
    return tuple(mapping)


def em_predict(model: EMModel, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(labels, class-1 probability) for each row, via the cluster mapping."""
    if model.cluster_labels is None:
        raise UnfittedModelError("model has no cluster-to-label mapping")
    resp = responsibilities(model, x)
    mapping = np.asarray(model.cluster_labels)
    labels = mapping[resp.argmax(axis=1)]
    prob_1 = resp[:, mapping == 1].sum(axis=1)
    return labels, prob_1
