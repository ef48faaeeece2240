"""Naive Bayes decision engine over raw (un-encoded) feature values.

Maximum-a-posteriori classification: class priors times the product of
per-feature conditional likelihoods, evaluated in log space. Categorical
features use Laplace-smoothed token tables, numeric features per-class
Gaussians with a variance floor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from ..dataset import CATEGORICAL, NUMERIC, Dataset, Value
from ..errors import SchemaMismatchError, SingleClassTrainingError, UnknownFeatureError

VARIANCE_FLOOR = 1e-9
LAPLACE_ALPHA = 1.0


@dataclass(frozen=True)
class CategoricalLikelihood:
    vocabulary: tuple[str, ...]
    tables: tuple[dict[str, float], dict[str, float]]  # token -> P(token | class)

    def log_likelihood(self, token: str, label: int) -> float:
        p = self.tables[label].get(token)
        if p is None:
            # unseen token: uniform over the training vocabulary
            p = 1.0 / len(self.vocabulary) if self.vocabulary else 1.0
        return math.log(p)


@dataclass(frozen=True)
class GaussianLikelihood:
    means: tuple[float, float]
    variances: tuple[float, float]

    def log_likelihood(self, x: float, label: int) -> float:
        mu = self.means[label]
        var = self.variances[label]
        return -0.5 * math.log(2.0 * math.pi * var) - (x - mu) ** 2 / (2.0 * var)


@dataclass(frozen=True)
class NBModel:
    feature_names: tuple[str, ...]
    kinds: tuple[str, ...]
    priors: tuple[float, float]
    likelihoods: tuple[CategoricalLikelihood | GaussianLikelihood, ...]

    def to_dict(self) -> dict:
        features = {}
        for name, kind, lik in zip(self.feature_names, self.kinds, self.likelihoods):
            if isinstance(lik, CategoricalLikelihood):
                features[name] = {
                    "kind": kind,
                    "tables": [dict(sorted(t.items())) for t in lik.tables],
                }
            else:
                features[name] = {
                    "kind": kind,
                    "means": list(lik.means),
                    "variances": list(lik.variances),
                }
        return {"priors": list(self.priors), "features": features}


def nb_fit(train: Dataset, features: Sequence[str]) -> NBModel:
    """Estimate priors and per-feature conditionals from labeled rows."""
    by_name = {a.name: a for a in train.schema}
    for name in features:
        if name not in by_name:
            raise UnknownFeatureError(name)
    n = train.n_records
    n1 = sum(train.labels)
    n0 = n - n1
    if n0 == 0 or n1 == 0:
        raise SingleClassTrainingError()
    priors = (n0 / n, n1 / n)

    likelihoods: list[CategoricalLikelihood | GaussianLikelihood] = []
    kinds = []
    for name in features:
        attr = by_name[name]
        kinds.append(attr.kind)
        column = train.column(attr.index)
        split = ([], [])
        for v, label in zip(column, train.labels):
            if v is not None:
                split[label].append(v)
        if attr.kind == CATEGORICAL:
            vocab = tuple(sorted(set(split[0]) | set(split[1])))
            tables = []
            for cls in (0, 1):
                total = len(split[cls]) + LAPLACE_ALPHA * len(vocab)
                counts = {tok: 0 for tok in vocab}
                for tok in split[cls]:
                    counts[tok] += 1
                tables.append(
                    {tok: (c + LAPLACE_ALPHA) / total for tok, c in counts.items()}
                )
            likelihoods.append(CategoricalLikelihood(vocab, (tables[0], tables[1])))
        else:
            means = []
            variances = []
            for cls in (0, 1):
                vals = split[cls]
                if vals:
                    mu = sum(vals) / len(vals)
                    var = sum((x - mu) ** 2 for x in vals) / len(vals)
                else:
                    mu, var = 0.0, 0.0
                means.append(mu)
                variances.append(max(var, VARIANCE_FLOOR))
            likelihoods.append(GaussianLikelihood((means[0], means[1]), (variances[0], variances[1])))

    return NBModel(tuple(features), tuple(kinds), priors, tuple(likelihoods))


def nb_predict(model: NBModel, row: Sequence[Value]) -> tuple[int, float]:
    """MAP label and the class-1 posterior for one row of raw feature values.

    Missing cells contribute nothing to either class. Exact posterior ties
    predict 1: a false alarm is preferred over a miss.
    """
    if len(row) != len(model.feature_names):
        raise SchemaMismatchError(
            f"row has {len(row)} values, model expects {len(model.feature_names)}"
        )
    logs = [math.log(model.priors[0]), math.log(model.priors[1])]
    for value, kind, lik in zip(row, model.kinds, model.likelihoods):
        if value is None:
            continue
        if kind == CATEGORICAL and not isinstance(value, str):
            raise SchemaMismatchError(f"expected token for categorical feature, got {value!r}")
        if kind == NUMERIC and isinstance(value, str):
            raise SchemaMismatchError(f"expected number for numeric feature, got {value!r}")
        for cls in (0, 1):
            logs[cls] += lik.log_likelihood(value, cls)
    label = 1 if logs[1] >= logs[0] else 0
    d = logs[0] - logs[1]
    if d >= 0:  # overflow-safe logistic of -d
        e = math.exp(-d)
        posterior_1 = e / (1.0 + e)
    else:
        posterior_1 = 1.0 / (1.0 + math.exp(d))
    return label, posterior_1
