"""Multinomial logistic regression over sparse unigram counts, trained with
weighted cross-entropy, L2 regularization, and mini-batch gradient descent."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from ..filters import CLASS_ORDER, ClassLabel
from .training import (N_CLASSES, TrainConfig, example_weights, inverse_class_weights,
                       label_indices, one_hot, softmax)


@dataclass
class UnigramModel:
    vocab: dict[str, int]
    weights: np.ndarray  # (4, |vocab|)
    bias: np.ndarray  # (4,)
    stopwords: frozenset[str] = frozenset()

    def _logits(self, X) -> np.ndarray:
        if sparse.issparse(X):
            return np.asarray(X @ self.weights.T) + self.bias
        return np.atleast_2d(X) @ self.weights.T + self.bias

    def predict_proba_matrix(self, X) -> np.ndarray:
        return softmax(self._logits(X))

    def predict_proba(self, features) -> np.ndarray:
        return self.predict_proba_matrix(features)[0]

    def predict(self, features) -> tuple[ClassLabel, np.ndarray]:
        probs = self.predict_proba(features)
        return CLASS_ORDER[int(np.argmax(probs))], probs

    def to_dict(self) -> dict:
        return {
            "kind": "unigram",
            "version": 1,
            "vocab": self.vocab,
            "weights": self.weights.ravel().tolist(),
            "shape": list(self.weights.shape),
            "bias": self.bias.tolist(),
            "stopwords": sorted(self.stopwords),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "UnigramModel":
        shape = tuple(payload["shape"])
        return cls(vocab=payload["vocab"],
                   weights=np.array(payload["weights"], dtype=np.float64).reshape(shape),
                   bias=np.array(payload["bias"], dtype=np.float64),
                   stopwords=frozenset(payload.get("stopwords", ())))


def weighted_ce_loss(weights: np.ndarray, bias: np.ndarray, X, y_idx: np.ndarray,
                     sample_weights: np.ndarray, l2: float) -> float:
    """Weighted-mean cross-entropy plus 0.5 * l2 * ||W||^2 (bias unpenalized)."""
    if sparse.issparse(X):
        logits = np.asarray(X @ weights.T) + bias
    else:
        logits = X @ weights.T + bias
    probs = softmax(logits)
    picked = np.clip(probs[np.arange(len(y_idx)), y_idx], 1e-300, None)
    ce = -(sample_weights * np.log(picked)).sum() / sample_weights.sum()
    return float(ce + 0.5 * l2 * float((weights ** 2).sum()))


def train_unigram(train, config: TrainConfig,
                  vocab: dict[str, int] | None = None,
                  stopwords: frozenset[str] = frozenset()) -> UnigramModel:
    """train: sequence of (features, label, source) with features one row of
    counts each (sparse 1 x V or dense). Weights start at zero; the objective
    is convex so the seed only orders mini-batches."""
    if not train:
        raise ValueError("empty training set")
    feats = [item[0] for item in train]
    labels = [item[1] for item in train]
    sources = [item[2] for item in train]
    if len(set(labels)) < 2:
        raise ValueError("training set has a single class")
    if sparse.issparse(feats[0]):
        X = sparse.vstack(feats, format="csr")
    else:
        X = np.vstack([np.atleast_2d(np.asarray(f, dtype=np.float64)) for f in feats])
    y_idx = label_indices(labels)
    n, n_features = X.shape

    if config.class_weights is not None:
        class_weights = np.asarray(config.class_weights, dtype=np.float64)
    else:
        class_weights = inverse_class_weights(labels)
    sample_weights = example_weights(labels, sources, class_weights,
                                     config.instance_downweight)

    W = np.zeros((N_CLASSES, n_features), dtype=np.float64)
    b = np.zeros(N_CLASSES, dtype=np.float64)
    Y = one_hot(y_idx)
    rng = np.random.default_rng(config.seed)
    for _ in range(config.epochs):
        order = rng.permutation(n)
        for start in range(0, n, config.batch_size):
            batch = order[start:start + config.batch_size]
            Xb = X[batch]
            if sparse.issparse(Xb):
                logits = np.asarray(Xb @ W.T) + b
            else:
                logits = Xb @ W.T + b
            probs = softmax(logits)
            wb = sample_weights[batch]
            delta = (probs - Y[batch]) * wb[:, None] / wb.sum()
            if sparse.issparse(Xb):
                grad_W = np.asarray(Xb.T @ delta).T + config.l2_strength * W
            else:
                grad_W = (Xb.T @ delta).T + config.l2_strength * W
            grad_b = delta.sum(axis=0)
            W -= config.learning_rate * grad_W
            b -= config.learning_rate * grad_b
    return UnigramModel(vocab=vocab or {}, weights=W, bias=b, stopwords=stopwords)
