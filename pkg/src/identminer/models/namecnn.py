"""Character-level CNN over display names with profile metadata features.

Architecture: 256-dim character embeddings -> 256 convolution filters of width
3 -> ReLU -> max-pool over positions -> concatenate metadata -> two fully
connected layers -> softmax over the four classes. Names are truncated at 50
characters before encoding. Forward, backward, and the update loop are plain
numpy with manual gradients; gradient_check verifies them against central
finite differences.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..filters import CLASS_ORDER, ClassLabel
from .training import (N_CLASSES, TrainConfig, example_weights, inverse_class_weights,
                       label_indices, one_hot, softmax)

EMBED_DIM = 256
N_FILTERS = 256
FILTER_WIDTH = 3
HIDDEN = 256
MAX_NAME_LEN = 50
PAD_INDEX = 0
OOV_INDEX = 1

# L2 applies to the weight matrices below; embeddings and biases are unpenalized
_REGULARIZED = ("Wc", "W1", "W2")


def build_char_vocab(names: Sequence[str], min_count: int = 5,
                     max_len: int = MAX_NAME_LEN) -> dict[str, int]:
    """Characters seen at least min_count times in the (truncated) training
    names, in codepoint order; 0 is padding, 1 is out-of-vocabulary."""
    counts: Counter[str] = Counter()
    for name in names:
        counts.update(name[:max_len])
    kept = sorted(ch for ch, count in counts.items() if count >= min_count)
    return {ch: i + 2 for i, ch in enumerate(kept)}


def encode_names(names: Sequence[str], char_vocab: dict[str, int],
                 max_len: int = MAX_NAME_LEN) -> np.ndarray:
    """(B, L) id matrix, padded to the batch maximum but never below the
    filter width."""
    clipped = [name[:max_len] for name in names]
    length = max(FILTER_WIDTH, max((len(name) for name in clipped), default=0))
    ids = np.full((len(names), length), PAD_INDEX, dtype=np.int64)
    for row, name in enumerate(clipped):
        for col, ch in enumerate(name):
            ids[row, col] = char_vocab.get(ch, OOV_INDEX)
    return ids


def init_params(vocab_size: int, meta_dim: int, seed: int) -> dict[str, np.ndarray]:
    rng = np.random.default_rng(seed)
    fan_conv = FILTER_WIDTH * EMBED_DIM
    return {
        "E": rng.normal(0.0, 0.1, (vocab_size, EMBED_DIM)),
        "Wc": rng.normal(0.0, math.sqrt(2.0 / fan_conv), (N_FILTERS, fan_conv)),
        "bc": np.zeros(N_FILTERS),
        "W1": rng.normal(0.0, math.sqrt(2.0 / (N_FILTERS + meta_dim)),
                         (N_FILTERS + meta_dim, HIDDEN)),
        "b1": np.zeros(HIDDEN),
        "W2": rng.normal(0.0, math.sqrt(2.0 / HIDDEN), (HIDDEN, N_CLASSES)),
        "b2": np.zeros(N_CLASSES),
    }


def _forward(params: dict[str, np.ndarray], ids: np.ndarray,
             metas: np.ndarray) -> tuple[np.ndarray, dict]:
    X = params["E"][ids]  # (B, L, De)
    positions = ids.shape[1] - FILTER_WIDTH + 1
    X_win = np.concatenate([X[:, k:positions + k] for k in range(FILTER_WIDTH)],
                           axis=2)  # (B, P, 3*De)
    Z = X_win @ params["Wc"].T + params["bc"]  # (B, P, F)
    A = np.maximum(Z, 0.0)
    amax = A.argmax(axis=1)  # (B, F)
    H = np.take_along_axis(A, amax[:, None, :], axis=1)[:, 0, :]
    G = np.concatenate([H, metas], axis=1)
    U = G @ params["W1"] + params["b1"]
    A1 = np.maximum(U, 0.0)
    logits = A1 @ params["W2"] + params["b2"]
    cache = {"ids": ids, "X_win": X_win, "Z": Z, "amax": amax, "G": G,
             "U": U, "A1": A1}
    return logits, cache


def _loss_from_logits(logits: np.ndarray, y_idx: np.ndarray,
                      sample_weights: np.ndarray, params: dict, l2: float
                      ) -> tuple[float, np.ndarray]:
    probs = softmax(logits)
    picked = np.clip(probs[np.arange(len(y_idx)), y_idx], 1e-300, None)
    ce = -(sample_weights * np.log(picked)).sum() / sample_weights.sum()
    reg = 0.5 * l2 * sum(float((params[k] ** 2).sum()) for k in _REGULARIZED)
    return float(ce + reg), probs


def loss_only(params: dict, ids: np.ndarray, metas: np.ndarray,
              y_idx: np.ndarray, sample_weights: np.ndarray, l2: float) -> float:
    logits, _ = _forward(params, ids, metas)
    loss, _ = _loss_from_logits(logits, y_idx, sample_weights, params, l2)
    return loss


def loss_and_grads(params: dict, ids: np.ndarray, metas: np.ndarray,
                   y_idx: np.ndarray, sample_weights: np.ndarray,
                   l2: float) -> tuple[float, dict[str, np.ndarray]]:
    logits, cache = _forward(params, ids, metas)
    loss, probs = _loss_from_logits(logits, y_idx, sample_weights, params, l2)

    total = sample_weights.sum()
    dlogits = (probs - one_hot(y_idx)) * (sample_weights / total)[:, None]
    grads: dict[str, np.ndarray] = {}
    grads["W2"] = cache["A1"].T @ dlogits + l2 * params["W2"]
    grads["b2"] = dlogits.sum(axis=0)
    dA1 = dlogits @ params["W2"].T
    dU = dA1 * (cache["U"] > 0)
    grads["W1"] = cache["G"].T @ dU + l2 * params["W1"]
    grads["b1"] = dU.sum(axis=0)
    dG = dU @ params["W1"].T
    dH = dG[:, :N_FILTERS]

    # route pooled gradient to the argmax positions only
    dA = np.zeros_like(cache["Z"])
    np.put_along_axis(dA, cache["amax"][:, None, :], dH[:, None, :], axis=1)
    dZ = dA * (cache["Z"] > 0)
    grads["bc"] = dZ.sum(axis=(0, 1))
    grads["Wc"] = np.einsum("bpf,bpd->fd", dZ, cache["X_win"]) + l2 * params["Wc"]
    dX_win = dZ @ params["Wc"]  # (B, P, 3*De)
    batch, positions = dZ.shape[0], dZ.shape[1]
    dX = np.zeros((batch, ids.shape[1], EMBED_DIM))
    for k in range(FILTER_WIDTH):
        dX[:, k:positions + k] += dX_win[:, :, k * EMBED_DIM:(k + 1) * EMBED_DIM]
    dE = np.zeros_like(params["E"])
    np.add.at(dE, cache["ids"].ravel(), dX.reshape(-1, EMBED_DIM))
    grads["E"] = dE
    return loss, grads


@dataclass
class NameModel:
    char_vocab: dict[str, int]
    params: dict[str, np.ndarray]
    meta_dim: int
    max_len: int = MAX_NAME_LEN

    def predict_proba_batch(self, names: Sequence[str],
                            metas: np.ndarray) -> np.ndarray:
        ids = encode_names(names, self.char_vocab, self.max_len)
        logits, _ = _forward(self.params, ids, np.atleast_2d(metas))
        return softmax(logits)

    def predict_proba(self, features: tuple[str, np.ndarray]) -> np.ndarray:
        name, meta = features
        return self.predict_proba_batch([name], np.atleast_2d(meta))[0]

    def predict(self, features) -> tuple[ClassLabel, np.ndarray]:
        probs = self.predict_proba(features)
        return CLASS_ORDER[int(np.argmax(probs))], probs

    def to_dict(self) -> dict:
        return {
            "kind": "namecnn",
            "version": 1,
            "char_vocab": self.char_vocab,
            "meta_dim": self.meta_dim,
            "max_len": self.max_len,
            "params": {key: {"shape": list(value.shape),
                             "data": value.ravel().tolist()}
                       for key, value in self.params.items()},
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "NameModel":
        params = {key: np.array(entry["data"], dtype=np.float64)
                  .reshape(entry["shape"])
                  for key, entry in payload["params"].items()}
        return cls(char_vocab=payload["char_vocab"], params=params,
                   meta_dim=payload["meta_dim"], max_len=payload["max_len"])


def _unpack(items):
    names = [item[0] for item in items]
    metas = np.vstack([np.asarray(item[1], dtype=np.float64) for item in items])
    labels = [item[2] for item in items]
    sources = [item[3] if len(item) > 3 else None for item in items]
    if all(source is None for source in sources):
        sources = None
    else:
        sources = [source or "crowd" for source in sources]
    return names, metas, labels, sources


def _dev_macro_f1(model: NameModel, names, metas, labels) -> float:
    from ..evaluation import macro_f1
    probs = model.predict_proba_batch(names, metas)
    predictions = [CLASS_ORDER[int(i)] for i in probs.argmax(axis=1)]
    return macro_f1(labels, predictions)


def train_name_cnn(train, config: TrainConfig, dev=None,
                   min_char_count: int = 5,
                   max_len: int = MAX_NAME_LEN) -> NameModel:
    """Mini-batch gradient descent for up to config.epochs epochs. With a dev
    set, the checkpoint with the best dev macro-F1 is kept (first best wins)
    and training stops early once dev macro-F1 reaches 1.0."""
    if not train:
        raise ValueError("empty training set")
    names, metas, labels, sources = _unpack(train)
    if len(set(labels)) < 2:
        raise ValueError("training set has a single class")
    char_vocab = build_char_vocab(names, min_count=min_char_count, max_len=max_len)
    ids = encode_names(names, char_vocab, max_len)
    y_idx = label_indices(labels)
    if config.class_weights is not None:
        class_weights = np.asarray(config.class_weights, dtype=np.float64)
    else:
        class_weights = inverse_class_weights(labels)
    sample_weights = example_weights(labels, sources, class_weights,
                                     config.instance_downweight)

    params = init_params(len(char_vocab) + 2, metas.shape[1], config.seed)
    model = NameModel(char_vocab=char_vocab, params=params,
                      meta_dim=metas.shape[1], max_len=max_len)
    if dev is not None:
        dev_names, dev_metas, dev_labels, _ = _unpack(dev)
        best_f1 = -1.0
        best_params = {key: value.copy() for key, value in params.items()}

    rng = np.random.default_rng(config.seed)
    n = len(names)
    for _ in range(config.epochs):
        order = rng.permutation(n)
        for start in range(0, n, config.batch_size):
            batch = order[start:start + config.batch_size]
            _, grads = loss_and_grads(params, ids[batch], metas[batch],
                                      y_idx[batch], sample_weights[batch],
                                      config.l2_strength)
            for key, grad in grads.items():
                params[key] -= config.learning_rate * grad
        if dev is not None:
            f1 = _dev_macro_f1(model, dev_names, dev_metas, dev_labels)
            if f1 > best_f1:
                best_f1 = f1
                best_params = {key: value.copy() for key, value in params.items()}
            if best_f1 >= 1.0:
                break
    if dev is not None:
        model.params = best_params
    return model


def gradient_check(model: NameModel, names, metas, labels,
                   sample_weights=None, l2: float = 1e-4, step: float = 1e-5,
                   coords_per_tensor: int = 40, seed: int = 0) -> float:
    """Max relative error between analytic and central finite-difference
    gradients over sampled coordinates of every parameter tensor. Coordinates
    are sampled among those with non-negligible analytic gradient so the
    relative error is meaningful."""
    ids = encode_names(names, model.char_vocab, model.max_len)
    metas = np.atleast_2d(np.asarray(metas, dtype=np.float64))
    y_idx = label_indices(labels)
    if sample_weights is None:
        sample_weights = np.ones(len(labels))
    sample_weights = np.asarray(sample_weights, dtype=np.float64)

    params = model.params
    _, grads = loss_and_grads(params, ids, metas, y_idx, sample_weights, l2)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for key, tensor in params.items():
        grad = grads[key].ravel()
        candidates = np.flatnonzero(np.abs(grad) > 1e-5)
        if len(candidates) == 0:
            continue
        if len(candidates) > coords_per_tensor:
            candidates = rng.choice(candidates, size=coords_per_tensor,
                                    replace=False)
        flat = tensor.ravel()
        for coord in candidates:
            original = flat[coord]
            flat[coord] = original + step
            up = loss_only(params, ids, metas, y_idx, sample_weights, l2)
            flat[coord] = original - step
            down = loss_only(params, ids, metas, y_idx, sample_weights, l2)
            flat[coord] = original
            numeric = (up - down) / (2.0 * step)
            denom = max(abs(grad[coord]), abs(numeric), 1e-8)
            worst = max(worst, abs(grad[coord] - numeric) / denom)
    return worst
