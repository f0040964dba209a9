"""Shared training plumbing: config, class reweighting, instance
down-weighting, and numerically stable softmax helpers."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..datasets import AUTO_SOURCES
from ..filters import CLASS_ORDER, ClassLabel

N_CLASSES = len(CLASS_ORDER)


@dataclass
class TrainConfig:
    learning_rate: float = 0.1
    epochs: int = 100
    l2_strength: float = 1e-4
    class_weights: Sequence[float] | None = None  # None -> inverse frequency
    instance_downweight: float = 1.0  # applied to QB/HF/CB-source examples
    seed: int = 0
    batch_size: int = 64

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.epochs <= 0:
            raise ValueError("epochs must be positive")
        if self.l2_strength < 0:
            raise ValueError("l2_strength must be non-negative")
        if not 0.0 < self.instance_downweight <= 1.0:
            raise ValueError("instance_downweight must be in (0, 1]")
        if self.batch_size <= 0:
            raise ValueError("batch_size must be positive")


def label_indices(labels: Sequence[ClassLabel]) -> np.ndarray:
    index = {label: i for i, label in enumerate(CLASS_ORDER)}
    return np.array([index[label] for label in labels], dtype=np.int64)


def inverse_class_weights(labels: Sequence[ClassLabel]) -> np.ndarray:
    """Inverse empirical class frequency, normalized so present-class weights
    average 1. Absent classes get weight 0 (no examples to weigh)."""
    counts = Counter(labels)
    n = len(labels)
    if n == 0:
        raise ValueError("no labels")
    weights = np.zeros(N_CLASSES, dtype=np.float64)
    present = []
    for i, label in enumerate(CLASS_ORDER):
        if counts[label]:
            weights[i] = n / counts[label]
            present.append(i)
    weights[present] /= weights[present].mean()
    return weights


def example_weights(labels: Sequence[ClassLabel],
                    sources: Sequence[str] | None,
                    class_weights: np.ndarray,
                    instance_downweight: float = 1.0) -> np.ndarray:
    """Per-example weight = class weight x (downweight if the example came
    from an automatically labeled source, else 1)."""
    idx = label_indices(labels)
    weights = np.asarray(class_weights, dtype=np.float64)[idx].copy()
    if sources is not None:
        if len(sources) != len(labels):
            raise ValueError("sources and labels length mismatch")
        for i, source in enumerate(sources):
            if source in AUTO_SOURCES:
                weights[i] *= instance_downweight
    return weights


def effective_weight_histogram(weights: Sequence[float]) -> dict[str, int]:
    """repr(weight) -> count; emitted by training so the applied weighting is
    auditable from run outputs."""
    counter = Counter(repr(float(w)) for w in weights)
    return dict(sorted(counter.items()))


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def one_hot(indices: np.ndarray, n_classes: int = N_CLASSES) -> np.ndarray:
    out = np.zeros((len(indices), n_classes), dtype=np.float64)
    out[np.arange(len(indices)), indices] = 1.0
    return out
