"""Random and majority baselines with the same predict interface as the
trained models."""
from __future__ import annotations

import random
from collections import Counter
from typing import Sequence

import numpy as np

from ..filters import CLASS_ORDER, ClassLabel


class RandomBaseline:
    """Uniform over the four classes, seeded."""

    def __init__(self, seed: int = 0):
        self.seed = seed
        self._rng = random.Random(seed)

    def predict_proba(self, features) -> np.ndarray:
        return np.full(len(CLASS_ORDER), 1.0 / len(CLASS_ORDER))

    def predict(self, features) -> tuple[ClassLabel, np.ndarray]:
        return self._rng.choice(CLASS_ORDER), self.predict_proba(features)

    def to_dict(self) -> dict:
        return {"kind": "baseline_random", "version": 1, "seed": self.seed}

    @classmethod
    def from_dict(cls, payload: dict) -> "RandomBaseline":
        return cls(seed=payload["seed"])


class MajorityBaseline:
    """Constant most-frequent training label; ties break by fixed class order."""

    def __init__(self, majority: ClassLabel):
        self.majority = majority

    def predict_proba(self, features) -> np.ndarray:
        probs = np.zeros(len(CLASS_ORDER))
        probs[CLASS_ORDER.index(self.majority)] = 1.0
        return probs

    def predict(self, features) -> tuple[ClassLabel, np.ndarray]:
        return self.majority, self.predict_proba(features)

    def to_dict(self) -> dict:
        return {"kind": "baseline_majority", "version": 1,
                "majority": self.majority.value}

    @classmethod
    def from_dict(cls, payload: dict) -> "MajorityBaseline":
        return cls(majority=ClassLabel.from_code(payload["majority"]))


def baseline_random(seed: int = 0) -> RandomBaseline:
    return RandomBaseline(seed)


def baseline_majority(train_labels: Sequence[ClassLabel]) -> MajorityBaseline:
    if not train_labels:
        raise ValueError("empty training labels")
    counts = Counter(train_labels)
    best = max(CLASS_ORDER, key=lambda label: (counts[label], -CLASS_ORDER.index(label)))
    return MajorityBaseline(best)
