"""Small shared helpers: canonical JSON, config hashing, seed derivation, ordered parallel map."""
from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
U = TypeVar("U")


class DataError(Exception):
    """Problem with input data (missing file, bad record, impossible request)."""


def canonical_json(obj) -> str:
    """Serialize deterministically: sorted keys, no whitespace variation."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def config_hash(config: dict) -> str:
    return hashlib.sha256(canonical_json(config).encode("utf-8")).hexdigest()


def stage_seed(root_seed: int, stage: str) -> int:
    """Derive a per-stage seed from one root seed; stable across runs and platforms."""
    digest = hashlib.sha256(f"{root_seed}:{stage}".encode("utf-8")).digest()
    # keep below 2**32 so any RNG backend accepts it
    return int.from_bytes(digest[:4], "big")


def ceil_fraction(fraction: float, n: int) -> int:
    # round first: 0.6 * 5 is 3.0000000000000004 in binary floating point
    return math.ceil(round(fraction * n, 9))


def pmap_ordered(fn: Callable[[T], U], items: Iterable[T], workers: int = 1) -> list[U]:
    """Map preserving input order. Thread pool when workers > 1; results are
    identical to the serial map because executor.map keeps submission order."""
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(obj, handle, sort_keys=True, indent=2)
        handle.write("\n")


def mean(values: Sequence[float]) -> float:
    return sum(values) / len(values) if values else 0.0
