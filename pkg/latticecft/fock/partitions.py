from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator

import numpy as np

# One descending tuple of positive parts per color.
State = tuple[tuple[int, ...], ...]


def partitions(n: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of n as descending tuples, largest first part first."""
    if n == 0:
        yield ()
        return
    top = n if max_part is None else min(n, max_part)
    for first in range(top, 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _partitions_list(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(partitions(n))


@lru_cache(maxsize=None)
def colored_partitions(n: int, colors: int) -> tuple[State, ...]:
    """All colors-tuples of partitions with total size n, sorted lexicographically."""
    if colors == 0:
        return ((),) if n == 0 else ()
    out: list[State] = []
    for sizes in _compositions(n, colors):
        for combo in itertools.product(*(_partitions_list(s) for s in sizes)):
            out.append(tuple(combo))
    return tuple(sorted(out))


def _compositions(n: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def energy(state: State) -> int:
    return sum(sum(parts) for parts in state)


def particle_number(state: State) -> int:
    return sum(len(parts) for parts in state)


def vacuum(colors: int) -> State:
    return tuple(() for _ in range(colors))


def colored_partition_counts(colors: int, max_n: int) -> np.ndarray:
    """Coefficients of prod_{n>=1} (1 - q^n)^(-colors) up to q^max_n."""
    coeffs = np.zeros(max_n + 1, dtype=np.int64)
    coeffs[0] = 1
    for n in range(1, max_n + 1):
        # 1 / (1 - q^n) as a geometric series, applied colors times
        geometric = np.zeros(max_n + 1, dtype=np.int64)
        geometric[::n] = 1
        for _ in range(colors):
            coeffs = np.convolve(coeffs, geometric)[: max_n + 1]
    return coeffs


def insert_part(parts: tuple[int, ...], m: int) -> tuple[int, ...]:
    return tuple(sorted(parts + (m,), reverse=True))


def remove_part(parts: tuple[int, ...], m: int) -> tuple[int, ...]:
    idx = parts.index(m)
    return parts[:idx] + parts[idx + 1 :]


def state_to_json(state: State) -> list[list[int]]:
    return [list(p) for p in state]
