from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence


@dataclass(frozen=True, order=True)
class Charge:
    """Integer coordinates of a lattice vector in the generator basis."""

    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    @classmethod
    def of(cls, *coords: int) -> "Charge":
        return cls(tuple(coords))

    @classmethod
    def zero(cls, rank: int) -> "Charge":
        return cls((0,) * int(rank))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _check(self, other: "Charge") -> None:
        if other.rank != self.rank:
            raise ValueError(f"charge ranks differ: {self.rank} vs {other.rank}")

    def __add__(self, other: "Charge") -> "Charge":
        self._check(other)
        return Charge(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Charge") -> "Charge":
        self._check(other)
        return Charge(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Charge":
        return Charge(tuple(-a for a in self.coords))

    def scale(self, k: int) -> "Charge":
        return Charge(tuple(int(k) * a for a in self.coords))

    def max_abs(self) -> int:
        return max((abs(a) for a in self.coords), default=0)

    def __iter__(self) -> Iterator[int]:
        return iter(self.coords)

    def __str__(self) -> str:
        return "(" + ",".join(str(a) for a in self.coords) + ")"


def charge_box(rank: int, radius: int) -> list[Charge]:
    """All charges with every coordinate in [-radius, radius], lexicographic."""
    if radius < 0:
        raise ValueError("box radius must be non-negative")
    span = range(-int(radius), int(radius) + 1)
    return [Charge(c) for c in itertools.product(span, repeat=int(rank))]


def in_box(charge: Charge, radius: int) -> bool:
    return charge.max_abs() <= int(radius)


def as_charge(value: Charge | Sequence[int]) -> Charge:
    if isinstance(value, Charge):
        return value
    return Charge(tuple(value))
