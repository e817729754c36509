from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

import numpy as np

Turn = Union[Fraction, float]


def _reduce(turn: Turn) -> Turn:
    if isinstance(turn, Fraction):
        return turn - math.floor(turn)
    t = float(turn) % 1.0
    return 0.0 if math.isclose(t, 1.0, abs_tol=1e-15) else t


@dataclass(frozen=True)
class Phase:
    """A unit complex number e^{2 pi i turn}; exact when the turn is a Fraction."""

    turn: Turn = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "turn", _reduce(self.turn))

    @classmethod
    def from_sign(cls, sign: int) -> "Phase":
        if sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {sign}")
        return cls(Fraction(0) if sign == 1 else Fraction(1, 2))

    @classmethod
    def exp_i_pi(cls, x: Turn) -> "Phase":
        """e^{i pi x}."""
        if isinstance(x, (Fraction, int)):
            return cls(Fraction(x) / 2)
        return cls(float(x) / 2.0)

    @property
    def is_exact(self) -> bool:
        return isinstance(self.turn, Fraction)

    def __mul__(self, other: "Phase") -> "Phase":
        return Phase(self.turn + other.turn)

    def __truediv__(self, other: "Phase") -> "Phase":
        return Phase(self.turn - other.turn)

    def conjugate(self) -> "Phase":
        return Phase(-self.turn)

    def __pow__(self, n: int) -> "Phase":
        return Phase(self.turn * int(n))

    def to_complex(self) -> complex:
        return cmath.exp(2j * math.pi * float(self.turn))

    def sign(self) -> int:
        """+1 or -1 for real phases; raises otherwise."""
        if self.is_close(Phase()):
            return 1
        if self.is_close(Phase(Fraction(1, 2))):
            return -1
        raise ValueError(f"phase {self} is not real")

    def is_close(self, other: "Phase", tolerance: float = 1e-9) -> bool:
        if self.is_exact and other.is_exact:
            return self.turn == other.turn
        d = (float(self.turn) - float(other.turn)) % 1.0
        return min(d, 1.0 - d) * 2.0 * math.pi <= tolerance

    def describe(self) -> str:
        if self.is_exact:
            return f"exp(2pi i*{self.turn})"
        return f"exp(2pi i*{float(self.turn):.15g})"


def product(phases: Iterable[Phase]) -> Phase:
    out = Phase()
    for p in phases:
        out = out * p
    return out


def turn_array(phases: Iterable[Phase]) -> tuple[np.ndarray, int]:
    """Pack phases as integer numerators over a common denominator N.

    N is 0 when any phase is a float turn; the array then holds float turns.
    """
    items = list(phases)
    if items and all(p.is_exact for p in items):
        denom = 1
        for p in items:
            denom = math.lcm(denom, p.turn.denominator)
        values = np.array([int(p.turn * denom) % denom for p in items], dtype=np.int64)
        return values, denom
    return np.array([float(p.turn) for p in items], dtype=np.float64), 0
