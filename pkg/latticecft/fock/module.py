from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Mapping, Optional, Sequence

from latticecft.errors import CutoffTooLarge
from latticecft.fock.partitions import (
    State,
    colored_partition_counts,
    colored_partitions,
    energy,
    insert_part,
    remove_part,
    vacuum,
)
from latticecft.scalars import Scalar, ScalarBackend

logger = logging.getLogger(__name__)

BUDGET_ENV = "LATTICECFT_STATE_BUDGET"
DEFAULT_STATE_BUDGET = 200_000

# Sparse vector: basis state -> coefficient.
Vector = dict[State, Scalar]


def state_budget(configured: Optional[int] = None) -> int:
    raw = os.environ.get(BUDGET_ENV, "").strip()
    if raw:
        try:
            return int(raw)
        except ValueError:
            logger.warning("ignoring non-integer %s=%r", BUDGET_ENV, raw)
    return int(configured) if configured is not None else DEFAULT_STATE_BUDGET


@dataclass(frozen=True, eq=False)
class FockModule:
    """Truncated Heisenberg module with an orthonormal color frame.

    weight holds the zero-mode eigenvalues (one per color); energies count the
    excitation level above the lowest weight.
    """

    backend: ScalarBackend
    weight: tuple[Scalar, ...]
    cutoff: int
    side: str = "chiral"
    basis: tuple[State, ...] = ()
    _cache: dict[Any, Any] = field(default_factory=dict, repr=False, compare=False)

    @property
    def colors(self) -> int:
        return len(self.weight)

    @cached_property
    def index(self) -> Mapping[State, int]:
        return {s: i for i, s in enumerate(self.basis)}

    @cached_property
    def lowest_weight(self) -> Scalar:
        return self.backend.half * self.backend.dot(self.weight, self.weight)

    @property
    def vacuum(self) -> State:
        return vacuum(self.colors)

    def grade(self, n: int) -> tuple[State, ...]:
        if n < 0 or n > self.cutoff:
            return ()
        return colored_partitions(n, self.colors)

    def grade_dimensions(self) -> tuple[int, ...]:
        return tuple(len(self.grade(n)) for n in range(self.cutoff + 1))

    def states_up_to(self, top: int) -> list[State]:
        return [s for n in range(min(top, self.cutoff) + 1) for s in self.grade(n)]

    def same_as(self, other: "FockModule") -> bool:
        if self is other:
            return True
        return (
            self.backend == other.backend
            and self.cutoff == other.cutoff
            and self.colors == other.colors
            and all(self.backend.eq(a, b) for a, b in zip(self.weight, other.weight))
        )

    def with_weight(self, weight: Sequence[Scalar]) -> "FockModule":
        """Module with the same basis and a different lowest weight."""
        if len(weight) != self.colors:
            raise ValueError(f"weight has {len(weight)} colors, module has {self.colors}")
        return FockModule(
            backend=self.backend, weight=tuple(weight), cutoff=self.cutoff, side=self.side, basis=self.basis
        )

    # inner product

    def pairing(self, s: State, t: State) -> int:
        """<s, t> by pushing annihilators through to the vacuum."""
        memo = self._cache.setdefault("pairing", {})
        key = (s, t)
        if key in memo:
            return memo[key]
        if energy(s) != energy(t):
            value = 0
        elif not any(s):
            value = 1
        else:
            color = next(j for j, parts in enumerate(s) if parts)
            m = s[color][0]
            k = t[color].count(m)
            if k == 0:
                value = 0
            else:
                s_rest = s[:color] + (s[color][1:],) + s[color + 1 :]
                t_rest = t[:color] + (remove_part(t[color], m),) + t[color + 1 :]
                value = m * k * self.pairing(s_rest, t_rest)
        memo[key] = value
        return value

    def norm_squared(self, s: State) -> int:
        """Closed form prod_m m^{k_m} k_m! per color."""
        out = 1
        for parts in s:
            for m in set(parts):
                k = parts.count(m)
                for i in range(1, k + 1):
                    out *= m * i
        return out

    def gram_block(self, n: int) -> list[list[int]]:
        states = self.grade(n)
        return [[self.pairing(s, t) for t in states] for s in states]

    def inner(self, u: Mapping[State, Scalar], v: Mapping[State, Scalar]) -> Scalar:
        b = self.backend
        total = b.zero
        for s, us in u.items():
            for t, vt in v.items():
                g = self.pairing(s, t)
                if g:
                    total = total + us * vt * b.from_int(g)
        return total

    # untruncated mode action on vectors

    def apply_mode(self, alpha: Sequence[Scalar], m: int, vec: Mapping[State, Scalar]) -> Vector:
        b = self.backend
        out: Vector = {}
        if m == 0:
            c = b.dot(alpha, self.weight)
            if b.is_zero(c):
                return out
            return {s: c * x for s, x in vec.items()}
        for s, x in vec.items():
            for j, a in enumerate(alpha):
                if b.is_zero(a):
                    continue
                if m < 0:
                    t = s[:j] + (insert_part(s[j], -m),) + s[j + 1 :]
                    coeff = a * x
                else:
                    k = s[j].count(m)
                    if k == 0:
                        continue
                    t = s[:j] + (remove_part(s[j], m),) + s[j + 1 :]
                    coeff = a * x * b.from_int(m * k)
                add_into(b, out, t, coeff)
        return out

    def basis_vector(self, s: State) -> Vector:
        return {s: self.backend.one}


def add_into(backend: ScalarBackend, out: Vector, key: State, value: Scalar) -> None:
    cur = out.get(key)
    new = value if cur is None else cur + value
    if backend.is_zero(new):
        out.pop(key, None)
    else:
        out[key] = new


def combine(backend: ScalarBackend, terms: Sequence[tuple[Scalar, Mapping[State, Scalar]]]) -> Vector:
    out: Vector = {}
    for c, vec in terms:
        if backend.is_zero(c):
            continue
        for s, x in vec.items():
            add_into(backend, out, s, c * x)
    return out


def build_module(
    d: int,
    weight: Optional[Sequence[Any]],
    cutoff: int,
    *,
    backend: ScalarBackend,
    side: str = "chiral",
    budget: Optional[int] = None,
) -> FockModule:
    if cutoff < 0:
        raise ValueError("cutoff must be non-negative")
    if weight is None:
        weight = [0] * d
    if len(weight) != d:
        raise ValueError(f"weight has {len(weight)} entries, expected {d}")
    w = tuple(x if backend.domain.of_type(x) else backend.convert(x) for x in weight)

    limit = state_budget(budget)
    total = int(colored_partition_counts(d, cutoff).sum())
    if total > limit:
        raise CutoffTooLarge(f"{total} basis states for d={d}, E={cutoff} exceed the state budget {limit}")

    basis = tuple(s for n in range(cutoff + 1) for s in colored_partitions(n, d))
    logger.debug("built %s Fock module d=%d E=%d with %d states", side, d, cutoff, len(basis))
    return FockModule(backend=backend, weight=w, cutoff=int(cutoff), side=side, basis=basis)
