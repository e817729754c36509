from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Optional, Sequence

import sympy

from latticecft.errors import BackendMismatch, DependentGenerators, NonIntegralPairing, OddNorm
from latticecft.lattice.linalg import leading_minors_positive, solve_square
from latticecft.scalars import Scalar, ScalarBackend
from latticecft.types import Charge, as_charge, charge_box

logger = logging.getLogger(__name__)

# (x_plus, x_minus): orthonormal coordinates of the chiral and antichiral parts.
AmbientVector = tuple[tuple[Scalar, ...], tuple[Scalar, ...]]


@dataclass(frozen=True)
class SplitSpace:
    d_plus: int
    d_minus: int

    def __post_init__(self) -> None:
        if self.d_plus < 0 or self.d_minus < 0:
            raise ValueError("split dimensions must be non-negative")
        if self.d_plus + self.d_minus < 1:
            raise ValueError("split space must have positive total dimension")

    @property
    def dim(self) -> int:
        return int(self.d_plus + self.d_minus)

    def zero(self, backend: ScalarBackend) -> AmbientVector:
        return (tuple(backend.zero for _ in range(self.d_plus)), tuple(backend.zero for _ in range(self.d_minus)))


@dataclass(frozen=True, eq=False)
class Lattice:
    space: SplitSpace
    backend: ScalarBackend
    generators: tuple[AmbientVector, ...]
    gram_plus: tuple[tuple[Scalar, ...], ...]
    gram_minus: tuple[tuple[Scalar, ...], ...]
    validated: bool = True

    @property
    def rank(self) -> int:
        return len(self.generators)

    @cached_property
    def gram_indef_values(self) -> tuple[tuple[Scalar, ...], ...]:
        return tuple(
            tuple(p - m for p, m in zip(row_p, row_m)) for row_p, row_m in zip(self.gram_plus, self.gram_minus)
        )

    @cached_property
    def gram_indef(self) -> tuple[tuple[int, ...], ...]:
        rows: list[tuple[int, ...]] = []
        for i, row in enumerate(self.gram_indef_values):
            out: list[int] = []
            for j, value in enumerate(row):
                n = self.backend.as_integer(value)
                if n is None:
                    raise NonIntegralPairing(
                        f"(g{i}|g{j}) = {self.backend.to_str(value)} is not an integer"
                    )
                out.append(n)
            rows.append(tuple(out))
        return tuple(rows)

    def chiral_part(self, charge: Charge) -> tuple[Scalar, ...]:
        return self.ambient(charge)[0]

    def antichiral_part(self, charge: Charge) -> tuple[Scalar, ...]:
        return self.ambient(charge)[1]

    def ambient(self, charge: Charge | Sequence[int]) -> AmbientVector:
        c = _coords(self, charge)
        b = self.backend
        plus = [b.zero] * self.space.d_plus
        minus = [b.zero] * self.space.d_minus
        for k, (gp, gm) in zip(c, self.generators):
            if not k:
                continue
            kk = b.from_int(k)
            plus = [x + kk * y for x, y in zip(plus, gp)]
            minus = [x + kk * y for x, y in zip(minus, gm)]
        return tuple(plus), tuple(minus)

    def describe(self) -> dict[str, Any]:
        b = self.backend
        return {
            "rank": self.rank,
            "dPlus": self.space.d_plus,
            "dMinus": self.space.d_minus,
            "backend": b.name,
            "gramPlus": [[b.to_str(x) for x in row] for row in self.gram_plus],
            "gramMinus": [[b.to_str(x) for x in row] for row in self.gram_minus],
            "gramIndef": [list(r) for r in self.gram_indef],
        }


def _coords(lattice: Lattice, charge: Charge | Sequence[int]) -> tuple[int, ...]:
    c = as_charge(charge).coords
    if len(c) != lattice.rank:
        raise ValueError(f"charge {c} has {len(c)} coordinates, lattice rank is {lattice.rank}")
    return c


def _pairing_matrix(backend: ScalarBackend, vectors: Sequence[Sequence[Scalar]]) -> tuple[tuple[Scalar, ...], ...]:
    return tuple(tuple(backend.dot(u, v) for v in vectors) for u in vectors)


def build_lattice(
    space: SplitSpace,
    generators: Sequence[tuple[Sequence[Any], Sequence[Any]]],
    *,
    backend: ScalarBackend,
    r_squared: Any = None,
    validate: bool = True,
) -> Lattice:
    if len(generators) > space.dim:
        raise DependentGenerators(f"{len(generators)} generators in a space of dimension {space.dim}")

    converted: list[AmbientVector] = []
    for idx, (plus, minus) in enumerate(generators):
        if len(plus) != space.d_plus or len(minus) != space.d_minus:
            raise ValueError(
                f"generator {idx} has shape ({len(plus)}, {len(minus)}), expected ({space.d_plus}, {space.d_minus})"
            )
        try:
            gp = tuple(backend.convert(x, r_squared=r_squared) for x in plus)
            gm = tuple(backend.convert(x, r_squared=r_squared) for x in minus)
        except BackendMismatch as exc:
            raise BackendMismatch(f"generator {idx}: {exc}") from exc
        converted.append((gp, gm))

    gram_plus = _pairing_matrix(backend, [g[0] for g in converted])
    gram_minus = _pairing_matrix(backend, [g[1] for g in converted])
    euclid = [[p + m for p, m in zip(rp, rm)] for rp, rm in zip(gram_plus, gram_minus)]
    if not leading_minors_positive(backend, euclid):
        raise DependentGenerators("generators are linearly dependent (gramPlus + gramMinus is not positive definite)")

    lattice = Lattice(
        space=space,
        backend=backend,
        generators=tuple(converted),
        gram_plus=gram_plus,
        gram_minus=gram_minus,
        validated=bool(validate),
    )
    if validate:
        check_even(lattice)
    logger.debug("built rank-%d lattice in backend %s", lattice.rank, backend.name)
    return lattice


def check_even(lattice: Lattice) -> None:
    """Raise NonIntegralPairing or OddNorm unless (.|.) is integral and even."""
    gram = lattice.gram_indef
    for i, row in enumerate(gram):
        if row[i] % 2 != 0:
            raise OddNorm(f"(g{i}|g{i}) = {row[i]} is odd")


def indef_pairing(lattice: Lattice, a: Charge | Sequence[int], b: Charge | Sequence[int]) -> int:
    ca = _coords(lattice, a)
    cb = _coords(lattice, b)
    gram = lattice.gram_indef
    return int(sum(ca[i] * gram[i][j] * cb[j] for i in range(len(ca)) for j in range(len(cb)) if ca[i] and cb[j]))


def _quadratic(backend: ScalarBackend, gram: Sequence[Sequence[Scalar]], a: Sequence[int], b: Sequence[int]) -> Scalar:
    total = backend.zero
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            if bj:
                total = total + backend.from_int(ai * bj) * gram[i][j]
    return total


def chiral_pairing(lattice: Lattice, a: Charge | Sequence[int], b: Charge | Sequence[int]) -> Scalar:
    """(p a, p b) from gramPlus."""
    return _quadratic(lattice.backend, lattice.gram_plus, _coords(lattice, a), _coords(lattice, b))


def antichiral_pairing(lattice: Lattice, a: Charge | Sequence[int], b: Charge | Sequence[int]) -> Scalar:
    return _quadratic(lattice.backend, lattice.gram_minus, _coords(lattice, a), _coords(lattice, b))


def chiral_norms(lattice: Lattice, charge: Charge | Sequence[int]) -> tuple[Scalar, Scalar]:
    return chiral_pairing(lattice, charge, charge), antichiral_pairing(lattice, charge, charge)


def spin(lattice: Lattice, charge: Charge | Sequence[int]) -> int:
    norm = indef_pairing(lattice, charge, charge)
    if norm % 2 != 0:
        raise OddNorm(f"charge {tuple(as_charge(charge).coords)} has odd norm {norm}")
    return norm // 2


def enumerate_box(lattice: Lattice, radius: int) -> list[AmbientVector]:
    return [lattice.ambient(c) for c in charge_box(lattice.rank, radius)]


def coordinates_of(lattice: Lattice, vector: AmbientVector) -> Optional[tuple[Scalar, ...]]:
    """Real coordinates of vector in the generator basis, or None outside the span."""
    b = lattice.backend
    euclid = [[p + m for p, m in zip(rp, rm)] for rp, rm in zip(lattice.gram_plus, lattice.gram_minus)]
    rhs = [b.dot(g[0], vector[0]) + b.dot(g[1], vector[1]) for g in lattice.generators]
    coords = solve_square(b, euclid, rhs)
    if coords is None:
        return None
    rebuilt_plus = [b.zero] * lattice.space.d_plus
    rebuilt_minus = [b.zero] * lattice.space.d_minus
    for c, (gp, gm) in zip(coords, lattice.generators):
        rebuilt_plus = [x + c * y for x, y in zip(rebuilt_plus, gp)]
        rebuilt_minus = [x + c * y for x, y in zip(rebuilt_minus, gm)]
    same = all(b.eq(x, y) for x, y in zip(rebuilt_plus, vector[0])) and all(
        b.eq(x, y) for x, y in zip(rebuilt_minus, vector[1])
    )
    return tuple(coords) if same else None


def integer_coordinates_of(lattice: Lattice, vector: AmbientVector) -> Optional[tuple[int, ...]]:
    coords = coordinates_of(lattice, vector)
    if coords is None:
        return None
    out: list[int] = []
    for c in coords:
        n = lattice.backend.as_integer(c)
        if n is None:
            return None
        out.append(n)
    return tuple(out)


def unimodular_change(source: Lattice, target: Lattice) -> Optional[tuple[tuple[int, ...], ...]]:
    """Integer matrix U with target generator i = sum_j U[i][j] source generator j, det U = +-1."""
    if source.rank != target.rank:
        return None
    rows: list[tuple[int, ...]] = []
    for g in target.generators:
        coords = integer_coordinates_of(source, g)
        if coords is None:
            return None
        rows.append(coords)
    det = int(sympy.Matrix(rows).det()) if rows else 1
    if abs(det) != 1:
        return None
    return tuple(rows)
