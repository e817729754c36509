from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from numbers import Number
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from latticecft.errors import InconsistentSystem
from latticecft.lattice import Lattice, indef_pairing
from latticecft.phases import Phase
from latticecft.reports import Report, ReportBuilder
from latticecft.types import Charge, as_charge, charge_box, in_box

logger = logging.getLogger(__name__)

CocycleValues = Callable[[Charge, Charge], Phase]
SCALAR_TRIPLES = 20000


@dataclass(frozen=True, eq=False)
class Cocycle:
    lattice: Lattice
    table: tuple[tuple[int, ...], ...]  # entries +1 / -1 on the ordered generator basis

    def __post_init__(self) -> None:
        n = self.lattice.rank
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise ValueError(f"cocycle table must be {n}x{n}")
        if any(v not in (1, -1) for row in self.table for v in row):
            raise ValueError("cocycle table entries must be +1 or -1")

    @cached_property
    def exponents(self) -> np.ndarray:
        """0/1 matrix with table = (-1)^exponents."""
        n = self.lattice.rank
        return np.array([[1 if v == -1 else 0 for v in row] for row in self.table], dtype=np.int64).reshape(n, n)

    def __call__(self, a: Charge | Sequence[int], b: Charge | Sequence[int]) -> int:
        return eval_cocycle(self, a, b)

    def phase(self, a: Charge, b: Charge) -> Phase:
        return Phase.from_sign(eval_cocycle(self, a, b))


def build_cocycle(lattice: Lattice) -> Cocycle:
    gram = lattice.gram_indef
    n = lattice.rank
    table: list[tuple[int, ...]] = []
    for i in range(n):
        row: list[int] = []
        for j in range(n):
            if i < j:
                row.append(-1 if gram[i][j] % 2 else 1)
            elif i == j:
                row.append(-1 if (gram[i][i] // 2) % 2 else 1)
            else:
                row.append(1)
        table.append(tuple(row))
    return Cocycle(lattice=lattice, table=tuple(table))


def eval_cocycle(c: Cocycle, a: Charge | Sequence[int], b: Charge | Sequence[int]) -> int:
    ca = as_charge(a).coords
    cb = as_charge(b).coords
    e = 0
    for i, ai in enumerate(ca):
        if ai % 2 == 0:
            continue
        for j, bj in enumerate(cb):
            if bj % 2 and c.table[i][j] == -1:
                e += 1
    return -1 if e % 2 else 1


def _exponent_grid(exponents: np.ndarray, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    # float matmul is exact for these small integers
    return np.mod(np.rint(left.astype(np.float64) @ exponents.astype(np.float64) @ right.astype(np.float64).T), 2).astype(
        np.int64
    )


def verify_cocycle_laws(c: Cocycle, radius: int) -> Report:
    rb = ReportBuilder("cocycle")
    lattice = c.lattice
    n = lattice.rank
    rb.note(f"generator order: {', '.join(f'g{i}' for i in range(n))}")
    if n == 0:
        for law in ("identity", "commutator", "diagonal", "bimultiplicative"):
            rb.check(f"cocycle.{law}", f"cocycle.{law}", True, detail="rank-0 lattice")
        return rb.build()

    box = charge_box(n, radius)
    x = np.array([q.coords for q in box], dtype=np.int64)
    t = c.exponents
    gram = np.array(lattice.gram_indef, dtype=np.int64)
    e_xx = _exponent_grid(t, x, x)

    # eps(a,b) eps(a+b,c) = eps(b,c) eps(a,b+c)
    # Values on the box must factor through coordinate parities; the identity is then checked on parity classes.
    bits = 1 << np.arange(n, dtype=np.int64)
    classes = np.mod(x, 2) @ bits
    reps = (np.arange(1 << n, dtype=np.int64)[:, None] >> np.arange(n, dtype=np.int64)) & 1
    e_cls = _exponent_grid(t, reps, reps)
    witness = None
    bad = np.argwhere(e_xx != e_cls[np.ix_(classes, classes)])
    if bad.size:
        i, j = (int(v) for v in bad[0])
        witness = {"a": list(box[i].coords), "b": list(box[j].coords), "reason": "value depends on more than parities"}
    else:
        ci, cj, ck = np.indices((1 << n,) * 3, dtype=np.int64)
        left = (e_cls[ci, cj] + e_cls[ci ^ cj, ck]) % 2
        right = (e_cls[cj, ck] + e_cls[ci, cj ^ ck]) % 2
        bad = np.argwhere(left != right)
        if bad.size:
            i, j, k = (int(v) for v in bad[0])
            witness = {"a": reps[i].tolist(), "b": reps[j].tolist(), "c": reps[k].tolist()}
    rb.check(
        "cocycle.identity",
        "cocycle.identity",
        witness is None,
        witness=witness,
        detail=f"{len(box)} box charges in {len(set(classes.tolist()))} parity classes",
    )

    # eps(a,b) = (-1)^{(a|b)} eps(b,a)
    pair = np.mod(x @ gram @ x.T, 2)
    bad = np.argwhere((e_xx - e_xx.T - pair) % 2 != 0)
    witness = None
    if bad.size:
        i, j = (int(v) for v in bad[0])
        witness = {"a": list(box[i].coords), "b": list(box[j].coords), "pairing": int((x[i] @ gram @ x[j]))}
    rb.check("cocycle.commutator", "cocycle.commutator", witness is None, witness=witness)

    # eps(a,a) = (-1)^{(a|a)/2}
    half_norms = np.einsum("ij,jk,ik->i", x, gram, x) // 2
    bad = np.argwhere((np.diag(e_xx) - half_norms) % 2 != 0)
    witness = None
    if bad.size:
        i = int(bad[0][0])
        witness = {"a": list(box[i].coords), "halfNorm": int(half_norms[i])}
    rb.check("cocycle.diagonal", "cocycle.diagonal", witness is None, witness=witness)

    # eval(a+b, c) = eval(a, c) eval(b, c) through the scalar evaluator on the largest box with few enough triples
    witness = None
    bimul_radius = int(radius)
    while bimul_radius > 1 and (2 * bimul_radius + 1) ** (3 * n) > SCALAR_TRIPLES:
        bimul_radius -= 1
    small = charge_box(n, bimul_radius)
    for a in small:
        for b in small:
            for cc in small:
                if eval_cocycle(c, a + b, cc) != eval_cocycle(c, a, cc) * eval_cocycle(c, b, cc) or eval_cocycle(
                    c, cc, a + b
                ) != eval_cocycle(c, cc, a) * eval_cocycle(c, cc, b):
                    witness = {"a": list(a.coords), "b": list(b.coords), "c": list(cc.coords)}
                    break
            if witness:
                break
        if witness:
            break
    detail = f"box radius {bimul_radius}"
    if bimul_radius < int(radius):
        detail += f" (capped from {int(radius)})"
    rb.check("cocycle.bimultiplicative", "cocycle.bimultiplicative", witness is None, witness=witness, detail=detail)
    return rb.build()


@dataclass(frozen=True)
class TwistedAlgebraElement:
    """Finite sum of twisted group algebra basis elements e_alpha."""

    terms: Mapping[Charge, Number] = field(default_factory=dict)

    @classmethod
    def basis(cls, charge: Charge | Sequence[int], coefficient: Number = 1) -> "TwistedAlgebraElement":
        return cls({as_charge(charge): coefficient})

    def cleaned(self) -> "TwistedAlgebraElement":
        return TwistedAlgebraElement({k: v for k, v in self.terms.items() if v != 0})

    def __add__(self, other: "TwistedAlgebraElement") -> "TwistedAlgebraElement":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return TwistedAlgebraElement(out).cleaned()

    def scaled(self, s: Number) -> "TwistedAlgebraElement":
        return TwistedAlgebraElement({k: s * v for k, v in self.terms.items()}).cleaned()

    def same_as(self, other: "TwistedAlgebraElement", tolerance: float = 0.0) -> bool:
        keys = set(self.terms) | set(other.terms)
        return all(abs(self.terms.get(k, 0) - other.terms.get(k, 0)) <= tolerance for k in keys)


def algebra_product(c: Cocycle, x: TwistedAlgebraElement, y: TwistedAlgebraElement) -> TwistedAlgebraElement:
    out: dict[Charge, Number] = {}
    for a, xa in x.terms.items():
        for b, yb in y.terms.items():
            key = a + b
            out[key] = out.get(key, 0) + eval_cocycle(c, a, b) * xa * yb
    return TwistedAlgebraElement(out).cleaned()


def algebra_inner(x: TwistedAlgebraElement, y: TwistedAlgebraElement) -> Number:
    return sum((x.terms[k].conjugate() * y.terms[k] for k in x.terms if k in y.terms), 0)


def verify_twisted_algebra(c: Cocycle, radius: int, *, seed: int = 0, samples: int = 8) -> Report:
    rb = ReportBuilder("cocycle")
    n = c.lattice.rank
    box = charge_box(n, radius)
    e = TwistedAlgebraElement.basis

    witness = None
    for a in box:
        for b in box:
            for cc in box:
                left = algebra_product(c, algebra_product(c, e(a), e(b)), e(cc))
                right = algebra_product(c, e(a), algebra_product(c, e(b), e(cc)))
                if not left.same_as(right):
                    witness = {"a": list(a.coords), "b": list(b.coords), "c": list(cc.coords)}
                    break
            if witness:
                break
        if witness:
            break
    rb.check("twisted.associativity", "twisted.product", witness is None, witness=witness)

    witness = None
    for a in box:
        for b in box:
            sign = -1 if indef_pairing(c.lattice, a, b) % 2 else 1
            if not algebra_product(c, e(a), e(b)).same_as(algebra_product(c, e(b), e(a)).scaled(sign)):
                witness = {"a": list(a.coords), "b": list(b.coords)}
                break
        if witness:
            break
    rb.check("twisted.commutation", "twisted.commutation", witness is None, witness=witness)

    zero = e(Charge.zero(n))
    witness = None
    for a in box:
        if not (algebra_product(c, zero, e(a)).same_as(e(a)) and algebra_product(c, e(a), zero).same_as(e(a))):
            witness = {"a": list(a.coords)}
            break
    rb.check("twisted.unit", "twisted.product", witness is None, witness=witness)

    rng = np.random.default_rng(seed)
    witness = None
    for trial in range(samples):
        picks = rng.choice(len(box), size=(2, min(4, len(box))), replace=True)
        coeffs = rng.integers(-3, 4, size=(2, picks.shape[1])) + 1j * rng.integers(-3, 4, size=(2, picks.shape[1]))
        x = TwistedAlgebraElement({})
        y = TwistedAlgebraElement({})
        for k in range(picks.shape[1]):
            x = x + e(box[int(picks[0, k])], complex(coeffs[0, k]))
            y = y + e(box[int(picks[1, k])], complex(coeffs[1, k]))
        a = box[int(rng.integers(len(box)))]
        lhs = algebra_inner(algebra_product(c, e(a), x), algebra_product(c, e(a), y))
        rhs = algebra_inner(x, y)
        if abs(lhs - rhs) > 1e-12:
            witness = {"trial": trial, "a": list(a.coords), "lhs": str(lhs), "rhs": str(rhs)}
            break
    rb.check("twisted.unitarity", "twisted.unitarity", witness is None, witness=witness)
    return rb.build()


@dataclass(frozen=True)
class Coboundary:
    values: Mapping[Charge, Phase]

    def __call__(self, charge: Charge) -> Phase:
        return self.values[charge]

    def delta(self, a: Charge, b: Charge) -> Phase:
        return self.values[a] * self.values[b] / self.values[a + b]


def coboundary_solve(c1: CocycleValues, c2: CocycleValues, radius: int, rank: int) -> Optional[Coboundary]:
    """chi on the box with c1/c2 = chi(a) chi(b) / chi(a+b) wherever a, b, a+b lie in the box."""
    box = charge_box(rank, radius)

    def quotient(a: Charge, b: Charge) -> Phase:
        return c1(a, b) / c2(a, b)

    for a in box:
        for b in box:
            if not quotient(a, b).is_close(quotient(b, a)):
                logger.info("quotient is not symmetric at %s, %s", a, b)
                return None

    zero = Charge.zero(rank)
    chi: dict[Charge, Phase] = {zero: Phase(Fraction(0))}
    steps: list[Charge] = []
    for i in range(rank):
        unit = Charge(tuple(1 if k == i else 0 for k in range(rank)))
        steps.append(unit)
        steps.append(-unit)
    if radius >= 1:
        for unit in steps[0::2]:
            chi[unit] = Phase(Fraction(0))
            chi[-unit] = quotient(unit, -unit) / chi[unit] * chi[zero]

    queue: deque[Charge] = deque(chi)
    while queue:
        a = queue.popleft()
        for s in steps:
            nxt = a + s
            if nxt in chi or not in_box(nxt, radius):
                continue
            chi[nxt] = chi[a] * chi[s] / quotient(a, s)
            queue.append(nxt)

    result = Coboundary(values=chi)
    for a in box:
        for b in box:
            if in_box(a + b, radius) and not result.delta(a, b).is_close(quotient(a, b)):
                raise InconsistentSystem(f"no coboundary matches the quotient at {a}, {b}")
    return result
