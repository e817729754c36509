from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from latticecft.errors import DegenerateForm
from latticecft.lattice.core import Lattice
from latticecft.lattice.smith import smith_normal_form

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DiscriminantData:
    invariant_factors: tuple[int, ...]
    representatives: tuple[tuple[Fraction, ...], ...]
    norms: tuple[Fraction, ...]  # (x|x) mod 2

    @property
    def order(self) -> int:
        return len(self.representatives)


@dataclass(frozen=True)
class MaximalityVerdict:
    maximal: bool
    witness: Optional[tuple[Fraction, ...]] = None
    witness_norm: Optional[Fraction] = None


def _norm(gram: tuple[tuple[int, ...], ...], x: tuple[Fraction, ...]) -> Fraction:
    n = len(x)
    return sum((x[i] * gram[i][j] * x[j] for i in range(n) for j in range(n)), Fraction(0))


def discriminant_data(lattice: Lattice) -> DiscriminantData:
    gram = lattice.gram_indef
    n = len(gram)
    form = smith_normal_form(gram)
    factors = form.invariant_factors
    if n == 0 or any(f == 0 for f in factors):
        raise DegenerateForm("gramIndef is degenerate; the discriminant group is infinite")

    # Q*/Q = Z^n / G Z^n; with L G R = D the dual coset of k (0 <= k_i < d_i) is R D^{-1} k.
    right = form.right
    reps: list[tuple[Fraction, ...]] = []
    norms: list[Fraction] = []
    for k in itertools.product(*(range(int(f)) for f in factors)):
        scaled = [Fraction(k[i], factors[i]) for i in range(n)]
        x = tuple(sum((right[r][c] * scaled[c] for c in range(n)), Fraction(0)) for r in range(n))
        x = tuple(v - (v.numerator // v.denominator) for v in x)
        reps.append(x)
        norms.append(_norm(gram, x) % 2)
    logger.debug("discriminant group of order %d, invariant factors %s", len(reps), factors)
    return DiscriminantData(invariant_factors=tuple(factors), representatives=tuple(reps), norms=tuple(norms))


def is_maximal_even(lattice: Lattice) -> MaximalityVerdict:
    """No proper even overlattice exists iff no nonzero dual coset has norm in 2Z."""
    data = discriminant_data(lattice)
    for x, norm in zip(data.representatives, data.norms):
        if any(x) and norm == 0:
            return MaximalityVerdict(maximal=False, witness=x, witness_norm=_norm(lattice.gram_indef, x))
    return MaximalityVerdict(maximal=True)
