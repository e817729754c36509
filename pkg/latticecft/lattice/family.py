from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional

import sympy

from latticecft.errors import NotRational
from latticecft.lattice.core import Lattice, SplitSpace, build_lattice, integer_coordinates_of
from latticecft.scalars import ScalarBackend, backend_for_r_squared, rational_r_squared

# v1 = (R/sqrt2, R/sqrt2), v2 = (1/(R sqrt2), -1/(R sqrt2)) in a 1+1 split space.
RANK2_GENERATORS = (
    (("R/sqrt2",), ("R/sqrt2",)),
    (("1/(R*sqrt2)",), ("-1/(R*sqrt2)",)),
)


def build_rank2_family(r_squared: Any, *, backend: Optional[ScalarBackend] = None) -> Lattice:
    if backend is None:
        backend, _ = backend_for_r_squared(r_squared)
    return build_lattice(SplitSpace(1, 1), RANK2_GENERATORS, backend=backend, r_squared=r_squared)


@dataclass(frozen=True)
class SublatticeCertificate:
    r_squared: Fraction
    coords: tuple[int, int]  # in the (v1, v2) basis
    chiral_value: Any  # sympy sqrt(2pq)
    antichiral_value: Any
    partner_coords: tuple[int, int]  # q v1 - p v2 = 0 + sqrt(2pq)
    verified: bool


def rational_sublattice_vector(r_squared: Any) -> SublatticeCertificate:
    """For R^2 = p/q: q v1 + p v2 = sqrt(2pq) + 0 lies in the lattice."""
    r2 = rational_r_squared(r_squared)
    if r2 is None:
        raise NotRational(f"r_squared={r_squared!r} is not rational")
    p, q = r2.numerator, r2.denominator
    if math.gcd(p, q) != 1 or p <= 0 or q <= 0:
        raise NotRational(f"r_squared must be p/q with coprime positive p, q, got {r2}")

    lattice = build_rank2_family(r2)
    b = lattice.backend
    value = sympy.sqrt(2 * p * q)
    chiral = (b.from_sympy(value),), (b.zero,)
    antichiral = (b.zero,), (b.from_sympy(value),)
    found = integer_coordinates_of(lattice, chiral)
    partner = integer_coordinates_of(lattice, antichiral)
    verified = found == (q, p) and partner == (q, -p)
    return SublatticeCertificate(
        r_squared=r2,
        coords=(q, p),
        chiral_value=value,
        antichiral_value=sympy.Integer(0),
        partner_coords=(q, -p),
        verified=bool(verified),
    )
