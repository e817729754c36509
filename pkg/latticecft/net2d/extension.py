from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Mapping, Optional

from latticecft.cocycle import Cocycle, build_cocycle
from latticecft.fock.module import FockModule, build_module
from latticecft.fock.partitions import State
from latticecft.lattice import Lattice
from latticecft.scalars import Scalar
from latticecft.types import Charge, charge_box, in_box

logger = logging.getLogger(__name__)

# Sparse vector of H_Q: (sector, chiral state, antichiral state) -> coefficient.
SpaceVector = dict[tuple[Charge, State, State], Scalar]


@dataclass(frozen=True)
class Sector:
    charge: Charge
    chiral: FockModule
    antichiral: FockModule

    @property
    def minimal_bigrade(self) -> tuple[Scalar, Scalar]:
        return self.chiral.lowest_weight, self.antichiral.lowest_weight


@dataclass(frozen=True, eq=False)
class ExtensionSpace:
    """Direct sum of chiral (x) antichiral Fock modules over a coordinate box of charges."""

    lattice: Lattice
    cocycle: Cocycle
    radius: int
    cutoff: int
    sectors: Mapping[Charge, Sector]

    @property
    def backend(self):
        return self.lattice.backend

    @property
    def charges(self) -> list[Charge]:
        return sorted(self.sectors)

    def sector(self, charge: Charge) -> Sector:
        return self.sectors[charge]

    def contains(self, charge: Charge) -> bool:
        return charge in self.sectors

    @property
    def total_states(self) -> int:
        return sum(len(s.chiral.basis) * len(s.antichiral.basis) for s in self.sectors.values())

    def inner(self, u: Mapping[tuple[Charge, State, State], Scalar], v: Mapping[tuple[Charge, State, State], Scalar]) -> Scalar:
        """Sector-wise tensor product of the Fock inner products."""
        b = self.backend
        total = b.zero
        for (lam, sp, sm), x in u.items():
            sec = self.sectors[lam]
            for (mu, tp, tm), y in v.items():
                if mu != lam:
                    continue
                g = sec.chiral.pairing(sp, tp) * sec.antichiral.pairing(sm, tm)
                if g:
                    total = total + x * y * b.from_int(g)
        return total


def build_extension(
    lattice: Lattice,
    radius: int,
    cutoff: int,
    *,
    budget: Optional[int] = None,
    cocycle: Optional[Cocycle] = None,
) -> ExtensionSpace:
    if radius < 1:
        raise ValueError("box radius must be at least 1")
    b = lattice.backend
    space = lattice.space
    chiral = build_module(space.d_plus, None, cutoff, backend=b, side="chiral", budget=budget)
    antichiral = build_module(space.d_minus, None, cutoff, backend=b, side="antichiral", budget=budget)
    sectors: dict[Charge, Sector] = {}
    for lam in charge_box(lattice.rank, radius):
        plus, minus = lattice.ambient(lam)
        sectors[lam] = Sector(charge=lam, chiral=chiral.with_weight(plus), antichiral=antichiral.with_weight(minus))
    X = ExtensionSpace(
        lattice=lattice,
        cocycle=cocycle if cocycle is not None else build_cocycle(lattice),
        radius=int(radius),
        cutoff=int(cutoff),
        sectors=sectors,
    )
    logger.debug("extension space: %d sectors, %d tensor states", len(sectors), X.total_states)
    return X


def box_target(X: ExtensionSpace, alpha: Charge, lam: Charge) -> Optional[Charge]:
    target = alpha + lam
    return target if in_box(target, X.radius) else None
