from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from latticecft.errors import OutOfWindow
from latticecft.fock.module import FockModule, Vector, add_into
from latticecft.fock.modes import unit_vector
from latticecft.fock.operators import GradedOperator
from latticecft.fock.partitions import State, energy
from latticecft.scalars import Scalar


def sugawara_action(module: FockModule, m: int, vec: Mapping[State, Scalar]) -> Vector:
    """L_m = 1/2 sum_j sum_k :v_j(m-k) v_j(k):, applied without truncation."""
    b = module.backend
    if not vec:
        return {}
    top = max(energy(s) for s in vec)
    bound = top + abs(m) + 1
    out: Vector = {}
    for j in range(module.colors):
        unit = unit_vector(module, j)
        for k in range(-bound, bound + 1):
            left, right = m - k, k
            # annihilators act first
            first, second = (right, left) if right >= left else (left, right)
            step = module.apply_mode(unit, first, vec)
            if not step:
                continue
            for t, y in module.apply_mode(unit, second, step).items():
                add_into(b, out, t, b.half * y)
    return out


def sugawara(module: FockModule, m: int) -> GradedOperator:
    if abs(m) > module.cutoff:
        raise OutOfWindow(f"L_{m} exceeds the cutoff {module.cutoff}")
    cache = module._cache.setdefault("sugawara", {})
    if m not in cache:
        cache[m] = GradedOperator.from_action(
            module,
            module,
            shift=-m,
            band=max(0, -m),
            action=lambda s: sugawara_action(module, m, module.basis_vector(s)),
        )
    return cache[m]


def central_term(module: FockModule, m: int) -> Scalar:
    """(c/12) m (m^2 - 1) with c the number of colors."""
    b = module.backend
    return b.from_rational(Fraction(module.colors * m * (m * m - 1), 12))
