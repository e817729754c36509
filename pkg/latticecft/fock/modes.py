from __future__ import annotations

from typing import Any, Sequence

from latticecft.errors import OutOfWindow
from latticecft.fock.module import FockModule
from latticecft.fock.operators import GradedOperator
from latticecft.fock.partitions import particle_number
from latticecft.scalars import Scalar


def as_mode_vector(module: FockModule, alpha: Sequence[Any]) -> tuple[Scalar, ...]:
    if len(alpha) != module.colors:
        raise ValueError(f"mode vector has {len(alpha)} entries, module has {module.colors} colors")
    b = module.backend
    return tuple(x if b.domain.of_type(x) else b.convert(x) for x in alpha)


def unit_vector(module: FockModule, color: int) -> tuple[Scalar, ...]:
    b = module.backend
    return tuple(b.one if j == color else b.zero for j in range(module.colors))


def mode_operator(module: FockModule, alpha: Sequence[Any], m: int) -> GradedOperator:
    """alpha(m): creation for m < 0, contraction for m > 0, the scalar (alpha, weight) at m = 0."""
    if abs(m) > module.cutoff:
        raise OutOfWindow(f"mode {m} exceeds the cutoff {module.cutoff}")
    vec = as_mode_vector(module, alpha)
    cache = module._cache.setdefault("modes", {})
    key = (tuple(module.backend.key(x) for x in vec), int(m))
    if key not in cache:
        cache[key] = GradedOperator.from_action(
            module,
            module,
            shift=-m,
            band=max(0, -m),
            action=lambda s: module.apply_mode(vec, m, module.basis_vector(s)),
        )
    return cache[key]


def parity_operator(module: FockModule) -> GradedOperator:
    """(-1)^(number of excitations), diagonal."""
    b = module.backend
    one, minus = b.one, b.from_int(-1)
    cols = {s: {s: (minus if particle_number(s) % 2 else one)} for s in module.basis}
    return GradedOperator(source=module, target=module, shift=0, band=0, columns=cols)
