from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Mapping, Optional, Sequence

from latticecft.errors import OutOfWindow
from latticecft.fock.module import FockModule, Vector, add_into, combine
from latticecft.fock.modes import as_mode_vector
from latticecft.fock.operators import GradedOperator, zero_operator
from latticecft.fock.partitions import State, energy
from latticecft.scalars import Scalar, ScalarBackend

logger = logging.getLogger(__name__)

CREATION = "-"
ANNIHILATION = "+"


def generalized_binomial(backend: ScalarBackend, x: Scalar, n: int) -> Scalar:
    """binom(x, n) = x (x-1) ... (x-n+1) / n! for any scalar x."""
    out = backend.one
    for j in range(n):
        out = out * (x - backend.from_int(j)) * backend.from_rational(Fraction(1, j + 1))
    return out


def creation_terms(module: FockModule, alpha: Sequence[Scalar], vec: Mapping[State, Scalar], order: int) -> list[Vector]:
    """e_0 v, ..., e_order v for E^-(alpha, z) = sum_k e_k z^k, without truncation.

    k e_k = sum_{n=1..k} alpha(-n) e_{k-n}.
    """
    b = module.backend
    terms: list[Vector] = [dict(vec)]
    for k in range(1, order + 1):
        parts = [(b.one, module.apply_mode(alpha, -n, terms[k - n])) for n in range(1, k + 1)]
        total = combine(b, parts)
        inv = b.from_rational(Fraction(1, k))
        terms.append({s: inv * x for s, x in total.items()})
    return terms


def annihilation_terms(module: FockModule, alpha: Sequence[Scalar], vec: Mapping[State, Scalar]) -> list[Vector]:
    """f_0 v, f_1 v, ... for E^+(alpha, z) = sum_k f_k z^-k, until the terms vanish.

    k f_k = -sum_{n=1..k} alpha(n) f_{k-n}.
    """
    b = module.backend
    top = max((energy(s) for s in vec), default=0)
    terms: list[Vector] = [dict(vec)]
    for k in range(1, top + 1):
        parts = [(b.one, module.apply_mode(alpha, n, terms[k - n])) for n in range(1, k + 1)]
        total = combine(b, parts)
        inv = b.from_rational(Fraction(-1, k))
        terms.append({s: inv * x for s, x in total.items()})
    return terms


@dataclass(frozen=True, eq=False)
class SeriesOperator:
    """sum_k A_k z^(offset + k) with |k| <= order."""

    source: FockModule
    target: FockModule
    coefficients: Mapping[int, GradedOperator]
    order: int
    offset: Scalar

    def coefficient(self, k: int) -> GradedOperator:
        if abs(k) > self.order:
            raise OutOfWindow(f"series power {k} outside |k| <= {self.order}")
        op = self.coefficients.get(k)
        if op is None:
            return zero_operator(self.source, self.target, shift=k, band=max(0, k))
        return op

    def powers(self) -> list[int]:
        return sorted(self.coefficients)

    def rebind(self, source: FockModule, target: FockModule, offset: Scalar) -> "SeriesOperator":
        return SeriesOperator(
            source=source,
            target=target,
            coefficients={k: op.rebind(source, target) for k, op in self.coefficients.items()},
            order=self.order,
            offset=offset,
        )


def _series_from_columns(
    source: FockModule,
    target: FockModule,
    columns: Mapping[int, dict[State, Vector]],
    *,
    order: int,
    offset: Scalar,
    bands: Mapping[int, int],
) -> SeriesOperator:
    coeffs = {
        k: GradedOperator(source=source, target=target, shift=k, band=bands[k], columns=cols)
        for k, cols in columns.items()
    }
    return SeriesOperator(source=source, target=target, coefficients=coeffs, order=order, offset=offset)


def exp_half(module: FockModule, alpha: Sequence[Any], sign: str, order: int) -> SeriesOperator:
    """E^-(alpha, z) (sign "-") or E^+(alpha, z) (sign "+") truncated at series order."""
    if order > module.cutoff:
        raise OutOfWindow(f"series order {order} exceeds the cutoff {module.cutoff}")
    vec = as_mode_vector(module, alpha)
    E = module.cutoff
    columns: dict[int, dict[State, Vector]] = {}
    bands: dict[int, int] = {}
    if sign == CREATION:
        for k in range(order + 1):
            columns[k] = {}
            bands[k] = k
        for s in module.basis:
            e = energy(s)
            terms = creation_terms(module, vec, module.basis_vector(s), min(order, E - e))
            for k, image in enumerate(terms):
                if image:
                    columns[k][s] = image
    elif sign == ANNIHILATION:
        for k in range(order + 1):
            columns[-k] = {}
            bands[-k] = 0
        for s in module.basis:
            for k, image in enumerate(annihilation_terms(module, vec, module.basis_vector(s))):
                if k <= order and image:
                    columns[-k][s] = image
    else:
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    return _series_from_columns(module, module, columns, order=order, offset=module.backend.zero, bands=bands)


class PreVertexImages:
    """Memoized Y_k s = sum_i e_{k+i} f_i s on basis states, no truncation.

    With an energy cap, the first miss on a state fills every k with energy(s) + k <= cap in one pass.
    """

    def __init__(self, module: FockModule, alpha: Sequence[Any], *, energy_cap: Optional[int] = None) -> None:
        self.module = module
        self.alpha = as_mode_vector(module, alpha)
        self.energy_cap = energy_cap
        self._memo: dict[tuple[State, int], Vector] = {}

    def state_images(self, s: State, ks: Iterable[int]) -> dict[int, Vector]:
        ks = list(ks)
        missing = [k for k in ks if (s, k) not in self._memo]
        if missing:
            b = self.module.backend
            lowered = annihilation_terms(self.module, self.alpha, self.module.basis_vector(s))
            top_k = max(missing)
            raised = [
                creation_terms(self.module, self.alpha, f_i, top_k + i) if top_k + i >= 0 and f_i else []
                for i, f_i in enumerate(lowered)
            ]
            for k in missing:
                out: Vector = {}
                for i, terms in enumerate(raised):
                    n = k + i
                    if 0 <= n < len(terms):
                        for t, x in terms[n].items():
                            add_into(b, out, t, x)
                self._memo[(s, k)] = out
        return {k: self._memo[(s, k)] for k in ks}

    def image(self, s: State, k: int) -> Vector:
        if (s, k) in self._memo:
            return self._memo[(s, k)]
        e = energy(s)
        if e + k < 0:
            # Y_k lowers below the vacuum
            return {}
        if self.energy_cap is None:
            self.state_images(s, [k])
        else:
            self.state_images(s, range(-e, max(k, self.energy_cap - e) + 1))
        return self._memo[(s, k)]

    def apply(self, k: int, vec: Mapping[State, Scalar]) -> Vector:
        b = self.module.backend
        out: Vector = {}
        for s, x in vec.items():
            for t, y in self.image(s, k).items():
                add_into(b, out, t, x * y)
        return out


def pre_vertex(
    module: FockModule,
    alpha: Sequence[Any],
    order: int,
    *,
    target: Optional[FockModule] = None,
) -> SeriesOperator:
    """Y(z) = E^-(alpha, z) E^+(alpha, z) z^{(alpha, weight)} from module to the alpha-shifted module."""
    if order > module.cutoff:
        raise OutOfWindow(f"series order {order} exceeds the cutoff {module.cutoff}")
    b = module.backend
    vec = as_mode_vector(module, alpha)
    if target is None:
        target = module.with_weight([w + a for w, a in zip(module.weight, vec)])
    offset = b.dot(vec, module.weight)
    images = PreVertexImages(module, vec)
    E = module.cutoff
    ks = range(-order, order + 1)
    columns: dict[int, dict[State, Vector]] = {k: {} for k in ks}
    bands = {k: max(0, k) for k in ks}
    for s in module.basis:
        e = energy(s)
        wanted = [k for k in ks if e <= E - bands[k] and e + k >= 0]
        if not wanted:
            continue
        for k, image in images.state_images(s, wanted).items():
            if image:
                columns[k][s] = image
    logger.debug("pre-vertex coefficients |k| <= %d on %d states", order, len(module.basis))
    return _series_from_columns(module, target, columns, order=order, offset=offset, bands=bands)
