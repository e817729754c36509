from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Optional

from latticecft.errors import OutOfWindow
from latticecft.fock.module import FockModule, add_into
from latticecft.fock.operators import GradedOperator
from latticecft.fock.partitions import State, state_to_json
from latticecft.scalars import Scalar, ScalarBackend
from latticecft.types import Charge
from latticecft.vertex.series import SeriesOperator

# (chiral state, antichiral state)
TensorState = tuple[State, State]


@dataclass(frozen=True)
class TensorMatrix:
    """Sparse operator from one sector's tensor basis to another's."""

    backend: ScalarBackend
    source: Charge
    target: Charge
    columns: Mapping[TensorState, Mapping[TensorState, Scalar]]

    def __add__(self, other: "TensorMatrix") -> "TensorMatrix":
        if (self.source, self.target) != (other.source, other.target):
            raise ValueError("tensor matrices act between different sectors")
        b = self.backend
        cols = {s: dict(col) for s, col in self.columns.items()}
        for s, col in other.columns.items():
            out = cols.setdefault(s, {})
            for t, y in col.items():
                add_into(b, out, t, y)
        return TensorMatrix(b, self.source, self.target, {s: c for s, c in cols.items() if c})

    def scaled(self, c: Scalar) -> "TensorMatrix":
        b = self.backend
        if b.is_zero(c):
            return TensorMatrix(b, self.source, self.target, {})
        return TensorMatrix(
            b, self.source, self.target, {s: {t: c * y for t, y in col.items()} for s, col in self.columns.items()}
        )

    def difference(self, other: "TensorMatrix") -> Optional[dict[str, Any]]:
        b = self.backend
        for s in sorted(set(self.columns) | set(other.columns)):
            left = self.columns.get(s, {})
            right = other.columns.get(s, {})
            for t in sorted(set(left) | set(right)):
                x, y = left.get(t, b.zero), right.get(t, b.zero)
                if not b.eq(x, y):
                    return {
                        "source": [state_to_json(s[0]), state_to_json(s[1])],
                        "target": [state_to_json(t[0]), state_to_json(t[1])],
                        "lhs": b.to_str(x),
                        "rhs": b.to_str(y),
                    }
        return None


@dataclass(frozen=True)
class TensorBlock:
    """sign * (chiral (x) antichiral) between two sectors; a missing factor means the block is zero."""

    source: Charge
    target: Charge
    sign: int
    chiral: Optional[GradedOperator]
    antichiral: Optional[GradedOperator]

    @property
    def is_zero(self) -> bool:
        return self.chiral is None or self.antichiral is None

    def matrix(self, backend: ScalarBackend) -> TensorMatrix:
        if self.is_zero:
            return TensorMatrix(backend, self.source, self.target, {})
        s_sign = backend.from_int(self.sign)
        cols: dict[TensorState, dict[TensorState, Scalar]] = {}
        for sp, col_p in self.chiral.columns.items():
            for sm, col_m in self.antichiral.columns.items():
                out: dict[TensorState, Scalar] = {}
                for tp, x in col_p.items():
                    for tm, y in col_m.items():
                        out[(tp, tm)] = s_sign * x * y
                if out:
                    cols[(sp, sm)] = out
        return TensorMatrix(backend, self.source, self.target, cols)


@dataclass(frozen=True)
class SectorField:
    source: Charge
    target: Charge
    sign: int
    chiral: SeriesOperator
    antichiral: SeriesOperator


@dataclass(frozen=True)
class BigradedSeries:
    """Y(z, zbar) = sum sign * Y+_k Y-_l z^(o+ + k) zbar^(o- + l), one SectorField per source sector."""

    alpha: Charge
    order: int
    sectors: Mapping[Charge, SectorField]

    def field_on(self, source: Charge) -> SectorField:
        try:
            return self.sectors[source]
        except KeyError:
            raise OutOfWindow(f"sector {source} has no in-box target for charge {self.alpha}") from None

    def coefficient(self, source: Charge, k_plus: int, k_minus: int) -> TensorBlock:
        f = self.field_on(source)
        return TensorBlock(
            source=f.source,
            target=f.target,
            sign=f.sign,
            chiral=f.chiral.coefficient(k_plus),
            antichiral=f.antichiral.coefficient(k_minus),
        )


def _power_for(module: FockModule, offset: Scalar, r: Any, order: int) -> Optional[int]:
    """k with offset + k = -r - 1, None if r lies off the grid Z - offset."""
    b = module.backend
    value = -b.convert(r) - b.one - offset
    k = b.as_integer(value)
    if k is None:
        return None
    if abs(k) > order:
        raise OutOfWindow(f"Fourier index {b.to_str(b.convert(r))} needs series power {k} beyond {order}")
    return k


def fourier_component(Y: BigradedSeries, source: Charge, r: Any, s: Any) -> TensorBlock:
    """Coefficient of z^(-r-1) zbar^(-s-1) on the given source sector."""
    f = Y.field_on(source)
    k_plus = _power_for(f.chiral.source, f.chiral.offset, r, Y.order)
    k_minus = _power_for(f.antichiral.source, f.antichiral.offset, s, Y.order)
    return TensorBlock(
        source=f.source,
        target=f.target,
        sign=f.sign,
        chiral=None if k_plus is None else f.chiral.coefficient(k_plus),
        antichiral=None if k_minus is None else f.antichiral.coefficient(k_minus),
    )
