from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Mapping, Optional

from latticecft.errors import OutOfWindow
from latticecft.fock.module import FockModule, Vector, add_into
from latticecft.fock.partitions import State, energy, state_to_json
from latticecft.scalars import Scalar

Column = Mapping[State, Scalar]


@dataclass(frozen=True, eq=False)
class GradedOperator:
    """Energy-graded operator between two truncated modules.

    Columns are stored only for source states of energy <= cutoff - band; on those
    states every matrix element equals the untruncated one.
    """

    source: FockModule
    target: FockModule
    shift: int  # largest energy raise; exact for homogeneous operators
    band: int
    columns: Mapping[State, Column]

    @property
    def window(self) -> int:
        """Largest source energy covered by the stored columns."""
        return self.source.cutoff - self.band

    @property
    def backend(self):
        return self.source.backend

    @classmethod
    def from_action(
        cls,
        source: FockModule,
        target: FockModule,
        *,
        shift: int,
        band: Optional[int] = None,
        action: Callable[[State], Vector],
    ) -> "GradedOperator":
        band = max(0, shift) if band is None else int(band)
        top = source.cutoff - band
        cols: dict[State, Column] = {}
        for s in source.states_up_to(top):
            image = action(s)
            if image:
                cols[s] = image
        return cls(source=source, target=target, shift=int(shift), band=band, columns=cols)

    def column(self, s: State) -> Column:
        if energy(s) > self.window:
            raise OutOfWindow(f"state {state_to_json(s)} lies outside the validity window (energy <= {self.window})")
        return self.columns.get(s, {})

    def entry(self, t: State, s: State) -> Scalar:
        return self.column(s).get(t, self.backend.zero)

    def apply(self, vec: Mapping[State, Scalar]) -> Vector:
        b = self.backend
        out: Vector = {}
        for s, x in vec.items():
            for t, y in self.column(s).items():
                add_into(b, out, t, y * x)
        return out

    def _require_same(self, other: "GradedOperator") -> None:
        if not (self.source.same_as(other.source) and self.target.same_as(other.target)):
            raise ValueError("operators act between different modules")

    def compose(self, other: "GradedOperator") -> "GradedOperator":
        """self after other."""
        if not self.source.same_as(other.target):
            raise ValueError("composition across mismatched modules")
        band = max(other.band, self.band + other.shift, 0)
        top = other.source.cutoff - band
        b = self.backend
        cols: dict[State, Column] = {}
        for s, col in other.columns.items():
            if energy(s) > top:
                continue
            out: Vector = {}
            for w, x in col.items():
                for t, y in self.columns.get(w, {}).items():
                    add_into(b, out, t, y * x)
            if out:
                cols[s] = out
        return GradedOperator(source=other.source, target=self.target, shift=self.shift + other.shift, band=band, columns=cols)

    def __matmul__(self, other: "GradedOperator") -> "GradedOperator":
        return self.compose(other)

    def _combine(self, other: "GradedOperator", sign: int) -> "GradedOperator":
        self._require_same(other)
        band = max(self.band, other.band)
        top = self.source.cutoff - band
        b = self.backend
        s_sign = b.from_int(sign)
        cols: dict[State, Column] = {}
        for s in self.source.states_up_to(top):
            out: Vector = dict(self.columns.get(s, {}))
            for t, y in other.columns.get(s, {}).items():
                add_into(b, out, t, s_sign * y)
            if out:
                cols[s] = out
        return GradedOperator(
            source=self.source, target=self.target, shift=max(self.shift, other.shift), band=band, columns=cols
        )

    def __add__(self, other: "GradedOperator") -> "GradedOperator":
        return self._combine(other, 1)

    def __sub__(self, other: "GradedOperator") -> "GradedOperator":
        return self._combine(other, -1)

    def scaled(self, c: Scalar) -> "GradedOperator":
        b = self.backend
        if b.is_zero(c):
            cols: dict[State, Column] = {}
        else:
            cols = {s: {t: c * y for t, y in col.items()} for s, col in self.columns.items()}
        return GradedOperator(source=self.source, target=self.target, shift=self.shift, band=self.band, columns=cols)

    def __neg__(self) -> "GradedOperator":
        return self.scaled(self.backend.from_int(-1))

    def commutator(self, other: "GradedOperator") -> "GradedOperator":
        return self.compose(other) - other.compose(self)

    def rebind(self, source: FockModule, target: FockModule) -> "GradedOperator":
        """Same matrix between modules with the same basis (weights may differ)."""
        if source.cutoff != self.source.cutoff or target.cutoff != self.target.cutoff:
            raise ValueError("rebinding needs equal cutoffs")
        return GradedOperator(source=source, target=target, shift=self.shift, band=self.band, columns=self.columns)

    def difference(self, other: "GradedOperator") -> Optional[dict[str, Any]]:
        """First mismatching matrix element on the common window, or None."""
        b = self.backend
        top = min(self.window, other.window)
        for s in self.source.states_up_to(top):
            left = self.columns.get(s, {})
            right = other.columns.get(s, {})
            for t in sorted(set(left) | set(right)):
                x = left.get(t, b.zero)
                y = right.get(t, b.zero)
                if not b.eq(x, y):
                    return {
                        "source": state_to_json(s),
                        "target": state_to_json(t),
                        "lhs": b.to_str(x),
                        "rhs": b.to_str(y),
                    }
        return None

    def window_size(self, other: Optional["GradedOperator"] = None) -> int:
        top = self.window if other is None else min(self.window, other.window)
        return len(self.source.states_up_to(top))

    def is_zero(self) -> bool:
        b = self.backend
        return all(b.is_zero(y) for col in self.columns.values() for y in col.values())


def identity(module: FockModule) -> GradedOperator:
    one = module.backend.one
    return GradedOperator(
        source=module, target=module, shift=0, band=0, columns={s: {s: one} for s in module.basis}
    )


def scalar_operator(module: FockModule, c: Scalar) -> GradedOperator:
    return identity(module).scaled(c)


def zero_operator(source: FockModule, target: FockModule, shift: int, band: int = 0) -> GradedOperator:
    return GradedOperator(source=source, target=target, shift=int(shift), band=max(0, int(band), int(shift)), columns={})
