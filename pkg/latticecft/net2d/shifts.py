from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Optional, Sequence

from latticecft.cocycle import build_cocycle
from latticecft.errors import OutOfWindow
from latticecft.fock.modes import mode_operator, parity_operator
from latticecft.fock.operators import scalar_operator
from latticecft.fock.relations import Case, first_failure
from latticecft.fock.virasoro import sugawara
from latticecft.lattice import Lattice, build_lattice, indef_pairing
from latticecft.net2d.extension import ExtensionSpace, SpaceVector
from latticecft.reports import Report, ReportBuilder
from latticecft.types import Charge, as_charge, charge_box

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ShiftOperator:
    """Signed permutation of sectors: (psi Psi)_{alpha+lambda} = sign(lambda) Psi_lambda."""

    alpha: Charge
    twisted: bool
    targets: Mapping[Charge, tuple[Charge, int]]
    mask: frozenset[Charge]  # sources whose target leaves the box

    def act(self, lam: Charge) -> Optional[tuple[Charge, int]]:
        return self.targets.get(lam)

    def apply(self, vec: Mapping[tuple[Charge, Any, Any], Any], backend) -> SpaceVector:
        out: SpaceVector = {}
        for (lam, sp, sm), x in vec.items():
            hit = self.targets.get(lam)
            if hit is None:
                raise OutOfWindow(f"shift by {self.alpha} leaves the box from sector {lam}")
            target, sign = hit
            out[(target, sp, sm)] = backend.from_int(sign) * x
        return out


def shift_operator(X: ExtensionSpace, alpha: Charge | Sequence[int], *, twisted: bool = True) -> ShiftOperator:
    alpha = as_charge(alpha)
    targets: dict[Charge, tuple[Charge, int]] = {}
    mask: set[Charge] = set()
    for lam in X.charges:
        target = alpha + lam
        if not X.contains(target):
            mask.add(lam)
            continue
        targets[lam] = (target, X.cocycle(alpha, lam) if twisted else 1)
    return ShiftOperator(alpha=alpha, twisted=twisted, targets=targets, mask=frozenset(mask))


def _chain(ops: Sequence[ShiftOperator], lam: Charge) -> Optional[tuple[Charge, int]]:
    """Apply ops right to left; None once a step leaves the box."""
    sign = 1
    for op in reversed(ops):
        hit = op.act(lam)
        if hit is None:
            return None
        lam, s = hit
        sign *= s
    return lam, sign


def _basis_sample(X: ExtensionSpace, lam: Charge, grade: int) -> list[tuple[Charge, Any, Any]]:
    sec = X.sector(lam)
    return [(lam, sp, sm) for sp in sec.chiral.states_up_to(grade) for sm in sec.antichiral.states_up_to(grade)]


def verify_shift_laws(X: ExtensionSpace, radius: int, *, sample_grade: int = 1) -> Report:
    rb = ReportBuilder("net2d")
    b = X.backend
    L = X.lattice
    eps = X.cocycle
    charges = charge_box(L.rank, radius)
    shifts = {a: shift_operator(X, a) for a in charges}
    simple = {a: shift_operator(X, a, twisted=False) for a in charges}
    for a in charges:
        neg = -a
        if neg not in shifts:
            shifts[neg] = shift_operator(X, neg)

    def commutation() -> Iterable[tuple[Optional[dict[str, Any]], dict[str, Any]]]:
        for a in charges:
            for c in charges:
                sign = -1 if indef_pairing(L, a, c) % 2 else 1
                for lam in X.charges:
                    left = _chain([shifts[a], shifts[c]], lam)
                    right = _chain([shifts[c], shifts[a]], lam)
                    if left is None or right is None:
                        continue
                    if left[0] != right[0] or left[1] != sign * right[1]:
                        yield {"lhs": left[1], "rhs": sign * right[1]}, {
                            "alpha": list(a.coords),
                            "beta": list(c.coords),
                            "sector": list(lam.coords),
                        }

    witness = first_failure(commutation())
    rb.check("shift.commutation", "shift.commutation", witness is None, witness=witness)

    # psi^a psi^c (psi^a)* (psi^c)* with (psi^a)* = eps(a,a) psi^-a
    def group_commutator() -> Iterable[Case]:
        for a in charges:
            for c in charges:
                sign = -1 if indef_pairing(L, a, c) % 2 else 1
                adjoints = eps(a, a) * eps(c, c)
                ops = [shifts[a], shifts[c], shifts[-a], shifts[-c]]
                for lam in X.charges:
                    hit = _chain(ops, lam)
                    if hit is not None:
                        hit = (hit[0], hit[1] * adjoints)
                    if hit is not None and hit != (lam, sign):
                        yield {"image": [list(hit[0].coords), hit[1]], "expected": sign}, {
                            "alpha": list(a.coords),
                            "beta": list(c.coords),
                            "sector": list(lam.coords),
                        }

    witness = first_failure(group_commutator())
    rb.check("shift.group_commutator", "shift.commutation", witness is None, witness=witness)

    # <psi^a x, y> = <x, eps(a,a) psi^-a y>
    def adjoint() -> Iterable[Case]:
        for a in charges:
            scale = b.from_int(eps(a, a))
            for lam in X.charges:
                target = shifts[a].act(lam)
                if target is None:
                    continue
                for x_key in _basis_sample(X, lam, sample_grade):
                    x = {x_key: b.one}
                    for y_key in _basis_sample(X, target[0], sample_grade):
                        y = {y_key: b.one}
                        lhs = X.inner(shifts[a].apply(x, b), y)
                        rhs = scale * X.inner(x, shifts[-a].apply(y, b))
                        if not b.eq(lhs, rhs):
                            yield {"lhs": b.to_str(lhs), "rhs": b.to_str(rhs)}, {
                                "alpha": list(a.coords),
                                "sector": list(lam.coords),
                            }

    witness = first_failure(adjoint())
    rb.check("shift.adjoint", "shift.adjoint", witness is None, witness=witness)

    def unitary() -> Iterable[Case]:
        for a in charges:
            for lam in X.charges:
                if shifts[a].act(lam) is None:
                    continue
                keys = _basis_sample(X, lam, sample_grade)
                vec = {k: b.from_int(i + 1) for i, k in enumerate(keys)}
                lhs = X.inner(shifts[a].apply(vec, b), shifts[a].apply(vec, b))
                rhs = X.inner(vec, vec)
                if not b.eq(lhs, rhs):
                    yield {"lhs": b.to_str(lhs), "rhs": b.to_str(rhs)}, {"alpha": list(a.coords), "sector": list(lam.coords)}

    witness = first_failure(unitary())
    rb.check("shift.unitary", "shift.adjoint", witness is None, witness=witness)

    # z^{beta(0)} c_alpha = c_alpha z^{beta(0)} z^{(p alpha, p beta)}, read off the zero-mode offsets
    def offsets() -> Iterable[Case]:
        for a in charges:
            pa, ma = L.ambient(a)
            for c in charges:
                pc, mc = L.ambient(c)
                for lam in X.charges:
                    hit = shifts[a].act(lam)
                    if hit is None:
                        continue
                    src, tgt = X.sector(lam), X.sector(hit[0])
                    for side, u, v, s_mod, t_mod in (
                        ("chiral", pa, pc, src.chiral, tgt.chiral),
                        ("antichiral", ma, mc, src.antichiral, tgt.antichiral),
                    ):
                        lhs = b.dot(v, t_mod.weight)
                        rhs = b.dot(v, s_mod.weight) + b.dot(u, v)
                        if not b.eq(lhs, rhs):
                            yield {"lhs": b.to_str(lhs), "rhs": b.to_str(rhs)}, {
                                "side": side,
                                "alpha": list(a.coords),
                                "beta": list(c.coords),
                                "sector": list(lam.coords),
                            }

    witness = first_failure(offsets())
    rb.check("shift.offset_exchange", "shift.offset_exchange", witness is None, witness=witness)

    def twist() -> Iterable[Case]:
        for a in charges:
            for lam, (target, sign) in shifts[a].targets.items():
                plain = simple[a].targets[lam]
                if plain[0] != target or sign != eps(a, lam) * plain[1]:
                    yield {"twisted": sign, "simple": plain[1], "epsilon": eps(a, lam)}, {
                        "alpha": list(a.coords),
                        "sector": list(lam.coords),
                    }

    witness = first_failure(twist())
    rb.check("shift.twist", "shift.definition", witness is None, witness=witness)

    zero = shift_operator(X, Charge.zero(L.rank))
    bad = [lam for lam, hit in zero.targets.items() if hit != (lam, 1)]
    rb.check(
        "shift.identity",
        "shift.definition",
        not bad and not zero.mask,
        witness={"sector": list(bad[0].coords)} if bad else None,
    )
    masked = sum(len(s.mask) for s in shifts.values())
    rb.note(f"shift laws on {len(charges)} charges x {len(X.charges)} sectors; {masked} out-of-box sources masked")
    return rb.build()


def verify_L_shift(X: ExtensionSpace, alpha: Charge | Sequence[int], modes: Iterable[int]) -> Report:
    """L_m on sector lambda+alpha equals L_m + (p alpha)(m) on sector lambda, plus |p alpha|^2/2 at m = 0."""
    rb = ReportBuilder("net2d")
    b = X.backend
    alpha = as_charge(alpha)
    modes = list(modes)
    plus, minus = X.lattice.ambient(alpha)
    for side, u, d in (("chiral", plus, X.lattice.space.d_plus), ("antichiral", minus, X.lattice.space.d_minus)):
        if d == 0:
            rb.skip(f"L_shift.{side}", "shift.virasoro", detail="no colors on this side")
            continue
        half_norm = b.half * b.dot(u, u)

        def cases() -> Iterable[Case]:
            for lam in X.charges:
                target = alpha + lam
                if not X.contains(target):
                    continue
                src = getattr(X.sector(lam), side)
                tgt = getattr(X.sector(target), side)
                for m in modes:
                    rhs = sugawara(src, m) + mode_operator(src, u, m)
                    if m == 0:
                        rhs = rhs + scalar_operator(src, half_norm)
                    yield sugawara(tgt, m).difference(rhs), {"sector": list(lam.coords), "mode": m}

        witness = first_failure(cases())
        rb.check(
            f"L_shift.{side}",
            "shift.virasoro",
            witness is None,
            witness=witness,
            detail=f"alpha={alpha}, modes {modes}",
        )
    return rb.build()


def flip_lattice(lattice: Lattice) -> Lattice:
    """Negate every antichiral part; the indefinite Gram is unchanged."""
    gens = [(plus, tuple(-x for x in minus)) for plus, minus in lattice.generators]
    return build_lattice(lattice.space, gens, backend=lattice.backend, validate=lattice.validated)


def verify_parity_equivalence(X: ExtensionSpace, modes: Iterable[int]) -> Report:
    """1 (x) V maps H_Q onto H_Q' for Q' = flip_lattice(Q), intertwining shifts and Sugawara operators."""
    rb = ReportBuilder("net2d")
    L = X.lattice
    flipped = flip_lattice(L)
    same_gram = flipped.gram_indef == L.gram_indef
    rb.check(
        "parity.flip_gram",
        "parity.equivalence",
        same_gram,
        witness=None if same_gram else {"gram": [list(r) for r in flipped.gram_indef]},
    )
    same_table = build_cocycle(flipped).table == X.cocycle.table
    rb.check("parity.flip_shifts", "parity.equivalence", same_table, detail="twisted shifts share one cocycle table")

    modes = list(modes)
    if L.space.d_minus == 0:
        rb.skip("parity.flip_sugawara", "parity.equivalence", detail="no antichiral colors")
        return rb.build()

    def cases() -> Iterable[Case]:
        for lam in X.charges:
            module = X.sector(lam).antichiral
            mirror = module.with_weight(flipped.ambient(lam)[1])
            V = parity_operator(module)
            for m in modes:
                conj = V.compose(sugawara(module, m)).compose(V)
                yield conj.difference(sugawara(mirror, m)), {"sector": list(lam.coords), "mode": m}

    witness = first_failure(cases())
    rb.check("parity.flip_sugawara", "parity.equivalence", witness is None, witness=witness)
    return rb.build()
