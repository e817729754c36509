from __future__ import annotations

import logging
from typing import Any, Iterable, Optional, Sequence

from latticecft.cocycle import build_cocycle
from latticecft.fock.module import FockModule, Vector, build_module, combine
from latticecft.fock.modes import as_mode_vector, parity_operator
from latticecft.fock.operators import GradedOperator
from latticecft.fock.partitions import energy, state_to_json
from latticecft.fock.relations import Case, first_failure
from latticecft.fock.virasoro import sugawara
from latticecft.lattice import Lattice, indef_pairing
from latticecft.phases import Phase
from latticecft.reports import Report, ReportBuilder
from latticecft.scalars import Scalar, ScalarBackend
from latticecft.types import Charge, as_charge, charge_box
from latticecft.vertex.series import (
    ANNIHILATION,
    CREATION,
    PreVertexImages,
    exp_half,
    generalized_binomial,
    pre_vertex,
)

logger = logging.getLogger(__name__)


def _binomials(backend: ScalarBackend, a: Scalar, top: int) -> list[Scalar]:
    """(-1)^n binom(-a, n) for n = 0..top."""
    minus = backend.from_int(-1)
    out: list[Scalar] = []
    sign = backend.one
    for n in range(top + 1):
        out.append(sign * generalized_binomial(backend, -a, n))
        sign = sign * minus
    return out


def _sum_ops(ops: Iterable[GradedOperator]) -> Optional[GradedOperator]:
    total = None
    for op in ops:
        total = op if total is None else total + op
    return total


def verify_comm_E(module: FockModule, alpha: Sequence[Any], beta: Sequence[Any], order: int) -> Report:
    """(1 - z/w)^{-(alpha,beta)} E+(alpha,w) E-(beta,z) = E-(beta,z) E+(alpha,w), coefficient of z^p w^-q."""
    rb = ReportBuilder("vertex")
    b = module.backend
    if 2 * order > module.cutoff:
        logger.warning("series order %d above E/2 = %d leaves small windows", order, module.cutoff // 2)
    a_vec = as_mode_vector(module, alpha)
    b_vec = as_mode_vector(module, beta)
    a = b.dot(a_vec, b_vec)
    plus = exp_half(module, a_vec, ANNIHILATION, order)
    minus = exp_half(module, b_vec, CREATION, order)
    coeffs = _binomials(b, a, order)

    def case(p: int, q: int) -> Case:
        terms = [
            plus.coefficient(-(q - n)).compose(minus.coefficient(p - n)).scaled(coeffs[n])
            for n in range(min(p, q) + 1)
        ]
        lhs = _sum_ops(terms)
        rhs = minus.coefficient(p).compose(plus.coefficient(-q))
        return lhs.difference(rhs), {"bidegree": [p, -q]}

    witness = first_failure(case(p, q) for p in range(order + 1) for q in range(order + 1))
    rb.check(
        "comm_E.coefficients",
        "vertex.exponential_commutation",
        witness is None,
        witness=witness,
        detail=f"(alpha,beta) = {b.to_str(a)}, bidegrees up to {order}",
    )
    unit = plus.coefficient(0).difference(minus.coefficient(0))
    rb.check("comm_E.leading", "vertex.exponential_commutation", unit is None, witness=unit)
    return rb.build()


def verify_primary(
    module: FockModule,
    alpha: Sequence[Any],
    modes: Iterable[int],
    order: int,
    *,
    target: Optional[FockModule] = None,
) -> Report:
    """[L_m, Y(z)] = z^{m+1} dY/dz + h (m+1) z^m Y with h = (alpha,alpha)/2.

    On coefficients: L_m Y_k - Y_k L_m = (o + k - m + h (m+1)) Y_{k-m}.
    """
    rb = ReportBuilder("vertex")
    b = module.backend
    vec = as_mode_vector(module, alpha)
    Y = pre_vertex(module, vec, order, target=target)
    h = b.half * b.dot(vec, vec)
    o = Y.offset
    modes = list(modes)

    def case(m: int, k: int) -> Case:
        Yk = Y.coefficient(k)
        lhs = sugawara(Y.target, m).compose(Yk) - Yk.compose(sugawara(Y.source, m))
        factor = o + b.from_int(k - m) + h * b.from_int(m + 1)
        rhs = Y.coefficient(k - m).scaled(factor)
        return lhs.difference(rhs), {"mode": m, "power": k}

    witness = first_failure(
        case(m, k) for m in modes for k in range(-order, order + 1) if abs(k - m) <= order
    )
    rb.check(
        f"primary.{module.side}",
        "vertex.primary",
        witness is None,
        witness=witness,
        detail=f"h = {b.to_str(h)}, offset = {b.to_str(o)}, modes {modes}",
    )
    leading = Y.coefficient(0).column(module.vacuum)
    ok = leading == {Y.target.vacuum: b.one}
    rb.check(
        f"pre_vertex.leading.{module.side}",
        "vertex.pre_vertex",
        ok,
        witness=None if ok else {"column": {str(state_to_json(t)): b.to_str(x) for t, x in leading.items()}},
    )
    return rb.build()


def _locality_side(
    module: FockModule, alpha: Sequence[Scalar], beta: Sequence[Scalar], order: int, top: int
) -> Optional[dict[str, Any]]:
    """First failure of the reordering identity for one chirality, or None.

    (1 - z/w)^{-a} Y_alpha(w) Y_beta(z) and (1 - w/z)^{-a} Y_beta(z) Y_alpha(w) are the same normal-ordered
    product, so their w^Q z^P coefficients agree on every vector.
    """
    b = module.backend
    a = b.dot(alpha, beta)
    # intermediate vectors reach energy top + order
    ya = PreVertexImages(module, alpha, energy_cap=top + order)
    yb = PreVertexImages(module, beta, energy_cap=top + order)
    coeffs = _binomials(b, a, top + 2 * order)
    for s in module.states_up_to(top):
        e = energy(s)
        # (inner power, outer power) -> composite image of s
        left_memo: dict[tuple[int, int], Vector] = {}
        right_memo: dict[tuple[int, int], Vector] = {}

        def left(j: int, k: int) -> Vector:
            if (j, k) not in left_memo:
                left_memo[(j, k)] = ya.apply(k, yb.image(s, j))
            return left_memo[(j, k)]

        def right(j: int, k: int) -> Vector:
            if (j, k) not in right_memo:
                right_memo[(j, k)] = yb.apply(k, ya.image(s, j))
            return right_memo[(j, k)]

        for Q in range(-order, order + 1):
            for P in range(-order, order + 1):
                if e + P + Q < 0 or e + P + Q > top:
                    continue
                lhs: Vector = combine(
                    b,
                    [
                        (coeffs[n], left(P - n, Q + n))
                        for n in range(0, max(0, e + P) + 1)
                    ],
                )
                rhs: Vector = combine(
                    b,
                    [
                        (coeffs[n], right(Q - n, P + n))
                        for n in range(0, max(0, e + Q) + 1)
                    ],
                )
                for t in set(lhs) | set(rhs):
                    x, y = lhs.get(t, b.zero), rhs.get(t, b.zero)
                    if not b.eq(x, y):
                        return {
                            "side": module.side,
                            "source": state_to_json(s),
                            "powers": [Q, P],
                            "target": state_to_json(t),
                            "lhs": b.to_str(x),
                            "rhs": b.to_str(y),
                        }
    return None


def _pi_phase(backend: ScalarBackend, x: Scalar) -> Phase:
    q = backend.as_rational(x)
    return Phase.exp_i_pi(q if q is not None else backend.to_float(x))


def verify_locality_phase(
    lattice: Lattice,
    alpha: Charge | Sequence[int],
    beta: Charge | Sequence[int],
    order: int,
    *,
    energy_cap: Optional[int] = None,
    sectors: int = 2,
) -> Report:
    rb = ReportBuilder("vertex")
    b = lattice.backend
    alpha, beta = as_charge(alpha), as_charge(beta)
    top = 2 * order if energy_cap is None else int(energy_cap)
    pair = indef_pairing(lattice, alpha, beta)
    sign = -1 if pair % 2 else 1
    rb.note(f"locality {alpha} x {beta}: (alpha|beta) = {pair}, sign {sign:+d}")

    pa, ma = lattice.ambient(alpha)
    pb, mb = lattice.ambient(beta)
    sides = [
        ("chiral", lattice.space.d_plus, pa, pb),
        ("antichiral", lattice.space.d_minus, ma, mb),
    ]
    for side, d, u, v in sides:
        if d == 0:
            rb.skip(f"locality.{side}", "vertex.locality", detail="no colors on this side")
            continue
        module = build_module(d, None, top, backend=b, side=side)
        witness = _locality_side(module, u, v, order, top)
        rb.check(
            f"locality.{side}",
            "vertex.locality",
            witness is None,
            witness=witness,
            detail=f"pairing {b.to_str(b.dot(u, v))}, |powers| <= {order}, energies <= {top}",
        )

    a_plus, a_minus = b.dot(pa, pb), b.dot(ma, mb)
    swap = _pi_phase(b, a_plus) / _pi_phase(b, a_minus)
    expected = Phase.from_sign(sign)
    ok = swap.is_close(expected)
    rb.check(
        "locality.swap_phase",
        "vertex.locality",
        ok,
        witness=None if ok else {"swap": swap.describe(), "expected": expected.describe()},
    )

    eps = build_cocycle(lattice)
    witness = None
    for lam in charge_box(lattice.rank, sectors):
        left = eps(alpha, beta + lam) * eps(beta, lam)
        right = sign * eps(beta, alpha + lam) * eps(alpha, lam)
        if left != right:
            witness = {"sector": list(lam.coords), "lhs": left, "rhs": right}
            break
    rb.check("locality.cocycle_exchange", "vertex.locality", witness is None, witness=witness)

    back = Phase.from_sign(sign) * Phase.from_sign(sign).conjugate()
    rb.check("locality.bookkeeping", "vertex.locality", back.is_close(Phase()), detail="(-1)^(a|b) (-1)^-(a|b)")
    return rb.build()


def verify_parity_conjugation(module: FockModule, alpha: Sequence[Any], order: int) -> Report:
    """V E^(+-)(alpha, z) V = E^(+-)(-alpha, z) coefficientwise."""
    rb = ReportBuilder("vertex")
    vec = as_mode_vector(module, alpha)
    neg = tuple(-x for x in vec)
    V = parity_operator(module)
    cases: list[Case] = []
    for sign in (CREATION, ANNIHILATION):
        series = exp_half(module, vec, sign, order)
        flipped = exp_half(module, neg, sign, order)
        for k in series.powers():
            conj = V.compose(series.coefficient(k)).compose(V)
            cases.append((conj.difference(flipped.coefficient(k)), {"sign": sign, "power": k}))
    witness = first_failure(cases)
    rb.check(f"parity.exponentials.{module.side}", "parity.operator", witness is None, witness=witness)
    return rb.build()
