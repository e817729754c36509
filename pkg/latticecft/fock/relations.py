from __future__ import annotations

import logging
from typing import Any, Iterable, Optional

from latticecft.fock.module import FockModule
from latticecft.fock.modes import mode_operator, parity_operator, unit_vector
from latticecft.fock.operators import GradedOperator, identity, scalar_operator
from latticecft.fock.partitions import colored_partition_counts, energy, state_to_json
from latticecft.fock.virasoro import central_term, sugawara
from latticecft.reports import Report, ReportBuilder

logger = logging.getLogger(__name__)

Case = tuple[Optional[dict[str, Any]], dict[str, Any]]


def adjoint_mismatch(a: GradedOperator, b: GradedOperator) -> Optional[dict[str, Any]]:
    """First pair (s, t) with <t, a s> != <b t, s>, both inside their windows.

    Monomial states are orthogonal, so only t in the support of a s or with s in the support of b t can differ.
    """
    module = a.source
    back = module.backend
    transposed: dict[Any, set[Any]] = {}
    for t, col in b.columns.items():
        if energy(t) > b.window:
            continue
        for u in col:
            transposed.setdefault(u, set()).add(t)
    for s in a.source.states_up_to(a.window):
        col = a.columns.get(s, {})
        grade = energy(s) + a.shift
        if grade < 0 or grade > b.window:
            continue
        candidates = {t for t in col if energy(t) == grade} | transposed.get(s, set())
        for t in sorted(candidates):
            lhs = module.inner({t: back.one}, col)
            rhs = module.inner(b.column(t), {s: back.one})
            if not back.eq(lhs, rhs):
                return {
                    "source": state_to_json(s),
                    "target": state_to_json(t),
                    "lhs": back.to_str(lhs),
                    "rhs": back.to_str(rhs),
                }
    return None


def first_failure(cases: Iterable[Case]) -> Optional[dict[str, Any]]:
    """Witness of the first failing case; cases are consumed lazily."""
    for diff, where in cases:
        if diff is not None:
            return {**where, **diff}
    return None


def verify_algebra_relations(module: FockModule, max_mode: int) -> Report:
    rb = ReportBuilder("fock")
    b = module.backend
    d = module.colors
    E = module.cutoff
    if 2 * max_mode > E:
        logger.warning("max_mode=%d above E/2=%d leaves small windows", max_mode, E // 2)
    modes = range(-max_mode, max_mode + 1)
    rb.note(f"{module.side} module: d={d}, E={E}, max_mode={max_mode}")

    dims = module.grade_dimensions()
    oracle = tuple(int(x) for x in colored_partition_counts(d, E))
    rb.check(
        "fock.grade_dimensions",
        "fock.basis",
        dims == oracle,
        witness=None if dims == oracle else {"dimensions": list(dims), "oracle": list(oracle)},
    )

    witness = None
    for n in range(E + 1):
        states = module.grade(n)
        for i, s in enumerate(states):
            for j, t in enumerate(states):
                g = module.pairing(s, t)
                expected = module.norm_squared(s) if i == j else 0
                if g != expected or (i == j and g <= 0):
                    witness = {"grade": n, "row": state_to_json(s), "col": state_to_json(t), "value": g}
                    break
            if witness:
                break
        if witness:
            break
    rb.check("fock.gram_positive", "fock.unitarity", witness is None, witness=witness)

    units = [unit_vector(module, j) for j in range(d)]
    ops = {(j, m): mode_operator(module, units[j], m) for j in range(d) for m in modes}

    witness = first_failure(
        (
            ops[(i, m)]
            .commutator(ops[(j, n)])
            .difference(scalar_operator(module, b.from_int(m) if (i == j and m == -n) else b.zero)),
            {"colors": [i, j], "modes": [m, n]},
        )
        for i in range(d)
        for j in range(d)
        for m in modes
        for n in modes
    )
    rb.check("heisenberg.commutator", "heisenberg.commutator", witness is None, witness=witness)

    witness = first_failure(
        (adjoint_mismatch(ops[(j, m)], ops[(j, -m)]), {"color": j, "mode": m}) for j in range(d) for m in modes
    )
    rb.check("heisenberg.adjoint", "heisenberg.adjoint", witness is None, witness=witness)

    witness = first_failure(
        (
            sugawara(module, m)
            .commutator(ops[(j, n)])
            .difference(mode_operator(module, units[j], m + n).scaled(b.from_int(-n))),
            {"L": m, "color": j, "mode": n},
        )
        for m in modes
        for j in range(d)
        for n in modes
        if abs(m + n) <= E
    )
    rb.check("virasoro.current", "virasoro.current", witness is None, witness=witness)

    def virasoro_rhs(m: int, n: int) -> GradedOperator:
        rhs = sugawara(module, m + n).scaled(b.from_int(m - n))
        if m == -n:
            rhs = rhs + scalar_operator(module, central_term(module, m))
        return rhs

    witness = first_failure(
        (sugawara(module, m).commutator(sugawara(module, n)).difference(virasoro_rhs(m, n)), {"modes": [m, n]})
        for m in modes
        for n in modes
        if abs(m + n) <= E
    )
    rb.check("virasoro.commutator", "virasoro.commutator", witness is None, witness=witness)

    if max_mode >= 2 and E >= 2:
        comm = sugawara(module, 2).commutator(sugawara(module, -2))
        value = comm.entry(module.vacuum, module.vacuum)
        expected = b.from_int(4) * module.lowest_weight + central_term(module, 2)
        ok = b.eq(value, expected)
        rb.check(
            "virasoro.central",
            "virasoro.commutator",
            ok,
            witness=None if ok else {"value": b.to_str(value), "expected": b.to_str(expected)},
            detail=f"<vac|[L2,L-2]|vac> = {b.to_str(value)} with c = {d}",
        )
    else:
        rb.skip("virasoro.central", "virasoro.commutator", detail="needs max_mode >= 2 and E >= 2")

    witness = first_failure((adjoint_mismatch(sugawara(module, m), sugawara(module, -m)), {"L": m}) for m in modes)
    rb.check("virasoro.adjoint", "virasoro.adjoint", witness is None, witness=witness)

    L0 = sugawara(module, 0)
    witness = None
    for s in module.basis:
        expected = module.lowest_weight + b.from_int(energy(s))
        col = L0.column(s)
        if set(col) - {s} or not b.eq(col.get(s, b.zero), expected):
            witness = {"state": state_to_json(s), "expected": b.to_str(expected)}
            break
    rb.check("sugawara.grading", "sugawara.lowest_weight", witness is None, witness=witness)

    V = parity_operator(module)
    low = min(2, max_mode)
    cases: list[Iterable[Case]] = [
        [(V.compose(V).difference(identity(module)), {"op": "V^2"})],
        ((V.compose(ops[(j, m)]).compose(V).difference(-ops[(j, m)]), {"color": j, "mode": m}) for j in range(d) for m in modes),
        ((V.compose(sugawara(module, m)).compose(V).difference(sugawara(module, m)), {"L": m}) for m in range(-low, low + 1)),
    ]
    witness = first_failure(case for group in cases for case in group)
    rb.check("parity.conjugation", "parity.operator", witness is None, witness=witness)
    return rb.build()
