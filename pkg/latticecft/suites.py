from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np
import sympy
from sympy.ntheory.factor_ import core

from latticecft.braidcat import (
    canonical_functor,
    nu_phase_check,
    random_trig_pair,
    verify_braiding,
    verify_functor_coherence,
)
from latticecft.cocycle import (
    build_cocycle,
    coboundary_solve,
    verify_cocycle_laws,
    verify_twisted_algebra,
)
from latticecft.config import ModelConfig
from latticecft.errors import ConfigError, DegenerateForm, InconsistentSystem, LatticeCftError, NonIntegralPairing, OddNorm
from latticecft.fock import (
    build_module,
    energy_bound_ratios,
    unit_vector,
    verify_algebra_relations,
    verify_smeared_commutator,
)
from latticecft.lattice import (
    RANK2_GENERATORS,
    AmbientVector,
    Lattice,
    SplitSpace,
    antichiral_pairing,
    build_lattice,
    check_even,
    chiral_pairing,
    discriminant_data,
    enumerate_box,
    indef_pairing,
    integer_coordinates_of,
    is_maximal_even,
    rational_sublattice_vector,
    recognize_lattice,
    unimodular_change,
)
from latticecft.net2d import (
    build_extension,
    classify_charges,
    spin_spectrum,
    verify_L_shift,
    verify_character,
    verify_full_field,
    verify_offset_grid,
    verify_parity_equivalence,
    verify_shift_laws,
)
from latticecft.phases import Phase
from latticecft.reports import Report, ReportBuilder
from latticecft.scalars import ScalarBackend, parse_token, rational_r_squared
from latticecft.types import Charge, charge_box
from latticecft.vertex import verify_comm_E, verify_locality_phase, verify_parity_conjugation, verify_primary

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Model:
    config: ModelConfig
    backend: ScalarBackend
    backend_note: str
    lattice: Lattice

    @property
    def generator_charges(self) -> list[Charge]:
        n = self.lattice.rank
        return [Charge(tuple(1 if k == i else 0 for k in range(n))) for i in range(n)]


def _token_radicands(config: ModelConfig) -> Optional[set[int]]:
    """Square-free radicands needed by the generator tokens, None if some token is not a square root of a rational."""
    radicands: set[int] = set()
    for g in config.lattice.generators:
        for token in g.plus + g.minus:
            expr = parse_token(token, r_squared=config.lattice.r_squared)
            if expr.is_Rational:
                continue
            square = sympy.simplify(expr**2)
            if not square.is_Rational:
                return None
            radicands.add(int(core(int(square.p) * int(square.q))))
    radicands.discard(1)
    return radicands


def resolve_backend(config: ModelConfig) -> tuple[ScalarBackend, str]:
    bc = config.backend
    if bc.kind == "rational":
        return ScalarBackend(kind="rational"), "rational backend requested"
    if bc.kind == "quadratic":
        return ScalarBackend(kind="quadratic", radicand=bc.radicand), f"quadratic({bc.radicand}) backend requested"
    if bc.kind == "float":
        return (
            ScalarBackend(kind="float", tolerance=bc.tolerance, precision=bc.precision),
            "float backend requested",
        )

    radicands = _token_radicands(config)
    if radicands is None:
        note = "generator tokens are not square roots of rationals, using float backend"
        return ScalarBackend(kind="float", tolerance=bc.tolerance, precision=bc.precision), note
    if not radicands:
        return ScalarBackend(kind="rational"), "generator tokens are rational"
    if len(radicands) == 1:
        d = radicands.pop()
        return ScalarBackend(kind="quadratic", radicand=d), f"generator tokens need QQ(sqrt({d}))"
    note = f"generator tokens need several radicands {sorted(radicands)}, using float backend"
    return ScalarBackend(kind="float", tolerance=bc.tolerance, precision=bc.precision), note


def prepare_model(config: ModelConfig) -> Model:
    """Resolve the backend and build the lattice; construction errors surface as ConfigError."""
    try:
        backend, note = resolve_backend(config)
        space = SplitSpace(config.space.d_plus, config.space.d_minus)
        gens = [(g.plus, g.minus) for g in config.lattice.generators]
        lattice = build_lattice(
            space,
            gens,
            backend=backend,
            r_squared=config.lattice.r_squared,
            validate=config.lattice.validate,
        )
    except ConfigError:
        raise
    except (LatticeCftError, ValueError) as exc:
        raise ConfigError(f"lattice: {type(exc).__name__}: {exc}") from exc
    logger.info("backend %s: %s", backend.name, note)
    return Model(config=config, backend=backend, backend_note=note, lattice=lattice)


def lattice_suite(model: Model) -> Report:
    rb = ReportBuilder("lattice")
    L = model.lattice
    b = L.backend
    cfg = model.config
    radius = cfg.cutoffs.box_radius
    rb.note(f"backend {b.name}: {model.backend_note}")

    try:
        check_even(L)
        witness = None
    except (NonIntegralPairing, OddNorm) as exc:
        witness = {"reason": f"{type(exc).__name__}: {exc}"}
    rb.check(
        "lattice.even",
        "lattice.gram",
        witness is None,
        witness=witness,
        detail=f"gramIndef {[list(r) for r in L.gram_indef]}",
    )

    witness = None
    box = charge_box(L.rank, radius)
    for a in box:
        for c in box:
            split = chiral_pairing(L, a, c) - antichiral_pairing(L, a, c)
            if not b.eq(split, b.from_int(indef_pairing(L, a, c))):
                witness = {"a": list(a.coords), "b": list(c.coords), "split": b.to_str(split)}
                break
        if witness:
            break
    rb.check("lattice.split_pairing", "lattice.chiral_norms", witness is None, witness=witness)

    try:
        data = discriminant_data(L)
        verdict = is_maximal_even(L)
    except DegenerateForm as exc:
        rb.skip("lattice.discriminant", "lattice.maximality", detail=str(exc))
    else:
        det = abs(int(sympy.Matrix(L.gram_indef).det()))
        rb.check(
            "lattice.discriminant",
            "lattice.maximality",
            data.order == det,
            witness=None if data.order == det else {"order": data.order, "det": det},
            detail=f"invariant factors {list(data.invariant_factors)}",
        )
        if verdict.maximal:
            rb.note("no proper even overlattice")
        else:
            rb.note(f"even overlattice glued by {[str(x) for x in verdict.witness or ()]}")

    recognized = recognize_lattice(L.space, enumerate_box(L, radius), backend=b)
    ok = recognized is not None and unimodular_change(L, recognized) is not None
    rb.check("lattice.recognized_box", "lattice.recognition", ok, detail=f"box radius {radius}")

    family = tuple((tuple(g.plus), tuple(g.minus)) for g in cfg.lattice.generators) == RANK2_GENERATORS
    r2 = rational_r_squared(cfg.lattice.r_squared) if family and cfg.lattice.r_squared is not None else None
    if r2 is None:
        rb.skip("lattice.rational_family", "lattice.rational_family", detail="not the rank-2 family at rational R^2")
    else:
        cert = rational_sublattice_vector(r2)
        rb.check(
            "lattice.rational_family",
            "lattice.rational_family",
            cert.verified,
            witness=None if cert.verified else {"coords": list(cert.coords)},
            detail=f"{cert.coords[0]} v1 + {cert.coords[1]} v2 = {cert.chiral_value} + 0",
        )
    return rb.build()


def _chi0(rank: int, seed: int) -> Callable[[Charge], Phase]:
    rng = np.random.default_rng(seed)
    linear = rng.integers(0, 8, size=rank)
    quad = rng.integers(0, 8, size=(rank, rank))

    def chi(a: Charge) -> Phase:
        x = np.asarray(a.coords, dtype=np.int64)
        return Phase(Fraction(int(linear @ x + x @ quad @ x), 8))

    return chi


def cocycle_suite(model: Model) -> Report:
    rb = ReportBuilder("cocycle")
    cfg = model.config
    c = build_cocycle(model.lattice)
    radius = cfg.cutoffs.box_radius
    rb.extend(verify_cocycle_laws(c, radius))
    rb.extend(verify_twisted_algebra(c, min(radius, 2), seed=cfg.braid.seed))

    rank = model.lattice.rank
    gauge_radius = cfg.classify.gauge_radius
    chi0 = _chi0(rank, cfg.braid.seed)

    def gauged(a: Charge, b: Charge) -> Phase:
        return c.phase(a, b) * chi0(a) * chi0(b) / chi0(a + b)

    try:
        chi = coboundary_solve(gauged, c.phase, gauge_radius, rank)
        witness = None if chi is not None else {"reason": "quotient reported asymmetric"}
    except InconsistentSystem as exc:
        witness = {"reason": str(exc)}
    rb.check("coboundary.recovered", "cocycle.coboundary", witness is None, witness=witness)

    if rank < 2:
        rb.skip("coboundary.asymmetric", "cocycle.coboundary", detail="rank 1 quotients are always symmetric")
    else:

        def twisted(a: Charge, b: Charge) -> Phase:
            return c.phase(a, b) * Phase(Fraction(a.coords[0] * b.coords[1], 2))

        chi = coboundary_solve(twisted, c.phase, gauge_radius, rank)
        rb.check("coboundary.asymmetric", "cocycle.coboundary", chi is None, detail="quotient (-1)^(a0 b1)")
    return rb.build()


def fock_suite(model: Model) -> Report:
    rb = ReportBuilder("fock")
    cfg = model.config
    b = model.backend
    E = cfg.cutoffs.energy
    for side, d in (("chiral", cfg.space.d_plus), ("antichiral", cfg.space.d_minus)):
        if d == 0:
            rb.skip(f"{side}.relations", "heisenberg.commutator", detail="no colors on this side")
            continue
        module = build_module(d, None, E, backend=b, side=side, budget=cfg.cutoffs.state_budget)
        rb.extend(verify_algebra_relations(module, cfg.fock.max_mode), prefix=f"{side}.")
        alpha = unit_vector(module, 0)
        f = {1: 1, 2: Fraction(1, 2)}
        g = {-1: 1, -2: (0, 1)}
        rb.extend(verify_smeared_commutator(module, alpha, alpha, f, g), prefix=f"{side}.")

        worst = None
        for m in range(1, cfg.fock.bound_modes + 1):
            for mode in (m, -m):
                result = energy_bound_ratios(module, alpha, mode)
                if not result.holds:
                    worst = {"mode": mode, "ratio": result.max_ratio, "state": result.worst_state}
                    break
            if worst:
                break
        rb.check(
            f"{side}.energy_bound",
            "heisenberg.energy_bound",
            worst is None,
            witness=worst,
            detail=f"|m| <= {cfg.fock.bound_modes}",
        )
    return rb.build()


def _vertex_order(model: Model) -> int:
    cfg = model.config
    if cfg.vertex.comm_order is not None:
        return cfg.vertex.comm_order
    return min(cfg.cutoffs.series_order, cfg.cutoffs.energy // 2)


def vertex_suite(model: Model) -> Report:
    rb = ReportBuilder("vertex")
    cfg = model.config
    L = model.lattice
    b = L.backend
    E = cfg.cutoffs.energy
    K = cfg.cutoffs.series_order
    order = _vertex_order(model)
    gens = model.generator_charges
    budget = cfg.cutoffs.state_budget

    for side_index, side, d in ((0, "chiral", cfg.space.d_plus), (1, "antichiral", cfg.space.d_minus)):
        if d == 0:
            rb.skip(f"{side}.primary", "vertex.primary", detail="no colors on this side")
            continue
        base = build_module(d, None, E, backend=b, side=side, budget=budget)
        for i, g in enumerate(gens):
            u = L.ambient(g)[side_index]
            rb.extend(verify_primary(base, u, cfg.vertex.primary_modes, K), prefix=f"g{i}.")
            # nonzero source sector: lambda = g
            shifted = base.with_weight(u)
            target = base.with_weight(tuple(x + x for x in u))
            rb.extend(
                verify_primary(shifted, u, cfg.vertex.primary_modes, K, target=target),
                prefix=f"g{i}.sector.",
            )
            rb.extend(verify_parity_conjugation(base, u, order), prefix=f"g{i}.")
            for j, h in enumerate(gens):
                v = L.ambient(h)[side_index]
                rb.extend(verify_comm_E(base, u, v, order), prefix=f"{side}.g{i}g{j}.")

    for i, g in enumerate(gens):
        for j, h in enumerate(gens):
            if j < i:
                continue
            rb.extend(verify_locality_phase(L, g, h, cfg.vertex.locality_order), prefix=f"g{i}g{j}.")
    return rb.build()


def net2d_suite(model: Model) -> Report:
    rb = ReportBuilder("net2d")
    cfg = model.config
    net = cfg.net2d
    X = build_extension(model.lattice, cfg.cutoffs.box_radius, net.energy, budget=cfg.cutoffs.state_budget)
    rb.note(f"{len(X.charges)} sectors, {X.total_states} truncated states")
    rb.extend(verify_shift_laws(X, net.shift_radius))
    for i, g in enumerate(model.generator_charges):
        rb.extend(verify_L_shift(X, g, net.modes), prefix=f"g{i}.")
    rb.extend(spin_spectrum(X))
    rb.extend(verify_character(X, min(net.character_level, net.energy)))
    order = min(net.field_order, net.energy)
    for i, g in enumerate(model.generator_charges):
        rb.extend(verify_full_field(X, g, order), prefix=f"g{i}.")
        rb.extend(verify_offset_grid(X, g, order), prefix=f"g{i}.")
    rb.extend(verify_parity_equivalence(X, net.modes))
    return rb.build()


def braidcat_suite(model: Model) -> Report:
    rb = ReportBuilder("braidcat")
    cfg = model.config.braid
    rb.extend(verify_braiding(model.lattice, min(cfg.radius, model.config.cutoffs.box_radius)))
    F = canonical_functor()
    for value in cfg.r_squared_values:
        rb.extend(verify_functor_coherence(F, value, cfg.radius), prefix=f"R2={value}.")
    rng = np.random.default_rng(cfg.seed)
    for k in range(cfg.nu_samples):
        h, g = random_trig_pair(rng)
        rb.extend(nu_phase_check(h, g, points=cfg.nu_points), prefix=f"sample{k}.")
    return rb.build()


def classify_suite(model: Model) -> Report:
    rb = ReportBuilder("classify")
    cfg = model.config.classify
    L = model.lattice
    b = L.backend
    sample = enumerate_box(L, cfg.sample_radius)
    eps = build_cocycle(L)

    def observed(x: AmbientVector, y: AmbientVector) -> Phase:
        cx = integer_coordinates_of(L, x)
        cy = integer_coordinates_of(L, y)
        if cx is None or cy is None:
            raise InconsistentSystem("observed cocycle evaluated off the configured lattice")
        return eps.phase(Charge(cx), Charge(cy))

    verdict = classify_charges(sample, L.space, backend=b, observed_cocycle=observed, radius=cfg.gauge_radius)
    ok = verdict.passed and verdict.lattice is not None and unimodular_change(L, verdict.lattice) is not None
    rb.check(
        "classify.roundtrip",
        "classify.pipeline",
        ok,
        witness=None if ok else verdict.to_dict(),
        detail=f"{len(sample)} charges, box radius {cfg.sample_radius}",
    )
    if verdict.passed:
        rb.note(f"recovered gramIndef {[list(r) for r in verdict.lattice.gram_indef]}")

    duplicated = classify_charges(sample + sample[:1], L.space, backend=b)
    rb.check(
        "classify.duplicate_rejected",
        "classify.pipeline",
        not duplicated.passed and duplicated.stage == "multiplicity",
        witness=None if duplicated.stage == "multiplicity" else duplicated.to_dict(),
    )
    return rb.build()


SUITES: dict[str, Callable[[Model], Report]] = {
    "lattice": lattice_suite,
    "cocycle": cocycle_suite,
    "fock": fock_suite,
    "vertex": vertex_suite,
    "net2d": net2d_suite,
    "braidcat": braidcat_suite,
    "classify": classify_suite,
}
