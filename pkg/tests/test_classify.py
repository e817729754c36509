from __future__ import annotations

from fractions import Fraction

import sympy

from latticecft.cocycle import build_cocycle
from latticecft.lattice import SplitSpace, enumerate_box, integer_coordinates_of, unimodular_change
from latticecft.net2d import STAGES, classify_charges
from latticecft.phases import Phase
from latticecft.types import Charge


def test_box_roundtrip(rank2):
    verdict = classify_charges(enumerate_box(rank2, 3), rank2.space, backend=rank2.backend)
    assert verdict.passed, verdict.reason
    assert verdict.stage is None
    assert unimodular_change(rank2, verdict.lattice) is not None
    assert sympy.Matrix(verdict.lattice.gram_indef).det() == -1
    assert verdict.discreteness["heuristic"] is True


def test_duplicate_charge(rank2):
    sample = enumerate_box(rank2, 2)
    verdict = classify_charges(sample + [sample[3]], rank2.space, backend=rank2.backend)
    assert not verdict.passed
    assert verdict.stage == "multiplicity"


def test_odd_norm(rational):
    sample = [((rational.from_int(k),), ()) for k in range(-3, 4)]
    verdict = classify_charges(sample, SplitSpace(1, 0), backend=rational)
    assert not verdict.passed
    assert verdict.stage == "evenness"
    assert STAGES.index(verdict.stage) == 3


def test_missing_negatives(rank2):
    sample = [v for v in enumerate_box(rank2, 2) if v != rank2.ambient((-1, 0))]
    verdict = classify_charges(sample, rank2.space, backend=rank2.backend)
    assert verdict.stage == "closure"


def test_dense_sample_not_recognized(rational):
    values = sorted({Fraction(n, d) for d in range(1, 17) for n in range(-d, d + 1)})
    sample = [((rational.from_rational(x),), (rational.from_rational(x),)) for x in values]
    verdict = classify_charges(sample, SplitSpace(1, 1), backend=rational)
    assert not verdict.passed
    assert verdict.stage in ("closure", "recognition")


def test_observed_cocycle_is_gauge_fixed(rank2):
    eps = build_cocycle(rank2)

    def chi(a: Charge) -> Phase:
        n, m = a.coords
        return Phase(Fraction(n * n + n * m, 8))

    def observed(x, y):
        cx = Charge(integer_coordinates_of(rank2, x))
        cy = Charge(integer_coordinates_of(rank2, y))
        return eps.phase(cx, cy) * chi(cx) * chi(cy) / chi(cx + cy)

    verdict = classify_charges(
        enumerate_box(rank2, 3), rank2.space, backend=rank2.backend, observed_cocycle=observed, radius=2
    )
    assert verdict.passed, verdict.reason
    assert verdict.coboundary is not None


def test_observed_cocycle_with_wrong_commutator(rank2):
    def observed(x, y):
        return Phase()

    verdict = classify_charges(
        enumerate_box(rank2, 3), rank2.space, backend=rank2.backend, observed_cocycle=observed, radius=2
    )
    assert not verdict.passed
    assert verdict.stage == "cocycle"
