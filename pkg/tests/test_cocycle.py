from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from conftest import random_even_lattice
from latticecft.cocycle import (
    TwistedAlgebraElement,
    algebra_product,
    build_cocycle,
    coboundary_solve,
    eval_cocycle,
    verify_cocycle_laws,
    verify_twisted_algebra,
)
from latticecft.phases import Phase
from latticecft.types import Charge, charge_box, in_box


def test_rank2_table(rank2):
    assert build_cocycle(rank2).table == ((1, -1), (1, 1))


def test_rank2_closed_form(rank2):
    c = build_cocycle(rank2)
    for a in charge_box(2, 5):
        for b in charge_box(2, 5):
            n, _ = a.coords
            _, m2 = b.coords
            assert eval_cocycle(c, a, b) == (-1) ** ((n * m2) % 2)


def test_laws_rank2(rank2):
    report = verify_cocycle_laws(build_cocycle(rank2), 4)
    assert report.passed, report.failures


@pytest.mark.parametrize("seed, rank", [(1, 1), (2, 2), (3, 3)])
def test_laws_random_lattices(seed, rank):
    lattice = random_even_lattice(np.random.default_rng(seed), rank)
    report = verify_cocycle_laws(build_cocycle(lattice), 4)
    assert report.passed, report.failures
    assert report.find("cocycle.identity").detail == f"{9 ** rank} box charges in {2 ** rank} parity classes"


def test_bimultiplicative_box_is_recorded(rank2):
    report = verify_cocycle_laws(build_cocycle(rank2), 4)
    assert report.find("cocycle.bimultiplicative").detail == "box radius 2 (capped from 4)"
    report = verify_cocycle_laws(build_cocycle(rank2), 2)
    assert report.find("cocycle.bimultiplicative").detail == "box radius 2"


def test_shift_product_sign(rank2):
    c = build_cocycle(rank2)
    e = TwistedAlgebraElement.basis
    product = algebra_product(c, e((1, 0)), e((0, 1)))
    assert product.same_as(e((1, 1), -1))
    assert algebra_product(c, e((0, 1)), e((1, 0))).same_as(e((1, 1)))


def test_twisted_algebra_report(rank2):
    report = verify_twisted_algebra(build_cocycle(rank2), 2)
    assert report.passed, report.failures


def _chi0(rng, rank):
    linear = rng.integers(0, 12, size=rank)
    quad = rng.integers(0, 12, size=(rank, rank))

    def chi(a: Charge) -> Phase:
        x = np.asarray(a.coords, dtype=np.int64)
        return Phase(Fraction(int(linear @ x + x @ quad @ x), 12))

    return chi


@pytest.mark.parametrize("seed", range(20))
def test_coboundary_recovered(rank2, seed):
    c = build_cocycle(rank2)
    chi0 = _chi0(np.random.default_rng(seed), 2)

    def gauged(a, b):
        return c.phase(a, b) * chi0(a) * chi0(b) / chi0(a + b)

    chi = coboundary_solve(gauged, c.phase, 3, 2)
    assert chi is not None
    for a in charge_box(2, 3):
        for b in charge_box(2, 3):
            if in_box(a + b, 3):
                assert chi.delta(a, b) == gauged(a, b) / c.phase(a, b)


def test_asymmetric_quotient_has_no_coboundary(rank2):
    c = build_cocycle(rank2)

    def twisted(a, b):
        return c.phase(a, b) * Phase(Fraction(a.coords[0] * b.coords[1], 2))

    assert coboundary_solve(twisted, c.phase, 3, 2) is None
