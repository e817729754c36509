from __future__ import annotations

from fractions import Fraction

import pytest

from latticecft.errors import OutOfWindow
from latticecft.fock import build_module
from latticecft.fock.partitions import energy
from latticecft.scalars import ScalarBackend
from latticecft.vertex import (
    generalized_binomial,
    pre_vertex,
    verify_comm_E,
    verify_locality_phase,
    verify_parity_conjugation,
    verify_primary,
)
from latticecft.vertex.series import PreVertexImages


@pytest.fixture(scope="module")
def line12():
    return build_module(1, None, 12, backend=ScalarBackend())


def test_generalized_binomial(rational):
    b = rational
    assert b.eq(generalized_binomial(b, b.from_int(-2), 3), b.from_int(-4))
    assert b.eq(generalized_binomial(b, b.from_rational(Fraction(1, 2)), 2), b.from_rational(Fraction(-1, 8)))
    assert b.eq(generalized_binomial(b, b.from_int(5), 0), b.one)


@pytest.mark.parametrize("a", [-2, -1, 0, 1, 2])
@pytest.mark.parametrize("c", [-2, -1, 0, 1, 2])
def test_exponential_commutation(line12, a, c):
    report = verify_comm_E(line12, [a], [c], 6)
    assert report.passed, report.failures


@pytest.mark.parametrize("index", [0, 1])
@pytest.mark.parametrize("side", [0, 1])
def test_primary_generators(rank2, index, side):
    b = rank2.backend
    charge = (1, 0) if index == 0 else (0, 1)
    u = rank2.ambient(charge)[side]
    module = build_module(1, None, 10, backend=b, side="chiral" if side == 0 else "antichiral")
    report = verify_primary(module, u, range(-2, 3), 5)
    assert report.passed, report.failures


def test_primary_on_charged_sector(rank2):
    b = rank2.backend
    u = rank2.ambient((1, 0))[0]
    lam = rank2.ambient((1, 1))[0]
    module = build_module(1, lam, 8, backend=b)
    report = verify_primary(module, u, range(-2, 3), 4)
    assert report.passed, report.failures


def test_pre_vertex_scaling_dimension(rank2):
    b = rank2.backend
    u = rank2.ambient((1, 0))[0]
    assert b.eq(b.half * b.dot(u, u), b.from_rational(Fraction(1, 2)))


def test_pre_vertex_order_above_cutoff(rational):
    module = build_module(1, None, 3, backend=rational)
    with pytest.raises(OutOfWindow):
        pre_vertex(module, [1], 4)


@pytest.mark.parametrize("alpha, beta", [((1, 0), (1, 0)), ((1, 0), (0, 1)), ((0, 1), (0, 1)), ((1, 1), (1, -1))])
def test_locality_rank2(rank2, alpha, beta):
    report = verify_locality_phase(rank2, alpha, beta, 4)
    assert report.passed, report.failures


def test_locality_isotropic(isotropic):
    report = verify_locality_phase(isotropic, (1,), (1,), 4)
    assert report.passed, report.failures
    assert any("sign +1" in n for n in report.notes)


def test_locality_purely_chiral(a1):
    report = verify_locality_phase(a1, (1,), (1,), 3)
    assert report.passed, report.failures
    assert report.find("locality.antichiral").status == "skipped"


def test_parity_flips_exponentials(rank2):
    u = rank2.ambient((1, 0))[0]
    module = build_module(1, None, 8, backend=rank2.backend)
    report = verify_parity_conjugation(module, u, 4)
    assert report.passed, report.failures


def test_capped_images_match_single_power(line12):
    b = line12.backend
    capped = PreVertexImages(line12, [1], energy_cap=8)
    plain = PreVertexImages(line12, [1])
    for s in line12.states_up_to(4):
        e = energy(s)
        assert capped.image(s, -e - 1) == {}
        # one miss fills the whole row up to the cap
        capped.image(s, -e)
        assert all((s, k) in capped._memo for k in range(-e, 8 - e + 1))
        for k in range(-e, 8 - e + 1):
            x, y = capped.image(s, k), plain.image(s, k)
            assert set(x) == set(y)
            assert all(b.eq(x[t], y[t]) for t in x)
