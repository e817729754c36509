from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from latticecft.braidcat import (
    FunctorData,
    SectorObject,
    braiding_phase_2d,
    braiding_scalar,
    canonical_functor,
    chiral_pairing_rank2,
    fuse,
    nu_phase_check,
    random_trig_pair,
    verify_braiding,
    verify_functor_coherence,
)
from latticecft.errors import QuadratureUnstable
from latticecft.phases import Phase
from latticecft.types import Charge


def test_fusion_adds_charges():
    assert fuse(SectorObject.of(1, 0), SectorObject.of(0, 1)) == SectorObject.of(1, 1)
    assert fuse(SectorObject.of(2, -1), SectorObject.of(2, -1).conjugate()).is_unit()


def test_braiding_scalars_rank2(rank2):
    # chiral pairing (p v1, p v2) = 1/2 at R^2 = 1
    assert braiding_scalar(rank2, (1, 0), (0, 1), +1) == Phase(Fraction(1, 4))
    assert braiding_scalar(rank2, (1, 0), (0, 1), -1) == Phase(Fraction(3, 4))
    assert braiding_phase_2d(rank2, (1, 0), (0, 1)) == Phase.from_sign(-1)
    assert braiding_phase_2d(rank2, (1, 0), (1, 0)) == Phase()


def test_verify_braiding(rank2):
    report = verify_braiding(rank2, 3)
    assert report.passed, report.failures


def test_chiral_pairing_rank2():
    assert chiral_pairing_rank2(1, (1, 0), (0, 1)) == Fraction(1, 2)
    assert chiral_pairing_rank2("2/3", (1, 0), (1, 0)) == Fraction(1, 3)
    assert chiral_pairing_rank2(math.sqrt(2), (1, 0), (1, 0)) == pytest.approx(math.sqrt(2) / 2)


@pytest.mark.parametrize("r_squared", ["1", "2", "1/3"])
def test_functor_coherence_exact(r_squared):
    report = verify_functor_coherence(canonical_functor(), r_squared, 4)
    assert report.passed, report.failures
    assert any("rational" in n for n in report.notes)


def test_functor_coherence_irrational():
    report = verify_functor_coherence(canonical_functor(), math.sqrt(2), 4, tolerance=1e-9)
    assert report.passed, report.failures
    assert not report.notes


def test_corrupted_tensorator_fails():
    F = canonical_functor()

    def corrupted(x: Charge, y: Charge) -> Phase:
        flip = Phase.from_sign(-1) if (x.coords, y.coords) == ((1, 0), (0, 1)) else Phase()
        return F.tensorator(x, y) * flip

    report = verify_functor_coherence(FunctorData(object_map=F.object_map, tensorator=corrupted), "1", 2)
    record = report.find("functor.cocycle")
    assert record.status == "fail"
    assert set(record.witness) == {"x", "y", "z"}


@pytest.mark.parametrize("seed", range(5))
def test_nu_phase(seed):
    h, g = random_trig_pair(np.random.default_rng(seed))
    report = nu_phase_check(h, g)
    assert report.passed, report.failures


def test_nu_phase_needs_unit_means():
    report = nu_phase_check({0: 2.0}, {0: 1.0})
    assert not report.passed
    assert report.find("nu.mean").status == "fail"


def test_quadrature_unstable():
    # one trapezoid estimate cannot be compared against a refinement
    h = {0: 1.0, 40: 0.5, -40: 0.5}
    g = {0: 1.0, 1: 0.25, -1: 0.25}
    with pytest.raises(QuadratureUnstable):
        nu_phase_check(h, g, points=8, max_doublings=0)
