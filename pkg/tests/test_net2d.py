from __future__ import annotations

import numpy as np
import pytest

from conftest import random_even_lattice
from latticecft.errors import OutOfWindow
from latticecft.net2d import (
    build_extension,
    character,
    character_oracle,
    flip_lattice,
    full_field,
    shift_operator,
    spin_spectrum,
    verify_L_shift,
    verify_character,
    verify_full_field,
    verify_offset_grid,
    verify_parity_equivalence,
    verify_shift_laws,
)
from latticecft.types import Charge


@pytest.fixture(scope="module")
def space6(rank2):
    return build_extension(rank2, 3, 6)


def test_sector_count(rank2):
    X = build_extension(rank2, 2, 4)
    assert len(X.charges) == 25


def test_shift_laws(space6):
    report = verify_shift_laws(space6, 1)
    assert report.passed, report.failures
    assert report.find("shift.group_commutator").status == "pass"


def test_negative_shift_is_adjoint_up_to_diagonal_sign(space6):
    # eps((1,1),(1,1)) = -1, so psi^a psi^-a = eps(a,a) on every sector it reaches
    a = Charge((1, 1))
    assert space6.cocycle(a, a) == -1
    up, down = shift_operator(space6, a), shift_operator(space6, -a)
    for lam in space6.charges:
        hit = down.act(lam)
        if hit is None or up.act(hit[0]) is None:
            continue
        back, sign = up.act(hit[0])
        assert back == lam
        assert hit[1] * sign == -1


def test_group_commutator_with_diagonal_sign(space6):
    a, c = Charge((1, 1)), Charge((1, 0))
    ops = [shift_operator(space6, x) for x in (a, c, -a, -c)]
    lam = Charge.zero(2)
    sign = 1
    for op in reversed(ops):
        lam, s = op.act(lam)
        sign *= s
    assert lam == Charge.zero(2)
    # (a|c) = 1 and eps(a,a) eps(c,c) = -1
    assert sign * space6.cocycle(a, a) * space6.cocycle(c, c) == -1
    assert sign == 1


def test_shift_adjoint_is_inverse(space6):
    up = shift_operator(space6, (1, 0))
    down = shift_operator(space6, (-1, 0))
    for lam in space6.charges:
        hit = up.act(lam)
        if hit is None:
            continue
        target, sign = hit
        back, sign_back = down.act(target)
        assert back == lam
        assert sign * sign_back == 1


def test_shift_sign_table(space6):
    # psi^{v1} psi^{v2} = (-1)^{(v1|v2)} psi^{v2} psi^{v1} with (v1|v2) = 1
    a, c = shift_operator(space6, (1, 0)), shift_operator(space6, (0, 1))
    lam = Charge.zero(2)
    t1, s1 = c.act(lam)
    _, s2 = a.act(t1)
    t3, s3 = a.act(lam)
    _, s4 = c.act(t3)
    assert s1 * s2 == -s3 * s4


def test_shift_leaving_box(space6):
    psi = shift_operator(space6, (1, 0))
    vec = {(Charge((3, 0)), ((),), ((),)): space6.backend.one}
    with pytest.raises(OutOfWindow):
        psi.apply(vec, space6.backend)


@pytest.mark.parametrize("charge", [(1, 0), (0, 1), (1, -1)])
def test_L_shift(space6, charge):
    report = verify_L_shift(space6, charge, range(-2, 3))
    assert report.passed, report.failures


def test_spin_rank2(rank2):
    X = build_extension(rank2, 4, 0)
    report = spin_spectrum(X)
    assert report.passed, report.failures


@pytest.mark.parametrize("seed, rank", [(10, 1), (11, 2), (12, 2), (13, 3), (14, 3)])
def test_spin_random_lattices(seed, rank):
    lattice = random_even_lattice(np.random.default_rng(seed), rank)
    X = build_extension(lattice, 4, 0)
    report = spin_spectrum(X)
    assert report.passed, report.failures


def test_spin_isotropic(isotropic):
    report = spin_spectrum(build_extension(isotropic, 4, 0))
    assert report.passed
    assert "0x9" in report.notes[-1]


@pytest.mark.parametrize("level", range(0, 7))
def test_character_matches_oracle(space6, level):
    assert character(space6, level) == character_oracle(space6, level)


def test_character_report(space6):
    report = verify_character(space6, 6)
    assert report.passed, report.failures


def test_character_sector_contribution(space6):
    b = space6.backend
    table = character(space6, 2)
    # sector (1, 1) has minimal bigrade (1, 0)
    assert table[(b.key(b.from_int(1)), b.key(b.zero))] >= 1


def test_character_level_above_cutoff(space6):
    with pytest.raises(ValueError):
        character(space6, 7)


def test_full_field(rank2):
    X = build_extension(rank2, 2, 4)
    report = verify_full_field(X, (1, 0), 3)
    assert report.passed, report.failures


def test_full_field_sector_sign(rank2):
    X = build_extension(rank2, 2, 4)
    Y = full_field(X, (1, 0), 2)
    assert Y.sectors[Charge((0, 1))].sign == -1
    assert Y.sectors[Charge((1, 0))].sign == 1


def test_offset_grid(rank2):
    X = build_extension(rank2, 2, 4)
    report = verify_offset_grid(X, (0, 1), 3)
    assert report.passed, report.failures


def test_flip_keeps_gram(isotropic):
    flipped = flip_lattice(isotropic)
    assert flipped.gram_indef == isotropic.gram_indef


@pytest.mark.parametrize("fixture", ["isotropic", "rank2"])
def test_parity_equivalence(request, fixture):
    lattice = request.getfixturevalue(fixture)
    X = build_extension(lattice, 2, 4)
    report = verify_parity_equivalence(X, range(-2, 3))
    assert report.passed, report.failures
