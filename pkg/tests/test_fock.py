from __future__ import annotations

from fractions import Fraction

import pytest

from latticecft.errors import CutoffTooLarge, OutOfWindow
from latticecft.fock import (
    build_module,
    central_term,
    colored_partition_counts,
    colored_partitions,
    energy_bound_ratios,
    mode_operator,
    smear_field,
    sugawara,
    unit_vector,
    verify_algebra_relations,
    verify_smeared_commutator,
)
from latticecft.fock.partitions import energy, particle_number
from latticecft.fock.relations import adjoint_mismatch
from latticecft.scalars import ScalarBackend


@pytest.mark.parametrize(
    "colors, expected",
    [
        (1, [1, 1, 2, 3, 5, 7, 11, 15, 22]),
        (2, [1, 2, 5, 10, 20, 36, 65, 110, 185]),
        (3, [1, 3, 9, 22, 51, 108, 221, 429, 810]),
    ],
)
def test_grade_dimensions_match_generating_function(colors, expected):
    assert list(colored_partition_counts(colors, 8)) == expected
    module = build_module(colors, None, 8, backend=ScalarBackend())
    assert list(module.grade_dimensions()) == expected


def test_zero_colors_have_only_the_vacuum():
    assert colored_partitions(0, 0) == ((),)
    assert colored_partitions(3, 0) == ()


def test_state_energy_and_particles():
    state = ((3, 1), (2,))
    assert energy(state) == 6
    assert particle_number(state) == 3


@pytest.mark.parametrize("d", [1, 2, 3])
def test_algebra_relations(d):
    module = build_module(d, None, 8, backend=ScalarBackend())
    report = verify_algebra_relations(module, 3)
    assert report.passed, report.failures


def test_algebra_relations_with_weight(rational):
    module = build_module(2, [Fraction(1, 2), -1], 6, backend=rational)
    report = verify_algebra_relations(module, 2)
    assert report.passed, report.failures


@pytest.mark.parametrize("d", [1, 2, 3])
def test_virasoro_central_vacuum_expectation(d):
    b = ScalarBackend()
    module = build_module(d, None, 8, backend=b)
    vac = module.basis_vector(module.vacuum)
    out = sugawara(module, 2).apply(sugawara(module, -2).apply(vac))
    assert b.eq(out.get(module.vacuum, b.zero), b.from_rational(Fraction(d, 2)))
    assert b.eq(central_term(module, 2), b.from_rational(Fraction(d, 2)))


def test_smeared_commutator(rational):
    module = build_module(1, None, 8, backend=rational)
    alpha = unit_vector(module, 0)
    f = {1: 1, 2: Fraction(1, 2), -3: (0, 1)}
    g = {-1: 1, -2: (0, 1), 3: 2}
    report = verify_smeared_commutator(module, alpha, alpha, f, g)
    assert report.passed, report.failures


def test_smearing_outside_cutoff(rational):
    module = build_module(1, None, 4, backend=rational)
    with pytest.raises(OutOfWindow):
        smear_field(module, unit_vector(module, 0), {5: 1})


@pytest.mark.parametrize("d", [1, 2])
@pytest.mark.parametrize("m", [1, 2, 3, 4, -1, -4])
def test_energy_bounds(d, m):
    module = build_module(d, None, 8, backend=ScalarBackend())
    result = energy_bound_ratios(module, unit_vector(module, 0), m)
    assert result.states > 0
    assert result.holds, result


def test_mode_beyond_cutoff(rational):
    module = build_module(1, None, 3, backend=rational)
    with pytest.raises(OutOfWindow):
        mode_operator(module, [1], 4)


def test_state_budget(rational, monkeypatch):
    monkeypatch.setenv("LATTICECFT_STATE_BUDGET", "10")
    with pytest.raises(CutoffTooLarge):
        build_module(2, None, 8, backend=rational)


def test_adjoint_mismatch_finds_wrong_adjoint():
    b = ScalarBackend()
    module = build_module(3, None, 8, backend=b)
    u = unit_vector(module, 1)
    lower, raise_ = mode_operator(module, u, 2), mode_operator(module, u, -2)
    assert adjoint_mismatch(lower, raise_) is None
    assert adjoint_mismatch(raise_, lower) is None
    witness = adjoint_mismatch(lower, lower)
    assert witness is not None
    assert witness["rhs"] == b.to_str(b.zero)
    assert adjoint_mismatch(lower, raise_.scaled(b.from_int(2))) is not None
