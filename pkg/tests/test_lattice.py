from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
import sympy
from sympy import ZZ
from sympy.matrices.normalforms import invariant_factors

from conftest import random_even_lattice
from latticecft.errors import BackendMismatch, DegenerateForm, DependentGenerators, NotRational, OddNorm
from latticecft.lattice import (
    SplitSpace,
    build_lattice,
    build_rank2_family,
    chiral_norms,
    discriminant_data,
    enumerate_box,
    indef_pairing,
    integer_coordinates_of,
    is_maximal_even,
    rational_sublattice_vector,
    recognize_lattice,
    spin,
    unimodular_change,
)
from latticecft.scalars import ScalarBackend, backend_for_r_squared


@pytest.mark.parametrize("r_squared", [1, 2, "2/3", 2.5])
def test_rank2_family_gram(r_squared):
    lattice = build_rank2_family(r_squared)
    assert lattice.gram_indef == ((0, 1), (1, 0))


@pytest.mark.parametrize("r_squared, kind", [(1, "quadratic"), (2, "rational"), ("2/3", "quadratic"), (2.5, "float")])
def test_backend_selection(r_squared, kind):
    backend, note = backend_for_r_squared(r_squared)
    assert backend.kind == kind
    assert note


def test_indefinite_pairing_matches_coordinates(rank2):
    for a, b in [((1, 1), (1, 1)), ((2, 3), (2, 3)), ((3, -1), (3, -1))]:
        assert indef_pairing(rank2, a, b) == 2 * a[0] * a[1]
    assert indef_pairing(rank2, (1, 2), (3, 4)) == 1 * 4 + 3 * 2


def test_chiral_norms(rank2):
    b = rank2.backend
    plus, minus = chiral_norms(rank2, (1, 0))
    assert b.eq(plus, b.from_rational(Fraction(1, 2)))
    assert b.eq(minus, b.from_rational(Fraction(1, 2)))
    plus, minus = chiral_norms(rank2, (1, 1))
    assert b.eq(plus, b.from_int(2))
    assert b.is_zero(minus)


def test_spin(rank2):
    assert spin(rank2, (2, 3)) == 6
    assert spin(rank2, (-1, 4)) == -4


def test_odd_norm_rejected(rational):
    with pytest.raises(OddNorm):
        build_lattice(SplitSpace(1, 0), [((1,), ())], backend=rational)


def test_dependent_generators_rejected(rational):
    with pytest.raises(DependentGenerators):
        build_lattice(SplitSpace(1, 1), [((1,), (1,)), ((2,), (2,))], backend=rational)


def test_exact_backend_refuses_floats(rational):
    with pytest.raises(BackendMismatch):
        build_lattice(SplitSpace(1, 1), [((0.5,), (0.5,))], backend=rational)


def test_self_dual_lattice_is_maximal(rank2):
    data = discriminant_data(rank2)
    assert data.order == 1
    assert is_maximal_even(rank2).maximal


def test_non_maximal_lattice_has_glue(rational):
    # 2 x hyperbolic plane: index-4 sublattice of the self-dual one
    lattice = build_lattice(SplitSpace(1, 1), [((1,), (1,)), ((1,), (-1,))], backend=rational)
    assert lattice.gram_indef == ((0, 2), (2, 0))
    verdict = is_maximal_even(lattice)
    assert not verdict.maximal
    assert verdict.witness_norm is not None and verdict.witness_norm % 2 == 0


def test_degenerate_form_has_no_discriminant(isotropic):
    assert isotropic.gram_indef == ((0,),)
    with pytest.raises(DegenerateForm):
        discriminant_data(isotropic)


def test_root_lattice_discriminant(a1):
    assert a1.gram_indef == ((2,),)
    data = discriminant_data(a1)
    assert data.invariant_factors == (2,)
    assert data.representatives == ((Fraction(0),), (Fraction(1, 2),))
    assert data.norms == (Fraction(0), Fraction(1, 2))
    assert is_maximal_even(a1).maximal


def test_norm_eight_lattice_glues_to_norm_two(rational):
    lattice = build_lattice(SplitSpace(1, 1), [((3,), (1,))], backend=rational)
    assert lattice.gram_indef == ((8,),)
    verdict = is_maximal_even(lattice)
    assert not verdict.maximal
    assert verdict.witness == (Fraction(1, 2),)
    assert verdict.witness_norm == 2


@pytest.mark.parametrize("seed, rank", [(s, 2 + s % 2) for s in range(10)])
def test_invariant_factors_match_sympy(seed, rank):
    lattice = random_even_lattice(np.random.default_rng(seed), rank)
    gram = sympy.Matrix(lattice.gram_indef)
    if gram.det() == 0:
        pytest.skip("degenerate Gram")
    data = discriminant_data(lattice)
    expected = tuple(abs(int(x)) for x in invariant_factors(gram, domain=ZZ))
    assert data.invariant_factors == expected
    assert data.order == abs(int(gram.det()))
    assert len(set(data.representatives)) == data.order


@pytest.mark.parametrize("p, q", [(1, 1), (2, 3), (5, 2)])
def test_rational_sublattice_vector(p, q):
    cert = rational_sublattice_vector(Fraction(p, q))
    assert cert.verified
    assert cert.coords == (q, p)
    assert cert.partner_coords == (q, -p)
    assert sympy.simplify(cert.chiral_value - sympy.sqrt(2 * p * q)) == 0


def test_rational_sublattice_vector_needs_rational():
    with pytest.raises(NotRational):
        rational_sublattice_vector("sqrt(2)")


def test_recognize_box_roundtrip(rank2):
    recognized = recognize_lattice(rank2.space, enumerate_box(rank2, 3), backend=rank2.backend)
    assert recognized is not None
    assert unimodular_change(rank2, recognized) is not None


def test_recognize_rejects_dense_rationals(rational):
    values = sorted({Fraction(n, d) for d in range(1, 17) for n in range(-d, d + 1)})
    sample = [((rational.from_rational(x),), (rational.from_rational(x),)) for x in values]
    assert recognize_lattice(SplitSpace(1, 1), sample, backend=rational) is None


def test_integer_coordinates(rank2):
    v = rank2.ambient((2, -3))
    assert integer_coordinates_of(rank2, v) == (2, -3)


def test_float_backend_tolerance():
    backend = ScalarBackend(kind="float", tolerance=1e-12)
    lattice = build_rank2_family(2.5, backend=backend)
    assert lattice.gram_indef == ((0, 1), (1, 0))
    assert spin(lattice, (2, 3)) == 6
