import random
from fractions import Fraction

import pytest

from gradedmat.forms import (
    DerivationVector,
    GradedForm,
    apply_derivation,
    lie_derivative,
)
from gradedmat.matrices import GradedMatrix, graded_commutator
from gradedmat.scalars import Scalar
from gradedmat.symplectic import (
    SymplecticForm,
    analyze,
    canonical_symplectic,
    canonical_two_form,
    closed_invariant_even_two_forms,
    is_symplectic,
    symplectic_uniqueness_holds,
)
from tests.test_forms import rand_form, rand_matrix


def test_canonical_two_form_is_symplectic(sc21):
    built, cert = analyze(sc21, canonical_two_form(sc21))
    assert built is not None
    assert cert.ok
    assert cert.closed and cert.even
    assert cert.contraction_rank == cert.expected_rank == 8


def test_non_symplectic_inputs_are_rejected(sc21):
    rng = random.Random(53)
    # wrong degree
    built, cert = analyze(sc21, rand_form(rng, sc21, 1))
    assert built is None and not cert.degree_ok
    # odd 2-form
    w_odd = rand_form(rng, sc21, 2, homog=1)
    built, cert = analyze(sc21, w_odd)
    assert built is None and not cert.even
    # even but not closed: generic even 2-form
    w = rand_form(rng, sc21, 2, homog=0)
    assert not is_symplectic(sc21, w)
    # closed and even but degenerate
    assert not is_symplectic(sc21, GradedForm.zero(sc21, 2))
    with pytest.raises(ValueError):
        SymplecticForm(sc21, GradedForm.zero(sc21, 2))


def test_hamiltonian_fields_of_basis_elements(sc21):
    omega = canonical_symplectic(sc21)
    for a in range(sc21.dim):
        field = omega.hamiltonian_field(sc21.basis.elements[a])
        assert field.coords == DerivationVector.basis(sc21, a).coords


def test_scaled_forms_scale_the_fields(sc21):
    for c in (1, 2, -3):
        built, cert = analyze(sc21, canonical_two_form(sc21).scale(c))
        assert built is not None and cert.ok
        inv = Scalar(Fraction(1, c))
        for a in range(sc21.dim):
            field = built.hamiltonian_field(sc21.basis.elements[a])
            want = DerivationVector.basis(sc21, a).scale(inv)
            assert field.coords == want.coords


def test_hamiltonian_field_acts_as_the_adjoint(sc21):
    rng = random.Random(59)
    omega = canonical_symplectic(sc21)
    for mat in [rand_matrix(rng, sc21) for _ in range(3)]:
        field = omega.hamiltonian_field(mat)
        for probe in sc21.basis.elements:
            assert apply_derivation(sc21, field, probe) == (
                graded_commutator(mat, probe)
            )


def test_hamiltonian_field_of_central_element_vanishes(sc21):
    omega = canonical_symplectic(sc21)
    field = omega.hamiltonian_field(GradedMatrix.identity(2, 1))
    assert all(not x for x in field.coords)


def test_poisson_bracket_is_the_graded_commutator(sc21):
    omega = canonical_symplectic(sc21)
    elems = sc21.basis.elements
    for a in range(sc21.dim):
        for b in range(sc21.dim):
            assert omega.poisson_bracket(elems[a], elems[b]) == (
                graded_commutator(elems[a], elems[b])
            )


def test_poisson_bracket_leibniz(sc21):
    rng = random.Random(61)
    omega = canonical_symplectic(sc21)
    for _ in range(4):
        a = rng.randrange(sc21.dim)
        ma = sc21.basis.elements[a]
        pa = sc21.parity(a)
        m2 = rand_matrix(rng, sc21)
        ev, od = m2.parity_decompose()
        m2 = ev if rng.random() < 0.5 else od
        p2 = 0 if m2 is ev else 1
        m3 = rand_matrix(rng, sc21)
        lhs = omega.poisson_bracket(ma, m2 @ m3)
        rhs = omega.poisson_bracket(ma, m2) @ m3 + (
            m2 @ omega.poisson_bracket(ma, m3)
        ).scale(-1 if (pa and p2) else 1)
        assert lhs == rhs


def test_form_is_invariant_under_hamiltonian_fields(sc21):
    rng = random.Random(67)
    omega = canonical_symplectic(sc21)
    mats = [sc21.basis.elements[1], sc21.basis.elements[6]]
    mats += [rand_matrix(rng, sc21) for _ in range(2)]
    for mat in mats:
        field = omega.hamiltonian_field(mat)
        assert lie_derivative(sc21, field, omega.form).is_zero()


def test_uniqueness_up_to_scale(sc21):
    space = closed_invariant_even_two_forms(sc21)
    assert len(space) == 1
    assert symplectic_uniqueness_holds(sc21)
