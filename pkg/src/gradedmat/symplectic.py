"""Graded symplectic structure and Poisson bracket.

An even closed 2-form is symplectic when  iota_(D_M) omega + dM = 0  has
exactly one derivation solution D_M for every matrix M.  The solve runs
over first-slot contractions against the basis derivations: the columns
iota_(bd_B) omega are vectorized as 1-forms and the coordinate vector of
D_M is the unique preimage of -dM.

The canonical example is d Theta; its Hamiltonian map is M -> ad M and
its Poisson bracket is the graded commutator, both of which the tests pin
down exactly.  Uniqueness up to scalar is realized as a kernel
computation: every symplectic form is invariant under all Hamiltonian
fields, and Hamiltonian fields exhaust the derivations, so symplectic
candidates live in the space of closed invariant even 2-forms, which is
computed exactly and is one-dimensional.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from . import linalg
from .constants import StructureConstants
from .forms import (
    DerivationVector, GradedForm, canonical_one_form, evaluate,
    exterior_derivative, interior_product, lie_derivative,
)
from .formspace import (
    form_basis_labels, form_to_sparse, matrix_of_map, stack_maps,
    vector_to_form,
)
from .matrices import GradedMatrix
from .scalars import ZERO


def canonical_two_form(sc: StructureConstants) -> GradedForm:
    """d of the canonical 1-form; the reference symplectic structure."""
    return exterior_derivative(sc, canonical_one_form(sc))


@dataclass
class SymplecticCertificate:
    """Outcome of the symplectic test, with the failing stage if any."""

    degree_ok: bool
    even: bool
    closed: bool
    contraction_rank: int
    expected_rank: int
    consistent: bool
    note: str = ""

    @property
    def ok(self) -> bool:
        return (
            self.degree_ok and self.even and self.closed
            and self.contraction_rank == self.expected_rank and self.consistent
        )


class SymplecticForm:
    """A certified symplectic form with a cached contraction system."""

    def __init__(self, sc: StructureConstants, form: GradedForm,
                 _trusted: Optional[Tuple] = None):
        if _trusted is None:
            built, cert = analyze(sc, form)
            if built is None:
                raise ValueError(f"form is not symplectic: {cert}")
            _trusted = built._system
        self.sc = sc
        self.form = form
        self._system = _trusted

    @property
    def _rows(self):
        return self._system[0]

    def hamiltonian_field(self, mat: GradedMatrix) -> DerivationVector:
        """The unique derivation with  iota_D omega = -dM."""
        sc = self.sc
        rows, labels, index = self._system
        dm = exterior_derivative(sc, GradedForm.from_matrix(sc, mat))
        sparse = form_to_sparse(dm, index)
        rhs = [ZERO] * len(labels)
        for i, v in sparse.items():
            rhs[i] = -v
        coords = linalg.solve_unique(rows, rhs)
        return DerivationVector(sc.even_dim, sc.odd_dim, tuple(coords))

    def poisson_bracket(self, m1: GradedMatrix, m2: GradedMatrix) -> GradedMatrix:
        """omega(D_M, D_M') for the two Hamiltonian fields."""
        d1 = self.hamiltonian_field(m1)
        d2 = self.hamiltonian_field(m2)
        return evaluate(self.form, [d1, d2])


def _contraction_system(sc: StructureConstants, form: GradedForm):
    labels = form_basis_labels(sc, 1)
    index = {lab: i for i, lab in enumerate(labels)}
    cols = []
    for b in range(sc.dim):
        w = interior_product(DerivationVector.basis(sc, b), form)
        cols.append(form_to_sparse(w, index))
    rows = [[ZERO] * sc.dim for _ in labels]
    for b, col in enumerate(cols):
        for i, v in col.items():
            rows[i][b] = v
    return rows, labels, index


def analyze(
    sc: StructureConstants, form: GradedForm
) -> Tuple[Optional[SymplecticForm], SymplecticCertificate]:
    """Run the full symplectic test; return the certified form if it passes."""
    degree_ok = form.degree == 2
    even = degree_ok and form.homogeneous_parity() == 0
    closed = degree_ok and exterior_derivative(sc, form).is_zero()
    if not degree_ok:
        return None, SymplecticCertificate(False, False, False, 0, sc.dim, False,
                                           note="degree must be 2")
    rows, labels, index = _contraction_system(sc, form)
    rank = linalg.rank_dense(rows)
    consistent = True
    note = ""
    if rank == sc.dim:
        probes = [sc.basis.elements[a] for a in range(sc.dim)]
        probes.append(GradedMatrix.identity(sc.n, sc.m))
        for mat in probes:
            dm = exterior_derivative(sc, GradedForm.from_matrix(sc, mat))
            sparse = form_to_sparse(dm, index)
            rhs = [ZERO] * len(labels)
            for i, v in sparse.items():
                rhs[i] = -v
            try:
                linalg.solve_unique(rows, rhs)
            except ValueError:
                consistent = False
                note = "contraction system inconsistent for a basis matrix"
                break
    cert = SymplecticCertificate(degree_ok, even, closed, rank, sc.dim, consistent,
                                 note=note)
    if not cert.ok:
        return None, cert
    return SymplecticForm(sc, form, _trusted=(rows, labels, index)), cert


def is_symplectic(sc: StructureConstants, form: GradedForm) -> bool:
    return analyze(sc, form)[0] is not None


def canonical_symplectic(sc: StructureConstants) -> SymplecticForm:
    built, cert = analyze(sc, canonical_two_form(sc))
    assert built is not None, cert
    return built


# ======================================================================
# Uniqueness up to scalar
# ======================================================================


def closed_invariant_even_two_forms(sc: StructureConstants) -> List[GradedForm]:
    """Exact basis of {omega even 2-form : d omega = 0, all L_bd omega = 0}.

    Every symplectic structure lies in this space, since it is invariant
    under its own Hamiltonian fields and those exhaust the derivations.
    """
    d_map = matrix_of_map(
        lambda w: exterior_derivative(sc, w), sc, 2, 3, in_parity=0
    )
    lie_maps = [
        matrix_of_map(
            lambda w, a=a: lie_derivative(sc, DerivationVector.basis(sc, a), w),
            sc, 2, 2, in_parity=0,
        )
        for a in range(sc.dim)
    ]
    stacked = stack_maps([d_map] + lie_maps)
    kernel = stacked.kernel()
    labels = d_map.in_labels
    return [vector_to_form(sc, 2, vec, labels) for vec in kernel]


def symplectic_uniqueness_holds(sc: StructureConstants) -> bool:
    """The closed invariant even 2-forms are exactly the multiples of dTheta."""
    space = closed_invariant_even_two_forms(sc)
    if len(space) != 1:
        return False
    ref = canonical_two_form(sc)
    gen = space[0]
    for key, mat in ref.coeffs.items():
        other = gen.coefficient(key)
        for r in range(mat.size):
            for c in range(mat.size):
                if mat.entries[r][c]:
                    ratio = other.entries[r][c] / mat.entries[r][c]
                    return bool(ratio) and gen == ref.scale(ratio)
    return False
