"""Canonical homogeneous bases of the supertrace-free subalgebra of M(n|m).

The supertrace-free matrices form a graded Lie subalgebra of dimension
(n+m)^2 - 1, with n' = n^2 + m^2 - 1 even and m' = 2nm odd directions.
``build_sl_basis`` fixes one deterministic basis once and for all; every
structure constant, form coefficient and chain-complex matrix in the
package is written in it.  Indices are 0-based throughout: even elements
come first (0..n'-1), odd elements after (n'..n'+m'-1).

Ordering convention (documented contract, do not reorder):

  even part
    1. off-diagonal units e_ij of the first diagonal block, (i, j)
       lexicographic;
    2. first-block Cartan differences e_ii - e_(i+1)(i+1), i = 0..n-2;
    3. for m >= 1 the bridge element  m * (sum of first-block diagonal)
       + n * (sum of second-block diagonal), the unique supertrace-free
       diagonal direction meeting both blocks;
    4. off-diagonal units of the second diagonal block, lexicographic;
    5. second-block Cartan differences.

  odd part
    6. upper-right units e_ij (row in first block, column in second),
       (i, j) lexicographic;
    7. lower-left units, (i, j) lexicographic.

For (n|m) = (2|1) this yields the eight elements

  e01, e10, e00 - e11, e00 + e11 + 2 e22, e02, e12, e20, e21

in that order.

``body_adapted_basis`` permutes the even part so that the first
max(n,m)^2 - 1 elements span the copy of the traceless body block; for
n > m that is already the canonical order.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import List, Tuple

from . import linalg
from .matrices import GradedMatrix, graded_commutator
from .scalars import ZERO, Scalar


@dataclass(frozen=True)
class HomogeneousBasis:
    """An ordered homogeneous basis of the supertrace-free subalgebra."""

    n: int
    m: int
    elements: Tuple[GradedMatrix, ...]
    parities: Tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.elements)

    @property
    def even_dim(self) -> int:
        return self.n * self.n + self.m * self.m - 1

    @property
    def odd_dim(self) -> int:
        return 2 * self.n * self.m

    def parity(self, a: int) -> int:
        return self.parities[a]

    def validate(self) -> None:
        n, m = self.n, self.m
        if self.dim != (n + m) ** 2 - 1:
            raise ValueError("wrong number of basis elements")
        if list(self.parities) != [0] * self.even_dim + [1] * self.odd_dim:
            raise ValueError("parities must list all even elements first")
        for e, p in zip(self.elements, self.parities):
            if e.supertrace():
                raise ValueError("basis element has nonzero supertrace")
            hp = e.homogeneous_parity()
            if hp is None or hp != p or e.is_zero():
                raise ValueError("basis element not homogeneous of declared parity")
        if len(linalg.rref(self._vector_columns())[1]) != self.dim:
            raise ValueError("basis elements are linearly dependent")

    def _vector_columns(self) -> List[List[Scalar]]:
        # rows = flattened matrix positions, columns = basis elements
        k = self.n + self.m
        cols = [[e.entries[i][j] for e in self.elements] for i in range(k) for j in range(k)]
        return cols

    @cached_property
    def _expansion_inverse(self) -> List[List[Scalar]]:
        # columns: vec(E_0), ..., vec(E_last), vec(identity)
        k = self.n + self.m
        ident = GradedMatrix.identity(self.n, self.m)
        cols = [
            [e.entries[i][j] for e in (*self.elements, ident)]
            for i in range(k)
            for j in range(k)
        ]
        return linalg.inverse(cols)

    def expand(self, mat: GradedMatrix) -> Tuple[List[Scalar], Scalar]:
        """Coefficients (c_A, u) with  mat = sum c_A E_A + u * identity."""
        if (mat.n, mat.m) != (self.n, self.m):
            raise ValueError("shape mismatch in basis expansion")
        k = self.n + self.m
        vec = [mat.entries[i][j] for i in range(k) for j in range(k)]
        coeffs = linalg.matvec(self._expansion_inverse, vec)
        return coeffs[:-1], coeffs[-1]

    def expand_traceless(self, mat: GradedMatrix) -> List[Scalar]:
        coeffs, unit = self.expand(mat)
        if unit:
            raise ValueError("matrix has a unit component")
        return coeffs


def _diagonal(n: int, m: int, values) -> GradedMatrix:
    k = n + m
    vals = list(values)
    return GradedMatrix(
        n,
        m,
        tuple(
            tuple(Scalar.of(vals[i]) if i == j else ZERO for j in range(k))
            for i in range(k)
        ),
    )


def _even_block_groups(n: int, m: int):
    """The five even ordering groups, as lists of matrices."""
    off1 = [
        GradedMatrix.unit(n, m, i, j)
        for i in range(n)
        for j in range(n)
        if i != j
    ]
    cart1 = [
        _diagonal(n, m, [1 if t == i else (-1 if t == i + 1 else 0) for t in range(n + m)])
        for i in range(n - 1)
    ]
    bridge = []
    if m >= 1:
        bridge.append(_diagonal(n, m, [m] * n + [n] * m))
    off2 = [
        GradedMatrix.unit(n, m, n + i, n + j)
        for i in range(m)
        for j in range(m)
        if i != j
    ]
    cart2 = [
        _diagonal(
            n, m, [0] * n + [1 if t == i else (-1 if t == i + 1 else 0) for t in range(m)]
        )
        for i in range(m - 1)
    ]
    return off1, cart1, bridge, off2, cart2


def _odd_elements(n: int, m: int) -> List[GradedMatrix]:
    upper = [GradedMatrix.unit(n, m, i, n + j) for i in range(n) for j in range(m)]
    lower = [GradedMatrix.unit(n, m, n + j, i) for j in range(m) for i in range(n)]
    return upper + lower


def build_sl_basis(n: int, m: int) -> HomogeneousBasis:
    """The canonical basis in the ordering documented at module level."""
    if n < 1 or m < 0:
        raise ValueError("need n >= 1 and m >= 0")
    if n == m:
        raise ValueError(
            "n == m is not supported: the bridge direction degenerates and "
            "the quadratic pairing is singular"
        )
    off1, cart1, bridge, off2, cart2 = _even_block_groups(n, m)
    even = off1 + cart1 + bridge + off2 + cart2
    odd = _odd_elements(n, m)
    basis = HomogeneousBasis(
        n, m, tuple(even + odd), tuple([0] * len(even) + [1] * len(odd))
    )
    basis.validate()
    return basis


def body_adapted_basis(n: int, m: int) -> HomogeneousBasis:
    """Canonical basis reordered so the body copy comes first.

    The first max(n,m)^2 - 1 elements are supported on the body block and
    restrict there to the canonical basis of the traceless matrices; the
    remaining even elements span the bridge and the small block.  For
    n > m this coincides with ``build_sl_basis``.
    """
    if n == m:
        raise ValueError("body is undefined for n == m")
    off1, cart1, bridge, off2, cart2 = _even_block_groups(n, m)
    if n > m:
        even = off1 + cart1 + bridge + off2 + cart2
    else:
        even = off2 + cart2 + bridge + off1 + cart1
    odd = _odd_elements(n, m)
    basis = HomogeneousBasis(
        n, m, tuple(even + odd), tuple([0] * len(even) + [1] * len(odd))
    )
    basis.validate()
    return basis


def adjoint_action(e: GradedMatrix, target: GradedMatrix) -> GradedMatrix:
    """The derivation attached to ``e``: the graded commutator with it."""
    return graded_commutator(e, target)


def derivation_dimension(basis: HomogeneousBasis) -> Tuple[int, int]:
    """Exact dimensions (even, odd) of the derivations the basis generates.

    Builds the matrix of E -> (adjoint action on all matrix units) and
    computes its exact rank; asserts the map is injective, so the answer
    equals (n', m').
    """
    n, m = basis.n, basis.m
    k = n + m
    units = [GradedMatrix.unit(n, m, i, j) for i in range(k) for j in range(k)]

    def columns(indices):
        cols = []
        for a in indices:
            col = []
            for u in units:
                img = adjoint_action(basis.elements[a], u)
                col.extend(img.entries[i][j] for i in range(k) for j in range(k))
            cols.append(col)
        return [list(row) for row in zip(*cols)] if cols else []

    even_idx = [a for a in range(basis.dim) if basis.parity(a) == 0]
    odd_idx = [a for a in range(basis.dim) if basis.parity(a) == 1]
    even_rank = len(linalg.rref(columns(even_idx))[1]) if even_idx else 0
    odd_rank = len(linalg.rref(columns(odd_idx))[1]) if odd_idx else 0
    if even_rank != len(even_idx) or odd_rank != len(odd_idx):
        raise AssertionError("adjoint map has a kernel on the traceless subalgebra")
    return even_rank, odd_rank
