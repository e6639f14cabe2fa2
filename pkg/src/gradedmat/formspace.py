"""Coordinates on spaces of graded forms.

A degree-p form is determined by one matrix per canonical index tuple, so
the space of p-forms has a basis labeled by pairs (index tuple, matrix
unit).  Labels are ordered index-tuple major, matrix units row major;
everything downstream (differential matrices, rank computations, kernel
bases) refers to this ordering.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import linalg
from .constants import StructureConstants
from .forms import DerivationVector, GradedForm, lie_derivative
from .indexset import enumerate_multi_indices, tuple_parity
from .matrices import GradedMatrix, _index_parity
from .scalars import Scalar

Label = Tuple[Tuple[int, ...], int, int]


def form_basis_labels(
    sc: StructureConstants, p: int, parity: Optional[int] = None
) -> List[Label]:
    """Basis labels of the p-form space, optionally one total parity only."""
    k = sc.n + sc.m
    out: List[Label] = []
    for key in enumerate_multi_indices(sc.even_dim, sc.odd_dim, p):
        kp = tuple_parity(key, sc.even_dim)
        for r in range(k):
            for c in range(k):
                if parity is not None:
                    mp = (_index_parity(r, sc.n) + _index_parity(c, sc.n)) % 2
                    if (kp + mp) % 2 != parity:
                        continue
                out.append((key, r, c))
    return out


def basis_form(sc: StructureConstants, label: Label) -> GradedForm:
    key, r, c = label
    return GradedForm.of(sc, len(key), {key: GradedMatrix.unit(sc.n, sc.m, r, c)})


def form_to_sparse(form: GradedForm, index: Dict[Label, int]) -> Dict[int, Scalar]:
    out: Dict[int, Scalar] = {}
    for key, mat in form.coeffs.items():
        for r in range(mat.size):
            for c in range(mat.size):
                v = mat.entries[r][c]
                if v:
                    out[index[(key, r, c)]] = v
    return out


def vector_to_form(
    sc: StructureConstants, p: int, vec: Sequence, labels: Sequence[Label]
) -> GradedForm:
    coeffs: Dict[Tuple[int, ...], GradedMatrix] = {}
    k = sc.n + sc.m
    for x, (key, r, c) in zip(vec, labels):
        s = Scalar.of(x)
        if not s:
            continue
        mat = coeffs.get(key)
        if mat is None:
            mat = GradedMatrix.zero(sc.n, sc.m)
        rows = [list(row) for row in mat.entries]
        rows[r][c] = rows[r][c] + s
        coeffs[key] = GradedMatrix.from_rows(sc.n, sc.m, rows)
    return GradedForm.of(sc, p, coeffs)


@dataclass
class LinearMapMatrix:
    """A linear map between form spaces, stored column-sparse.

    ``columns[j]`` is the image of input basis vector j as a sparse vector
    over the output labels.  Rank goes through fraction-free elimination
    with a multi-prime modular cross-check.
    """

    in_labels: List[Label]
    out_labels: List[Label]
    columns: List[Dict[int, Scalar]]
    _int_rows: Optional[List[linalg.SparseIntRow]] = field(
        default=None, repr=False, compare=False
    )
    _rank: Optional[int] = field(default=None, repr=False, compare=False)

    @property
    def ncols(self) -> int:
        return len(self.in_labels)

    @property
    def nrows(self) -> int:
        return len(self.out_labels)

    def int_rows(self) -> List[linalg.SparseIntRow]:
        """The matrix as integer rows with per-row content cleared."""
        if self._int_rows is None:
            rows: Dict[int, Dict[int, Fraction]] = {}
            for j, col in enumerate(self.columns):
                for i, v in col.items():
                    f = v.as_fraction()
                    if f:
                        rows.setdefault(i, {})[j] = f
            self._int_rows = [
                linalg.sparse_row_from_fractions(rows[i]) for i in sorted(rows)
            ]
        return self._int_rows

    def rank(self, cross_check: bool = True) -> int:
        if self._rank is None:
            self._rank = linalg.exact_rank(
                self.int_rows(), self.ncols, cross_check=cross_check
            )
        return self._rank

    def kernel(self) -> List[List[Fraction]]:
        vecs = linalg.sparse_kernel(self.int_rows(), self.ncols)
        assert linalg.verify_kernel(self.int_rows(), vecs)
        return vecs

    def apply(self, vec: Dict[int, Scalar]) -> Dict[int, Scalar]:
        out: Dict[int, Scalar] = {}
        for j, x in vec.items():
            for i, v in self.columns[j].items():
                cur = out.get(i)
                s = x * v if cur is None else cur + x * v
                if s:
                    out[i] = s
                elif cur is not None:
                    del out[i]
        return out

    def compose_is_zero(self, inner: "LinearMapMatrix") -> bool:
        """Whether self applied after ``inner`` kills every basis column."""
        for col in inner.columns:
            if self.apply(col):
                return False
        return True


def matrix_of_map(
    fn: Callable[[GradedForm], GradedForm],
    sc: StructureConstants,
    p_in: int,
    p_out: int,
    in_parity: Optional[int] = None,
) -> LinearMapMatrix:
    in_labels = form_basis_labels(sc, p_in, parity=in_parity)
    out_labels = form_basis_labels(sc, p_out)
    index = {lab: i for i, lab in enumerate(out_labels)}
    columns = [form_to_sparse(fn(basis_form(sc, lab)), index) for lab in in_labels]
    return LinearMapMatrix(in_labels, out_labels, columns)


def stack_maps(maps: Sequence[LinearMapMatrix]) -> LinearMapMatrix:
    """Stack maps with a shared input space into one tall matrix.

    The kernel of the stack is the joint kernel; output labels are tagged
    by block through plain offsetting and are not meaningful as labels.
    """
    first = maps[0]
    for mp in maps:
        if mp.in_labels != first.in_labels:
            raise ValueError("stacked maps must share the input space")
    out_labels: List[Label] = []
    columns: List[Dict[int, Scalar]] = [dict() for _ in first.in_labels]
    offset = 0
    for mp in maps:
        out_labels.extend(mp.out_labels)
        for j, col in enumerate(mp.columns):
            for i, v in col.items():
                columns[j][offset + i] = v
        offset += mp.nrows
    return LinearMapMatrix(list(first.in_labels), out_labels, columns)


def invariant_forms(
    sc: StructureConstants, p: int, parity: Optional[int] = None
) -> List[GradedForm]:
    """Basis of the degree-p forms killed by every basis Lie derivative."""
    maps = [
        matrix_of_map(
            lambda f, a=a: lie_derivative(sc, DerivationVector.basis(sc, a), f),
            sc,
            p,
            p,
            in_parity=parity,
        )
        for a in range(sc.dim)
    ]
    stacked = stack_maps(maps)
    return [vector_to_form(sc, p, v, stacked.in_labels) for v in stacked.kernel()]
