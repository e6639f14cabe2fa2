"""Block-graded square matrices and their bracket operations.

A matrix of shape (n|m) is an (n+m) x (n+m) matrix over the Gaussian
rationals, graded by the two diagonal blocks: entries with row and column
in the same block are even, entries crossing blocks are odd.  The even
and odd parts of the bracket operations below carry all sign conventions
of the package, so everything downstream (structure constants, forms,
connections) inherits exactness from this module.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .scalars import ONE, ZERO, Scalar


def _index_parity(i: int, n: int) -> int:
    return 0 if i < n else 1


@dataclass(frozen=True)
class GradedMatrix:
    """An (n+m) x (n+m) matrix with the block Z2-grading.

    ``entries`` is a tuple of rows, each a tuple of Scalar.  Instances are
    immutable and hashable; all operations return new matrices.
    """

    n: int
    m: int
    entries: tuple

    # ---- constructors -------------------------------------------------

    @staticmethod
    def from_rows(n: int, m: int, rows: Sequence[Sequence]) -> "GradedMatrix":
        k = n + m
        if len(rows) != k or any(len(r) != k for r in rows):
            raise ValueError(f"expected {k}x{k} rows for shape ({n}|{m})")
        ent = tuple(tuple(Scalar.of(x) for x in row) for row in rows)
        return GradedMatrix(n, m, ent)

    @staticmethod
    def zero(n: int, m: int) -> "GradedMatrix":
        k = n + m
        row = (ZERO,) * k
        return GradedMatrix(n, m, (row,) * k)

    @staticmethod
    def identity(n: int, m: int) -> "GradedMatrix":
        k = n + m
        return GradedMatrix(
            n, m, tuple(tuple(ONE if i == j else ZERO for j in range(k)) for i in range(k))
        )

    @staticmethod
    def unit(n: int, m: int, i: int, j: int, value=1) -> "GradedMatrix":
        """The matrix with a single entry ``value`` at position (i, j)."""
        k = n + m
        v = Scalar.of(value)
        return GradedMatrix(
            n,
            m,
            tuple(
                tuple(v if (r, c) == (i, j) else ZERO for c in range(k)) for r in range(k)
            ),
        )

    # ---- basic queries ------------------------------------------------

    @property
    def size(self) -> int:
        return self.n + self.m

    def __getitem__(self, rc) -> Scalar:
        r, c = rc
        return self.entries[r][c]

    def is_zero(self) -> bool:
        return all(not x for row in self.entries for x in row)

    def entry_parity(self, i: int, j: int) -> int:
        return (_index_parity(i, self.n) + _index_parity(j, self.n)) % 2

    # ---- linear structure ---------------------------------------------

    def _require_shape(self, other: "GradedMatrix"):
        if (self.n, self.m) != (other.n, other.m):
            raise ValueError(
                f"shape mismatch: ({self.n}|{self.m}) vs ({other.n}|{other.m})"
            )

    def __add__(self, other: "GradedMatrix") -> "GradedMatrix":
        self._require_shape(other)
        return GradedMatrix(
            self.n,
            self.m,
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            ),
        )

    def __sub__(self, other: "GradedMatrix") -> "GradedMatrix":
        self._require_shape(other)
        return GradedMatrix(
            self.n,
            self.m,
            tuple(
                tuple(a - b for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            ),
        )

    def __neg__(self) -> "GradedMatrix":
        return GradedMatrix(
            self.n, self.m, tuple(tuple(-a for a in row) for row in self.entries)
        )

    def scale(self, s) -> "GradedMatrix":
        s = Scalar.of(s)
        return GradedMatrix(
            self.n, self.m, tuple(tuple(s * a for a in row) for row in self.entries)
        )

    def __rmul__(self, s):
        if isinstance(s, (int, Fraction, Scalar)):
            return self.scale(s)
        return NotImplemented

    def __matmul__(self, other: "GradedMatrix") -> "GradedMatrix":
        self._require_shape(other)
        k = self.size
        cols = tuple(zip(*other.entries))
        return GradedMatrix(
            self.n,
            self.m,
            tuple(
                tuple(sum((a * b for a, b in zip(row, col)), ZERO) for col in cols)
                for row in self.entries
            ),
        )

    # ---- grading ------------------------------------------------------

    def parity_decompose(self) -> tuple["GradedMatrix", "GradedMatrix"]:
        """Split into (even part, odd part); the two always sum back to self."""
        k = self.size
        ev = [[ZERO] * k for _ in range(k)]
        od = [[ZERO] * k for _ in range(k)]
        for i in range(k):
            for j in range(k):
                x = self.entries[i][j]
                if self.entry_parity(i, j) == 0:
                    ev[i][j] = x
                else:
                    od[i][j] = x
        return (
            GradedMatrix(self.n, self.m, tuple(map(tuple, ev))),
            GradedMatrix(self.n, self.m, tuple(map(tuple, od))),
        )

    def homogeneous_parity(self) -> Optional[int]:
        """0 or 1 for homogeneous matrices, None for mixed.

        The zero matrix reports parity 0; callers that branch on parity treat
        it as belonging to either part.
        """
        ev, od = self.parity_decompose()
        if od.is_zero():
            return 0
        if ev.is_zero():
            return 1
        return None

    def is_even(self) -> bool:
        return self.parity_decompose()[1].is_zero()

    def is_odd(self) -> bool:
        return self.parity_decompose()[0].is_zero()

    # ---- traces -------------------------------------------------------

    def trace(self) -> Scalar:
        return sum((self.entries[i][i] for i in range(self.size)), ZERO)

    def supertrace(self) -> Scalar:
        """Trace of the first diagonal block minus trace of the second."""
        t = ZERO
        for i in range(self.size):
            x = self.entries[i][i]
            t = t + x if i < self.n else t - x
        return t

    def __str__(self):
        rows = [" ".join(str(x) for x in row) for row in self.entries]
        return "[" + "; ".join(rows) + "]"


# ======================================================================
# Bracket operations
# ======================================================================


def _sign_pair(pa: int, pb: int) -> int:
    return -1 if (pa and pb) else 1


def graded_commutator(a: GradedMatrix, b: GradedMatrix) -> GradedMatrix:
    """[a, b] = ab - (-1)^{|a||b|} ba, extended bilinearly to mixed inputs."""
    a._require_shape(b)
    out = GradedMatrix.zero(a.n, a.m)
    for pa, ah in enumerate(a.parity_decompose()):
        if ah.is_zero():
            continue
        for pb, bh in enumerate(b.parity_decompose()):
            if bh.is_zero():
                continue
            term = ah @ bh - (bh @ ah).scale(_sign_pair(pa, pb))
            out = out + term
    return out


def graded_anticommutator(a: GradedMatrix, b: GradedMatrix) -> GradedMatrix:
    """{a, b} = ab + (-1)^{|a||b|} ba, extended bilinearly to mixed inputs."""
    a._require_shape(b)
    out = GradedMatrix.zero(a.n, a.m)
    for pa, ah in enumerate(a.parity_decompose()):
        if ah.is_zero():
            continue
        for pb, bh in enumerate(b.parity_decompose()):
            if bh.is_zero():
                continue
            term = ah @ bh + (bh @ ah).scale(_sign_pair(pa, pb))
            out = out + term
    return out


def supertrace(a: GradedMatrix) -> Scalar:
    return a.supertrace()


# ======================================================================
# Body and embedding
# ======================================================================
#
# For n != m the "body" of the algebra is the larger diagonal block: the
# first block when n > m, the second when m > n.  The body of a matrix is
# that block alone; the embedding puts a body matrix back with the
# complementary block filled by the unique scalar matrix making the result
# supertrace-free relative to the original trace.


def body_block_is_first(n: int, m: int) -> bool:
    if n == m:
        raise ValueError("body is undefined for n == m")
    return n > m


@dataclass(frozen=True)
class BodyMatrix:
    """A plain nt x nt matrix, nt = max(n, m), living on the body block."""

    size: int
    entries: tuple

    @staticmethod
    def from_rows(rows: Sequence[Sequence]) -> "BodyMatrix":
        ent = tuple(tuple(Scalar.of(x) for x in row) for row in rows)
        return BodyMatrix(len(ent), ent)

    @staticmethod
    def zero(size: int) -> "BodyMatrix":
        row = (ZERO,) * size
        return BodyMatrix(size, (row,) * size)

    def __getitem__(self, rc) -> Scalar:
        r, c = rc
        return self.entries[r][c]

    def trace(self) -> Scalar:
        return sum((self.entries[i][i] for i in range(self.size)), ZERO)

    def is_zero(self) -> bool:
        return all(not x for row in self.entries for x in row)

    def as_graded(self) -> GradedMatrix:
        """View the body block as the full algebra of shape (size|0)."""
        return GradedMatrix(self.size, 0, self.entries)


def body(a: GradedMatrix) -> BodyMatrix:
    """Project onto the larger diagonal block.  Requires n != m."""
    first = body_block_is_first(a.n, a.m)
    if first:
        idx = range(a.n)
    else:
        idx = range(a.n, a.n + a.m)
    return BodyMatrix(
        max(a.n, a.m),
        tuple(tuple(a.entries[i][j] for j in idx) for i in idx),
    )


def embed_body(mb: BodyMatrix, n: int, m: int) -> GradedMatrix:
    """Right inverse of ``body``, tracing the body into the small block.

    The complementary block is (tr(mb)/nt) times the identity, nt = max(n, m).
    This sends the body identity to the full identity and satisfies
    body(embed_body(mb, n, m)) == mb.
    """
    first = body_block_is_first(n, m)
    nt = max(n, m)
    if mb.size != nt:
        raise ValueError(f"body matrix has size {mb.size}, expected {nt}")
    small = min(n, m)
    k = n + m
    rows = [[ZERO] * k for _ in range(k)]
    off = 0 if first else n
    for i in range(nt):
        for j in range(nt):
            rows[off + i][off + j] = mb.entries[i][j]
    scal = mb.trace() / nt
    coff = n if first else 0
    for i in range(small):
        rows[coff + i][coff + i] = scal
    return GradedMatrix(n, m, tuple(map(tuple, rows)))
