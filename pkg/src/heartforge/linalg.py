"""Deterministic exact linear algebra over a prime field F_p.

Matrices are dense, row-major lists of residues in [0, p).  Elimination
always picks the leftmost pivot, so every derived canonical form
(echelon forms, kernel bases, particular solutions) is reproducible
byte for byte.  GF(2) gets a bitset fast path; other primes use plain
modular arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A prime field F_p."""

    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"field characteristic must be prime, got {self.p}")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, self.p - 2, self.p)


class Mat:
    """Dense matrix over F_p; rows are lists of residues."""

    __slots__ = ("p", "rows", "ncols")

    def __init__(self, p: int, rows: Sequence[Sequence[int]], ncols: Optional[int] = None):
        self.p = p
        self.rows = [[x % p for x in r] for r in rows]
        if self.rows:
            self.ncols = len(self.rows[0])
            for r in self.rows:
                if len(r) != self.ncols:
                    raise ValueError("ragged rows")
        else:
            if ncols is None:
                raise ValueError("empty matrix needs explicit ncols")
            self.ncols = ncols

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @staticmethod
    def zero(p: int, nrows: int, ncols: int) -> "Mat":
        return Mat(p, [[0] * ncols for _ in range(nrows)], ncols)

    @staticmethod
    def identity(p: int, n: int) -> "Mat":
        return Mat(p, [[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    def copy(self) -> "Mat":
        return Mat(self.p, [r[:] for r in self.rows], self.ncols)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Mat)
            and self.p == other.p
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __repr__(self) -> str:
        return f"Mat(p={self.p}, {self.nrows}x{self.ncols})"

    def transpose(self) -> "Mat":
        return Mat(
            self.p,
            [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
            self.nrows,
        )

    def mul(self, other: "Mat") -> "Mat":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in mul")
        p = self.p
        out = [[0] * other.ncols for _ in range(self.nrows)]
        for i, row in enumerate(self.rows):
            acc = out[i]
            for k, a in enumerate(row):
                if a:
                    orow = other.rows[k]
                    for j, b in enumerate(orow):
                        if b:
                            acc[j] = (acc[j] + a * b) % p
        return Mat(p, out, other.ncols)

    def add(self, other: "Mat") -> "Mat":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch in add")
        p = self.p
        return Mat(
            p,
            [[(a + b) % p for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
            self.ncols,
        )

    def scale(self, c: int) -> "Mat":
        p = self.p
        return Mat(p, [[(c * a) % p for a in r] for r in self.rows], self.ncols)

    def neg(self) -> "Mat":
        return self.scale(self.p - 1)

    def apply(self, vec: Sequence[int]) -> List[int]:
        """Matrix times column vector."""
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        p = self.p
        return [sum(a * v for a, v in zip(row, vec)) % p for row in self.rows]

    def is_zero(self) -> bool:
        return all(all(a == 0 for a in r) for r in self.rows)


def _rref_rows_gf2(rows: List[int], ncols: int) -> Tuple[List[int], List[int]]:
    """RREF of bitset rows (bit j = column j); returns (rows, pivot columns)."""
    work = [r for r in rows]
    pivots: List[int] = []
    rank = 0
    for col in range(ncols):
        sel = None
        mask = 1 << col
        for r in range(rank, len(work)):
            if work[r] & mask:
                sel = r
                break
        if sel is None:
            continue
        work[rank], work[sel] = work[sel], work[rank]
        for r in range(len(work)):
            if r != rank and (work[r] & mask):
                work[r] ^= work[rank]
        pivots.append(col)
        rank += 1
    return work[:rank], pivots


def rref(A: Mat) -> Tuple[Mat, int, List[int]]:
    """Reduced row echelon form with leftmost-pivot rule.

    Returns (R, rank, pivot_cols); R has exactly `rank` rows.
    """
    p = A.p
    n = A.ncols
    if p == 2:
        bits = [sum(1 << j for j, a in enumerate(row) if a) for row in A.rows]
        red, pivots = _rref_rows_gf2(bits, n)
        rows = [[(r >> j) & 1 for j in range(n)] for r in red]
        return Mat(2, rows, n), len(pivots), pivots
    work = [row[:] for row in A.rows]
    pivots: List[int] = []
    rank = 0
    for col in range(n):
        sel = None
        for r in range(rank, len(work)):
            if work[r][col]:
                sel = r
                break
        if sel is None:
            continue
        work[rank], work[sel] = work[sel], work[rank]
        inv = pow(work[rank][col], p - 2, p)
        work[rank] = [(a * inv) % p for a in work[rank]]
        for r in range(len(work)):
            if r != rank and work[r][col]:
                c = work[r][col]
                work[r] = [(a - c * b) % p for a, b in zip(work[r], work[rank])]
        pivots.append(col)
        rank += 1
    return Mat(p, work[:rank], n), rank, pivots


def rank(A: Mat) -> int:
    return rref(A)[1]


def kernel_basis(A: Mat) -> Mat:
    """Basis of the right null space {x : A x = 0}, one vector per row.

    Free coordinates follow the standard unit pattern (free column set to
    1, other free columns 0), taken in increasing column order.
    """
    R, rk, pivots = rref(A)
    n = A.ncols
    piv_set = set(pivots)
    free = [j for j in range(n) if j not in piv_set]
    p = A.p
    rows = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-R.rows[i][f]) % p
        rows.append(v)
    return Mat(p, rows, n)


def solve(A: Mat, b: Sequence[int]) -> Optional[List[int]]:
    """One solution of A x = b (canonical particular solution), or None."""
    if len(b) != A.nrows:
        raise ValueError("rhs length mismatch")
    p = A.p
    aug = Mat(p, [row + [bv % p] for row, bv in zip(A.rows, b)], A.ncols + 1)
    R, rk, pivots = rref(aug)
    if A.ncols in pivots:
        return None
    x = [0] * A.ncols
    for i, pc in enumerate(pivots):
        x[pc] = R.rows[i][A.ncols]
    return x


def row_space_basis(A: Mat) -> Mat:
    """Canonical (RREF) basis of the row space."""
    R, rk, _ = rref(A)
    return R


def stack(p: int, mats: Iterable[Mat], ncols: int) -> Mat:
    rows: List[List[int]] = []
    for m in mats:
        rows.extend(r[:] for r in m.rows)
    return Mat(p, rows, ncols)


def in_row_space(A: Mat, v: Sequence[int]) -> bool:
    R, rk, _ = rref(A)
    aug = Mat(A.p, R.rows + [list(v)], A.ncols)
    return rank(aug) == rk


def intersect_row_spaces(A: Mat, B: Mat) -> Mat:
    """Basis of (row space of A) ∩ (row space of B)."""
    if A.ncols != B.ncols:
        raise ValueError("ambient mismatch")
    p, n = A.p, A.ncols
    RA = row_space_basis(A)
    RB = row_space_basis(B)
    if RA.nrows == 0 or RB.nrows == 0:
        return Mat(p, [], n)
    # x in both spans: x = u·RA = v·RB; solve [RA^T | -RB^T] (u,v)^T = 0.
    top = RA.transpose()
    bot = RB.transpose().neg()
    rows = [top.rows[i] + bot.rows[i] for i in range(n)]
    K = kernel_basis(Mat(p, rows, RA.nrows + RB.nrows))
    vecs = []
    for krow in K.rows:
        u = krow[: RA.nrows]
        x = [0] * n
        for c, row in zip(u, RA.rows):
            if c:
                x = [(xi + c * ri) % p for xi, ri in zip(x, row)]
        vecs.append(x)
    return row_space_basis(Mat(p, vecs, n))


def quotient_coordinates(sub: Mat, amb_dim: int) -> Tuple[List[int], Mat]:
    """Coordinates for F_p^amb_dim / row_space(sub).

    Returns (complement columns, projection matrix Q) where Q maps an
    ambient column vector to its coordinates in the chosen complement
    basis (the non-pivot standard basis vectors).
    """
    p = sub.p
    R, rk, pivots = rref(sub)
    piv_set = set(pivots)
    comp = [j for j in range(amb_dim) if j not in piv_set]
    # e_j for pivot j reduces to -sum of R entries on complement columns.
    Q = Mat.zero(p, len(comp), amb_dim)
    for idx, j in enumerate(comp):
        Q.rows[idx][j] = 1
    for i, pc in enumerate(pivots):
        for idx, j in enumerate(comp):
            Q.rows[idx][pc] = (-R.rows[i][j]) % p
    return comp, Q
