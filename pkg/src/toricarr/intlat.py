"""Exact integer-lattice linear algebra.

Smith normal form, Hermite normal form, saturation, quotient torsion and
lattice indices over Python ints (arbitrary precision).  No floating point
anywhere; rational intermediates use fractions.Fraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod
from typing import Optional, Sequence

IntMatrix = Sequence[Sequence[int]]


def identity_matrix(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(a: IntMatrix, b: IntMatrix) -> list[list[int]]:
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def mat_vec(a: IntMatrix, v: Sequence[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


@dataclass(frozen=True)
class SmithDecomposition:
    """left @ matrix @ right == diagonal, with left/right unimodular."""

    left: tuple[tuple[int, ...], ...]
    diagonal: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]

    @property
    def divisors(self) -> tuple[int, ...]:
        """The nonzero elementary divisors d_1 | d_2 | ..."""
        out = []
        for i, row in enumerate(self.diagonal):
            if i < len(row) and row[i]:
                out.append(row[i])
        return tuple(out)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with x*a + y*b == g == gcd(a, b)."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def smith_normal_form(mat: IntMatrix) -> SmithDecomposition:
    """Smith normal form with exact unimodular transforms.

    Pivots are chosen by minimal absolute value with a deterministic
    tie-break (lowest row, then lowest column), so identical inputs give
    identical decompositions.
    """
    a = [list(map(int, row)) for row in mat]
    m = len(a)
    n = len(a[0]) if m else 0
    left = identity_matrix(m)
    right = identity_matrix(n)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x + c * y for x, y in zip(left[dst], left[src])]

    def add_col(dst, src, c):
        for row in a:
            row[dst] += c * row[src]
        for row in right:
            row[dst] += c * row[src]

    t = 0
    while t < min(m, n):
        exhausted = False
        while True:
            # Re-select the minimal-magnitude pivot of the trailing submatrix
            # on every round; this keeps intermediate entries small.
            best = None
            pivot = None
            for i in range(t, m):
                for j in range(t, n):
                    v = abs(a[i][j])
                    if v and (best is None or v < best):
                        best, pivot = v, (i, j)
            if pivot is None:
                exhausted = True
                break
            if pivot[0] != t:
                swap_rows(t, pivot[0])
            if pivot[1] != t:
                swap_cols(t, pivot[1])
            clean = True
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    if q:
                        add_row(i, t, -q)
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    if q:
                        add_col(j, t, -q)
                    if a[t][j]:
                        clean = False
            if clean:
                break
        if exhausted:
            break
        t += 1

    for i in range(min(m, n)):
        if a[i][i] < 0:
            a[i] = [-x for x in a[i]]
            left[i] = [-x for x in left[i]]

    # Enforce the divisibility chain d_i | d_j (i < j) via 2x2 unimodular
    # transforms that replace (d_i, d_j) by (gcd, lcm).
    def rows_2x2(mat, i, j, u):
        ri, rj = mat[i], mat[j]
        mat[i] = [u[0][0] * p + u[0][1] * q for p, q in zip(ri, rj)]
        mat[j] = [u[1][0] * p + u[1][1] * q for p, q in zip(ri, rj)]

    def cols_2x2(mat, i, j, v):
        for row in mat:
            ci, cj = row[i], row[j]
            row[i] = ci * v[0][0] + cj * v[1][0]
            row[j] = ci * v[0][1] + cj * v[1][1]

    r = sum(1 for i in range(min(m, n)) if a[i][i])
    changed = True
    while changed:
        changed = False
        for i in range(r - 1):
            for j in range(i + 1, r):
                di, dj = a[i][i], a[j][j]
                if dj % di == 0:
                    continue
                g, x, y = _xgcd(di, dj)
                lcm = di // g * dj
                u = ((x, y), (-dj // g, di // g))
                v = ((1, -y * dj // g), (1, x * di // g))
                rows_2x2(a, i, j, u)
                rows_2x2(left, i, j, u)
                cols_2x2(a, i, j, v)
                cols_2x2(right, i, j, v)
                assert a[i][i] == g and a[j][j] == lcm
                changed = True
    return SmithDecomposition(
        left=tuple(tuple(row) for row in left),
        diagonal=tuple(tuple(row) for row in a),
        right=tuple(tuple(row) for row in right),
    )


def quotient_torsion(rows: IntMatrix, ambient: Optional[int] = None) -> int:
    """Order of the torsion part of Z^k modulo the row span of `rows`."""
    rows = [list(r) for r in rows]
    if not rows:
        return 1
    if ambient is not None and rows and len(rows[0]) != ambient:
        raise ValueError("ambient dimension mismatch")
    return prod(smith_normal_form(rows).divisors)


def hermite_normal_form(rows: IntMatrix) -> tuple[tuple[int, ...], ...]:
    """Canonical (row-style) HNF basis of the row lattice, zero rows dropped.

    Pivots are positive, entries above each pivot are reduced into
    [0, pivot); the result is the unique canonical basis of the lattice.
    """
    a = [list(map(int, row)) for row in rows if any(row)]
    if not a:
        return ()
    n = len(a[0])
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, len(a)):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        # Euclid on the remaining rows of this column.
        while True:
            nz = [i for i in range(r + 1, len(a)) if a[i][c]]
            if not nz:
                break
            for i in nz:
                q = a[i][c] // a[r][c]
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                if a[i][c]:
                    a[r], a[i] = a[i], a[r]
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        r += 1
    return tuple(tuple(row) for row in a[:r])


def invert_unimodular(mat: IntMatrix) -> tuple[tuple[int, ...], ...]:
    """Exact inverse of a unimodular integer matrix (must be integral)."""
    n = len(mat)
    work = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
            for i, row in enumerate(mat)]
    for c in range(n):
        piv = next(i for i in range(c, n) if work[i][c])
        work[c], work[piv] = work[piv], work[c]
        inv = Fraction(1) / work[c][c]
        work[c] = [x * inv for x in work[c]]
        for i in range(n):
            if i != c and work[i][c]:
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[c])]
    out = []
    for row in work:
        vals = row[n:]
        if any(v.denominator != 1 for v in vals):
            raise ValueError("matrix is not unimodular")
        out.append(tuple(int(v) for v in vals))
    return tuple(out)


def saturate(rows: IntMatrix) -> tuple[tuple[tuple[int, ...], ...], int]:
    """Saturation of the row lattice inside Z^n.

    Returns (canonical HNF basis of span_Q(rows) ∩ Z^n, index of the row
    lattice inside its saturation).
    """
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return (), 1
    snf = smith_normal_form(rows)
    divisors = snf.divisors
    rinv = invert_unimodular(snf.right)
    basis = hermite_normal_form(rinv[: len(divisors)])
    return basis, prod(divisors)


def rational_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q of a list of integer (or Fraction) vectors."""
    work = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    ncols = len(work[0]) if work else 0
    for c in range(ncols):
        piv = None
        for i in range(rank, len(work)):
            if work[i][c]:
                piv = i
                break
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = Fraction(1) / work[rank][c]
        work[rank] = [x * inv for x in work[rank]]
        for i in range(len(work)):
            if i != rank and work[i][c]:
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[rank])]
        rank += 1
    return rank


class SpanChecker:
    """Membership tests against the rational span of a fixed set of rows."""

    def __init__(self, rows: Sequence[Sequence[int]]):
        self._rref: list[tuple[int, list[Fraction]]] = []  # (pivot col, row)
        for row in rows:
            self.contains(row, _absorb=True)

    def contains(self, vec: Sequence[int], _absorb: bool = False) -> bool:
        v = [Fraction(x) for x in vec]
        for c, row in self._rref:
            if v[c]:
                f = v[c]
                v = [x - f * y for x, y in zip(v, row)]
        for c, x in enumerate(v):
            if x:
                if _absorb:
                    inv = Fraction(1) / x
                    new = [y * inv for y in v]
                    for c2, row in self._rref:
                        if row[c]:
                            f = row[c]
                            row[:] = [a - f * b for a, b in zip(row, new)]
                    self._rref.append((c, new))
                    self._rref.sort(key=lambda t: t[0])
                return False
        return True

    @property
    def rank(self) -> int:
        return len(self._rref)


def solve_rational(rows: IntMatrix, rhs: Sequence) -> Optional[tuple[Fraction, ...]]:
    """One exact solution x of rows @ x = rhs (free variables set to 0).

    Returns None when the system is inconsistent.  Pivot choice is
    deterministic, so the returned particular solution is canonical.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    work = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if work[i][c]:
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = Fraction(1) / work[r][c]
        work[r] = [x * inv for x in work[r]]
        for i in range(m):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
    for i in range(r, m):
        if work[i][n]:
            return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = work[i][n]
    return tuple(x)


def in_lattice(basis: Sequence[Sequence[int]], vec: Sequence) -> bool:
    """Whether `vec` lies in the integer row lattice spanned by `basis`.

    `basis` must consist of linearly independent rows (e.g. an HNF basis).
    """
    if not basis:
        return all(x == 0 for x in vec)
    coeffs = solve_rational(list(zip(*basis)), vec)
    if coeffs is None:
        return False
    return all(c.denominator == 1 for c in coeffs)


def lattice_index(sup_rows: IntMatrix, sub_rows: IntMatrix) -> int:
    """Index [sup : sub] of one integer lattice inside another.

    Both lattices are given by generating rows and must have equal rank;
    raises ValueError when sub is not contained in sup.
    """
    sup = hermite_normal_form(sup_rows)
    sub = [row for row in sub_rows if any(row)]
    if not sup and not sub:
        return 1
    if rational_rank(sup) != rational_rank(list(sup) + list(sub)):
        raise ValueError("sublattice not contained in the rational span")
    coeff_rows = []
    cols = list(zip(*sup))
    for row in sub:
        coeffs = solve_rational(cols, row)
        if coeffs is None or any(c.denominator != 1 for c in coeffs):
            raise ValueError("sublattice not contained in the lattice")
        coeff_rows.append([int(c) for c in coeffs])
    divisors = smith_normal_form(coeff_rows).divisors if coeff_rows else ()
    if len(divisors) != len(sup):
        raise ValueError("lattices have different ranks")
    return prod(divisors)
