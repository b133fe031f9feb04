"""Exact linear algebra over Q and Z: small dense matrices and full-rank lattices.

Matrices are tuples of tuples (rows).  Everything is exact; floats never
appear.  Dimensions stay tiny (at most 6 for field matrices, 4 for lattices),
so the algorithms favour clarity over asymptotics.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm


def mat(rows) -> tuple:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def identity(n: int) -> tuple:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def mat_mul(a, b) -> tuple:
    n, k, m = len(a), len(b), len(b[0])
    assert len(a[0]) == k
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m))
        for i in range(n)
    )


def vec_mat(v, a) -> tuple:
    # row vector times matrix
    n, m = len(a), len(a[0])
    assert len(v) == n
    return tuple(sum(v[t] * a[t][j] for t in range(n)) for j in range(m))


def transpose(a) -> tuple:
    return tuple(tuple(row[j] for row in a) for j in range(len(a[0])))


def mat_det(a) -> Fraction:
    """Determinant by fraction-free-ish Gaussian elimination with pivoting."""
    n = len(a)
    m = [list(row) for row in a]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / Fraction(m[col][col])
        for r in range(col + 1, n):
            if m[r][col]:
                f = m[r][col] * inv
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return det


def mat_inv(a) -> tuple:
    n = len(a)
    m = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / Fraction(m[col][col])
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return tuple(tuple(row[n:]) for row in m)


def hnf(rows: list[list[int]], transform: bool = False):
    """Row Hermite normal form of an integer matrix.

    Pivots are positive, entries above each pivot are reduced into [0, pivot),
    zero rows sink to the bottom.  With transform=True also returns a
    unimodular U with U*M = H.
    """
    m = [list(r) for r in rows]
    k = len(m)
    n = len(m[0]) if k else 0
    u = [[int(i == j) for j in range(k)] for i in range(k)] if transform else None
    row = 0
    for col in range(n):
        # clear column below `row` by gcd row operations
        piv = None
        for r in range(row, k):
            if m[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        if transform:
            u[row], u[piv] = u[piv], u[row]
        for r in range(row + 1, k):
            while m[r][col] != 0:
                q = m[row][col] // m[r][col]
                m[row] = [x - q * y for x, y in zip(m[row], m[r])]
                if transform:
                    u[row] = [x - q * y for x, y in zip(u[row], u[r])]
                m[row], m[r] = m[r], m[row]
                if transform:
                    u[row], u[r] = u[r], u[row]
        if m[row][col] < 0:
            m[row] = [-x for x in m[row]]
            if transform:
                u[row] = [-x for x in u[row]]
        for r in range(row):
            q = m[r][col] // m[row][col]
            if q:
                m[r] = [x - q * y for x, y in zip(m[r], m[row])]
                if transform:
                    u[r] = [x - q * y for x, y in zip(u[r], u[row])]
        row += 1
        if row == k:
            break
    h = tuple(tuple(r) for r in m)
    if transform:
        return h, tuple(tuple(r) for r in u)
    return h


def int_left_kernel(rows: list[list[int]]) -> list[tuple[int, ...]]:
    """Basis of {z integer row : z*M = 0}."""
    h, u = hnf(rows, transform=True)
    return [u[i] for i in range(len(h)) if all(x == 0 for x in h[i])]


def solve_mod_lattice(a: list[list[int]], m: int) -> list[tuple[int, ...]]:
    """Basis of the full-rank lattice {z in Z^k : z*A = 0 (mod m)}."""
    k = len(a)
    c = len(a[0]) if k else 0
    # kernel of [[A],[m I_c]] projected onto the first k coordinates
    big = [list(a[i]) for i in range(k)] + [[m * int(i == j) for j in range(c)] for i in range(c)]
    ker = int_left_kernel(big)
    rows = [list(z[:k]) for z in ker]
    rows += [[m * int(i == j) for j in range(k)] for i in range(k)]
    h = hnf(rows)
    out = [h[i] for i in range(len(h)) if any(h[i])]
    assert len(out) == k, "congruence solution lattice must be full rank"
    return out


class Lattice:
    """Full-rank lattice in Q^n, stored as canonical HNF basis over a denominator."""

    __slots__ = ("den", "rows")

    def __init__(self, generators, _canonical=False):
        if _canonical:
            self.den, self.rows = generators
            return
        gens = [[Fraction(x) for x in row] for row in generators]
        n = len(gens[0])
        d = lcm(*[x.denominator for row in gens for x in row]) if gens else 1
        ints = [[int(x * d) for x in row] for row in gens]
        h = hnf(ints)
        rows = [r for r in h if any(r)]
        if len(rows) != n:
            raise ValueError("generators do not span a full-rank lattice")
        g = 0
        for r in rows:
            for x in r:
                g = gcd(g, x)
        g = gcd(g, d)
        self.den = d // g
        self.rows = tuple(tuple(x // g for x in r) for r in rows)

    @property
    def n(self) -> int:
        return len(self.rows)

    def basis(self) -> tuple:
        d = self.den
        return tuple(tuple(Fraction(x, d) for x in row) for row in self.rows)

    def covolume(self) -> Fraction:
        det = 1
        for i in range(self.n):
            det *= self.rows[i][i]
        return Fraction(abs(det), self.den ** self.n)

    def contains(self, vec) -> bool:
        # forward substitution against the upper-triangular basis
        d = self.den
        v = [Fraction(x) * d for x in vec]
        for i in range(self.n):
            q = v[i] / self.rows[i][i]
            if q.denominator != 1:
                return False
            if q:
                for j in range(i, self.n):
                    v[j] -= q * self.rows[i][j]
        return all(x == 0 for x in v)

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(self.contains(row) for row in other.basis())

    def index_in(self, other: "Lattice") -> Fraction:
        """[other : self] as a positive rational (integer when self <= other)."""
        return self.covolume() / other.covolume()

    def add(self, other: "Lattice") -> "Lattice":
        return Lattice(list(self.basis()) + list(other.basis()))

    def dual(self) -> "Lattice":
        return Lattice(transpose(mat_inv(self.basis())))

    def intersect(self, other: "Lattice") -> "Lattice":
        return self.dual().add(other.dual()).dual()

    def scale(self, r) -> "Lattice":
        r = Fraction(r)
        return Lattice([[x * r for x in row] for row in self.basis()])

    def transform(self, m) -> "Lattice":
        """Lattice spanned by basis_row * m for each basis row."""
        return Lattice([vec_mat(row, m) for row in self.basis()])

    def key(self):
        return (self.den, self.rows)

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Lattice(den={self.den}, rows={self.rows})"
