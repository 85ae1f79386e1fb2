from fractions import Fraction
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Matrix
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form

Vector = Tuple[int, ...]


class LinalgException(Exception):
    pass


class NotUnimodular(LinalgException):
    pass


class NotNegativeDefinite(LinalgException):
    pass


def int_matrix(rows: Iterable[Iterable[int]]) -> np.ndarray:
    """Integer matrix stored with Python ints (numpy object dtype).

    Entries never overflow: arithmetic stays in arbitrary precision.
    """
    rows = [list(row) for row in rows]
    if not rows or not rows[0]:
        raise LinalgException("Integer matrices need positive dimensions")
    width = len(rows[0])
    for row in rows:
        if len(row) != width:
            raise LinalgException(f"Ragged matrix rows: {rows}")
        for x in row:
            if Fraction(x).denominator != 1:
                raise LinalgException(f"Non-integral entry {x}")
    return np.array([[int(x) for x in row] for row in rows], dtype=object)


def exgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Returns (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def primitive(v: Sequence) -> Vector:
    """Primitive integer vector on the ray spanned by a rational vector."""
    v = [Fraction(x) for x in v]
    denominator = 1
    for x in v:
        denominator = denominator * x.denominator // gcd(denominator, x.denominator)
    ints = [int(x * denominator) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise LinalgException("The zero vector has no primitive direction")
    return tuple(x // g for x in ints)


def content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def det2(u: Sequence, v: Sequence):
    return u[0] * v[1] - u[1] * v[0]


def column_hermite(A) -> Tuple[List[List[int]], List[List[int]], int]:
    """Column reduction A·T = H with T unimodular.

    H is in column echelon form: its first `rank` columns carry the pivots
    and the remaining columns are zero, so the trailing columns of T form a
    saturated basis of the integer kernel of A.
    """
    H = [[int(x) for x in row] for row in A]
    m = len(H)
    n = len(H[0]) if m else 0
    T = [[int(i == j) for j in range(n)] for i in range(n)]

    def combine(M, p, c, x, y, u, w):
        # (col_p, col_c) <- (x col_p + y col_c, u col_p + w col_c)
        for row in M:
            cp, cc = row[p], row[c]
            row[p], row[c] = x * cp + y * cc, u * cp + w * cc

    pivot = 0
    for i in range(m):
        if pivot >= n:
            break
        for c in range(pivot + 1, n):
            b = H[i][c]
            if b == 0:
                continue
            a = H[i][pivot]
            g, x, y = exgcd(a, b)
            combine(H, pivot, c, x, y, -b // g, a // g)
            combine(T, pivot, c, x, y, -b // g, a // g)
        if H[i][pivot] != 0:
            if H[i][pivot] < 0:
                for M in (H, T):
                    for row in M:
                        row[pivot] = -row[pivot]
            pivot += 1
    return H, T, pivot


def integral_solution(A, b: Sequence) -> Optional[Vector]:
    """Some x in Z^n with Ax = b, or None if there is none."""
    if any(Fraction(x).denominator != 1 for x in b):
        return None
    b = [int(x) for x in b]
    n = len(A[0]) if len(A) else 0
    H, T, rank = column_hermite(A)
    y = [0] * n
    pivot = 0
    for i, row in enumerate(H):
        partial = sum(row[q] * y[q] for q in range(pivot))
        if pivot < rank and row[pivot] != 0:
            quotient, remainder = divmod(b[i] - partial, row[pivot])
            if remainder:
                return None
            y[pivot] = quotient
            pivot += 1
        elif partial != b[i]:
            return None
    return tuple(sum(T[r][c] * y[c] for c in range(n)) for r in range(n))


def kernel_basis(A) -> List[Vector]:
    """Z-basis of the saturated kernel {v in Z^n : Av = 0}."""
    A = [[int(x) for x in row] for row in A]
    n = len(A[0])
    _, T, rank = column_hermite(A)
    return [tuple(T[r][c] for r in range(n)) for c in range(rank, n)]


def saturation_basis(vectors: Sequence[Sequence[int]]) -> List[Vector]:
    """Z-basis of the saturation of the lattice spanned by `vectors`."""
    vectors = [list(v) for v in vectors]
    n = len(vectors[0])
    if all(x == 0 for v in vectors for x in v):
        return []
    # Integral annihilator of the span, then the lattice it annihilates
    annihilator = kernel_basis(vectors)
    if not annihilator:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return kernel_basis(annihilator)


def solve_in_basis(basis: Sequence[Sequence[int]], v: Sequence) -> Tuple:
    """Exact coordinates of v in a linearly independent family `basis`."""
    M = Matrix([list(b) for b in basis]).T
    x = M.solve_least_squares(Matrix(list(v)))
    if M * x != Matrix(list(v)):
        raise LinalgException(f"{v} is not in the span of {basis}")
    return tuple(Fraction(int(e.p), int(e.q)) for e in x)


def hermite_basis(vectors: Sequence[Sequence[int]], dim: int) -> Matrix:
    """Hermite normal form of the lattice spanned by `vectors` (as columns)."""
    vectors = [list(v) for v in vectors if any(x != 0 for x in v)]
    if not vectors:
        return Matrix.zeros(dim, 0)
    k = len(vectors)
    dm = DomainMatrix(
        [[ZZ(int(vectors[j][i])) for j in range(k)] for i in range(dim)],
        (dim, k),
        ZZ,
    )
    return hermite_normal_form(dm).to_Matrix()


def same_lattice(first: Sequence, second: Sequence, dim: int) -> bool:
    return hermite_basis(first, dim) == hermite_basis(second, dim)


def rank(rows) -> int:
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    return Matrix(rows).rank()


def inertia(G) -> Tuple[int, int, int]:
    """(positive, negative, zero) counts of a symmetric rational matrix.

    Exact congruence diagonalization, no eigenvalues involved.
    """
    M = [[Fraction(x) for x in row] for row in G]
    n = len(M)
    positive, negative = 0, 0
    for k in range(n):
        pivot = next((i for i in range(k, n) if M[i][i] != 0), None)
        if pivot is None:
            pair = next(
                (
                    (i, j)
                    for i in range(k, n)
                    for j in range(k, n)
                    if i != j and M[i][j] != 0
                ),
                None,
            )
            if pair is None:
                break
            i, j = pair
            # Adding row/column j to i makes the diagonal entry 2*M[i][j]
            for c in range(n):
                M[i][c] += M[j][c]
            for r in range(n):
                M[r][i] += M[r][j]
            pivot = i
        M[k], M[pivot] = M[pivot], M[k]
        for row in M:
            row[k], row[pivot] = row[pivot], row[k]
        for r in range(k + 1, n):
            if M[r][k] == 0:
                continue
            f = M[r][k] / M[k][k]
            for c in range(n):
                M[r][c] -= f * M[k][c]
            for c in range(n):
                M[c][r] -= f * M[c][k]
        if M[k][k] > 0:
            positive += 1
        else:
            negative += 1
    return positive, negative, n - positive - negative


class Mat2:
    """2x2 integer matrix [[a, b], [c, d]] acting on column vectors."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: int, b: int, c: int, d: int) -> None:
        for x in (a, b, c, d):
            if Fraction(x).denominator != 1:
                raise LinalgException(f"Non-integral Mat2 entry {x}")
        object.__setattr__(self, "a", int(a))
        object.__setattr__(self, "b", int(b))
        object.__setattr__(self, "c", int(c))
        object.__setattr__(self, "d", int(d))

    def __setattr__(self, name, value):
        raise AttributeError("Mat2 is immutable")

    def __reduce__(self):
        return Mat2, (self.a, self.b, self.c, self.d)

    @classmethod
    def from_rows(cls, rows) -> "Mat2":
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @classmethod
    def from_columns(cls, first, second) -> "Mat2":
        return cls(first[0], second[0], first[1], second[1])

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(1, 0, 0, 1)

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    def rows(self) -> List[List[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def columns(self) -> Tuple[Vector, Vector]:
        return (self.a, self.c), (self.b, self.d)

    def inverse(self) -> "Mat2":
        if abs(self.det) != 1:
            raise NotUnimodular(f"{self} is not invertible over Z")
        s = self.det
        return Mat2(s * self.d, -s * self.b, -s * self.c, s * self.a)

    def __matmul__(self, other):
        if isinstance(other, Mat2):
            return Mat2(
                self.a * other.a + self.b * other.c,
                self.a * other.b + self.b * other.d,
                self.c * other.a + self.d * other.c,
                self.c * other.b + self.d * other.d,
            )
        x, y = other
        return (self.a * x + self.b * y, self.c * x + self.d * y)

    def __neg__(self) -> "Mat2":
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def __pow__(self, exponent: int) -> "Mat2":
        base = self if exponent >= 0 else self.inverse()
        result = Mat2.identity()
        for _ in range(abs(exponent)):
            result = result @ base
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat2):
            return NotImplemented
        return (self.a, self.b, self.c, self.d) == (
            other.a,
            other.b,
            other.c,
            other.d,
        )

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.c, self.d))

    def __repr__(self) -> str:
        return f"Mat2([[{self.a}, {self.b}], [{self.c}, {self.d}]])"

    def order(self, limit: int = 12) -> Optional[int]:
        power = self
        for k in range(1, limit + 1):
            if power == Mat2.identity():
                return k
            power = power @ self
        return None

    def dump(self) -> List[List[int]]:
        return self.rows()


def sl2_transport(
    sources: Sequence[Sequence], targets: Sequence[Sequence]
) -> Optional[Mat2]:
    """The unique A in SL2(Z) with A s_i = t_i for all i, if any."""
    pair = next(
        (
            (i, j)
            for i in range(len(sources))
            for j in range(i + 1, len(sources))
            if det2(sources[i], sources[j]) != 0
        ),
        None,
    )
    if pair is None:
        return None
    i, j = pair
    s = det2(sources[i], sources[j])
    si, sj = sources[i], sources[j]
    ti, tj = targets[i], targets[j]
    # A = [ti tj] [si sj]^-1
    entries = [
        Fraction(ti[0] * sj[1] - tj[0] * si[1], s),
        Fraction(-ti[0] * sj[0] + tj[0] * si[0], s),
        Fraction(ti[1] * sj[1] - tj[1] * si[1], s),
        Fraction(-ti[1] * sj[0] + tj[1] * si[0], s),
    ]
    if any(e.denominator != 1 for e in entries):
        return None
    A = Mat2(*entries)
    if A.det != 1:
        return None
    for source, target in zip(sources, targets):
        if tuple(A @ source) != tuple(target):
            return None
    return A
