from collections import namedtuple
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple

from loguru import logger
from sympy import Matrix, Rational

from clustertrop.linalg import (
    column_hermite,
    content,
    det2,
    kernel_basis,
    same_lattice,
    saturation_basis,
)
from clustertrop.utils.utils import rational_to_str


class SeedException(Exception):
    pass


class FrozenMutation(SeedException):
    pass


class RankError(SeedException):
    pass


class NonPrimitiveVector(SeedException):
    pass


class MalformedSeed(SeedException):
    pass


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


class NBar2(namedtuple("NBar2", ["vectors", "multiplicities", "pairings"])):
    """Rank two picture of a seed.

    `vectors[i]` is v_i in an oriented basis of the saturated image of p2,
    `multiplicities[i]` its content d'_i, and `pairings[a][j]` the pairing
    of the a-th basis vector with e_j.
    """

    __slots__ = ()

    def psi(self, j: int, y: Sequence) -> Fraction:
        return y[0] * self.pairings[0][j] + y[1] * self.pairings[1][j]

    def direction(self, i: int) -> Tuple[int, int]:
        d = self.multiplicities[i]
        if d == 0:
            return (0, 0)
        return (self.vectors[i][0] // d, self.vectors[i][1] // d)


class Seed:
    def __init__(
        self,
        skew: Sequence[Sequence],
        d: Sequence,
        frozen: Iterable[int] = (),
        basis_coords: Optional[Sequence[Sequence[int]]] = None,
    ) -> None:
        try:
            skew = [[Fraction(x) for x in row] for row in skew]
            d = [Fraction(x) for x in d]
        except (TypeError, ValueError, ZeroDivisionError) as e:
            raise MalformedSeed(f"Non-rational seed entry: {e}")
        n = len(d)
        if len(skew) != n or any(len(row) != n for row in skew):
            raise MalformedSeed(f"Skew form must be {n}x{n}, got {skew}")
        for i in range(n):
            if d[i] <= 0:
                raise MalformedSeed(f"Multiplier d_{i} = {d[i]} is not positive")
            for j in range(n):
                if skew[i][j] != -skew[j][i]:
                    raise MalformedSeed(f"Skew form is not antisymmetric at ({i}, {j})")
                if (d[j] * skew[i][j]).denominator != 1:
                    raise MalformedSeed(
                        f"epsilon_{i}{j} = {d[j] * skew[i][j]} is not integral"
                    )
        frozen = frozenset(int(i) for i in frozen)
        if any(i < 0 or i >= n for i in frozen):
            raise MalformedSeed(f"Frozen indices {sorted(frozen)} out of range")
        if basis_coords is None:
            basis_coords = [[int(i == j) for j in range(n)] for i in range(n)]
        basis_coords = [[int(x) for x in row] for row in basis_coords]
        if n and abs(Matrix(basis_coords).det()) != 1:
            raise MalformedSeed("Basis coordinates are not unimodular")

        self.n = n
        self.skew = tuple(tuple(row) for row in skew)
        self.d = tuple(d)
        self.frozen = frozen
        self.basis_coords = tuple(tuple(row) for row in basis_coords)

    @classmethod
    def from_dict(cls, seed_dict: dict) -> "Seed":
        try:
            return cls(
                skew=seed_dict["skew"],
                d=seed_dict["d"],
                frozen=seed_dict.get("frozen", []),
                basis_coords=seed_dict.get("basis_coords"),
            )
        except KeyError as e:
            raise MalformedSeed(f"Missing seed field {e}")

    def dump(self, with_basis=False) -> dict:
        seed_dict = {
            "skew": [[rational_to_str(x) for x in row] for row in self.skew],
            "d": [rational_to_str(x) for x in self.d],
            "frozen": sorted(self.frozen),
        }
        if with_basis:
            seed_dict["basis_coords"] = [list(row) for row in self.basis_coords]
        return seed_dict

    def __repr__(self) -> str:
        return f"Seed({self.dump()})"

    @property
    def non_frozen(self) -> List[int]:
        return [i for i in range(self.n) if i not in self.frozen]

    @cached_property
    def epsilon(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(
            tuple(int(self.d[j] * self.skew[i][j]) for j in range(self.n))
            for i in range(self.n)
        )

    def same_as(self, other: "Seed") -> bool:
        """Equality of the forms up to a simultaneous positive rescaling."""
        if self.n != other.n or self.frozen != other.frozen:
            return False
        if self.n == 0:
            return True
        if self.epsilon != other.epsilon:
            return False
        c = other.d[0] / self.d[0]
        return all(other.d[i] == c * self.d[i] for i in range(self.n))

    def key(self) -> Tuple:
        return self.basis_coords

    def mutate(self, j: int) -> "Seed":
        if j in self.frozen:
            raise FrozenMutation(f"Mutation at frozen index {j} is not allowed")
        if not 0 <= j < self.n:
            raise SeedException(f"Mutation index {j} out of range")
        n = self.n
        eps = self.epsilon
        T = [[int(r == c) for c in range(n)] for r in range(n)]
        T[j][j] = -1
        for i in range(n):
            if i != j and eps[i][j] > 0:
                T[i][j] = eps[i][j]
        Tm = Matrix(T)
        skew = Tm * _rational_matrix(self.skew) * Tm.T
        basis = Tm * Matrix(self.basis_coords)
        return Seed(
            skew=[[Fraction(int(x.p), int(x.q)) for x in skew.row(r)] for r in range(n)],
            d=self.d,
            frozen=self.frozen,
            basis_coords=[[int(x) for x in basis.row(r)] for r in range(n)],
        )

    def mutate_word(self, word: Iterable[int]) -> "Seed":
        seed = self
        for j in word:
            seed = seed.mutate(j)
        return seed

    def p_maps(self):
        """(P1, P2, K1, K2): matrices of v -> (v, .) and v -> (., v) in the
        current basis and integral bases of their kernels."""
        eps = [list(row) for row in self.epsilon]
        p1 = [[eps[j][i] for j in range(self.n)] for i in range(self.n)]
        p2 = eps
        return p1, p2, kernel_basis(p1), kernel_basis(p2)

    def to_ambient(self, vectors: Iterable[Sequence[int]]) -> List[Tuple[int, ...]]:
        """Basis coordinates to coordinates in the fixed ambient lattice."""
        return [
            tuple(
                sum(x[i] * self.basis_coords[i][c] for i in range(self.n))
                for c in range(self.n)
            )
            for x in vectors
        ]

    @cached_property
    def ambient_form(self) -> Matrix:
        """The skew form on the ambient lattice, invariant under mutation."""
        inverse = Matrix(self.basis_coords).inv()
        return inverse * _rational_matrix(self.skew) * inverse.T

    def rank(self) -> int:
        if self.n == 0:
            return 0
        return Matrix(self.skew).rank()

    @cached_property
    def nbar2(self) -> NBar2:
        return _compute_nbar2(self)


def _rational_matrix(rows) -> Matrix:
    return Matrix([[Rational(x.numerator, x.denominator) for x in row] for row in rows])


def _integral(M: Matrix) -> Tuple[List[List[int]], int]:
    scale = 1
    for x in M:
        scale = _lcm(scale, int(Rational(x).q))
    return [[int(x * scale) for x in M.row(r)] for r in range(M.rows)], scale


def _canonical_frame(basis: List[Tuple[int, ...]]) -> List[List[int]]:
    """Echelon basis of a rank two lattice, read from the top coordinate down."""
    n = len(basis[0])
    H, _, _ = column_hermite([[basis[c][r] for c in range(2)] for r in range(n)])
    pivot = next(r for r in range(n) if H[r][1] != 0)
    q = H[pivot][0] // H[pivot][1]
    first = [H[r][0] - q * H[r][1] for r in range(n)]
    second = [H[r][1] for r in range(n)]
    return [first, second]


def _coordinates(frame: List[List[int]], v: Sequence) -> Tuple[Fraction, Fraction]:
    n = len(v)
    rows = next(
        (r, s)
        for r in range(n)
        for s in range(r + 1, n)
        if frame[0][r] * frame[1][s] - frame[0][s] * frame[1][r] != 0
    )
    r, s = rows
    minor = frame[0][r] * frame[1][s] - frame[0][s] * frame[1][r]
    x = Fraction(v[r] * frame[1][s] - v[s] * frame[1][r], minor)
    y = Fraction(frame[0][r] * v[s] - frame[0][s] * v[r], minor)
    for c in range(n):
        if x * frame[0][c] + y * frame[1][c] != v[c]:
            raise NonPrimitiveVector(f"{v} is outside the image lattice")
    return x, y


def _compute_nbar2(seed: Seed) -> NBar2:
    if seed.rank() != 2:
        raise RankError(f"The skew form has rank {seed.rank()}, expected 2")
    n = seed.n
    omega, _ = _integral(seed.ambient_form)
    columns = [tuple(omega[r][c] for r in range(n)) for c in range(n)]
    first, second = _canonical_frame(saturation_basis(columns))
    # Quarter turn; fan seeds read back their own ray vectors
    frame = [[-x for x in second], first]

    form = seed.ambient_form * Matrix(seed.basis_coords).T
    vectors = []
    for i in range(n):
        v_amb = [seed.d[i] * Fraction(int(x.p), int(x.q)) for x in form.col(i)]
        vectors.append(_coordinates(frame, v_amb))

    pair = next(
        (
            (i, j)
            for i in range(n)
            for j in range(i + 1, n)
            if seed.skew[i][j] != 0 and det2(vectors[i], vectors[j]) != 0
        ),
        None,
    )
    if pair is not None:
        i, j = pair
        if _sign(det2(vectors[i], vectors[j])) != _sign(seed.skew[i][j]):
            vectors = [(x, -y) for x, y in vectors]
            frame[1] = [-x for x in frame[1]]

    if any(x.denominator != 1 or y.denominator != 1 for x, y in vectors):
        raise NonPrimitiveVector(f"Non-integral N2 coordinates {vectors}")
    vectors = [(int(x), int(y)) for x, y in vectors]
    multiplicities = [content(v) for v in vectors]
    kernel = kernel_basis([list(row) for row in zip(*omega)])
    for i in seed.non_frozen:
        if multiplicities[i] == 0:
            raise NonPrimitiveVector(f"Non-frozen e_{i} pairs trivially with the seed")
        e_i = seed.basis_coords[i]
        extended = kernel + [e_i]
        if not same_lattice(extended, saturation_basis(extended), n):
            raise NonPrimitiveVector(f"e_{i} is not primitive modulo the kernel of p1")

    pairings = [
        [sum(frame[a][c] * seed.basis_coords[j][c] for c in range(n)) for j in range(n)]
        for a in range(2)
    ]
    logger.debug(f"N2 vectors {vectors} with multiplicities {multiplicities}")
    return NBar2(tuple(vectors), tuple(multiplicities), tuple(tuple(p) for p in pairings))


def mutate(S: Seed, j: int) -> Seed:
    return S.mutate(j)


def langlands_dual(S: Seed) -> Seed:
    n = S.n
    return Seed(
        skew=[[S.d[i] * S.d[j] * S.skew[i][j] for j in range(n)] for i in range(n)],
        d=[1 / x for x in S.d],
        frozen=S.frozen,
        basis_coords=S.basis_coords,
    )


def p_maps(S: Seed):
    return S.p_maps()


def nbar2_coords(S: Seed) -> List[Tuple[Tuple[int, int], int]]:
    coords = S.nbar2
    return list(zip(coords.vectors, coords.multiplicities))
