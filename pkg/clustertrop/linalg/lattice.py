import re
from fractions import Fraction
from itertools import product
from math import floor, isqrt
from typing import List, Optional, Tuple

import networkx as nx
import numpy as np
from loguru import logger
from sympy import Matrix

from clustertrop.linalg.matrices import (
    LinalgException,
    NotNegativeDefinite,
    inertia,
    rank,
)

# Root count and |det| of each irreducible root lattice, keyed by (letter, n)
E_ROOTS = {6: 72, 7: 126, 8: 240}
E_DETS = {6: 3, 7: 2, 8: 1}


class GramLattice:
    """Integral lattice given by the Gram matrix of its basis."""

    def __init__(self, gram) -> None:
        gram = [[Fraction(x) for x in row] for row in gram]
        for i, row in enumerate(gram):
            if len(row) != len(gram):
                raise LinalgException(f"Gram matrix is not square: {gram}")
            for j, x in enumerate(row):
                if x.denominator != 1:
                    raise LinalgException(f"Non-integral Gram entry {x}")
                if gram[j][i] != x:
                    raise LinalgException(f"Gram matrix is not symmetric: {gram}")
        self.gram = tuple(tuple(int(x) for x in row) for row in gram)
        self.rank = len(self.gram)

    def pair(self, u, v) -> int:
        return sum(
            u[i] * self.gram[i][j] * v[j]
            for i in range(self.rank)
            for j in range(self.rank)
        )

    def det(self) -> int:
        if self.rank == 0:
            return 1
        return int(Matrix(self.gram).det())

    def dump(self) -> List[List[int]]:
        return [list(row) for row in self.gram]

    def __repr__(self) -> str:
        return f"GramLattice({self.dump()})"


def is_negative_definite(G: GramLattice) -> bool:
    if G.rank == 0:
        return True
    M = Matrix(G.gram)
    for k in range(1, G.rank + 1):
        minor = M[:k, :k].det()
        if (-1) ** k * minor <= 0:
            return False
    return True


def signature(G: GramLattice) -> Tuple[int, int, int]:
    return inertia(G.gram)


def _quadratic_decomposition(A) -> List[List[Fraction]]:
    """Writes the positive definite form x^T A x as
    sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2."""
    n = len(A)
    q = [[Fraction(x) for x in row] for row in A]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def enumerate_roots(G: GramLattice) -> List[Tuple[int, ...]]:
    """All v with v^T G v = -2, by exact Fincke-Pohst enumeration."""
    if not is_negative_definite(G):
        raise NotNegativeDefinite(f"Root enumeration needs a definite form: {G}")
    n = G.rank
    if n == 0:
        return []
    q = _quadratic_decomposition([[-x for x in row] for row in G.gram])
    roots = []
    x = [0] * n

    def search(i: int, remaining: Fraction) -> None:
        center = -sum(q[i][j] * x[j] for j in range(i + 1, n))
        radius = remaining / q[i][i]
        width = isqrt(floor(radius)) + 1
        for value in range(floor(center) - width, floor(center) + width + 2):
            offset = (value - center) ** 2
            if offset > radius:
                continue
            x[i] = value
            left = remaining - q[i][i] * offset
            if i == 0:
                if left == 0:
                    roots.append(tuple(x))
            else:
                search(i - 1, left)
        x[i] = 0

    search(n - 1, Fraction(2))
    logger.debug(f"Enumerated {len(roots)} roots in rank {n}")
    return roots


def root_count(G: GramLattice) -> int:
    return len(enumerate_roots(G))


def bounding_box_roots(G: GramLattice, max_box: int = 10 ** 6) -> List[Tuple[int, ...]]:
    """Brute-force roots inside |x_i|^2 <= 2 (A^-1)_ii for A = -G.

    Independent of the Fincke-Pohst search, usable on small ranks only.
    """
    if not is_negative_definite(G):
        raise NotNegativeDefinite(f"Root enumeration needs a definite form: {G}")
    if G.rank == 0:
        return []
    inverse = (-Matrix(G.gram)).inv()
    bounds = [isqrt(floor(2 * inverse[i, i])) for i in range(G.rank)]
    box = 1
    for b in bounds:
        box *= 2 * b + 1
    if box > max_box:
        raise LinalgException(f"Bounding box of {box} points is too large")
    return [
        x
        for x in product(*[range(-b, b + 1) for b in bounds])
        if G.pair(x, x) == -2
    ]


class ADEType:
    """Direct sum of irreducible root lattices, or NotADE when `components`
    is None."""

    def __init__(self, components: Optional[List[Tuple[str, int]]]) -> None:
        if components is None:
            self.components = None
        else:
            self.components = tuple(sorted(components))

    @classmethod
    def not_ade(cls) -> "ADEType":
        return cls(None)

    @classmethod
    def from_str(cls, label: str) -> "ADEType":
        if label == "NotADE":
            return cls.not_ade()
        if label == "A0":
            return cls([])
        components = []
        for part in label.split("+"):
            match = re.fullmatch(r"([ADE])(\d+)", part)
            if match is None:
                raise LinalgException(f"Unknown ADE label {label}")
            components.append((match.group(1), int(match.group(2))))
        return cls(components)

    @property
    def is_ade(self) -> bool:
        return self.components is not None

    def __eq__(self, other) -> bool:
        return isinstance(other, ADEType) and self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __str__(self) -> str:
        if self.components is None:
            return "NotADE"
        if not self.components:
            return "A0"
        return "+".join(f"{letter}{n}" for letter, n in self.components)

    def __repr__(self) -> str:
        return f"ADEType({str(self)})"

    def dump(self) -> str:
        return str(self)


def _identify_component(n: int, count: int) -> Optional[Tuple[str, int, int]]:
    """(letter, rank, |det|) of the irreducible root system with these data."""
    if count == n * (n + 1):
        return "A", n, n + 1
    if n >= 4 and count == 2 * n * (n - 1):
        return "D", n, 4
    if E_ROOTS.get(n) == count:
        return "E", n, E_DETS[n]
    return None


def ade_type(G: GramLattice) -> ADEType:
    if G.rank == 0:
        return ADEType([])
    if not is_negative_definite(G):
        return ADEType.not_ade()
    roots = enumerate_roots(G)
    if not roots:
        return ADEType.not_ade()

    R = np.array(roots, dtype=object)
    pairings = R.dot(np.array(G.gram, dtype=object)).dot(R.T)
    graph = nx.Graph()
    graph.add_nodes_from(range(len(roots)))
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if pairings[i][j] != 0:
                graph.add_edge(i, j)

    components = []
    det_product = 1
    total_rank = 0
    for nodes in nx.connected_components(graph):
        n = rank([roots[i] for i in nodes])
        identified = _identify_component(n, len(nodes))
        if identified is None:
            logger.debug(f"Unrecognized root system: rank {n}, {len(nodes)} roots")
            return ADEType.not_ade()
        letter, n, det = identified
        components.append((letter, n))
        det_product *= det
        total_rank += n

    # The root lattice must be all of G, not a finite index sublattice
    if total_rank != G.rank or det_product != abs(G.det()):
        return ADEType.not_ade()
    return ADEType(components)
