from typing import List, Optional, Sequence

from loguru import logger

from clustertrop.linalg import ADEType, GramLattice, integral_solution, kernel_basis
from clustertrop.seeds import Seed, acyclic_representative, make_coprime, maximally_factor
from clustertrop.surfaces.boundary import NonIntegralClass, cycle_matrix
from clustertrop.trop import FanModel


class CurveClassSpace:
    """Classes D̄_1..D̄_n of the toric model followed by the exceptional
    curves E_1..E_K, with the intersection form on these generators.

    The form is degenerate: the linear relations of the toric divisors span
    its radical.
    """

    def __init__(self, model: FanModel) -> None:
        n = model.n
        self.model = model
        self.toric_gram = cycle_matrix(model.toric_self_int)
        # Exceptional curve j sits on ray owner[j]
        self.owner = [i for i in range(n) for _ in range(model.blowups[i])]
        size = n + len(self.owner)
        gram = [[0] * size for _ in range(size)]
        for i in range(n):
            for j in range(n):
                gram[i][j] = int(self.toric_gram[i][j])
        for e in range(len(self.owner)):
            gram[n + e][n + e] = -1
        self.gram = gram
        self.boundary_classes = []
        for i in range(n):
            c = [int(i == j) for j in range(n)]
            c += [-int(owner == i) for owner in self.owner]
            self.boundary_classes.append(c)

    @property
    def pic_rank(self) -> int:
        return len(self.gram) - 2

    def pair(self, x: Sequence, y: Sequence):
        return sum(
            x[i] * self.gram[i][j] * y[j]
            for i in range(len(x))
            for j in range(len(y))
            if x[i] and y[j]
        )

    def boundary_matrix(self) -> List[List[int]]:
        return [[self.pair(x, y) for y in self.boundary_classes] for x in self.boundary_classes]

    def dump(self) -> dict:
        return {
            "pic_rank": self.pic_rank,
            "gram": self.gram,
            "boundary_classes": self.boundary_classes,
        }


def picard_lattice(model: FanModel) -> CurveClassSpace:
    return CurveClassSpace(model)


def curve_class(model: FanModel, boundary_vector: Sequence) -> List[int]:
    """Integral toric class C with C · D̄_i = boundary_vector[i]."""
    H = cycle_matrix(model.toric_self_int).tolist()
    solution = integral_solution(H, boundary_vector)
    if solution is None:
        raise NonIntegralClass(
            f"No integral toric class meets the boundary as {list(boundary_vector)}"
        )
    return list(solution)


def frozen_balanced(S: Seed, basis: List[Sequence[int]]) -> List[tuple]:
    """Sublattice of span(basis) where frozen coefficients cancel on every ray."""
    coords = S.nbar2
    constraints = []
    rays = {}
    for j in sorted(S.frozen):
        u = coords.direction(j)
        if u == (0, 0):
            constraints.append([int(i == j) for i in range(S.n)])
        else:
            rays.setdefault(u, []).append(j)
    for u, indices in rays.items():
        constraints.append(
            [coords.multiplicities[i] if i in indices else 0 for i in range(S.n)]
        )
    if not constraints or not basis:
        return [tuple(v) for v in basis]
    restricted = [
        [sum(row[i] * v[i] for i in range(S.n)) for v in basis] for row in constraints
    ]
    return [
        tuple(sum(c[k] * basis[k][i] for k in range(len(basis))) for i in range(S.n))
        for c in kernel_basis(restricted)
    ]


def q_form(S: Seed, model: Optional[FanModel] = None) -> GramLattice:
    """Intersection form of the classes C_v - sum a_j E_j over the kernel of p2."""
    factored = maximally_factor(S)
    if model is None or factored is not S:
        model = FanModel.from_seed(factored)
    coords = factored.nbar2
    _, _, _, K2 = factored.p_maps()
    basis = frozen_balanced(factored, K2)
    index = {u: i for i, u in enumerate(model.rays)}

    boundary, classes = [], []
    for a in basis:
        b = [0] * model.n
        for j in range(factored.n):
            if coords.multiplicities[j] and a[j]:
                b[index[coords.direction(j)]] += a[j] * coords.multiplicities[j]
        boundary.append(b)
        classes.append(curve_class(model, b))

    gram = []
    for a, c in zip(basis, classes):
        row = []
        for y, a_prime in enumerate(basis):
            value = sum(c[i] * boundary[y][i] for i in range(model.n))
            value -= sum(a[j] * a_prime[j] for j in factored.non_frozen)
            row.append(int(value))
        gram.append(row)
    logger.debug(f"Q on a rank {len(basis)} lattice: {gram}")
    return GramLattice(gram)


def q_eff_decomposition(S: Seed) -> Optional[ADEType]:
    """A_{d'_1 - 1} + ... over the coprime form of an acyclic seed in the
    mutation class of S, or None when there is none."""
    representative = acyclic_representative(S)
    if representative is None:
        return None
    coprime = make_coprime(representative)
    coords = coprime.nbar2
    components = [
        ("A", coords.multiplicities[i] - 1)
        for i in coprime.non_frozen
        if coords.multiplicities[i] > 1
    ]
    return ADEType(components)
