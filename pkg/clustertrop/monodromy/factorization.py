from functools import cmp_to_key, reduce
from typing import List, Optional, Sequence, Tuple

from loguru import logger

from clustertrop.linalg import Mat2, primitive
from clustertrop.seeds import Seed, tropical_x_mutation
from clustertrop.trop import FanModel, ccw_compare, normalize_fan


class MonodromyException(Exception):
    pass


class OrderingViolation(MonodromyException):
    pass


class MonodromyMismatch(MonodromyException):
    pass


Factor = Tuple[Tuple[int, int], int]


def unipotent_factor(v: Sequence[int], k: int) -> Mat2:
    """x -> x + k (v ∧ x) v."""
    a, b = v
    if (a, b) == (0, 0):
        raise MonodromyException("Unipotent factors need a nonzero vector")
    return Mat2(1 - k * a * b, k * a * a, -k * b * b, 1 + k * a * b)


def _product(matrices: List[Mat2]) -> Mat2:
    return reduce(lambda x, y: x @ y, matrices, Mat2.identity())


def monodromy_from_factorization(
    factors: Sequence[Factor], basis: Optional[Tuple[Sequence, Sequence]] = None
) -> Mat2:
    """Inverse monodromy from counterclockwise (v_i, k_i) factors.

    The product runs left to right from the first factor past the starting
    direction and ends with the factors on it, then is written in the chart
    basis (r1, r2), by default the first two rays of the normalized fan.
    """
    if not factors:
        return Mat2.identity()
    directions = [primitive(v) for v, _ in factors]
    first = directions[0]
    for u, w in zip(directions, directions[1:]):
        if ccw_compare(first, u, w) > 0:
            raise OrderingViolation(f"Factor directions {directions} are not counterclockwise")
    later = [unipotent_factor(v, k) for (v, k), u in zip(factors, directions) if u != first]
    starting = [unipotent_factor(v, k) for (v, k), u in zip(factors, directions) if u == first]
    F = _product(later + starting)
    if basis is None:
        model = normalize_fan([(u, k) for u, (_, k) in zip(directions, factors)])
        basis = model.rays[0], model.rays[1]
    P = Mat2.from_columns(*basis)
    return P.inverse() @ F @ P


def _processing_order(S: Seed, first) -> List[int]:
    """Non-frozen indices clockwise from `first`, those on it first."""
    coords = S.nbar2
    on_first = [i for i in S.non_frozen if coords.direction(i) == first]
    rest = [i for i in S.non_frozen if coords.direction(i) != first]
    rest.sort(
        key=cmp_to_key(
            lambda i, j: -ccw_compare(first, coords.direction(i), coords.direction(j))
        )
    )
    return on_first + rest


def monodromy_via_mutations(S: Seed, model: Optional[FanModel] = None) -> Mat2:
    """Inverse monodromy as a product of double mutations, three ways.

    (a) transvections of the fixed seed, (b) the composite of the tropical
    mutation maps along the double mutations, (c) transvections of the
    successively double mutated seeds. All three must agree.
    """
    if model is None:
        model = FanModel.from_seed(S)
    first = model.rays[0]
    order = _processing_order(S, first)
    coords = S.nbar2

    fixed = _product(
        [unipotent_factor(coords.direction(i), coords.multiplicities[i]) for i in reversed(order)]
    )

    composite = [(1, 0), (0, 1)]
    sequential = []
    seed = S
    maps = []
    for j in order:
        once = seed.mutate(j)
        twice = once.mutate(j)
        maps.append((tropical_x_mutation(seed, j), tropical_x_mutation(once, j)))
        sequential.append(
            unipotent_factor(seed.nbar2.direction(j), seed.nbar2.multiplicities[j])
        )
        seed = twice
    for first_map, second_map in reversed(maps):
        composite = [first_map(second_map(x)) for x in composite]
    composite = Mat2.from_columns(*composite)
    sequential = _product(sequential)

    if not fixed == composite == sequential:
        raise MonodromyMismatch(
            f"Double mutation products disagree: {fixed}, {composite}, {sequential}"
        )
    P = Mat2.from_columns(model.rays[0], model.rays[1])
    m_inv = P.inverse() @ fixed @ P
    logger.debug(f"Monodromy via mutations along {order}: {m_inv}")
    return m_inv
