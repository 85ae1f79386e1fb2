from typing import Sequence, Union

from loguru import logger

from clustertrop.linalg import inertia, int_matrix
from clustertrop.trop import FanModel

NEGATIVE_DEFINITE = "NegativeDefinite"
SEMIDEFINITE_NOT_DEFINITE = "SemidefiniteNotDefinite"
NOT_SEMIDEFINITE = "NotSemidefinite"


class SurfaceException(Exception):
    pass


class TooFewComponents(SurfaceException):
    pass


class NonIntegralClass(SurfaceException):
    pass


def cycle_matrix(diagonal: Sequence[int]):
    """Symmetric matrix of a cycle of curves with the given self-intersections."""
    n = len(diagonal)
    return int_matrix(
        [
            [
                diagonal[i] if i == j else int((i - j) % n in (1, n - 1))
                for j in range(n)
            ]
            for i in range(n)
        ]
    )


class BoundaryIntersections:
    def __init__(self, self_int: Sequence[int]) -> None:
        self.n = len(self_int)
        if self.n < 3:
            raise TooFewComponents(
                f"A cycle of {self.n} boundary components has no simple intersection matrix"
            )
        self.H = cycle_matrix(self_int)

    def trace(self) -> int:
        return int(sum(self.H[i][i] for i in range(self.n)))

    def dump(self):
        return self.H.tolist()


def intersection_matrix(model: Union[FanModel, Sequence[int]]) -> BoundaryIntersections:
    if isinstance(model, FanModel):
        return BoundaryIntersections(model.self_int)
    return BoundaryIntersections(list(model))


def charge(model: FanModel) -> int:
    """12 - 3n - Tr(H), which equals the number of non-toric blowups."""
    if model.n < 2:
        raise TooFewComponents("The charge formula needs at least two components")
    value = 12 - 3 * model.n - sum(model.self_int)
    if value != model.charge():
        raise SurfaceException(
            f"Charge {value} disagrees with the {model.charge()} blowups of {model}"
        )
    return value


def h_signature(H) -> str:
    if isinstance(H, BoundaryIntersections):
        H = H.H
    positive, negative, zero = inertia(H.tolist() if hasattr(H, "tolist") else H)
    logger.debug(f"Inertia of H: +{positive} -{negative} 0^{zero}")
    if positive == 0 and zero == 0:
        return NEGATIVE_DEFINITE
    if positive == 0:
        return SEMIDEFINITE_NOT_DEFINITE
    return NOT_SEMIDEFINITE
