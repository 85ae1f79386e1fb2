from fractions import Fraction
from typing import Sequence, Tuple

from clustertrop.seeds.seed import FrozenMutation, Seed


class WallMap:
    """Two-piece integral linear map x -> x + sign * [-psi(x)]_+ * v.

    Linear on both half-planes bounded by the wall {psi = 0}, which is the
    line spanned by v, and the identity on the half-plane psi >= 0.
    """

    def __init__(self, psi: Tuple, v: Tuple[int, int], sign: int) -> None:
        self.psi = tuple(psi)
        self.v = tuple(v)
        self.sign = sign

    def pairing(self, x: Sequence) -> Fraction:
        return self.psi[0] * x[0] + self.psi[1] * x[1]

    def __call__(self, x: Sequence) -> Tuple:
        c = max(-self.pairing(x), 0)
        return (
            x[0] + self.sign * c * self.v[0],
            x[1] + self.sign * c * self.v[1],
        )

    def inverse(self) -> "WallMap":
        return WallMap(self.psi, self.v, -self.sign)

    def __repr__(self) -> str:
        return f"WallMap(psi={self.psi}, v={self.v}, sign={self.sign})"


def _wall_map(S: Seed, j: int, sign: int) -> WallMap:
    if j in S.frozen:
        raise FrozenMutation(f"Mutation at frozen index {j} is not allowed")
    coords = S.nbar2
    psi = (coords.pairings[0][j], coords.pairings[1][j])
    return WallMap(psi, coords.vectors[j], sign)


def chart_change(S: Seed, j: int) -> WallMap:
    """Takes S-chart coordinates to mutate(S, j)-chart coordinates."""
    return _wall_map(S, j, 1)


def tropical_x_mutation(S: Seed, j: int) -> WallMap:
    """Takes mutate(S, j)-chart coordinates back to S-chart coordinates.

    Points on the wall through v_j are fixed, as is the half-plane where the
    pairing with e_j is non-negative; on the other side the map is
    x -> x - |<e_j, x>| v_j.
    """
    return _wall_map(S, j, -1)
