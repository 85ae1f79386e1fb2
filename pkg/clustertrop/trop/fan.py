from functools import cmp_to_key
from typing import List, Sequence, Tuple

import numpy as np
from loguru import logger

from clustertrop.linalg import content, det2, exgcd, primitive
from clustertrop.seeds import FanRay, FanSeedSpec, RankError, Seed


class TropException(Exception):
    pass


Ray = Tuple[int, int]


def _ccw_bucket(first: Ray, u: Ray) -> int:
    cross = det2(first, u)
    if cross == 0:
        return 0 if first[0] * u[0] + first[1] * u[1] > 0 else 2
    return 1 if cross > 0 else 3


def ccw_compare(first: Ray, u: Ray, w: Ray) -> int:
    """Negative when u comes before w going counterclockwise from `first`."""
    bu, bw = _ccw_bucket(first, u), _ccw_bucket(first, w)
    if bu != bw:
        return bu - bw
    cross = det2(u, w)
    return (cross < 0) - (cross > 0)


def ccw_sort(rays: Sequence[Ray]) -> List[Ray]:
    """Sorts distinct directions counterclockwise, starting from rays[0]."""
    first = rays[0]
    return sorted(rays, key=cmp_to_key(lambda u, w: ccw_compare(first, u, w)))


def _perp(u: Ray) -> Ray:
    return (-u[1], u[0])


def _complete(rays: List[Ray]) -> List[Ray]:
    """Inserts rays until every consecutive angle is below pi."""
    if len(rays) == 1:
        a = rays[0]
        return [a, _perp(a), (-a[0], -a[1]), (a[1], -a[0])]
    i = 0
    while i < len(rays):
        a, b = rays[i], rays[(i + 1) % len(rays)]
        cross = det2(a, b)
        if cross < 0:
            rays.insert(i + 1, primitive((-a[0] - b[0], -a[1] - b[1])))
            continue
        if cross == 0:
            rays.insert(i + 1, _perp(a))
            continue
        i += 1
    return rays


def _smooth_insert(a: Ray, b: Ray) -> Ray:
    """Ray c between a and b with det(a, c) = 1 and 0 < det(c, b) < det(a, b)."""
    m = det2(a, b)
    _, x, y = exgcd(a[0], a[1])
    a_prime = (-y, x)
    rest = (b[0] - m * a_prime[0], b[1] - m * a_prime[1])
    alpha = rest[0] // a[0] if a[0] != 0 else rest[1] // a[1]
    f = alpha // m + 1
    return (f * a[0] + a_prime[0], f * a[1] + a_prime[1])


class FanModel:
    """Smooth complete fan with non-toric blowups on its rays.

    `rays` are counterclockwise with det(v_i, v_{i+1}) = 1, `blowups` the k_i
    and `self_int` the a_i = a_i^toric - k_i of the boundary components.
    """

    def __init__(self, rays: Sequence[Ray], blowups: Sequence[int]) -> None:
        self.rays = tuple(tuple(int(x) for x in u) for u in rays)
        self.blowups = tuple(int(k) for k in blowups)
        n = len(self.rays)
        for i in range(n):
            if det2(self.rays[i], self.rays[(i + 1) % n]) != 1:
                raise TropException(
                    f"Rays {self.rays[i]} and {self.rays[(i + 1) % n]} do not span a smooth cone"
                )
        self.toric_self_int = tuple(
            -det2(self.rays[i - 1], self.rays[(i + 1) % n]) for i in range(n)
        )
        self.self_int = tuple(t - k for t, k in zip(self.toric_self_int, self.blowups))

    @property
    def n(self) -> int:
        return len(self.rays)

    @classmethod
    def from_seed(cls, S: Seed, min_rays: int = 4) -> "FanModel":
        coords = S.nbar2
        rays = []
        for i in range(S.n):
            if coords.multiplicities[i] == 0:
                continue
            k = 0 if i in S.frozen else coords.multiplicities[i]
            rays.append((coords.direction(i), k))
        if not rays:
            raise RankError("The seed has no rank two vectors")
        return normalize_fan(rays, min_rays=min_rays)

    def refine(self, rng: np.random.Generator, count: int = 1) -> "FanModel":
        """Random toric blowups at the nodes of the boundary cycle."""
        rays = list(self.rays)
        blowups = list(self.blowups)
        for _ in range(count):
            i = int(rng.integers(0, len(rays)))
            j = (i + 1) % len(rays)
            rays.insert(i + 1, (rays[i][0] + rays[j][0], rays[i][1] + rays[j][1]))
            blowups.insert(i + 1, 0)
        return FanModel(rays, blowups)

    def charge(self) -> int:
        return sum(self.blowups)

    def is_toric(self) -> bool:
        return all(k == 0 for k in self.blowups)

    def dump(self) -> dict:
        return {
            "rays": [list(u) for u in self.rays],
            "blowups": list(self.blowups),
            "self_int": list(self.self_int),
        }

    def __repr__(self) -> str:
        return f"FanModel({self.dump()})"


def normalize_fan(spec, min_rays: int = 4) -> FanModel:
    """Smooth complete fan model of a fan spec or a list of (u, k) pairs.

    Duplicate directions are merged with their blowups summed, the fan is
    completed and smoothed with toric rays, and padded up to `min_rays`.
    The first input ray stays first.
    """
    if isinstance(spec, FanSeedSpec):
        pairs = [(r.u, 0 if r.frozen else r.k) for r in spec.rays]
    else:
        pairs = [
            (r.u, 0 if r.frozen else r.k) if isinstance(r, FanRay) else (r[0], r[1])
            for r in spec
        ]
    blowups = {}
    for u, k in pairs:
        u = tuple(int(x) for x in u)
        if u == (0, 0):
            raise TropException("Fan rays must be nonzero")
        if content(u) != 1:
            u = primitive(u)
        blowups[u] = blowups.get(u, 0) + int(k)

    rays = _complete(ccw_sort(list(blowups)))
    i = 0
    while i < len(rays):
        a, b = rays[i], rays[(i + 1) % len(rays)]
        if det2(a, b) > 1:
            rays.insert(i + 1, _smooth_insert(a, b))
            continue
        i += 1
    while len(rays) < min_rays:
        a, b = rays[-1], rays[0]
        rays.append((a[0] + b[0], a[1] + b[1]))

    model = FanModel(rays, [blowups.get(u, 0) for u in rays])
    logger.debug(f"Normalized fan to {model.n} rays, self intersections {model.self_int}")
    return model
