from collections import OrderedDict

from loguru import logger

from clustertrop.seeds.fan_spec import FanRay, FanSeedSpec, seed_from_fan_spec
from clustertrop.seeds.seed import Seed


def fan_spec_of(S: Seed, merge=False, split=False) -> FanSeedSpec:
    """The fan read off the rank two vectors of a seed.

    Non-frozen vectors become rays with k = d'_i, frozen ones become frozen
    rays. With `merge`, non-frozen vectors on a common ray are combined; with
    `split`, each non-frozen vector is broken into d'_i rays with k = 1.
    """
    coords = S.nbar2
    non_frozen = OrderedDict()
    rays = []
    for i in range(S.n):
        u = coords.direction(i)
        k = coords.multiplicities[i]
        if i in S.frozen:
            if k > 0:
                rays.append(FanRay(u, 0, True))
        elif merge and u in non_frozen:
            position = non_frozen[u]
            rays[position] = FanRay(u, rays[position].k + k, False)
        elif split:
            rays.extend(FanRay(u, 1, False) for _ in range(k))
        else:
            non_frozen[u] = len(rays)
            rays.append(FanRay(u, k, False))
    return FanSeedSpec(rays)


def make_coprime(S: Seed) -> Seed:
    coords = S.nbar2
    directions = [coords.direction(i) for i in S.non_frozen]
    if len(set(directions)) == len(directions):
        return S
    logger.debug(f"Merging non-frozen vectors along {directions}")
    return seed_from_fan_spec(fan_spec_of(S, merge=True))


def maximally_factor(S: Seed) -> Seed:
    coords = S.nbar2
    if all(coords.multiplicities[i] == 1 for i in S.non_frozen):
        return S
    return seed_from_fan_spec(fan_spec_of(S, split=True))
