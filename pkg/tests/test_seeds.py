from fractions import Fraction

import numpy as np
import pytest

from clustertrop.linalg import sl2_transport
from clustertrop.seeds import (
    FanRay,
    FanSeedSpec,
    FrozenMutation,
    MalformedSeed,
    NonPrimitiveVector,
    RankError,
    Seed,
    SeedException,
    chart_change,
    fan_spec_of,
    langlands_dual,
    make_coprime,
    maximally_factor,
    random_fan_spec,
    seed_from_fan_spec,
    tropical_x_mutation,
)


def test_cubic_seed_forms(cubic_seed):
    assert cubic_seed.skew == ((0, 1, -1), (-1, 0, 1), (1, -1, 0))
    assert cubic_seed.d == (2, 2, 2)
    assert cubic_seed.frozen == frozenset()
    assert cubic_seed.epsilon == ((0, 2, -2), (-2, 0, 2), (2, -2, 0))
    assert cubic_seed.rank() == 2


def test_frozen_rays_become_frozen_indices(a2_seed):
    assert a2_seed.frozen == frozenset({2})
    assert a2_seed.non_frozen == [0, 1]
    assert a2_seed.d == (1, 1, 1)


@pytest.mark.parametrize(
    "seed_dict",
    [
        {"skew": [[0, 1], [1, 0]], "d": [1, 1]},
        {"skew": [[0, 1], [-1, 0]], "d": [1, 0]},
        {"skew": [[0, 1], [-1, 0]], "d": [1, 1], "frozen": [2]},
        {"skew": [[0, 1, 0], [-1, 0]], "d": [1, 1]},
        {"skew": [[0, "1/2"], ["-1/2", 0]], "d": [1, 1]},
        {"skew": [[0, "x"], [0, 0]], "d": [1, 1]},
        {"d": [1, 1]},
    ],
)
def test_malformed_seeds(seed_dict):
    with pytest.raises(MalformedSeed):
        Seed.from_dict(seed_dict)


def test_rational_skew_with_integral_epsilon():
    S = Seed.from_dict({"skew": [[0, "1/2"], ["-1/2", 0]], "d": [2, 2]})
    assert S.skew[0][1] == Fraction(1, 2)
    assert S.epsilon == ((0, 1), (-1, 0))
    assert S.dump()["skew"][0][1] == "1/2"


def test_frozen_mutation(a2_seed):
    with pytest.raises(FrozenMutation):
        a2_seed.mutate(2)
    with pytest.raises(SeedException):
        a2_seed.mutate(5)


def test_mutation_is_an_involution_on_forms(cubic_seed, a2_seed):
    for S in (cubic_seed, a2_seed):
        for j in S.non_frozen:
            twice = S.mutate(j).mutate(j)
            assert twice.skew == S.skew
            assert twice.same_as(S)


def test_mutation_preserves_ambient_form(cubic_seed):
    assert cubic_seed.mutate_word([0, 1, 2]).ambient_form == cubic_seed.ambient_form


def test_langlands_dual_is_an_involution():
    S = seed_from_fan_spec(FanSeedSpec.triangle(2, 3, 1))
    dual = langlands_dual(S)
    assert dual.d == (Fraction(1, 2), Fraction(1, 3), Fraction(1, 1))
    twice = langlands_dual(dual)
    assert twice.skew == S.skew
    assert twice.d == S.d


def test_fan_spec_validation():
    with pytest.raises(NonPrimitiveVector):
        FanSeedSpec([FanRay((2, 0), 1, False)])
    with pytest.raises(MalformedSeed):
        FanSeedSpec([FanRay((1, 0), 0, False)])
    with pytest.raises(MalformedSeed):
        FanSeedSpec([])
    with pytest.raises(MalformedSeed):
        FanSeedSpec.from_dict({"rays": [{"k": 1}]})


def test_fan_spec_from_dict_defaults():
    spec = FanSeedSpec.from_dict({"rays": [{"u": [1, 0], "k": 2}, {"u": [0, 1]}]})
    assert spec.rays == [FanRay((1, 0), 2, False), FanRay((0, 1), 0, True)]
    assert spec.charge() == 2


def test_charge_of_triangles(cubic_spec):
    assert cubic_spec.charge() == 6
    assert FanSeedSpec.triangle(1, 1, 0).charge() == 2


def test_augmentation_with_frozen_rays():
    # (1, 0) and (1, 2) span an index two sublattice
    spec = FanSeedSpec([FanRay((1, 0), 1, False), FanRay((1, 2), 1, False)])
    S = seed_from_fan_spec(spec)
    assert S.n == 3
    assert S.frozen == frozenset({2})
    assert S.skew[0][2] == 1


def test_rank_error():
    S = Seed(skew=[[0, 0], [0, 0]], d=[1, 1])
    with pytest.raises(RankError):
        S.nbar2


def test_nbar2_reads_back_fan_rays(cubic_seed):
    directions = [cubic_seed.nbar2.direction(i) for i in range(3)]
    assert directions == [(1, 0), (0, 1), (-1, -1)]


def test_make_coprime_merges_parallel_vectors():
    spec = FanSeedSpec(
        [
            FanRay((1, 0), 1, False),
            FanRay((1, 0), 2, False),
            FanRay((0, 1), 1, False),
            FanRay((-1, -1), 1, False),
        ]
    )
    S = seed_from_fan_spec(spec)
    merged = make_coprime(S)
    assert merged.n == 3
    assert sorted(merged.d) == [1, 1, 3]
    assert fan_spec_of(merged).charge() == spec.charge()


def test_maximally_factor_splits_multiplicities(cubic_seed):
    split = maximally_factor(cubic_seed)
    assert split.n == 6
    assert split.d == (1,) * 6
    assert make_coprime(cubic_seed) is cubic_seed


def test_tropical_mutation_inverts_chart_change(cubic_seed):
    forward = chart_change(cubic_seed, 0)
    back = tropical_x_mutation(cubic_seed, 0)
    for x in [(1, 0), (0, 1), (-3, 2), (2, -5)]:
        assert back(forward(x)) == x


def random_seeds(count):
    rng = np.random.default_rng(11)
    seeds = []
    while len(seeds) < count:
        try:
            seeds.append(seed_from_fan_spec(random_fan_spec(rng, max_rays=5, max_k=3)))
        except SeedException:
            continue
    return seeds


def test_cubic_mutation_vectors(cubic_seed):
    vectors = cubic_seed.mutate(2).nbar2.vectors
    frame = sl2_transport(vectors, [(2, 0), (-4, -2), (2, 2)])
    assert frame is not None
    assert [tuple(frame @ v) for v in vectors] == [(2, 0), (-4, -2), (2, 2)]


def test_langlands_dual_commutes_with_mutation():
    rng = np.random.default_rng(12)
    for S in random_seeds(30):
        j = int(rng.choice(S.non_frozen))
        assert langlands_dual(S.mutate(j)).same_as(langlands_dual(S).mutate(j))


def test_nbar2_ignores_the_order_of_the_basis():
    rng = np.random.default_rng(13)
    for S in random_seeds(30):
        p = [int(i) for i in rng.permutation(S.n)]
        permuted = Seed(
            skew=[[S.skew[p[i]][p[j]] for j in range(S.n)] for i in range(S.n)],
            d=[S.d[i] for i in p],
            frozen=[i for i in range(S.n) if p[i] in S.frozen],
        )
        assert permuted.nbar2.multiplicities == tuple(S.nbar2.multiplicities[i] for i in p)
        targets = [S.nbar2.vectors[i] for i in p]
        frame = sl2_transport(permuted.nbar2.vectors, targets)
        assert frame is not None
        assert [tuple(frame @ v) for v in permuted.nbar2.vectors] == targets
