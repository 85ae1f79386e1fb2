import json

import numpy as np
import pytest

from clustertrop.classifier import (
    NOT_COMPUTED,
    OPEN,
    PSL2Z,
    SL2Z,
    TRIVIAL,
    VERIFIED,
    Z,
    Z2,
    Z3,
    Z4,
    Z5,
    Z_SEMIDIRECT_Z2,
    GroupDescriptor,
    InconsistentCriteria,
    as_seed,
    audit_corpus,
    classify,
    explicit_generators,
    explicit_words,
    group_label,
    modular_group,
    monodromy_criterion,
    nu_word,
    verify_gamma_element,
)
from clustertrop.config import Config
from clustertrop.linalg import ADEType, Mat2
from clustertrop.monodromy import KodairaVerdict
from clustertrop.seeds import (
    FanSeedSpec,
    RankError,
    Seed,
    SeedException,
    random_fan_spec,
    seed_from_fan_spec,
)
from clustertrop.trop import ALL_WRAP, EMPTY, FULL_PLANE, NO_WRAP, DevelopingMap, FanModel
from clustertrop.utils.utils import canonical_json


@pytest.fixture
def small_config():
    return Config(
        {
            "omegaconf": {
                "classify": {"line_samples": 6},
                "gamma": {"max_states": 60, "max_word_length": 6},
            }
        }
    )


@pytest.mark.parametrize(
    "triangle, primary_class",
    [
        ((1, 0, 0), "FiniteType(I1)"),
        ((1, 1, 0), "FiniteType(II)"),
        ((1, 1, 1), "FiniteType(III)"),
        ((3, 1, 0), "FiniteType(IV)"),
        ((2, 2, 2), "PositiveNonAcyclic(I0*)"),
        ((2, 3, 3), "PositiveNonAcyclic(IV*)"),
        ((4, 1, 0), "AcyclicInfinite(SomeWrapParabolic)"),
        ((5, 1, 0), "AcyclicInfinite(SomeWrapHyperbolic)"),
        ((3, 3, 3), "SemidefiniteNotDefinite"),
        ((5, 5, 5), "NegativeDefinite"),
    ],
)
def test_primary_classes(triangle, primary_class, small_config):
    report = classify(FanSeedSpec.triangle(*triangle), small_config, with_group=False)
    assert report.primary_class == primary_class


def test_cubic_report(cubic_spec, small_config):
    report = classify(cubic_spec, small_config, with_group=False)
    assert report.monodromy == -Mat2.identity()
    assert report.charge == 6
    assert report.q_type == ADEType.from_str("D4")
    assert report.q_eff is None
    assert report.quiver_flags == {"acyclic": False, "finite_type": False}
    assert report.wrap == ALL_WRAP
    assert report.region.kind == EMPTY
    assert report.lines["escaped"] == report.lines["samples"] == 6
    assert min(report.lines["wrap_counts"]) >= 1


def test_three_cycle_is_finite_type(three_cycle_seed, small_config):
    report = classify(three_cycle_seed, small_config, with_group=False)
    assert report.primary_class == "FiniteType(III)"
    assert report.quiver_flags == {"acyclic": True, "finite_type": True}
    assert report.wrap == NO_WRAP
    assert report.region.kind == FULL_PLANE


def test_negative_definite_lines_never_escape(small_config):
    report = classify(FanSeedSpec.triangle(5, 5, 5), small_config)
    assert report.lines["escaped"] == 0
    assert report.modular_group.label == NOT_COMPUTED


def test_mutation_keeps_invariants(cubic_seed, small_config):
    report = classify(cubic_seed, small_config, with_group=False)
    mutated = classify(cubic_seed.mutate_word([0, 2]), small_config, with_group=False)
    assert report.invariants() == mutated.invariants()


def test_report_dump_is_json(a2_seed, small_config):
    report = classify(a2_seed, small_config, with_group=False)
    log = json.loads(canonical_json(report))
    assert log["class"] == "FiniteType(II)"
    assert log["monodromy"] == [[1, 1], [-1, 0]]
    assert log["charge"] == 2
    assert log["q_type"] == "A0"
    assert log["q_eff"] == "A0"


def test_as_seed_accepts_every_input(cubic_spec, cubic_seed):
    assert as_seed(cubic_seed) is cubic_seed
    assert as_seed(cubic_spec).same_as(cubic_seed)
    assert as_seed(cubic_spec.dump()).same_as(cubic_seed)
    assert as_seed(cubic_seed.dump()).same_as(cubic_seed)


def test_rank_zero_seeds_are_rejected():
    with pytest.raises(RankError):
        classify(Seed(skew=[[0, 0], [0, 0]], d=[1, 1]))


@pytest.mark.parametrize(
    "label, group",
    [
        ("I0", SL2Z),
        ("I1", Z_SEMIDIRECT_Z2),
        ("I2", Z_SEMIDIRECT_Z2),
        ("I0*", PSL2Z),
        ("I1*", Z),
        ("I3*", Z),
        ("II", Z5),
        ("III", Z3),
        ("IV", Z4),
        ("IV*", Z2),
        ("III*", TRIVIAL),
        ("II*", TRIVIAL),
        ("NotKodaira(SomeWrapParabolic)", Z),
        ("NotKodaira(Hyperbolic)", NOT_COMPUTED),
        ("NotKodaira(SemidefiniteParabolic)", NOT_COMPUTED),
    ],
)
def test_group_label(label, group):
    assert group_label(KodairaVerdict.from_str(label)) == group


def test_cubic_transvection(cubic_seed, cubic_model):
    check = verify_gamma_element(cubic_seed, [2], {0: 0, 1: 2, 2: 1})
    assert check.ok
    element = check.element
    assert element.dev_matrix == Mat2(1, 1, 0, 1)
    assert element.apply(cubic_model.rays[1]) == (1, 1)
    assert element.order() is None
    assert not element.is_identity()


def test_a2_rotation_has_order_five(a2_seed):
    check = verify_gamma_element(a2_seed, [0], {0: 1, 1: 0})
    assert check.ok
    assert check.element.order() == 5


def test_composed_rotation(a2_seed):
    element = verify_gamma_element(a2_seed, [0], {0: 1, 1: 0}).element
    square = element.compose(element)
    assert square.ok
    assert square.element.order() == 5
    assert square.element.ray_images() == tuple(
        element.apply(x) for x in element.ray_images()
    )


@pytest.mark.parametrize(
    "word, relabel, reason",
    [
        ([2], {0: 1, 1: 0}, "frozen"),
        ([0], {0: 1}, "cover"),
        ([0], {0: 0, 1: 0}, "bijection"),
        ([0], {0: 0, 1: 1}, "form"),
    ],
)
def test_rejected_elements(a2_seed, word, relabel, reason):
    check = verify_gamma_element(a2_seed, word, relabel)
    assert not check.ok
    assert reason in check.reason


def test_strict_mode_needs_frozen_permutation(a2_seed):
    check = verify_gamma_element(a2_seed, [0], {0: 1, 1: 0}, strict=True)
    assert not check.ok


def test_nu_word(a2_seed, cubic_seed):
    assert nu_word(a2_seed) == (0, 1)
    assert nu_word(cubic_seed) is None


def test_modular_group_of_a2(a2_seed, a2_model, small_config):
    group = modular_group(
        a2_seed,
        KodairaVerdict.from_str("II"),
        max_word_length=small_config.max_word_length,
        max_states=small_config.max_states,
        developing=DevelopingMap(a2_model),
    )
    assert group.label == Z5
    assert group.conjecture == VERIFIED
    assert group.generators
    assert all(g.order() == 5 for g in group.generators)


def test_modular_group_of_cubic(cubic_spec, small_config):
    report = classify(cubic_spec, small_config)
    assert report.modular_group.label == PSL2Z
    assert report.modular_group.generators


def test_cubic_alpha_action(cubic_seed):
    element = verify_gamma_element(cubic_seed, [2], {0: 0, 1: 2, 2: 1}).element
    images = [element.apply(v) for v in [(1, 0), (0, 1), (-1, -1)]]
    assert images == [(1, 0), (1, 1), (0, 1)]
    assert [element.apply(v) for v in [(2, 0), (0, 2), (-2, -2)]] == [(2, 0), (2, 2), (0, 2)]


def test_explicit_words(a2_seed, cubic_seed):
    assert explicit_words(a2_seed) == [(0,), (1,), (0, 1), (1, 0)]
    assert explicit_words(cubic_seed) == [(0,), (1,), (2,)]


def test_explicit_generators_of_the_cubic(cubic_seed, cubic_model):
    generators = explicit_generators(
        cubic_seed, max_generators=6, developing=DevelopingMap(cubic_model)
    )
    assert any(g.word == (2,) for g in generators)
    assert all(len(g.word) == 1 for g in generators)


def test_explicit_elements_come_before_the_search(a2_seed, monkeypatch):
    def no_search(*args, **kwargs):
        raise AssertionError("the bounded search should not run")

    monkeypatch.setattr("clustertrop.classifier.gamma.search_generators", no_search)
    group = modular_group(a2_seed, KodairaVerdict.from_str("II"))
    assert group.generators
    assert group.conjecture == VERIFIED


def test_search_runs_when_no_explicit_element(a2_seed, monkeypatch):
    monkeypatch.setattr(
        "clustertrop.classifier.gamma.explicit_generators", lambda *args, **kwargs: []
    )
    monkeypatch.setattr(
        "clustertrop.classifier.gamma.search_generators", lambda *args, **kwargs: []
    )
    group = modular_group(a2_seed, KodairaVerdict.from_str("II"))
    assert group.label == Z5
    assert group.conjecture == OPEN
    assert "search budget" in group.note


def test_modular_group_of_iv_star():
    S = seed_from_fan_spec(FanSeedSpec.triangle(2, 3, 3))
    group = modular_group(S, KodairaVerdict.from_str("IV*"))
    assert group.label == Z2
    assert group.conjecture == VERIFIED
    assert group.generators
    assert all(g.order() == 2 for g in group.generators)


@pytest.mark.parametrize("triangle, label", [((2, 3, 4), "III*"), ((2, 3, 5), "II*")])
def test_trivial_groups_reverse_orientation(triangle, label):
    S = seed_from_fan_spec(FanSeedSpec.triangle(*triangle))
    group = modular_group(S, KodairaVerdict.from_str(label))
    assert group.label == TRIVIAL
    assert group.generators == []
    assert group.conjecture == VERIFIED
    assert group.orientation_reversing
    log = group.dump()
    assert log["orientation_reversing"] is True
    assert log["group"] == "Gamma'"


@pytest.mark.parametrize("label, reason", [("III*", "trivial group label"), ("IV", "divide 4")])
def test_label_and_generators_are_reconciled(a2_seed, label, reason):
    group = modular_group(a2_seed, KodairaVerdict.from_str(label))
    assert group.conjecture == OPEN
    assert reason in group.note


def test_group_descriptor_records_the_frozen_frame(a2_seed):
    strict = modular_group(
        a2_seed, KodairaVerdict.from_str("II"), strict=True, max_word_length=4, max_states=30
    )
    assert strict.strict
    assert strict.dump()["group"] == "Gamma"
    assert not modular_group(a2_seed, KodairaVerdict.from_str("II")).strict
    log = GroupDescriptor.not_computed().dump()
    assert log["strict"] is False
    assert log["orientation_reversing"] is None


class StaticElement:
    word = (0, 1)

    def __init__(self, images):
        self.images = tuple(images)

    def ray_images(self):
        return self.images


def test_nu_mismatch_is_inconsistent(a2_seed, small_config, monkeypatch):
    monkeypatch.setattr(
        "clustertrop.classifier.report.nu_generator",
        lambda S, strict, developing: StaticElement(developing.model.rays),
    )
    with pytest.raises(InconsistentCriteria) as error:
        classify(a2_seed, small_config)
    assert error.value.first == "nu_word"
    assert error.value.second == "nu_lines"


def test_nu_check_on_a2(a2_seed, small_config):
    assert classify(a2_seed, small_config).nu_check is True


@pytest.mark.parametrize("seed", range(200))
def test_monodromy_criteria_agree_on_random_fans(seed):
    spec = random_fan_spec(np.random.default_rng(seed))
    try:
        S = seed_from_fan_spec(spec)
    except SeedException:
        pytest.skip(f"{spec} has no rank two seed")
    developed, via_mutations, factored = monodromy_criterion(S, FanModel.from_seed(S))
    assert developed == via_mutations == factored


def test_audit_of_random_fans():
    config = Config({"omegaconf": {"corpus": {"size": 100}, "classify": {"line_samples": 4}}})
    summary = audit_corpus(config)
    assert summary["skipped"] + sum(summary["classes"].values()) == 100


def test_audit_of_known_fans(monkeypatch):
    triangles = iter([(1, 1, 0), (2, 2, 2), (1, 0, 0)])
    monkeypatch.setattr(
        "clustertrop.classifier.report.random_fan_spec",
        lambda rng, max_rays, max_k: FanSeedSpec.triangle(*next(triangles)),
    )
    config = Config(
        {"omegaconf": {"corpus": {"size": 3, "max_word_length": 2}, "classify": {"line_samples": 4}}}
    )
    summary = audit_corpus(config)
    assert summary["skipped"] == 0
    assert summary["classes"] == {
        "FiniteType(I1)": 1,
        "FiniteType(II)": 1,
        "PositiveNonAcyclic(I0*)": 1,
    }


def test_inconsistent_criteria_message():
    error = InconsistentCriteria("developing", "mutations", "detail")
    assert error.first == "developing"
    assert "developing and mutations disagree" in str(error)
