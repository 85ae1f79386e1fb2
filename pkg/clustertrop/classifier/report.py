from multiprocessing import Pool
from typing import Optional, Union

import numpy as np
from loguru import logger
from tqdm import tqdm

from clustertrop.classifier.gamma import (
    GroupDescriptor,
    modular_group,
    nu_generator,
)
from clustertrop.config import Config
from clustertrop.linalg import ade_type, is_negative_definite, rank, sl2_conjugacy
from clustertrop.monodromy import (
    HYPERBOLIC_REASON,
    SEMIDEFINITE_PARABOLIC,
    KodairaVerdict,
    kodaira_identify,
    monodromy_from_factorization,
    monodromy_via_mutations,
)
from clustertrop.seeds import (
    FanSeedSpec,
    MalformedSeed,
    RankError,
    Seed,
    SeedException,
    acyclic_representative,
    cartan_positive,
    half_plane_acyclic,
    is_acyclic,
    quiver_of,
    random_fan_spec,
    seed_from_fan_spec,
)
from clustertrop.surfaces import (
    NEGATIVE_DEFINITE,
    NOT_SEMIDEFINITE,
    SEMIDEFINITE_NOT_DEFINITE,
    charge,
    h_signature,
    intersection_matrix,
    q_eff_decomposition,
    q_form,
)
from clustertrop.trop import (
    ALL_WRAP,
    EMPTY,
    NO_WRAP,
    DevelopingMap,
    FanModel,
    cluster_complex_region,
    is_positive,
    nu_minus,
    nu_plus,
    sample_lines,
    wrap_class,
)

NEGATIVE_DEFINITE_CLASS = "NegativeDefinite"
SEMIDEFINITE_NOT_DEFINITE_CLASS = "SemidefiniteNotDefinite"
FINITE_TYPE_CLASS = "FiniteType"
ACYCLIC_INFINITE_CLASS = "AcyclicInfinite"
POSITIVE_NON_ACYCLIC_CLASS = "PositiveNonAcyclic"


class ClassificationException(Exception):
    pass


class InconsistentCriteria(ClassificationException):
    def __init__(self, first: str, second: str, detail: str = "") -> None:
        self.first = first
        self.second = second
        super().__init__(f"Criteria {first} and {second} disagree: {detail}")


class ClassificationReport:
    def __init__(
        self,
        seed: Seed,
        model: FanModel,
        kodaira: KodairaVerdict,
        monodromy,
        h_sig: str,
        q_type,
        q_gram,
        q_eff,
        charge: int,
        quiver_flags: dict,
        wrap: str,
        region,
        lines: dict,
        modular_group: Optional[GroupDescriptor] = None,
        nu_check: Optional[bool] = None,
    ) -> None:
        self.seed = seed
        self.model = model
        self.kodaira = kodaira
        self.monodromy = monodromy
        self.h_sig = h_sig
        self.q_type = q_type
        self.q_gram = q_gram
        self.q_eff = q_eff
        self.charge = charge
        self.quiver_flags = quiver_flags
        self.wrap = wrap
        self.region = region
        self.lines = lines
        self.modular_group = modular_group
        self.nu_check = nu_check

    @property
    def primary_class(self) -> str:
        if self.kodaira.reason == HYPERBOLIC_REASON:
            return NEGATIVE_DEFINITE_CLASS
        if self.kodaira.reason == SEMIDEFINITE_PARABOLIC:
            return SEMIDEFINITE_NOT_DEFINITE_CLASS
        if self.kodaira.is_finite_type_label():
            return f"{FINITE_TYPE_CLASS}({self.kodaira})"
        if self.kodaira.is_some_wrap():
            return f"{ACYCLIC_INFINITE_CLASS}({self.kodaira.reason})"
        return f"{POSITIVE_NON_ACYCLIC_CLASS}({self.kodaira})"

    def invariants(self) -> dict:
        """The fields that do not depend on the chart of the seed."""
        return {
            "class": self.primary_class,
            "kodaira": str(self.kodaira),
            "h_sig": self.h_sig,
            "q_type": str(self.q_type),
            "charge": self.charge,
            "quiver_flags": self.quiver_flags,
            "wrap": self.wrap,
            "cluster_region": self.region.kind,
            "modular_group": None if self.modular_group is None else self.modular_group.label,
        }

    def dump(self) -> dict:
        return {
            "class": self.primary_class,
            "seed": self.seed.dump(),
            "fan": self.model.dump(),
            "monodromy": self.monodromy.dump(),
            "kodaira": str(self.kodaira),
            "h_sig": self.h_sig,
            "q_type": str(self.q_type),
            "q_form": self.q_gram,
            "q_eff": None if self.q_eff is None else str(self.q_eff),
            "charge": self.charge,
            "quiver_flags": self.quiver_flags,
            "wrap": self.wrap,
            "cluster_region": self.region.dump(),
            "lines": self.lines,
            "modular_group": None if self.modular_group is None else self.modular_group.dump(),
            "nu_check": self.nu_check,
        }


def as_seed(source: Union[Seed, FanSeedSpec, dict]) -> Seed:
    if isinstance(source, Seed):
        return source
    if isinstance(source, FanSeedSpec):
        return seed_from_fan_spec(source)
    if isinstance(source, dict) and "rays" in source:
        return seed_from_fan_spec(FanSeedSpec.from_dict(source))
    if isinstance(source, dict):
        return Seed.from_dict(source)
    raise MalformedSeed(f"Cannot read a seed from {source!r}")


# Criteria, each a pure function of its arguments


def monodromy_criterion(S: Seed, model: FanModel):
    developed = DevelopingMap(model).monodromy_inverse()
    via_mutations = monodromy_via_mutations(S, model)
    factored = monodromy_from_factorization(
        list(zip(model.rays, model.blowups)), basis=(model.rays[0], model.rays[1])
    )
    return developed, via_mutations, factored


def surface_criterion(S: Seed, model: FanModel) -> dict:
    Q = q_form(S, model)
    return {
        "h_sig": h_signature(intersection_matrix(model)),
        "charge": charge(model),
        "q_gram": Q.dump(),
        "q_negative": is_negative_definite(Q),
        "q_type": ade_type(Q),
        "q_eff": q_eff_decomposition(S),
    }


def quiver_criterion(S: Seed, max_forms: int) -> dict:
    representative = acyclic_representative(S, max_forms)
    return {
        "seed_acyclic": is_acyclic(quiver_of(S)),
        "seed_half_plane": half_plane_acyclic(S),
        "acyclic": representative is not None,
        "finite_type": representative is not None and cartan_positive(representative),
    }


def line_criterion(model: FanModel, samples: int, wrap_cutoff: int, global_seed: int) -> dict:
    rng = np.random.default_rng(global_seed)
    traces = sample_lines(model, rng, samples, wrap_cutoff)
    return {
        "samples": len(traces),
        "escaped": sum(trace.escapes() for trace in traces),
        "wrap_counts": sorted(trace.wrap_count for trace in traces if trace.escapes()),
    }


def region_criterion(model: FanModel):
    return cluster_complex_region(model)


def _run_criteria(S: Seed, model: FanModel, config: Config) -> dict:
    jobs = {
        "monodromy": (monodromy_criterion, (S, model)),
        "surfaces": (surface_criterion, (S, model)),
        "quiver": (quiver_criterion, (S, config.max_forms)),
        "lines": (
            line_criterion,
            (model, config.line_samples, config.wrap_cutoff, config.global_seed),
        ),
        "region": (region_criterion, (model,)),
    }
    if config.n_workers > 1:
        logger.info(f"Running {len(jobs)} criteria on {config.n_workers} workers...")
        with Pool(processes=config.n_workers) as pool:
            results = pool.starmap(_call, [(f, args) for f, args in jobs.values()])
        return dict(zip(jobs.keys(), results))
    return {name: f(*args) for name, (f, args) in jobs.items()}


def _call(f, args):
    return f(*args)


def _check(condition: bool, first: str, second: str, detail: str = "") -> None:
    if not condition:
        raise InconsistentCriteria(first, second, detail)


def _cross_check(kodaira: KodairaVerdict, wrap: str, results: dict) -> None:
    developed, via_mutations, factored = results["monodromy"]
    _check(developed == via_mutations, "developing", "mutations", f"{developed} != {via_mutations}")
    _check(developed == factored, "developing", "factorization", f"{developed} != {factored}")

    surfaces = results["surfaces"]
    expected_h = {
        HYPERBOLIC_REASON: NEGATIVE_DEFINITE,
        SEMIDEFINITE_PARABOLIC: SEMIDEFINITE_NOT_DEFINITE,
    }.get(kodaira.reason, NOT_SEMIDEFINITE)
    _check(surfaces["h_sig"] == expected_h, "kodaira", "h_signature", f"{kodaira}, {surfaces['h_sig']}")
    positive = kodaira.is_positive()
    _check(surfaces["q_negative"] == positive, "h_signature", "q_form", f"{surfaces['q_gram']}")

    quiver = results["quiver"]
    _check(quiver["seed_acyclic"] == quiver["seed_half_plane"], "quiver_cycles", "half_plane")
    _check(
        quiver["finite_type"] == kodaira.is_finite_type_label(),
        "finite_type",
        "kodaira",
        f"{kodaira}",
    )
    region = results["region"]
    if positive:
        _check(quiver["acyclic"] == (region.kind != EMPTY), "acyclic", "cluster_region", region.kind)
        _check(quiver["acyclic"] != kodaira.is_starred(), "acyclic", "kodaira", f"{kodaira}")
    if kodaira.is_starred():
        expected = kodaira.starred_ade()
        _check(surfaces["q_type"] == expected, "q_type", "kodaira", f"{surfaces['q_type']} != {expected}")

    lines = results["lines"]
    if wrap == NO_WRAP:
        _check(
            lines["escaped"] == lines["samples"] and set(lines["wrap_counts"]) <= {0},
            "lines",
            "kodaira",
            f"{kodaira} with {lines}",
        )
    elif wrap == ALL_WRAP:
        _check(
            lines["escaped"] == lines["samples"] and min(lines["wrap_counts"], default=1) >= 1,
            "lines",
            "kodaira",
            f"{kodaira} with {lines}",
        )
    elif kodaira.reason == HYPERBOLIC_REASON:
        _check(lines["escaped"] == 0, "lines", "kodaira", f"{kodaira} with {lines}")


def _nu_check(S: Seed, config: Config) -> Optional[bool]:
    """Checks that the counterclockwise mutation word of an acyclic seed
    acts as nu_plus or nu_minus on the rays of its fan.

    Returns None when no check applies and raises InconsistentCriteria on
    a mismatch.
    """
    representative = acyclic_representative(S, config.max_forms)
    if representative is None:
        return None
    if rank([representative.nbar2.vectors[i] for i in representative.non_frozen]) < 2:
        return None
    developing = DevelopingMap(FanModel.from_seed(representative, config.min_rays))
    if not is_positive(developing):
        return None
    element = nu_generator(representative, config.strict_gamma, developing)
    if element is None:
        logger.warning(f"No verified nu generator for {representative}")
        return None
    rays = developing.model.rays
    images = element.ray_images()
    matches = images in (
        tuple(nu_plus(developing, r) for r in rays),
        tuple(nu_minus(developing, r) for r in rays),
    )
    detail = f"mutations {list(element.word)} send {rays} to {images}"
    _check(matches, "nu_word", "nu_lines", detail)
    return matches


def classify(
    source: Union[Seed, FanSeedSpec, dict],
    config: Optional[Config] = None,
    with_group=True,
) -> ClassificationReport:
    if config is None:
        config = Config({})
    S = as_seed(source)
    if S.rank() != 2:
        raise RankError(f"The skew form has rank {S.rank()}, expected 2")
    model = FanModel.from_seed(S, config.min_rays)
    logger.info(f"Classifying {S} with fan {model}")

    results = _run_criteria(S, model, config)
    m_inv = results["monodromy"][0]
    kodaira = kodaira_identify(m_inv)
    wrap = wrap_class(sl2_conjugacy(m_inv))
    _cross_check(kodaira, wrap, results)

    surfaces = results["surfaces"]
    quiver = results["quiver"]
    report = ClassificationReport(
        seed=S,
        model=model,
        kodaira=kodaira,
        monodromy=m_inv,
        h_sig=surfaces["h_sig"],
        q_type=surfaces["q_type"],
        q_gram=surfaces["q_gram"],
        q_eff=surfaces["q_eff"],
        charge=surfaces["charge"],
        quiver_flags={"acyclic": quiver["acyclic"], "finite_type": quiver["finite_type"]},
        wrap=wrap,
        region=results["region"],
        lines=results["lines"],
    )
    if with_group:
        report.modular_group = modular_group(
            S,
            kodaira,
            strict=config.strict_gamma,
            max_word_length=config.max_word_length,
            max_states=config.max_states,
            max_generators=config.max_generators,
            developing=DevelopingMap(model),
        )
        if kodaira.is_positive() and not kodaira.is_starred():
            report.nu_check = _nu_check(S, config)
    logger.info(f"{S}: {report.primary_class}, kodaira {kodaira}")
    return report


def audit_corpus(config: Optional[Config] = None) -> dict:
    """Classifies random fans and random mutations of them, and checks the
    report invariants agree."""
    if config is None:
        config = Config({})
    corpus = config.omegaconf.corpus
    rng = config.rng
    counts = {}
    skipped = 0
    for _ in tqdm(range(corpus.size)):
        spec = random_fan_spec(rng, corpus.max_rays, corpus.max_k)
        try:
            S = seed_from_fan_spec(spec)
            report = classify(S, config, with_group=False)
            length = int(rng.integers(1, corpus.max_word_length + 1))
            word = [int(rng.choice(S.non_frozen)) for _ in range(length)]
            mutated = classify(S.mutate_word(word), config, with_group=False)
        except SeedException as e:
            logger.warning(f"Skipping {spec}: {e}")
            skipped += 1
            continue
        _check(
            report.invariants() == mutated.invariants(),
            "seed",
            f"mutation {word}",
            f"{report.invariants()} != {mutated.invariants()}",
        )
        counts[report.primary_class] = counts.get(report.primary_class, 0) + 1
    logger.info(f"Audited {corpus.size - skipped} seeds: {counts}")
    return {"classes": dict(sorted(counts.items())), "skipped": skipped}
