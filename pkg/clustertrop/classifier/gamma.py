from collections import deque, namedtuple
from typing import Dict, List, Optional, Sequence, Tuple, Union

from loguru import logger

from clustertrop.linalg import Mat2, det2, rank, sl2_transport
from clustertrop.monodromy import (
    I_K,
    I_K_STAR,
    II,
    II_STAR,
    III,
    III_STAR,
    IV,
    IV_STAR,
    KodairaVerdict,
)
from clustertrop.seeds import Seed, seed_isomorphisms, tropical_x_mutation
from clustertrop.trop import DevelopingMap, FanModel, ccw_compare

SL2Z = "SL2Z"
PSL2Z = "PSL2Z"
Z_SEMIDIRECT_Z2 = "Z_semidirect_Z2"
Z = "Z"
Z5 = "Z5"
Z4 = "Z4"
Z3 = "Z3"
Z2 = "Z2"
TRIVIAL = "Trivial"
NOT_COMPUTED = "NotComputed"

VERIFIED = "verified"
OPEN = "open"

FINITE_LABELS = {II: Z5, III: Z3, IV: Z4, IV_STAR: Z2, III_STAR: TRIVIAL, II_STAR: TRIVIAL}
FINITE_ORDERS = {Z5: 5, Z4: 4, Z3: 3, Z2: 2, TRIVIAL: 1}
TORSION_FREE = {Z}

GammaCheck = namedtuple("GammaCheck", ["ok", "reason", "element"])


class GammaElement:
    """Mutation word followed by a relabeling onto the starting seed.

    In chart coordinates of the starting seed the element acts by
    x -> L^-1(A^-1 x), where A is the frame change taking the relabeled
    vectors of the mutated seed to those of the start and L^-1 undoes the
    chart changes along the word.
    """

    def __init__(
        self,
        seed: Seed,
        word: Sequence[int],
        relabel: Dict[int, int],
        frame: Mat2,
        developing: DevelopingMap,
    ) -> None:
        self.seed = seed
        self.word = tuple(word)
        self.relabel = dict(relabel)
        self.frame = frame
        self.developing = developing
        self._frame_inverse = frame.inverse()
        self._maps = []
        current = seed
        for j in self.word:
            self._maps.append(tropical_x_mutation(current, j))
            current = current.mutate(j)
        self.dev_matrix: Optional[Mat2] = None

    def apply(self, x: Sequence) -> Tuple:
        y = self._frame_inverse @ x
        for wall in reversed(self._maps):
            y = wall(y)
        return tuple(y)

    def ray_images(self) -> Tuple[Tuple, ...]:
        return tuple(self.apply(r) for r in self.developing.model.rays)

    def is_identity(self) -> bool:
        return self.ray_images() == self.developing.model.rays

    def order(self, limit: int = 12) -> Optional[int]:
        """Order of the action on U^trop, or None above `limit`."""
        rays = self.developing.model.rays
        images = list(rays)
        for k in range(1, limit + 1):
            images = [self.apply(x) for x in images]
            if tuple(images) == rays:
                return k
        return None

    def compose(self, other: "GammaElement", strict=False) -> GammaCheck:
        """The element acting as self after other."""
        word = self.word + tuple(self.relabel[j] for j in other.word)
        relabel = {i: self.relabel[h] for i, h in other.relabel.items()}
        return verify_gamma_element(
            self.seed, word, relabel, strict=strict, developing=self.developing
        )

    def dump(self) -> dict:
        return {
            "word": list(self.word),
            "relabel": [[i, h] for i, h in sorted(self.relabel.items())],
            "frame": self.frame.dump(),
            "dev_matrix": None if self.dev_matrix is None else self.dev_matrix.dump(),
            "ray_images": [list(x) for x in self.ray_images()],
        }


def _lift(developing: DevelopingMap, x: Sequence, after) -> Tuple[Tuple, tuple]:
    """First developed copy of the chart point x past cover position `after`."""
    n = developing.n
    cone = developing.chart_cone(x)
    sheet = 0 if after is None else after[0] // n - 1
    while True:
        m = sheet * n + cone
        y = developing.cone_matrix(m) @ x
        position = developing.position(y, m)
        if after is None or position > after:
            return tuple(y), position
        sheet += 1


def developing_matrix(element: GammaElement) -> Optional[Mat2]:
    """Linear action of the element in developing coordinates, if it is one."""
    developing = element.developing
    images = list(element.ray_images())
    images.append(images[0])
    lifts, position = [], None
    for x in images:
        y, position = _lift(developing, x, position)
        lifts.append(y)
    D = Mat2.from_columns(lifts[0], lifts[1])
    if D.det != 1:
        return None
    for m, y in enumerate(lifts):
        if tuple(D @ developing.image(m)) != y:
            return None
    m_inv = developing.monodromy_inverse()
    if D @ m_inv != m_inv @ D:
        return None
    return D


def verify_gamma_element(
    S: Seed,
    word: Sequence[int],
    relabel: Union[Dict[int, int], Sequence[Optional[int]]],
    strict=False,
    developing: Optional[DevelopingMap] = None,
    target: Optional[Seed] = None,
) -> GammaCheck:
    if not isinstance(relabel, dict):
        relabel = {i: h for i, h in enumerate(relabel) if h is not None}
    for j in word:
        if j in S.frozen or not 0 <= j < S.n:
            return GammaCheck(False, f"mutation index {j} is frozen or out of range", None)
    if target is None:
        target = S.mutate_word(word)
    domain = list(range(S.n)) if strict else S.non_frozen
    if any(i not in relabel for i in domain):
        return GammaCheck(False, "relabeling does not cover the matched indices", None)
    h = {i: relabel[i] for i in domain}
    if sorted(h.values()) != sorted(domain):
        return GammaCheck(False, "relabeling is not a bijection", None)
    if strict and any((i in S.frozen) != (h[i] in target.frozen) for i in domain):
        return GammaCheck(False, "frozen vectors are not permuted", None)
    if domain:
        ratio = target.d[h[domain[0]]] / S.d[domain[0]]
        if any(target.d[h[i]] != ratio * S.d[i] for i in domain):
            return GammaCheck(False, "multipliers are not preserved", None)
    for i in domain:
        for j in domain:
            if S.epsilon[i][j] != target.epsilon[h[i]][h[j]]:
                return GammaCheck(False, f"form differs at ({i}, {j})", None)

    vectors = [i for i in domain if S.nbar2.multiplicities[i]]
    frame = sl2_transport(
        [target.nbar2.vectors[h[i]] for i in vectors], [S.nbar2.vectors[i] for i in vectors]
    )
    if frame is None:
        return GammaCheck(False, "no SL2(Z) frame change matches the vectors", None)
    if developing is None:
        developing = DevelopingMap(FanModel.from_seed(S))
    element = GammaElement(S, word, h, frame, developing)
    element.dev_matrix = developing_matrix(element)
    if element.dev_matrix is None:
        return GammaCheck(False, "action is not linear in developing coordinates", None)
    return GammaCheck(True, None, element)


class GroupDescriptor:
    """Cluster modular group of a positive seed.

    `strict` records whether frozen vectors had to be permuted, i.e. whether
    the label describes Γ itself or the larger group Γ' of automorphisms
    matching non-frozen vectors only. `orientation_reversing` is True when
    an orientation reversing automorphism exists, so that the label names
    the index two orientation preserving subgroup of Γ̂.
    """

    def __init__(
        self,
        label: str,
        generators: List[GammaElement],
        conjecture: Optional[str] = None,
        note: str = "",
        strict: bool = False,
        orientation_reversing: Optional[bool] = None,
    ) -> None:
        self.label = label
        self.generators = generators
        self.conjecture = conjecture
        self.note = note
        self.strict = strict
        self.orientation_reversing = orientation_reversing

    @classmethod
    def not_computed(cls) -> "GroupDescriptor":
        return cls(NOT_COMPUTED, [], None, "not positive")

    @property
    def group(self) -> str:
        return "Gamma" if self.strict else "Gamma'"

    def dump(self) -> dict:
        return {
            "label": self.label,
            "group": self.group,
            "generators": [g.dump() for g in self.generators],
            "conjecture": self.conjecture,
            "note": self.note,
            "strict": self.strict,
            "orientation_reversing": self.orientation_reversing,
        }


def group_label(verdict: KodairaVerdict) -> str:
    if not verdict.is_positive():
        return NOT_COMPUTED
    if verdict.is_some_wrap():
        return Z
    if verdict.variant == I_K:
        return SL2Z if verdict.k == 0 else Z_SEMIDIRECT_Z2
    if verdict.variant == I_K_STAR:
        return PSL2Z if verdict.k == 0 else Z
    return FINITE_LABELS[verdict.variant]


def _needs_frozen_frame(S: Seed) -> bool:
    return rank([S.nbar2.vectors[i] for i in S.non_frozen]) < 2


def search_generators(
    S: Seed,
    strict=False,
    max_word_length: int = 12,
    max_states: int = 400,
    max_generators: int = 3,
    developing: Optional[DevelopingMap] = None,
) -> List[GammaElement]:
    """Breadth first search over mutation words for verified, distinct,
    nontrivial elements."""
    if developing is None:
        developing = DevelopingMap(FanModel.from_seed(S))
    strict = strict or _needs_frozen_frame(S)
    found: Dict[Tuple, GammaElement] = {}
    queue = deque([(S, ())])
    seen = {S.key()}
    while queue and len(found) < max_generators:
        seed, word = queue.popleft()
        for h in seed_isomorphisms(S, seed, strict=strict):
            check = verify_gamma_element(S, word, h, strict, developing, target=seed)
            if not check.ok or check.element.is_identity():
                continue
            images = check.element.ray_images()
            if images not in found:
                logger.debug(f"Modular group element {check.element.dump()}")
                found[images] = check.element
            if len(found) >= max_generators:
                break
        if len(word) >= max_word_length:
            continue
        for j in S.non_frozen:
            if len(seen) >= max_states:
                break
            successor = seed.mutate(j)
            if successor.key() not in seen:
                seen.add(successor.key())
                queue.append((successor, word + (j,)))
    if queue and len(found) < max_generators:
        logger.warning(f"Generator search stopped after {len(seen)} seeds")
    return list(found.values())


def nu_word(S: Seed) -> Optional[Tuple[int, ...]]:
    """Non-frozen indices counterclockwise from the most clockwise vector,
    when all of them lie in a closed half-plane."""
    coords = S.nbar2
    indices = S.non_frozen
    if not indices:
        return None
    start = next(
        (
            i
            for i in indices
            if all(det2(coords.vectors[i], coords.vectors[j]) >= 0 for j in indices)
        ),
        None,
    )
    if start is None:
        return None
    first = coords.direction(start)
    ordered = sorted(
        indices,
        key=lambda i: (
            sum(ccw_compare(first, coords.direction(j), coords.direction(i)) < 0 for j in indices),
            i,
        ),
    )
    return tuple(ordered)


def nu_generator(
    S: Seed, strict=False, developing: Optional[DevelopingMap] = None
) -> Optional[GammaElement]:
    word = nu_word(S)
    if word is None:
        return None
    if developing is None:
        developing = DevelopingMap(FanModel.from_seed(S))
    strict = strict or _needs_frozen_frame(S)
    target = S.mutate_word(word)
    candidates = sorted(
        seed_isomorphisms(S, target, strict=strict),
        key=lambda h: sum(i != j for i, j in h.items()),
    )
    for h in candidates:
        check = verify_gamma_element(S, word, h, strict, developing, target=target)
        if check.ok:
            return check.element
    return None


def explicit_words(S: Seed) -> List[Tuple[int, ...]]:
    """Single mutations, then the prefixes of the counterclockwise and
    clockwise ν words, longest last."""
    words = [(j,) for j in S.non_frozen]
    word = nu_word(S)
    if word is not None:
        for ordered in (word, tuple(reversed(word))):
            words.extend(ordered[:k] for k in range(2, len(ordered) + 1))
    return list(dict.fromkeys(words))


def explicit_generators(
    S: Seed,
    strict=False,
    max_generators: int = 3,
    developing: Optional[DevelopingMap] = None,
) -> List[GammaElement]:
    """Verified elements among the known constructions: α and the I_k*
    elements are one mutation followed by a relabeling, the fractional
    powers of ν± are prefixes of the ν words."""
    if developing is None:
        developing = DevelopingMap(FanModel.from_seed(S))
    strict = strict or _needs_frozen_frame(S)
    found: Dict[Tuple, GammaElement] = {}
    for word in explicit_words(S):
        target = S.mutate_word(word)
        for h in seed_isomorphisms(S, target, strict=strict):
            check = verify_gamma_element(S, word, h, strict, developing, target=target)
            if not check.ok or check.element.is_identity():
                continue
            images = check.element.ray_images()
            if images not in found:
                logger.debug(f"Explicit modular group element {check.element.dump()}")
                found[images] = check.element
            if len(found) >= max_generators:
                return list(found.values())
    return list(found.values())


def _opposite(S: Seed) -> Seed:
    return Seed(
        skew=[[-x for x in row] for row in S.skew],
        d=S.d,
        frozen=S.frozen,
        basis_coords=S.basis_coords,
    )


def has_orientation_reversing(S: Seed, strict=False) -> bool:
    """Whether the seed, or a seed one mutation away, is anti-isomorphic to
    S through a determinant -1 map of the vectors."""
    strict = strict or _needs_frozen_frame(S)
    reflection = Mat2(1, 0, 0, -1)
    for word in [()] + [(j,) for j in S.non_frozen]:
        target = S.mutate_word(word)
        for h in seed_isomorphisms(S, _opposite(target), strict=strict):
            domain = list(range(S.n)) if strict else S.non_frozen
            vectors = [i for i in domain if S.nbar2.multiplicities[i]]
            frame = sl2_transport(
                [tuple(reflection @ target.nbar2.vectors[h[i]]) for i in vectors],
                [S.nbar2.vectors[i] for i in vectors],
            )
            if frame is not None:
                logger.debug(f"Orientation reversing automorphism through {list(word)}, {h}")
                return True
    return False


def _label_conflict(label: str, generators: List[GammaElement]) -> str:
    if label in FINITE_ORDERS:
        orders = [g.order() for g in generators]
        expected = FINITE_ORDERS[label]
        if any(k is None or expected % k for k in orders):
            return f"element orders {orders} do not divide {expected}"
        if generators and max(orders) != expected:
            return f"no element of order {expected} among orders {orders}"
    if label in TORSION_FREE and any(g.order() is not None for g in generators):
        return "torsion element found for a torsion free group label"
    return ""


def modular_group(
    S: Seed,
    verdict: KodairaVerdict,
    strict=False,
    max_word_length: int = 12,
    max_states: int = 400,
    max_generators: int = 3,
    developing: Optional[DevelopingMap] = None,
) -> GroupDescriptor:
    """Label of the group from the Kodaira type, with generators taken from
    the explicit constructions and, failing those, from a bounded search.

    The label is reconciled with the generators: a disagreement leaves the
    conjecture open and is named in the note.
    """
    label = group_label(verdict)
    if label == NOT_COMPUTED:
        return GroupDescriptor.not_computed()
    if developing is None:
        developing = DevelopingMap(FanModel.from_seed(S))
    effective_strict = strict or _needs_frozen_frame(S)
    generators = explicit_generators(S, strict, max_generators, developing)
    if not generators and label != TRIVIAL:
        logger.info(f"No explicit element for {verdict}, searching mutation words")
        generators = search_generators(
            S, strict, max_word_length, max_states, max_generators, developing
        )
    conjecture = OPEN if verdict.is_some_wrap() else VERIFIED
    note = _label_conflict(label, generators)
    if label == TRIVIAL and generators:
        note = "nontrivial elements found for a trivial group label"
    elif label != TRIVIAL and not generators:
        note = "no nontrivial element found within the search budget"
    if note:
        conjecture = OPEN
        logger.warning(f"{note} for {verdict}")
    return GroupDescriptor(
        label,
        generators,
        conjecture,
        note,
        strict=effective_strict,
        orientation_reversing=has_orientation_reversing(S, strict),
    )
