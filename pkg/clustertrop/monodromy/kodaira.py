import re
from collections import namedtuple

from clustertrop.linalg import ADEType, Mat2, sl2_conjugacy
from clustertrop.linalg.conjugacy import (
    ELLIPTIC,
    HYPERBOLIC,
    IDENTITY,
    NEG_IDENTITY,
    NEG_PARABOLIC,
    PARABOLIC,
)
from clustertrop.monodromy.factorization import MonodromyException
from clustertrop.trop import calibration_table

I_K = "I"
I_K_STAR = "I*"
II = "II"
III = "III"
IV = "IV"
II_STAR = "II*"
III_STAR = "III*"
IV_STAR = "IV*"
NOT_KODAIRA = "NotKodaira"

HYPERBOLIC_REASON = "Hyperbolic"
SEMIDEFINITE_PARABOLIC = "SemidefiniteParabolic"
SOME_WRAP_PARABOLIC = "SomeWrapParabolic"
SOME_WRAP_HYPERBOLIC = "SomeWrapHyperbolic"

ELLIPTIC_TYPES = {1: (II, II_STAR), 0: (III, III_STAR), -1: (IV, IV_STAR)}
STARRED_ADE = {II_STAR: "E8", III_STAR: "E7", IV_STAR: "E6"}


class KodairaVerdict(namedtuple("KodairaVerdict", ["variant", "k", "reason"])):
    __slots__ = ()

    @classmethod
    def kodaira(cls, variant: str, k: int = None) -> "KodairaVerdict":
        return cls(variant, k, None)

    @classmethod
    def not_kodaira(cls, reason: str) -> "KodairaVerdict":
        return cls(NOT_KODAIRA, None, reason)

    @classmethod
    def from_str(cls, label: str) -> "KodairaVerdict":
        match = re.fullmatch(r"I(\d+)(\*?)", label)
        if match:
            return cls.kodaira(I_K_STAR if match.group(2) else I_K, int(match.group(1)))
        if label in (II, III, IV, II_STAR, III_STAR, IV_STAR):
            return cls.kodaira(label)
        match = re.fullmatch(r"NotKodaira\((\w+)\)", label)
        if match and match.group(1) in (
            HYPERBOLIC_REASON,
            SEMIDEFINITE_PARABOLIC,
            SOME_WRAP_PARABOLIC,
            SOME_WRAP_HYPERBOLIC,
        ):
            return cls.not_kodaira(match.group(1))
        raise MonodromyException(f"Unknown Kodaira label {label}")

    def is_kodaira(self) -> bool:
        return self.variant != NOT_KODAIRA

    def is_starred(self) -> bool:
        return self.variant in (I_K_STAR, II_STAR, III_STAR, IV_STAR)

    def is_finite_type_label(self) -> bool:
        return self.variant in (I_K, II, III, IV)

    def is_some_wrap(self) -> bool:
        return self.reason in (SOME_WRAP_PARABOLIC, SOME_WRAP_HYPERBOLIC)

    def is_positive(self) -> bool:
        return self.reason not in (HYPERBOLIC_REASON, SEMIDEFINITE_PARABOLIC)

    def starred_ade(self) -> ADEType:
        """Type of the lattice Q in the starred cases."""
        if self.variant == I_K_STAR:
            return ADEType.from_str(f"D{self.k + 4}")
        return ADEType.from_str(STARRED_ADE[self.variant])

    def __str__(self) -> str:
        if self.variant == I_K:
            return f"I{self.k}"
        if self.variant == I_K_STAR:
            return f"I{self.k}*"
        if self.variant == NOT_KODAIRA:
            return f"NotKodaira({self.reason})"
        return self.variant

    def dump(self) -> str:
        return str(self)


def kodaira_identify(m_inv: Mat2) -> KodairaVerdict:
    cls = sl2_conjugacy(m_inv)
    table = calibration_table()
    if cls.variant == IDENTITY:
        return KodairaVerdict.kodaira(I_K, 0)
    if cls.variant == NEG_IDENTITY:
        return KodairaVerdict.kodaira(I_K_STAR, 0)
    if cls.variant == PARABOLIC:
        if (cls.k > 0) == (table["parabolic"] > 0):
            return KodairaVerdict.kodaira(I_K, abs(cls.k))
        return KodairaVerdict.not_kodaira(SEMIDEFINITE_PARABOLIC)
    if cls.variant == NEG_PARABOLIC:
        if (cls.k > 0) == (table["neg_parabolic"] > 0):
            return KodairaVerdict.kodaira(I_K_STAR, abs(cls.k))
        return KodairaVerdict.not_kodaira(SOME_WRAP_PARABOLIC)
    if cls.variant == ELLIPTIC:
        plain, starred = ELLIPTIC_TYPES[cls.trace]
        if cls.rotation_sign == table["elliptic"][cls.trace]:
            return KodairaVerdict.kodaira(plain)
        return KodairaVerdict.kodaira(starred)
    if cls.variant == HYPERBOLIC and cls.trace > 2:
        return KodairaVerdict.not_kodaira(HYPERBOLIC_REASON)
    return KodairaVerdict.not_kodaira(SOME_WRAP_HYPERBOLIC)
