from collections import namedtuple
from itertools import product
from typing import Optional

from clustertrop.linalg.matrices import (
    Mat2,
    NotUnimodular,
    content,
    exgcd,
)

IDENTITY = "Identity"
NEG_IDENTITY = "NegIdentity"
PARABOLIC = "Parabolic"
NEG_PARABOLIC = "NegParabolic"
ELLIPTIC = "Elliptic"
HYPERBOLIC = "Hyperbolic"


class ConjClass(namedtuple("ConjClass", ["variant", "k", "trace", "rotation_sign"])):
    """SL2(Z) conjugacy class of a determinant one matrix.

    `k` is only set for the (negative) parabolic classes and
    `rotation_sign` only for the elliptic ones.
    """

    __slots__ = ()

    @classmethod
    def identity(cls) -> "ConjClass":
        return cls(IDENTITY, None, 2, None)

    @classmethod
    def neg_identity(cls) -> "ConjClass":
        return cls(NEG_IDENTITY, None, -2, None)

    @classmethod
    def parabolic(cls, k: int) -> "ConjClass":
        return cls(PARABOLIC, k, 2, None)

    @classmethod
    def neg_parabolic(cls, k: int) -> "ConjClass":
        return cls(NEG_PARABOLIC, k, -2, None)

    @classmethod
    def elliptic(cls, trace: int, rotation_sign: int) -> "ConjClass":
        return cls(ELLIPTIC, None, trace, rotation_sign)

    @classmethod
    def hyperbolic(cls, trace: int) -> "ConjClass":
        return cls(HYPERBOLIC, None, trace, None)

    def __str__(self) -> str:
        if self.variant in (PARABOLIC, NEG_PARABOLIC):
            return f"{self.variant}({self.k})"
        if self.variant == ELLIPTIC:
            sign = "+" if self.rotation_sign > 0 else "-"
            return f"{self.variant}({self.trace}, {sign})"
        if self.variant == HYPERBOLIC:
            return f"{self.variant}({self.trace})"
        return self.variant

    def dump(self) -> dict:
        return {
            "variant": self.variant,
            "k": self.k,
            "trace": self.trace,
            "rotation_sign": self.rotation_sign,
        }


def _translation_length(N: Mat2) -> int:
    """For a rank one nilpotent N = M -/+ I, the k with N v' = k v."""
    rows = [r for r in N.rows() if r != [0, 0]]
    p, q = rows[0]
    g = content((q, -p))
    v = (q // g, -p // g)
    # Unimodular completion with det(v, v') = 1
    _, s, t = exgcd(v[0], v[1])
    w = N @ (-t, s)
    if v[0] != 0:
        return w[0] // v[0]
    return w[1] // v[1]


def sl2_conjugacy(M: Mat2) -> ConjClass:
    if M.det != 1:
        raise NotUnimodular(f"Conjugacy classes need det 1, got {M} with det {M.det}")
    if M == Mat2.identity():
        return ConjClass.identity()
    if M == -Mat2.identity():
        return ConjClass.neg_identity()
    t = M.trace
    if t == 2:
        return ConjClass.parabolic(_translation_length(Mat2(M.a - 1, M.b, M.c, M.d - 1)))
    if t == -2:
        return ConjClass.neg_parabolic(
            _translation_length(Mat2(M.a + 1, M.b, M.c, M.d + 1))
        )
    if abs(t) < 2:
        # x ∧ Mx is definite here, its sign on (1, 0) is the lower-left entry
        return ConjClass.elliptic(t, 1 if M.c > 0 else -1)
    return ConjClass.hyperbolic(t)


def find_conjugator(first: Mat2, second: Mat2, bound: int = 10) -> Optional[Mat2]:
    """Brute force search for P in SL2(Z) with P first P^-1 = second."""
    if first.trace != second.trace:
        return None
    for a, b, c in product(range(-bound, bound + 1), repeat=3):
        if a != 0:
            if (1 + b * c) % a != 0:
                continue
            candidates = [(1 + b * c) // a]
        elif b * c == -1:
            candidates = range(-bound, bound + 1)
        else:
            continue
        for d in candidates:
            P = Mat2(a, b, c, d)
            if P.det == 1 and P @ first == second @ P:
                return P
    return None
