from functools import lru_cache
from typing import Dict

from loguru import logger

from clustertrop.linalg import ConjClass, sl2_conjugacy
from clustertrop.linalg.conjugacy import (
    ELLIPTIC,
    HYPERBOLIC,
    IDENTITY,
    NEG_IDENTITY,
    NEG_PARABOLIC,
    PARABOLIC,
)
from clustertrop.seeds import FanSeedSpec
from clustertrop.trop.developing import DevelopingMap
from clustertrop.trop.fan import normalize_fan

NO_WRAP = "no-wrap"
ALL_WRAP = "all-wrap"
SOME_WRAP = "some-wrap"
NON_POSITIVE = "non-positive"

# Triangles (d1, d2, d3) whose classes fix the branch signs
PARABOLIC_TRIANGLE = (1, 0, 0)
ELLIPTIC_TRIANGLES = {1: (1, 1, 0), 0: (2, 1, 0), -1: (3, 1, 0)}
NEG_PARABOLIC_TRIANGLE = (2, 2, 3)


def triangle_monodromy_class(d1: int, d2: int, d3: int) -> ConjClass:
    model = normalize_fan(FanSeedSpec.triangle(d1, d2, d3))
    return sl2_conjugacy(DevelopingMap(model).monodromy_inverse())


@lru_cache(maxsize=None)
def calibration_table() -> Dict[str, object]:
    """Signs of the monodromy classes of the canonical triangles.

    `parabolic` is the sign of k for the I_k family, `elliptic[t]` the
    rotation sign of the unstarred trace t class, and `neg_parabolic` the
    sign of k for the I_k^* family.
    """
    parabolic = triangle_monodromy_class(*PARABOLIC_TRIANGLE)
    neg_parabolic = triangle_monodromy_class(*NEG_PARABOLIC_TRIANGLE)
    elliptic = {
        trace: triangle_monodromy_class(*triangle).rotation_sign
        for trace, triangle in ELLIPTIC_TRIANGLES.items()
    }
    if parabolic.variant != PARABOLIC or neg_parabolic.variant != NEG_PARABOLIC:
        raise ValueError(f"Calibration triangles gave {parabolic} and {neg_parabolic}")
    table = {
        "parabolic": 1 if parabolic.k > 0 else -1,
        "neg_parabolic": 1 if neg_parabolic.k > 0 else -1,
        "elliptic": elliptic,
    }
    logger.debug(f"Monodromy calibration: {table}")
    return table


def wrap_class(cls: ConjClass) -> str:
    """Line behaviour predicted by the class of the inverse monodromy."""
    table = calibration_table()
    if cls.variant == IDENTITY:
        return NO_WRAP
    if cls.variant == NEG_IDENTITY:
        return ALL_WRAP
    if cls.variant == PARABOLIC:
        return NO_WRAP if (cls.k > 0) == (table["parabolic"] > 0) else NON_POSITIVE
    if cls.variant == NEG_PARABOLIC:
        return ALL_WRAP if (cls.k > 0) == (table["neg_parabolic"] > 0) else SOME_WRAP
    if cls.variant == ELLIPTIC:
        return NO_WRAP if cls.rotation_sign == table["elliptic"][cls.trace] else ALL_WRAP
    if cls.variant == HYPERBOLIC:
        return NON_POSITIVE if cls.trace > 2 else SOME_WRAP
    raise ValueError(f"Unknown conjugacy class {cls}")
