from collections import Counter, namedtuple
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from clustertrop.linalg import Mat2, det2, sl2_conjugacy
from clustertrop.trop.calibration import NON_POSITIVE, wrap_class
from clustertrop.trop.developing import DevelopingMap, NoStartCone
from clustertrop.trop.fan import FanModel, TropException

ESCAPES = "Escapes"
WRAPS_INFINITELY = "WrapsInfinitely"


class OriginLine(TropException):
    pass


class WrapInconsistency(TropException):
    pass


class NotPositive(TropException):
    pass


# kind is "cone" (escape inside developed cone `index`) or "ray" (parallel
# to developed ray `index`); direction is in chart coordinates
Escape = namedtuple("Escape", ["kind", "index", "direction"])

Crossing = namedtuple("Crossing", ["ray_index", "sheet", "point"])


class LineTrace:
    def __init__(
        self,
        start,
        crossings: List[Crossing],
        verdict: str,
        forward: Optional[Escape] = None,
        backward: Optional[Escape] = None,
        wrap_count: Optional[int] = None,
    ) -> None:
        self.start = start
        self.crossings = crossings
        self.verdict = verdict
        self.forward = forward
        self.backward = backward
        self.wrap_count = wrap_count

    def escapes(self) -> bool:
        return self.verdict == ESCAPES

    def hit_counts(self) -> Counter:
        return Counter(c.ray_index for c in self.crossings)

    def dump(self) -> dict:
        sheet, point, direction = self.start
        log = {
            "start": {"sheet": sheet, "point": list(point), "direction": list(direction)},
            "crossings": [
                {"ray_index": c.ray_index, "sheet": c.sheet, "point": list(c.point)}
                for c in self.crossings
            ],
            "verdict": self.verdict,
        }
        if self.escapes():
            log["forward"] = self.forward._asdict()
            log["backward"] = self.backward._asdict()
            log["wrap_count"] = self.wrap_count
        return log


def _as_developing(model: Union[FanModel, DevelopingMap]) -> DevelopingMap:
    if isinstance(model, DevelopingMap):
        return model
    return DevelopingMap(model)


def is_positive(model: Union[FanModel, DevelopingMap]) -> bool:
    developing = _as_developing(model)
    return wrap_class(sl2_conjugacy(developing.monodromy_inverse())) != NON_POSITIVE


def _walk(developing: DevelopingMap, m: int, p, d, limit: int):
    """Follows p + t d for t > 0 from developed cone m.

    Returns (escape or None when `limit` crossings are exceeded, crossings
    as (global ray index, point) in walking order).
    """
    sigma = det2(p, d)
    crossings = []
    while len(crossings) <= limit:
        if sigma > 0:
            r = developing.image(m + 1)
            turn = det2(r, d)
            if turn == 0:
                return Escape("ray", m + 1, developing.model.rays[(m + 1) % developing.n]), crossings
            if turn < 0:
                return Escape("cone", m, developing.chart_point(d, m)), crossings
            m += 1
        else:
            r = developing.image(m)
            turn = det2(d, r)
            if turn == 0:
                return Escape("ray", m, developing.model.rays[m % developing.n]), crossings
            if turn < 0:
                return Escape("cone", m, developing.chart_point(d, m)), crossings
        t = Fraction(det2(r, p), det2(d, r))
        p = (p[0] + t * d[0], p[1] + t * d[1])
        crossings.append((m, p))
        if sigma < 0:
            m -= 1
    return None, crossings


def _escape_position(developing: DevelopingMap, escape: Escape, d) -> Tuple[int, Fraction]:
    if escape.kind == "ray":
        return escape.index, Fraction(0)
    return developing.position(d, escape.index)


def _wrap_count(n: int, lower: Tuple[int, Fraction], upper: Tuple[int, Fraction]) -> int:
    """Largest k >= 0 with lower shifted by k sheets still at or before upper."""
    k = (upper[0] - lower[0]) // n
    while k >= 0 and (lower[0] + k * n, lower[1]) > upper:
        k -= 1
    return max(k, 0)


def _trace_from(
    developing: DevelopingMap, m: int, p, d, wrap_cutoff: int, start
) -> LineTrace:
    if det2(p, d) == 0:
        raise OriginLine(f"The line through {p} with direction {d} meets the origin")
    n = developing.n
    limit = wrap_cutoff * n
    minus_d = (-d[0], -d[1])
    forward, ahead = _walk(developing, m, p, d, limit)
    backward, behind = _walk(developing, m, p, minus_d, limit)
    crossings = [
        Crossing(index % n, index // n, point) for index, point in reversed(behind)
    ] + [Crossing(index % n, index // n, point) for index, point in ahead]

    if forward is None or backward is None:
        if is_positive(developing):
            raise WrapInconsistency(
                f"Line {start} passed {wrap_cutoff} circuits on a positive model"
            )
        logger.debug(f"Line {start} wraps past the cutoff of {wrap_cutoff} circuits")
        return LineTrace(start, crossings, WRAPS_INFINITELY)

    ahead_position = _escape_position(developing, forward, d)
    behind_position = _escape_position(developing, backward, minus_d)
    if det2(p, d) > 0:
        wrap_count = _wrap_count(n, behind_position, ahead_position)
    else:
        wrap_count = _wrap_count(n, ahead_position, behind_position)
    logger.debug(
        f"Line {start}: {len(crossings)} crossings, escapes {forward} / {backward}, wraps {wrap_count}"
    )
    return LineTrace(start, crossings, ESCAPES, forward, backward, wrap_count)


def trace_line(
    model: Union[FanModel, DevelopingMap],
    start: Tuple[int, Sequence, Sequence],
    wrap_cutoff: int = 50,
) -> LineTrace:
    """Walks the line p + t d of the developed sheet `sheet` in both directions.

    `start` is (sheet, point, direction) in developing coordinates.
    """
    developing = _as_developing(model)
    sheet, point, direction = start
    p = (Fraction(point[0]), Fraction(point[1]))
    d = (Fraction(direction[0]), Fraction(direction[1]))
    if p == (0, 0) or d == (0, 0):
        raise OriginLine(f"Degenerate line through {point} with direction {direction}")
    m = developing.locate(p, sheet)
    if m is None:
        raise NoStartCone(f"{point} is not covered by sheet {sheet}")
    return _trace_from(developing, m, p, d, wrap_cutoff, (sheet, p, d))


def random_line(
    developing: DevelopingMap, rng: np.random.Generator, bound: int = 5
) -> Tuple[int, Tuple, Tuple]:
    """Random line start on sheet 0, drawn in chart coordinates."""
    while True:
        x = tuple(int(c) for c in rng.integers(-bound, bound + 1, size=2))
        d = tuple(int(c) for c in rng.integers(-bound, bound + 1, size=2))
        if x != (0, 0) and det2(x, d) != 0:
            break
    cone = developing.cone_matrix(developing.chart_cone(x))
    return 0, cone @ x, cone @ d


def sample_lines(
    model: Union[FanModel, DevelopingMap],
    rng: np.random.Generator,
    count: int = 50,
    wrap_cutoff: int = 50,
) -> List[LineTrace]:
    developing = _as_developing(model)
    return [
        trace_line(developing, random_line(developing, rng), wrap_cutoff)
        for _ in range(count)
    ]


def _nu(developing: DevelopingMap, q: Sequence[int], clockwise: bool) -> Tuple[int, int]:
    if not is_positive(developing):
        raise NotPositive(f"nu is undefined on the non-positive model {developing.model}")
    if tuple(q) == (0, 0):
        return (0, 0)
    m = developing.chart_cone(q)
    x = developing.cone_matrix(m) @ q
    if clockwise:
        w = (x[1], -x[0])
        if det2(developing.image(m), x) == 0:
            m -= 1
    else:
        w = (-x[1], x[0])
    scale = 1 + sum(abs(det2(developing.image(j), w)) for j in range(m - 1, m + 3))
    p = (x[0] + Fraction(w[0], scale), x[1] + Fraction(w[1], scale))
    minus_x = (-x[0], -x[1])
    escape, _ = _walk(developing, m, p, minus_x, developing.n * 50)
    if escape is None:
        raise WrapInconsistency(f"The line towards {q} does not escape")
    image = developing.chart_point(minus_x, escape.index)
    return (int(image[0]), int(image[1]))


def nu_plus(model: Union[FanModel, DevelopingMap], q: Sequence[int]) -> Tuple[int, int]:
    """Backward end of the line heading out along q with the origin on its left."""
    return _nu(_as_developing(model), q, clockwise=True)


def nu_minus(model: Union[FanModel, DevelopingMap], q: Sequence[int]) -> Tuple[int, int]:
    """Backward end of the line heading out along q with the origin on its right."""
    return _nu(_as_developing(model), q, clockwise=False)


def nu_matrices(model: Union[FanModel, DevelopingMap]) -> Tuple[Mat2, Mat2]:
    """Developing-coordinate actions of nu_plus and nu_minus: -mu^-1 and -mu."""
    developing = _as_developing(model)
    return -developing.monodromy_inverse(), -developing.monodromy()
