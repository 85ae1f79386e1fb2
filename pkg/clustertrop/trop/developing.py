from fractions import Fraction
from threading import Lock
from typing import Dict, List, Optional, Sequence, Tuple

from loguru import logger

from clustertrop.linalg import Mat2, det2
from clustertrop.trop.fan import FanModel, TropException

Point = Tuple[Fraction, Fraction]


class NoStartCone(TropException):
    pass


class DevelopingMap:
    """Images of the fan rays in the plane, continued over all sheets.

    Ray i of sheet j has global index m = j * n + i and image image(m). The
    base chart sends the first two rays to (1, 0) and (0, 1), and consecutive
    images obey image(m + 1) = -image(m - 1) - a_i * image(m).
    """

    def __init__(self, model: FanModel) -> None:
        self.model = model
        self.n = model.n
        self._images: Dict[int, Tuple[int, int]] = {0: (1, 0), 1: (0, 1)}
        self._low, self._high = 0, 1
        self._lock = Lock()

    def image(self, m: int) -> Tuple[int, int]:
        with self._lock:
            while m > self._high:
                i = self._high % self.n
                a = self.model.self_int[i]
                prev, cur = self._images[self._high - 1], self._images[self._high]
                self._high += 1
                self._images[self._high] = (-prev[0] - a * cur[0], -prev[1] - a * cur[1])
            while m < self._low:
                i = self._low % self.n
                a = self.model.self_int[i]
                cur, nxt = self._images[self._low], self._images[self._low + 1]
                self._low -= 1
                self._images[self._low] = (-nxt[0] - a * cur[0], -nxt[1] - a * cur[1])
            return self._images[m]

    def sheet_images(self, sheet: int) -> List[Tuple[int, int]]:
        return [self.image(sheet * self.n + i) for i in range(self.n)]

    def monodromy_inverse(self) -> Mat2:
        return Mat2.from_columns(self.image(self.n), self.image(self.n + 1))

    def monodromy(self) -> Mat2:
        """mu in the basis (image(0), image(1))."""
        return self.monodromy_inverse().inverse()

    def cone_matrix(self, m: int) -> Mat2:
        """Linear map of the chart on cone m into developing coordinates."""
        i = m % self.n
        rays = self.model.rays
        chart = Mat2.from_columns(rays[i], rays[(i + 1) % self.n])
        return Mat2.from_columns(self.image(m), self.image(m + 1)) @ chart.inverse()

    def chart_cone(self, x: Sequence) -> int:
        """Index of the half-open chart cone [v_i, v_{i+1}) containing x."""
        rays = self.model.rays
        for i in range(self.n):
            if det2(rays[i], x) >= 0 and det2(x, rays[(i + 1) % self.n]) > 0:
                return i
        raise NoStartCone(f"{x} is not in any cone of the fan")

    def develop_point(self, x: Sequence, sheet: int = 0) -> Point:
        m = sheet * self.n + self.chart_cone(x)
        return tuple(self.cone_matrix(m) @ x)

    def chart_point(self, y: Sequence, m: int) -> Point:
        return tuple(self.cone_matrix(m).inverse() @ y)

    def locate(self, y: Sequence, sheet: int = 0) -> Optional[int]:
        """Global index m of the developed cone of `sheet` containing y."""
        for i in range(self.n):
            m = sheet * self.n + i
            if det2(self.image(m), y) >= 0 and det2(y, self.image(m + 1)) > 0:
                return m
        return None

    def position(self, y: Sequence, m: int) -> Tuple[int, Fraction]:
        """Cover order of the point y in developed cone m."""
        alpha = det2(y, self.image(m + 1))
        beta = det2(self.image(m), y)
        return m, Fraction(beta) / (alpha + beta)

    def dump(self, sheets: int = 1) -> List[dict]:
        rows = []
        for sheet in range(sheets):
            for i, (x, y) in enumerate(self.sheet_images(sheet)):
                rows.append({"sheet": sheet, "ray_index": i, "x": x, "y": y})
        return rows


def develop(model: FanModel, sheets: int = 2) -> DevelopingMap:
    developing = DevelopingMap(model)
    developing.image(sheets * model.n + 1)
    logger.debug(f"Developed {sheets} sheets: {developing.sheet_images(sheets - 1)}")
    return developing


def monodromy(model: FanModel) -> Mat2:
    return DevelopingMap(model).monodromy()
