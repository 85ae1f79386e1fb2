from collections import namedtuple
from typing import Union

from sympy import Rational, sqrt

from clustertrop.linalg import det2, primitive, sl2_conjugacy
from clustertrop.trop.calibration import ALL_WRAP, NO_WRAP, NON_POSITIVE, wrap_class
from clustertrop.trop.developing import DevelopingMap
from clustertrop.trop.fan import FanModel

FULL_PLANE = "FullPlane"
CONE_BETWEEN_EIGENRAYS = "ConeBetweenEigenrays"
SINGLE_RAY_COMPLEMENT = "SingleRayComplement"
EMPTY = "Empty"


class Region(namedtuple("Region", ["kind", "rays"])):
    """Region of the plane in developing coordinates.

    `rays` holds the bounding eigenrays (sympy vectors, possibly irrational)
    of a cone, the removed ray of a single ray complement, or nothing.
    """

    __slots__ = ()

    def dump(self) -> dict:
        return {"kind": self.kind, "rays": [[str(x) for x in ray] for ray in self.rays]}


def _eigenvector(M, eigenvalue):
    if M.b != 0:
        return (M.b, eigenvalue - M.a)
    return (eigenvalue - M.d, M.c)


def _first_positive(v):
    first = v[0] if v[0] != 0 else v[1]
    return v if first > 0 else (-v[0], -v[1])


def cluster_complex_region(model: Union[FanModel, DevelopingMap]) -> Region:
    developing = model if isinstance(model, DevelopingMap) else DevelopingMap(model)
    m_inv = developing.monodromy_inverse()
    behaviour = wrap_class(sl2_conjugacy(m_inv))
    if behaviour == NO_WRAP:
        return Region(FULL_PLANE, ())
    if behaviour in (ALL_WRAP, NON_POSITIVE):
        return Region(EMPTY, ())

    nu = -m_inv
    if nu.trace == 2:
        # Fixed line of the parabolic nu_plus
        direction = (nu.b, 1 - nu.a) if (nu.b, 1 - nu.a) != (0, 0) else (1 - nu.d, nu.c)
        return Region(SINGLE_RAY_COMPLEMENT, (_first_positive(primitive(direction)),))

    t = Rational(nu.trace)
    small = (t - sqrt(t ** 2 - 4)) / 2
    large = (t + sqrt(t ** 2 - 4)) / 2
    first = _first_positive(_eigenvector(nu, small))
    second = _eigenvector(nu, large)
    if det2(first, second) < 0:
        second = (-second[0], -second[1])
    return Region(CONE_BETWEEN_EIGENRAYS, (first, second))
