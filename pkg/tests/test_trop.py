import numpy as np
import pytest

from clustertrop.linalg import Mat2, sl2_conjugacy
from clustertrop.seeds import FanSeedSpec
from clustertrop.trop import (
    ALL_WRAP,
    CONE_BETWEEN_EIGENRAYS,
    EMPTY,
    ESCAPES,
    FULL_PLANE,
    NO_WRAP,
    NON_POSITIVE,
    SINGLE_RAY_COMPLEMENT,
    WRAPS_INFINITELY,
    DevelopingMap,
    FanModel,
    OriginLine,
    TropException,
    ccw_sort,
    cluster_complex_region,
    develop,
    is_positive,
    normalize_fan,
    nu_matrices,
    nu_minus,
    nu_plus,
    sample_lines,
    trace_line,
    wrap_class,
)


def triangle_model(d1, d2, d3):
    return normalize_fan(FanSeedSpec.triangle(d1, d2, d3))


def test_cubic_model(cubic_model):
    assert cubic_model.rays == ((1, 0), (0, 1), (-1, -1), (0, -1))
    assert cubic_model.blowups == (2, 2, 2, 0)
    assert cubic_model.self_int == (-2, -1, -2, -1)
    assert cubic_model.charge() == 6
    assert not cubic_model.is_toric()


def test_normalize_merges_and_smooths():
    model = normalize_fan([((1, 0), 1), ((2, 0), 2), ((1, 2), 1)])
    assert model.rays[0] == (1, 0)
    assert model.blowups[0] == 3
    assert (1, 2) in model.rays
    assert model.charge() == 4


def test_normalize_pads_to_min_rays():
    model = normalize_fan([((1, 0), 1)], min_rays=6)
    assert model.n == 6
    assert model.charge() == 1


def test_fan_model_rejects_singular_cones():
    with pytest.raises(TropException):
        FanModel([(1, 0), (1, 2), (-1, -1)], [0, 0, 0])
    with pytest.raises(TropException):
        normalize_fan([((0, 0), 1)])


def test_ccw_sort():
    assert ccw_sort([(0, 1), (-1, 0), (1, 0), (0, -1)]) == [(0, 1), (-1, 0), (0, -1), (1, 0)]


def test_refine_keeps_monodromy(cubic_model):
    refined = cubic_model.refine(np.random.default_rng(0), count=3)
    assert refined.n == 7
    assert refined.charge() == 6
    assert DevelopingMap(refined).monodromy_inverse() == DevelopingMap(cubic_model).monodromy_inverse()


def test_cubic_developing_images(cubic_model):
    developing = develop(cubic_model, sheets=2)
    assert developing.sheet_images(0) == [(1, 0), (0, 1), (-1, 1), (-2, 1)]
    assert developing.image(4) == (-1, 0)
    assert developing.image(5) == (0, -1)
    assert developing.monodromy_inverse() == -Mat2.identity()
    assert len(developing.dump(2)) == 8


def test_developing_backwards(a2_model):
    developing = DevelopingMap(a2_model)
    # image(m - 1) = -image(m + 1) - a_m image(m)
    assert developing.image(-1) == (1, -1)
    assert developing.image(-1 + a2_model.n) == developing.monodromy_inverse() @ (1, -1)


@pytest.mark.parametrize(
    "triangle, m_inv",
    [
        ((2, 2, 2), Mat2(-1, 0, 0, -1)),
        ((1, 1, 0), Mat2(1, 1, -1, 0)),
        ((1, 0, 0), Mat2(1, 1, 0, 1)),
        ((3, 0, 0), Mat2(1, 3, 0, 1)),
        ((2, 1, 0), Mat2(1, 2, -1, -1)),
        ((4, 1, 0), Mat2(1, 4, -1, -3)),
        ((5, 5, 5), Mat2(-4, -15, 15, 56)),
    ],
)
def test_monodromy_inverse(triangle, m_inv):
    developing = DevelopingMap(triangle_model(*triangle))
    assert developing.monodromy_inverse() == m_inv
    assert developing.monodromy() == m_inv.inverse()


def test_develop_point_on_base_sheet(cubic_model):
    developing = DevelopingMap(cubic_model)
    assert developing.chart_cone((1, 0)) == 0
    assert developing.chart_cone((-1, 0)) == 1
    assert developing.develop_point((1, 1)) == (1, 1)
    assert developing.develop_point((1, 1), sheet=1) == (-1, -1)


def test_wrap_classes():
    assert wrap_class(sl2_conjugacy(Mat2(1, 2, 0, 1))) == NO_WRAP
    assert wrap_class(sl2_conjugacy(Mat2(1, -1, 0, 1))) == NON_POSITIVE
    assert wrap_class(sl2_conjugacy(Mat2(1, 1, -1, 0))) == NO_WRAP
    assert wrap_class(sl2_conjugacy(Mat2(0, -1, 1, 1))) == ALL_WRAP
    assert wrap_class(sl2_conjugacy(-Mat2.identity())) == ALL_WRAP
    assert wrap_class(sl2_conjugacy(Mat2(2, 1, 1, 1))) == NON_POSITIVE


def test_positivity():
    assert is_positive(triangle_model(2, 2, 2))
    assert is_positive(triangle_model(4, 1, 0))
    assert not is_positive(triangle_model(5, 5, 5))


def test_cubic_line_wraps_once(cubic_model):
    trace = trace_line(cubic_model, (0, (1, 1), (1, 0)))
    assert trace.verdict == ESCAPES
    assert trace.escapes()
    assert trace.wrap_count == 1
    assert trace.dump()["wrap_count"] == 1


def test_lines_escape_without_wrapping_on_a2(a2_model, config):
    for trace in sample_lines(a2_model, config.rng, count=10):
        assert trace.escapes()
        assert trace.wrap_count == 0


def test_lines_wrap_forever_on_negative_definite_model():
    trace = trace_line(triangle_model(5, 5, 5), (0, (1, 1), (1, 0)), wrap_cutoff=10)
    assert trace.verdict == WRAPS_INFINITELY
    assert not trace.escapes()
    assert "wrap_count" not in trace.dump()


def test_lines_through_the_origin(cubic_model):
    with pytest.raises(OriginLine):
        trace_line(cubic_model, (0, (1, 1), (2, 2)))
    with pytest.raises(OriginLine):
        trace_line(cubic_model, (0, (0, 0), (1, 0)))


def test_nu_plus_on_a2(a2_model):
    assert nu_plus(a2_model, (1, 0)) == (-1, 0)
    assert nu_plus(a2_model, (0, 0)) == (0, 0)


def test_nu_matrices(cubic_model):
    plus, minus = nu_matrices(cubic_model)
    assert plus == Mat2.identity()
    assert minus == Mat2.identity()


@pytest.mark.parametrize(
    "triangle, kind",
    [
        ((1, 1, 0), FULL_PLANE),
        ((1, 0, 0), FULL_PLANE),
        ((2, 2, 2), EMPTY),
        ((5, 5, 5), EMPTY),
        ((4, 1, 0), SINGLE_RAY_COMPLEMENT),
        ((5, 1, 0), CONE_BETWEEN_EIGENRAYS),
    ],
)
def test_cluster_complex_region(triangle, kind):
    assert cluster_complex_region(triangle_model(*triangle)).kind == kind


def test_single_ray_complement_ray():
    region = cluster_complex_region(triangle_model(4, 1, 0))
    assert region.rays == ((2, -1),)
    assert region.dump() == {"kind": SINGLE_RAY_COMPLEMENT, "rays": [["2", "-1"]]}


def test_m05_developing_sequence():
    model = normalize_fan([((1, 0), 1), ((0, 1), 1), ((-1, 0), 0), ((-1, -1), 0), ((0, -1), 0)])
    assert model.rays == ((1, 0), (0, 1), (-1, 0), (-1, -1), (0, -1))
    assert model.self_int == (-1,) * 5
    developing = DevelopingMap(model)
    assert [developing.image(m) for m in range(7)] == [
        (1, 0),
        (0, 1),
        (-1, 1),
        (-1, 0),
        (0, -1),
        (1, -1),
        (1, 0),
    ]
    assert developing.monodromy_inverse() == Mat2(1, 1, -1, 0)


@pytest.mark.parametrize("triangle", [(2, 2, 2), (2, 3, 3), (4, 1, 0), (1, 1, 0)])
def test_refinements_keep_charge_and_monodromy_class(triangle):
    model = triangle_model(*triangle)
    m_class = sl2_conjugacy(DevelopingMap(model).monodromy_inverse())
    rng = np.random.default_rng(sum(triangle))
    for _ in range(50):
        refined = model.refine(rng, count=int(rng.integers(1, 4)))
        assert refined.charge() == model.charge()
        assert sl2_conjugacy(DevelopingMap(refined).monodromy_inverse()) == m_class


def random_points(rng, count):
    points = []
    while len(points) < count:
        q = tuple(int(x) for x in rng.integers(-6, 7, size=2))
        if q != (0, 0):
            points.append(q)
    return points


@pytest.mark.parametrize("triangle", [(1, 1, 0), (2, 1, 0), (3, 1, 0), (2, 2, 2)])
def test_nu_plus_inverts_nu_minus(triangle):
    developing = DevelopingMap(triangle_model(*triangle))
    for q in random_points(np.random.default_rng(sum(triangle)), 100):
        assert nu_plus(developing, nu_minus(developing, q)) == q
        assert nu_minus(developing, nu_plus(developing, q)) == q


@pytest.mark.parametrize("triangle", [(1, 1, 0), (2, 1, 0), (3, 1, 0), (2, 2, 2)])
def test_nu_plus_develops_as_minus_mu_inverse(triangle):
    developing = DevelopingMap(triangle_model(*triangle))
    plus, _ = nu_matrices(developing)
    m_inv = developing.monodromy_inverse()
    # Sheets -1, 0 and 1 of the developed image of nu_plus(q)
    sheets = [m_inv.inverse(), Mat2.identity(), m_inv]
    for q in random_points(np.random.default_rng(10 + sum(triangle)), 100):
        expected = plus @ developing.develop_point(q)
        image = developing.develop_point(nu_plus(developing, q))
        assert tuple(expected) in [tuple(P @ image) for P in sheets]
