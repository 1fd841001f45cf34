import numpy as np
import pytest

from khull.bodies import (
    Ball,
    EMPTY,
    EmptySet,
    HalfBall,
    HalfSpace,
    PolyhedralCone,
    Polytope,
    WHOLE_SPACE,
    body_from_json,
    body_to_json,
    convex_hull,
    cross_polytope,
    cube,
    minkowski_difference,
    normal_cone,
    polar,
    polar_cone,
    support_function,
    supporting_cone,
)

SQUARE = cube(2)


def test_support_unit_ball():
    assert support_function(Ball(1.0, 2), np.array([0.0, 1.0])) == pytest.approx(1.0)


def test_support_square_diagonal():
    u = np.array([1.0, 1.0]) / np.sqrt(2)
    assert support_function(SQUARE, u) == pytest.approx(np.sqrt(2))


def test_support_polytope_brute_force():
    verts = np.array([[2.0, 0.0], [0.0, 1.0], [-1.0, -1.0]])
    p = Polytope.from_vertices(verts)
    u = np.array([1.0, 0.0])
    assert support_function(p, u) == pytest.approx(2.0)
    rng = np.random.default_rng(0)
    for _ in range(50):
        u = rng.standard_normal(2)
        assert support_function(p, u) == pytest.approx(np.max(verts @ u))


def test_polar_ball():
    b = polar(Ball(4.0, 2))
    assert isinstance(b, Ball)
    assert b.radius == pytest.approx(0.25)


def test_polar_square_is_cross_polytope():
    assert polar(SQUARE) == cross_polytope(2)


def test_polar_involution():
    rng = np.random.default_rng(1)
    for _ in range(20):
        pts = rng.standard_normal((8, 2)) + np.array([0.05, -0.02])
        p = Polytope.from_vertices(np.vstack([pts, -pts]))  # origin interior
        assert polar(polar(p)) == p


def test_polar_segment_is_half_space():
    rng = np.random.default_rng(2)
    for _ in range(100):
        t = 0.1 + 9.9 * rng.random()
        u = rng.standard_normal(2)
        u /= np.linalg.norm(u)
        seg = Polytope.from_vertices(np.array([np.zeros(2), u / t]))
        h = polar(seg)
        assert isinstance(h, HalfSpace)
        assert np.allclose(h.normal, u, atol=1e-9)
        assert h.offset == pytest.approx(t, abs=1e-9)


def test_polar_rejects_origin_outside():
    p = Polytope.from_vertices(np.array([[1.0, 1.0], [2.0, 1.0], [1.0, 2.0]]))
    with pytest.raises(ValueError):
        polar(p)


def test_supporting_cone_ball_boundary():
    c = supporting_cone(Ball(1.0, 2), np.array([1.0, 0.0]))
    assert isinstance(c, HalfSpace)
    assert np.allclose(c.normal, [1.0, 0.0])
    assert c.offset == 0.0


def test_supporting_cone_square_corner():
    c = supporting_cone(SQUARE, np.array([1.0, 1.0]))
    assert sorted(map(tuple, np.round(c.normals, 9).tolist())) == [
        (0.0, 1.0), (1.0, 0.0)]
    assert bool(c.contains(np.array([[-1.0, -2.0]]))[0])
    assert not bool(c.contains(np.array([[0.5, -2.0]]))[0])


def test_supporting_cone_interior_is_whole_space():
    c = supporting_cone(SQUARE, np.zeros(2))
    assert c.is_whole_space()


def test_normal_cone_examples():
    ray = normal_cone(Ball(1.0, 2), np.array([0.0, 1.0]))
    assert np.allclose(ray.generators, [[0.0, 1.0]])
    corner = normal_cone(SQUARE, np.array([1.0, 1.0]))
    assert len(corner.generators) == 2
    facet = normal_cone(SQUARE, np.array([1.0, 0.0]))
    assert np.allclose(facet.generators, [[1.0, 0.0]])


def test_normal_cone_is_polar_of_supporting_cone():
    for v in SQUARE.vertices:
        s = supporting_cone(SQUARE, v)
        n = normal_cone(SQUARE, v)
        dual = polar_cone(n)
        rng = np.random.default_rng(3)
        pts = rng.standard_normal((200, 2))
        assert np.array_equal(s.contains(pts), dual.contains(pts))


def test_minkowski_difference_square_ball():
    d = minkowski_difference(SQUARE, Ball(0.5, 2))
    assert d == cube(2, 0.5)


def test_minkowski_difference_singleton():
    a = np.array([[0.25, -0.5]])
    d = minkowski_difference(SQUARE, a)
    rng = np.random.default_rng(4)
    for _ in range(50):
        u = rng.standard_normal(2)
        assert support_function(d, u) == pytest.approx(
            support_function(SQUARE, u) - float(a[0] @ u))


def test_minkowski_difference_empty():
    d = minkowski_difference(SQUARE, np.array([[-3.0, 0.0], [3.0, 0.0]]))
    assert isinstance(d, EmptySet)


def test_half_ball_membership_and_support():
    hb = HalfBall(1.0, dim=2)
    assert bool(hb.contains(np.array([[0.5, 0.5]]))[0])
    assert not bool(hb.contains(np.array([[-0.1, 0.5]]))[0])
    assert support_function(hb, np.array([1.0, 0.0])) == pytest.approx(1.0)
    assert support_function(hb, np.array([-1.0, 0.0])) == pytest.approx(0.0)
    assert support_function(hb, np.array([-1.0, 1.0])) == pytest.approx(1.0)


def test_unbounded_support_sentinel():
    h = HalfSpace(np.array([1.0, 0.0]), 2.0)
    assert support_function(h, np.array([1.0, 0.0])) == pytest.approx(2.0)
    assert support_function(h, np.array([0.0, 1.0])) == np.inf
    cone = PolyhedralCone(generators=np.array([[1.0, 0.0]]), dim=2)
    assert support_function(cone, np.array([1.0, 0.0])) == np.inf
    assert support_function(cone, np.array([-1.0, 1.0])) == 0.0


def test_sentinels():
    pts = np.array([[0.0, 0.0], [100.0, -3.0]])
    assert not EMPTY.contains(pts).any()
    assert WHOLE_SPACE.contains(pts).all()


def test_json_round_trip():
    for body in [SQUARE, Ball(2.0, 3), HalfBall(1.5, np.array([0.0, 1.0]), 2),
                 HalfSpace(np.array([0.0, 1.0]), 3.0),
                 PolyhedralCone(generators=np.eye(2), dim=2)]:
        doc = body_to_json(body)
        back = body_from_json(doc)
        assert type(back) is type(body)
        rng = np.random.default_rng(5)
        pts = 3.0 * rng.standard_normal((100, getattr(body, "dim", 2)))
        assert np.array_equal(body.contains(pts), back.contains(pts))


def test_from_halfspaces_matches_from_vertices():
    rng = np.random.default_rng(6)
    for _ in range(20):
        pts = rng.standard_normal((10, 2))
        p = Polytope.from_vertices(pts)
        q = Polytope.from_halfspaces(p.facet_normals, p.facet_offsets)
        assert p == q


def test_convex_hull_collinear():
    pts = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [0.5, 0.5]])
    seg = convex_hull(pts)
    assert len(seg.vertices) == 2
    assert not seg.is_full_dimensional
