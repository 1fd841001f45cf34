import numpy as np
import pytest

from khull.bodies import (Ball, HalfBall, Polytope, WholeSpace, cube,
                          support_function)
from khull.hulls import (
    BallHullOracle,
    FAMILY_PRESETS,
    SphericalHull,
    feasible_set,
    feasible_translations,
    generic_hull_membership,
    hull_full_affine,
    hull_linear_ball,
    hull_translations_scalings,
    k_hull_translations,
    positive_hull,
    spherical_hull_halfball,
)

SQUARE = cube(2)


def gift_wrap(points):
    """Independent 2D convex hull (gift wrapping), for cross-checks."""
    points = np.asarray(points, dtype=float)
    start = min(range(len(points)), key=lambda i: (points[i][0],
                                                   points[i][1]))
    hull = [start]
    while True:
        cur = hull[-1]
        cand = (cur + 1) % len(points)
        for j in range(len(points)):
            if j == cur:
                continue
            a = points[cand] - points[cur]
            b = points[j] - points[cur]
            cross = a[0] * b[1] - a[1] * b[0]
            if cross < -1e-12 or (abs(cross) <= 1e-12 and
                                  np.linalg.norm(points[j] - points[cur]) >
                                  np.linalg.norm(points[cand] - points[cur])):
                cand = j
        if cand == start:
            break
        hull.append(cand)
    return points[hull]


# -- translations ---------------------------------------------------------------

def test_k_hull_square_two_points_is_segment():
    a = np.array([[-1.0, 0.0], [1.0, 0.0]])
    res = k_hull_translations(SQUARE, a)
    verts = res.body.vertices
    assert sorted(map(tuple, np.round(verts, 9).tolist())) == [
        (-1.0, 0.0), (1.0, 0.0)]


def test_k_hull_singleton():
    a = np.array([[0.3, -0.4]])
    res = k_hull_translations(SQUARE, a)
    assert np.allclose(res.body.vertices, a, atol=1e-9)


def test_k_hull_whole_space_sentinel():
    a = np.array([[-3.0, 0.0], [3.0, 0.0]])
    res = k_hull_translations(SQUARE, a)
    assert isinstance(res.body, WholeSpace)


def test_k_hull_ball_lens():
    a = np.array([[-0.5, 0.0], [0.5, 0.0]])
    res = k_hull_translations(Ball(1.0, 2), a)
    oracle = res.body
    assert isinstance(oracle, BallHullOracle)
    # The lens is B1(c+) cap B1(c-) with c the unit-circle intersections
    # around the two sample points.
    h = np.sqrt(1.0 - 0.25)
    lens_tops = np.array([[0.0, h - 1.0], [0.0, 1.0 - h]])
    inside = np.array([[0.0, 0.0], [0.45, 0.0], [0.0, 0.9 * (1 - h)]])
    outside = np.array([[0.0, 1.05 * (1 - h)], [0.6, 0.0], [0.0, -0.2]])
    assert oracle.contains(inside).all()
    assert not oracle.contains(outside).any()
    assert oracle.contains(lens_tops).all()


def test_k_hull_idempotent():
    rng = np.random.default_rng(0)
    for _ in range(10):
        a = 2 * rng.random((6, 2)) - 1
        res = k_hull_translations(SQUARE, a)
        body = res.body
        if isinstance(body, WholeSpace) or not isinstance(body, Polytope):
            continue
        # Re-hull a dense boundary sampling of the output.
        dense = _boundary_points(body, 200)
        res2 = k_hull_translations(SQUARE, dense)
        for u, h in zip(body.facet_normals, body.facet_offsets):
            h2 = support_function(res2.body, u)
            assert abs(h2 - h) < 1e-6


def _boundary_points(poly, n):
    verts = poly.vertices
    order = np.argsort(np.arctan2(*(verts - verts.mean(axis=0)).T[::-1]))
    verts = verts[order]
    pts = []
    for i in range(len(verts)):
        a, b = verts[i], verts[(i + 1) % len(verts)]
        for lam in np.linspace(0, 1, max(2, n // len(verts)), endpoint=False):
            pts.append(a + lam * (b - a))
    return np.array(pts)


def test_feasibility_invariance():
    # Feasible translations of A equal those of a dense sampling of hull(A).
    rng = np.random.default_rng(1)
    for _ in range(10):
        a = 1.6 * rng.random((5, 2)) - 0.8
        hull = k_hull_translations(SQUARE, a).body
        if not isinstance(hull, Polytope) or not hull.is_full_dimensional:
            continue
        x1 = feasible_translations(SQUARE, a)
        x2 = feasible_translations(SQUARE, _boundary_points(hull, 100))
        for u in np.vstack([np.eye(2), -np.eye(2)]):
            assert support_function(x1, u) == pytest.approx(
                support_function(x2, u), abs=1e-6)


# -- translations + scalings -----------------------------------------------------

def test_translations_scalings_box_example():
    a = np.array([[0.0, 0.0], [0.5, 0.5]])
    res = hull_translations_scalings(SQUARE, a)
    assert sorted(map(tuple, np.round(res.body.vertices, 9).tolist())) == [
        (0.0, 0.0), (0.0, 0.5), (0.5, 0.0), (0.5, 0.5)]


def test_translations_scalings_singleton():
    res = hull_translations_scalings(SQUARE, np.array([[0.0, 0.0]]))
    assert np.allclose(res.body.vertices, [[0.0, 0.0]], atol=1e-9)


def test_translations_scalings_smooth_body_gives_conv():
    rng = np.random.default_rng(2)
    a = 0.5 * rng.standard_normal((8, 2))
    res = hull_translations_scalings(Ball(1.0, 2), a)
    assert res.body == Polytope.from_vertices(a)


# -- full affine and linear-ball --------------------------------------------------

def test_full_affine_matches_gift_wrapping():
    rng = np.random.default_rng(3)
    for _ in range(20):
        a = 2 * rng.random((20, 2)) - 1
        got = hull_full_affine(a).body
        want = Polytope.from_vertices(gift_wrap(a))
        assert got == want


def test_full_affine_collinear():
    a = np.array([[0.0, 0.0], [1.0, 1.0], [0.5, 0.5]])
    seg = hull_full_affine(a).body
    assert len(seg.vertices) == 2


def test_linear_ball_examples():
    seg = hull_linear_ball(np.array([[1.0, 0.0]])).body
    assert sorted(map(tuple, np.round(seg.vertices, 9).tolist())) == [
        (-1.0, 0.0), (1.0, 0.0)]
    quad = hull_linear_ball(np.array([[0.5, 0.0], [0.0, 0.5]])).body
    assert len(quad.vertices) == 4


def test_linear_ball_is_symmetric_hull():
    rng = np.random.default_rng(4)
    for _ in range(50):
        a = rng.standard_normal((6, 2)) * 0.5
        got = hull_linear_ball(a).body
        want = Polytope.from_vertices(np.vstack([a, -a]))
        assert got == want


# -- positive and spherical hulls --------------------------------------------------

def test_positive_hull_quadrant():
    cone = positive_hull(np.array([[1.0, 0.0], [0.0, 1.0]])).body
    assert bool(cone.contains(np.array([[2.0, 3.0]]))[0])
    assert not bool(cone.contains(np.array([[-0.1, 1.0]]))[0])


def test_positive_hull_origin_only():
    cone = positive_hull(np.array([[0.0, 0.0]])).body
    assert bool(cone.contains(np.zeros((1, 2)))[0])
    assert not bool(cone.contains(np.array([[1.0, 0.0]]))[0])


def test_positive_hull_spanning():
    cone = positive_hull(np.vstack([np.eye(2), -np.eye(2)])).body
    assert cone.is_whole_space()


def test_positive_hull_matches_angular_brute_force():
    rng = np.random.default_rng(5)
    for _ in range(30):
        a = rng.standard_normal((5, 2))
        a[:, 0] = np.abs(a[:, 0])  # keep the set pointed
        cone = positive_hull(a).body
        queries = rng.standard_normal((100, 2))
        ang = np.arctan2(a[:, 1], a[:, 0])
        lo, hi = ang.min(), ang.max()
        qa = np.arctan2(queries[:, 1], queries[:, 0])
        want = (qa >= lo - 1e-12) & (qa <= hi + 1e-12)
        got = cone.contains(queries)
        assert np.array_equal(got, want)


def test_positive_hull_3d():
    gens = np.array([[1.0, 0, 0], [0, 1.0, 0], [0, 0, 1.0]])
    cone = positive_hull(gens).body
    assert bool(cone.contains(np.array([[1.0, 2.0, 3.0]]))[0])
    assert not bool(cone.contains(np.array([[-1.0, 1.0, 1.0]]))[0])
    full = positive_hull(np.vstack([np.eye(3), -np.eye(3)])).body
    assert full.is_whole_space()


def test_spherical_hull_examples():
    seg = spherical_hull_halfball(np.array([[1.0, 0.0]])).body
    assert bool(seg.contains(np.array([[0.5, 0.0]]))[0])
    assert not bool(seg.contains(np.array([[0.5, 0.1]]))[0])
    assert not bool(seg.contains(np.array([[1.1, 0.0]]))[0])

    s = np.sqrt(2) / 2
    arc_hull = spherical_hull_halfball(np.array([[1.0, 0.0], [s, s]])).body
    lo, hi = arc_hull.arc()
    assert lo == pytest.approx(0.0, abs=1e-12)
    assert hi == pytest.approx(np.pi / 4, abs=1e-12)


def test_spherical_hull_quarter_disk():
    hull = spherical_hull_halfball(
        np.array([[0.9, 0.0001], [0.0001, 0.9]])).body
    assert bool(hull.contains(np.array([[0.3, 0.3]]))[0])
    assert not bool(hull.contains(np.array([[0.3, -0.1]]))[0])


def test_spherical_hull_rejects_outside_half_ball():
    with pytest.raises(ValueError):
        spherical_hull_halfball(np.array([[-0.5, 0.5]]),
                                HalfBall(1.0, dim=2))


# -- sandwich and monotonicity ------------------------------------------------------

def test_sandwich_conv_subset_hull_subset_K():
    rng = np.random.default_rng(6)
    for _ in range(20):
        a = 1.4 * rng.random((6, 2)) - 0.7
        conv = hull_full_affine(a).body
        for res in [k_hull_translations(SQUARE, a),
                    hull_translations_scalings(SQUARE, a)]:
            body = res.body
            assert body.contains(a).all()
            # conv(A) inside hull: check conv vertices.
            assert body.contains(conv.vertices).all()
            # hull inside K.
            if isinstance(body, Polytope):
                assert SQUARE.contains(body.vertices).all()


def test_monotonicity_in_family():
    # identity-only -> translations -> translations+scalings -> full affine
    # yields a decreasing chain of hulls.
    rng = np.random.default_rng(7)
    for _ in range(50):
        a = 1.4 * rng.random((5, 2)) - 0.7
        h_trans = k_hull_translations(SQUARE, a).body
        h_scal = hull_translations_scalings(SQUARE, a).body
        h_conv = hull_full_affine(a).body
        queries = 2.2 * rng.random((100, 2)) - 1.1
        in_trans = h_trans.contains(queries)
        in_scal = h_scal.contains(queries)
        in_conv = h_conv.contains(queries)
        # Larger family, smaller hull: conv subset scalings subset trans
        # subset K (identity-only hull is K itself when A is in K).
        assert not np.any(in_conv & ~in_scal)
        assert not np.any(in_scal & ~in_trans)
        assert not np.any(in_trans & ~SQUARE.contains(queries))


# -- generic membership oracle -------------------------------------------------------

def test_generic_membership_trivial_inside():
    fam = FAMILY_PRESETS["full-affine"]
    a = np.array([[0.0, 0.0], [0.6, 0.0], [0.0, 0.6]])
    status, _ = generic_hull_membership(SQUARE, fam, a, a.mean(axis=0),
                                        budget=4)
    assert status == "inside"
    status, _ = generic_hull_membership(SQUARE, fam, a, a[1], budget=4)
    assert status == "inside"


def test_generic_membership_finds_ellipsoid_witness():
    fam = FAMILY_PRESETS["linear-ball"]
    a = np.array([[0.5, 0.0], [0.0, 0.5]])
    status, witness = generic_hull_membership(Ball(1.0, 2), fam, a,
                                              np.array([0.45, 0.45]),
                                              budget=32, seed=0)
    assert status == "outside"
    assert witness is not None


def test_generic_oracle_agrees_with_linear_ball_closed_form():
    fam = FAMILY_PRESETS["linear-ball"]
    rng = np.random.default_rng(8)
    a = 0.5 * rng.standard_normal((4, 2))
    closed = hull_linear_ball(a).body
    queries = 1.5 * rng.standard_normal((60, 2))
    for q in queries:
        inside_closed = bool(closed.contains(q[None])[0])
        budget = 6 if inside_closed else 48
        status, witness = generic_hull_membership(Ball(1.0, 2), fam, a, q,
                                                  budget=budget, seed=1)
        if inside_closed:
            assert status == "inside", f"false witness for {q}"
        else:
            # Points well outside must be separated.
            margin = _polytope_margin(closed, q)
            if margin > 1e-3:
                assert status == "outside", f"missed witness for {q}"


def _polytope_margin(poly, q):
    return float(np.max(poly.facet_normals @ q - poly.facet_offsets))


def test_feasible_set_translations_exact():
    a = np.array([[-1.0, 0.0], [1.0, 0.0]])
    x = feasible_set(SQUARE, FAMILY_PRESETS["k-hull"], a)
    # X = {0} x [-1, 1]
    assert sorted(map(tuple, np.round(x.vertices, 9).tolist())) == [
        (0.0, -1.0), (0.0, 1.0)]


def test_feasible_set_contains_zero_when_A_in_K():
    x = feasible_set(SQUARE, FAMILY_PRESETS["k-hull"], SQUARE.vertices)
    assert bool(x.contains(np.zeros((1, 2)))[0])


def test_feasible_set_cloud_verified():
    fam = FAMILY_PRESETS["full-affine"]
    a = 0.4 * np.random.default_rng(9).standard_normal((4, 2))
    cloud = feasible_set(SQUARE, fam, a, n_samples=200, seed=2)
    assert len(cloud) > 0
    for params in cloud[:20]:
        x, g = fam.transform(params, 2)
        back = a @ np.linalg.inv(g).T - x
        assert SQUARE.contains(back).all()
