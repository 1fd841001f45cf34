"""Generalized hulls of finite point sets.

A hull family pairs a set of translations with a set of linear maps; the
hull of A is the intersection of all images of the reference body under
family members that contain A.  Closed forms are implemented per family,
with a randomized membership oracle for cross-validation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog, minimize

from .bodies import (
    EMPTY,
    GEO_TOL,
    WHOLE_SPACE,
    Ball,
    BallIntersection,
    EmptySet,
    HalfBall,
    Polytope,
    PolyhedralCone,
    convex_hull,
)
from .matexp import matrix_exponential, skew_dim, skew_matrix

__all__ = [
    "BallHullOracle",
    "HullFamily",
    "HullResult",
    "FAMILY_PRESETS",
    "feasible_set",
    "generic_hull_membership",
    "hull_full_affine",
    "hull_linear_ball",
    "hull_translations_scalings",
    "k_hull_translations",
    "positive_hull",
    "spherical_hull_halfball",
]


@dataclass(frozen=True)
class HullFamily:
    """Transform family: translation set x linear-map set."""

    name: str
    translations: str  # "full" or "zero"
    linear: str  # identity | scalings | scalings_rotations | special_orthogonal | general_linear

    def param_count(self, d):
        n = d if self.translations == "full" else 0
        if self.linear == "scalings":
            n += 1
        elif self.linear == "special_orthogonal":
            n += skew_dim(d)
        elif self.linear == "scalings_rotations":
            n += 1 + skew_dim(d)
        elif self.linear == "general_linear":
            n += d * d
        return n

    def transform(self, params, d):
        """Decode a parameter vector into (translation x, linear map g)."""
        params = np.asarray(params, dtype=float)
        k = 0
        if self.translations == "full":
            x, k = params[:d], d
        else:
            x = np.zeros(d)
        if self.linear == "identity":
            g = np.eye(d)
        elif self.linear == "scalings":
            g = math.exp(params[k]) * np.eye(d)
        elif self.linear == "special_orthogonal":
            g = matrix_exponential(skew_matrix(params[k:], d))
        elif self.linear == "scalings_rotations":
            g = math.exp(params[k]) * matrix_exponential(
                skew_matrix(params[k + 1:], d))
        elif self.linear == "general_linear":
            g = matrix_exponential(params[k:].reshape(d, d))
        else:
            raise ValueError(f"unknown linear part {self.linear!r}")
        return x, g


FAMILY_PRESETS = {
    "identity": HullFamily("identity", "zero", "identity"),
    "k-hull": HullFamily("k-hull", "full", "identity"),
    "translations-scalings": HullFamily("translations-scalings", "full",
                                        "scalings"),
    "full-affine": HullFamily("full-affine", "full", "scalings_rotations"),
    "linear-ball": HullFamily("linear-ball", "zero", "general_linear"),
    "so-only": HullFamily("so-only", "zero", "special_orthogonal"),
}


@dataclass(frozen=True)
class HullResult:
    """Hull output: a body (or oracle) plus an exactness flag."""

    body: object
    exact: bool = True
    epsilon: float | None = None

    def contains(self, points):
        return self.body.contains(points)


class BallHullOracle:
    """Intersection of all radius-r balls whose centers cover the sample.

    Membership is decided through the farthest point of the feasible
    center set, located exactly in the plane by candidate enumeration
    (per-ball far points and pairwise circle intersections).
    """

    def __init__(self, sample, radius):
        self.sample = np.atleast_2d(np.asarray(sample, dtype=float))
        self.radius = float(radius)
        if self.sample.shape[1] != 2:
            raise ValueError("ball-hull membership implemented for d=2")
        self.center_set = BallIntersection(self.sample, self.radius)

    def _candidates(self, y):
        a, r = self.sample, self.radius
        cands = []
        for c in a:
            v = c - y
            nv = np.linalg.norm(v)
            direction = v / nv if nv > 1e-14 else np.array([1.0, 0.0])
            cands.append(c + r * direction)
        for i in range(len(a)):
            for j in range(i + 1, len(a)):
                cands.extend(_circle_intersections(a[i], a[j], r))
        cands = np.array(cands)
        mask = self.center_set.contains(cands)
        return cands[mask]

    def max_center_distance(self, y):
        """max over feasible centers x of |x - y| (exact in the plane)."""
        y = np.asarray(y, dtype=float)
        cands = self._candidates(y)
        if len(cands) == 0:
            raise ValueError("empty feasible center set")
        return float(np.max(np.linalg.norm(cands - y, axis=1)))

    def contains(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return np.array([self.max_center_distance(p)
                         <= self.radius + GEO_TOL for p in points])


def _circle_intersections(c1, c2, r):
    d = np.linalg.norm(c2 - c1)
    if d < 1e-14 or d > 2 * r + 1e-14:
        return []
    mid = 0.5 * (c1 + c2)
    h2 = r * r - 0.25 * d * d
    if h2 < 0:
        return []
    h = math.sqrt(max(h2, 0.0))
    perp = np.array([-(c2 - c1)[1], (c2 - c1)[0]]) / d
    return [mid + h * perp, mid - h * perp]


# -- translation hulls --------------------------------------------------------

def feasible_translations(body, sample):
    """{x : sample is contained in body + x}."""
    sample = np.atleast_2d(np.asarray(sample, dtype=float))
    if isinstance(body, Polytope):
        shift = np.max(sample @ body.facet_normals.T, axis=0)
        return Polytope.from_halfspaces(-body.facet_normals,
                                        body.facet_offsets - shift)
    if isinstance(body, Ball):
        x = BallIntersection(sample, body.radius)
        return EMPTY if x.is_empty() else x
    raise TypeError(f"unsupported body {type(body).__name__}")


def k_hull_translations(body, sample):
    """Intersection of all translates of the body containing the sample."""
    sample = np.atleast_2d(np.asarray(sample, dtype=float))
    feasible = feasible_translations(body, sample)
    if isinstance(feasible, EmptySet):
        return HullResult(WHOLE_SPACE)
    if isinstance(body, Polytope):
        mins = np.min(feasible.vertices @ body.facet_normals.T, axis=0)
        hull = Polytope.from_halfspaces(body.facet_normals,
                                        body.facet_offsets + mins)
        return HullResult(hull)
    if isinstance(body, Ball):
        return HullResult(BallHullOracle(sample, body.radius))
    raise TypeError(f"unsupported body {type(body).__name__}")


def hull_translations_scalings(body, sample):
    """Hull under all translations and positive scalings of the body.

    Equals the intersection of all translated supporting cones of the
    body containing the sample; for a polytope the cone catalogue is
    finite (one cone per face).
    """
    sample = np.atleast_2d(np.asarray(sample, dtype=float))
    if isinstance(body, Ball):
        # Smooth body: supporting cones are half-spaces, hull is conv(A).
        return HullResult(convex_hull(sample))
    if not isinstance(body, Polytope):
        raise TypeError(f"unsupported body {type(body).__name__}")
    if not np.all(body.contains(sample)):
        raise ValueError("sample must lie inside the body")
    normals, offsets = [], []
    for face in _face_normal_sets(body):
        u_rows = body.facet_normals[sorted(face)]
        m = np.max(sample @ u_rows.T, axis=0)
        for i, u in enumerate(u_rows):
            # Tightest translate of this face cone still covering the sample.
            res = linprog(u, A_ub=-u_rows, b_ub=-m,
                          bounds=[(None, None)] * body.dim, method="highs")
            if res.success:
                normals.append(u)
                offsets.append(float(res.fun))
    hull = Polytope.from_halfspaces(np.array(normals), np.array(offsets))
    return HullResult(hull)


def _face_normal_sets(body):
    """Active facet-index sets over the face lattice (d <= 3)."""
    slack = body.vertices @ body.facet_normals.T - body.facet_offsets
    vertex_active = [frozenset(np.nonzero(np.abs(row) <= 1e-7)[0])
                     for row in slack]
    faces = set(vertex_active)
    faces.update(frozenset([i]) for i in range(len(body.facet_normals)))
    for i in range(len(vertex_active)):
        for j in range(i + 1, len(vertex_active)):
            edge = vertex_active[i] & vertex_active[j]
            if edge:
                faces.add(edge)
    return faces


def hull_full_affine(sample):
    """Hull under all rigid motions with scalings: the classical hull."""
    return HullResult(convex_hull(sample))


def hull_linear_ball(sample):
    """Hull by all linear images of the unit ball: conv(A u -A)."""
    sample = np.atleast_2d(np.asarray(sample, dtype=float))
    return HullResult(convex_hull(np.vstack([sample, -sample])))


def positive_hull(sample):
    """Closed positive (conical) hull of the sample."""
    sample = np.atleast_2d(np.asarray(sample, dtype=float))
    d = sample.shape[1]
    norms = np.linalg.norm(sample, axis=1)
    dirs = sample[norms > GEO_TOL] / norms[norms > GEO_TOL, None]
    if len(dirs) == 0:
        return HullResult(PolyhedralCone(generators=np.zeros((1, d)), dim=d))
    if d == 2:
        return HullResult(_positive_hull_2d(dirs))
    return HullResult(_positive_hull_nd(dirs))


def _positive_hull_2d(dirs):
    ang = np.sort(np.arctan2(dirs[:, 1], dirs[:, 0]))
    gaps = np.diff(np.append(ang, ang[0] + 2 * math.pi))
    i = int(np.argmax(gaps))
    gap = gaps[i]
    if gap < math.pi - 1e-12:
        return PolyhedralCone(dim=2)  # directions positively span the plane
    lo = ang[(i + 1) % len(ang)]
    hi = ang[i]
    u = np.array([math.cos(lo), math.sin(lo)])
    w = np.array([math.cos(hi), math.sin(hi)])
    if abs(gap - math.pi) <= 1e-12:
        n = np.array([u[1], -u[0]])
        return PolyhedralCone(generators=np.vstack([u, w]),
                              normals=n[None], dim=2)
    if np.allclose(u, w):
        n1 = np.array([u[1], -u[0]])
        return PolyhedralCone(generators=u[None],
                              normals=np.vstack([n1, -n1]), dim=2)
    n1 = np.array([u[1], -u[0]])
    n2 = np.array([-w[1], w[0]])
    return PolyhedralCone(generators=np.vstack([u, w]),
                          normals=np.vstack([n1, n2]), dim=2)


def _positive_hull_nd(dirs):
    n, d = dirs.shape
    res = linprog(np.zeros(d), A_ub=-dirs, b_ub=-np.ones(n),
                  bounds=[(None, None)] * d, method="highs")
    if not res.success:
        # Not pointed; detect the full space, otherwise keep all generators.
        interior = linprog(np.zeros(n), A_eq=np.vstack([dirs.T, np.ones(n)]),
                           b_eq=np.append(np.zeros(d), 1.0),
                           bounds=[(1e-9, None)] * n, method="highs")
        if interior.success:
            return PolyhedralCone(dim=d)
        return PolyhedralCone(generators=dirs, dim=d)
    keep = []
    for i in range(n):
        others = np.delete(dirs, i, axis=0)
        feas = linprog(np.zeros(n - 1), A_eq=others.T, b_eq=dirs[i],
                       bounds=[(0, None)] * (n - 1), method="highs")
        if not feas.success:
            keep.append(i)
    if not keep:
        keep = [0]
    return PolyhedralCone(generators=dirs[keep], dim=d)


@dataclass(frozen=True)
class SphericalHull:
    """pos(A) clipped to the unit ball, with the induced spherical hull."""

    cone: PolyhedralCone
    radius: float = 1.0

    def contains(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        inside = np.linalg.norm(points, axis=1) <= self.radius + GEO_TOL
        return inside & self.cone.contains(points)

    def spherical_contains(self, units):
        return self.cone.contains(units)

    def arc(self):
        """Angular interval of the spherical part (plane only)."""
        if self.cone.dim != 2 or self.cone.generators is None:
            raise ValueError("arc available for pointed plane cones only")
        ang = np.arctan2(self.cone.generators[:, 1],
                         self.cone.generators[:, 0])
        return float(np.min(ang)), float(np.max(ang))


def spherical_hull_halfball(sample, half_ball=None):
    """Hull of points in the upper half-ball under rotations of it."""
    sample = np.atleast_2d(np.asarray(sample, dtype=float))
    hb = half_ball or HalfBall(1.0, dim=sample.shape[1])
    if not np.all(hb.contains(sample)):
        raise ValueError("sample must lie in the upper half-ball")
    cone = positive_hull(sample).body
    return HullResult(SphericalHull(cone, hb.radius))


# -- generic membership oracle ------------------------------------------------

def _containment_violation(body, points):
    """Max constraint excess of the points w.r.t. the body (<= 0 inside)."""
    points = np.atleast_2d(points)
    if isinstance(body, Polytope):
        return float(np.max(points @ body.facet_normals.T
                            - body.facet_offsets))
    if isinstance(body, Ball):
        return float(np.max(np.linalg.norm(points, axis=1) - body.radius))
    if isinstance(body, HalfBall):
        return float(max(np.max(np.linalg.norm(points, axis=1) - body.radius),
                         np.max(-(points @ body.axis))))
    raise TypeError(f"unsupported body {type(body).__name__}")


def generic_hull_membership(body, family, sample, query, budget=64, seed=0):
    """Search for a family member separating the query from the sample.

    Returns ("outside", witness_params) with an exactly verified witness,
    ("inside", None) when no witness is found within the budget, or
    ("unknown", None) when every local search failed to converge.
    Deterministic for a fixed seed; the lowest start index wins.
    """
    sample = np.atleast_2d(np.asarray(sample, dtype=float))
    query = np.asarray(query, dtype=float)
    d = sample.shape[1]
    if np.any(np.linalg.norm(sample - query, axis=1) <= GEO_TOL):
        return "inside", None
    nparams = family.param_count(d)
    rng = np.random.default_rng(seed)
    margin = 1e-6

    def objective(params):
        x, g = family.transform(params, d)
        try:
            ginv = np.linalg.inv(g)
        except np.linalg.LinAlgError:
            return 1e9
        back = sample @ ginv.T - x
        zback = ginv @ query - x
        viol_in = _containment_violation(body, back)
        z_margin = _containment_violation(body, zback[None])
        return max(viol_in, margin - z_margin)

    for start in range(budget):
        x0 = 0.4 * rng.standard_normal(nparams)
        res = minimize(objective, x0, method="Nelder-Mead",
                       options={"maxiter": 400 * max(nparams, 1),
                                "xatol": 1e-10, "fatol": 1e-12})
        x, g = family.transform(res.x, d)
        ginv = np.linalg.inv(g)
        back = sample @ ginv.T - x
        zback = ginv @ query - x
        if (_containment_violation(body, back) <= GEO_TOL
                and _containment_violation(body, zback[None]) > GEO_TOL):
            return "outside", res.x.copy()
    return "inside", None


def feasible_set(body, family, sample, n_samples=2000, seed=0, scale=0.7):
    """Feasible transform parameters covering the sample.

    Translations-only families return the exact feasible body; other
    families return a verified cloud of parameter vectors.
    """
    sample = np.atleast_2d(np.asarray(sample, dtype=float))
    d = sample.shape[1]
    if family.linear == "identity" and family.translations == "full":
        return feasible_translations(body, sample)
    rng = np.random.default_rng(seed)
    accepted = []
    for _ in range(n_samples):
        params = scale * rng.standard_normal(family.param_count(d))
        x, g = family.transform(params, d)
        back = sample @ np.linalg.inv(g).T - x
        if _containment_violation(body, back) <= GEO_TOL:
            accepted.append(params)
    return np.array(accepted)
