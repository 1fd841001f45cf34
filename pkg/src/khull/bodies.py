"""Convex bodies in low dimension: support functions, polars, cones, erosion.

Supported representations are polytopes (with mutually consistent V- and
H-reps), Euclidean balls and half-balls centered at the origin, half-spaces,
and polyhedral cones.  All operations are pure functions on immutable values.
Equality and containment tests use the single geometric tolerance GEO_TOL.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, QhullError

GEO_TOL = 1e-9

__all__ = [
    "GEO_TOL",
    "Ball",
    "BallIntersection",
    "EMPTY",
    "EmptySet",
    "HalfBall",
    "HalfSpace",
    "PolyhedralCone",
    "Polytope",
    "WHOLE_SPACE",
    "WholeSpace",
    "body_from_json",
    "body_to_json",
    "convex_hull",
    "cross_polytope",
    "cube",
    "minkowski_difference",
    "normal_cone",
    "polar",
    "polar_cone",
    "support_function",
    "supporting_cone",
    "unit_direction",
]


def unit_direction(u):
    """Normalize u to a unit vector; rejects near-zero input."""
    u = np.asarray(u, dtype=float)
    n = np.linalg.norm(u)
    if n < 1e-12:
        raise ValueError("direction must be nonzero")
    return u / n


class EmptySet:
    """The empty set (a valid Minkowski-difference result)."""

    def contains(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return np.zeros(len(points), dtype=bool)

    def __repr__(self):
        return "EmptySet()"


class WholeSpace:
    """Sentinel for hulls taken over an empty family of transforms."""

    def contains(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return np.ones(len(points), dtype=bool)

    def __repr__(self):
        return "WholeSpace()"


EMPTY = EmptySet()
WHOLE_SPACE = WholeSpace()


def _affine_basis(vertices):
    """Orthonormal basis of the affine hull of the rows, and its center."""
    center = vertices.mean(axis=0)
    centered = vertices - center
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    rank = int(np.sum(s > 1e-9 * max(1.0, s[0] if len(s) else 1.0)))
    return center, vt[:rank]


def _extreme_points(vertices):
    """Extreme points of conv(rows), handling affinely degenerate sets."""
    # Dedupe on a rounded key but keep the original coordinates.
    _, idx = np.unique(np.round(vertices / GEO_TOL) * GEO_TOL, axis=0,
                       return_index=True)
    vertices = vertices[np.sort(idx)]
    if len(vertices) <= 1:
        return vertices
    center, basis = _affine_basis(vertices)
    k = len(basis)
    if k == 0:
        return vertices[:1]
    proj = (vertices - center) @ basis.T
    if k == 1:
        lo, hi = np.argmin(proj[:, 0]), np.argmax(proj[:, 0])
        return vertices[[lo, hi]] if lo != hi else vertices[[lo]]
    hull = ConvexHull(proj)
    return vertices[hull.vertices]


@dataclass(frozen=True)
class Polytope:
    """Compact polytope with vertex list and (for full-dimensional bodies)
    a facet list of (unit outer normal, offset) pairs.

    Lower-dimensional polytopes (segments, polygons in 3-space) carry a
    V-rep only; facet queries on them raise.
    """

    vertices: np.ndarray
    facet_normals: np.ndarray | None = None
    facet_offsets: np.ndarray | None = None

    @property
    def dim(self):
        return self.vertices.shape[1]

    @property
    def is_full_dimensional(self):
        return self.facet_normals is not None

    @staticmethod
    def from_vertices(vertices):
        vertices = np.atleast_2d(np.asarray(vertices, dtype=float))
        verts = _extreme_points(vertices)
        d = verts.shape[1]
        if len(verts) <= d:
            return Polytope(verts, None, None)
        try:
            hull = ConvexHull(verts)
        except QhullError:
            return Polytope(verts, None, None)
        eqs = hull.equations  # rows (a, b) with a.x + b <= 0
        normals = eqs[:, :-1]
        offsets = -eqs[:, -1]
        scale = np.linalg.norm(normals, axis=1)
        normals, offsets = normals / scale[:, None], offsets / scale
        normals, offsets = _dedupe_facets(normals, offsets)
        return Polytope(verts[hull.vertices] if d > 1 else verts,
                        normals, offsets)

    @staticmethod
    def from_halfspaces(normals, offsets):
        """Vertex enumeration by d-subset hyperplane intersection (d <= 3).

        Returns EMPTY when the system is infeasible.  The input is assumed
        to describe a bounded set.
        """
        normals = np.atleast_2d(np.asarray(normals, dtype=float))
        offsets = np.asarray(offsets, dtype=float)
        scale = np.linalg.norm(normals, axis=1)
        normals, offsets = normals / scale[:, None], offsets / scale
        d = normals.shape[1]
        if d > 3:
            raise ValueError("vertex enumeration supported for d <= 3 only")
        points = []
        for idx in itertools.combinations(range(len(normals)), d):
            a = normals[list(idx)]
            if abs(np.linalg.det(a)) < 1e-10:
                continue
            x = np.linalg.solve(a, offsets[list(idx)])
            if np.all(normals @ x <= offsets + 1e-7):
                points.append(x)
        if not points:
            # Either empty or a single point defined by > d tight planes;
            # settle with an LP feasibility check.
            res = linprog(np.zeros(d), A_ub=normals, b_ub=offsets,
                          bounds=[(None, None)] * d, method="highs")
            if res.status == 2:
                return EMPTY
            if res.success:
                return Polytope(np.atleast_2d(res.x), None, None)
            return EMPTY
        verts = _extreme_points(np.array(points))
        if len(verts) > d:
            return Polytope.from_vertices(verts)
        return Polytope(verts, None, None)

    def contains(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if self.facet_normals is not None:
            return np.all(points @ self.facet_normals.T
                          <= self.facet_offsets + GEO_TOL, axis=1)
        return np.array([_in_convex_hull(p, self.vertices) for p in points])

    def facet_vertex_sets(self):
        """Indices of vertices lying on each facet."""
        slack = self.vertices @ self.facet_normals.T - self.facet_offsets
        return [np.nonzero(np.abs(slack[:, i]) <= 1e-7)[0]
                for i in range(len(self.facet_normals))]

    def __eq__(self, other):
        if not isinstance(other, Polytope):
            return NotImplemented
        if self.vertices.shape != other.vertices.shape:
            return False
        a = self.vertices[np.lexsort(self.vertices.T)]
        b = other.vertices[np.lexsort(other.vertices.T)]
        return bool(np.allclose(a, b, atol=1e-8))

    def __hash__(self):
        return hash(self.vertices.tobytes())


def _dedupe_facets(normals, offsets):
    keep = []
    for i in range(len(normals)):
        dup = any(np.allclose(normals[i], normals[j], atol=1e-9)
                  and abs(offsets[i] - offsets[j]) < 1e-9 for j in keep)
        if not dup:
            keep.append(i)
    return normals[keep], offsets[keep]


def _in_convex_hull(p, vertices, tol=GEO_TOL):
    """LP membership test for p in conv(vertices)."""
    n, d = vertices.shape
    a_eq = np.vstack([vertices.T, np.ones(n)])
    b_eq = np.append(p, 1.0)
    res = linprog(np.zeros(n), A_eq=a_eq, b_eq=b_eq,
                  bounds=[(0, None)] * n, method="highs")
    if res.success:
        return True
    dists = np.linalg.norm(vertices - p, axis=1)
    return bool(np.min(dists) <= tol)


@dataclass(frozen=True)
class Ball:
    """Euclidean ball of radius r centered at the origin."""

    radius: float
    dim: int = 2

    def contains(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return np.linalg.norm(points, axis=1) <= self.radius + GEO_TOL


@dataclass(frozen=True)
class HalfBall:
    """Half-ball {|x| <= r, <x, axis> >= 0}; default axis is e1."""

    radius: float
    axis: np.ndarray = field(default=None)
    dim: int = 2

    def __post_init__(self):
        axis = self.axis
        if axis is None:
            axis = np.zeros(self.dim)
            axis[0] = 1.0
        object.__setattr__(self, "axis", unit_direction(axis))

    def contains(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return ((np.linalg.norm(points, axis=1) <= self.radius + GEO_TOL)
                & (points @ self.axis >= -GEO_TOL))


@dataclass(frozen=True)
class HalfSpace:
    """{x : <x, normal> <= offset} with a unit normal."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        object.__setattr__(self, "normal", unit_direction(self.normal))

    @property
    def dim(self):
        return len(self.normal)

    def contains(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return points @ self.normal <= self.offset + GEO_TOL


@dataclass(frozen=True)
class PolyhedralCone:
    """Closed convex cone, by generator rays and/or facet normals.

    With neither representation present the cone is the whole space;
    `generators` of length zero with `normals=None` means {0} is NOT
    expressible that way -- use a single zero generator row instead.
    """

    generators: np.ndarray | None = None
    normals: np.ndarray | None = None
    dim: int = 2

    def contains(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if self.normals is not None:
            return np.all(points @ self.normals.T <= GEO_TOL, axis=1)
        if self.generators is None:
            return np.ones(len(points), dtype=bool)
        return np.array([_in_positive_hull(p, self.generators)
                         for p in points])

    def is_whole_space(self):
        return self.generators is None and (
            self.normals is None or len(self.normals) == 0)


def _in_positive_hull(p, generators, tol=1e-9):
    gens = np.atleast_2d(generators)
    if np.linalg.norm(p) <= tol:
        return True
    if len(gens) == 0:
        return False
    n, d = gens.shape
    res = linprog(np.zeros(n), A_eq=gens.T, b_eq=p,
                  bounds=[(0, None)] * n, method="highs")
    return bool(res.success)


@dataclass(frozen=True)
class BallIntersection:
    """Intersection of equal-radius balls around the given centers."""

    centers: np.ndarray
    radius: float

    @property
    def dim(self):
        return self.centers.shape[1]

    def contains(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        d2 = np.linalg.norm(points[:, None, :] - self.centers[None], axis=2)
        return np.all(d2 <= self.radius + GEO_TOL, axis=1)

    def is_empty(self):
        return not bool(self.contains([chebyshev_like_center(self)])[0])

    def support(self, u, n_grid=0):
        """h(X, u) by maximizing <x, u> over the ball intersection."""
        from scipy.optimize import minimize

        u = np.asarray(u, dtype=float)
        cons = [{"type": "ineq",
                 "fun": (lambda x, c=c: self.radius**2
                         - np.sum((x - c)**2))}
                for c in self.centers]
        x0 = self.centers.mean(axis=0)
        res = minimize(lambda x: -(x @ u), x0, constraints=cons,
                       method="SLSQP",
                       options={"ftol": 1e-12, "maxiter": 200})
        return float(res.x @ u)


def chebyshev_like_center(x: BallIntersection):
    return x.centers.mean(axis=0)


# -- support function ---------------------------------------------------------

def support_function(body, u):
    """h(body, u) = sup <x, u>; +inf in unbounded directions."""
    u = np.asarray(u, dtype=float)
    if isinstance(body, Polytope):
        return float(np.max(body.vertices @ u))
    if isinstance(body, Ball):
        return body.radius * float(np.linalg.norm(u))
    if isinstance(body, HalfBall):
        c = float(u @ body.axis)
        if c >= 0:
            return body.radius * float(np.linalg.norm(u))
        return body.radius * float(np.linalg.norm(u - c * body.axis))
    if isinstance(body, HalfSpace):
        nu = np.linalg.norm(u)
        if nu < 1e-12:
            return 0.0
        c = float(u @ body.normal)
        if c > 0 and np.linalg.norm(u - c * body.normal) <= 1e-12 * nu:
            return c * body.offset
        return float("inf")
    if isinstance(body, PolyhedralCone):
        if body.is_whole_space():
            return 0.0 if np.linalg.norm(u) < 1e-12 else float("inf")
        if body.generators is not None:
            if np.all(body.generators @ u <= GEO_TOL):
                return 0.0
            return float("inf")
        # H-rep cone: bounded in direction u iff u in pos(normals).
        return 0.0 if _in_positive_hull(u, body.normals) else float("inf")
    if isinstance(body, BallIntersection):
        return body.support(u)
    if isinstance(body, EmptySet):
        return float("-inf")
    raise TypeError(f"unsupported body {type(body).__name__}")


# -- polar sets ---------------------------------------------------------------

def polar(body):
    """Polar set {x : h(body, x) <= 1}; body must contain the origin."""
    if isinstance(body, Ball):
        return Ball(1.0 / body.radius, body.dim)
    if isinstance(body, Polytope):
        if not bool(body.contains(np.zeros((1, body.dim)))[0]):
            raise ValueError("polar requires the origin inside the body")
        if not body.is_full_dimensional:
            return _polar_degenerate(body)
        if np.any(body.facet_offsets <= GEO_TOL):
            raise ValueError("polar polytope requires origin strictly "
                             "interior")
        verts = body.facet_normals / body.facet_offsets[:, None]
        return Polytope.from_vertices(verts)
    raise TypeError(f"polar unsupported for {type(body).__name__}")


def _polar_degenerate(body):
    verts = body.vertices
    # Segment [0, p] dualizes to the half-space {<x, p> <= 1}.
    if len(verts) == 2:
        norms = np.linalg.norm(verts, axis=1)
        i0 = int(np.argmin(norms))
        if norms[i0] <= GEO_TOL:
            p = verts[1 - i0]
            np_ = np.linalg.norm(p)
            return HalfSpace(p / np_, 1.0 / np_)
    if len(verts) == 1 and np.linalg.norm(verts[0]) <= GEO_TOL:
        return WHOLE_SPACE
    raise ValueError("polar of a degenerate polytope is only supported "
                     "for segments [0, p]")


def polar_cone(cone: PolyhedralCone):
    """Polar cone {x : <x, y> <= 0 for all y in cone}.

    Swaps the generator and facet-normal representations exactly.
    """
    if cone.normals is not None:
        return PolyhedralCone(generators=cone.normals, dim=cone.dim)
    if cone.generators is not None:
        return PolyhedralCone(normals=cone.generators, dim=cone.dim)
    return PolyhedralCone(generators=np.zeros((1, cone.dim)), dim=cone.dim)


# -- supporting and normal cones ----------------------------------------------

def supporting_cone(body, v):
    """cl(union of lambda*(body - v)); v must lie in the body."""
    v = np.asarray(v, dtype=float)
    if isinstance(body, Polytope):
        if not body.is_full_dimensional:
            raise ValueError("supporting cone needs a full-dimensional "
                             "polytope")
        if not bool(body.contains(v[None])[0]):
            raise ValueError("point outside the body")
        slack = body.facet_normals @ v - body.facet_offsets
        active = np.abs(slack) <= GEO_TOL
        if not np.any(active):
            return PolyhedralCone(dim=body.dim)  # interior: whole space
        return PolyhedralCone(normals=body.facet_normals[active],
                              dim=body.dim)
    if isinstance(body, Ball):
        r = np.linalg.norm(v)
        if r > body.radius + GEO_TOL:
            raise ValueError("point outside the ball")
        if r < body.radius - GEO_TOL:
            return PolyhedralCone(dim=body.dim)
        return HalfSpace(v, 0.0)
    raise TypeError(f"supporting cone unsupported for {type(body).__name__}")


def normal_cone(body, v):
    """Cone of outer normals at a boundary point v."""
    v = np.asarray(v, dtype=float)
    if isinstance(body, Polytope):
        slack = body.facet_normals @ v - body.facet_offsets
        active = np.abs(slack) <= GEO_TOL
        if not bool(body.contains(v[None])[0]) or not np.any(active):
            raise ValueError("point is not on the boundary")
        return PolyhedralCone(generators=body.facet_normals[active],
                              dim=body.dim)
    if isinstance(body, Ball):
        if abs(np.linalg.norm(v) - body.radius) > GEO_TOL:
            raise ValueError("point is not on the sphere")
        return PolyhedralCone(generators=(v / body.radius)[None],
                              dim=body.dim)
    raise TypeError(f"normal cone unsupported for {type(body).__name__}")


# -- Minkowski difference -----------------------------------------------------

def minkowski_difference(body, other):
    """{x : other + x is contained in body}."""
    if isinstance(body, Polytope):
        if not body.is_full_dimensional:
            raise ValueError("Minkowski difference needs an H-rep")
        if isinstance(other, Ball):
            shift = other.radius * np.ones(len(body.facet_offsets))
        else:
            pts = np.atleast_2d(np.asarray(other, dtype=float))
            shift = np.max(pts @ body.facet_normals.T, axis=0)
        offsets = body.facet_offsets - shift
        return Polytope.from_halfspaces(body.facet_normals, offsets)
    if isinstance(body, Ball):
        if isinstance(other, Ball):
            r = body.radius - other.radius
            return Ball(r, body.dim) if r >= 0 else EMPTY
        pts = np.atleast_2d(np.asarray(other, dtype=float))
        x = BallIntersection(-pts, body.radius)
        return EMPTY if x.is_empty() else x
    raise TypeError(f"Minkowski difference unsupported for "
                    f"{type(body).__name__}")


# -- convex hull of points ----------------------------------------------------

def convex_hull(points):
    """Standard closed convex hull of finitely many points, as a Polytope."""
    return Polytope.from_vertices(points)


def cube(d, half_width=1.0):
    """The cube [-w, w]^d."""
    corners = np.array(list(itertools.product([-half_width, half_width],
                                              repeat=d)))
    return Polytope.from_vertices(corners)


def cross_polytope(d, scale=1.0):
    verts = np.vstack([scale * np.eye(d), -scale * np.eye(d)])
    return Polytope.from_vertices(verts)


# -- JSON serialization -------------------------------------------------------

def body_to_json(body):
    """Serialize a body to the documented JSON schema."""
    if isinstance(body, Polytope):
        doc = {"kind": "polytope",
               "vertices": body.vertices.tolist()}
        if body.is_full_dimensional:
            doc["facets"] = [{"normal": n.tolist(), "offset": float(h)}
                             for n, h in zip(body.facet_normals,
                                             body.facet_offsets)]
        return doc
    if isinstance(body, Ball):
        return {"kind": "ball", "radius": body.radius, "dim": body.dim}
    if isinstance(body, HalfBall):
        return {"kind": "half_ball", "radius": body.radius,
                "axis": body.axis.tolist()}
    if isinstance(body, HalfSpace):
        return {"kind": "half_space",
                "facets": [{"normal": body.normal.tolist(),
                            "offset": float(body.offset)}]}
    if isinstance(body, PolyhedralCone):
        doc = {"kind": "cone", "dim": body.dim}
        if body.generators is not None:
            doc["generators"] = body.generators.tolist()
        if body.normals is not None:
            doc["normals"] = body.normals.tolist()
        return doc
    raise TypeError(f"cannot serialize {type(body).__name__}")


def body_from_json(doc):
    """Inverse of body_to_json.  Accepts a dict, JSON text, or file path."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError:
            with open(doc) as fh:
                doc = json.load(fh)
    kind = doc.get("kind")
    if kind == "polytope":
        return Polytope.from_vertices(np.asarray(doc["vertices"], float))
    if kind == "ball":
        return Ball(float(doc["radius"]), int(doc.get("dim", 2)))
    if kind == "half_ball":
        axis = doc.get("axis")
        dim = len(axis) if axis is not None else int(doc.get("dim", 2))
        return HalfBall(float(doc["radius"]),
                        np.asarray(axis, float) if axis is not None else None,
                        dim)
    if kind == "half_space":
        facet = doc["facets"][0]
        return HalfSpace(np.asarray(facet["normal"], float),
                         float(facet["offset"]))
    if kind == "cone":
        gens = doc.get("generators")
        norms = doc.get("normals")
        return PolyhedralCone(
            np.asarray(gens, float) if gens is not None else None,
            np.asarray(norms, float) if norms is not None else None,
            int(doc.get("dim", 2)))
    raise ValueError(f"unknown body kind: {kind!r}")
