"""Limiting zero cell as a half-space intersection in R^(d+d^2).

Each Poisson mark (t, eta, u) contributes the constraint
<C eta + x, u> <= t on pairs (x, C), which in the flattened product
inner product <(x,C1),(y,C2)> = <x,y> + Tr(C1 C2^T) is the half-space
with normal (u, N), N[i,j] = u[i]*eta[j], and offset t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .bodies import Ball, GEO_TOL, Polytope
from .poisson import sample_PK

__all__ = [
    "CONE_PRESETS",
    "ConeSpec",
    "HalfSpaceSystem",
    "TangentPoint",
    "build_zero_cell",
    "cone_preset",
    "halfspace_from_mark",
    "is_bounded",
    "membership",
    "polar_of_zero_cell",
    "recession_cone_TK",
    "reflect",
    "reflected_recession_in_cone",
    "restrict_to_cone",
    "support_extent",
    "transform_rotation_of_K",
    "transform_translation_of_K",
]


@dataclass(frozen=True)
class TangentPoint:
    """Pair (x, C) in R^d x M_d with a fixed row-major flattening."""

    x: np.ndarray
    C: np.ndarray

    @property
    def dim(self):
        return len(self.x)

    def flatten(self):
        return np.concatenate([self.x, self.C.reshape(-1)])

    @staticmethod
    def unflatten(v, d):
        v = np.asarray(v, dtype=float)
        return TangentPoint(v[:d].copy(), v[d:].reshape(d, d).copy())


def flatten_pair(x, c):
    return np.concatenate([np.asarray(x, float).ravel(),
                           np.asarray(c, float).reshape(-1)])


def halfspace_from_mark(mark):
    """Constraint (normal, offset) in R^(d+d^2) from one mark."""
    n = flatten_pair(mark.u, np.outer(mark.u, mark.eta))
    return n, float(mark.t)


@dataclass(frozen=True)
class HalfSpaceSystem:
    """Finite half-space intersection {p : <p, normal_i> <= offset_i}.

    Offsets are positive, so the origin is always strictly feasible.
    """

    normals: np.ndarray  # (m, dim) rows
    offsets: np.ndarray  # (m,) positive
    dim: int
    body_dim: int
    sample: object = None
    window_radius: float | None = None

    @property
    def n_constraints(self):
        return len(self.offsets)

    def contains(self, points, tol=GEO_TOL):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if self.n_constraints == 0:
            return np.ones(len(points), dtype=bool)
        return np.all(points @ self.normals.T <= self.offsets + tol, axis=1)


def build_zero_cell(body, window_radius, seed=None, rng=None, t_max=None):
    """Zero-cell constraints that can bind inside the given window.

    A constraint with normal (u, N) satisfies sup over the window ball of
    radius R of <C eta + x, u> <= R * (1 + |eta|), so marks with
    t > R * (1 + max |eta|) never cut the window: the returned truncated
    system agrees with the infinite one on the whole window.
    """
    d = body.dim
    if t_max is None:
        t_max = window_radius * (1.0 + _max_boundary_norm(body))
    sample = sample_PK(body, t_max, seed=seed, rng=rng)
    if len(sample) == 0:
        normals = np.zeros((0, d + d * d))
        offsets = np.zeros(0)
    else:
        rows = [halfspace_from_mark(m) for m in sample.marks]
        normals = np.array([r[0] for r in rows])
        offsets = np.array([r[1] for r in rows])
    return HalfSpaceSystem(normals, offsets, d + d * d, d,
                           sample=sample, window_radius=float(window_radius))


def _max_boundary_norm(body):
    if isinstance(body, Polytope):
        return float(np.max(np.linalg.norm(body.vertices, axis=1)))
    return float(body.radius)


def membership(system, point, tol=GEO_TOL):
    if isinstance(point, TangentPoint):
        point = point.flatten()
    return bool(system.contains(np.asarray(point)[None], tol=tol)[0])


def support_extent(system, direction, tol=GEO_TOL):
    """sup{s >= 0 : s * direction in system}; inf when the ray recedes."""
    direction = np.asarray(direction, dtype=float)
    if system.n_constraints == 0:
        return math.inf
    dots = system.normals @ direction
    cutting = dots > tol
    if not np.any(cutting):
        return math.inf
    return float(np.min(system.offsets[cutting] / dots[cutting]))


# -- cone specifications -------------------------------------------------------

@dataclass(frozen=True)
class ConeSpec:
    """Linear subspace of R^d x M_d plus optional sign constraints.

    basis rows are orthonormal flattened (x, C) vectors; sign_normals
    (in subspace coordinates) cut the subspace to a proper cone via
    <c, sign_normal> <= 0.
    """

    name: str
    basis: np.ndarray
    dim: int  # ambient body dimension d
    sign_normals: np.ndarray | None = None

    @property
    def n_params(self):
        return len(self.basis)

    def embed(self, coords):
        """Subspace coordinates -> flattened ambient vector."""
        return np.asarray(coords, dtype=float) @ self.basis

    def project(self, v):
        """Ambient flattened vector -> subspace coordinates."""
        return self.basis @ np.asarray(v, dtype=float)

    def contains_coords(self, coords, tol=GEO_TOL):
        if self.sign_normals is None:
            return True
        return bool(np.all(self.sign_normals @ np.asarray(coords) <= tol))


def _orthonormalize(rows):
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    q, _ = np.linalg.qr(rows.T)
    # Align signs with the input rows for readable coordinates.
    q = q.T
    for i in range(len(q)):
        j = int(np.argmax(np.abs(rows[i])))
        if q[i, j] * rows[i, j] < 0:
            q[i] = -q[i]
    return q


def cone_preset(name, d):
    """Named tangent cones of the transformation families."""
    dd = d * d

    def mat_row(c):
        return flatten_pair(np.zeros(d), c)

    if name == "translations":
        basis = np.eye(d, d + dd)
    elif name == "skew":  # special orthogonal group
        rows = []
        for i in range(d):
            for j in range(i + 1, d):
                c = np.zeros((d, d))
                c[i, j], c[j, i] = 1.0, -1.0
                rows.append(mat_row(c))
        basis = _orthonormalize(rows)
    elif name == "traceless":  # special linear group
        rows = []
        for i in range(d):
            for j in range(d):
                if i != j:
                    c = np.zeros((d, d))
                    c[i, j] = 1.0
                    rows.append(mat_row(c))
        for i in range(d - 1):
            c = np.zeros((d, d))
            c[i, i], c[i + 1, i + 1] = 1.0, -1.0
            rows.append(mat_row(c))
        basis = _orthonormalize(rows)
    elif name == "symmetric-traceless":
        rows = []
        for i in range(d):
            for j in range(i + 1, d):
                c = np.zeros((d, d))
                c[i, j] = c[j, i] = 1.0
                rows.append(mat_row(c))
        for i in range(d - 1):
            c = np.zeros((d, d))
            c[i, i], c[i + 1, i + 1] = 1.0, -1.0
            rows.append(mat_row(c))
        basis = _orthonormalize(rows)
    elif name == "diagonal":
        rows = []
        for i in range(d):
            c = np.zeros((d, d))
            c[i, i] = 1.0
            rows.append(mat_row(c))
        basis = np.array(rows)
    elif name == "scalings":  # (x, r*I): translations plus scalar dilations
        rows = [np.eye(d, d + dd)[i] for i in range(d)]
        rows.append(mat_row(np.eye(d) / math.sqrt(d)))
        basis = np.array(rows)
    elif name == "full":
        basis = np.eye(d + dd)
    else:
        raise ValueError(f"unknown cone preset {name!r}")
    return ConeSpec(name, basis, d)


CONE_PRESETS = ("translations", "skew", "traceless", "symmetric-traceless",
                "diagonal", "scalings", "full")


@dataclass(frozen=True)
class RestrictedSystem:
    """Half-space system expressed in cone-subspace coordinates."""

    normals: np.ndarray
    offsets: np.ndarray
    cone: ConeSpec
    sign_normals: np.ndarray | None = None

    @property
    def n_constraints(self):
        return len(self.offsets)

    def contains(self, coords, tol=GEO_TOL):
        coords = np.atleast_2d(np.asarray(coords, dtype=float))
        ok = np.ones(len(coords), dtype=bool)
        if self.n_constraints:
            ok &= np.all(coords @ self.normals.T <= self.offsets + tol,
                         axis=1)
        if self.sign_normals is not None:
            ok &= np.all(coords @ self.sign_normals.T <= tol, axis=1)
        return ok

    def extent(self, direction, tol=GEO_TOL):
        direction = np.asarray(direction, dtype=float)
        best = math.inf
        if self.n_constraints:
            dots = self.normals @ direction
            cutting = dots > tol
            if np.any(cutting):
                best = float(np.min(self.offsets[cutting] / dots[cutting]))
        if self.sign_normals is not None:
            if np.any(self.sign_normals @ direction > tol):
                return 0.0
        return best


def restrict_to_cone(system, cone):
    """Project the constraints onto the cone's subspace coordinates.

    Constraints with vanishing projection never bind inside the subspace
    and are dropped.
    """
    if system.n_constraints == 0:
        return RestrictedSystem(np.zeros((0, cone.n_params)), np.zeros(0),
                                cone, cone.sign_normals)
    proj = system.normals @ cone.basis.T
    keep = np.linalg.norm(proj, axis=1) > 1e-12
    return RestrictedSystem(proj[keep], system.offsets[keep], cone,
                            cone.sign_normals)


# -- recession cone and boundedness --------------------------------------------

@dataclass(frozen=True)
class RecessionCone:
    """T_K = {(x,C) : <C y + x, u> >= 0 for all (y,u) in Nor(K)}.

    For polytopes a finite list of (vertex, facet normal) pairs is
    sufficient and exact; for balls, membership uses the exact minimum of
    <C y + x, y> over the unit sphere (trust-region subproblem).
    """

    body: object
    pairs: np.ndarray | None = None  # (m, d+d^2) rows: constraint <=  form

    def contains(self, point, tol=GEO_TOL, check=False):
        if isinstance(point, TangentPoint):
            x, c = point.x, point.C
        else:
            d = self.body.dim
            v = np.asarray(point, dtype=float)
            x, c = v[:d], v[d:].reshape(d, d)
        if isinstance(self.body, Polytope):
            v = flatten_pair(x, c)
            return bool(np.all(self.pairs @ v <= tol))
        # Ball of radius r: <C(ru) + x, u> >= 0 for all unit u reduces to
        # min over the unit sphere of u^T (r sym C) u + <x, u> >= 0.
        r = self.body.radius
        val = _min_sphere_quadratic(0.5 * (c + c.T) * r, x)
        return val >= -tol

    def contains_reflected(self, point, tol=GEO_TOL):
        """Membership of the reflected cone -T_K."""
        if isinstance(point, TangentPoint):
            point = point.flatten()
        return self.contains(-np.asarray(point, dtype=float), tol=tol)


def recession_cone_TK(body):
    if isinstance(body, Polytope):
        rows = []
        for idx, (u, _) in zip(body.facet_vertex_sets(),
                               zip(body.facet_normals, body.facet_offsets)):
            for v in body.vertices[idx]:
                # <C v + x, u> >= 0  as  <p, -(u, u outer v)> <= 0.
                rows.append(-flatten_pair(u, np.outer(u, v)))
        return RecessionCone(body, np.array(rows))
    if isinstance(body, Ball):
        return RecessionCone(body)
    raise TypeError(f"unsupported body {type(body).__name__}")


def _min_sphere_quadratic(a, b):
    """min of y^T A y + <b, y> over the unit sphere (A symmetric).

    Trust-region subproblem on the boundary: solved through the secular
    equation in the eigenbasis of A, with the hard case handled.
    """
    w, q = np.linalg.eigh(a)
    beta = q.T @ b
    lam_min = w[0]

    def ynorm2(lam):
        return float(np.sum((beta / (2 * (w - lam))) ** 2))

    # y(lam) = -(2(A - lam I))^{-1} b must have unit norm with lam <= lam_min.
    degenerate = np.abs(beta) < 1e-14
    if np.all(degenerate[w - lam_min < 1e-12]):
        # Hard case: b has no component along the bottom eigenspace.
        active = ~degenerate
        if not np.any(active):
            return float(lam_min)
        n2 = float(np.sum((beta[active] / (2 * (w[active] - lam_min))) ** 2))
        if n2 <= 1.0:
            y = np.zeros_like(beta)
            y[active] = -beta[active] / (2 * (w[active] - lam_min))
            extra = math.sqrt(1.0 - n2)
            y[int(np.argmin(w))] = extra
            yy = q @ y
            return float(yy @ a @ yy + b @ yy)
    lo = lam_min - 0.5 * (np.linalg.norm(b) + 1.0)
    while ynorm2(lo) > 1.0:
        lo = lam_min - 2 * (lam_min - lo)
    hi = lam_min - 1e-18
    while ynorm2(hi) < 1.0 and lam_min - hi > 1e-300:
        hi = lam_min - (lam_min - hi) / 8.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if ynorm2(mid) > 1.0:
            hi = mid
        else:
            lo = mid
    lam = 0.5 * (lo + hi)
    y = q @ (-beta / (2 * (w - lam)))
    y = y / np.linalg.norm(y)
    return float(y @ a @ y + b @ y)


def is_bounded(body, cone, n_grid=1024, seed=1):
    """Decide whether the zero cell restricted to the cone is a.s. bounded.

    Bounded iff the reflected recession cone -T_K meets the cone only at
    the origin.  Unboundedness witnesses are always verified by the exact
    per-direction membership test before being returned.  Polytopes get
    an exact LP decision; balls combine an exact skew-null-space
    certificate with a convex search over the faces of the coordinate box
    (the survival functional is sublinear in the direction).
    """
    rec = recession_cone_TK(body)
    k = cone.n_params
    rng = np.random.default_rng(seed)
    dirs = [cone.basis[i] * s for i in range(k) for s in (1.0, -1.0)]
    raw = rng.standard_normal((n_grid, k))
    raw /= np.linalg.norm(raw, axis=1, keepdims=True)
    dirs.extend(raw @ cone.basis)
    for v in dirs:
        if not cone.contains_coords(cone.project(v)):
            continue
        if rec.contains_reflected(v):
            return False, v
    if isinstance(body, Polytope):
        a_ub = -rec.pairs @ cone.basis.T  # reflected: flip the point sign
        if cone.sign_normals is not None:
            a_ub = np.vstack([a_ub, cone.sign_normals])
        witness = _lp_nonzero_ray(a_ub, k)
        if witness is not None:
            return False, witness @ cone.basis
        return True, None
    return _ball_boundedness(body, cone, rec)


def _ball_boundedness(body, cone, rec):
    from scipy.optimize import minimize

    d, r = body.dim, body.radius
    # -T_K = {(x,C): r u' sym(C) u + <x,u> <= 0 for all unit u}.  Any
    # nonzero subspace element with x = 0 and sym(C) = 0 is an exact
    # unboundedness certificate (the constraint value is identically 0).
    sym_map = np.array([_sym_translation_part(v, d) for v in cone.basis])
    u, s, _ = np.linalg.svd(sym_map, full_matrices=True)
    rank = int(np.sum(s > 1e-10))
    for row in u[:, rank:].T:  # coordinate null space of the sym map
        v = row @ cone.basis
        for w in (v, -v):
            if cone.contains_coords(cone.project(w)) \
                    and rec.contains_reflected(w):
                return False, w

    def survival(coords):
        """max over the sphere of the constraint value (<= 0 means ray)."""
        v = cone.embed(coords)
        x, c = v[:d], v[d:].reshape(d, d)
        return -_min_sphere_quadratic(-0.5 * (c + c.T) * r, -x)

    k = cone.n_params
    for i in range(k):
        for sign in (1.0, -1.0):
            x0 = np.zeros(k)
            x0[i] = sign

            def obj(free, i=i, sign=sign):
                coords = np.insert(free, i, sign)
                return survival(coords)

            res = minimize(obj, np.delete(x0, i), method="Nelder-Mead",
                           options={"xatol": 1e-10, "fatol": 1e-12,
                                    "maxiter": 2000})
            coords = np.insert(res.x, i, sign)
            v = cone.embed(coords)
            if cone.contains_coords(coords) and rec.contains_reflected(v):
                return False, v
    return True, None


def _sym_translation_part(v, d):
    """Flattened (x, sym C) of a flattened tangent vector."""
    x, c = v[:d], v[d:].reshape(d, d)
    return np.concatenate([x, (0.5 * (c + c.T)).reshape(-1)])


def reflected_recession_in_cone(body, cone):
    """Exact H-rep of -T_K intersected with the cone subspace, for a ball.

    Requires a cone of pure matrix directions whose matrices are symmetric
    and pairwise commute: in a common eigenbasis the semidefiniteness
    condition sym(C) <= 0 becomes one linear inequality per eigenvector.
    The diagonal preset returns the nonpositive orthant.
    """
    if not isinstance(body, Ball):
        raise TypeError("exact restricted recession cone needs a ball body")
    d = body.dim
    mats = []
    for v in cone.basis:
        x, c = v[:d], v[d:].reshape(d, d)
        if np.linalg.norm(x) > 1e-12 or np.linalg.norm(c - c.T) > 1e-12:
            raise ValueError("cone must consist of symmetric matrix "
                             "directions")
        mats.append(c)
    for a in mats:
        for b in mats:
            if np.linalg.norm(a @ b - b @ a) > 1e-10:
                raise ValueError("cone matrices must commute")
    mix = sum((i + 1) * m for i, m in enumerate(mats))
    _, q = np.linalg.eigh(mix)
    rows = np.array([[q[:, j] @ m @ q[:, j] for m in mats]
                     for j in range(d)])
    rows = rows[np.linalg.norm(rows, axis=1) > 1e-12]
    return rows  # constraint rows: rows @ coords <= 0


def _lp_nonzero_ray(a_ub, k):
    """Nonzero c with a_ub @ c <= 0, found by LP over the box |c_i| <= 1."""
    m = len(a_ub)
    for i in range(k):
        for sign in (1.0, -1.0):
            obj = np.zeros(k)
            obj[i] = -sign
            res = linprog(obj, A_ub=a_ub, b_ub=np.zeros(m),
                          bounds=[(-1, 1)] * k, method="highs")
            if res.success and -res.fun > 1e-7:
                return res.x
    return None


# -- reflections and equivariance ----------------------------------------------

def reflect(system):
    """System of the reflected cell: p inside iff -p inside the original."""
    return HalfSpaceSystem(-system.normals, system.offsets, system.dim,
                           system.body_dim, sample=system.sample,
                           window_radius=system.window_radius)


def transform_translation_of_K(system, v):
    """System for K + v from the marks of K.

    The cell of K + v is the image of the cell of K under
    (x, C) -> (x - C v, C); constraint normals transform by the adjoint
    of the inverse map, (u, N) -> (u, N + u outer v).
    """
    v = np.asarray(v, dtype=float)
    d = system.body_dim
    new_rows = []
    for n in system.normals:
        u = n[:d]
        mat = n[d:].reshape(d, d) + np.outer(u, v)
        new_rows.append(flatten_pair(u, mat))
    normals = (np.array(new_rows) if new_rows
               else np.zeros((0, system.dim)))
    return HalfSpaceSystem(normals, system.offsets.copy(), system.dim, d,
                           sample=system.sample,
                           window_radius=system.window_radius)


def translation_point_map(point, v, d):
    """The map (x, C) -> (x - C v, C) on flattened points."""
    p = np.asarray(point, dtype=float)
    x, c = p[:d], p[d:].reshape(d, d)
    return flatten_pair(x - c @ v, c)


def transform_rotation_of_K(system, a):
    """System for A K from the marks of K, A orthogonal.

    Marks transform as (t, eta, u) -> (t, A eta, A u); the cell transforms
    by the product-space orthogonal map (x, C) -> (A x, A C A^T).
    """
    a = np.asarray(a, dtype=float)
    d = system.body_dim
    new_rows = []
    for n in system.normals:
        u = n[:d]
        mat = n[d:].reshape(d, d)
        new_rows.append(flatten_pair(a @ u, a @ mat @ a.T))
    normals = (np.array(new_rows) if new_rows
               else np.zeros((0, system.dim)))
    return HalfSpaceSystem(normals, system.offsets.copy(), system.dim, d,
                           sample=system.sample,
                           window_radius=system.window_radius)


def rotation_point_map(point, a, d):
    """The orthogonal map (x, C) -> (A x, A C A^T) on flattened points."""
    p = np.asarray(point, dtype=float)
    x, c = p[:d], p[d:].reshape(d, d)
    return flatten_pair(a @ x, a @ c @ a.T)


# -- polar set ------------------------------------------------------------------

@dataclass(frozen=True)
class ZeroCellPolar:
    """Polar of a truncated zero cell: conv({0} and {n_i / t_i})."""

    points: np.ndarray  # includes the origin row
    body_dim: int

    def support(self, p):
        return float(np.max(self.points @ np.asarray(p, dtype=float)))

    def translation_slice_vertices(self):
        """Generating points with vanishing matrix part, first d coords."""
        d = self.body_dim
        mask = np.linalg.norm(self.points[:, d:], axis=1) <= GEO_TOL
        return self.points[mask][:, :d]


def polar_of_zero_cell(system):
    d = system.body_dim
    if system.n_constraints == 0:
        return ZeroCellPolar(np.zeros((1, d + d * d)), d)
    pts = system.normals / system.offsets[:, None]
    return ZeroCellPolar(np.vstack([np.zeros(system.dim), pts]), d)
