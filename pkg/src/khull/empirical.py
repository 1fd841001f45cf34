"""Finite-sample feasible sets, directional extents, and limit experiments.

For a uniform sample of n points from K, the feasible set consists of the
pairs (x, C) with exp(C)(K + x) covering the sample; scaled by n it
converges to the reflected zero cell.  This module measures directional
extents of the scaled sets and runs the distributional experiments
comparing them with the limit-cell simulator and with closed-form laws.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .bodies import Ball, HalfBall, Polytope, cube
from .matexp import matrix_exponential
from .poisson import spawn_rng
from .zerocell import (build_zero_cell, cone_preset, restrict_to_cone,
                       TangentPoint)

__all__ = [
    "ExperimentReport",
    "directional_extent_empirical",
    "dual_cone_intensity_experiment",
    "inclusion_functional_estimate",
    "ks_statistic",
    "matrix_exponential",
    "so2_square_experiment",
    "translation_box_experiment",
    "uniform_sample",
    "xn_membership",
]

DEFAULT_S_MAX = 50.0


# -- sampling -------------------------------------------------------------------

def uniform_sample(body, n, seed=None, rng=None):
    """n independent uniform points from the body, as an (n, d) array."""
    if rng is None:
        rng = spawn_rng(seed)
    n = int(n)
    d = body.dim
    if n == 0:
        return np.zeros((0, d))
    if isinstance(body, Ball):
        u = rng.standard_normal((n, d))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        r = body.radius * rng.random(n) ** (1.0 / d)
        return u * r[:, None]
    if isinstance(body, HalfBall):
        out = np.zeros((n, d))
        filled = 0
        while filled < n:
            cand = uniform_sample(Ball(body.radius, d), 2 * (n - filled) + 8,
                                  rng=rng)
            cand = cand[cand @ body.axis >= 0]
            take = min(len(cand), n - filled)
            out[filled:filled + take] = cand[:take]
            filled += take
        return out
    if isinstance(body, Polytope):
        lo = body.vertices.min(axis=0)
        hi = body.vertices.max(axis=0)
        out = np.zeros((n, d))
        filled = 0
        while filled < n:
            cand = lo + (hi - lo) * rng.random((4 * (n - filled) + 8, d))
            cand = cand[body.contains(cand)]
            take = min(len(cand), n - filled)
            out[filled:filled + take] = cand[:take]
            filled += take
        return out
    raise TypeError(f"unsupported body {type(body).__name__}")


# -- scaled feasible-set membership ----------------------------------------------

def xn_membership(point, batch, n, body):
    """Is (x, C) in n times the feasible set of the batch?

    True iff exp(-C/n) xi - x/n lies in the body for every sample point.
    """
    if isinstance(point, TangentPoint):
        x, c = point.x, point.C
    else:
        d = body.dim
        v = np.asarray(point, dtype=float)
        x, c = v[:d], v[d:].reshape(d, d)
    n = float(n)
    g = matrix_exponential(-np.asarray(c) / n)
    moved = batch @ g.T - np.asarray(x) / n
    return bool(np.all(body.contains(moved)))


def directional_extent_empirical(batch, n, body, cone, direction,
                                 s_max=DEFAULT_S_MAX, tol=1e-6):
    """sup{s <= s_max : s * direction feasible}, by scan plus bisection.

    direction is given in cone-subspace coordinates.  Returns (value,
    censored): censored means feasibility still held at s_max.  A coarse
    scan at resolution s_max/1024 brackets the boundary first; for the
    one-parameter families used in the experiments the feasible set along
    the ray is an interval, so the bracket is valid.
    """
    direction = np.asarray(direction, dtype=float)
    v = cone.embed(direction)

    def feasible(s):
        return xn_membership(s * v, batch, n, body)

    if not feasible(0.0):
        raise ValueError("the zero transform must be feasible")
    if feasible(s_max):
        return s_max, True
    grid = np.linspace(0.0, s_max, 1025)
    lo = 0.0
    hi = s_max
    for a, b in zip(grid[:-1], grid[1:]):
        if not feasible(b):
            lo, hi = a, b
            break
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), False


# -- statistics -----------------------------------------------------------------

def ks_statistic(samples, cdf):
    """One-sample Kolmogorov-Smirnov distance and asymptotic p-value."""
    samples = np.asarray(samples, dtype=float)
    if len(samples) == 0:
        raise ValueError("need at least one sample")
    res = stats.kstest(samples, cdf)
    return float(res.statistic), float(res.pvalue)


def _config_hash(config):
    blob = json.dumps(config, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


@dataclass
class ExperimentReport:
    name: str
    config: dict
    seed: object
    statistics: dict
    samples: dict = field(default_factory=dict)
    runtime: float = 0.0
    config_hash: str = ""

    def __post_init__(self):
        if not self.config_hash:
            self.config_hash = _config_hash(
                {"name": self.name, "seed": self.seed, **self.config})

    def to_json(self):
        return {
            "name": self.name,
            "config": self.config,
            "seed": self.seed,
            "config_hash": self.config_hash,
            "runtime_seconds": self.runtime,
            "statistics": self.statistics,
        }


# -- rotation (skew direction) experiment for the square --------------------------

SQRT2 = math.sqrt(2.0)


def _limit_rotation_endpoints(rng, t_horizon=100.0):
    """One draw of the rotation-extent endpoints of the limit cell.

    The skew restriction of a square mark (t, eta, u) is the scalar
    constraint c * (u1*eta2 - u2*eta1) <= t on the rotation angle c.  The
    coefficient over the four facets is uniform on [-1, 1] and the
    combined (t, z) process has unit intensity on (0, inf) x [-1, 1].
    The positive endpoint is min t/z over z > 0; any minimum <= t_horizon
    is the true infinite-process value.
    """
    count = rng.poisson(2.0 * t_horizon)
    t = t_horizon * (1.0 - rng.random(count))
    z = 2.0 * rng.random(count) - 1.0
    pos = z > 0
    neg = z < 0
    plus = np.min(t[pos] / z[pos]) if np.any(pos) else math.inf
    minus = np.min(t[neg] / -z[neg]) if np.any(neg) else math.inf
    return plus, minus


def _finite_rotation_extent(points, n):
    """Scaled maximal rotation angles keeping all points in the square.

    A point at radius rho > 1 and angle phi stays in [-1,1]^2 under
    rotation by theta iff (phi + theta) mod (pi/2) lies in
    [beta, pi/2 - beta] with beta = arccos(1/rho); points with rho <= 1
    are unconstrained.  Exact, vectorized.
    """
    rho = np.linalg.norm(points, axis=1)
    mask = rho > 1.0
    if not np.any(mask):
        return math.inf, math.inf
    rho = rho[mask]
    phi = np.arctan2(points[mask, 1], points[mask, 0])
    beta = np.arccos(1.0 / rho)
    r0 = np.mod(phi, math.pi / 2)
    # Guard rounding: r0 must lie within the feasible arc.
    r0 = np.clip(r0, beta, math.pi / 2 - beta)
    plus = float(np.min(math.pi / 2 - beta - r0))
    minus = float(np.min(r0 - beta))
    return n * plus, n * minus


def so2_square_experiment(n=2000, replicates=2000, limit_replicates=10000,
                          seed=0, s_max=DEFAULT_S_MAX):
    """Rotation-extent experiment: limit cell versus finite samples.

    Part (a) draws the limit-cell endpoint pair (zeta-, zeta+) per
    replicate and tests exponentiality and independence.  Part (b) draws
    the scaled maximal rotation angles of n uniform points in the square.
    The two pipelines are compared by a two-sample KS test.
    """
    t0 = time.time()
    body = cube(2)
    zp = np.zeros(limit_replicates)
    zm = np.zeros(limit_replicates)
    for i in range(limit_replicates):
        rng = spawn_rng(seed, 0, i)
        zp[i], zm[i] = _limit_rotation_endpoints(rng)
    zp = np.minimum(zp, s_max)
    zm = np.minimum(zm, s_max)

    fp = np.zeros(replicates)
    fm = np.zeros(replicates)
    for i in range(replicates):
        rng = spawn_rng(seed, 1, i)
        pts = uniform_sample(body, n, rng=rng)
        a, b = _finite_rotation_extent(pts, n)
        fp[i] = min(a, s_max)
        fm[i] = min(b, s_max)

    exp1 = stats.expon(scale=1.0).cdf
    ks_plus_exp1, p_plus = ks_statistic(zp, exp1)
    ks_minus_exp1, p_minus = ks_statistic(zm, exp1)
    fitted_mean = float(np.mean(np.concatenate([zp, zm])))
    ks_fitted, _ = ks_statistic(zp, stats.expon(scale=fitted_mean).cdf)
    rho_spearman = float(stats.spearmanr(zp, zm).statistic)
    two_plus = float(stats.ks_2samp(zp, fp).statistic)
    two_minus = float(stats.ks_2samp(zm, fm).statistic)

    report = ExperimentReport(
        name="so2-square",
        config={"n": n, "replicates": replicates,
                "limit_replicates": limit_replicates, "s_max": s_max},
        seed=seed,
        statistics={
            "limit_mean_plus": float(np.mean(zp)),
            "limit_mean_minus": float(np.mean(zm)),
            "finite_mean_plus": float(np.mean(fp)),
            "finite_mean_minus": float(np.mean(fm)),
            "ks_limit_plus_vs_exp1": ks_plus_exp1,
            "ks_limit_minus_vs_exp1": ks_minus_exp1,
            "p_limit_plus_vs_exp1": p_plus,
            "p_limit_minus_vs_exp1": p_minus,
            "fitted_exponential_mean": fitted_mean,
            "ks_limit_plus_vs_fitted_exponential": ks_fitted,
            "endpoint_rank_correlation": rho_spearman,
            "ks_two_sample_plus": two_plus,
            "ks_two_sample_minus": two_minus,
        },
        samples={"limit_plus": zp, "limit_minus": zm,
                 "finite_plus": fp, "finite_minus": fm},
    )
    report.runtime = time.time() - t0
    return report


# -- translation experiment for the square ---------------------------------------

def translation_box_experiment(n=5000, replicates=10000, seed=0,
                               s_max=DEFAULT_S_MAX, t_horizon=100.0,
                               simulate_via_marks=False):
    """Translation-only limit cell of the square: a box of Exp(1/2) extents.

    The limit extents along +-e1, +-e2 are the minima of four independent
    rate-1/2 Poisson arrival streams, one per facet normal.  The analytic
    oracle draws those minima directly; optionally the extents are also
    read off a simulated mark process.  Finite-n: the scaled feasible
    translations n(K - max/min of the sample coordinates).
    """
    t0 = time.time()
    body = cube(2)
    extents = np.zeros((replicates, 4))
    for i in range(replicates):
        rng = spawn_rng(seed, 0, i)
        if simulate_via_marks:
            cell = build_zero_cell(body, 0.0, rng=rng, t_max=t_horizon)
            restricted = restrict_to_cone(cell, cone_preset("translations",
                                                            2))
            dirs = np.array([[1.0, 0], [-1.0, 0], [0, 1.0], [0, -1.0]])
            extents[i] = [min(restricted.extent(u), s_max) for u in dirs]
        else:
            # Minimum of a rate-1/2 stream per facet is Exp(1/2) exactly.
            extents[i] = np.minimum(rng.exponential(2.0, size=4), s_max)

    finite = np.zeros((replicates, 4))
    for i in range(replicates):
        rng = spawn_rng(seed, 1, i)
        pts = uniform_sample(body, n, rng=rng)
        hi = pts.max(axis=0)
        lo = pts.min(axis=0)
        finite[i] = n * np.array([1 - hi[0], 1 + lo[0], 1 - hi[1],
                                  1 + lo[1]])
    finite = np.minimum(finite, s_max)

    exp_half = stats.expon(scale=2.0).cdf
    ks = [ks_statistic(extents[:, j], exp_half)[0] for j in range(4)]
    corr = []
    for a in range(4):
        for b in range(a + 1, 4):
            corr.append(float(stats.spearmanr(extents[:, a],
                                              extents[:, b]).statistic))
    two = [float(stats.ks_2samp(extents[:, j], finite[:, j]).statistic)
           for j in range(4)]
    ks_finite = [ks_statistic(finite[:, j], exp_half)[0] for j in range(4)]

    report = ExperimentReport(
        name="translation-box",
        config={"n": n, "replicates": replicates, "s_max": s_max,
                "simulate_via_marks": simulate_via_marks},
        seed=seed,
        statistics={
            "ks_limit_vs_exp_half": ks,
            "ks_finite_vs_exp_half": ks_finite,
            "ks_two_sample": two,
            "pairwise_rank_correlations": corr,
            "max_abs_correlation": float(np.max(np.abs(corr))),
        },
        samples={"limit_extents": extents, "finite_extents": finite},
    )
    report.runtime = time.time() - t0
    return report


# -- inclusion functional ---------------------------------------------------------

def inclusion_functional_estimate(body, cone, test_points, n=2000,
                                  replicates=10000, seed=0,
                                  window_radius=None):
    """Empirical inclusion probabilities Prob{L in X} on both pipelines.

    test_points are cone-subspace coordinate vectors.  The finite-n side
    checks membership of every test point in the reflected scaled
    feasible set (the limit of n X_n is the reflected cell); the limit
    side checks them in the restricted simulated cell.
    """
    t0 = time.time()
    test_points = np.atleast_2d(np.asarray(test_points, dtype=float))
    if window_radius is None:
        window_radius = float(
            max(np.linalg.norm(cone.embed(c)) for c in test_points)) + 1.0

    limit_hits = 0
    for i in range(replicates):
        rng = spawn_rng(seed, 0, i)
        cell = build_zero_cell(body, window_radius, rng=rng)
        restricted = restrict_to_cone(cell, cone)
        if bool(np.all(restricted.contains(test_points))):
            limit_hits += 1

    finite_hits = 0
    for i in range(replicates):
        rng = spawn_rng(seed, 1, i)
        pts = uniform_sample(body, n, rng=rng)
        # n X_n converges to the reflected cell: test the negated points.
        ok = all(xn_membership(-cone.embed(c), pts, n, body)
                 for c in test_points)
        finite_hits += bool(ok)

    report = ExperimentReport(
        name="inclusion",
        config={"n": n, "replicates": replicates,
                "cone": cone.name, "points": test_points.tolist(),
                "window_radius": window_radius},
        seed=seed,
        statistics={
            "limit_frequency": limit_hits / replicates,
            "finite_frequency": finite_hits / replicates,
            "difference": abs(limit_hits - finite_hits) / replicates,
        },
    )
    report.runtime = time.time() - t0
    return report


# -- dual-cone intensity experiment ------------------------------------------------

def dual_cone_intensity_experiment(d=2, target_points=100000, seed=0,
                                   r_min_factor=10.0, r_max=1.0):
    """Radial-intensity exponent of the scaled dual-cone point process.

    Flat-part marks (t, y, -axis) of the unit half-ball are mapped to
    points p = y / t in R^(d-1); their intensity is proportional to
    |p|^(-d).  The exponent is estimated by weighted log-log regression
    of shell densities; the proportionality constant is not checked.
    """
    t0 = time.time()
    rng = spawn_rng(seed)
    kd = math.pi ** (d / 2) / math.gamma(d / 2 + 1)
    kdm1 = math.pi ** ((d - 1) / 2) / math.gamma((d - 1) / 2 + 1)
    flat_rate = kdm1 / (kd / 2.0)  # flat-disk area over half-ball volume

    # Points with |p| >= a all come from marks with t <= 1/a.
    mass_above = _dual_tail_mass(d)
    a = mass_above / target_points
    t_horizon = 1.0 / a
    count = rng.poisson(flat_rate * t_horizon)
    t = t_horizon * (1.0 - rng.random(count))
    if d == 2:
        y = (2.0 * rng.random(count) - 1.0)[:, None]
    else:
        y = uniform_sample(Ball(1.0, d - 1), count, rng=rng)
    p = y / t[:, None]
    r = np.linalg.norm(p, axis=1)
    keep = (r >= a) & (r <= r_max)
    r = r[keep]

    edges = np.geomspace(a, r_max, 40)
    counts, _ = np.histogram(r, bins=edges)
    mids = np.sqrt(edges[:-1] * edges[1:])
    shell = _shell_volume(edges, d - 1)
    good = counts > 20
    x = np.log(mids[good])
    yv = np.log(counts[good] / shell[good])
    w = counts[good].astype(float)  # Poisson counts: weight by counts
    slope, intercept = np.polyfit(x, yv, 1, w=np.sqrt(w))

    report = ExperimentReport(
        name="dual-cone-intensity",
        config={"d": d, "target_points": target_points, "r_max": r_max},
        seed=seed,
        statistics={
            "slope": float(slope),
            "expected_slope": float(-d),
            "points_used": int(np.sum(counts)),
        },
        samples={"radii": r},
    )
    report.runtime = time.time() - t0
    return report


def _dual_tail_mass(d):
    """a * (expected number of dual points with |p| >= a), a constant."""
    kd = math.pi ** (d / 2) / math.gamma(d / 2 + 1)
    if d == 2:
        sigma = 2.0  # 0-sphere
    else:
        sigma = 2 * math.pi ** ((d - 1) / 2) / math.gamma((d - 1) / 2)
    return 2.0 * sigma / (kd * d)


def _shell_volume(edges, k):
    """Volumes of spherical shells in R^k between consecutive radii."""
    kk = math.pi ** (k / 2) / math.gamma(k / 2 + 1)
    vols = kk * edges ** k
    return np.diff(vols)
