"""Built-in spacetimes, weight functions, and certified scenario bundles.

Every scenario carries a manifest of expected values with provenance tags
("closed-form", "derived", "certified"); Scenario.validate() re-checks the
manifest entries numerically, so a corrupted construction fails on load.

The spheres are charted by standard angles with a small margin away from the
polar coordinate singularities; the declared geodesics run along the equator
where the chart is uniformly regular.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import manifold
from .comparison import SampleSpec, sample_plan
from .manifold import (INFINITE_M, BakryEmeryParams, MetricField, ScalarField,
                       christoffel, constant_scalar, ricci, riemann_lowered)

POLE_MARGIN = 1e-3


# ---------------------------------------------------------------------------
# round-sphere components in the angular chart
# ---------------------------------------------------------------------------

def _sphere_diag(angles):
    """h_ii = prod_{j<i} sin^2(a_j) for the unit round sphere."""
    d = len(angles)
    h = np.ones(d)
    for i in range(1, d):
        h[i] = h[i - 1] * math.sin(angles[i - 1]) ** 2
    return h


def _sphere_diag_d(angles):
    """dh[k, i] = d_k h_ii."""
    d = len(angles)
    h = _sphere_diag(angles)
    dh = np.zeros((d, d))
    for i in range(d):
        for k in range(i):
            dh[k, i] = 2.0 * h[i] / math.tan(angles[k])
    return dh


def _sphere_diag_dd(angles):
    """ddh[k, l, i] = d_k d_l h_ii."""
    d = len(angles)
    h = _sphere_diag(angles)
    ddh = np.zeros((d, d, d))
    for i in range(d):
        for k in range(i):
            ck = 1.0 / math.tan(angles[k])
            sk = math.sin(angles[k])
            ddh[k, k, i] = h[i] * (4.0 * ck ** 2 - 2.0 / sk ** 2)
            for l in range(i):
                if l != k:
                    ddh[k, l, i] = 4.0 * h[i] * ck / math.tan(angles[l])
    return ddh


def _warped_domain(n):
    dom = [(-np.inf, np.inf)]
    for _ in range(n - 2):
        dom.append((POLE_MARGIN, math.pi - POLE_MARGIN))
    dom.append((-np.inf, np.inf))  # azimuthal angle
    return tuple(dom)


def _warped_metric(n, w, dw, ddw, name):
    """-dt^2 + w(t)^2 h on R x S^{n-1}, with analytic derivatives."""

    def matrix(p):
        g = np.zeros((n, n))
        g[0, 0] = -1.0
        h = _sphere_diag(p[1:])
        wt = w(p[0])
        for i in range(1, n):
            g[i, i] = wt ** 2 * h[i - 1]
        return g

    def d_matrix(p):
        dg = np.zeros((n, n, n))
        h = _sphere_diag(p[1:])
        dh = _sphere_diag_d(p[1:])
        wt, dwt = w(p[0]), dw(p[0])
        for i in range(1, n):
            dg[0, i, i] = 2.0 * wt * dwt * h[i - 1]
            for k in range(1, n):
                dg[k, i, i] = wt ** 2 * dh[k - 1, i - 1]
        return dg

    def dd_matrix(p):
        ddg = np.zeros((n, n, n, n))
        h = _sphere_diag(p[1:])
        dh = _sphere_diag_d(p[1:])
        ddh = _sphere_diag_dd(p[1:])
        wt, dwt, ddwt = w(p[0]), dw(p[0]), ddw(p[0])
        for i in range(1, n):
            ddg[0, 0, i, i] = 2.0 * (dwt ** 2 + wt * ddwt) * h[i - 1]
            for k in range(1, n):
                ddg[0, k, i, i] = 2.0 * wt * dwt * dh[k - 1, i - 1]
                ddg[k, 0, i, i] = ddg[0, k, i, i]
                for l in range(1, n):
                    ddg[k, l, i, i] = wt ** 2 * ddh[k - 1, l - 1, i - 1]
        return ddg

    return MetricField(dim=n, matrix=matrix, d_matrix=d_matrix,
                       dd_matrix=dd_matrix, domain=_warped_domain(n), name=name)


def equator_point(n, t=0.0, azimuth=1.0):
    """Chart point on the equator of the sphere factor at time t."""
    p = np.full(n, math.pi / 2.0)
    p[0] = t
    p[-1] = azimuth
    return p


# ---------------------------------------------------------------------------
# weight functions
# ---------------------------------------------------------------------------

def sinh_squared_f(K: float) -> ScalarField:
    """f(t, .) = sinh^2(K t), depending only on the time coordinate."""
    K = float(K)
    if K <= 0.0:
        raise ValueError("K must be positive")

    def value(p):
        return math.sinh(K * p[0]) ** 2

    def grad(p):
        out = np.zeros(len(p))
        out[0] = K * math.sinh(2.0 * K * p[0])
        return out

    def hess(p):
        out = np.zeros((len(p), len(p)))
        out[0, 0] = 2.0 * K ** 2 * math.cosh(2.0 * K * p[0])
        return out

    return ScalarField(value=value, grad=grad, hess=hess,
                       name=f"sinh_squared(K={K})")


def linear_time_f(a: float) -> ScalarField:
    a = float(a)

    def grad(p):
        out = np.zeros(len(p))
        out[0] = a
        return out

    return ScalarField(value=lambda p: a * p[0], grad=grad,
                       hess=lambda p: np.zeros((len(p), len(p))),
                       name=f"linear(a={a})")


# ---------------------------------------------------------------------------
# scenarios
# ---------------------------------------------------------------------------

@dataclass
class GeodesicSpec:
    label: str
    p0: np.ndarray
    v0: np.ndarray
    span: tuple
    character: str


@dataclass
class Scenario:
    name: str
    metric: MetricField
    weight: ScalarField
    params: BakryEmeryParams
    geodesics: list
    manifest: dict
    uniqueness: object = None
    default_checks: tuple = ()
    expectations: dict = field(default_factory=dict)
    notes: str = ""

    def geodesic(self, label):
        for spec in self.geodesics:
            if spec.label == label:
                return spec
        raise KeyError(label)

    def manifest_json(self):
        return {"name": self.name, "manifest": self.manifest,
                "default_checks": list(self.default_checks)}

    def validate(self, tol_scale=1.0):
        """Re-check every manifest entry; raises AssertionError on mismatch."""
        for key, entry in self.manifest.items():
            kind = entry["kind"]
            tol = entry.get("tol", 1e-8) * tol_scale
            pts = [np.asarray(p, dtype=float) for p in entry.get("points", [])]
            if kind == "flat":
                for p in pts:
                    R = manifold.riemann(self.metric, p)
                    assert np.max(np.abs(R)) <= tol, f"{self.name}:{key}"
            elif kind == "ricci_proportional":
                lam = entry["lambda"]
                for p in pts:
                    G = self.metric.at(p)
                    res = np.max(np.abs(ricci(self.metric, p) - lam * G))
                    assert res <= tol, f"{self.name}:{key} residual {res}"
            elif kind == "constant_curvature":
                kappa = entry["K"]
                for p in pts:
                    G = self.metric.at(p)
                    expected = kappa * (np.einsum("ac,bd->abcd", G, G)
                                        - np.einsum("ad,bc->abcd", G, G))
                    res = np.max(np.abs(riemann_lowered(self.metric, p) - expected))
                    assert res <= tol, f"{self.name}:{key} residual {res}"
            elif kind == "geodesic_residual":
                # spot check at the start point; full-trajectory residuals are
                # enforced by the integrator's norm and residual guards
                for spec in self.geodesics:
                    gamma = christoffel(self.metric, spec.p0)
                    acc = np.einsum("abc,b,c->a", gamma, spec.v0, spec.v0)
                    res = np.linalg.norm(acc)
                    assert res <= tol, f"{self.name}:{key}:{spec.label} {res}"
            else:
                raise ValueError(f"unknown manifest kind {kind}")
        return True


def minkowski(n: int) -> Scenario:
    """Flat space with zero weight."""
    if n < 2:
        raise ValueError("n >= 2 required")
    eta = np.eye(n)
    eta[0, 0] = -1.0
    g = MetricField(
        dim=n, matrix=lambda p: eta,
        d_matrix=lambda p: np.zeros((n, n, n)),
        dd_matrix=lambda p: np.zeros((n, n, n, n)),
        name=f"minkowski{n}")
    e_t = np.zeros(n)
    e_t[0] = 1.0
    null_v = e_t.copy()
    null_v[1] = 1.0
    geos = [GeodesicSpec("comoving", np.zeros(n), e_t, (0.0, 10.0), "timelike")]
    if n >= 2:
        geos.append(GeodesicSpec("null_x", np.zeros(n), null_v, (0.0, 5.0), "null"))
    pts = [np.zeros(n), 0.3 * np.arange(n, dtype=float) + 0.1]
    manifest = {
        "flat": {"kind": "flat", "points": [p.tolist() for p in pts],
                 "tol": 1e-10, "provenance": "closed-form"},
        "geodesics": {"kind": "geodesic_residual", "tol": 1e-12,
                      "provenance": "closed-form"},
    }
    hyperboloid_base = np.zeros(n)
    hyperboloid_base[0] = 1.0
    expectations = {
        "f_generic": {"comoving": False},
        "conjugate": {"expect": "none"},
        "f_laplacian": {"mode": "flat", "m": 2.0, "rhos": [0.5, 1.0, 2.0, 5.0]},
        "mean_curvature": [{"label": "unit_hyperboloid",
                            "base": hyperboloid_base.tolist(),
                            "normal": hyperboloid_base.tolist(),
                            "shape": "identity", "span": [0.0, 2.0]}],
    }
    return Scenario(
        name=f"minkowski{n}", metric=g, weight=constant_scalar(0.0),
        params=BakryEmeryParams(m=INFINITE_M, k=0.0), geodesics=geos,
        manifest=manifest, uniqueness=lambda a, q: True,
        default_checks=("metric_invariants", "raychaudhuri_residual",
                        "lagrange_conservation", "trace_identity",
                        "check_timelike_convergence", "check_f_generic",
                        "schwarz_gap", "f_laplacian_bounds",
                        "mean_curvature_evolution", "conjugate_points"),
        expectations=expectations,
        notes="flat reference scenario")


def de_sitter(n: int) -> Scenario:
    """Global slicing of de Sitter space, g = -dt^2 + cosh^2(t) h.

    The warp is cosh(t): this is the unique warping of R x S^{n-1} over the
    unit round sphere with Ric = (n-1) g (sectional curvature +1), which the
    manifest re-validates on load.  Unit timelike vectors then have
    Ric(v, v) = -(n-1), so the unweighted timelike convergence condition
    fails everywhere.
    """
    if n < 3:
        raise ValueError("n >= 3 required (needs a sphere factor)")

    def matrix(p):
        g = np.zeros((n, n))
        g[0, 0] = -1.0
        h = _sphere_diag(p[1:])
        c2 = math.cosh(p[0]) ** 2
        for i in range(1, n):
            g[i, i] = c2 * h[i - 1]
        return g

    def d_matrix(p):
        dg = np.zeros((n, n, n))
        h = _sphere_diag(p[1:])
        dh = _sphere_diag_d(p[1:])
        s2 = math.sinh(2.0 * p[0])
        c2 = math.cosh(p[0]) ** 2
        for i in range(1, n):
            dg[0, i, i] = s2 * h[i - 1]
            for k in range(1, n):
                dg[k, i, i] = c2 * dh[k - 1, i - 1]
        return dg

    def dd_matrix(p):
        ddg = np.zeros((n, n, n, n))
        h = _sphere_diag(p[1:])
        dh = _sphere_diag_d(p[1:])
        ddh = _sphere_diag_dd(p[1:])
        c2t = 2.0 * math.cosh(2.0 * p[0])
        s2 = math.sinh(2.0 * p[0])
        c2 = math.cosh(p[0]) ** 2
        for i in range(1, n):
            ddg[0, 0, i, i] = c2t * h[i - 1]
            for k in range(1, n):
                ddg[0, k, i, i] = s2 * dh[k - 1, i - 1]
                ddg[k, 0, i, i] = ddg[0, k, i, i]
                for l in range(1, n):
                    ddg[k, l, i, i] = c2 * ddh[k - 1, l - 1, i - 1]
        return ddg

    g = MetricField(dim=n, matrix=matrix, d_matrix=d_matrix,
                    dd_matrix=dd_matrix, domain=_warped_domain(n),
                    name=f"de_sitter{n}")
    e_t = np.zeros(n)
    e_t[0] = 1.0
    p0 = equator_point(n, t=-1.2)
    null_v = e_t.copy()
    null_v[-1] = 1.0 / math.cosh(0.0)
    pts = [equator_point(n, 0.0), equator_point(n, 0.7, azimuth=0.4),
           equator_point(n, -1.3, azimuth=2.0)]
    pts[1][1] = 1.1  # off-equator spot check
    manifest = {
        "einstein": {"kind": "ricci_proportional", "lambda": float(n - 1),
                     "points": [p.tolist() for p in pts], "tol": 1e-6,
                     "provenance": "closed-form"},
        "constant_curvature": {"kind": "constant_curvature", "K": 1.0,
                               "points": [p.tolist() for p in pts], "tol": 1e-6,
                               "provenance": "derived"},
        "geodesics": {"kind": "geodesic_residual", "tol": 1e-10,
                      "provenance": "closed-form"},
    }

    def uniqueness(apex, q):
        apex = np.asarray(apex, dtype=float)
        q = np.asarray(q, dtype=float)
        return (np.max(np.abs(apex[1:] - q[1:])) < 1e-9
                and abs(apex[0]) <= 2.5 and abs(q[0]) <= 2.5)

    slice_base = equator_point(n, 0.0)
    expectations = {
        "f_generic": {"comoving": True},
        "conjugate": {"expect": "none"},
        "mean_curvature": [{"label": "t0_slice", "base": slice_base.tolist(),
                            "normal": e_t.tolist(), "shape": 0.0,
                            "span": [0.0, 1.5]}],
    }
    return Scenario(
        name=f"de_sitter{n}", metric=g, weight=constant_scalar(0.0),
        params=BakryEmeryParams(m=INFINITE_M, k=0.0),
        geodesics=[
            GeodesicSpec("comoving", p0, e_t, (-1.2, 2.2), "timelike"),
            GeodesicSpec("null_equatorial", equator_point(n, 0.0), null_v,
                         (0.0, 2.0), "null"),
        ],
        manifest=manifest, uniqueness=uniqueness,
        default_checks=("metric_invariants", "raychaudhuri_residual",
                        "lagrange_conservation", "trace_identity",
                        "check_f_generic", "schwarz_gap",
                        "mean_curvature_evolution", "conjugate_points"),
        expectations=expectations,
        notes="timelike convergence fails with zero weight; see the weighted variant")


def de_sitter_weighted(n: int, K: float = 2.0) -> Scenario:
    base = de_sitter(n)
    expectations = dict(base.expectations)
    expectations["f_laplacian"] = {
        "mode": "bound_infinite",
        "apex_ts": [0.5, 1.0, 1.5, 2.0],
        "rhos": [0.4, 0.8, 1.2, 1.6, 2.0],
    }
    scen = Scenario(
        name=f"de_sitter{n}_weighted", metric=base.metric,
        weight=sinh_squared_f(K),
        params=BakryEmeryParams(m=INFINITE_M, k=None),
        geodesics=base.geodesics, manifest=base.manifest,
        uniqueness=base.uniqueness,
        default_checks=base.default_checks + ("check_timelike_convergence",
                                              "f_laplacian_bounds"),
        expectations=expectations,
        notes=f"de Sitter with weight sinh^2({K} t); convergence certified by sampling")
    return scen


def warped_product(warp, fiber_einstein_lambda: float, n: int,
                   name: str | None = None) -> Scenario:
    """-dt^2 + phi(t)^2 h_lambda on R x S^{n-1}.

    warp is a triple (phi, phi', phi'') of callables or a key of WARPS; the
    fiber is the round sphere scaled so Ric_fiber = lambda h_lambda.
    """
    if isinstance(warp, str):
        w, dw, ddw, wname = WARPS[warp]
    else:
        w, dw, ddw = warp
        wname = name or "custom"
    lam = float(fiber_einstein_lambda)
    if lam <= 0.0:
        raise ValueError("fiber Einstein constant must be positive")
    r = math.sqrt((n - 2) / lam)
    weff = (lambda t: r * w(t))
    dweff = (lambda t: r * dw(t))
    ddweff = (lambda t: r * ddw(t))
    label = name or f"warped_{wname}_{n}"
    g = _warped_metric(n, weff, dweff, ddweff, label)
    e_t = np.zeros(n)
    e_t[0] = 1.0
    manifest = {
        "geodesics": {"kind": "geodesic_residual", "tol": 1e-10,
                      "provenance": "closed-form"},
    }
    return Scenario(
        name=label, metric=g, weight=constant_scalar(0.0),
        params=BakryEmeryParams(m=INFINITE_M, k=0.0),
        geodesics=[GeodesicSpec("comoving", equator_point(n, 0.0), e_t,
                                (-1.2, 1.2), "timelike")],
        manifest=manifest,
        default_checks=("metric_invariants", "raychaudhuri_residual",
                        "trace_identity"),
        notes="generic warped product")


WARPS = {
    "one": (lambda t: 1.0, lambda t: 0.0, lambda t: 0.0, "one"),
    "cosh": (math.cosh, math.sinh, math.cosh, "cosh"),
    "sech": (lambda t: 1.0 / math.cosh(t),
             lambda t: -math.tanh(t) / math.cosh(t),
             lambda t: (math.tanh(t) ** 2 - 1.0 / math.cosh(t) ** 2) / math.cosh(t),
             "sech"),
    "two_plus_cos": (lambda t: 2.0 + math.cos(t), lambda t: -math.sin(t),
                     lambda t: -math.cos(t), "two_plus_cos"),
}


def einstein_static(n: int) -> Scenario:
    """Product of a line with a unit round sphere.

    Along a tilted equatorial geodesic (boost parameter chi) the curvature
    endomorphism is diag(sinh^2 chi, sinh^2 chi, 0), so the from-a-point
    congruence has a conjugate point at exactly pi/sinh(chi) with det A
    vanishing to even order (no sign change).
    """
    scen = warped_product("one", float(n - 2), n, name=f"einstein_static{n}")
    chi = math.asinh(1.0)
    e_t = np.zeros(n)
    e_t[0] = 1.0
    tilted = np.zeros(n)
    tilted[0] = math.cosh(chi)
    tilted[-1] = math.sinh(chi)  # equatorial azimuthal direction, g-unit there
    null_v = e_t.copy()
    null_v[-1] = 1.0
    scen.geodesics = [
        GeodesicSpec("comoving", equator_point(n, 0.0), e_t, (0.0, 6.0), "timelike"),
        GeodesicSpec("tilted", equator_point(n, 0.0), tilted, (0.0, 4.5), "timelike"),
        GeodesicSpec("null_equatorial", equator_point(n, 0.0), null_v,
                     (0.0, 4.2), "null"),
    ]
    scen.default_checks = ("metric_invariants", "raychaudhuri_residual",
                           "lagrange_conservation", "trace_identity",
                           "conjugate_points")
    scen.expectations = {
        "f_generic": {"comoving": False, "tilted": True},
        "conjugate": {"expect": "even_zero", "at": math.pi,
                      "geodesic": "tilted"},
    }
    scen.notes = "product spacetime; tilted geodesics focus at pi/sinh(chi)"
    return scen


def frw_toy(n: int) -> Scenario:
    """Closed-FRW-style toy with scale factor 2 + cos(t).

    Positive Ric(dt, dt) near t = 0 makes converging congruences focus inside
    the chart, which a cos(t) scale factor cannot do (its chart ends exactly
    where the from-a-point congruence would refocus).
    """
    scen = warped_product("two_plus_cos", float(n - 2), n, name=f"frw_toy{n}")
    scen.geodesics = [GeodesicSpec("comoving", equator_point(n, -1.2),
                                   np.eye(n)[0], (-1.2, 1.2), "timelike")]
    scen.default_checks = ("metric_invariants", "raychaudhuri_residual",
                           "lagrange_conservation", "trace_identity",
                           "conjugate_points")
    scen.expectations = {
        "conjugate": {"expect": "converging", "t1": -1.0,
                      "theta1": -float(n - 1)},
    }
    scen.notes = "toy cosmology with focusing converging congruences"
    return scen


# ---------------------------------------------------------------------------
# certification of the weighted de Sitter family
# ---------------------------------------------------------------------------

@dataclass
class WeightCertification:
    n: int
    K_grid: np.ndarray
    results: list
    K_star: float | None
    findings: list = field(default_factory=list)

    def result_for(self, K):
        for row in self.results:
            if abs(row["K"] - K) < 1e-12:
                return row
        raise KeyError(K)


def certify_weighted_de_sitter(n: int = 4, K_grid=None, spec: SampleSpec | None = None,
                               threshold=-1e-9) -> WeightCertification:
    """Scan weights sinh^2(K t) on de Sitter for the convergence certificate.

    For each K the sampled minimum of Ric_f(v, v) over unit timelike v is
    reported, with the smallest passing K as K_star.  Two pointwise lower
    bounds are tracked alongside: the time-direction bound
    Ric_f(dt, dt) >= 2 K^2 - (n-1), which is asserted, and the all-direction
    display 4 K^2 cosh^2(Kt) - 2 K^2 - K cosh^2(Kt), whose slack is logged
    (it goes negative at small K and at large |t| for boosted directions, so
    violations are findings rather than failures).
    """
    scen = de_sitter(n)
    g = scen.metric
    if K_grid is None:
        K_grid = np.arange(0.5, 6.01, 0.5)
    K_grid = np.asarray(K_grid, dtype=float)
    if spec is None:
        # chi_max = 1 keeps the small-K minimum comparable to the unweighted
        # limit -(n-1); the pass/fail outcome at each K is insensitive to the
        # boost range because the deciding direction sits at chi = 0
        ts = np.arange(-3.0, 3.0001, 0.1)
        pts = np.array([equator_point(n, t) for t in ts])
        spec = SampleSpec(points=pts, n_timelike=16, seed=20240, chi_max=1.0)

    plan = sample_plan(g, spec)
    ric_cache = [manifold.ricci(g, p) for p, _, _ in plan]
    e_t = np.zeros(n)
    e_t[0] = 1.0

    results = []
    findings = []
    for K in K_grid:
        f = sinh_squared_f(K)
        best = np.inf
        ineq1_min = np.inf
        ineq2_min = np.inf
        ineq2_viol = 0
        for (p, dirs, _), ric_p in zip(plan, ric_cache):
            tensor = ric_p + manifold.hessian_scalar(g, f, p)
            t = p[0]
            rhs1 = 2.0 * K ** 2 - (n - 1.0)
            rhs2 = (4.0 * K ** 2 * math.cosh(K * t) ** 2 - 2.0 * K ** 2
                    - K * math.cosh(K * t) ** 2)
            ineq1_min = min(ineq1_min, float(e_t @ tensor @ e_t) - rhs1)
            for v in dirs:
                val = float(v @ tensor @ v)
                best = min(best, val)
                slack2 = val - rhs2
                ineq2_min = min(ineq2_min, slack2)
                if slack2 < -1e-9:
                    ineq2_viol += 1
        passed = best >= threshold
        results.append({"K": float(K), "passed": bool(passed),
                        "min_value": float(best),
                        "ineq1_min_slack": float(ineq1_min),
                        "ineq2_min_slack": float(ineq2_min),
                        "ineq2_violations": int(ineq2_viol)})
        if ineq2_viol:
            findings.append(
                f"K={K:g}: all-direction display bound violated at "
                f"{ineq2_viol} samples (min slack {ineq2_min:.3e})")
        if ineq1_min < -1e-9:
            findings.append(f"K={K:g}: time-direction bound violated "
                            f"(min slack {ineq1_min:.3e})")

    passing = [row["K"] for row in results if row["passed"]]
    K_star = min(passing) if passing else None
    # once the certificate passes it should keep passing on the same samples
    seen_pass = False
    for row in results:
        if row["passed"]:
            seen_pass = True
        elif seen_pass:
            findings.append(f"monotonicity violated at K={row['K']:g}")
    return WeightCertification(n=n, K_grid=K_grid, results=results,
                               K_star=K_star, findings=findings)


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

def _weighted_family(n=4):
    scen = de_sitter_weighted(n)
    scen.name = f"weighted_de_sitter_family{n}"
    scen.default_checks = ("certify_weighted_de_sitter",)
    return scen


BUILTIN_SCENARIOS = {
    "minkowski2": lambda: minkowski(2),
    "minkowski4": lambda: minkowski(4),
    "de_sitter4": lambda: de_sitter(4),
    "de_sitter4_weighted": lambda: de_sitter_weighted(4),
    "einstein_static4": lambda: einstein_static(4),
    "frw_toy4": lambda: frw_toy(4),
    "weighted_de_sitter_family4": _weighted_family,
}

WEIGHTS = {
    "zero": lambda **kw: constant_scalar(0.0),
    "constant": lambda c=0.0, **kw: constant_scalar(c),
    "linear_time": lambda a=1.0, **kw: linear_time_f(a),
    "sinh_squared": lambda K=2.0, **kw: sinh_squared_f(K),
}


def scenario_from_config(source) -> Scenario:
    """Resolve a scenario from a built-in name or a declarative dict."""
    if isinstance(source, str):
        if source not in BUILTIN_SCENARIOS:
            raise KeyError(f"unknown scenario {source!r}")
        return BUILTIN_SCENARIOS[source]()
    builtin = source.get("builtin")
    if builtin not in BUILTIN_SCENARIOS:
        raise KeyError(f"unknown builtin {builtin!r}")
    scen = BUILTIN_SCENARIOS[builtin]()
    if "weight" in source:
        wcfg = dict(source["weight"])
        wtype = wcfg.pop("type")
        scen.weight = WEIGHTS[wtype](**wcfg)
    if "m" in source or "k_bound" in source:
        m = source.get("m", "inf")
        m = INFINITE_M if m in ("inf", "infinity", None) else float(m)
        scen.params = BakryEmeryParams(m=m, k=source.get("k_bound"))
    return scen
