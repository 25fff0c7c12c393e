"""Geodesic congruences: trajectories, parallel frames, curvature endomorphisms.

A timelike unit geodesic c carries an orthonormal frame E_1..E_{n-1} of its
normal bundle N(c) = (c')^perp.  A null geodesic beta carries a
pseudo-orthonormal completion {beta', nvec, E_1..E_{n-2}} with
g(nvec, beta') = -1 and g(nvec, nvec) = 0; the spacelike E_i represent the
quotient N(beta)/[beta'], which is where the curvature endomorphism lives.
All endomorphisms are reported as matrices in these frames.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from . import manifold
from .errors import FrameDegeneracy, IntegratorFailure, ZeroVector
from .manifold import (MetricField, ScalarField, christoffel,
                       christoffel_unchecked, riemann)
from .numerics import DEFAULT_ATOL, DEFAULT_RTOL, ode_solve, uniform_grid

TIMELIKE = "timelike"
NULL = "null"


@dataclass
class GeodesicTrajectory:
    """An affinely parametrized geodesic with dense interpolation."""

    metric: MetricField
    character: str
    norm: float
    t0: float
    t1: float
    ts: np.ndarray
    points: np.ndarray
    velocities: np.ndarray
    stats: dict
    exited_domain: bool = False
    _sol: object = field(default=None, repr=False)

    def point(self, t):
        return self._sol.sol(t)[: self.metric.dim]

    def velocity(self, t):
        return self._sol.sol(t)[self.metric.dim:]

    @property
    def span(self):
        return (self.t0, self.t1)


def integrate_geodesic(g: MetricField, p0, v0, span, rtol=DEFAULT_RTOL,
                       atol=DEFAULT_ATOL, normalize=True, n_samples=200) -> GeodesicTrajectory:
    """Solve c'' + Gamma(c', c') = 0 from (p0, v0) over span.

    Timelike initial velocities are rescaled to g(v, v) = -1 unless
    normalize=False.  If the trajectory exits the declared coordinate domain
    the partial trajectory is returned with exited_domain set.
    """
    n = g.dim
    p0 = np.asarray(p0, dtype=float)
    v0 = np.asarray(v0, dtype=float)
    if np.all(v0 == 0.0):
        raise ZeroVector("geodesic needs a nonzero initial velocity")
    q = g.inner(p0, v0, v0)
    character = manifold.causal_character(g, p0, v0)
    if character == "spacelike":
        raise ValueError("only timelike or null geodesics are supported")
    if character == TIMELIKE and normalize:
        v0 = v0 / np.sqrt(-q)
        q = -1.0
    norm = 0.0 if character == NULL else q

    def rhs(t, y):
        x, v = y[:n], y[n:]
        gamma = christoffel_unchecked(g, x)
        acc = -np.einsum("abc,b,c->a", gamma, v, v)
        return np.concatenate([v, acc])

    events = None
    if g.domain is not None:
        events = []
        for c, (lo, hi) in enumerate(g.domain):
            if np.isfinite(lo):
                ev = (lambda t, y, c=c, lo=lo: y[c] - lo)
                ev.terminal = True
                events.append(ev)
            if np.isfinite(hi):
                ev = (lambda t, y, c=c, hi=hi: hi - y[c])
                ev.terminal = True
                events.append(ev)

    sol = ode_solve(rhs, span, np.concatenate([p0, v0]), rtol=rtol, atol=atol,
                    events=events)
    exited = sol.status == 1
    t_end = sol.t[-1]
    ts = uniform_grid(span[0], t_end, n=max(n_samples, 2 * len(sol.t)))
    states = sol.sol(ts)
    traj = GeodesicTrajectory(
        metric=g, character=character, norm=norm, t0=span[0], t1=t_end,
        ts=ts, points=states[:n].T.copy(), velocities=states[n:].T.copy(),
        stats={"nfev": sol.nfev, "n_steps": len(sol.t), "status": sol.status},
        exited_domain=exited, _sol=sol)
    _check_norm_conservation(traj)
    return traj


def _check_norm_conservation(traj: GeodesicTrajectory, tol=1e-8):
    worst = 0.0
    for p, v in zip(traj.points, traj.velocities):
        worst = max(worst, abs(traj.metric.inner(p, v, v) - traj.norm))
    if worst > tol:
        raise IntegratorFailure(
            f"geodesic norm drift {worst:.3e} exceeds {tol:.1e}; tighten tolerances")
    traj.stats["norm_drift"] = worst


def geodesic_residual(traj: GeodesicTrajectory, t, delta=1e-4) -> float:
    """|c'' + Gamma(c', c')| via central differencing of the dense velocity."""
    g = traj.metric
    x = traj.point(t)
    v = traj.velocity(t)
    acc = (traj.velocity(t + delta) - traj.velocity(t - delta)) / (2.0 * delta)
    gamma = christoffel(g, x)
    return float(np.linalg.norm(acc + np.einsum("abc,b,c->a", gamma, v, v)))


# ---------------------------------------------------------------------------
# parallel frames
# ---------------------------------------------------------------------------

@dataclass
class FrameField:
    """Parallel frame along a geodesic.

    For timelike geodesics vectors(t) has n-1 rows spanning (c')^perp.  For
    null geodesics it has n-2 spacelike rows representing the quotient
    bundle, and null_partner(t) returns the auxiliary null vector nvec with
    g(nvec, beta') = -1 that completes the pseudo-orthonormal frame.
    """

    geodesic: GeodesicTrajectory
    k: int
    reorth_events: list
    _segments: list = field(repr=False, default_factory=list)

    def _segment_for(self, t):
        for (a, b, sol) in self._segments:
            lo, hi = (a, b) if a <= b else (b, a)
            if lo - 1e-12 <= t <= hi + 1e-12:
                return sol
        raise ValueError(f"t={t} outside frame range")

    def _stack(self, t):
        n = self.geodesic.metric.dim
        rows = self._segment_for(t).sol(t).reshape(-1, n)
        return rows

    def vectors(self, t) -> np.ndarray:
        rows = self._stack(t)
        return rows[1:] if self.geodesic.character == NULL else rows

    def null_partner(self, t) -> np.ndarray:
        if self.geodesic.character != NULL:
            raise ValueError("null partner only exists along null geodesics")
        return self._stack(t)[0]

    def gram_residual(self, t) -> float:
        geo = self.geodesic
        g = geo.metric.at(geo.point(t))
        E = self.vectors(t)
        resid = np.max(np.abs(E @ g @ E.T - np.eye(self.k)))
        v = geo.velocity(t)
        resid = max(resid, np.max(np.abs(E @ g @ v)))
        if geo.character == NULL:
            nv = self.null_partner(t)
            resid = max(resid, abs(float(nv @ g @ nv)),
                        abs(float(nv @ g @ v) + 1.0),
                        np.max(np.abs(E @ g @ nv)))
        return float(resid)

    def transport_residual(self, t, delta=1e-4) -> float:
        """|E' + Gamma(c', E)| via central differencing of the dense frame."""
        geo = self.geodesic
        E_dot = (self._stack(t + delta) - self._stack(t - delta)) / (2.0 * delta)
        gamma = christoffel(geo.metric, geo.point(t))
        v = geo.velocity(t)
        covariant = E_dot + np.einsum("abc,b,ic->ia", gamma, v, self._stack(t))
        return float(np.max(np.abs(covariant)))


def _project_out_unit_timelike(g, w, u):
    # u unit timelike: w -> w + g(w,u) u is g-orthogonal to u
    return w + float(w @ g @ u) * u


def _gram_schmidt_spacelike(g, candidates, against, k, pivot_tol=1e-10):
    """Pick k g-orthonormal spacelike vectors from candidates, g-orthogonal
    to every vector in against (given with their dual coefficients applied)."""
    chosen = []
    pool = [np.asarray(c, dtype=float) for c in candidates]
    while len(chosen) < k:
        best, best_norm = None, -1.0
        for c in pool:
            w = c.copy()
            for reduce in against:
                w = reduce(w)
            for e in chosen:
                w = w - float(w @ g @ e) * e
            nrm = float(w @ g @ w)
            if nrm > best_norm:
                best, best_norm = w, nrm
        if best is None or best_norm < pivot_tol:
            raise FrameDegeneracy(
                f"Gram-Schmidt pivot {best_norm:.3e} below {pivot_tol:.1e}")
        chosen.append(best / np.sqrt(best_norm))
    return chosen


def _initial_frame(g: MetricField, p, v, character):
    n = g.dim
    G = g.at(p)
    candidates = list(np.eye(n))
    if character == TIMELIKE:
        def reduce(w, u=v, G=G):
            return _project_out_unit_timelike(G, w, u)
        E = _gram_schmidt_spacelike(G, candidates, [reduce], n - 1)
        return np.array(E)
    # null: build nvec from a unit timelike seed, then n-2 spacelike reps
    eigval, eigvec = np.linalg.eigh(G)
    tdir = eigvec[:, 0]
    T = tdir / np.sqrt(-float(tdir @ G @ tdir))
    a = float(T @ G @ v)
    if abs(a) < 1e-12:
        raise FrameDegeneracy("degenerate null direction")
    alpha = -1.0 / a
    nvec = alpha * T + (alpha / (2.0 * a)) * v

    def reduce(w, G=G, k=v, nv=nvec):
        # remove k- and nvec-components using the dual pairing g(k, nvec) = -1
        return w + float(w @ G @ nv) * k + float(w @ G @ k) * nv

    E = _gram_schmidt_spacelike(G, candidates, [reduce], n - 2)
    return np.vstack([nvec, np.array(E)])


def parallel_frame(g: MetricField, geo: GeodesicTrajectory,
                   reorth_threshold=1e-6, rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL,
                   n_checks=32) -> FrameField:
    """Propagate a frame by the parallel-transport ODE along geo.

    The frame is built once at the start by Gram-Schmidt and then transported
    without re-orthogonalization, so transport error stays observable.  A
    drift monitor re-orthogonalizes only when the Gram residual exceeds
    reorth_threshold and records each such event.
    """
    n = g.dim
    k = n - 1 if geo.character == TIMELIKE else n - 2
    stack0 = _initial_frame(g, geo.point(geo.t0), geo.velocity(geo.t0),
                            geo.character)

    def rhs(t, y):
        x = geo.point(t)
        v = geo.velocity(t)
        gamma = christoffel_unchecked(g, x)
        E = y.reshape(-1, n)
        dE = -np.einsum("abc,b,ic->ia", gamma, v, E)
        return dE.ravel()

    frame = FrameField(geodesic=geo, k=k, reorth_events=[])
    nodes = np.linspace(geo.t0, geo.t1, n_checks + 1)
    current = stack0
    for a, b in zip(nodes[:-1], nodes[1:]):
        sol = ode_solve(rhs, (a, b), current.ravel(), rtol=rtol, atol=atol)
        frame._segments.append((a, b, sol))
        current = sol.sol(b).reshape(-1, n)
        drift = frame.gram_residual(b)
        if drift > reorth_threshold:
            frame.reorth_events.append((float(b), float(drift)))
            current = _reorthogonalize(g, geo, b, current)
    return frame


def _reorthogonalize(g, geo, t, stack):
    G = g.at(geo.point(t))
    v = geo.velocity(t)
    if geo.character == TIMELIKE:
        def reduce(w, u=v, G=G):
            return _project_out_unit_timelike(G, w, u)
        E = _gram_schmidt_spacelike(G, list(stack), [reduce], stack.shape[0])
        return np.array(E)
    nvec = stack[0]
    # restore g(nvec, v) = -1 and g(nvec, nvec) = 0, then re-run the spacelike GS
    nvec = nvec / (-float(nvec @ G @ v))
    nvec = nvec - 0.5 * float(nvec @ G @ nvec) * v

    def reduce(w, G=G, kv=v, nv=nvec):
        return w + float(w @ G @ nv) * kv + float(w @ G @ kv) * nv

    E = _gram_schmidt_spacelike(G, list(stack[1:]), [reduce], stack.shape[0] - 1)
    return np.vstack([nvec, np.array(E)])


# ---------------------------------------------------------------------------
# curvature endomorphisms
# ---------------------------------------------------------------------------

def curvature_endomorphism(g: MetricField, geo: GeodesicTrajectory,
                           frame: FrameField, t) -> np.ndarray:
    """Matrix of v -> R(v, c') c' on the frame at parameter t.

    Entries M[j, i] = g(R(E_i, c') c', E_j); the matrix is self-adjoint in an
    orthonormal frame.  Along null geodesics the same formula computed on
    quotient representatives is well defined because R(beta', beta') = 0.
    """
    p = geo.point(t)
    v = geo.velocity(t)
    G = g.at(p)
    R = riemann(g, p)
    E = frame.vectors(t)
    # (R(E_i, c') c')^a = R^a_{bcd} c'^b E_i^c c'^d
    img = np.einsum("abcd,b,ic,d->ia", R, v, E, v)
    return np.einsum("jb,ab,ia->ji", E, G, img)


def modified_endomorphism(g: MetricField, f: ScalarField,
                          geo: GeodesicTrajectory, frame: FrameField, t) -> np.ndarray:
    """Weighted endomorphism R_f = R + (Hess f(c',c')/d) E + ((f o c)'/d)^2 E.

    d is the frame dimension (n-1 timelike, n-2 on the null quotient); the
    same normalization enters the weighted expansion, so the trace identity
    closes with matching coefficients in both cases.
    """
    d = frame.k
    p = geo.point(t)
    v = geo.velocity(t)
    hess_cc = float(v @ manifold.hessian_scalar(g, f, p) @ v)
    fprime = float(f.gradient(p) @ v)
    base = curvature_endomorphism(g, geo, frame, t)
    return base + (hess_cc / d + (fprime / d) ** 2) * np.eye(d)


def quotient_invariance_residual(g: MetricField, geo: GeodesicTrajectory,
                                 frame: FrameField, t, shift=0.37) -> float:
    """Change of endomorphism matrix under E_i -> E_i + shift * beta'.

    Must vanish (<= 1e-7) for the quotient-bundle reduction to be well
    defined."""
    if geo.character != NULL:
        raise ValueError("quotient invariance only applies to null geodesics")
    base = curvature_endomorphism(g, geo, frame, t)
    p = geo.point(t)
    v = geo.velocity(t)
    G = g.at(p)
    R = riemann(g, p)
    E = frame.vectors(t) + shift * v[None, :]
    img = np.einsum("abcd,b,ic,d->ia", R, v, E, v)
    shifted = np.einsum("jb,ab,ia->ji", frame.vectors(t), G, img)
    return float(np.max(np.abs(shifted - base)))


class EndomorphismSeries:
    """Sampled (and spline-interpolated) R(t), R_f(t) along a geodesic.

    Also carries the scalar series (f o c), (f o c)' and Hess f(c', c') used
    by the congruence diagnostics.  Calling the series evaluates R(t); the
    weighted endomorphism is available via .modified(t).
    """

    def __init__(self, ts, R_samples, f_vals=None, fprime=None, hess_cc=None):
        self.ts = np.asarray(ts, dtype=float)
        self.R_samples = np.asarray(R_samples, dtype=float)
        self.dim = self.R_samples.shape[-1]
        self._rspline = CubicSpline(self.ts, self.R_samples, axis=0)
        self.f_vals = None if f_vals is None else np.asarray(f_vals, dtype=float)
        self.fprime_vals = None if fprime is None else np.asarray(fprime, dtype=float)
        self.hess_cc_vals = None if hess_cc is None else np.asarray(hess_cc, dtype=float)
        self._fprime_spline = (None if fprime is None
                               else CubicSpline(self.ts, self.fprime_vals))
        self._hess_spline = (None if hess_cc is None
                             else CubicSpline(self.ts, self.hess_cc_vals))

    def __call__(self, t):
        return self._rspline(t)

    def fprime(self, t):
        return 0.0 if self._fprime_spline is None else float(self._fprime_spline(t))

    def modified(self, t):
        R = self._rspline(t)
        if self._hess_spline is None and self._fprime_spline is None:
            return R
        d = self.dim
        hess = 0.0 if self._hess_spline is None else float(self._hess_spline(t))
        fp = self.fprime(t)
        return R + (hess / d + (fp / d) ** 2) * np.eye(d)

    def symmetry_residual(self) -> float:
        return float(np.max(np.abs(self.R_samples
                                   - np.swapaxes(self.R_samples, 1, 2))))


def endomorphism_series(g: MetricField, geo: GeodesicTrajectory,
                        frame: FrameField, ts=None,
                        f: ScalarField | None = None) -> EndomorphismSeries:
    if ts is None:
        ts = uniform_grid(geo.t0, geo.t1, n=max(400, 4 * len(geo.ts)))
    ts = np.asarray(ts, dtype=float)
    R = np.array([curvature_endomorphism(g, geo, frame, t) for t in ts])
    if f is None:
        return EndomorphismSeries(ts, R)
    f_vals, fp, hcc = [], [], []
    for t in ts:
        p = geo.point(t)
        v = geo.velocity(t)
        f_vals.append(f.at(p))
        fp.append(float(f.gradient(p) @ v))
        hcc.append(float(v @ manifold.hessian_scalar(g, f, p) @ v))
    return EndomorphismSeries(ts, R, f_vals=f_vals, fprime=fp, hess_cc=hcc)


def constant_endomorphism(value, k: int) -> EndomorphismSeries:
    """Prescribed constant R(t) (a scalar multiple of the identity, or a
    fixed matrix) wrapped with the same interface as metric-derived series.

    The nominal sample grid is irrelevant: a constant spline evaluates to the
    same matrix everywhere, including outside the grid.
    """
    value = np.asarray(value, dtype=float)
    mat = value if value.ndim == 2 else float(value) * np.eye(k)
    ts = np.linspace(0.0, 1.0, 5)
    return EndomorphismSeries(ts, np.repeat(mat[None, :, :], 5, axis=0))
