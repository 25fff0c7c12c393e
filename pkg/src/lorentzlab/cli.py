"""Batch front end: load a run config, dispatch checks, emit report + CSV.

Exit codes: 0 all checks passed (or skipped), 1 at least one check failed,
2 configuration or runtime error.  For a fixed seed and tolerances the
written artifacts are byte-identical between runs: no timestamps, canonical
JSON echo, shortest round-trip float formatting, and report lines ordered by
check identifier.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import comparison, jacobi, scenarios
from .comparison import SampleSpec, f_laplacian_distance, schwarz_gap, \
    schwarz_equality_residual
from .errors import ConfigError, LorentzLabError, ParseError, ValidationError
from .jacobi import (NormalCongruenceSpec, detect_conjugate,
                     mean_curvature_evolution, raychaudhuri_residual)
from .manifold import riemann_lowered
from .pipeline import run_point_congruence
from .scenarios import BUILTIN_SCENARIOS, Scenario, certify_weighted_de_sitter

DEFAULTS = {
    "seed": 20240,
    "tolerances": {"rtol": 1e-9, "atol": 1e-11, "residual": 5e-5},
    "samples": {"n_timelike": 16, "chi_max": 3.0},
    "out_dir": "lorentzlab_out",
}

CSV_COLUMNS = ("t", "theta_f", "theta", "det_A", "tr_sigma2", "tr_omega2",
               "residual", "mask")


@dataclass
class RunConfig:
    scenario_source: object
    checks: list
    seed: int
    rtol: float
    atol: float
    residual_tol: float
    n_timelike: int
    chi_max: float
    out_dir: str
    echo: dict = field(default_factory=dict)


@dataclass
class CheckResult:
    name: str
    status: str          # PASS / FAIL / SKIP / ERROR
    summary: str
    tag: str
    series: dict = field(default_factory=dict)


def parse_config(text: str) -> RunConfig:
    """Validate JSON config text; defaults are filled and echoed back."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: "
                         f"{exc.msg}") from exc
    violations = []
    if not isinstance(raw, dict):
        raise ValidationError(["top level must be an object"])
    known_keys = {"scenario", "checks", "seed", "tolerances", "samples", "out_dir"}
    for key in raw:
        if key not in known_keys:
            violations.append(f"unknown field {key!r}")
    scenario = raw.get("scenario")
    if scenario is None:
        violations.append("missing required field 'scenario'")
    elif isinstance(scenario, str):
        if scenario not in BUILTIN_SCENARIOS:
            violations.append(f"unknown scenario {scenario!r}")
    elif not isinstance(scenario, dict):
        violations.append("'scenario' must be a name or an object")

    checks = raw.get("checks", "default")
    if isinstance(checks, str):
        if checks not in ("default", "all"):
            violations.append(f"unknown checks keyword {checks!r}")
    elif isinstance(checks, list):
        for c in checks:
            if c not in CHECKS:
                violations.append(f"unknown check identifier {c!r}")
    else:
        violations.append("'checks' must be a list or 'default'/'all'")

    tol = dict(DEFAULTS["tolerances"])
    tol.update(raw.get("tolerances", {}))
    for key, val in tol.items():
        if not isinstance(val, (int, float)) or val <= 0:
            violations.append(f"tolerance {key!r} must be positive")
    samples = dict(DEFAULTS["samples"])
    samples.update(raw.get("samples", {}))
    if samples["n_timelike"] < 1:
        violations.append("samples.n_timelike must be >= 1")
    if samples["chi_max"] <= 0:
        violations.append("samples.chi_max must be positive")
    seed = raw.get("seed", DEFAULTS["seed"])
    if not isinstance(seed, int) or seed < 0:
        violations.append("seed must be a nonnegative integer")
    if violations:
        raise ValidationError(violations)

    echo = {
        "scenario": scenario,
        "checks": checks,
        "seed": seed,
        "tolerances": tol,
        "samples": samples,
        "out_dir": raw.get("out_dir", DEFAULTS["out_dir"]),
    }
    return RunConfig(
        scenario_source=scenario, checks=checks, seed=seed,
        rtol=float(tol["rtol"]), atol=float(tol["atol"]),
        residual_tol=float(tol["residual"]),
        n_timelike=int(samples["n_timelike"]), chi_max=float(samples["chi_max"]),
        out_dir=echo["out_dir"], echo=echo)


# ---------------------------------------------------------------------------
# check runners
# ---------------------------------------------------------------------------

def _fmt(x):
    return repr(float(x))


def _diag_series(diag, residual_ts=None, residual=None):
    res_full = np.full(len(diag.ts), np.nan)
    if residual is not None:
        i0 = np.searchsorted(diag.ts, residual_ts[0])
        res_full[i0:i0 + len(residual)] = residual
    return {
        "t": diag.ts, "theta_f": diag.theta_f, "theta": diag.theta,
        "det_A": diag.det_A, "tr_sigma2": diag.tr_sigma2,
        "tr_omega2": diag.tr_omega2, "residual": res_full,
        "mask": diag.mask.astype(int),
    }


def _sample_points(scen: Scenario, count=9):
    pts = []
    for spec in scen.geodesics:
        if spec.character != "timelike":
            continue
        a, b = spec.span
        for t in np.linspace(a + 0.05 * (b - a), b - 0.05 * (b - a), count):
            frac = (t - spec.span[0])
            pts.append(np.asarray(spec.p0, dtype=float)
                       + frac * np.asarray(spec.v0, dtype=float))
        break
    return np.array(pts) if pts else np.atleast_2d(scen.geodesics[0].p0)


def check_metric_invariants(scen: Scenario, cfg: RunConfig) -> CheckResult:
    scen.validate()
    worst = 0.0
    for spec in scen.geodesics[:1]:
        p = np.asarray(spec.p0, dtype=float)
        R = riemann_lowered(scen.metric, p)
        worst = max(worst,
                    float(np.max(np.abs(R + np.swapaxes(R, 2, 3)))),
                    float(np.max(np.abs(R + np.swapaxes(R, 0, 1)))),
                    float(np.max(np.abs(R - np.transpose(R, (2, 3, 0, 1))))),
                    float(np.max(np.abs(R + np.transpose(R, (0, 2, 3, 1))
                                        + np.transpose(R, (0, 3, 1, 2))))))
    tol = 1e-7 if scen.metric.d_matrix is not None else 1e-4
    ok = worst <= tol
    return CheckResult("metric_invariants", "PASS" if ok else "FAIL",
                       f"max curvature-symmetry residual {worst:.3e} (tol {tol:g})",
                       "identity: curvature tensor symmetries")


_RUN_CACHE = {}


def _comoving_run(scen: Scenario, cfg: RunConfig, label=None):
    spec = scen.geodesic(label) if label else next(
        s for s in scen.geodesics if s.character == "timelike")
    key = (scen.name, scen.weight.name, spec.label, cfg.rtol, cfg.atol)
    if key in _RUN_CACHE:
        return spec, _RUN_CACHE[key]
    a, b = spec.span
    lead = 0.25 * (b - a)
    diag_ts = np.linspace(a + lead, b, 1601)
    run = run_point_congruence(
        scen.metric, spec.p0, spec.v0, spec.span, f=scen.weight,
        diag_ts=diag_ts, rtol=cfg.rtol, atol=cfg.atol)
    _RUN_CACHE[key] = run
    return spec, run


def check_raychaudhuri(scen: Scenario, cfg: RunConfig) -> CheckResult:
    spec, run = _comoving_run(scen, cfg)
    ric = run.ric_fm_series(scen.metric, scen.weight, scen.params)
    report = raychaudhuri_residual(run.diagnostics, ric, scen.params.m)
    ok = report.max_residual <= cfg.residual_tol
    series = {spec.label: _diag_series(run.diagnostics, report.ts, report.residual)}
    return CheckResult("raychaudhuri_residual", "PASS" if ok else "FAIL",
                       f"max |residual| {report.max_residual:.3e} "
                       f"(tol {cfg.residual_tol:g})",
                       "identity: weighted Raychaudhuri equation", series)


def check_lagrange(scen: Scenario, cfg: RunConfig) -> CheckResult:
    spec, run = _comoving_run(scen, cfg)
    traj = run.trajectory
    defects = [jacobi.lagrange_defect(traj, t)
               for t in np.linspace(traj.t0, traj.t1, 101)]
    worst = max(defects)
    ok = worst <= 1e-8
    return CheckResult("lagrange_conservation", "PASS" if ok else "FAIL",
                       f"max defect {worst:.3e} along {spec.label}",
                       "identity: Lagrange self-adjointness conservation")


def check_trace_identity(scen: Scenario, cfg: RunConfig) -> CheckResult:
    spec, run = _comoving_run(scen, cfg)
    worst = 0.0
    a, b = run.trajectory.t0, run.trajectory.t1
    for t in np.linspace(a + 0.1 * (b - a), b - 0.1 * (b - a), 7):
        worst = max(worst, comparison.trace_identity_check(
            scen.metric, scen.weight, scen.params, run.geodesic, run.frame, t))
    ok = worst <= 1e-6
    return CheckResult("trace_identity", "PASS" if ok else "FAIL",
                       f"max residual {worst:.3e} (tol 1e-06)",
                       "identity: trace of the weighted endomorphism")


def check_convergence(scen: Scenario, cfg: RunConfig) -> CheckResult:
    spec = SampleSpec(points=_sample_points(scen), n_timelike=cfg.n_timelike,
                      seed=cfg.seed, chi_max=cfg.chi_max)
    report = comparison.check_timelike_convergence(scen.metric, scen.weight,
                                                   scen.params, spec)
    status = "PASS" if report.passed else "FAIL"
    return CheckResult("check_timelike_convergence", status,
                       f"min Ric_f^m(v,v) = {report.min_value:.6g} over "
                       f"{report.n_samples} samples",
                       "certificate: weighted timelike convergence condition")


def check_f_generic(scen: Scenario, cfg: RunConfig) -> CheckResult:
    expectations = scen.expectations.get("f_generic", {})
    if not expectations:
        return CheckResult("check_f_generic", "SKIP", "no expectation declared",
                           "certificate: weighted generic condition")
    failures = []
    detail = []
    for label, expected in expectations.items():
        spec, run = _comoving_run(scen, cfg, label=label)
        rep = comparison.check_f_generic(scen.metric, scen.weight,
                                         run.geodesic, run.frame)
        detail.append(f"{label}: holds={rep.holds}")
        if rep.holds != expected:
            failures.append(label)
    ok = not failures
    return CheckResult("check_f_generic", "PASS" if ok else "FAIL",
                       "; ".join(detail),
                       "certificate: weighted generic condition")


def check_schwarz(scen: Scenario, cfg: RunConfig, n_draws=100_000) -> CheckResult:
    rng = np.random.default_rng(cfg.seed)
    theta = rng.uniform(-10.0, 10.0, n_draws)
    fp = rng.uniform(-10.0, 10.0, n_draws)
    n = rng.uniform(2.0, 10.0, n_draws)
    m = rng.uniform(1e-6, 100.0, n_draws)
    _, _, gap = schwarz_gap(theta, fp, n, m)
    min_gap = float(np.min(gap))
    # seeded equality cases must keep both the gap and the witness residual tiny
    theta_eq = (n - 1.0) / m * fp
    _, _, gap_eq = schwarz_gap(theta_eq, fp, n, m)
    eq_res = schwarz_equality_residual(theta_eq, fp, n, m)
    ok = (min_gap >= -1e-12 and float(np.max(np.abs(gap_eq))) <= 1e-8
          and float(np.max(eq_res)) <= 1e-8)
    return CheckResult("schwarz_gap", "PASS" if ok else "FAIL",
                       f"min gap {min_gap:.3e} over {n_draws} draws; "
                       f"equality residual {float(np.max(eq_res)):.3e}",
                       "inequality: trace-splitting bound")


def check_f_laplacian(scen: Scenario, cfg: RunConfig) -> CheckResult:
    meta = scen.expectations.get("f_laplacian")
    if meta is None:
        return CheckResult("f_laplacian_bounds", "SKIP", "no declared pairs",
                           "inequality: weighted distance-Laplacian bounds")
    n = scen.metric.dim
    worst = np.inf
    count = 0
    if meta["mode"] == "flat":
        m = float(meta.get("m", 2.0))
        apex = np.zeros(n)
        for rho in meta.get("rhos", (0.5, 1.0, 2.0, 5.0)):
            q = apex.copy()
            q[0] = -rho
            rep = f_laplacian_distance(scen.metric, scen.weight, apex, q, m=m,
                                       uniqueness=scen.uniqueness,
                                       rtol=cfg.rtol, atol=cfg.atol)
            closed = -(n - 1.0) / rho
            if abs(rep.value - closed) > 1e-8 * max(1.0, abs(closed)):
                worst = -np.inf
            worst = min(worst, rep.slack_finite, rep.slack_infinite)
            count += 1
    else:
        for t_apex in meta["apex_ts"]:
            for rho in meta["rhos"]:
                apex = scenarios.equator_point(n, t_apex)
                q = apex.copy()
                q[0] = t_apex - rho
                rep = f_laplacian_distance(scen.metric, scen.weight, apex, q,
                                           uniqueness=scen.uniqueness,
                                           rtol=cfg.rtol, atol=cfg.atol)
                worst = min(worst, rep.slack_infinite)
                count += 1
    ok = worst >= -1e-6
    return CheckResult("f_laplacian_bounds", "PASS" if ok else "FAIL",
                       f"min bound slack {worst:.3e} over {count} pairs",
                       "inequality: weighted distance-Laplacian bounds")


def check_mean_curvature(scen: Scenario, cfg: RunConfig) -> CheckResult:
    slices = scen.expectations.get("mean_curvature", [])
    if not slices:
        return CheckResult("mean_curvature_evolution", "SKIP",
                           "no declared hypersurface slices",
                           "identity: normal mean-curvature evolution")
    worst = 0.0
    series = {}
    for item in slices:
        n = scen.metric.dim
        shape = (np.eye(n - 1) if item["shape"] == "identity"
                 else float(item["shape"]) * np.eye(n - 1))
        spec = NormalCongruenceSpec(
            base_point=np.asarray(item["base"], dtype=float),
            normal=np.asarray(item["normal"], dtype=float),
            shape_operator=shape, span=tuple(item["span"]),
            label=item["label"])
        rep = mean_curvature_evolution(scen.metric, scen.weight, spec,
                                       rtol=cfg.rtol, atol=cfg.atol)
        worst = max(worst, rep.max_residual)
        series[item["label"]] = _diag_series(rep.diagnostics, rep.ts,
                                             rep.residual)
    ok = worst <= cfg.residual_tol
    return CheckResult("mean_curvature_evolution", "PASS" if ok else "FAIL",
                       f"max residual {worst:.3e} (tol {cfg.residual_tol:g})",
                       "identity: normal mean-curvature evolution", series)


def check_conjugate_points(scen: Scenario, cfg: RunConfig) -> CheckResult:
    meta = scen.expectations.get("conjugate")
    if meta is None:
        return CheckResult("conjugate_points", "SKIP", "no expectation declared",
                           "derived: conjugate-point detection")
    expect = meta["expect"]
    if expect == "converging":
        spec = next(s for s in scen.geodesics if s.character == "timelike")
        t1 = meta["t1"]
        k = scen.metric.dim - 1
        b = meta["theta1"] / k
        _, run = _comoving_run(scen, cfg)
        traj = jacobi.integrate_jacobi(run.series, np.eye(k), b * np.eye(k),
                                       (t1, spec.span[1]),
                                       rtol=cfg.rtol, atol=cfg.atol)
        report = detect_conjugate(traj)
        ok = len(report.zeros) >= 1
        where = f"{report.first_zero():.6f}" if ok else "none"
        return CheckResult("conjugate_points", "PASS" if ok else "FAIL",
                           f"converging congruence det-zero at {where}",
                           "derived: conjugate-point detection")
    label = meta.get("geodesic")
    spec, run = _comoving_run(scen, cfg, label=label)
    report = detect_conjugate(run.trajectory)
    if expect == "none":
        ok = not report.zeros
        msg = f"{len(report.zeros)} zeros found (expected none)"
    else:  # even_zero at a known location
        at = float(meta["at"])
        ok = any(abs(z.t - at) <= 1e-6 and z.certificate == "singular_value"
                 for z in report.zeros)
        msg = (f"zeros at {[round(z.t, 8) for z in report.zeros]} "
               f"(expected even-order zero at {at:.8f})")
    return CheckResult("conjugate_points", "PASS" if ok else "FAIL", msg,
                       "derived: conjugate-point detection")


def check_certify(scen: Scenario, cfg: RunConfig) -> CheckResult:
    if "weighted_de_sitter_family" not in scen.name:
        return CheckResult("certify_weighted_de_sitter", "SKIP",
                           "only applies to the weighted family scenario",
                           "certificate: weighted convergence certification")
    n = scen.metric.dim
    cert = certify_weighted_de_sitter(n=n)
    ok = cert.K_star is not None
    small = certify_weighted_de_sitter(n=n, K_grid=[0.1])
    small_min = small.results[0]["min_value"]
    ok = ok and not small.results[0]["passed"] and abs(small_min + (n - 1.0)) <= 0.1
    summary = (f"K_star = {cert.K_star}; K=0.1 min = {small_min:.4f}; "
               f"{len(cert.findings)} findings")
    return CheckResult("certify_weighted_de_sitter", "PASS" if ok else "FAIL",
                       summary, "certificate: weighted convergence certification")


CHECKS = {
    "metric_invariants": check_metric_invariants,
    "raychaudhuri_residual": check_raychaudhuri,
    "lagrange_conservation": check_lagrange,
    "trace_identity": check_trace_identity,
    "check_timelike_convergence": check_convergence,
    "check_f_generic": check_f_generic,
    "schwarz_gap": check_schwarz,
    "f_laplacian_bounds": check_f_laplacian,
    "mean_curvature_evolution": check_mean_curvature,
    "conjugate_points": check_conjugate_points,
    "certify_weighted_de_sitter": check_certify,
}


# ---------------------------------------------------------------------------
# run + artifacts
# ---------------------------------------------------------------------------

def _write_csv(path: Path, series: dict):
    lines = [",".join(CSV_COLUMNS)]
    length = len(series["t"])
    for i in range(length):
        row = []
        for col in CSV_COLUMNS:
            val = series[col][i]
            row.append(str(int(val)) if col == "mask" else _fmt(val))
        lines.append(",".join(row))
    path.write_text("\n".join(lines) + "\n")


def resolve_checks(scen: Scenario, requested) -> list:
    if requested == "default":
        return [c for c in scen.default_checks if c in CHECKS]
    if requested == "all":
        return sorted(CHECKS)
    return list(requested)


def run(config: RunConfig) -> int:
    """Execute the configured checks; returns the process exit code."""
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    lines = ["lorentzlab run report",
             f"config: {json.dumps(config.echo, sort_keys=True)}"]
    try:
        scen = scenarios.scenario_from_config(config.scenario_source)
    except (KeyError, LorentzLabError) as exc:
        lines.append(f"FAILED scenario resolution: {exc}")
        lines.append("result: ERROR")
        (out / "report.txt").write_text("\n".join(lines) + "\n")
        return 2

    lines.append(f"scenario: {scen.name}")
    results = []
    errored = False
    for name in sorted(resolve_checks(scen, config.checks)):
        try:
            res = CHECKS[name](scen, config)
        except Exception as exc:
            res = CheckResult(name, "ERROR", f"{type(exc).__name__}: {exc}",
                              "runtime error")
            errored = True
        results.append(res)
        for label, series in res.series.items():
            _write_csv(out / f"{name}__{label}.csv", series)

    for res in sorted(results, key=lambda r: r.name):
        lines.append(f"check {res.name}: {res.status} - {res.summary} [{res.tag}]")
    n_pass = sum(r.status == "PASS" for r in results)
    n_fail = sum(r.status == "FAIL" for r in results)
    n_skip = sum(r.status == "SKIP" for r in results)
    if errored:
        lines.append("FAILED: runtime error in at least one check")
        lines.append(f"result: ERROR (passed {n_pass}, failed {n_fail}, "
                     f"skipped {n_skip})")
        code = 2
    elif n_fail:
        lines.append(f"result: FAIL (passed {n_pass}, failed {n_fail}, "
                     f"skipped {n_skip})")
        code = 1
    else:
        lines.append(f"result: PASS (passed {n_pass}, failed {n_fail}, "
                     f"skipped {n_skip})")
        code = 0
    (out / "report.txt").write_text("\n".join(lines) + "\n")
    return code


def load_config_source(source: str) -> str:
    """A path on disk, or the name of a packaged config."""
    path = Path(source)
    if path.exists():
        return path.read_text()
    packaged = resources.files("lorentzlab").joinpath(f"data/{source}.json")
    if packaged.is_file():
        return packaged.read_text()
    raise ConfigError(f"no config file or packaged config named {source!r}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="lorentzlab",
        description="geodesic congruence and weighted-curvature check suites")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run a JSON config")
    p_run.add_argument("config", help="path to config JSON or packaged name")
    p_run.add_argument("--out", help="override output directory")
    p_run.add_argument("--seed", type=int, help="override RNG seed")
    p_run.add_argument("--tol", type=float,
                       help="override the residual tolerance")
    sub.add_parser("list-scenarios", help="print built-in scenario names")
    sub.add_parser("list-checks", help="print check identifiers")
    args = parser.parse_args(argv)

    if args.command == "list-scenarios":
        for name in sorted(BUILTIN_SCENARIOS):
            print(name)
        return 0
    if args.command == "list-checks":
        for name in sorted(CHECKS):
            print(name)
        return 0

    try:
        cfg = parse_config(load_config_source(args.config))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        cfg.out_dir = args.out
        cfg.echo["out_dir"] = args.out
    if args.seed is not None:
        cfg.seed = args.seed
        cfg.echo["seed"] = args.seed
    if args.tol is not None:
        cfg.residual_tol = args.tol
        cfg.echo["tolerances"]["residual"] = args.tol
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
