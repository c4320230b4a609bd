"""Subcommand implementations producing report records and certificates."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable

from .chaos.bounds import chaos_norm_upper_bound
from .chaos.norms import Method, chaos_norm_white
from .chaos.probe import second_chaos_divergence_probe
from .config import Command, ExperimentConfig, ParamPoint
from .errors import RegimeError, RoughWaveError, UnsupportedError
from .lemmas import FBM_GRID, LemmaCertificate, certificate_suite, fbm_identity_certificate
from .moments import (
    a1_scaling_check,
    intermittency_report,
    lower_c_beta_form,
    lower_c_constant,
    lyapunov_fit,
    second_moment_lower,
    second_moment_upper,
)
from .montecarlo import derive_seed
from .params import Regime, exponents, validate_params
from .regularity import IncrementKind, holder_verdict, increment_samples
from .reports import Report
from .verdicts import Consistency

LYAPUNOV_TOLERANCE = 0.1
A1_TOLERANCE = 0.01
LOWER_CONSTANT_TOLERANCE = 1e-6

Records = list[dict[str, Any]]
Certs = list[dict[str, Any]]


def _rec(cfg: ExperimentConfig, index: int, pt: ParamPoint, quantity: str, abscissa: Any = None,
         value: Any = None, error: Any = None, bound: Any = None, verdict: Any = None) -> dict[str, Any]:
    return {"command": cfg.command.value, "point": index, "kappa": pt.kappa,
            "hurst_space": pt.hurst_space, "hurst_time": pt.hurst_time, "quantity": quantity,
            "abscissa": abscissa, "value": value, "error_estimate": error, "bound": bound,
            "verdict": verdict}


def _cert(name: str, index: int | None, lhs: float, rhs: float, rel: float, passed: bool,
          tol: float, detail: str = "") -> dict[str, Any]:
    return {"id": name, "point": index, "lhs": float(lhs), "rhs": float(rhs), "rel_error": float(rel),
            "passed": bool(passed), "tolerance": float(tol), "detail": detail}


def _from_lemma(c: LemmaCertificate, index: int | None = None) -> dict[str, Any]:
    return _cert(c.lemma_id.value, index, c.lhs, c.rhs, c.rel_error, c.passed, c.tolerance, c.detail)


def _validate(cfg, index, pt) -> tuple[Records, Certs]:
    try:
        vp = validate_params(pt.model())
    except RoughWaveError as exc:
        return [_rec(cfg, index, pt, "regime", verdict=f"invalid: {exc}")], []
    out = [_rec(cfg, index, pt, "regime", verdict=vp.regime.value)]
    if vp.regime.solvable:
        ex = exponents(vp)
        for name in ("growth", "p_factor", "holder_time_sup", "holder_space_sup", "chaos_series_power"):
            out.append(_rec(cfg, index, pt, name, value=float(getattr(ex, name))))
    return out, []


def _fit_records(cfg, index, pt, name, pairs, target) -> Records:
    if len(pairs) < 4:
        return []
    fit = lyapunov_fit(pairs)
    ok = abs(fit.slope - target) <= LYAPUNOV_TOLERANCE
    return [_rec(cfg, index, pt, name, value=fit.slope, error=fit.max_residual, bound=target,
                 verdict="within" if ok else "outside")]


def _moments(cfg, index, pt) -> tuple[Records, Certs]:
    vp = validate_params(pt.model()).require(Regime.WAVE_SOLVABLE)
    q = cfg.quadrature
    growth = exponents(vp).growth
    recs: Records = []
    up_pairs, lo_pairs, crossings = [], [], 0
    for t in cfg.horizons:
        up = second_moment_upper(t, vp, q=q)
        lo = second_moment_lower(t, vp, q=q)
        crossed = lo.log_partial_sum > up.log_partial_sum
        crossings += crossed
        recs.append(_rec(cfg, index, pt, "log_second_moment_upper", t, up.log_partial_sum,
                         up.tail_bound / up.partial_sum if up.partial_sum else 0.0, up.orders_used))
        recs.append(_rec(cfg, index, pt, "log_second_moment_lower", t, lo.log_partial_sum, 0.0,
                         up.log_partial_sum, "crossing" if crossed else "below_upper"))
        up_pairs.append((t, up.log_partial_sum))
        lo_pairs.append((t, lo.log_partial_sum))
    if all(v > 0 for _, v in up_pairs):
        recs += _fit_records(cfg, index, pt, "lyapunov_slope_upper", up_pairs, growth)
    if all(v > 0 for _, v in lo_pairs):
        recs += _fit_records(cfg, index, pt, "lyapunov_slope_lower", lo_pairs, growth)
    rep = intermittency_report(vp, cfg.horizons[-1], q=q)
    recs.append(_rec(cfg, index, pt, "lower_rate_p2", rep.horizon, rep.lower_exponent))
    for po, v in rep.upper_exponents.items():
        recs.append(_rec(cfg, index, pt, f"upper_rate_p{po:g}", rep.horizon, v))
    recs.append(_rec(cfg, index, pt, "weak_intermittency", rep.horizon,
                     verdict="weakly_intermittent" if rep.weakly_intermittent else "not_established"))
    certs = [_cert("moment_sandwich", index, crossings, 0, float(crossings), crossings == 0, 0.0,
                   "lower partial sums never exceed upper partial sums")]
    return recs, certs


def _lower(cfg, index, pt) -> tuple[Records, Certs]:
    vp = validate_params(pt.model()).require(Regime.WAVE_SOLVABLE)
    q = cfg.quadrature
    c = lower_c_constant(vp, q)
    beta_form = lower_c_beta_form(vp.kappa, vp.hurst_space)
    rel_c = abs(c / beta_form - 1)
    recs = [_rec(cfg, index, pt, "lower_constant", value=c, bound=beta_form)]
    certs = [_cert("lower_constant_beta_form", index, c, beta_form, rel_c,
                   rel_c < LOWER_CONSTANT_TOLERANCE, LOWER_CONSTANT_TOLERANCE)]
    pairs = []
    for t in cfg.horizons:
        ratio, predicted = a1_scaling_check(t, vp, q)
        rel = abs(ratio / predicted - 1)
        recs.append(_rec(cfg, index, pt, "a1_scaling_ratio", t, ratio, rel, predicted))
        certs.append(_cert("a1_scaling", index, ratio, predicted, rel, rel < A1_TOLERANCE, A1_TOLERANCE,
                           f"t={t}"))
        lo = second_moment_lower(t, vp, q=q)
        recs.append(_rec(cfg, index, pt, "log_second_moment_lower", t, lo.log_partial_sum,
                         bound=lo.orders_used))
        recs.append(_rec(cfg, index, pt, "max_lower_term", t, lo.max_term))
        pairs.append((t, lo.log_partial_sum))
    if all(v > 0 for _, v in pairs):
        recs += _fit_records(cfg, index, pt, "lyapunov_slope_lower", pairs, exponents(vp).growth)
    return recs, certs


def _holder(cfg, index, pt) -> tuple[Records, Certs]:
    vp = validate_params(pt.model()).require(Regime.WAVE_SOLVABLE)
    t = cfg.horizons[0]
    recs: Records = []
    certs: Certs = []
    for kind in (IncrementKind.TIME, IncrementKind.SPACE):
        samples = increment_samples(kind, t, cfg.offsets, vp, cfg.quadrature)
        name = kind.value.lower()
        for s in samples:
            recs.append(_rec(cfg, index, pt, f"{name}_increment_variance", s.offset, s.variance,
                             s.quadrature_error))
        v = holder_verdict(samples, kind, vp)
        recs.append(_rec(cfg, index, pt, f"{name}_variance_slope", t, v.fit.slope, v.fit.max_residual,
                         2 * v.supremum, v.verdict.value))
        ok = v.verdict is Consistency.CONSISTENT
        certs.append(_cert(f"holder_{name}", index, v.theta_hat, v.supremum,
                           abs(v.theta_hat - v.supremum), ok, 0.05))
    return recs, certs


def _threshold(cfg, index, pt) -> tuple[Records, Certs]:
    t = cfg.horizons[0]
    r = second_chaos_divergence_probe((pt.kappa, pt.hurst_space), t)
    recs = [
        _rec(cfg, index, pt, "truncated_integral_first", r.cutoffs[0], r.values[0], r.quadrature_error),
        _rec(cfg, index, pt, "truncated_integral_last", r.cutoffs[-1], r.values[-1], r.quadrature_error,
             r.growth, r.verdict.value),
        _rec(cfg, index, pt, "last_ratio", r.cutoffs[-1], r.ratios[-1]),
        _rec(cfg, index, pt, "increment_decay_rate", r.cutoffs[-1], r.decay_rate,
             verdict=r.analytic_verdict.value),
    ]
    ok = r.verdict is r.analytic_verdict
    certs = [_cert("threshold_verdict", index, float(r.verdict.value == "Divergent"),
                   float(r.analytic_verdict.value == "Divergent"), 0.0 if ok else 1.0, ok, 0.0,
                   f"numeric {r.verdict.value}, endpoint analysis {r.analytic_verdict.value}")]
    return recs, certs


def _chaos(cfg, index, pt) -> tuple[Records, Certs]:
    vp = validate_params(pt.model()).require(Regime.WAVE_SOLVABLE)
    recs: Records = []
    certs: Certs = []
    seed = derive_seed(cfg.seed, cfg.command.value, index)
    for n in cfg.orders:
        for t in cfg.horizons:
            res = chaos_norm_white(n, t, vp, cfg.quadrature, samples=cfg.samples, seed=seed)
            bound = chaos_norm_upper_bound(n, t, vp, cfg.quadrature)
            ok = res.value - res.error_estimate <= bound
            recs.append(_rec(cfg, index, pt, f"chaos_norm_order_{n}", t, res.value, res.error_estimate,
                             bound, "dominated" if ok else "exceeds_bound"))
            if n <= 2:
                certs.append(_cert("upper_bound_dominance", index, res.value, bound,
                                   max(0.0, (res.value - res.error_estimate - bound) / bound), ok, 0.0,
                                   f"n={n}, t={t}, method={Method(res.method).value}"))
    return recs, certs


PER_POINT: dict[Command, Callable] = {
    Command.VALIDATE: _validate,
    Command.MOMENTS: _moments,
    Command.LOWER: _lower,
    Command.HOLDER: _holder,
    Command.THRESHOLD: _threshold,
    Command.CHAOS: _chaos,
}


def _run_point(args) -> tuple[Records, Certs]:
    cfg, index = args
    pt = cfg.points[index]
    try:
        return PER_POINT[cfg.command](cfg, index, pt)
    except (RegimeError, UnsupportedError) as exc:
        # a point outside a command's domain is reported, not fatal
        return [_rec(cfg, index, pt, "skipped", verdict=f"{type(exc).__name__}: {exc}")], []


def _identity(cfg: ExperimentConfig) -> Report:
    rep = Report(cfg.command.value)
    hs = sorted({p.hurst_space for p in cfg.points}) if "hurst_space" in cfg.raw else None
    grid = FBM_GRID if hs is None else tuple(
        (r, s, h) for r in (0.25, 0.5, 1.0, 2.0) for s in (0.25, 0.5, 1.0, 2.0) for h in hs)
    for i, (r, s, h) in enumerate(grid):
        c = fbm_identity_certificate(r, s, h, cfg.quadrature)
        rep.records.append({"command": rep.command, "point": i, "hurst_space": h, "quantity": "sine_identity",
                            "abscissa": f"r={r};s={s}", "value": c.lhs, "error_estimate": c.rel_error,
                            "bound": c.rhs, "verdict": "PASS" if c.passed else "FAIL"})
        rep.certificates.append(_from_lemma(c, i))
    return rep


def _lemmas(cfg: ExperimentConfig) -> Report:
    rep = Report(cfg.command.value)
    seed = derive_seed(cfg.seed, cfg.command.value, 0) % (2**32)
    rep.certificates = [_from_lemma(c, i) for i, c in enumerate(certificate_suite(cfg.quadrature, seed))]
    return rep


def run(cfg: ExperimentConfig) -> Report:
    """Execute the configured command; parameter points may run on a worker pool."""
    if cfg.command is Command.IDENTITY:
        return _identity(cfg)
    if cfg.command is Command.LEMMAS:
        return _lemmas(cfg)
    tasks = [(cfg, i) for i in range(len(cfg.points))]
    if cfg.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_run_point, tasks))
    else:
        results = [_run_point(t) for t in tasks]
    rep = Report(cfg.command.value)
    for recs, certs in results:
        rep.records.extend(recs)
        rep.certificates.extend(certs)
    return rep


def summary_line(rep: Report) -> str:
    failed = [c["id"] for c in rep.certificates if not c["passed"]]
    n = len(rep.certificates)
    if not failed:
        return f"{rep.command}: {rep.verdict} ({n} certificates, {len(rep.records)} records)"
    names = ", ".join(sorted(set(failed)))
    return f"{rep.command}: {rep.verdict} ({len(failed)} of {n} certificates failed: {names})"


__all__ = ["run", "summary_line"]
