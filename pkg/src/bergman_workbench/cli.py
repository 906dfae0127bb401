"""Command-line front end: ``bergman-workbench <command> [options]``.

Exit codes: 0 success (or a decided verdict), 1 quadrature failure,
2 invalid configuration, 3 inconclusive, 4 a failed admissibility condition.
"""

from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field, fields, replace

import numpy as np

from . import __version__
from .admissibility import check_admissible, log_witness_probe
from .bergman import ComplexFunction, bergman_norm, make_boundary_peak, make_power_kernel, make_two_point_kernel
from .dsl import ExpressionError, parse_symbol_expression
from .essnorm import (
    CURVE_DISK_SPEC,
    _t_integral,
    default_c_schedule,
    extrapolate_limit,
    formula_absolute,
    formula_signed,
    interchange_report,
    kernel_limit_curves,
    two_direction_quantities,
    two_direction_weights,
)
from .operators import (
    apply_integral_operator,
    apply_weighted_composition,
    cubic_two_direction_family,
    dsl_family,
    evaluation_family,
    hilbert_family,
    phase_family,
    square_family,
    volterra_direct,
    volterra_family,
)
from .quadrature import QuadratureError, QuadratureSpec
from .special import SpaceParams

EXIT_OK, EXIT_QUADRATURE, EXIT_CONFIG, EXIT_INCONCLUSIVE, EXIT_FAIL = 0, 1, 2, 3, 4

FAMILIES = ("hilbert", "volterra", "square", "phase", "evaluation", "cubic", "cubic-phase", "dsl")
PRESETS = ("hilbert", "volterra", "square", "phase", "twodir-collinear", "twodir-phase")
AXES = ("c", "t", "p", "alpha", "lambda", "theta")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    p: float = 2.0
    alpha: float = 0.0
    tol: float | None = None
    c_schedule: list | None = None
    family: str | None = None
    lam: float = 1.0
    theta: float = 0.5
    u_expr: str | None = None
    phi_expr: str | None = None
    xi: complex = 1 + 0j
    format: str = "json"
    out: str | None = None
    jobs: int = 1
    params: dict = field(default_factory=dict)

    @property
    def space(self) -> SpaceParams:
        return SpaceParams(self.p, self.alpha)

    def validate(self) -> "RunConfig":
        try:
            space = self.space
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.tol is not None and not 0 < self.tol < 1:
            raise ConfigError("--tol must lie in (0, 1)")
        if self.jobs < 1:
            raise ConfigError("--jobs must be >= 1")
        if self.format not in ("json", "csv"):
            raise ConfigError("--format must be json or csv")
        if not 0 <= self.theta <= 1:
            raise ConfigError("--theta must lie in [0, 1]")
        if self.lam <= 0:
            raise ConfigError("--lambda must be positive")
        if abs(abs(self.xi) - 1) > 1e-12:
            raise ConfigError("--xi must be unimodular")
        if self.family is not None and self.family not in FAMILIES:
            raise ConfigError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        if self.family == "dsl" and not (self.u_expr and self.phi_expr):
            raise ConfigError("the dsl family needs --u-expr and --phi-expr")
        if self.c_schedule is not None:
            cs = space.critical_exponent
            cs_list = [float(c) for c in self.c_schedule]
            if len(cs_list) < 1 or any(not 0 < c < cs for c in cs_list) or any(b <= a for a, b in zip(cs_list, cs_list[1:])):
                raise ConfigError(f"--c-schedule must be strictly increasing inside (0, {cs})")
            self.c_schedule = cs_list
        return self

    def disk_spec(self) -> QuadratureSpec:
        spec = replace(CURVE_DISK_SPEC, jobs=self.jobs)
        return replace(spec, rel_tol=self.tol) if self.tol else spec

    def schedule(self) -> list:
        return self.c_schedule if self.c_schedule is not None else default_c_schedule(self.space)

    def to_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d["xi"] = [self.xi.real, self.xi.imag]
        return d


def _parse_complex(text) -> complex:
    if isinstance(text, (list, tuple)):
        return complex(float(text[0]), float(text[1]))
    if isinstance(text, (int, float, complex)):
        return complex(text)
    return complex(str(text).replace(" ", "").replace("i", "j"))


def _parse_list(text) -> list:
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    return [float(v) for v in str(text).split(",") if v.strip()]


# --------------------------------------------------------------------------
# families


def _one(t):
    return 1.0


def _half(t):
    return 0.5


def _pi_t(t):
    return math.pi * t


def _unit(t):
    return 1.0


def _phase_weight(t):
    return cmath.exp(1j * math.pi * t)


def _volterra_gprime() -> ComplexFunction:
    return ComplexFunction(
        lambda z: 1.0 / (1.0 - np.asarray(z, dtype=complex)),
        lambda z: 1.0 / (1.0 - np.asarray(z, dtype=complex)) ** 2,
        frozenset({1 + 0j}),
        "1/(1-w)",
    )


def build_family(cfg: RunConfig):
    space = cfg.space
    name = cfg.family or "hilbert"
    if name == "hilbert":
        return hilbert_family(cfg.lam)
    if name == "volterra":
        return volterra_family(_volterra_gprime(), 1.0)
    if name == "square":
        return square_family(_one, space)
    if name == "phase":
        return phase_family(hilbert_family(cfg.lam), _pi_t)
    if name == "evaluation":
        return evaluation_family()
    if name == "cubic":
        return cubic_two_direction_family(_half, _unit)
    if name == "cubic-phase":
        return cubic_two_direction_family(_half, _phase_weight)
    try:
        return dsl_family(cfg.u_expr, cfg.phi_expr, [cfg.xi], dict(cfg.params))
    except ExpressionError as exc:
        raise ConfigError(str(exc)) from None


# --------------------------------------------------------------------------
# output


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.generic):
        return _clean(obj.item())
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def _emit(cfg: RunConfig, payload: dict, rows: list, header: tuple) -> None:
    """Write JSON (with a timestamp) or CSV rows to --out or stdout."""
    if cfg.format == "json":
        doc = dict(_clean(payload))
        doc["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(["" if v is None else v for v in row])
        text = buf.getvalue()
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


SUMMARY_HEADER = ("name", "value", "error", "converged")


# --------------------------------------------------------------------------
# commands


def _declared_singularities(f: ComplexFunction, extra) -> ComplexFunction:
    pts = {complex(x) for x in extra}
    return replace(f, singularities=f.singularities | frozenset(pts)) if pts else f


def _peak_angle(f, lo: float, hi: float, r: float) -> float:
    for _ in range(60):
        a, b = lo + (hi - lo) / 3, hi - (hi - lo) / 3
        fa = abs(complex(f(np.asarray([r * cmath.exp(1j * a)]))[0]))
        fb = abs(complex(f(np.asarray([r * cmath.exp(1j * b)]))[0]))
        if fa < fb:
            lo = a
        else:
            hi = b
    return 0.5 * (lo + hi)


def detect_boundary_singularities(f: ComplexFunction, n: int = 720) -> list:
    """Boundary points where |f| grows along the radius.

    A grid angle is flagged when |f| at radius 1 - 1e-7 exceeds ten times the
    median over the grid and at least 1.5 times its value at radius 1 - 1e-3.
    Each flagged local maximum is refined by ternary search and snapped to the
    nearest multiple of pi/12 when within 1e-6.
    """
    ang = 2 * math.pi * np.arange(n) / n
    ring = np.exp(1j * ang)
    with np.errstate(all="ignore"):
        inner = np.abs(np.asarray(f(0.999 * ring), dtype=complex))
        outer = np.abs(np.asarray(f((1 - 1e-7) * ring), dtype=complex))
    outer = np.where(np.isfinite(outer), outer, np.inf)
    med = float(np.median(outer[np.isfinite(outer)])) if np.any(np.isfinite(outer)) else 0.0
    flagged = (outer > 10 * max(med, 1e-300)) & (outer > 1.5 * inner)
    found = []
    step = 2 * math.pi / n
    for k in np.flatnonzero(flagged):
        if outer[k] < outer[(k - 1) % n] or outer[k] < outer[(k + 1) % n]:
            continue
        th = _peak_angle(f, ang[k] - step, ang[k] + step, 1 - 1e-9)
        snap = round(th / (math.pi / 12)) * (math.pi / 12)
        if abs(th - snap) < 1e-6:
            th = snap
        z = cmath.exp(1j * th)
        if all(abs(z - w) > 1e-6 for w in found):
            found.append(complex(round(z.real, 15), round(z.imag, 15)))
    return found


def cmd_norm(cfg: RunConfig, args) -> int:
    try:
        f = parse_symbol_expression(args.expr, args.t, **cfg.params)
        f(np.asarray([0j]))
    except ExpressionError as exc:
        raise ConfigError(str(exc)) from None
    declared = [_parse_complex(s) for s in args.singular]
    if not declared and not args.no_detect:
        declared = detect_boundary_singularities(f)
    if len(declared) > 2 or (len(declared) == 2 and abs(declared[0] + declared[1]) > 1e-9):
        raise ConfigError(f"boundary singularities at {declared}: only one point or an antipodal pair is supported")
    try:
        declared = [z / abs(z) for z in declared]
    except ZeroDivisionError:
        raise ConfigError("--singular points must be nonzero") from None
    f = _declared_singularities(f, declared)
    spec = replace(QuadratureSpec(rel_tol=cfg.tol or 1e-8), jobs=cfg.jobs)
    r = bergman_norm(f, cfg.space, spec)
    payload = {
        "command": "norm",
        "expression": args.expr,
        "space": cfg.space.to_dict(),
        "value": r.value,
        "error": r.error_estimate,
        "converged": r.converged,
        "warnings": list(f.warnings),
        "singular_points": sorted(f.singularities, key=cmath.phase),
    }
    _emit(cfg, payload, [("norm", r.value, r.error_estimate, r.converged)], SUMMARY_HEADER)
    return EXIT_OK if r.converged else EXIT_QUADRATURE


def cmd_kernel(cfg: RunConfig, args) -> int:
    space = cfg.space
    try:
        if args.kind == "power":
            k = make_power_kernel(args.c if args.c is not None else 0.5 * space.critical_exponent, cfg.xi, space)
        elif args.kind == "two_point":
            k = make_two_point_kernel(args.c if args.c is not None else 0.5 * space.critical_exponent, cfg.theta, space)
        else:
            k = make_boundary_peak(args.n, cfg.xi, space)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    check = bergman_norm(k.function, space, replace(QuadratureSpec(rel_tol=1e-8), jobs=cfg.jobs))
    payload = {"command": "kernel", "kernel": k.to_dict(), "norm_check": {"value": check.value, "error": check.error_estimate, "converged": check.converged}}
    _emit(cfg, payload, [("normalization", k.normalization, 0.0, True), ("norm", check.value, check.error_estimate, check.converged)], SUMMARY_HEADER)
    return EXIT_OK if check.converged else EXIT_QUADRATURE


def cmd_apply(cfg: RunConfig, args) -> int:
    family = build_family(cfg)
    try:
        f = parse_symbol_expression(args.f_expr, None, **cfg.params)
    except ExpressionError as exc:
        raise ConfigError(str(exc)) from None
    zs = np.array([_parse_complex(z) for z in args.z], dtype=complex)
    if np.any(np.abs(zs) >= 1):
        raise ConfigError("--z points must lie in the open unit disk")
    if args.t is not None:
        if not 0 < args.t < 1:
            raise ConfigError("--t must lie in (0, 1)")
        g = apply_weighted_composition(family.at(args.t), f)
        what = f"S_{args.t:g} f"
    else:
        g = apply_integral_operator(family, f)
        what = "int_0^1 S_t f dt"
    vals = np.atleast_1d(g(zs))
    diag = g.diagnostics.to_dict() if g.diagnostics is not None else {}
    err = diag.get("max_error", 0.0)
    ok = diag.get("unconverged_points", 0) == 0
    payload = {"command": "apply", "family": family.to_dict(), "image": what, "f": args.f_expr,
               "points": [[complex(z), complex(v)] for z, v in zip(zs, vals)], "diagnostics": diag}
    rows = [(f"{z:g}", f"{v:.16g}", err, ok) for z, v in zip(zs, vals)]
    _emit(cfg, payload, rows, ("z", "value", "error", "converged"))
    return EXIT_OK if ok else EXIT_QUADRATURE


def _report_rows(rep) -> list:
    fa, fs = rep.formula_absolute, rep.formula_signed
    return [
        ("formula_absolute", fa.value, fa.error, fa.converged),
        ("formula_signed", fs.value, fs.error, fs.converged),
        ("lhs_limit", rep.lhs_limit, rep.lhs_diagnostic, all(s.lhs_converged for s in rep.c_samples)),
        ("rhs_limit", rep.rhs_limit, rep.rhs_diagnostic, all(s.rhs_converged for s in rep.c_samples)),
    ]


def _essnorm_exit(rep) -> int:
    if not (rep.formula_absolute.converged and rep.formula_signed.converged):
        return EXIT_QUADRATURE
    return EXIT_INCONCLUSIVE if rep.verdict == "inconclusive" else EXIT_OK


def cmd_essnorm(cfg: RunConfig, args) -> int:
    family = build_family(cfg)
    rep = interchange_report(family, cfg.xi, cfg.space, cfg.schedule(), disk_spec=cfg.disk_spec())
    payload = {"command": "essnorm", "report": rep.to_dict()}
    _emit(cfg, payload, _report_rows(rep), SUMMARY_HEADER)
    return _essnorm_exit(rep)


def cmd_admissible(cfg: RunConfig, args) -> int:
    family = build_family(cfg)
    t_grid = _parse_list(args.t_grid) if args.t_grid else None
    witness = [log_witness_probe(cfg.space, cfg.xi)] if args.witness else None
    rep = check_admissible(family, cfg.xi, cfg.space, t_grid, witness_probes=witness, disk_spec=cfg.disk_spec())
    payload = {"command": "admissible", "report": rep.to_dict()}
    rows = [(name, c.status, "", c.status != "inconclusive") for name, c in rep.conditions.items()]
    _emit(cfg, payload, rows, ("condition", "status", "error", "decided"))
    return {"pass": EXIT_OK, "inconclusive": EXIT_INCONCLUSIVE, "fail": EXIT_FAIL}[rep.overall]


# --------------------------------------------------------------------------
# reproduction presets


def _beta_weight_integral(space: SpaceParams, phase=None) -> complex:
    """int_0^1 e^{i phase(t)} t^(c*-1) (1-t)^(-c*) dt by tanh-sinh."""
    cs = space.critical_exponent

    def g(t):
        w = t ** (cs - 1.0) * (1.0 - t) ** (-cs)
        return w * cmath.exp(1j * phase(t)) if phase else w

    return _t_integral(g, None).value


def _preset_space(cfg: RunConfig, args, p, alpha) -> SpaceParams:
    explicit = getattr(args, "explicit_space", False)
    return cfg.space if explicit else SpaceParams(p, alpha)


def cmd_reproduce(cfg: RunConfig, args) -> int:
    preset = args.preset
    if preset == "hilbert":
        space = _preset_space(cfg, args, 5.0, 0.0)
        cs = space.critical_exponent
        closed = math.pi / math.sin(math.pi * cs)
        rep = interchange_report(hilbert_family(1.0), 1, space, cfg.schedule() if cfg.c_schedule else None, closed, cfg.disk_spec())
        return _finish_interchange(cfg, preset, rep, closed, "interchange_equality", "B(c*, 1-c*) = pi / sin(pi c*)")
    if preset == "volterra":
        space = _preset_space(cfg, args, 4.0, 0.0)
        closed = space.p / (2.0 + space.alpha)
        g = _volterra_gprime()
        fam = volterra_family(g, 1.0)
        rep = interchange_report(fam, 1, space, cfg.schedule() if cfg.c_schedule else None, closed, cfg.disk_spec())
        ident = _volterra_identity(fam, g)
        return _finish_interchange(cfg, preset, rep, closed, "interchange_equality", "L p / (2 + alpha) with L = 1", {"representation_identity": ident})
    if preset == "square":
        space = _preset_space(cfg, args, 4.0, 0.0)
        a = space.alpha / space.p
        closed = float(np.real(_t_integral(lambda t: ((2 + t) / (2 * (1 + t))) ** a, None).value))
        rep = interchange_report(square_family(_one, space), 1, space, cfg.schedule() if cfg.c_schedule else None, closed, cfg.disk_spec())
        return _finish_interchange(cfg, preset, rep, closed, "interchange_equality", "int_0^1 ((2+t)/(2(1+t)))^(alpha/p) dt")
    if preset == "phase":
        space = _preset_space(cfg, args, 5.0, 0.0)
        ratio = abs(_beta_weight_integral(space, _pi_t)) / abs(_beta_weight_integral(space))
        fam = phase_family(hilbert_family(1.0), _pi_t)
        fa, fs = formula_absolute(fam, 1, space), formula_signed(fam, 1, space)
        payload = {
            "command": "reproduce",
            "preset": preset,
            "space": space.to_dict(),
            "formula_absolute": fa.to_dict(),
            "formula_signed": fs.to_dict(),
            "ratio": fs.value / fa.value,
            "closed_form_ratio": ratio,
            "verdict": "strict_inequality" if fa.value - fs.value > 0.02 * fa.value else "inconclusive",
        }
        if args.curves:
            rep = interchange_report(fam, 1, space, cfg.schedule() if cfg.c_schedule else None, None, cfg.disk_spec())
            payload["report"] = rep.to_dict()
            payload["verdict"] = rep.verdict
        ok = abs(payload["ratio"] - ratio) <= 1e-8 * ratio and payload["verdict"] == "strict_inequality"
        payload["matches_closed_form"] = ok
        rows = [("formula_absolute", fa.value, fa.error, fa.converged), ("formula_signed", fs.value, fs.error, fs.converged),
                ("ratio", payload["ratio"], fa.error + fs.error, fa.converged and fs.converged), ("closed_form_ratio", ratio, 0.0, True)]
        _emit(cfg, payload, rows, SUMMARY_HEADER)
        if not (fa.converged and fs.converged):
            return EXIT_QUADRATURE
        return EXIT_OK if ok else EXIT_INCONCLUSIVE
    # two-direction presets
    space = _preset_space(cfg, args, 2.0, 0.0)
    weight = _unit if preset == "twodir-collinear" else _phase_weight
    fam = cubic_two_direction_family(_half, weight)
    rep = two_direction_quantities(fam, cfg.theta, space, cfg.schedule() if cfg.c_schedule else None,
                                   numerical=not args.closed_only, disk_spec=cfg.disk_spec())
    if preset == "twodir-collinear":
        expected_ratio, expected_verdict = 1.0, "equality_expected"
    else:
        expected_ratio, expected_verdict = 2.0 / math.pi, "strict_inequality_expected"
    ok = abs(rep.ratio - expected_ratio) <= 0.02 * expected_ratio and all(v == expected_verdict for v in rep.collinearity.values())
    payload = {"command": "reproduce", "preset": preset, "report": rep.to_dict(), "expected_ratio": expected_ratio,
               "expected_collinearity": expected_verdict, "matches_closed_form": ok and rep.numerics_consistent}
    rows = [("closed_lhs", rep.closed_lhs, rep.closed_form_error, True), ("closed_rhs", rep.closed_rhs, rep.closed_form_error, True),
            ("gap", rep.gap, rep.closed_form_error, True), ("ratio", rep.ratio, rep.closed_form_error, True)]
    if rep.numerical_lhs is not None:
        rows += [("numerical_lhs", rep.numerical_lhs, rep.numerical_lhs_diagnostic, all(s.lhs_converged for s in rep.c_samples)),
                 ("numerical_rhs", rep.numerical_rhs, rep.numerical_rhs_diagnostic, all(s.rhs_converged for s in rep.c_samples))]
    _emit(cfg, payload, rows, SUMMARY_HEADER)
    return EXIT_OK if payload["matches_closed_form"] else EXIT_INCONCLUSIVE


def _volterra_identity(fam, g) -> dict:
    out = []
    for c, zs in ((0.3, (0.2, 0.5 + 0.3j, -0.6j)),):
        f = ComplexFunction(lambda z: (1 - np.asarray(z, dtype=complex)) ** (-c), lambda z: c * (1 - np.asarray(z, dtype=complex)) ** (-c - 1), frozenset({1 + 0j}), "(1-z)^-0.3")
        a = apply_integral_operator(fam, f)
        b = volterra_direct(g, f)
        for z in zs:
            out.append({"z": z, "family": complex(a(z)), "direct": complex(b(z)), "difference": abs(complex(a(z)) - complex(b(z)))})
    return {"samples": out, "max_difference": max(r["difference"] for r in out)}


def _finish_interchange(cfg, preset, rep, closed, expected, closed_text, extra=None) -> int:
    q = rep.quantities
    agree = {k: abs(v - closed) <= 0.02 * abs(closed) for k, v in q.items()}
    payload = {"command": "reproduce", "preset": preset, "report": rep.to_dict(), "closed_form": closed,
               "closed_form_expression": closed_text, "agreement_2pct": agree,
               "matches_closed_form": all(agree.values()) and rep.verdict == expected}
    if extra:
        payload.update(extra)
    rows = _report_rows(rep) + [("closed_form", closed, 0.0, True)]
    _emit(cfg, payload, rows, SUMMARY_HEADER)
    code = _essnorm_exit(rep)
    if code != EXIT_OK:
        return code
    return EXIT_OK if payload["matches_closed_form"] else EXIT_INCONCLUSIVE


# --------------------------------------------------------------------------
# sweep


SWEEP_QUANTITIES = {
    "c": ("lhs", "rhs"),
    "t": ("boundary_ratio", "u_boundary", "phi_prime_boundary"),
    "p": ("formula_absolute", "formula_signed"),
    "alpha": ("formula_absolute", "formula_signed"),
    "lambda": ("formula_absolute", "formula_signed"),
    "theta": ("w_plus", "w_minus", "closed_lhs", "closed_rhs", "ratio"),
}


def cmd_sweep(cfg: RunConfig, args) -> int:
    axis = args.axis
    quantity = args.quantity or SWEEP_QUANTITIES[axis][-1 if axis == "c" else 0]
    if quantity not in SWEEP_QUANTITIES[axis]:
        raise ConfigError(f"quantity for axis {axis} must be one of {', '.join(SWEEP_QUANTITIES[axis])}")
    values = _parse_list(args.values) if args.values else None
    rows = []
    if axis == "c":
        family = build_family(cfg)
        schedule = values or cfg.schedule()
        try:
            samples = kernel_limit_curves(family, cfg.xi, cfg.space, schedule, cfg.disk_spec())
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        for s in samples:
            if quantity == "lhs":
                rows.append((s.c, s.lhs, s.lhs_error, s.lhs_converged))
            else:
                rows.append((s.c, s.rhs, s.rhs_error, s.rhs_converged))
    elif axis == "t":
        family = build_family(cfg)
        cs = cfg.space.critical_exponent
        for t in values or [k / 20 for k in range(1, 20)]:
            if not 0 < t < 1:
                raise ConfigError("t values must lie in (0, 1)")
            u, dphi = family.boundary_data(t, cfg.xi)
            if quantity == "u_boundary":
                v = abs(complex(u))
            elif quantity == "phi_prime_boundary":
                v = float(abs(dphi)) if math.isfinite(abs(dphi)) else math.inf
            else:
                v = 0.0 if not math.isfinite(abs(dphi)) else abs(complex(u)) * abs(dphi) ** (-cs)
            rows.append((t, v, 0.0, True))
    elif axis in ("p", "alpha", "lambda"):
        for v in values or ([1.0, 2.0, 3.0] if axis == "lambda" else [2.0, 3.0, 4.0, 5.0] if axis == "p" else [0.0, 0.5, 1.0, 2.0]):
            sub = replace(cfg, p=v) if axis == "p" else replace(cfg, alpha=v) if axis == "alpha" else replace(cfg, lam=v)
            try:
                sub.validate()
                family = build_family(sub)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
            fn = formula_absolute if quantity == "formula_absolute" else formula_signed
            q = fn(family, cfg.xi, sub.space)
            rows.append((v, q.value, q.error, q.converged))
    else:
        family = build_family(replace(cfg, family=cfg.family or "cubic"))
        for th in values or [k / 10 for k in range(11)]:
            if not 0 <= th <= 1:
                raise ConfigError("theta values must lie in [0, 1]")
            if quantity in ("w_plus", "w_minus"):
                wp, wm = two_direction_weights(th, cfg.p)
                rows.append((th, wp if quantity == "w_plus" else wm, 0.0, True))
                continue
            try:
                rep = two_direction_quantities(family, th, cfg.space, numerical=False)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
            rows.append((th, getattr(rep, quantity), rep.closed_form_error, True))
    payload = {"command": "sweep", "axis": axis, "quantity": quantity, "config": cfg.to_dict(),
               "rows": [{"axis_value": r[0], "value": r[1], "error": r[2], "converged": r[3]} for r in rows]}
    _emit(cfg, payload, rows, (axis, quantity, "error", "converged"))
    return EXIT_OK if all(r[3] for r in rows) else EXIT_QUADRATURE


# --------------------------------------------------------------------------
# argument handling


def _common(parser):
    g = parser.add_argument_group("configuration")
    g.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
    g.add_argument("--p", type=float)
    g.add_argument("--alpha", type=float)
    g.add_argument("--family", help=f"one of {', '.join(FAMILIES)}")
    g.add_argument("--lambda", dest="lam", type=float)
    g.add_argument("--theta", type=float)
    g.add_argument("--xi", help="unimodular direction, e.g. 1 or -1 or 0+1i")
    g.add_argument("--u-expr", dest="u_expr")
    g.add_argument("--phi-expr", dest="phi_expr")
    g.add_argument("--param", action="append", default=[], metavar="NAME=VALUE", help="bind an expression parameter")
    g.add_argument("--c-schedule", dest="c_schedule", help="comma separated, increasing, below (2+alpha)/p")
    g.add_argument("--tol", type=float, help="relative tolerance of the disk quadrature")
    g.add_argument("--jobs", type=int)
    g.add_argument("--format", choices=("json", "csv"))
    g.add_argument("--out")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bergman-workbench", description="Bergman space norms, weighted composition operators and essential-norm reports.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", help="A^p_alpha norm of an expression in z")
    p.add_argument("expr")
    p.add_argument("--t", type=float, help="value for t if the expression uses it")
    p.add_argument("--singular", action="append", default=[], help="boundary point where the function blows up (default: detected)")
    p.add_argument("--no-detect", dest="no_detect", action="store_true", help="do not search for boundary singularities")
    _common(p)

    p = sub.add_parser("kernel", help="build and check a normalized test kernel")
    p.add_argument("--kind", choices=("power", "two_point", "boundary_peak"), default="power")
    p.add_argument("--c", type=float)
    p.add_argument("--n", type=int, default=8)
    _common(p)

    p = sub.add_parser("apply", help="evaluate S_t f or int S_t f dt at points")
    p.add_argument("--f-expr", dest="f_expr", required=True)
    p.add_argument("--z", action="append", required=True)
    p.add_argument("--t", type=float)
    _common(p)

    p = sub.add_parser("essnorm", help="interchange report for a family")
    _common(p)

    p = sub.add_parser("admissible", help="sampled admissibility checks")
    p.add_argument("--t-grid", dest="t_grid")
    p.add_argument("--witness", action="store_true", help="add the logarithmic witness probe for integrability")
    _common(p)

    p = sub.add_parser("reproduce", help="run a reference experiment against its closed form")
    p.add_argument("preset", choices=PRESETS)
    p.add_argument("--curves", action="store_true", help="phase preset: also compute kernel-limit curves")
    p.add_argument("--closed-only", dest="closed_only", action="store_true", help="two-direction presets: skip numerical curves")
    _common(p)

    p = sub.add_parser("sweep", help="tabulate a quantity along one axis")
    p.add_argument("--axis", choices=AXES, required=True)
    p.add_argument("--values", help="comma separated axis values")
    p.add_argument("--quantity")
    _common(p)
    return parser


def _config(args) -> RunConfig:
    base = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                base = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(base, dict):
            raise ConfigError("config file must hold a JSON object")
        if "space" in base:
            base.update(base.pop("space"))
        if "lambda" in base:
            base["lam"] = base.pop("lambda")
        unknown = set(base) - {f.name for f in fields(RunConfig)}
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    explicit_space = any(getattr(args, k) is not None for k in ("p", "alpha")) or any(k in base for k in ("p", "alpha"))
    for name in ("p", "alpha", "family", "lam", "theta", "u_expr", "phi_expr", "tol", "jobs", "format", "out"):
        v = getattr(args, name, None)
        if v is not None:
            base[name] = v
    if getattr(args, "c_schedule", None) is not None:
        base["c_schedule"] = args.c_schedule
    if getattr(args, "xi", None) is not None:
        base["xi"] = args.xi
    params = dict(base.get("params", {}))
    for item in args.param:
        if "=" not in item:
            raise ConfigError(f"--param expects NAME=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        params[k.strip()] = _parse_complex(v)
    base["params"] = params
    try:
        if "xi" in base:
            base["xi"] = _parse_complex(base["xi"])
        if base.get("c_schedule") is not None:
            base["c_schedule"] = _parse_list(base["c_schedule"])
        cfg = RunConfig(**base)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    args.explicit_space = explicit_space
    return cfg.validate()


COMMANDS = {
    "norm": cmd_norm,
    "kernel": cmd_kernel,
    "apply": cmd_apply,
    "essnorm": cmd_essnorm,
    "admissible": cmd_admissible,
    "reproduce": cmd_reproduce,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        return COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except QuadratureError as exc:
        print(f"quadrature failure: {exc}", file=sys.stderr)
        return EXIT_QUADRATURE


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
