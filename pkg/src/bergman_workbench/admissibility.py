"""Sampled checks of the direction conditions (a)-(e) and of condition (W).

Sampling can exhibit a counterexample but cannot prove a statement about
every point, so each condition gets one of three statuses:

* ``pass``: supported by every sample (not a proof),
* ``fail``: a concrete witness sample violates the condition,
* ``inconclusive``: the samples decide nothing.

Conditions, for each t and the direction xi:

(a) phi_t' extends continuously to the closed disk near xi,
(b) phi_t(xi) = xi,
(c) the closure of phi_t(D minus B(xi, eps)) misses the unit circle,
(d) phi_t(B(xi, eps) and D) has a horocycle at xi in its closure,
(e) u_t extends continuously to the closed disk near xi,

and (W): int_0^1 ||S_t|| dt < infinity, continuity of t -> phi_t in sup norm,
continuity of t -> u_t in L^p away from xi, local boundedness of u_t and
local lower bound for |phi_t'| near xi.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .bergman import ComplexFunction, bergman_norm, make_power_kernel
from .operators import INFINITE, SymbolFamily, apply_weighted_composition, radial_limit
from .quadrature import QuadratureSpec
from .special import SpaceParams, beta

__all__ = [
    "STATUS_NOTE",
    "ConditionResult",
    "AdmissibilityReport",
    "ZGridSpec",
    "default_t_grid",
    "monomial_probe",
    "log_witness_probe",
    "check_direction",
    "check_W",
    "check_admissible",
]

STATUS_NOTE = (
    "pass = supported by every sample, not proved; fail = a witness sample violates the "
    "condition; inconclusive = the samples decide nothing"
)

DIRECTION_CONDITIONS = ("a", "b", "c", "d", "e")
W_CONDITIONS = ("W-integrability", "W-phi-continuity", "W-u-continuity", "W-u-bound", "W-phi-prime-bound")


@dataclass(frozen=True)
class ConditionResult:
    name: str
    status: str
    evidence: dict = field(default_factory=dict)
    note: str = ""

    def __post_init__(self):
        if self.status not in ("pass", "fail", "inconclusive"):
            raise ValueError(f"bad status {self.status!r}")
        if self.status == "fail" and not self.evidence:
            raise ValueError("a failed condition needs a witness")

    def to_dict(self) -> dict:
        return {"status": self.status, "evidence": _jsonable(self.evidence), "note": self.note}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


@dataclass(frozen=True)
class AdmissibilityReport:
    family: dict
    xi: complex
    conditions: dict
    sampling: dict
    note: str = STATUS_NOTE

    @property
    def overall(self) -> str:
        statuses = [c.status for c in self.conditions.values()]
        if "fail" in statuses:
            return "fail"
        if "inconclusive" in statuses:
            return "inconclusive"
        return "pass"

    def status(self, name: str) -> str:
        return self.conditions[name].status

    def merge(self, other: "AdmissibilityReport") -> "AdmissibilityReport":
        conditions = dict(self.conditions)
        conditions.update(other.conditions)
        sampling = dict(self.sampling)
        sampling.update(other.sampling)
        return AdmissibilityReport(self.family, self.xi, conditions, sampling, self.note)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "xi": [self.xi.real, self.xi.imag],
            "overall": self.overall,
            "conditions": {k: v.to_dict() for k, v in self.conditions.items()},
            "sampling": _jsonable(self.sampling),
            "note": self.note,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


@dataclass(frozen=True)
class ZGridSpec:
    """Sampling parameters for the z-grids."""

    n_radial: int = 24
    n_angular: int = 96
    eps_ladder: tuple = (0.4, 0.2, 0.1)
    margin: float = 1e-9
    boundary_radii: tuple = (1e-2, 1e-3, 1e-4)
    horocycle_radii: tuple = (0.05, 0.1)
    horocycle_points: int = 32
    continuity_steps: tuple = (1e-2, 1e-3, 1e-4)
    local_radius: float = 0.1

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def default_t_grid(n: int = 17, lo: float = 0.02, hi: float = 0.98) -> list:
    """Chebyshev points of the first kind mapped into (lo, hi), increasing."""
    k = np.arange(n)
    x = -np.cos(np.pi * (k + 0.5) / n)
    return [float(v) for v in lo + (hi - lo) * 0.5 * (x + 1.0)]


# --------------------------------------------------------------------------
# grids


def _closed_disk_grid(spec: ZGridSpec) -> np.ndarray:
    """Polar grid on the closed disk, denser toward the circle, including it."""
    s = np.linspace(0.0, 1.0, spec.n_radial)
    r = 1.0 - (1.0 - s) ** 2
    th = 2.0 * np.pi * np.arange(spec.n_angular) / spec.n_angular
    z = (r[:, None] * np.exp(1j * th[None, :])).ravel()
    return np.concatenate([[0j], z[np.abs(z) > 0]])


def _boundary_ring(xi: complex, rho: float, n: int = 17) -> np.ndarray:
    """Points xi (1 - rho e^{i psi}), |psi| <= 1.4, all inside the disk near xi."""
    psi = np.linspace(-1.4, 1.4, n)
    return xi * (1.0 - rho * np.exp(1j * psi))


def _safe(fn, z):
    with np.errstate(all="ignore"):
        try:
            return np.asarray(fn(z), dtype=complex)
        except (ValueError, ArithmeticError):
            return np.full(np.shape(z), np.nan, dtype=complex)


def _worst(z, vals, key):
    i = int(np.argmax(key))
    return {"z": complex(z.ravel()[i]), "value": complex(vals.ravel()[i])}


# --------------------------------------------------------------------------
# (a) - (e)


def _oscillation(fn, xi, radii, t):
    """Oscillation of fn around its radial limit on nested rings; (status, evidence)."""
    try:
        limit, lim_err = radial_limit(fn, xi)
    except (ValueError, ArithmeticError):
        limit, lim_err = complex("nan"), math.inf
    osc = []
    worst = None
    for rho in radii:
        ring = _boundary_ring(xi, rho)
        vals = _safe(fn, ring)
        if not np.all(np.isfinite(vals)):
            bad = ~np.isfinite(vals)
            return "fail", {"t": t, "z": complex(ring[bad][0]), "value": "non-finite", "rho": rho}
        dev = np.abs(vals - limit) if np.isfinite(limit) else np.abs(vals - vals[len(vals) // 2])
        osc.append(float(np.max(dev)))
        worst = {"t": t, "rho": rho, **_worst(ring, vals, dev)}
    ev = {"t": t, "limit": limit, "limit_error": lim_err, "oscillation": osc, "worst": worst}
    if not np.isfinite(limit):
        return "fail", ev
    scale = max(1.0, abs(limit))
    if osc[-1] <= 1e-2 * scale and all(b <= a * 1.01 + 1e-12 for a, b in zip(osc, osc[1:])):
        return "pass", ev
    if osc[-1] > 0.5 * osc[0] and osc[-1] > 0.1 * scale:
        # no decay as the rings shrink: the boundary value does not exist
        return "fail", ev
    return "inconclusive", ev


def _combine(per_t, name):
    """Worst status over t; keep the first failing (or worst) evidence."""
    fails = [(t, ev) for t, st, ev in per_t if st == "fail"]
    if fails:
        return ConditionResult(name, "fail", {"t": fails[0][0], "witness": fails[0][1], "failed_t": [t for t, _ in fails]})
    inc = [(t, ev) for t, st, ev in per_t if st == "inconclusive"]
    if inc:
        return ConditionResult(name, "inconclusive", {"t": inc[0][0], "sample": inc[0][1], "inconclusive_t": [t for t, _ in inc]})
    last = per_t[-1] if per_t else (None, None, {})
    return ConditionResult(name, "pass", {"last": last[2], "t_count": len(per_t)})


def _check_b(pair, xi, t):
    try:
        end, err = radial_limit(pair.phi.evaluate, xi)
    except (ValueError, ArithmeticError):
        return "inconclusive", {"t": t, "reason": "phi not evaluable on the radius"}
    ev = {"t": t, "limit": end, "error": err, "witness_rho": 1.0 - 2.0 ** -12,
          "phi_at_rho": complex(_safe(pair.phi.evaluate, np.asarray((1.0 - 2.0 ** -12) * xi)))}
    gap = abs(end - xi)
    if gap < 1e-6:
        return "pass", ev
    if gap > 1e-3:
        return "fail", ev
    return "inconclusive", ev


def _check_c(pair, xi, t, grid, spec):
    vals = np.abs(_safe(pair.phi.evaluate, grid))
    out = {}
    dist = np.abs(grid - xi)
    finite = np.isfinite(vals)
    for eps in spec.eps_ladder:
        sel = (dist >= eps) & finite
        if not np.any(sel):
            out[eps] = ("inconclusive", {"t": t, "eps": eps, "reason": "no samples"})
            continue
        sub = np.where(sel, vals, -np.inf)
        i = int(np.argmax(sub))
        sup = float(vals[i])
        ev = {"t": t, "eps": eps, "sup_abs_phi": sup, "z": complex(grid[i])}
        if sup <= 1.0 - spec.margin:
            out[eps] = ("pass", ev)
        elif sup >= 1.0 - 1e-13:
            out[eps] = ("fail", ev)
        else:
            out[eps] = ("inconclusive", ev)
    return out


def _newton_preimage(phi: ComplexFunction, w: complex, seed: complex, iters: int = 80):
    z = seed
    for _ in range(iters):
        with np.errstate(all="ignore"):
            fz = complex(phi.evaluate(np.asarray(z))) - w
            dz = complex(phi.derivative(np.asarray(z)))
        if not (np.isfinite(fz) and np.isfinite(dz)) or dz == 0:
            return None
        if abs(fz) < 1e-12:
            return z
        step = fz / dz
        lam = 1.0
        # damping: shrink the step until the residual decreases
        while lam > 1e-6:
            cand = z - lam * step
            with np.errstate(all="ignore"):
                fc = complex(phi.evaluate(np.asarray(cand))) - w
            if np.isfinite(fc) and abs(fc) < abs(fz):
                break
            lam *= 0.5
        z = z - lam * step
    return None


def _check_d(pair, xi, t, dphi_xi, spec):
    eps = max(spec.eps_ladder)
    scale = min(1.0, abs(dphi_xi)) if dphi_xi not in (None, INFINITE) and np.isfinite(dphi_xi) else None
    if scale is None or scale == 0:
        return "inconclusive", {"t": t, "reason": "no finite angular derivative at xi"}
    worst = 0.0
    stalls = []
    for r0 in spec.horocycle_radii:
        r = r0 * scale
        center = xi * (1.0 - r)
        for j in range(spec.horocycle_points):
            ang = 2.0 * math.pi * (j + 0.5) / spec.horocycle_points
            w = center + r * xi * complex(math.cos(ang), math.sin(ang))
            seed = xi + (w - xi) / dphi_xi
            if abs(seed) >= 1:
                seed = seed / abs(seed) * (1 - 1e-9)
            z = _newton_preimage(pair.phi, w, seed)
            if z is None or abs(z) >= 1.0 + 1e-12 or abs(z - xi) >= eps:
                stalls.append({"w": w, "seed": seed, "found": z, "radius": r})
            else:
                worst = max(worst, abs(z - xi))
    ev = {"t": t, "radii": [r0 * scale for r0 in spec.horocycle_radii], "eps": eps, "max_preimage_distance": worst}
    if stalls:
        ev["unattained"] = stalls[:3]
        return "inconclusive", ev
    return "pass", ev


def check_direction(
    family: SymbolFamily,
    xi=None,
    t_grid=None,
    z_grid_spec: ZGridSpec | None = None,
) -> AdmissibilityReport:
    """Conditions (a)-(e) at the direction xi for every t in the grid."""
    xi = complex(xi if xi is not None else family.directions[0])
    t_grid = list(t_grid) if t_grid is not None else default_t_grid()
    if not t_grid:
        raise ValueError("empty t grid")
    spec = z_grid_spec or ZGridSpec()
    grid = _closed_disk_grid(spec)
    rows = {name: [] for name in DIRECTION_CONDITIONS}
    c_rows = {eps: [] for eps in spec.eps_ladder}
    for t in t_grid:
        pair = family.at(t)
        st_b, ev_b = _check_b(pair, xi, t)
        rows["b"].append((t, st_b, ev_b))
        st_a, ev_a = _oscillation(pair.phi.derivative, xi, spec.boundary_radii, t)
        if st_a == "pass":
            lim = complex(ev_a["limit"])
            if abs(lim.imag) > 1e-6 * max(1.0, abs(lim)) or lim.real <= 0:
                # at a boundary fixed point the angular derivative is real and positive
                st_a = "fail" if st_b == "pass" else "inconclusive"
        rows["a"].append((t, st_a, ev_a))
        for eps, (st, ev) in _check_c(pair, xi, t, grid, spec).items():
            c_rows[eps].append((t, st, ev))
        dphi = complex(ev_a["limit"]) if st_a == "pass" else None
        rows["d"].append((t, *_check_d(pair, xi, t, dphi, spec)))
        rows["e"].append((t, *_oscillation(pair.u.evaluate, xi, spec.boundary_radii, t)))
    conditions = {name: _combine(rows[name], name) for name in ("a", "b")}
    ladder = {eps: _combine(c_rows[eps], f"c(eps={eps})") for eps in spec.eps_ladder}
    worst = min(ladder.values(), key=lambda r: ("fail", "inconclusive", "pass").index(r.status))
    conditions["c"] = ConditionResult(
        "c",
        worst.status,
        {"by_eps": {str(eps): r.to_dict() for eps, r in ladder.items()}, **({"witness": worst.evidence} if worst.status == "fail" else {})},
        "tested on a finite eps ladder",
    )
    conditions["d"] = _combine(rows["d"], "d")
    conditions["e"] = _combine(rows["e"], "e")
    conditions["d"] = ConditionResult("d", conditions["d"].status, conditions["d"].evidence, "horocycle probes on the finite radius set; never fails")
    sampling = {"t_grid": t_grid, "z_grid": spec.to_dict(), "z_grid_points": int(grid.size)}
    return AdmissibilityReport(family.to_dict(), xi, conditions, sampling)


# --------------------------------------------------------------------------
# (W)


def monomial_probe(k: int, space: SpaceParams) -> ComplexFunction:
    """z^k / ||z^k||, with ||z^k||^p = (1+alpha) B(kp/2 + 1, alpha + 1)."""
    norm = ((1.0 + space.alpha) * beta(k * space.p / 2.0 + 1.0, space.alpha + 1.0)) ** (1.0 / space.p)
    return ComplexFunction(
        lambda z: np.asarray(z, dtype=complex) ** k / norm,
        lambda z: k * np.asarray(z, dtype=complex) ** max(k - 1, 0) / norm if k else np.zeros(np.shape(z), dtype=complex),
        frozenset(),
        f"z^{k}/||z^{k}||",
    )


def log_witness_probe(space: SpaceParams, xi=1, spec: QuadratureSpec | None = None) -> ComplexFunction:
    """((xi - z)^(2/p) ln(e / (1 - conj(xi) z)))^-1, normalized by quadrature.

    It lies in A^p_alpha for alpha = 0 and p > 1 and is the standard witness for
    non-integrable operator norms of point-evaluation type families.
    """
    xi = complex(xi)
    xb = xi.conjugate()
    a = 2.0 / space.p

    def raw(z):
        w = 1.0 - xb * np.asarray(z, dtype=complex)
        return 1.0 / (np.exp(a * np.log(w)) * (1.0 - np.log(w)))

    def raw_d(z):
        w = 1.0 - xb * np.asarray(z, dtype=complex)
        lw = np.log(w)
        g = np.exp(a * lw) * (1.0 - lw)
        # d/dz of g = -xb * (a w^(a-1) (1 - ln w) - w^(a-1))
        dg = -xb * np.exp((a - 1.0) * lw) * (a * (1.0 - lw) - 1.0)
        return -dg / g ** 2

    f = ComplexFunction(raw, raw_d, frozenset({xi}), "log witness")
    res = bergman_norm(f, space, spec or QuadratureSpec(rel_tol=1e-4))
    n = res.value
    return ComplexFunction(lambda z: raw(z) / n, lambda z: raw_d(z) / n, frozenset({xi}), "log witness (normalized)")


def _default_probes(xi, space):
    probes = [monomial_probe(k, space) for k in (0, 1, 4)]
    probes.append(make_power_kernel(0.5 * space.critical_exponent, xi, space).function)
    return probes


def _lower_bound(family, t, probes, space, disk_spec, xi):
    best, arg, ok = 0.0, None, True
    for f in probes:
        f = getattr(f, "function", f)
        try:
            g = apply_weighted_composition(family.at(t), f)
            # members with an infinite angular derivative can still peak next
            # to xi (u_t may have a pole just outside the disk)
            g = replace(g, singularities=g.singularities | {xi})
            r = bergman_norm(g, space, disk_spec)
        except (ValueError, ArithmeticError):
            ok = False
            continue
        ok = ok and r.converged
        if r.value > best:
            best, arg = r.value, f.label
    return best, arg, ok


def _continuity_status(moduli, steps, t, what):
    ev = {"t": t, "steps": list(steps), "moduli": moduli}
    if not all(math.isfinite(m) for m in moduli):
        return "fail", ev
    if moduli[-1] <= 0.1 * moduli[0] + 1e-12:
        return "pass", ev
    if moduli[-1] >= 0.5 * moduli[0] and moduli[-1] > 1e-6:
        return "fail", {**ev, "note": f"{what} does not shrink with the step"}
    return "inconclusive", ev


def _lp_away(u1, u0, grid, weights, p):
    diff = np.abs(_safe(u1, grid) - _safe(u0, grid))
    return float(np.sum(weights * diff ** p)) ** (1.0 / p)


def _polar_cells(spec: ZGridSpec, alpha: float, xi: complex, eps: float):
    """Midpoint grid with dA_alpha weights on the part of the disk outside B(xi, eps)."""
    nr, nt = 2 * spec.n_radial, spec.n_angular
    r_edges = np.linspace(0.0, 1.0, nr + 1)
    r = 0.5 * (r_edges[1:] + r_edges[:-1])
    th = 2.0 * np.pi * (np.arange(nt) + 0.5) / nt
    z = (r[:, None] * np.exp(1j * th[None, :])).ravel()
    dr = np.diff(r_edges)
    w = ((1.0 + alpha) * (1.0 - r ** 2) ** alpha * r * dr / np.pi)[:, None] * np.full(nt, 2.0 * np.pi / nt)[None, :]
    w = w.ravel()
    keep = np.abs(z - xi) >= eps
    return z[keep], w[keep]


def _decade_analysis(family, probes, space, disk_spec, end, xi):
    """Lower bounds at t = 10^-k (end 0) or 1 - 10^-k (end 1), k = 1, 2, 3."""
    rows = []
    for k in (1, 2, 3):
        s = 10.0 ** -k
        t = s if end == 0 else 1.0 - s
        lb, arg, ok = _lower_bound(family, t, probes, space, disk_spec, xi)
        rows.append({"t": t, "distance": s, "lower_bound": lb, "probe": arg, "converged": ok})
    factors = [rows[i + 1]["lower_bound"] / rows[i]["lower_bound"] if rows[i]["lower_bound"] > 0 else math.inf for i in range(2)]
    # decade contributions ~ s L(s); a sum of these that does not shrink geometrically diverges
    contrib = [r["distance"] * r["lower_bound"] for r in rows]
    return {"end": end, "samples": rows, "decade_factors": factors, "decade_contributions": contrib}


def check_W(
    family: SymbolFamily,
    xi=None,
    space: SpaceParams | None = None,
    t_grid=None,
    z_grid_spec: ZGridSpec | None = None,
    probe_set=None,
    witness_probes=None,
    norm_bound=None,
    disk_spec: QuadratureSpec | None = None,
) -> AdmissibilityReport:
    """The parts of (W) at xi: integrability of ||S_t|| and the continuity conditions.

    ||S_t|| is bounded below by the largest ||S_t f|| over the probes.
    Integrability passes only with an integrable upper bound (``norm_bound``
    or the family's own); it fails only with user-supplied witness probes
    whose lower-bound curve grows without geometric decay of the decade
    contributions; otherwise it is inconclusive.
    """
    from .essnorm import _t_integral  # deferred: essnorm imports this module's siblings only

    xi = complex(xi if xi is not None else family.directions[0])
    space = space or SpaceParams(2.0, 0.0)
    t_grid = list(t_grid) if t_grid is not None else default_t_grid()
    spec = z_grid_spec or ZGridSpec()
    disk_spec = disk_spec or QuadratureSpec(rel_tol=1e-5)
    probes = list(probe_set) if probe_set is not None else _default_probes(xi, space)
    bound = norm_bound if norm_bound is not None else family.norm_bound

    curve = []
    for t in t_grid:
        lb, arg, ok = _lower_bound(family, t, probes, space, disk_spec, xi)
        b = bound(t, space) if bound is not None else None
        curve.append({"t": t, "lower_bound": lb, "probe": arg, "converged": ok, "bound": b})

    conditions = {}
    integ_ev = {"lower_bound_curve": curve}
    violated = [row for row in curve if row["bound"] is not None and row["lower_bound"] > row["bound"] * (1 + 1e-3)]
    status = "inconclusive"
    note = "no integrable upper bound supplied"
    if bound is not None and any(row["bound"] is not None for row in curve):
        if violated:
            integ_ev["bound_violations"] = violated
            note = "supplied bound is below a probe lower bound; bound rejected"
        else:
            res = _t_integral(lambda t: bound(t, space) or 0.0, None)
            integ_ev["bound_integral"] = {"value": float(np.real(res.value)), "error": res.error, "converged": res.converged}
            if res.converged and math.isfinite(float(np.real(res.value))):
                status, note = "pass", "integrable upper bound; lower bound stays below it"
            else:
                note = "supplied bound is not integrable"
    if witness_probes:
        ends = [_decade_analysis(family, list(witness_probes), space, disk_spec, end, xi) for end in (0, 1)]
        integ_ev["witness"] = ends
        for e in ends:
            c = e["decade_contributions"]
            growing = all(f > 2.0 for f in e["decade_factors"])
            if growing and c[0] > 0 and c[2] >= 0.5 * c[1] >= 0.25 * c[0] and status != "pass":
                status = "fail"
                note = "witness lower bound grows non-integrably toward t = %d" % e["end"]
                integ_ev["witness_end"] = e["end"]
    conditions["W-integrability"] = ConditionResult("W-integrability", status, integ_ev, note)

    steps = spec.continuity_steps
    grid = _closed_disk_grid(spec)
    cells, weights = _polar_cells(spec, space.alpha, xi, spec.local_radius)
    local = np.concatenate([_boundary_ring(xi, rho) for rho in (spec.local_radius / 2, *spec.boundary_radii)])
    phi_rows, u_rows, ub_rows, dp_rows = [], [], [], []
    for t in t_grid:
        p0 = family.at(t)
        phi_m, u_m = [], []
        for h in steps:
            th = t + h if t + h < 1 else t - h
            p1 = family.at(th)
            phi_m.append(float(np.nanmax(np.abs(_safe(p1.phi.evaluate, grid) - _safe(p0.phi.evaluate, grid)))))
            u_m.append(_lp_away(p1.u.evaluate, p0.u.evaluate, cells, weights, space.p))
        phi_rows.append((t, *_continuity_status(phi_m, steps, t, "sup |phi_t - phi_t0|")))
        u_rows.append((t, *_continuity_status(u_m, steps, t, "L^p distance of u_t away from xi")))
        near = [t] + [t + s * h for h in steps for s in (-1, 1) if 0 < t + s * h < 1]
        u_vals = np.concatenate([np.abs(_safe(family.at(tt).u.evaluate, local)) for tt in near])
        dp_vals = np.concatenate([np.abs(_safe(family.at(tt).phi.derivative, local)) for tt in near])
        if not np.all(np.isfinite(u_vals)):
            ub_rows.append((t, "fail", {"t": t, "reason": "u_t not finite near xi"}))
        else:
            ub_rows.append((t, "pass", {"t": t, "sup": float(np.max(u_vals))}))
        if not np.all(np.isfinite(dp_vals)) or np.min(dp_vals) <= 1e-12:
            i = int(np.argmin(np.where(np.isfinite(dp_vals), dp_vals, -1.0)))
            ub = {"t": t, "inf": float(dp_vals[i]), "z": complex(np.tile(local, len(near))[i])}
            dp_rows.append((t, "fail", ub))
        else:
            dp_rows.append((t, "pass", {"t": t, "inf": float(np.min(dp_vals))}))
    conditions["W-phi-continuity"] = _combine(phi_rows, "W-phi-continuity")
    conditions["W-u-continuity"] = _combine(u_rows, "W-u-continuity")
    conditions["W-u-bound"] = _combine(ub_rows, "W-u-bound")
    conditions["W-phi-prime-bound"] = _combine(dp_rows, "W-phi-prime-bound")
    sampling = {
        "t_grid": t_grid,
        "z_grid": spec.to_dict(),
        "probes": [getattr(getattr(f, "function", f), "label", "") for f in probes],
        "space": space.to_dict(),
    }
    return AdmissibilityReport(family.to_dict(), xi, conditions, sampling)


def check_admissible(family: SymbolFamily, xi=None, space: SpaceParams | None = None, t_grid=None, **kw) -> AdmissibilityReport:
    """Both checks merged into one report."""
    z_spec = kw.pop("z_grid_spec", None)
    direction = check_direction(family, xi, t_grid, z_spec)
    return direction.merge(check_W(family, xi, space, t_grid, z_spec, **kw))
