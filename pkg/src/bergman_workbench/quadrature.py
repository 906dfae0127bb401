"""Adaptive quadrature on intervals and on the unit disk.

Integrands are vectorized: they receive a 1-D numpy array of sample points
and return an array whose first axis matches it (extra trailing axes are
integrated componentwise).

Disk integrals use the normalized weighted measure
``dA_alpha = (1 + alpha) (1 - |z|^2)^alpha dx dy / pi``.  Without a declared
boundary singularity a graded polar grid is used.  With one (or an antipodal
pair of) singular boundary points the disk is covered by polar coordinates
centred on each singular point; the radial direction is split into dyadic
levels and the remaining geometric tail is summed by Aitken extrapolation.
"""

from __future__ import annotations

import heapq
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

__all__ = [
    "QuadratureError",
    "QuadratureSpec",
    "IntegrationResult",
    "gauss_legendre_rule",
    "tanh_sinh_rule",
    "integrate_interval",
    "integrate_disk",
    "aitken_tail_sum",
]


class QuadratureError(ArithmeticError):
    """Raised when an integrand returns a non-finite value inside the domain."""


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-7
    abs_tol: float = 1e-12
    base_order: int = 16
    max_depth: int = 14
    grading_exponent: float = 3.0
    singular_point: complex | None = None
    # additional boundary singularities; only an antipodal pair is supported
    singular_points: tuple = ()
    max_levels: int = 44
    jobs: int = 1
    # the integrand grows like |z - xi|^-blowup_order at the singular points;
    # when given, the matching geometric rate is removed before acceleration
    blowup_order: float | None = None

    def __post_init__(self):
        if not self.rel_tol > 0 or not self.abs_tol > 0:
            raise ValueError("tolerances must be positive")
        if self.base_order < 2:
            raise ValueError("base_order must be at least 2")
        if self.grading_exponent < 1:
            raise ValueError("grading_exponent must be >= 1")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
        for xi in self.singularities:
            if abs(abs(xi) - 1.0) > 1e-12:
                raise ValueError(f"singular point {xi!r} is not unimodular")

    @property
    def singularities(self) -> tuple:
        pts = list(self.singular_points)
        if self.singular_point is not None:
            pts.insert(0, self.singular_point)
        out = []
        for p in pts:
            p = complex(p)
            if all(abs(p - q) > 1e-12 for q in out):
                out.append(p)
        return tuple(out)

    def tolerance(self, value) -> float:
        return max(self.abs_tol, self.rel_tol * float(np.max(np.abs(value))))

    def with_singularities(self, points) -> "QuadratureSpec":
        pts = tuple(complex(p) for p in points)
        return _replace(self, singular_point=None, singular_points=pts)


def _replace(spec: QuadratureSpec, **changes) -> QuadratureSpec:
    from dataclasses import replace

    return replace(spec, **changes)


@dataclass(frozen=True)
class IntegrationResult:
    value: complex
    error_estimate: float
    cells_used: int
    converged: bool

    @property
    def real(self) -> float:
        return float(np.real(self.value))


# --------------------------------------------------------------------------
# rules


@lru_cache(maxsize=64)
def _gl(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre_rule(n: int):
    """Nodes and weights of the ``n``-point Gauss-Legendre rule on [-1, 1]."""
    if int(n) != n or n < 1:
        raise ValueError("Gauss-Legendre rule needs n >= 1")
    return _gl(int(n))


@lru_cache(maxsize=64)
def _ts(level: int, min_distance: float):
    h = 2.0 ** (-level)
    ks = []
    k = 0
    while True:
        x = k * h
        u = 0.5 * math.pi * math.sinh(x)
        # distance of the node to the nearer endpoint of [-1, 1]
        dist = 2.0 / (1.0 + math.exp(2.0 * u)) if u < 350 else 0.0
        if dist < min_distance and k > 0:
            break
        ks.append(k)
        k += 1
    k = np.array(ks, dtype=float)
    x = k * h
    u = 0.5 * np.pi * np.sinh(x)
    dist = 2.0 / (1.0 + np.exp(2.0 * u))
    w = h * 0.5 * np.pi * np.cosh(x) / np.cosh(u) ** 2
    # symmetric assembly: left side (negative x) mirrors the right
    d_left = np.concatenate([dist[:0:-1], [1.0], 2.0 - dist[1:]])
    d_right = np.concatenate([2.0 - dist[:0:-1], [1.0], dist[1:]])
    ww = np.concatenate([w[:0:-1], w])
    idx = np.concatenate([-k[:0:-1], k]).astype(int)
    for arr in (d_left, d_right, ww, idx):
        arr.setflags(write=False)
    return d_left, d_right, ww, idx


def tanh_sinh_rule(level: int, min_distance: float = 1e-200):
    """Tanh-sinh rule on [-1, 1] with step ``2**-level``.

    Returns ``(nodes, weights, dist_left, dist_right)``; the distances to the
    endpoints are computed without cancellation.
    """
    d_left, d_right, w, _ = _ts(int(level), float(min_distance))
    nodes = np.where(d_left < d_right, d_left - 1.0, 1.0 - d_right)
    return nodes, w, d_left, d_right


def _ts_nested(level: int, min_distance: float):
    d_left, d_right, w, idx = _ts(int(level), float(min_distance))
    coarse = (idx % 2) == 0
    return d_left, d_right, w, coarse


# --------------------------------------------------------------------------
# helpers


def _check_finite(values, points):
    values = np.asarray(values)
    bad = ~np.isfinite(values)
    if bad.ndim > 1:
        bad = bad.reshape(bad.shape[0], -1).any(axis=1)
    if np.any(bad):
        where = points[np.argmax(bad)]
        raise QuadratureError(f"integrand is not finite at sample point {where!r}")
    return values


def _evaluate(f, points, jobs: int = 1, chunk: int = 65536):
    if jobs <= 1 or points.size <= chunk:
        with np.errstate(all="ignore"):
            vals = np.asarray(f(points))
        return _check_finite(vals, points)
    pieces = [points[i:i + chunk] for i in range(0, points.size, chunk)]

    def run(p):
        with np.errstate(all="ignore"):
            return np.asarray(f(p))

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        vals = np.concatenate(list(pool.map(run, pieces)), axis=0)
    return _check_finite(vals, points)


def _wsum(weights, values):
    # weights along axis 0 of values
    return np.tensordot(weights, values, axes=(0, 0))


def aitken_tail_sum(terms):
    """Aitken-accelerated sums of a series whose terms decay geometrically.

    Returns the array of accelerated partial sums ``A_k`` (same leading length
    as ``terms``; the first two entries are plain partial sums).  ``A_k`` uses
    terms ``k-2, k-1, k``.
    """
    terms = np.asarray(terms, dtype=complex)
    partial = np.cumsum(terms, axis=0)
    acc = partial.copy()
    for k in range(2, terms.shape[0]):
        d1 = terms[k]
        d0 = terms[k - 1]
        den = d1 - d0
        with np.errstate(all="ignore"):
            q = np.where(d0 != 0, d1 / np.where(d0 != 0, d0, 1), 0)
            tail = np.where((np.abs(den) > 0) & (np.abs(q) < 1), -d1 * d1 / np.where(den != 0, den, 1), 0)
        acc[k] = partial[k] + tail
    return acc


# --------------------------------------------------------------------------
# intervals


def integrate_interval(
    f: Callable,
    a: float,
    b: float,
    endpoint_singularities=(False, False),
    spec: QuadratureSpec | None = None,
    method: str | None = None,
) -> IntegrationResult:
    """Integrate ``f`` over ``[a, b]``.

    Smooth integrands use globally adaptive Gauss-Legendre bisection with an
    ``n`` versus ``2n`` error estimate.  If either endpoint is flagged as
    singular the tanh-sinh substitution is used (``method="tanh-sinh"``), or
    dyadic panels graded toward the flagged endpoints with an extrapolated
    geometric tail (``method="graded"``), which never samples closer to an
    endpoint than ``2**-max_levels`` of the interval length.
    """
    spec = spec or QuadratureSpec()
    if not b > a:
        raise ValueError("integrate_interval needs a < b")
    left, right = (bool(s) for s in endpoint_singularities)
    if method is None:
        method = "tanh-sinh" if (left or right) else "gauss"
    if method == "gauss":
        return _adaptive_gauss(f, a, b, spec)
    if method == "tanh-sinh":
        return _tanh_sinh(f, a, b, spec)
    if method == "graded":
        return _graded_interval(f, a, b, left, right, spec)
    raise ValueError(f"unknown interval method {method!r}")


def _gauss_panel(f, lo, hi, n, spec):
    x2, w2 = _gl(2 * n)
    x1, w1 = _gl(n)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    pts = np.concatenate([mid + half * x2, mid + half * x1])
    vals = _evaluate(f, pts, spec.jobs)
    fine = half * _wsum(w2, vals[: 2 * n])
    coarse = half * _wsum(w1, vals[2 * n:])
    return fine, float(np.max(np.abs(fine - coarse)))


def _adaptive_gauss(f, a, b, spec):
    n = max(2, spec.base_order // 2)
    value, err = _gauss_panel(f, a, b, n, spec)
    heap = [(-err, 0, a, b, value, err)]
    total = value
    total_err = err
    cells = 1
    counter = 1
    while total_err > spec.tolerance(total):
        neg, _, lo, hi, val, e = heapq.heappop(heap)
        depth = math.log2((b - a) / (hi - lo))
        if depth >= spec.max_depth:
            heapq.heappush(heap, (neg, _, lo, hi, val, e))
            break
        mid = 0.5 * (lo + hi)
        v1, e1 = _gauss_panel(f, lo, mid, n, spec)
        v2, e2 = _gauss_panel(f, mid, hi, n, spec)
        total = total - val + v1 + v2
        total_err = total_err - e + e1 + e2
        for item in ((lo, mid, v1, e1), (mid, hi, v2, e2)):
            heapq.heappush(heap, (-item[3], counter, *item))
            counter += 1
        cells += 1
    # recompute sums to shed round-off from the running updates
    total = sum((item[4] for item in heap), start=0 * heap[0][4])
    total_err = float(sum(item[5] for item in heap))
    return IntegrationResult(total, total_err, cells, total_err <= spec.tolerance(total))


def _tanh_sinh(f, a, b, spec, start_level: int = 3, max_level: int = 8):
    half = 0.5 * (b - a)
    prev = None
    result = None
    for level in range(start_level, max_level + 1):
        d_left, d_right, w, coarse = _ts_nested(level, 1e-200)
        pts = np.where(d_left < d_right, a + half * d_left, b - half * d_right)
        keep = (pts > a) & (pts < b)
        vals = _evaluate(f, pts[keep], spec.jobs)
        ww = half * w[keep]
        value = _wsum(ww, vals)
        coarse_value = 2.0 * _wsum(ww[coarse[keep]], vals[coarse[keep]])
        err = float(np.max(np.abs(value - coarse_value)))
        if prev is not None:
            err = min(err, float(np.max(np.abs(value - prev))))
        result = IntegrationResult(value, err, int(keep.sum()), err <= spec.tolerance(value))
        if result.converged and level > start_level:
            return result
        prev = value
    return result


def _graded_interval(f, a, b, left, right, spec):
    n = spec.base_order
    max_levels = min(spec.max_levels, 40)
    block = 4
    min_levels = 8
    length = b - a
    mid = 0.5 * (a + b)
    xf, wf = _gl(n)
    xc, wc = _gl(max(2, n // 2))

    def panels_value(pans):
        pts = []
        for lo, hi in pans:
            h = 0.5 * (hi - lo)
            c = 0.5 * (hi + lo)
            pts.append(c + h * xf)
            pts.append(c + h * xc)
        vals = _evaluate(f, np.concatenate(pts), spec.jobs)
        fine, coarse = [], []
        off = 0
        for lo, hi in pans:
            h = 0.5 * (hi - lo)
            fine.append(h * _wsum(wf, vals[off:off + xf.size]))
            off += xf.size
            coarse.append(h * _wsum(wc, vals[off:off + xc.size]))
            off += xc.size
        return np.array(fine), np.array(coarse)

    inner = [(a + 0.25 * length, mid), (mid, b - 0.25 * length)]
    if not left:
        inner.append((a, a + 0.25 * length))
    if not right:
        inner.append((b - 0.25 * length, b))
    fi, ci = panels_value(inner)
    total_f = fi.sum(axis=0)
    total_c = ci.sum(axis=0)
    err = float(np.max(np.abs(total_f - total_c)))
    count = len(inner)

    def tail_panel(end, k):
        if end < 0:
            return (a + length * 2.0 ** (-k - 1), a + length * 2.0 ** (-k))
        return (b - length * 2.0 ** (-k), b - length * 2.0 ** (-k - 1))

    for end, flagged in ((-1, left), (1, right)):
        if not flagged:
            continue
        tf, tc = [], []
        k = 2
        while k < max_levels + 2:
            ks = range(k, min(k + block, max_levels + 2))
            pf, pc = panels_value([tail_panel(end, kk) for kk in ks])
            tf.extend(list(pf))
            tc.extend(list(pc))
            k += len(ks)
            if len(tf) < min_levels:
                continue
            acc = _iterated_aitken(np.array(tf))
            tol = spec.tolerance(total_f + acc[-1])
            if _stability(acc)[-1] <= 0.5 * tol:
                break
        acc_f = _iterated_aitken(np.array(tf))
        acc_c = _iterated_aitken(np.array(tc))
        stab = _stability(acc_f)
        stab[: min(min_levels, len(stab) - 1)] = np.inf
        jbest = int(np.argmin(stab)) if np.isfinite(stab).any() else len(stab) - 1
        total_f = total_f + acc_f[jbest]
        total_c = total_c + acc_c[jbest]
        err += float(np.max(np.abs(acc_f[jbest] - acc_c[jbest]))) + float(stab[jbest])
        count += len(tf)
    return IntegrationResult(total_f, err, count, err <= spec.tolerance(total_f))


# --------------------------------------------------------------------------
# disk


def integrate_disk(f: Callable, alpha: float, spec: QuadratureSpec | None = None) -> IntegrationResult:
    """Integrate ``f`` over the unit disk against ``dA_alpha``.

    ``spec.singularities`` selects the grid: none, a single boundary point, or
    an antipodal pair.
    """
    spec = spec or QuadratureSpec()
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    sing = spec.singularities
    if not sing:
        return _disk_polar(f, alpha, spec)
    if len(sing) == 1:
        return _disk_local(f, alpha, spec, sing, half_plane=False)
    if len(sing) == 2 and abs(sing[0] + sing[1]) < 1e-12:
        return _disk_local(f, alpha, spec, sing, half_plane=True)
    raise NotImplementedError("only one singular point or an antipodal pair is supported")


def _disk_polar(f, alpha, spec):
    gamma = spec.grading_exponent
    n = max(2, spec.base_order // 2)
    n_theta = 4 * spec.base_order
    xf, wf = _gl(2 * n)
    xc, wc = _gl(n)

    def cell(lo, hi, n_theta):
        theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
        h = 0.5 * (hi - lo)
        c = 0.5 * (hi + lo)
        s = np.concatenate([c + h * xf, c + h * xc])
        one_minus_r = (1.0 - s) ** gamma
        r = 1.0 - one_minus_r
        jac = gamma * (1.0 - s) ** (gamma - 1.0)
        weight = (1.0 + alpha) * (one_minus_r * (1.0 + r)) ** alpha * r * jac / np.pi
        z = (r[:, None] * np.exp(1j * theta)[None, :]).ravel()
        vals = _evaluate(f, z, spec.jobs)
        vals = vals.reshape((s.size, n_theta) + vals.shape[1:])
        ang = vals.sum(axis=1) * (2.0 * np.pi / n_theta)
        ang = ang * weight.reshape((-1,) + (1,) * (ang.ndim - 1))
        fine = h * _wsum(wf, ang[: xf.size])
        coarse = h * _wsum(wc, ang[xf.size:])
        return fine, float(np.max(np.abs(fine - coarse)))

    def run(n_theta):
        edges = np.linspace(0.0, 1.0, 5)
        heap = []
        counter = 0
        for lo, hi in zip(edges[:-1], edges[1:]):
            v, e = cell(lo, hi, n_theta)
            heap.append((-e, counter, lo, hi, v, e))
            counter += 1
        heapq.heapify(heap)
        cells = len(heap)
        while True:
            total = sum((it[4] for it in heap), start=0 * heap[0][4])
            err = float(sum(it[5] for it in heap))
            if err <= 0.25 * spec.tolerance(total):
                break
            neg, cnt, lo, hi, v, e = heapq.heappop(heap)
            if math.log2(1.0 / (hi - lo)) >= spec.max_depth:
                heapq.heappush(heap, (neg, cnt, lo, hi, v, e))
                break
            m = 0.5 * (lo + hi)
            for a_, b_ in ((lo, m), (m, hi)):
                v2, e2 = cell(a_, b_, n_theta)
                heapq.heappush(heap, (-e2, counter, a_, b_, v2, e2))
                counter += 1
            cells += 1
        return total, err, cells

    total, err, cells = run(n_theta)
    for _ in range(4):
        total2, err2, cells2 = run(2 * n_theta)
        ang_err = float(np.max(np.abs(total2 - total)))
        n_theta *= 2
        total, err, cells = total2, err2 + ang_err, cells + cells2
        if ang_err <= 0.25 * spec.tolerance(total):
            break
    return IntegrationResult(total, err, cells, err <= spec.tolerance(total))


def _psi_panels(half_plane: bool):
    if half_plane:
        q = 0.25 * np.pi
        return [(-0.5 * np.pi, -q), (-q, q), (q, 0.5 * np.pi)]
    return [(-0.5 * np.pi, 0.5 * np.pi)]


def _psi_nodes(half_plane: bool, level: int):
    """ψ nodes with fine weights and the nested coarse (step doubled) weights."""
    d_left, d_right, w, coarse = _ts_nested(level, 1e-17)
    psi, wf, wc = [], [], []
    for lo, hi in _psi_panels(half_plane):
        h = 0.5 * (hi - lo)
        psi.append(np.where(d_left < d_right, lo + h * d_left, hi - h * d_right))
        wf.append(h * w)
        wc.append(np.where(coarse, 2.0 * h * w, 0.0))
    return np.concatenate(psi), np.concatenate(wf), np.concatenate(wc)


def _rho_max(psi, half_plane):
    cos = np.cos(psi)
    two_cos = 2.0 * cos
    if not half_plane:
        return two_cos
    with np.errstate(divide="ignore"):
        line = 1.0 / cos
    return np.minimum(two_cos, line)


def _v_panels(levels_from: int, levels_to: int):
    """Dyadic v-panels [2^-(k+1), 2^-k] for k in [levels_from, levels_to)."""
    return [(2.0 ** (-k - 1), 2.0 ** (-k)) for k in range(levels_from, levels_to)]


def _local_block(f, alpha, xi, half_plane, psi, wpsi_f, wpsi_c, v_pan, n, gamma, top, jobs):
    """Per-panel integrals (fine, coarse) over the given v-panels.

    ``top`` marks the panel [1/2, 1], which is graded toward v = 1.
    """
    xf, wf = _gl(n)
    xc, wc = _gl(max(2, n // 2))
    rmax = _rho_max(psi, half_plane)
    cos = np.cos(psi)
    rot = np.exp(1j * psi)
    v_all, wv_f, wv_c, pid = [], [], [], []
    for j, (lo, hi) in enumerate(v_pan):
        for x, w, fine in ((xf, wf, True), (xc, wc, False)):
            if top and j == 0:
                # v = 1 - (1/2)(1-s)^gamma, s in [0, 1]
                s = 0.5 * (x + 1.0)
                v = 1.0 - 0.5 * (1.0 - s) ** gamma
                jw = 0.5 * w * 0.5 * gamma * (1.0 - s) ** (gamma - 1.0)
            else:
                h = 0.5 * (hi - lo)
                v = 0.5 * (hi + lo) + h * x
                jw = h * w
            v_all.append(v)
            wv_f.append(jw if fine else np.zeros_like(jw))
            wv_c.append(np.zeros_like(jw) if fine else jw)
            pid.append(np.full(v.size, j))
    v = np.concatenate(v_all)
    wv_f = np.concatenate(wv_f)
    wv_c = np.concatenate(wv_c)
    pid = np.concatenate(pid)
    rho = rmax[:, None] * v[None, :]
    zeta = 1.0 - rho * rot[:, None]
    # 1 - |zeta|^2 = rho (2 cos psi - rho), free of cancellation near xi
    one_minus = rho * (2.0 * cos[:, None] - rho)
    np.maximum(one_minus, 0.0, out=one_minus)
    jac = (rmax ** 2)[:, None] * v[None, :] / np.pi
    if alpha == 0:
        dens = jac
    else:
        dens = jac * (1.0 + alpha) * one_minus ** alpha
    z = (xi * zeta).ravel()
    vals = _evaluate(f, z, jobs)
    tail_shape = vals.shape[1:]
    vals = vals.reshape((psi.size, v.size) + tail_shape)
    expand = (slice(None), slice(None)) + (None,) * len(tail_shape)
    vals = vals * dens[expand]
    # sum over psi first with fine / coarse psi weights, then over v nodes per panel
    over_psi_f = _wsum(wpsi_f, vals)
    over_psi_c = _wsum(wpsi_c, vals)
    npan = len(v_pan)
    fine = np.zeros((npan,) + tail_shape, dtype=complex)
    coarse = np.zeros((npan,) + tail_shape, dtype=complex)
    for j in range(npan):
        sel = pid == j
        fine[j] = _wsum(wv_f[sel], over_psi_f[sel])
        coarse[j] = _wsum(wv_c[sel], over_psi_c[sel])
    return fine, coarse


def _growing(terms, tol, depth: int = 30) -> bool:
    """Level sums still non-decreasing after ``depth`` levels.

    Near-critical integrands have a transient over the first levels in which
    the sums grow before settling to a ratio just below 1, so growth is only
    taken as divergence deep into the level sequence.
    """
    if len(terms) < depth:
        return False
    mag = np.abs(np.asarray(terms))
    ratio = mag[-3:] / np.maximum(mag[-4:-1], 1e-300)
    return bool(np.any(np.all(ratio >= 1.0, axis=0) & (mag[-1] > tol)))


def _iterated_aitken(terms):
    """Aitken applied to the level sums, then again to the accelerated sums.

    The second pass removes the transient that decays like 2^-k on top of the
    geometric tail of a boundary singularity.
    """
    acc = aitken_tail_sum(terms)
    steps = np.diff(acc, axis=0, prepend=np.zeros((1,) + acc.shape[1:], dtype=complex))
    return aitken_tail_sum(steps)


def _accelerate(terms, ratio):
    """Accelerated level sums; a known leading ratio r is removed first.

    sum_k (T_k - r T_(k-1)) = (1 - r) sum_k T_k holds for any convergent
    series, so a wrong r costs speed but not correctness.
    """
    if ratio is None:
        return _iterated_aitken(terms)
    terms = np.asarray(terms, dtype=complex)
    shifted = np.concatenate([np.zeros_like(terms[:1]), terms[:-1]], axis=0)
    return _iterated_aitken(terms - ratio * shifted) / (1.0 - ratio)


def _stability(acc2):
    """Sum of the last two increments at each index (inf for the first two)."""
    mag = np.abs(np.diff(acc2, axis=0))
    if mag.ndim > 1:
        mag = mag.reshape(mag.shape[0], -1).max(axis=1)
    out = np.full(acc2.shape[0], np.inf)
    out[2:] = mag[1:] + mag[:-1]
    return out


def _disk_local(f, alpha, spec, sing, half_plane):
    gamma = spec.grading_exponent
    block = 4
    min_levels = 12
    n = spec.base_order
    psi_level = 4
    ratio = None
    if spec.blowup_order is not None and spec.blowup_order < 2.0 + alpha:
        ratio = 2.0 ** (-(2.0 + alpha - spec.blowup_order))
    best = None
    for refinement in range(3):
        psi, wpf, wpc = _psi_nodes(half_plane, psi_level)
        tops_f = 0
        tops_c = 0
        level_f = []
        level_c = []
        for xi in sing:
            top = _local_block(f, alpha, xi, half_plane, psi, wpf, wpc, [(0.5, 1.0)], n, gamma, True, spec.jobs)
            tops_f = tops_f + top[0][0]
            tops_c = tops_c + top[1][0]
        k = 1
        diverging = False
        while k <= spec.max_levels:
            pan = _v_panels(k, min(k + block, spec.max_levels + 1))
            bf = 0
            bc = 0
            for xi in sing:
                pf, pc = _local_block(f, alpha, xi, half_plane, psi, wpf, wpc, pan, n, gamma, False, spec.jobs)
                bf = bf + pf
                bc = bc + pc
            level_f.extend(list(bf))
            level_c.extend(list(bc))
            k += len(pan)
            if k <= min_levels:
                continue
            terms = np.array(level_f)
            acc2 = _accelerate(terms, ratio)
            tol = spec.tolerance(tops_f + acc2[-1])
            if _growing(terms, tol):
                diverging = True
                break
            if _stability(acc2)[-1] <= 0.5 * tol:
                break
        terms_f = np.array(level_f)
        acc_f = _accelerate(terms_f, ratio)
        acc_c = _accelerate(np.array(level_c), ratio)
        stab = _stability(acc_f)
        # deep levels carry rounding noise from z near xi; use the most stable index
        stab[: min(min_levels, len(stab) - 1)] = np.inf
        j = int(np.argmin(stab)) if np.isfinite(stab).any() else len(stab) - 1
        value = tops_f + acc_f[j]
        coarse_value = tops_c + acc_c[j]
        err = float(np.max(np.abs(value - coarse_value))) + float(stab[j] if np.isfinite(stab[j]) else np.max(np.abs(value)))
        if diverging:
            err = math.inf
        cells = len(sing) * (len(level_f) + 1) * psi.size
        result = IntegrationResult(value, err, cells, (not diverging) and err <= spec.tolerance(value))
        if best is None or result.error_estimate < best.error_estimate:
            best = result
        if result.converged or diverging:
            return result
        n *= 2
        psi_level += 1
    return best
