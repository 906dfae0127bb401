"""Gamma/Beta functions and series values for power-kernel norms."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SpaceParams",
    "log_gamma",
    "gamma",
    "beta",
    "disk_moment",
    "power_kernel_norm_oracle",
    "power_kernel_norm_closed_form",
]


@dataclass(frozen=True)
class SpaceParams:
    """Exponent ``p`` and weight ``alpha`` of the space A^p_alpha."""

    p: float
    alpha: float = 0.0

    def __post_init__(self):
        if not self.p > 1:
            raise ValueError(f"p must exceed 1, got {self.p}")
        if not self.alpha >= 0:
            raise ValueError(f"alpha must be nonnegative, got {self.alpha}")

    @property
    def critical_exponent(self) -> float:
        """Blow-up order (2 + alpha) / p of the kernels (xi - z)^-c."""
        return (2.0 + self.alpha) / self.p

    def to_dict(self) -> dict:
        return {"p": self.p, "alpha": self.alpha, "critical_exponent": self.critical_exponent}


# Lanczos approximation, g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _stirling(x: float) -> float:
    inv = 1.0 / x
    inv2 = inv * inv
    series = inv * (1.0 / 12 - inv2 * (1.0 / 360 - inv2 * (1.0 / 1260 - inv2 * (1.0 / 1680 - inv2 / 1188))))
    return (x - 0.5) * math.log(x) - x + _HALF_LOG_2PI + series


def log_gamma(x: float) -> float:
    """Natural logarithm of Gamma(x) for x > 0."""
    x = float(x)
    if not x > 0 or not math.isfinite(x):
        raise ValueError(f"log_gamma needs a finite positive argument, got {x}")
    if x >= 12.0:
        return _stirling(x)
    if x < 0.5:
        # reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x)
        return math.log(math.pi / math.sin(math.pi * x)) - log_gamma(1.0 - x)
    # shift upward so the asymptotic series is accurate
    shift = 0.0
    while x < 12.0:
        shift += math.log(x)
        x += 1.0
    return _stirling(x) - shift


def _lanczos_log_gamma(x: float) -> float:
    # kept as an independent cross-check of log_gamma on (0.5, 12)
    x -= 1.0
    acc = _LANCZOS[0]
    for i in range(1, 9):
        acc += _LANCZOS[i] / (x + i)
    t = x + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (x + 0.5) * math.log(t) - t + math.log(acc)


def gamma(x: float) -> float:
    """Gamma(x) for x > 0."""
    return math.exp(log_gamma(x))


def beta(a: float, b: float) -> float:
    """Euler Beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b)."""
    if not (a > 0 and b > 0):
        raise ValueError(f"beta needs positive arguments, got ({a}, {b})")
    return math.exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b))


def disk_moment(k: int, alpha: float) -> float:
    """Integral of |z|^(2k) against dA_alpha, i.e. (1 + alpha) B(k + 1, alpha + 1)."""
    return (1.0 + alpha) * beta(k + 1.0, alpha + 1.0)


def _log_gamma_ratio(log_x: float, a: float, b: float) -> float:
    """log(Gamma(x + a) / Gamma(x + b)) - (a - b) log x, with x = exp(log_x)."""
    if log_x < math.log(1e4):
        x = math.exp(log_x)
        return log_gamma(x + a) - log_gamma(x + b) - (a - b) * log_x
    inv = math.exp(-log_x)

    def b2(y):
        return y * y - y + 1.0 / 6.0

    def b3(y):
        return y ** 3 - 1.5 * y * y + 0.5 * y

    def b4(y):
        return y ** 4 - 2.0 * y ** 3 + y * y - 1.0 / 30.0

    return (
        (b2(a) - b2(b)) * inv / 2.0
        - (b3(a) - b3(b)) * inv ** 2 / 6.0
        + (b4(a) - b4(b)) * inv ** 3 / 12.0
    )


def power_kernel_norm_oracle(c: float, space: SpaceParams, terms: int = 4096) -> float:
    """Series value of ||(xi - z)^-c||^p in A^p_alpha.

    Expanding ``(1 - z)^(-s/2)`` with ``s = c p`` and integrating against the
    disk moments gives ``sum_k [(s/2)_k / k!]^2 Gamma(2+alpha) k! / Gamma(k+2+alpha)``.
    The first ``terms`` terms are summed directly; the remainder, whose terms
    decay like ``k^(s - 3 - alpha)``, is added by Euler-Maclaurin with the
    integral part evaluated on dyadic Gauss panels.
    """
    c_star = space.critical_exponent
    if not 0 <= c < c_star:
        raise ValueError(f"need 0 <= c < (2+alpha)/p = {c_star}, got c = {c}")
    if c == 0:
        return 1.0
    a = 0.5 * c * space.p
    cc = 2.0 + space.alpha
    eps = cc - 2.0 * a

    term = 1.0
    total = 1.0
    small = 0
    for k in range(terms):
        term *= (k + a) ** 2 / ((k + 1.0) * (k + cc))
        total += term
        if term < 1e-17 * total:
            small += 1
            if small >= 3:
                return total
        else:
            small = 0
    K = float(terms + 1)
    log_const = log_gamma(cc) - 2.0 * log_gamma(a)

    def scaled_term(log_x):
        # t(x) * x^(1 + eps); finite as x -> infinity
        return math.exp(log_const + _log_gamma_ratio(log_x, a, 1.0) + _log_gamma_ratio(log_x, a, cc))

    # integral over [K, inf) with x = K u^(-1/eps): K^-eps / eps * int_0^1 scaled_term du
    xs, ws = np.polynomial.legendre.leggauss(20)
    integral = 0.0
    lo_exp = 0
    while lo_exp < 80:
        lo, hi = 2.0 ** (-lo_exp - 1), 2.0 ** (-lo_exp)
        if lo_exp == 0:
            lo = 0.5
        h = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        part = 0.0
        for x, w in zip(xs, ws):
            u = mid + h * x
            part += w * scaled_term(math.log(K) - math.log(u) / eps)
        integral += h * part
        lo_exp += 1
    tail_integral = integral * math.exp(-eps * math.log(K)) / eps
    t_K = scaled_term(math.log(K)) * K ** (-1.0 - eps)
    # Euler-Maclaurin: sum_{k>=K} t(k) = int_K^inf t + t(K)/2 - t'(K)/12 + ...
    deriv = -(1.0 + eps) / K * t_K
    return total + tail_integral + 0.5 * t_K - deriv / 12.0


def power_kernel_norm_closed_form(c: float, space: SpaceParams) -> float:
    """Gauss summation of the same series: Gamma(2+a) Gamma(2+a-s) / Gamma(2+a-s/2)^2."""
    c_star = space.critical_exponent
    if not 0 <= c < c_star:
        raise ValueError(f"need 0 <= c < (2+alpha)/p = {c_star}, got c = {c}")
    s = c * space.p
    cc = 2.0 + space.alpha
    return math.exp(log_gamma(cc) + log_gamma(cc - s) - 2.0 * log_gamma(cc - 0.5 * s))
