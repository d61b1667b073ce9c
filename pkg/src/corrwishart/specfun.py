"""Scalar special functions for the determinant-formula engine.

Every matrix entry of the eigenvalue-distribution formulas reduces to one
of three one-variable functions: the regularized lower incomplete gamma
function P(a, x) at integer order a, Kummer's confluent hypergeometric
function 1F1(a; b; x) at integer parameters, and Tricomi's function
U(1, b, z) at integer b.  Only those integer-parameter families are
supported here; general real parameters are out of scope.

All routines work in log space internally so that orders in the hundreds
survive double precision, and negative-argument 1F1 is always routed
through the Kummer transform so summed terms stay positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "SpecfunResult",
    "reg_lower_gamma",
    "kummer_1f1",
    "tricomi_u1",
    "log_gamma",
    "log_reg_lower_gamma",
    "log_kummer_series",
]

_EPS = 2.220446049250313e-16
_LOG_EPS = math.log(_EPS)
_MAX_ITER = 20000


@dataclass(frozen=True)
class SpecfunResult:
    """Value of a scalar special function plus an absolute error estimate."""

    value: float
    abs_error_estimate: float


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0."""
    if not math.isfinite(x) or x <= 0.0:
        raise ValueError(f"log_gamma requires finite x > 0, got {x!r}")
    return math.lgamma(x)


def _check_int(name: str, value, minimum: int) -> int:
    if not isinstance(value, (int,)) or isinstance(value, bool):
        if isinstance(value, float) and value.is_integer():
            value = int(value)
        else:
            raise ValueError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def _log_p_series(a: int, x: float) -> tuple[float, int]:
    # Lower series, DLMF 8.11.4.  Valid for 0 < x < a + 1 where the term
    # ratio x/(a+k) < 1, so the sum is bounded and never overflows.
    total = 1.0
    term = 1.0
    k = 0
    while k < _MAX_ITER:
        k += 1
        term *= x / (a + k)
        total += term
        if term <= _EPS * total:
            break
    log_p = a * math.log(x) - x - math.lgamma(a + 1) + math.log(total)
    return log_p, k


def _log_q_continued_fraction(a: int, x: float) -> tuple[float, int]:
    # Upper function Q(a,x) by the Legendre continued fraction (modified
    # Lentz).  Valid for x >= a + 1.
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    i = 0
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) <= _EPS:
            break
    log_q = a * math.log(x) - x - math.lgamma(a) + math.log(h)
    return log_q, i


def log_reg_lower_gamma(a: int, x: float) -> float:
    """Natural log of P(a, x), robust where P itself underflows.

    Used by the determinant entry builders, which need log(gamma(a, x))
    = lgamma(a) + log P(a, x) for x down to 1e-300 and a up to ~500.
    """
    a = _check_int("a", a, 1)
    if not math.isfinite(x) or x < 0.0:
        raise ValueError(f"x must be finite and >= 0, got {x!r}")
    if x == 0.0:
        return -math.inf
    if x < a + 1.0:
        return _log_p_series(a, x)[0]
    log_q, _ = _log_q_continued_fraction(a, x)
    # Here Q <= Q(a, a+1) < 1, so 1 - Q never cancels catastrophically.
    return math.log1p(-math.exp(log_q))


def reg_lower_gamma(a: int, x: float) -> SpecfunResult:
    """Regularized lower incomplete gamma function P(a, x), a integer >= 1.

    P(a, x) = gamma(a, x) / Gamma(a) is nondecreasing in x with
    P(a, 0) = 0 and limit 1.  Series expansion below x = a + 1, Legendre
    continued fraction for the upper function above it, both in log space.
    """
    a = _check_int("a", a, 1)
    if not math.isfinite(x) or x < 0.0:
        raise ValueError(f"x must be finite and >= 0, got {x!r}")
    if x == 0.0:
        return SpecfunResult(0.0, 0.0)
    if x < a + 1.0:
        log_p, iters = _log_p_series(a, x)
        value = math.exp(log_p)
        err = (10.0 + iters) * _EPS * value + 1e-300
    else:
        log_q, iters = _log_q_continued_fraction(a, x)
        q = math.exp(log_q)
        value = -math.expm1(log_q)
        err = (10.0 + iters) * _EPS * q + 1e-300
    return SpecfunResult(value, err)


def log_kummer_series(a: int, b: int, x: float) -> float:
    """Natural log of 1F1(a; b; x) for x >= 0, summed entirely in log space.

    The series has positive terms for positive parameters, so this is the
    cancellation-free building block; negative arguments are handled by the
    caller through the Kummer transform.
    """
    if x < 0.0:
        raise ValueError("log_kummer_series requires x >= 0")
    if x == 0.0:
        return 0.0
    log_term = 0.0
    log_sum = 0.0
    k = 0
    while k < _MAX_ITER:
        ratio = (a + k) * x / ((b + k) * (k + 1.0))
        log_term += math.log(ratio)
        log_sum = _logaddexp(log_sum, log_term)
        k += 1
        if ratio < 1.0 and log_term - log_sum < _LOG_EPS:
            break
    return log_sum


def kummer_1f1(a: int, b: int, x: float) -> SpecfunResult:
    """Kummer's function 1F1(a; b; x) for integers b > a >= 1.

    Negative arguments always go through the Kummer transform
    1F1(a; b; x) = e^x 1F1(b-a; b; -x), so every summed term is positive
    and the alternating-series cancellation of the raw expansion is
    avoided.
    """
    a = _check_int("a", a, 1)
    b = _check_int("b", b, 1)
    if b <= a:
        raise ValueError(f"kummer_1f1 requires b > a, got a={a}, b={b}")
    if not math.isfinite(x):
        raise ValueError(f"x must be finite, got {x!r}")
    if x < 0.0:
        log_v = x + log_kummer_series(b - a, b, -x)
    else:
        log_v = log_kummer_series(a, b, x)
    value = math.exp(log_v) if log_v < 709.0 else math.inf
    err = 50.0 * _EPS * abs(value) + 1e-300
    return SpecfunResult(value, err)


def tricomi_u1(b: int, z: float) -> SpecfunResult:
    """Tricomi's function U(1, b, z) for integer b >= 2 and z > 0.

    U(1, b, z) = integral_0^inf e^{-z t} (1 + t)^{b-2} dt, which for
    integer b collapses to the finite sum over i of C(b-2, i) i! / z^{i+1}.
    Strictly positive and decreasing in z; singular as z -> 0.
    """
    b = _check_int("b", b, 2)
    if not math.isfinite(z) or z <= 0.0:
        raise ValueError(f"z must be finite and > 0, got {z!r}")
    log_z = math.log(z)
    n = b - 2
    log_terms = [
        _log_choose(n, i) + math.lgamma(i + 1) - (i + 1) * log_z
        for i in range(n + 1)
    ]
    log_v = _logsumexp(log_terms)
    value = math.exp(log_v) if log_v < 709.0 else math.inf
    err = (10.0 + n) * _EPS * abs(value) + 1e-300
    return SpecfunResult(value, err)


def _log_choose(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def _logaddexp(la: float, lb: float) -> float:
    if la == -math.inf:
        return lb
    if lb == -math.inf:
        return la
    if la < lb:
        la, lb = lb, la
    return la + math.log1p(math.exp(lb - la))


def _logsumexp(logs) -> float:
    m = max(logs)
    if m == -math.inf:
        return -math.inf
    return m + math.log(sum(math.exp(v - m) for v in logs))
