"""High-precision re-evaluation of the probability formulas.

These are straight transcriptions of the same determinant expressions the
double-precision engine evaluates, but carried out in mpmath arbitrary
precision.  mpmath's unbounded exponent range makes log-space bookkeeping
unnecessary here, so each formula is a few lines of linear arithmetic; the
pair of independent code paths also cross-checks the log-space engine in
the test suite.

A fixed working precision is not enough by itself: the determinant rows
can span more orders of magnitude than the mantissa holds (mpmath's LU
then rounds them equal), so every evaluation is repeated at increasing
precision until two consecutive results agree to the requested number of
digits.  Spectra arrive as plain floats (already validated); only the
arithmetic is promoted.
"""

from __future__ import annotations

import mpmath

__all__ = [
    "cdf_max_row",
    "cdf_min_row",
    "cdf_max_col",
    "cdf_min_col",
    "cdf_max_doubly",
    "cdf_min_doubly",
    "prob_gap_row",
]

_MAX_DPS = 1600


def _self_validated(raw, dps: int) -> float:
    """Run ``raw`` at increasing precision until two results agree.

    ``raw(d)`` must return an mpf computed entirely at d significant
    digits.  Agreement to 10^-(dps-10) relative (or two exact zeros) is
    accepted; the final value is returned as a double.
    """
    tol = mpmath.mpf(10) ** (-(dps - 10))
    prev = None
    d = dps
    while d <= _MAX_DPS:
        val = raw(d)
        if prev is not None:
            if val == prev:
                return float(val)
            if val != 0 and abs(prev - val) <= tol * abs(val):
                return float(val)
        prev = val
        d = 2 * d + 20
    return float(prev)


def _gaps(vals):
    out = mpmath.mpf(1)
    for j in range(len(vals)):
        for k in range(j + 1, len(vals)):
            out *= vals[k] - vals[j]
    return out


def _lower_gamma(a, x):
    return mpmath.gammainc(a, 0, x)


def cdf_max_row(n, m, s, lam, dps=40):
    def raw(d):
        with mpmath.workdps(d):
            lm = mpmath.mpf(lam)
            sv = [mpmath.mpf(v) for v in s]
            A = mpmath.matrix(m, m)
            for j in range(m):
                x = lm * sv[j]
                for k in range(1, m + 1):
                    a = n - m + k
                    A[j, k - 1] = _lower_gamma(a, x) / x ** a
            pref = mpmath.mpf(1)
            for k in range(1, m + 1):
                pref /= mpmath.factorial(n - m + k - 1)
            for v in sv:
                pref *= (lm * v) ** n
            pref /= (-lm) ** (m * (m - 1) // 2) * _gaps(sv)
            return pref * mpmath.det(A)
    return _self_validated(raw, dps)


def cdf_min_row(n, m, s, lam, dps=40):
    def raw(d):
        with mpmath.workdps(d):
            lm = mpmath.mpf(lam)
            sv = [mpmath.mpf(v) for v in s]
            if n == m:
                return mpmath.exp(-lm * sum(sv))
            A = mpmath.matrix(m, m)
            for j in range(m):
                for k in range(1, m + 1):
                    a = n - m + k
                    total = mpmath.mpf(0)
                    for i in range(a):
                        total += (mpmath.binomial(a - 1, i) * lm ** (a - 1 - i)
                                  * mpmath.factorial(i) / sv[j] ** (i + 1))
                    A[j, k - 1] = total
            sign = mpmath.mpf(-1) ** (m * (m - 1) // 2)
            pref = sign * mpmath.exp(-lm * sum(sv))
            for v in sv:
                pref *= v ** n
            for k in range(1, m + 1):
                pref /= mpmath.factorial(n - m + k - 1)
            pref /= _gaps(sv)
            return pref * mpmath.det(A)
    return _self_validated(raw, dps)


def cdf_max_col(n, m, s, lam, dps=40):
    def raw(d):
        with mpmath.workdps(d):
            lm = mpmath.mpf(lam)
            sv = [mpmath.mpf(v) for v in s]
            A = mpmath.matrix(n, n)
            for j in range(n):
                for k in range(1, m + 1):
                    A[j, k - 1] = _lower_gamma(k, lm * sv[j]) / sv[j] ** k
                for i in range(1, n - m + 1):
                    A[j, m + i - 1] = sv[j] ** (i - 1)
            sign = mpmath.mpf(-1) ** (m * (m - 1) // 2)
            pref = sign * mpmath.factorial(m)
            for k in range(1, m + 1):
                pref /= mpmath.factorial(k)
            for v in sv:
                pref *= v ** m
            pref /= _gaps(sv)
            return pref * mpmath.det(A)
    return _self_validated(raw, dps)


def cdf_min_col(n, m, s, lam, dps=40):
    def raw(d):
        with mpmath.workdps(d):
            lm = mpmath.mpf(lam)
            sv = [mpmath.mpf(v) for v in s]
            A = mpmath.matrix(n, n)
            for j in range(n):
                for k in range(1, m + 1):
                    A[j, k - 1] = sv[j] ** mpmath.mpf(-k)
                for i in range(1, n - m + 1):
                    A[j, m + i - 1] = mpmath.exp(lm * sv[j]) * sv[j] ** (i - 1)
            sign = mpmath.mpf(-1) ** (m * (m - 1) // 2)
            pref = sign * mpmath.exp(-lm * sum(sv))
            for v in sv:
                pref *= v ** m
            pref /= _gaps(sv)
            return pref * mpmath.det(A)
    return _self_validated(raw, dps)


def cdf_max_doubly(n, m, r, s, lam, dps=40):
    def raw(d):
        with mpmath.workdps(d):
            lm = mpmath.mpf(lam)
            rv = [mpmath.mpf(v) for v in r]
            sv = [mpmath.mpf(v) for v in s]
            A = mpmath.matrix(n, n)
            for j in range(m):
                for l in range(n):
                    A[j, l] = mpmath.hyp1f1(1, n + 1, -lm * rv[j] * sv[l]) / n
            for i in range(1, n - m + 1):
                for l in range(n):
                    A[m + i - 1, l] = (lm * sv[l]) ** mpmath.mpf(-i)
            sign = mpmath.mpf(-1) ** (n * (n - 1) // 2)
            pref = sign
            for j in range(1, n):
                pref /= mpmath.mpf(j) ** j
            for p in range(1, n - m):
                pref *= mpmath.gamma(n) / mpmath.gamma(n - p)
            for v in rv:
                pref *= v ** n
            for v in sv:
                pref *= (lm * v) ** n
            pref /= lm ** (n * (n - 1) // 2) * _gaps(rv) * _gaps(sv)
            return pref * mpmath.det(A)
    return _self_validated(raw, dps)


def cdf_min_doubly(n, r, s, lam, dps=40):
    def raw(d):
        with mpmath.workdps(d):
            lm = mpmath.mpf(lam)
            rv = [mpmath.mpf(v) for v in r]
            sv = [mpmath.mpf(v) for v in s]
            A = mpmath.matrix(n, n)
            for j in range(n):
                for l in range(n):
                    A[j, l] = mpmath.exp(-lm * rv[j] * sv[l])
            pref = mpmath.mpf(1)
            for j in range(1, n):
                pref *= mpmath.factorial(j)
            pref /= (-lm) ** (n * (n - 1) // 2) * _gaps(rv) * _gaps(sv)
            return pref * mpmath.det(A)
    return _self_validated(raw, dps)


def prob_gap_row(n, m, s, a, b, dps=40):
    def raw(d):
        with mpmath.workdps(d):
            av = mpmath.mpf(a)
            bv = mpmath.mpf(b)
            sv = [mpmath.mpf(v) for v in s]
            A = mpmath.matrix(m, m)
            for j in range(m):
                for k in range(1, m + 1):
                    ak = n - m + k
                    A[j, k - 1] = (_lower_gamma(ak, sv[j] * bv)
                                   - _lower_gamma(ak, sv[j] * av)) / sv[j] ** ak
            sign = mpmath.mpf(-1) ** (m * (m - 1) // 2)
            pref = sign
            for v in sv:
                pref *= v ** n
            for k in range(1, m + 1):
                pref /= mpmath.factorial(n - m + k - 1)
            pref /= _gaps(sv)
            return pref * mpmath.det(A)
    return _self_validated(raw, dps)
