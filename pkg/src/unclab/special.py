"""Special functions used by the closed-form evaluators.

Real dilogarithm on [-1, 0], Riemann zeta for real s > 1, and a guarded
ln(1+x).  All routines are pure and carry explicit truncation-error
estimates so callers can check their own budgets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidParameter

_EPS = 2.220446049250313e-16

# Bernoulli numbers B_2, B_4, B_6, B_8, B_10 for the Euler-Maclaurin tail.
_BERNOULLI = (1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0)

# zeta: direct terms before the Euler-Maclaurin correction kicks in.
_ZETA_N0 = 20
# zeta: number of Euler-Maclaurin correction terms.
_ZETA_EM_TERMS = 4

# dilog: switch to the Landen reflection beyond this |z|.
_DILOG_REFLECT = 0.5


@dataclass(frozen=True)
class EvalResult:
    """Value of a special function plus an upper bound on truncation error."""

    value: float
    est_error: float
    terms_used: int


def _li2_series(x: float) -> tuple[float, float, int]:
    """Li2(x) by direct power series, |x| <= ~0.6.

    Returns (value, remainder_bound, terms).  The remainder bound is the
    geometric majorant of the dropped terms; for x < 0 the alternating
    bound |t_{K+1}| would be tighter but the geometric one is still valid.
    """
    if x == 0.0:
        return 0.0, 0.0, 0
    terms = []
    p = x
    k = 1
    while True:
        t = p / (k * k)
        terms.append(t)
        if abs(t) < 1e-18 * (1.0 - abs(x)):
            break
        p *= x
        k += 1
        if k > 200:  # unreachable for |x| <= 0.6
            break
    remainder = abs(terms[-1]) * abs(x) / (1.0 - abs(x))
    return math.fsum(terms), remainder, k


def dilog(z: float) -> EvalResult:
    """Real dilogarithm Li2(z) = sum_{k>=1} z^k / k^2 for z in [-1, 0].

    Uses the direct series for |z| <= 0.5 and the Landen reflection
    Li2(z) = -Li2(z/(z-1)) - ln^2(1-z)/2 otherwise, which maps the
    argument into (0, 1/2] where the series converges in < 60 terms.
    """
    if not (-1.0 <= z <= 0.0) or math.isnan(z):
        raise InvalidParameter(f"dilog requires z in [-1, 0], got {z!r}")
    if abs(z) <= _DILOG_REFLECT:
        value, rem, terms = _li2_series(z)
        err = rem + 4.0 * _EPS * abs(value)
        return EvalResult(value, max(err, _EPS), terms)
    w = z / (z - 1.0)  # in (0, 1/2] for z in [-1, -0.5)
    inner, rem, terms = _li2_series(w)
    log_term = 0.5 * math.log1p(-z) ** 2
    value = -inner - log_term
    err = rem + 4.0 * _EPS * (abs(inner) + log_term)
    return EvalResult(value, max(err, _EPS), terms)


def zeta(s: float) -> EvalResult:
    """Riemann zeta for real s > 1 via direct sum plus Euler-Maclaurin tail.

    Direct sum to n0 = 20 and four Bernoulli correction terms; the error
    estimate is the magnitude of the first omitted correction, which is a
    true bound because x^-s is completely monotone.
    """
    if math.isnan(s) or s <= 1.0:
        raise InvalidParameter(
            f"zeta requires s > 1 (s <= 1 is the divergent regime), got {s!r}"
        )
    n0 = _ZETA_N0
    direct = math.fsum(n ** (-s) for n in range(1, n0 + 1))
    boundary = float(n0 + 1)
    # integral term + half-weight at the boundary
    tail = boundary ** (1.0 - s) / (s - 1.0) + 0.5 * boundary ** (-s)
    corrections = []
    rising = s  # s (s+1) ... accumulated rising factorial
    power = boundary ** (-s - 1.0)
    fact = 2.0
    for j, b2j in enumerate(_BERNOULLI):
        term = b2j / fact * rising * power
        if j < _ZETA_EM_TERMS:
            corrections.append(term)
        else:
            err_term = abs(term)
            break
        rising *= (s + 2 * j + 1) * (s + 2 * j + 2)
        power /= boundary * boundary
        fact *= (2 * j + 3) * (2 * j + 4)
    value = direct + tail + math.fsum(corrections)
    err = err_term + 4.0 * _EPS * abs(value)
    return EvalResult(value, err, n0 + _ZETA_EM_TERMS)


def ln1p(x: float) -> float:
    """ln(1 + x), accurate for tiny |x|; domain x > -1.

    Backed by math.log1p, which is correctly rounded on this platform;
    the wrapper adds the domain check so callers get the library's error
    type in the divergent regime.
    """
    if math.isnan(x) or x <= -1.0:
        raise InvalidParameter(f"ln1p requires x > -1, got {x!r}")
    return math.log1p(x)
