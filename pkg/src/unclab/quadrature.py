"""Independent verification path: direct quadrature of the explicit state.

Every moment the series engine produces is recomputed here as an integral
over phi in [-pi, pi] of the pointwise-evaluated state, never reusing the
coefficient-space formulas.  The integrator is an adaptive Simpson rule
with interval bisection and an absolute error budget that is split in
half at every subdivision; integrands are smooth trigonometric
polynomials, so no special endpoint handling is needed beyond including
the endpoints themselves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DivergentMoment, InvalidParameter, ToleranceNotMet
from .moments import lz_moments, phi_moments, trig_report
from .spectrum import TruncatedSpectrum

DEFAULT_ABS_TOL = 1e-10
DEFAULT_MAX_EVALS = 2_000_000

# Never ask the accumulated rounding noise to beat this relative level.
_REL_FLOOR = 2e-13
# Intervals narrower than this are accepted as-is (rounding regime).
_MIN_WIDTH = 1e-12

_TRIG_WEIGHTS = ("sin", "cos", "sin2", "cos2")


@dataclass(frozen=True)
class QuadratureResult:
    """Integral value, accumulated error estimate, and evaluation count."""

    value: float
    est_error: float
    evaluations: int


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    abs_tol: float = DEFAULT_ABS_TOL,
    max_evals: int = DEFAULT_MAX_EVALS,
) -> QuadratureResult:
    """Integrate f over [a, b] with adaptive Simpson bisection.

    The error budget is max(abs_tol, rel_floor * |coarse estimate|), split
    between halves at each bisection; each accepted interval contributes
    its Richardson correction and |delta|/15 error estimate.  Raises
    ToleranceNotMet at the evaluation cap.
    """
    if not (b > a):
        raise InvalidParameter(f"need b > a, got [{a}, {b}]")
    if abs_tol <= 0.0:
        raise InvalidParameter(f"abs_tol must be positive, got {abs_tol!r}")

    n_root = 8  # root intervals; helps oscillatory integrands start sane
    xs = np.linspace(a, b, 2 * n_root + 1)
    fs = [f(float(x)) for x in xs]
    evals = len(fs)

    coarse = 0.0
    for i in range(n_root):
        h = xs[2 * i + 2] - xs[2 * i]
        coarse += h / 6.0 * (fs[2 * i] + 4.0 * fs[2 * i + 1] + fs[2 * i + 2])
    budget = max(abs_tol, _REL_FLOOR * abs(coarse))

    pieces: list[float] = []
    errors: list[float] = []
    # stack entries: (a, b, fa, fm, fb, simpson(a,b), local budget)
    stack = []
    for i in range(n_root):
        x0, x1, x2 = xs[2 * i], xs[2 * i + 1], xs[2 * i + 2]
        h = x2 - x0
        whole = h / 6.0 * (fs[2 * i] + 4.0 * fs[2 * i + 1] + fs[2 * i + 2])
        stack.append((x0, x2, fs[2 * i], fs[2 * i + 1], fs[2 * i + 2], whole, budget / n_root))

    while stack:
        x0, x2, f0, f1, f2, whole, tol = stack.pop()
        if evals + 2 > max_evals:
            raise ToleranceNotMet(
                f"adaptive Simpson hit the evaluation cap ({max_evals}) with "
                f"{len(stack) + 1} intervals unresolved"
            )
        xm = 0.5 * (x0 + x2)
        xl = 0.5 * (x0 + xm)
        xr = 0.5 * (xm + x2)
        fl = f(xl)
        fr = f(xr)
        evals += 2
        left = (xm - x0) / 6.0 * (f0 + 4.0 * fl + f1)
        right = (x2 - xm) / 6.0 * (f1 + 4.0 * fr + f2)
        delta = left + right - whole
        if abs(delta) <= 15.0 * tol or (x2 - x0) <= _MIN_WIDTH:
            pieces.append(left + right + delta / 15.0)
            errors.append(abs(delta) / 15.0)
        else:
            stack.append((x0, xm, f0, fl, f1, left, tol / 2.0))
            stack.append((xm, x2, f1, fr, f2, right, tol / 2.0))

    value = math.fsum(pieces)
    est = math.fsum(errors) + 4.0 * np.finfo(float).eps * math.fsum(map(abs, pieces))
    return QuadratureResult(value=value, est_error=est, evaluations=evals)


# --------------------------------------------------------------------------
# pointwise state evaluation (mirrors evaluate_state, vector-ready)
# --------------------------------------------------------------------------

def _series_evaluator(s: TruncatedSpectrum, derivative: bool = False):
    n = s.n_values()
    coeffs = s.coeffs * (1j * n) if derivative else s.coeffs
    amp = s.amplitude

    def f(phi: float) -> complex:
        return amp * complex(np.dot(coeffs, np.exp(1j * phi * n)))

    return f


def quad_phi_moment(
    s: TruncatedSpectrum,
    power: int,
    abs_tol: float = DEFAULT_ABS_TOL,
    max_evals: int = DEFAULT_MAX_EVALS,
) -> QuadratureResult:
    """<phi^power> by quadrature of phi^power |f(phi)|^2, power in {1, 2}."""
    if power not in (1, 2):
        raise InvalidParameter(f"power must be 1 or 2, got {power!r}")
    f = _series_evaluator(s)

    def integrand(phi: float) -> float:
        return phi ** power * abs(f(phi)) ** 2

    return adaptive_simpson(integrand, -math.pi, math.pi, abs_tol, max_evals)


def quad_lz_moment(
    s: TruncatedSpectrum,
    power: int,
    abs_tol: float = DEFAULT_ABS_TOL,
    max_evals: int = DEFAULT_MAX_EVALS,
) -> QuadratureResult:
    """<L_z^power> by quadrature, power in {1, 2} (hbar = 1).

    power = 2 integrates |f'|^2 with f' the term-wise differentiated
    series; power = 1 integrates Im(conj(f) f'), i.e. <L_z> = <f, -i f'>.
    """
    if power not in (1, 2):
        raise InvalidParameter(f"power must be 1 or 2, got {power!r}")
    fprime = _series_evaluator(s, derivative=True)
    if power == 2:

        def integrand(phi: float) -> float:
            return abs(fprime(phi)) ** 2

    else:
        f = _series_evaluator(s)

        def integrand(phi: float) -> float:
            return (f(phi).conjugate() * fprime(phi)).imag

    return adaptive_simpson(integrand, -math.pi, math.pi, abs_tol, max_evals)


def quad_trig_moment(
    s: TruncatedSpectrum,
    which: str,
    abs_tol: float = DEFAULT_ABS_TOL,
    max_evals: int = DEFAULT_MAX_EVALS,
) -> QuadratureResult:
    """<w(phi)> for w in {sin, cos, sin2, cos2} against |f|^2."""
    if which not in _TRIG_WEIGHTS:
        raise InvalidParameter(f"which must be one of {_TRIG_WEIGHTS}, got {which!r}")
    f = _series_evaluator(s)
    weight = {
        "sin": math.sin,
        "cos": math.cos,
        "sin2": lambda p: math.sin(p) ** 2,
        "cos2": lambda p: math.cos(p) ** 2,
    }[which]

    def integrand(phi: float) -> float:
        return weight(phi) * abs(f(phi)) ** 2

    return adaptive_simpson(integrand, -math.pi, math.pi, abs_tol, max_evals)


def quad_norm(
    s: TruncatedSpectrum,
    abs_tol: float = DEFAULT_ABS_TOL,
    max_evals: int = DEFAULT_MAX_EVALS,
) -> QuadratureResult:
    """Integral of |f|^2 over one period; must be 1 for any valid spectrum."""
    f = _series_evaluator(s)

    def integrand(phi: float) -> float:
        return abs(f(phi)) ** 2

    return adaptive_simpson(integrand, -math.pi, math.pi, abs_tol, max_evals)


# --------------------------------------------------------------------------
# series vs quadrature comparison
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ComparisonRow:
    """One moment compared across the two routes."""

    name: str
    series: float | None
    quadrature: float | None
    diff: float | None
    passed: bool | None  # None = not applicable
    note: str = ""


@dataclass(frozen=True)
class CompareReport:
    """Per-moment series/quadrature differences for one state."""

    rows: tuple[ComparisonRow, ...]
    tol: float

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.rows if r.passed is not None)

    def as_dict(self) -> dict:
        return {
            "tol": self.tol,
            "all_passed": self.all_passed,
            "rows": [
                {
                    "name": r.name,
                    "series": r.series,
                    "quadrature": r.quadrature,
                    "diff": r.diff,
                    "passed": r.passed,
                    "note": r.note,
                }
                for r in self.rows
            ],
        }


def compare_report(
    s: TruncatedSpectrum,
    tol: float = 1e-8,
    abs_tol: float = DEFAULT_ABS_TOL,
    max_evals: int = DEFAULT_MAX_EVALS,
) -> CompareReport:
    """Run every series moment against its quadrature twin.

    Failures are data (rows with passed = False), not exceptions; moments
    that do not exist on the series side (divergent sigma_Lz) come back as
    not-applicable rows.
    """
    if tol <= 0.0:
        raise InvalidParameter(f"tol must be positive, got {tol!r}")
    rows: list[ComparisonRow] = []

    def add(name: str, series: float, quad: float, note: str = "") -> None:
        diff = abs(series - quad)
        rows.append(ComparisonRow(name, series, quad, diff, diff <= tol, note))

    qn = quad_norm(s, abs_tol, max_evals)
    add("norm", 1.0, qn.value)

    mean_phi, second_phi, var_phi = phi_moments(s)
    q1 = quad_phi_moment(s, 1, abs_tol, max_evals)
    q2 = quad_phi_moment(s, 2, abs_tol, max_evals)
    add("mean_phi", mean_phi, q1.value)
    add("second_phi", second_phi, q2.value)
    add("var_phi", var_phi, q2.value - q1.value ** 2)

    try:
        mean_lz, second_lz, var_lz = lz_moments(s)
    except DivergentMoment:
        note = "series-side sigma_Lz^2 divergent; not applicable"
        for name in ("mean_lz", "second_lz", "var_lz"):
            rows.append(ComparisonRow(name, None, None, None, None, note))
    else:
        ql1 = quad_lz_moment(s, 1, abs_tol, max_evals)
        ql2 = quad_lz_moment(s, 2, abs_tol, max_evals)
        add("mean_lz", mean_lz, ql1.value)
        add("second_lz", second_lz, ql2.value)
        add("var_lz", var_lz, ql2.value - ql1.value ** 2)

    tr = trig_report(s)
    qs = quad_trig_moment(s, "sin", abs_tol, max_evals)
    qc = quad_trig_moment(s, "cos", abs_tol, max_evals)
    qs2 = quad_trig_moment(s, "sin2", abs_tol, max_evals)
    qc2 = quad_trig_moment(s, "cos2", abs_tol, max_evals)
    add("mean_sin", tr.mean_sin, qs.value)
    add("mean_cos", tr.mean_cos, qc.value)
    add("sin_sq", tr.var_sin + tr.mean_sin ** 2, qs2.value)
    add("cos_sq", tr.var_cos + tr.mean_cos ** 2, qc2.value)
    add("var_sin", tr.var_sin, qs2.value - qs.value ** 2)
    add("var_cos", tr.var_cos, qc2.value - qc.value ** 2)

    return CompareReport(rows=tuple(rows), tol=tol)
