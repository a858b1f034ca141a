"""One-parameter Fourier-coefficient families and their JSON interface.

A family is a rule (n, alpha) -> complex amplitude, defined for every
integer n and every alpha > 0, plus symmetry metadata.  The two built-in
families are the exponential decay e^{-alpha |n|} and the polynomial
decay |n|^{-alpha} with the n = 0 amplitude removed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping

import numpy as np

from .errors import InvalidParameter

# Matching tolerance for alpha keys of tabulated families.
_TABLE_ALPHA_TOL = 1e-12


@dataclass(frozen=True)
class CoefficientFamily:
    """Rule (n, alpha) -> complex amplitude plus symmetry metadata.

    ``rule`` must accept an integer ndarray and a positive float and return
    a complex ndarray of the same shape.  ``is_symmetric`` asserts
    |C_n| = |C_{-n}|; ``is_real`` asserts exactly zero imaginary parts.
    ``support_hint``, when set, promises C_n = 0 for |n| > support_hint so
    spectrum construction never truncates inside the support.
    """

    name: str
    rule: Callable[[np.ndarray, float], np.ndarray] = field(repr=False)
    is_real: bool = True
    is_symmetric: bool = True
    support_hint: int | None = None

    def coefficients(self, n, alpha: float) -> np.ndarray:
        """Evaluate the rule on an array of integer indices."""
        if not (alpha > 0.0):
            raise InvalidParameter(f"alpha must be positive, got {alpha!r}")
        n_arr = np.atleast_1d(np.asarray(n, dtype=np.int64))
        out = np.asarray(self.rule(n_arr, float(alpha)), dtype=np.complex128)
        if out.shape != n_arr.shape:
            raise InvalidParameter(
                f"family {self.name!r}: rule returned shape {out.shape}, "
                f"expected {n_arr.shape}"
            )
        if not np.all(np.isfinite(out)):
            raise InvalidParameter(
                f"family {self.name!r}: non-finite amplitude at alpha={alpha}"
            )
        return out

    def coefficient(self, n: int, alpha: float) -> complex:
        """Single-index convenience wrapper around ``coefficients``."""
        return complex(self.coefficients([n], alpha)[0])


def exponential_family() -> CoefficientFamily:
    """C_n(alpha) = e^{-alpha |n|}: dominant index 0, delta-like as alpha->0."""

    def rule(n: np.ndarray, alpha: float) -> np.ndarray:
        return np.exp(-alpha * np.abs(n)).astype(np.complex128)

    return CoefficientFamily(name="exp", rule=rule)


def polynomial_family() -> CoefficientFamily:
    """C_n(alpha) = |n|^{-alpha} for n != 0, C_0 = 0: tied indices +-1."""

    def rule(n: np.ndarray, alpha: float) -> np.ndarray:
        absn = np.abs(n).astype(np.float64)
        with np.errstate(divide="ignore"):
            vals = np.where(absn == 0.0, 0.0, absn ** (-alpha))
        return vals.astype(np.complex128)

    return CoefficientFamily(name="poly", rule=rule)


def single_mode_family(m: int = 0) -> CoefficientFamily:
    """C_m = 1 and all other amplitudes zero: an L_z eigenstate."""

    def rule(n: np.ndarray, alpha: float) -> np.ndarray:
        return (n == m).astype(np.complex128)

    return CoefficientFamily(
        name=f"mode{m}", rule=rule, is_symmetric=(m == 0), support_hint=abs(m)
    )


def table_family(
    name: str,
    coeffs: Mapping[int, complex],
    *,
    is_real: bool | None = None,
    is_symmetric: bool | None = None,
) -> CoefficientFamily:
    """Family with fixed (alpha-independent) amplitudes from a dict."""
    fixed = {int(k): complex(v) for k, v in coeffs.items()}
    if is_real is None:
        is_real = all(v.imag == 0.0 for v in fixed.values())
    if is_symmetric is None:
        is_symmetric = all(
            math.isclose(abs(v), abs(fixed.get(-k, 0.0)), rel_tol=0.0, abs_tol=0.0)
            for k, v in fixed.items()
        )

    def rule(n: np.ndarray, alpha: float) -> np.ndarray:
        out = np.zeros(n.shape, dtype=np.complex128)
        for k, v in fixed.items():
            out[n == k] = v
        return out

    support = max((abs(k) for k in fixed), default=0)
    return CoefficientFamily(
        name=name,
        rule=rule,
        is_real=is_real,
        is_symmetric=is_symmetric,
        support_hint=support,
    )


def two_mode_family(amplitude: float = 0.5) -> CoefficientFamily:
    """C_{+-1} = amplitude, everything else zero."""
    return table_family("two_mode", {1: amplitude, -1: amplitude})


# --------------------------------------------------------------------------
# JSON interface.  Schema (documented in the README):
#
# {
#   "name":      str,
#   "symmetric": bool,
#   "real":      bool,
#   "entries":   [{"n": int, "expr": "exp" | "poly" | "table",
#                  "scale": float (optional, default 1.0)}, ...],
#   "table":     {"<alpha>": [[n, re, im], ...], ...}   (iff any "table" entry)
# }
#
# Amplitudes at indices without an entry are zero.  "exp" gives
# scale * e^{-alpha |n|}, "poly" gives scale * |n|^{-alpha} (n != 0 only),
# "table" looks up [n, re, im] rows under the alpha key (exact match
# within 1e-12).
# --------------------------------------------------------------------------

_VALID_EXPRS = ("exp", "poly", "table")


def _parse_table(raw: Mapping) -> dict[float, dict[int, complex]]:
    table: dict[float, dict[int, complex]] = {}
    for key, rows in raw.items():
        try:
            a = float(key)
        except (TypeError, ValueError):
            raise InvalidParameter(f"table key {key!r} is not a number")
        if not a > 0.0:
            raise InvalidParameter(f"table alpha {key!r} must be positive")
        entry: dict[int, complex] = {}
        for row in rows:
            if len(row) != 3:
                raise InvalidParameter(f"table row {row!r} must be [n, re, im]")
            n, re, im = row
            entry[int(n)] = complex(float(re), float(im))
        table[a] = entry
    return table


def _table_lookup(
    table: dict[float, dict[int, complex]], alpha: float
) -> dict[int, complex]:
    for a, entry in table.items():
        if abs(a - alpha) <= _TABLE_ALPHA_TOL * max(1.0, abs(a)):
            return entry
    raise InvalidParameter(
        f"alpha={alpha} is not tabulated (known: {sorted(table)})"
    )


def family_from_dict(spec: Mapping) -> CoefficientFamily:
    """Build a CoefficientFamily from a parsed JSON document."""
    try:
        name = str(spec["name"])
        symmetric = bool(spec["symmetric"])
        real = bool(spec["real"])
        entries = list(spec["entries"])
    except KeyError as exc:
        raise InvalidParameter(f"family spec is missing key {exc}") from exc
    if name in ("exp", "poly"):
        # closed-form fast paths dispatch on these names
        raise InvalidParameter(f"family name {name!r} is reserved for a built-in")
    if not entries:
        raise InvalidParameter("family spec needs at least one entry")

    parsed = []
    needs_table = False
    seen: set[int] = set()
    for e in entries:
        try:
            n = int(e["n"])
            expr = str(e["expr"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidParameter(f"bad entry {e!r}") from exc
        if expr not in _VALID_EXPRS:
            raise InvalidParameter(
                f"entry n={n}: expr must be one of {_VALID_EXPRS}, got {expr!r}"
            )
        if expr == "poly" and n == 0:
            raise InvalidParameter("poly entries are undefined at n = 0")
        if n in seen:
            raise InvalidParameter(f"duplicate entry for n = {n}")
        seen.add(n)
        scale = float(e.get("scale", 1.0))
        needs_table |= expr == "table"
        parsed.append((n, expr, scale))

    table = _parse_table(spec.get("table") or {}) if needs_table else {}
    if needs_table and not table:
        raise InvalidParameter("entries reference a table but none was given")

    def rule(narr: np.ndarray, alpha: float) -> np.ndarray:
        out = np.zeros(narr.shape, dtype=np.complex128)
        tab = _table_lookup(table, alpha) if needs_table else {}
        for n, expr, scale in parsed:
            mask = narr == n
            if not mask.any():
                continue
            if expr == "exp":
                out[mask] = scale * math.exp(-alpha * abs(n))
            elif expr == "poly":
                out[mask] = scale * abs(n) ** (-alpha)
            else:
                out[mask] = scale * tab.get(n, 0.0)
        return out

    if real:  # fail fast on a table that contradicts the declared metadata
        for a in table:
            bad = [n for n, v in table[a].items() if v.imag != 0.0]
            if bad:
                raise InvalidParameter(
                    f"family declared real but table at alpha={a} has "
                    f"imaginary parts at n={bad}"
                )
    return CoefficientFamily(
        name=name,
        rule=rule,
        is_real=real,
        is_symmetric=symmetric,
        support_hint=max(abs(n) for n, _, _ in parsed),
    )


def load_family(path: str | Path) -> CoefficientFamily:
    """Load a custom family from a JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            spec = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidParameter(f"{path}: not valid JSON ({exc})") from exc
    return family_from_dict(spec)
