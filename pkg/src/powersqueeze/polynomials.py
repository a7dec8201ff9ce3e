"""Closed forms for the k <= 2 sectors: Pochhammer symbols, Hermite
polynomials, the b = 1/4 and 3/4 orthonormal polynomial family, and its
weight 2^(2b-1) |Gamma(b+ix)|^2 / (pi Gamma(2b)).

The degree-m family member P_m(x, b) is evaluated two ways:

  (i)   the terminating hypergeometric sum
        i^m sqrt((2b)_m / m!) 2F1(-m, b+ix; 2b; 2),
        carried out in exact rational complex arithmetic because the
        z = 2 argument cancels ~ 3^m before settling (double precision
        is out of digits near m = 20);
  (ii)  the orthonormal three-term recursion
        x P_m = c_{m+1} P_{m+1} + c_m P_{m-1},
        c_m = sqrt(m (m + 2b - 1)) / 2,

with (ii) the production route and (i) the oracle; for m <= 30 every call
cross-checks the two to 1e-8 and a disagreement is a hard error.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

import numpy as np

from .errors import NumericsError

_CROSS_CHECK_LIMIT = 30
_CROSS_CHECK_TOL = 1e-8


def pochhammer(a: complex, m: int) -> complex:
    """Rising factorial (a)_m = a (a+1) ... (a+m-1); (a)_0 = 1."""
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    result = complex(1.0)
    for j in range(m):
        result *= a + j
    return result


def hermite(n: int, x: float) -> float:
    """Physicists' Hermite polynomial H_n(x).

    Recursion H_{n+1} = 2x H_n - 2n H_{n-1} with power-of-two rescaling,
    so values stay exact relative to the plain recursion while n up to
    ~200 (and beyond, until the final value itself overflows) is safe.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n == 0:
        return 1.0
    h_prev, h = 1.0, 2.0 * x
    exp2 = 0
    for m in range(1, n):
        h_prev, h = h, 2.0 * x * h - 2.0 * m * h_prev
        if max(abs(h), abs(h_prev)) > 2.0**512:
            h = math.ldexp(h, -512)
            h_prev = math.ldexp(h_prev, -512)
            exp2 += 512
    return math.ldexp(h, exp2)


def _series_coefficient(b: float, m: int) -> float:
    """sqrt((2b)_m / m!) as a float, from the exact rational ratio."""
    q = Fraction(1)
    bb = Fraction(b)
    for j in range(m):
        q *= (2 * bb + j) / (j + 1)
    return math.sqrt(float(q))


def _pollaczek_series_exact(m: int, x: float, b: float) -> float:
    """Route (i): exact rational evaluation of the terminating sum.

    The inputs are binary floats, hence exact rationals, and the identity
    "i^m times the sum is real" holds over the rationals; the imaginary
    component must vanish identically and is asserted, not discarded.
    """
    xf, bf = Fraction(x), Fraction(b)
    sum_re, sum_im = Fraction(1), Fraction(0)
    term_re, term_im = Fraction(1), Fraction(0)
    for j in range(m):
        # term *= (-m + j)(b + ix + j) * 2 / ((2b + j)(j + 1))
        fac = Fraction(j - m)
        pr, pi = fac * (bf + j), fac * xf
        den = (2 * bf + j) * (j + 1)
        term_re, term_im = (
            (term_re * pr - term_im * pi) * 2 / den,
            (term_re * pi + term_im * pr) * 2 / den,
        )
        sum_re += term_re
        sum_im += term_im
    rot = m % 4  # multiply by i^m
    if rot == 0:
        re, im = sum_re, sum_im
    elif rot == 1:
        re, im = -sum_im, sum_re
    elif rot == 2:
        re, im = -sum_re, -sum_im
    else:
        re, im = sum_im, -sum_re
    if im != 0:
        raise NumericsError(
            f"polynomials.pollaczek: series imaginary part not identically zero "
            f"at m={m}, x={x!r}, b={b!r}"
        )
    return float(re) * _series_coefficient(b, m)


def _recursion_c(b: float, m: int) -> float:
    return math.sqrt(m * (m + 2.0 * b - 1.0)) / 2.0


def _pollaczek_recursion(m: int, x: float, b: float) -> float:
    if m == 0:
        return 1.0
    p_prev, p = 1.0, x / _recursion_c(b, 1)
    for j in range(1, m):
        p_prev, p = p, (x * p - _recursion_c(b, j) * p_prev) / _recursion_c(b, j + 1)
    return p


def pollaczek(m: int, x: float, b: float) -> float:
    """P_m(x, b), real for real x, degree m, positive leading coefficient.

    Production value comes from the recursion route; for m <= 30 the exact
    series is also evaluated and a relative disagreement above 1e-8 raises
    NumericsError (it would signal an implementation bug, not bad data).
    """
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    if b <= 0:
        raise ValueError(f"b must be > 0, got {b}")
    value = _pollaczek_recursion(m, float(x), b)
    if m <= _CROSS_CHECK_LIMIT:
        oracle = _pollaczek_series_exact(m, float(x), b)
        if abs(value - oracle) > _CROSS_CHECK_TOL * max(1.0, abs(oracle)):
            raise NumericsError(
                f"polynomials.pollaczek: recursion/series cross-check failed at "
                f"m={m}, x={x!r}, b={b!r}: {value!r} vs {oracle!r}"
            )
    return value


def pollaczek_table(max_degree: int, x: np.ndarray, b: float) -> np.ndarray:
    """P_0..P_max_degree at an array of points, shape (max_degree+1, len(x)).

    Vectorized recursion route only (no per-point cross-check); quadrature
    uses this.  Agreement with pollaczek() is exercised by the tests.
    """
    x = np.asarray(x, dtype=np.float64)
    out = np.empty((max_degree + 1, x.size))
    out[0] = 1.0
    if max_degree >= 1:
        out[1] = x / _recursion_c(b, 1)
    for j in range(1, max_degree):
        out[j + 1] = (x * out[j] - _recursion_c(b, j) * out[j - 1]) / _recursion_c(b, j + 1)
    return out


# ---------------------------------------------------------------------------
# |Gamma(b + ix)|^2 and the orthogonality weight

# B_2, B_4, ..., B_24 over (2j)(2j-1): the 12-term asymptotic tail
_STIRLING_COEFFS = [
    Fraction(1, 6),
    Fraction(-1, 30),
    Fraction(1, 42),
    Fraction(-1, 30),
    Fraction(5, 66),
    Fraction(-691, 2730),
    Fraction(7, 6),
    Fraction(-3617, 510),
    Fraction(43867, 798),
    Fraction(-174611, 330),
    Fraction(854513, 138),
    Fraction(-236364091, 2730),
]
_STIRLING_TERMS = [
    float(c / ((2 * j) * (2 * j - 1))) for j, c in enumerate(_STIRLING_COEFFS, start=1)
]
_SHIFT_THRESHOLD = 10.0
_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)


def log_gamma_complex(z: complex) -> complex:
    """log Gamma(z) for Re z > 0 by shifting to Re z >= 10, then Stirling.

    12 asymptotic terms at |z| >= 10 leave a truncation error near 1e-19,
    comfortably inside the 1e-12 relative target on b in (0, 5], |x| <= 50.
    """
    z = complex(z)
    if z.real <= 0.0:
        raise ValueError(f"Re z must be > 0, got {z!r}")
    acc = 0.0 + 0.0j
    while z.real < _SHIFT_THRESHOLD:
        acc += cmath.log(z)
        z += 1.0
    s = (z - 0.5) * cmath.log(z) - z + _HALF_LOG_TWO_PI
    zpow = z
    zsq = z * z
    for coeff in _STIRLING_TERMS:
        s += coeff / zpow
        zpow *= zsq
    return s - acc


def _log_gamma_b_ix(b: float, x: np.ndarray) -> np.ndarray:
    """Vectorized log Gamma(b + ix) for fixed b > 0 and real array x."""
    z = b + 1j * np.asarray(x, dtype=np.float64)
    shifts = max(0, math.ceil(_SHIFT_THRESHOLD - b))
    acc = np.zeros_like(z)
    for j in range(shifts):
        acc += np.log(z + j)
    w = z + shifts
    s = (w - 0.5) * np.log(w) - w + _HALF_LOG_TWO_PI
    wpow = w.copy()
    wsq = w * w
    for coeff in _STIRLING_TERMS:
        s += coeff / wpow
        wpow *= wsq
    return s - acc


def gamma_abs_sq(b: float, x):
    """|Gamma(b + ix)|^2 = exp(2 Re log Gamma(b + ix)); scalar or array x."""
    if b <= 0:
        raise ValueError(f"b must be > 0, got {b}")
    arr = np.asarray(x, dtype=np.float64)
    out = np.exp(2.0 * _log_gamma_b_ix(b, arr).real)
    return float(out) if np.isscalar(x) or arr.ndim == 0 else out


def weight_rho(b: float, x):
    """Orthogonality weight 2^(2b-1) |Gamma(b+ix)|^2 / (pi Gamma(2b)).

    Even in x, strictly positive, total mass one.
    """
    scale = 2.0 ** (2.0 * b - 1.0) / (math.pi * math.gamma(2.0 * b))
    return scale * gamma_abs_sq(b, x)


def weight_tail_coefficient(b: float) -> float:
    """K_b with rho_b(x) <= K_b |x|^(2b-1) exp(-pi |x|) for |x| >= max(1, b).

    Asymptotic constant 2^(2b)/Gamma(2b) doubled as a safety factor.
    """
    return 2.0 * 2.0 ** (2.0 * b) / math.gamma(2.0 * b)
