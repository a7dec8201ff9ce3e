"""Sector off-diagonals and the three-term recursion they generate.

The operator pair (a^k, a+^k) acts on the lattice of number states
|mk + kappa>, m = 0, 1, ...  Within one sector the matrix of a^k + a+^k
is tridiagonal with zero diagonal and off-diagonals

    b_m = sqrt((mk+kappa+1)(mk+kappa+2)...(mk+kappa+k)),

growing like k^(k/2) m^(k/2).  The eigenvalue problem in the scaled
spectral variable lambda' is the recursion

    b_m f_{m+1} - lambda' f_m + b_{m-1} f_{m-1} = 0,

solved forward here for both fundamental initial conditions.  Solutions
grow or decay sub-exponentially, so coefficients are stored as a unit
complex direction plus a real log-magnitude; cutoffs up to 1e5 stay
representable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._compensated import comp_dot

# integer products above this bit length cannot be converted to float;
# the square root is then evaluated as exp of a log-domain sum
_LOG_SWITCH_BITS = 1000

_NEG_INF = float("-inf")


@dataclass(frozen=True)
class SectorParams:
    """Invariant subspace label: power k >= 1 and offset 0 <= kappa < k."""

    k: int
    kappa: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if not 0 <= self.kappa < self.k:
            raise ValueError(f"kappa must lie in [0, {self.k - 1}], got {self.kappa}")


def off_diagonal_squared(sector: SectorParams, m: int) -> int:
    """Exact integer product (mk+kappa+1)...(mk+kappa+k) = b_m**2."""
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    start = m * sector.k + sector.kappa + 1
    prod = 1
    for factor in range(start, start + sector.k):
        prod *= factor
    return prod


def off_diagonal(sector: SectorParams, m: int) -> float:
    """b_m, computed from the exact integer product before the square root."""
    prod = off_diagonal_squared(sector, m)
    if prod.bit_length() <= _LOG_SWITCH_BITS:
        return math.sqrt(prod)
    # log-domain fallback for huge m*k
    log_value = log_off_diagonal(sector, m)
    if log_value > math.log(np.finfo(np.float64).max):
        raise OverflowError(
            f"jacobi.off_diagonal: b_m overflows binary64 at m={m} "
            f"(sector k={sector.k}, kappa={sector.kappa})"
        )
    return math.exp(log_value)


def log_off_diagonal(sector: SectorParams, m: int) -> float:
    """Natural log of b_m."""
    start = m * sector.k + sector.kappa + 1
    return 0.5 * math.fsum(math.log(f) for f in range(start, start + sector.k))


@dataclass(frozen=True)
class OffDiagonalSequence:
    """b_0 .. b_{M-1} for one sector, as a float array."""

    sector: SectorParams
    values: np.ndarray

    @classmethod
    def build(cls, sector: SectorParams, length: int) -> "OffDiagonalSequence":
        if length < 1:
            raise ValueError("length must be >= 1")
        m = np.arange(length, dtype=np.float64)
        prod = np.ones(length)
        for p in range(sector.k):
            prod *= m * sector.k + sector.kappa + 1 + p
        return cls(sector, np.sqrt(prod))

    def __len__(self) -> int:
        return len(self.values)


def commutator_weight(k: int, n: int) -> int:
    """[a^k, a+^k] eigenvalue on |n>: (n+k)!/n! - n!/(n-k)!.

    The falling factorial is zero for n < k because a^k annihilates those
    states.  Exact integer arithmetic, so there is no overflow for any
    practical n, k.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return math.perm(n + k, k) - math.perm(n, k)


class InitialKind(Enum):
    """The two fundamental initial conditions of the recursion."""

    POLYNOMIAL = "polynomial"  # f_{-1} = 0, f_0 = 1
    SECOND = "second"  # f_0 = 0, f_1 = 1/b_0


@dataclass(frozen=True)
class RecursionSolution:
    """f_0..f_M in scaled storage: f_m = directions[m] * exp(log_abs[m]).

    directions are unit complex numbers (0.0 for an exact zero, where
    log_abs is -inf).  max_residual is the largest relative three-term
    residual observed while solving.
    """

    sector: SectorParams
    lambda_prime: complex
    kind: InitialKind
    directions: np.ndarray
    log_abs: np.ndarray
    max_residual: float

    def __len__(self) -> int:
        return len(self.directions)

    def value(self, m: int) -> complex:
        return self.directions[m] * math.exp(self.log_abs[m])

    def values(self) -> np.ndarray:
        """Plain complex coefficients; overflows to inf if log_abs > ~709."""
        with np.errstate(over="ignore"):
            return self.directions * np.exp(self.log_abs)


def solve_recursion(
    sector: SectorParams,
    lambda_prime: complex,
    M: int,
    kind: InitialKind = InitialKind.POLYNOMIAL,
) -> RecursionSolution:
    """Forward solve of the three-term recursion up to index M.

    Each step evaluates lambda' f_m - b_{m-1} f_{m-1} with compensated
    products and sums (cancellation near zeros of f_m would otherwise eat
    digits), in a frame rescaled by the running log-magnitude.
    """
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    lam = complex(lambda_prime)
    b = OffDiagonalSequence.build(sector, M).values

    dirs = np.zeros(M + 1, dtype=np.complex128)
    logs = np.full(M + 1, _NEG_INF)

    if kind is InitialKind.POLYNOMIAL:
        dirs[0], logs[0] = 1.0, 0.0
        f1 = lam / b[0]
        if f1 != 0:
            dirs[1], logs[1] = f1 / abs(f1), math.log(abs(f1))
    elif kind is InitialKind.SECOND:
        dirs[1], logs[1] = 1.0, -math.log(b[0])
    else:
        raise ValueError(f"unknown initial kind: {kind!r}")

    max_res = 0.0
    for m in range(1, M):
        scale = max(logs[m], logs[m - 1])
        if scale == _NEG_INF:
            continue  # both zero: stays zero (cannot happen for these kinds)
        fm = dirs[m] * math.exp(logs[m] - scale)
        fp = dirs[m - 1] * math.exp(logs[m - 1] - scale)
        bp = b[m - 1]
        wr = comp_dot(((lam.real, fm.real), (-lam.imag, fm.imag), (-bp, fp.real)))
        wi = comp_dot(((lam.real, fm.imag), (lam.imag, fm.real), (-bp, fp.imag)))
        mag = math.hypot(wr, wi)
        if mag == 0.0:
            pass  # exact node, e.g. odd coefficients at lambda' = 0
        else:
            logs[m + 1] = scale + math.log(mag) - math.log(b[m])
            dirs[m + 1] = complex(wr, wi) / mag

        # relative residual of the step, evaluated in the same frame
        fnext = dirs[m + 1] * math.exp(logs[m + 1] - scale) * b[m]
        res = abs(fnext - complex(wr, wi))
        size = abs(fnext) + abs(lam * fm) + abs(bp * fp)
        if size > 0.0:
            max_res = max(max_res, res / size)

    return RecursionSolution(sector, lam, kind, dirs, logs, max_res)


# ---------------------------------------------------------------------------
# growth diagnostics


@dataclass(frozen=True)
class GrowthProfile:
    """Partial sums of |f_m|^2 (in log form) and a power-law envelope fit."""

    sector: SectorParams
    lambda_prime: complex
    kind: InitialKind
    M: int
    log_abs: np.ndarray
    log_partial_sums: np.ndarray
    exponent: float | None
    envelope_count: int
    fit_ok: bool

    def partial_sum(self, m: int) -> float:
        return math.exp(self.log_partial_sums[m])

    def cauchy_ratio(self) -> float:
        """(S_M - S_{M/2}) / S_M; small means the sum has stabilized."""
        half = self.log_partial_sums[self.M // 2]
        full = self.log_partial_sums[self.M]
        return 1.0 - math.exp(half - full)


def envelope_fit(log_abs: np.ndarray, lo: int, hi: int) -> tuple[float | None, int]:
    """Least-squares slope of log|f_m| vs log m over [lo, hi].

    Only local maxima of |f_m| enter the fit, which skips the near-zero
    nodes of oscillatory solutions; monotone (node-free) sequences have no
    interior maxima, so the fit then falls back to every finite point.
    Returns (slope, number of points); slope is None below 2 points.
    """
    lo = max(lo, 1)
    idx = []
    for i in range(lo, hi + 1):
        v = log_abs[i]
        if v == _NEG_INF:
            continue
        left = log_abs[i - 1]
        right = log_abs[i + 1] if i + 1 < len(log_abs) else _NEG_INF
        if v >= left and v >= right:
            idx.append(i)
    if len(idx) < 20:
        idx = [i for i in range(lo, hi + 1) if log_abs[i] != _NEG_INF]
    if len(idx) < 2:
        return None, len(idx)
    xs = np.log(np.array(idx, dtype=np.float64))
    ys = log_abs[idx]
    slope = np.polyfit(xs, ys, 1)[0]
    return float(slope), len(idx)


def log_partial_sums_of_squares(log_abs: np.ndarray) -> np.ndarray:
    """log(S_j) with S_j = sum_{m<=j} |f_m|^2, done without leaving log space."""
    return np.logaddexp.accumulate(2.0 * log_abs)


def growth_profile(
    sector: SectorParams,
    lambda_prime: complex,
    M: int,
    kind: InitialKind = InitialKind.POLYNOMIAL,
) -> GrowthProfile:
    """Solve to M and report partial sums plus the envelope exponent.

    The exponent is fitted over the final decade m in [M/10, M]; the fit is
    flagged not-ok when fewer than 20 envelope points exist there.
    """
    if M < 100:
        raise ValueError(f"M must be >= 100, got {M}")
    sol = solve_recursion(sector, lambda_prime, M, kind)
    lps = log_partial_sums_of_squares(sol.log_abs)
    exponent, count = envelope_fit(sol.log_abs, M // 10, M)
    return GrowthProfile(
        sector=sector,
        lambda_prime=complex(lambda_prime),
        kind=kind,
        M=M,
        log_abs=sol.log_abs,
        log_partial_sums=lps,
        exponent=exponent,
        envelope_count=count,
        fit_ok=count >= 20,
    )


# ---------------------------------------------------------------------------
# k = 1 closed form


def _scaled_hermite_sequence(x: complex, M: int) -> tuple[np.ndarray, np.ndarray]:
    """H_m(x) for m <= M as (direction, log magnitude) pairs.

    The raw recursion H_{m+1} = 2x H_m - 2m H_{m-1} overflows near m ~ 250,
    so both entries are renormalized by exact powers of two on the way up.
    """
    dirs = np.zeros(M + 1, dtype=np.complex128)
    logs = np.full(M + 1, _NEG_INF)
    h_prev, h = complex(1.0), 2.0 * x
    shift = 0.0  # accumulated log of the rescale factor
    dirs[0], logs[0] = 1.0, 0.0
    if M >= 1 and h != 0:
        dirs[1], logs[1] = h / abs(h), math.log(abs(h))
    for m in range(1, M):
        h_prev, h = h, 2.0 * x * h - 2.0 * m * h_prev
        big = max(abs(h), abs(h_prev))
        if big > 2.0**512:
            h = math.ldexp(1.0, -512) * h
            h_prev = math.ldexp(1.0, -512) * h_prev
            shift += 512.0 * math.log(2.0)
        if h != 0:
            dirs[m + 1] = h / abs(h)
            logs[m + 1] = math.log(abs(h)) + shift
    return dirs, logs


def hermite_identity_check(lam: complex, M: int) -> float:
    """Max relative deviation of the k=1 solution from H_m(lam/sqrt 2)/sqrt(2^m m!).

    The comparison side runs the raw Hermite recursion (independently of the
    b_m machinery) with factorial scalings handled in log space; M up to
    ~100 is the intended range.
    """
    sector = SectorParams(1, 0)
    sol = solve_recursion(sector, lam, M, InitialKind.POLYNOMIAL)
    hdirs, hlogs = _scaled_hermite_sequence(complex(lam) / math.sqrt(2.0), M)
    worst = 0.0
    for m in range(M + 1):
        norm = 0.5 * (m * math.log(2.0) + math.lgamma(m + 1))
        hl = hlogs[m] - norm
        fl = sol.log_abs[m]
        if hl == _NEG_INF and fl == _NEG_INF:
            continue  # both identically zero (odd m at lam=0)
        scale = max(hl, fl)
        fv = sol.directions[m] * math.exp(fl - scale)
        hv = hdirs[m] * math.exp(hl - scale)
        dev = abs(fv - hv) / max(abs(fv), abs(hv))
        worst = max(worst, dev)
    return worst
