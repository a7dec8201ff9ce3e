"""Normalized k-th power squeezed states in a truncated number basis.

A state is an eigenvector of mu a^k + nu a+^k with mu = sqrt(1 + |nu|^2).
Within the sector |mk+kappa> its coefficients are c_m = N t^m f_m with
t = sqrt(nu/mu) and f_m solving the three-term recursion at the scaled
eigenvalue lambda' = lambda/(mu t).  |t| < 1 while f_m grows slower than
exponentially, so the series converges and the cutoff is extended until
the trailing-window mass drops below the requested tolerance.

Operator expectation values (uncertainty products, eigen-residuals) are
evaluated in a zero-padded space; for truncated states the top two
coefficient slots (the 2k photon levels spanned by the quadratic operator
products) are excluded from every sum, since the missing tail contaminates
exactly that edge.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NumericsError
from .jacobi import (
    InitialKind,
    OffDiagonalSequence,
    SectorParams,
    commutator_weight,
    envelope_fit,
    growth_profile,
    solve_recursion,
)

_MAX_CUTOFF = 100_000
_SQUARE_SUMMABLE_EXPONENT = -0.5 - 0.1  # decay strictly faster than 1/sqrt
_CAUCHY_WINDOW = 0.10


@dataclass(frozen=True)
class SqueezeParams:
    """(sector, nu, lambda) with mu derived as sqrt(1 + |nu|^2)."""

    sector: SectorParams
    nu: complex
    lam: complex

    @property
    def mu(self) -> float:
        return math.sqrt(1.0 + abs(self.nu) ** 2)

    def lambda_prime(self) -> complex:
        """lambda / (mu t) with t the principal root of nu/mu; nu != 0."""
        if self.nu == 0:
            raise ValueError("lambda' is singular at nu = 0")
        return self.lam / (self.mu * self.branch_t())

    def branch_t(self) -> complex:
        return cmath.sqrt(self.nu / self.mu)


@dataclass(frozen=True)
class FockVector:
    """Coefficients c_0..c_M over |mk+kappa>.

    tail_estimate is the normalized mass of the trailing 10% window at
    build time; 0.0 marks an exactly finitely supported vector (nothing
    was truncated), which expectation sums then use in full.
    """

    sector: SectorParams
    coefficients: np.ndarray
    tail_estimate: float

    @property
    def cutoff(self) -> int:
        return len(self.coefficients) - 1

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.coefficients) ** 2))


def _tail_window(total: int) -> int:
    return max(1, total // 10)


def build_state(params: SqueezeParams, tol: float) -> FockVector:
    """Construct the normalized eigenstate of mu a^k + nu a+^k.

    The cutoff doubles until the trailing-window mass is below tol (log
    domain throughout, so sub-exponential growth of f_m cannot overflow).
    The overall phase is fixed by making c_0 real positive.
    """
    if params.nu == 0:
        raise ValueError("nu = 0 has no squeeze branch; use build_power_coherent")
    if not 0.0 < tol <= 1e-4:
        raise ValueError(f"tol must lie in (0, 1e-4], got {tol}")
    t = params.branch_t()
    log_t = math.log(abs(t))
    phase_t = t / abs(t)
    lam_prime = params.lambda_prime()

    M = 32
    while True:
        sol = solve_recursion(params.sector, lam_prime, M, InitialKind.POLYNOMIAL)
        m_idx = np.arange(M + 1)
        log_c = sol.log_abs + m_idx * log_t
        log_norm_sq = np.logaddexp.reduce(2.0 * log_c)
        window = _tail_window(M + 1)
        log_tail = np.logaddexp.reduce(2.0 * log_c[-window:])
        tail = math.exp(log_tail - log_norm_sq)
        if tail < tol:
            break
        if M >= _MAX_CUTOFF:
            raise NumericsError(
                f"states.build_state: tail {tail:.3e} above tol {tol:.3e} "
                f"at the cutoff cap {_MAX_CUTOFF}"
            )
        M = min(2 * M, _MAX_CUTOFF)

    with np.errstate(over="ignore"):
        coeff = sol.directions * phase_t**m_idx * np.exp(log_c - 0.5 * log_norm_sq)
    # c_0 = f_0/norm is already real positive; rotate defensively anyway
    if coeff[0] != 0:
        phase = coeff[0] / abs(coeff[0])
        coeff = coeff * phase.conjugate()
    return FockVector(params.sector, coeff, tail)


def build_power_coherent(sector: SectorParams, lam: complex, tol: float) -> FockVector:
    """Eigenstate of a^k alone (the nu = 0, mu = 1 point).

    One-term recursion c_{m+1} = lam c_m / b_m; factorial damping makes the
    vector square-summable for every lam.
    """
    if not 0.0 < tol <= 1e-4:
        raise ValueError(f"tol must lie in (0, 1e-4], got {tol}")
    lam = complex(lam)
    if lam == 0:
        return FockVector(sector, np.array([1.0 + 0.0j]), 0.0)
    M = 32
    while True:
        b = OffDiagonalSequence.build(sector, M).values
        coeff = np.empty(M + 1, dtype=np.complex128)
        coeff[0] = 1.0
        for m in range(M):
            coeff[m + 1] = lam * coeff[m] / b[m]
        norm_sq = float(np.sum(np.abs(coeff) ** 2))
        window = _tail_window(M + 1)
        tail = float(np.sum(np.abs(coeff[-window:]) ** 2)) / norm_sq
        if tail < tol:
            break
        if M >= _MAX_CUTOFF:
            raise NumericsError(
                f"states.build_power_coherent: tail {tail:.3e} above tol "
                f"{tol:.3e} at the cutoff cap {_MAX_CUTOFF}"
            )
        M = min(2 * M, _MAX_CUTOFF)
    coeff /= math.sqrt(norm_sq)
    if coeff[0] != 0:
        phase = coeff[0] / abs(coeff[0])
        coeff = coeff * phase.conjugate()
    return FockVector(sector, coeff, tail)


def apply_power_lowering(v: FockVector, k: int) -> FockVector:
    """a^k v (unnormalized): slot m receives b_m c_{m+1}."""
    if k != v.sector.k:
        raise ValueError(f"operator power {k} does not match sector k={v.sector.k}")
    c = v.coefficients
    b = OffDiagonalSequence.build(v.sector, len(c)).values
    out = np.zeros_like(c)
    out[:-1] = b[: len(c) - 1] * c[1:]
    return FockVector(v.sector, out, v.tail_estimate)


def apply_power_raising(v: FockVector, k: int) -> FockVector:
    """a+^k v (unnormalized): slot m receives b_{m-1} c_{m-1}; one slot longer."""
    if k != v.sector.k:
        raise ValueError(f"operator power {k} does not match sector k={v.sector.k}")
    c = v.coefficients
    b = OffDiagonalSequence.build(v.sector, len(c)).values
    out = np.zeros(len(c) + 1, dtype=np.complex128)
    out[1:] = b[: len(c)] * c
    return FockVector(v.sector, out, v.tail_estimate)


# ---------------------------------------------------------------------------
# expectation machinery


def _padded(v: FockVector, extra: int) -> np.ndarray:
    out = np.zeros(len(v.coefficients) + extra, dtype=np.complex128)
    out[: len(v.coefficients)] = v.coefficients
    return out


def _kept_slots(v: FockVector) -> int:
    """Slots entering expectation sums: all of them for exactly supported
    vectors, all but the top two for truncated ones."""
    n = len(v.coefficients)
    if v.tail_estimate > 0.0 and n > 2:
        return n - 2
    return n


@dataclass(frozen=True)
class SRReport:
    """Uncertainty budget for A = (a^k + a+^k)/2, B = (a^k - a+^k)/2i.

    commutator_expectation is <f_k(N)> (so <[A,B]> = i/2 times it), checked
    against the direct product route; lhs = varA varB - covAB^2 and
    rhs = |<[A,B]>|^2 / 4; gap = lhs - rhs is nonnegative up to roundoff
    and zero exactly on the squeezed eigenstates.
    """

    var_a: float
    var_b: float
    cov_ab: float
    commutator_expectation: float
    lhs: float
    rhs: float
    gap: float


def sr_report(v: FockVector, k: int) -> SRReport:
    """Schrodinger-Robertson variance report for the state v."""
    if k != v.sector.k:
        raise ValueError(f"operator power {k} does not match sector k={v.sector.k}")
    sector = v.sector
    c = _padded(v, 2)
    L = len(c)
    b = OffDiagonalSequence.build(sector, L).values

    def lower(w):
        out = np.zeros_like(w)
        out[:-1] = b[: L - 1] * w[1:]
        return out

    def raise_(w):
        out = np.zeros_like(w)
        out[1:] = b[: L - 1] * w[:-1]
        return out

    keep = _kept_slots(v)
    bra = c[:keep]

    def expect(w) -> complex:
        return complex(np.vdot(bra, w[:keep]))

    norm = float(np.real(np.vdot(bra, bra)))
    a_v = lower(c)
    ad_v = raise_(c)
    e1 = expect(a_v) / norm
    e1d = expect(ad_v) / norm
    e2 = expect(lower(a_v)) / norm
    e2d = expect(raise_(ad_v)) / norm
    e_lr = expect(lower(ad_v)) / norm  # <a^k a+^k>
    e_rl = expect(raise_(a_v)) / norm  # <a+^k a^k>

    mean_a = (e1 + e1d) / 2.0
    mean_b = (e1 - e1d) / 2.0j
    var_a = float(((e2 + e_lr + e_rl + e2d) / 4.0 - mean_a * mean_a).real)
    var_b = float((-(e2 - e_lr - e_rl + e2d) / 4.0 - mean_b * mean_b).real)
    # (AB + BA)/2 = (a^{2k} - a+^{2k}) / 4i
    cov = float(((e2 - e2d) / 4.0j - mean_a * mean_b).real)

    n_photon = np.arange(keep) * sector.k + sector.kappa
    weights = np.array([commutator_weight(k, int(n)) for n in n_photon], dtype=np.float64)
    fk_mean = float(np.sum(weights * np.abs(bra) ** 2) / norm)
    direct = float((e_lr - e_rl).real)
    if abs(direct - fk_mean) > 1e-8 * (1.0 + abs(fk_mean)):
        raise NumericsError(
            f"states.sr_report: commutator cross-check failed "
            f"(direct {direct!r} vs weight route {fk_mean!r}); truncation too aggressive"
        )

    lhs = var_a * var_b - cov * cov
    rhs = fk_mean * fk_mean / 16.0
    return SRReport(
        var_a=var_a,
        var_b=var_b,
        cov_ab=cov,
        commutator_expectation=fk_mean,
        lhs=lhs,
        rhs=rhs,
        gap=lhs - rhs,
    )


def residual_check(v: FockVector, params: SqueezeParams) -> float:
    """Relative eigen-residual of (mu a^k + nu a+^k - lambda) v.

    The norm runs over the kept slots; the scale is |lambda| plus the norms
    of both operator branches (the branch norms rather than their sum keep
    the measure meaningful at lambda = 0, where the combined output itself
    vanishes on an eigenstate).
    """
    if params.sector != v.sector:
        raise ValueError("params sector does not match the vector sector")
    mu, nu, lam = params.mu, complex(params.nu), complex(params.lam)
    c = _padded(v, 1)
    L = len(c)
    b = OffDiagonalSequence.build(v.sector, L).values
    low = np.zeros_like(c)
    low[:-1] = b[: L - 1] * c[1:]
    high = np.zeros_like(c)
    high[1:] = b[: L - 1] * c[:-1]
    resid = mu * low + nu * high - lam * c
    keep = _kept_slots(v)
    num = float(np.linalg.norm(resid[:keep]))
    den = (
        abs(lam)
        + mu * float(np.linalg.norm(low[:keep]))
        + abs(nu) * float(np.linalg.norm(high[:keep]))
    )
    # den vanishes only when lambda = 0 and both operator branches annihilate
    # the kept slots (e.g. the vacuum at nu = 0); the residual is then exact
    return num / den if den > 0.0 else num


# ---------------------------------------------------------------------------
# deficiency evidence at lambda' = i


@dataclass(frozen=True)
class DeficiencyEvidence:
    """Count of independent square-summable solutions at lambda' = i.

    count is None when the envelope fits were ambiguous (never a silent
    guess).  Exponents are the fitted envelope slopes; minimal_exponent is
    reported only when the decaying combination had to be constructed.
    """

    sector: SectorParams
    M: int
    count: int | None
    exponent_polynomial: float | None
    exponent_second: float | None
    minimal_exponent: float | None
    conclusive: bool


def _flagged(profile) -> bool:
    return (
        profile.fit_ok
        and profile.exponent is not None
        and profile.exponent < _SQUARE_SUMMABLE_EXPONENT
        and profile.cauchy_ratio() < _CAUCHY_WINDOW
    )


def _minimal_solution_profile(sector: SectorParams, M: int) -> tuple[float | None, bool, int]:
    """Envelope exponent and Cauchy flag of the decaying solution at i.

    The minimal solution is aligned with (T_N - i)^{-1} e_0 for N >> M;
    a banded solve with N = 100 M leaves contamination ~ sqrt(M/N) = 10%
    at the top of the fit window, enough for a decade-scale slope.
    """
    N = min(100 * M, 2_000_000)
    b = OffDiagonalSequence.build(sector, N).values
    ab = np.zeros((3, N), dtype=np.complex128)
    ab[0, 1:] = b[: N - 1]
    ab[1, :] = -1j
    ab[2, :-1] = b[: N - 1]
    rhs = np.zeros(N, dtype=np.complex128)
    rhs[0] = 1.0
    u = scipy.linalg.solve_banded((1, 1), ab, rhs)
    mag = np.abs(u[: M + 1])
    with np.errstate(divide="ignore"):
        log_abs = np.where(mag > 0.0, np.log(np.where(mag > 0.0, mag, 1.0)), -np.inf)
    exponent, count = envelope_fit(log_abs, M // 10, M)
    sums = np.cumsum(mag**2)
    cauchy = (sums[M] - sums[M // 2]) / sums[M] < _CAUCHY_WINDOW
    return exponent, cauchy, count


def deficiency_evidence(sector: SectorParams, M: int) -> DeficiencyEvidence:
    """How many solutions are square-summable at spectral point i.

    Both fundamental solutions are profiled; two flags mean the full
    two-dimensional solution space is square-summable (count 2).  In the
    one-dimensional case the fundamental solutions align with the dominant
    solution and neither is flagged, so the decaying combination is
    constructed separately and tested (count 1).  A solution is flagged
    when its envelope exponent is below -0.6 and its partial sums are
    Cauchy across M/2 -> M within 10%.
    """
    if M < 5000:
        raise ValueError(f"M must be >= 5000, got {M}")
    prof_poly = growth_profile(sector, 1j, M, InitialKind.POLYNOMIAL)
    prof_second = growth_profile(sector, 1j, M, InitialKind.SECOND)
    if not (prof_poly.fit_ok and prof_second.fit_ok):
        return DeficiencyEvidence(
            sector, M, None, prof_poly.exponent, prof_second.exponent, None, False
        )
    flags = (_flagged(prof_poly), _flagged(prof_second))
    if all(flags):
        return DeficiencyEvidence(
            sector, M, 2, prof_poly.exponent, prof_second.exponent, None, True
        )
    if any(flags):
        return DeficiencyEvidence(
            sector, M, 1, prof_poly.exponent, prof_second.exponent, None, True
        )
    min_exp, min_cauchy, min_count = _minimal_solution_profile(sector, M)
    if min_count >= 20 and min_exp is not None and min_exp < _SQUARE_SUMMABLE_EXPONENT and min_cauchy:
        return DeficiencyEvidence(
            sector, M, 1, prof_poly.exponent, prof_second.exponent, min_exp, True
        )
    return DeficiencyEvidence(
        sector, M, None, prof_poly.exponent, prof_second.exponent, min_exp, False
    )
