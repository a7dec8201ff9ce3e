"""Eigenvalues of truncated (optionally boundary-modified) sector Jacobi
matrices by Sturm-sequence bisection.

Bisection is deliberately used instead of a faster dense solver: every
eigenvalue comes with a Sturm-count bracket certificate, which the
verification suite reuses directly.  Counts for a whole vector of shifts
are evaluated together, so the O(n) recurrence runs once per bisection
step for all n eigenvalues.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericsError
from .jacobi import OffDiagonalSequence, SectorParams


@dataclass(frozen=True)
class TridiagonalMatrix:
    """Real symmetric tridiagonal matrix with strictly positive off-diagonals."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "diag", np.asarray(self.diag, dtype=np.float64))
        object.__setattr__(self, "offdiag", np.asarray(self.offdiag, dtype=np.float64))
        if len(self.offdiag) != len(self.diag) - 1:
            raise ValueError("offdiag must have length n-1")
        if len(self.offdiag) and np.min(self.offdiag) <= 0.0:
            raise ValueError("off-diagonal entries must be strictly positive")

    @property
    def n(self) -> int:
        return len(self.diag)

    @classmethod
    def truncation(
        cls, sector: SectorParams, n: int, theta: float = 0.0
    ) -> "TridiagonalMatrix":
        """n x n truncation; theta != 0 puts theta * b_{n-1} in the last
        diagonal slot as a boundary-condition parameter."""
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        b = OffDiagonalSequence.build(sector, n).values
        diag = np.zeros(n)
        diag[-1] = theta * b[n - 1]
        return cls(diag=diag, offdiag=b[: n - 1])

    def gershgorin(self) -> tuple[float, float]:
        radius = np.zeros(self.n)
        if self.n > 1:
            radius[:-1] += self.offdiag
            radius[1:] += self.offdiag
        return float(np.min(self.diag - radius)), float(np.max(self.diag + radius))


def _sturm_counts(T: TridiagonalMatrix, xs: np.ndarray) -> np.ndarray:
    """Eigenvalues strictly below each shift, via the LDL^T pivot signs."""
    off_sq = T.offdiag**2
    pivmin = np.finfo(np.float64).tiny * max(1.0, float(np.max(off_sq)) if len(off_sq) else 1.0)
    d = T.diag[0] - xs
    d = np.where(np.abs(d) < pivmin, -pivmin, d)
    counts = (d < 0).astype(np.int64)
    with np.errstate(divide="ignore", over="ignore"):
        for i in range(1, T.n):
            d = (T.diag[i] - xs) - off_sq[i - 1] / d
            d = np.where(np.abs(d) < pivmin, -pivmin, d)
            counts += d < 0
    return counts


def sturm_count(T: TridiagonalMatrix, x: float) -> int:
    """Number of eigenvalues of T strictly below x."""
    return int(_sturm_counts(T, np.array([x], dtype=np.float64))[0])


@dataclass(frozen=True)
class SpectrumReport:
    """Sorted eigenvalues of one truncation, with bisection metadata."""

    eigenvalues: np.ndarray
    n: int
    bisect_tol: float
    boundary_theta: float | None = None

    def central(self, count: int) -> np.ndarray:
        """The count smallest-magnitude eigenvalues, ascending by value.

        Ties between +x and -x are broken toward the negative one first so
        the selection is deterministic.
        """
        order = np.lexsort((self.eigenvalues, np.abs(self.eigenvalues)))
        return np.sort(self.eigenvalues[order[:count]])


def eigenvalues_bisect(
    T: TridiagonalMatrix, tol: float, boundary_theta: float | None = None
) -> SpectrumReport:
    """All n eigenvalues to absolute tolerance tol.

    Per-eigenvalue brackets [lo_j, hi_j] keep the invariant
    count(lo_j) <= j < count(hi_j); with all off-diagonals positive the
    eigenvalues are simple, so each final bracket isolates exactly one.
    """
    if tol <= 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    n = T.n
    glo, ghi = T.gershgorin()
    span = max(ghi - glo, tol)
    glo -= 1e-3 * span
    ghi += 1e-3 * span
    lo = np.full(n, glo)
    hi = np.full(n, ghi)
    ranks = np.arange(1, n + 1)
    iterations = int(math.ceil(math.log2((ghi - glo) / tol))) + 2
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        counts = _sturm_counts(T, mid)
        go_down = counts >= ranks  # at least j+1 eigenvalues below mid
        hi = np.where(go_down, mid, hi)
        lo = np.where(go_down, lo, mid)
    if float(np.max(hi - lo)) > tol:
        raise NumericsError(
            "spectra.eigenvalues_bisect: bracket did not shrink to tolerance"
        )
    ev = 0.5 * (lo + hi)
    if np.any(np.diff(ev) < -tol):
        raise NumericsError("spectra.eigenvalues_bisect: bracket ordering lost")
    return SpectrumReport(
        eigenvalues=ev, n=n, bisect_tol=tol, boundary_theta=boundary_theta
    )


def extension_sweep(
    sector: SectorParams, n: int, thetas, tol: float
) -> list[SpectrumReport]:
    """One spectrum per boundary parameter theta at truncation size n."""
    if n < 50:
        raise ValueError(f"n must be >= 50, got {n}")
    reports = []
    for theta in thetas:
        T = TridiagonalMatrix.truncation(sector, n, theta=float(theta))
        reports.append(eigenvalues_bisect(T, tol, boundary_theta=float(theta)))
    return reports


def nearest_distance(values: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """For each target, the distance to the nearest entry of sorted values."""
    values = np.sort(np.asarray(values, dtype=np.float64))
    targets = np.atleast_1d(np.asarray(targets, dtype=np.float64))
    pos = np.searchsorted(values, targets)
    out = np.full(targets.shape, np.inf)
    left_ok = pos > 0
    out[left_ok] = np.abs(targets[left_ok] - values[pos[left_ok] - 1])
    right_ok = pos < len(values)
    out[right_ok] = np.minimum(
        out[right_ok], np.abs(values[pos[right_ok]] - targets[right_ok])
    )
    return out


def strict_interlacing(small: np.ndarray, large: np.ndarray) -> bool:
    """Strict Cauchy interlacing of an n-list between an (n+1)-list."""
    small = np.sort(small)
    large = np.sort(large)
    if len(large) != len(small) + 1:
        raise ValueError("interlacing check needs sizes n and n+1")
    return bool(np.all(large[:-1] < small) and np.all(small < large[1:]))


@dataclass(frozen=True)
class SpectrumDiagnostics:
    min_spacing_near_zero: float | None
    cross_theta_min_gap: float | None
    interlacing: tuple[tuple[int, int, bool], ...]


def spectrum_diagnostics(reports, window: float) -> SpectrumDiagnostics:
    """Summary statistics over several reports.

    min_spacing_near_zero: smallest consecutive spacing among eigenvalues
    inside [-window, window] (over all reports).  cross_theta_min_gap:
    smallest distance from any in-window eigenvalue of one report to the
    full spectrum of another (feeding the same theta twice therefore gives
    zero).  interlacing: strict Cauchy interlacing flags for every pair of
    reports whose sizes differ by one.
    """
    reports = list(reports)
    if len(reports) < 2:
        raise ValueError("need at least two reports")

    spacing = math.inf
    for rep in reports:
        inside = rep.eigenvalues[np.abs(rep.eigenvalues) <= window]
        if len(inside) >= 2:
            spacing = min(spacing, float(np.min(np.diff(np.sort(inside)))))
    min_spacing = None if math.isinf(spacing) else spacing

    cross = math.inf
    for i, a in enumerate(reports):
        for brep in reports[i + 1 :]:
            inside = a.eigenvalues[np.abs(a.eigenvalues) <= window]
            if len(inside):
                cross = min(cross, float(np.min(nearest_distance(brep.eigenvalues, inside))))
    cross_gap = None if math.isinf(cross) else cross

    inter = []
    for i, a in enumerate(reports):
        for brep in reports[i + 1 :]:
            if abs(a.n - brep.n) == 1:
                small, large = (a, brep) if a.n < brep.n else (brep, a)
                inter.append(
                    (small.n, large.n, strict_interlacing(small.eigenvalues, large.eigenvalues))
                )
    return SpectrumDiagnostics(
        min_spacing_near_zero=min_spacing,
        cross_theta_min_gap=cross_gap,
        interlacing=tuple(inter),
    )
