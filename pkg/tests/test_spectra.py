"""Sturm counting, bisection eigenvalues, extension sweeps, diagnostics."""

import math

import numpy as np
import pytest

from powersqueeze import (
    SectorParams,
    TridiagonalMatrix,
    eigenvalues_bisect,
    extension_sweep,
    nearest_distance,
    solve_recursion,
    spectrum_diagnostics,
    strict_interlacing,
    sturm_count,
)


def dense(T: TridiagonalMatrix) -> np.ndarray:
    A = np.diag(T.diag)
    if T.n > 1:
        A += np.diag(T.offdiag, 1) + np.diag(T.offdiag, -1)
    return A


def charpoly_sign_changes(T: TridiagonalMatrix, x: float) -> int:
    """Independent count oracle: sign changes along the principal-minor
    sequence 1, D_1(x), ..., D_n(x) of T - xI (the classical Sturm chain)."""
    seq = [1.0]
    d_prev, d = 1.0, T.diag[0] - x
    seq.append(d)
    for i in range(1, T.n):
        d_prev, d = d, (T.diag[i] - x) * d - T.offdiag[i - 1] ** 2 * d_prev
        # renormalize to dodge overflow; only signs matter
        scale = max(abs(d), abs(d_prev), 1.0)
        if scale > 1e100:
            d /= scale
            d_prev /= scale
        seq.append(d)
    changes = 0
    last = 1.0
    for v in seq[1:]:
        if v == 0:
            v = -last  # zero counts as a change (eigenvalue of a minor)
        if (v < 0) != (last < 0):
            changes += 1
        last = v
    return changes


def hermite_roots_by_bisection(n: int) -> np.ndarray:
    """Positive roots of H_n by sign bisection on the raw Hermite recursion."""

    def h(x: float) -> float:
        h_prev, hv = 1.0, 2.0 * x
        for m in range(1, n):
            h_prev, hv = hv, 2.0 * x * hv - 2.0 * m * h_prev
        return hv if n >= 1 else 1.0

    roots = []
    grid = np.linspace(1e-9, math.sqrt(2.0 * n + 1.0), 4001)
    vals = [h(x) for x in grid]
    for i in range(len(grid) - 1):
        if vals[i] * vals[i + 1] < 0:
            lo, hi = grid[i], grid[i + 1]
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                if h(lo) * h(mid) <= 0:
                    hi = mid
                else:
                    lo = mid
            roots.append(0.5 * (lo + hi))
    return np.array(roots)


class TestSturmCount:
    def test_two_by_two(self):
        b0 = off = 1.7
        T = TridiagonalMatrix(diag=[0.0, 0.0], offdiag=[off])
        assert sturm_count(T, -2 * b0) == 0
        assert sturm_count(T, 0.0) == 1
        assert sturm_count(T, 2 * b0) == 2

    def test_below_gershgorin_is_zero(self):
        T = TridiagonalMatrix.truncation(SectorParams(3, 1), 25)
        lo, hi = T.gershgorin()
        assert sturm_count(T, lo - 1.0) == 0
        assert sturm_count(T, hi + 1.0) == 25

    def test_gershgorin_with_boundary_diagonal(self):
        # nonzero last diagonal entry still bounded by max|diag| + 2 max offdiag
        T = TridiagonalMatrix.truncation(SectorParams(2, 0), 30, theta=0.8)
        bound = float(np.max(np.abs(T.diag)) + 2.0 * np.max(T.offdiag))
        assert sturm_count(T, -bound - 1.0) == 0
        assert sturm_count(T, bound + 1.0) == 30

    def test_monotone_and_matches_charpoly_oracle(self):
        T = TridiagonalMatrix.truncation(SectorParams(2, 0), 6)
        xs = np.linspace(-12, 12, 41)
        counts = [sturm_count(T, float(x)) for x in xs]
        assert all(b >= a for a, b in zip(counts, counts[1:]))
        for x, c in zip(xs, counts):
            assert c == charpoly_sign_changes(T, float(x))

    def test_spectral_symmetry_of_counts(self):
        # zero diagonal: count(x) = n - count(-x) when x avoids the spectrum
        T = TridiagonalMatrix.truncation(SectorParams(2, 1), 30)
        for x in (0.37, 1.9, 14.2, 55.0):
            assert sturm_count(T, x) == 30 - sturm_count(T, -x)


class TestEigenvaluesBisect:
    def test_k1_n5_hermite_roots(self):
        T = TridiagonalMatrix.truncation(SectorParams(1, 0), 5)
        report = eigenvalues_bisect(T, 1e-10)
        pos = math.sqrt(2.0) * hermite_roots_by_bisection(5)
        expected = np.sort(np.concatenate([-pos, [0.0], pos]))
        assert np.allclose(report.eigenvalues, expected, atol=1e-9)

    def test_against_lapack_oracle(self):
        for k, kappa, n in ((2, 0, 40), (3, 2, 25), (1, 0, 12)):
            T = TridiagonalMatrix.truncation(SectorParams(k, kappa), n)
            report = eigenvalues_bisect(T, 1e-10)
            oracle = np.linalg.eigvalsh(dense(T))
            assert np.allclose(report.eigenvalues, oracle, atol=1e-9)

    def test_symmetric_spectrum_zero_diagonal(self):
        T = TridiagonalMatrix.truncation(SectorParams(2, 0), 40)
        ev = eigenvalues_bisect(T, 1e-10).eigenvalues
        assert np.allclose(ev, -ev[::-1], atol=2e-10)

    def test_bracket_certificates(self):
        T = TridiagonalMatrix.truncation(SectorParams(3, 0), 12)
        tol = 1e-10
        report = eigenvalues_bisect(T, tol)
        for j, ev in enumerate(report.eigenvalues):
            assert sturm_count(T, ev - 2 * tol) == j
            assert sturm_count(T, ev + 2 * tol) == j + 1

    def test_zeros_of_polynomial_solution(self):
        # eigenvalues of the n x n truncation coincide with zeros of f_n
        sector = SectorParams(3, 0)
        n = 12
        T = TridiagonalMatrix.truncation(sector, n)
        ev = eigenvalues_bisect(T, 1e-12).eigenvalues

        def f_n(x: float) -> float:
            return solve_recursion(sector, x, n).value(n).real

        for root in ev:
            lo, hi = root - 1e-3, root + 1e-3
            flo = f_n(lo)
            assert flo * f_n(hi) < 0
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                if flo * f_n(mid) <= 0:
                    hi = mid
                else:
                    lo, flo = mid, f_n(mid)
            assert 0.5 * (lo + hi) == pytest.approx(root, abs=1e-8)

    def test_boundary_theta_recorded(self):
        from powersqueeze import off_diagonal

        T = TridiagonalMatrix.truncation(SectorParams(3, 0), 60, theta=0.4)
        report = eigenvalues_bisect(T, 1e-9, boundary_theta=0.4)
        assert report.boundary_theta == 0.4
        assert T.diag[-1] == pytest.approx(
            0.4 * off_diagonal(SectorParams(3, 0), 59), rel=1e-15
        )

    def test_unreduced_eigenvalues_are_simple(self):
        # strictly positive off-diagonals force distinct eigenvalues
        for k, kappa, n in ((1, 0, 30), (2, 1, 41)):
            T = TridiagonalMatrix.truncation(SectorParams(k, kappa), n)
            ev = eigenvalues_bisect(T, 1e-11).eigenvalues
            assert float(np.min(np.diff(ev))) > 1e-6

    def test_one_by_one_matrix(self):
        T = TridiagonalMatrix(diag=[2.5], offdiag=[])
        report = eigenvalues_bisect(T, 1e-12)
        assert report.eigenvalues[0] == pytest.approx(2.5, abs=1e-12)


class TestExtensionSweep:
    def test_theta_zero_is_plain_truncation(self):
        sector = SectorParams(3, 0)
        reports = extension_sweep(sector, 60, [0.0], 1e-9)
        plain = eigenvalues_bisect(TridiagonalMatrix.truncation(sector, 60), 1e-9)
        assert np.allclose(reports[0].eigenvalues, plain.eigenvalues, atol=1e-12)

    def test_identical_theta_gives_zero_cross_gap(self):
        sector = SectorParams(3, 0)
        reports = extension_sweep(sector, 60, [0.3, 0.3], 1e-9)
        diag = spectrum_diagnostics(reports, window=20.0)
        assert diag.cross_theta_min_gap == pytest.approx(0.0, abs=1e-12)

    def test_minimum_size(self):
        with pytest.raises(ValueError):
            extension_sweep(SectorParams(3, 0), 10, [0.0], 1e-9)


class TestDiagnostics:
    def test_interlacing_consecutive_sizes(self):
        sector = SectorParams(3, 0)
        for n in (10, 50, 120, 199):
            small = eigenvalues_bisect(TridiagonalMatrix.truncation(sector, n), 1e-10)
            large = eigenvalues_bisect(TridiagonalMatrix.truncation(sector, n + 1), 1e-10)
            assert strict_interlacing(small.eigenvalues, large.eigenvalues)
            diag = spectrum_diagnostics([small, large], window=10.0)
            assert diag.interlacing == ((n, n + 1, True),)

    def test_nearest_distance(self):
        values = np.array([0.0, 1.0, 4.0])
        targets = np.array([-0.5, 2.2, 4.0])
        assert np.allclose(nearest_distance(values, targets), [0.5, 1.2, 0.0])

    def test_needs_two_reports(self):
        sector = SectorParams(2, 0)
        rep = eigenvalues_bisect(TridiagonalMatrix.truncation(sector, 60), 1e-9)
        with pytest.raises(ValueError):
            spectrum_diagnostics([rep], window=1.0)

    def test_min_spacing_near_zero(self):
        sector = SectorParams(2, 0)
        reps = [
            eigenvalues_bisect(TridiagonalMatrix.truncation(sector, n), 1e-10)
            for n in (60, 61)
        ]
        diag = spectrum_diagnostics(reps, window=5.0)
        assert diag.min_spacing_near_zero is not None
        assert 0 < diag.min_spacing_near_zero < 5.0


class TestContinuousSpectrumSignature:
    def test_k2_near_zero_spacing_shrinks_with_n(self):
        # the local spacing near 0 contracts as the truncation grows, the
        # finite-size trace of spectrum filling the whole line
        spacings = []
        for n in (100, 200, 400):
            ev = eigenvalues_bisect(
                TridiagonalMatrix.truncation(SectorParams(2, 0), n), 1e-10
            ).eigenvalues
            inside = ev[np.abs(ev) <= 4.0]
            spacings.append(float(np.min(np.diff(inside))))
        assert spacings[0] > spacings[1] > spacings[2]


class TestSectorDegeneracyTrend:
    def test_k2_sectors_approach_double_coverage(self):
        # merged even/odd-sector spectra: the distance from each central
        # even-sector eigenvalue to the odd-sector spectrum shrinks with n
        window = 2.0
        gaps = []
        for n in (100, 200, 400):
            even = eigenvalues_bisect(
                TridiagonalMatrix.truncation(SectorParams(2, 0), n), 1e-10
            ).eigenvalues
            odd = eigenvalues_bisect(
                TridiagonalMatrix.truncation(SectorParams(2, 1), n), 1e-10
            ).eigenvalues
            central = even[np.abs(even) <= window]
            assert len(central) > 0
            gaps.append(float(np.max(nearest_distance(odd, central))))
        assert gaps[0] > gaps[1] > gaps[2]
