"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest -s tests/test_acceptance.py -v` to see the per-criterion
lines.  Criterion 9's stability clause measures the n-dependence of the
boundary-modified truncations; the k=3 Cauchy bound is not met by the
constant-theta construction (see "Known failing criterion" in the README),
and the test reports the measured shifts rather than loosening the bound.
"""

import json
import math
import subprocess
import sys
import time

import numpy as np

from powersqueeze import (
    FockVector,
    SectorParams,
    SqueezeParams,
    TridiagonalMatrix,
    Verdict,
    build_state,
    classify_determinacy,
    deficiency_evidence,
    eigenvalues_bisect,
    extension_sweep,
    hermite_identity_check,
    integrate_weighted,
    moments,
    moments_to_jacobi,
    nearest_distance,
    off_diagonal,
    pollaczek_table,
    residual_check,
    solve_recursion,
    sr_report,
    strict_interlacing,
)
from powersqueeze.polynomials import _pollaczek_series_exact


def report(number: int, name: str, ok: bool, detail: str = "") -> bool:
    status = "PASS" if ok else "FAIL"
    suffix = f"  ({detail})" if detail else ""
    print(f"[criterion {number:02d}] {name}: {status}{suffix}")
    return ok


def test_criterion_01_pollaczek_identity():
    worst = 0.0
    for kappa, b in ((0, 0.25), (1, 0.75)):
        sector = SectorParams(2, kappa)
        for ell in (0.0, 0.5, -0.5, 2.0, -2.0):
            sol = solve_recursion(sector, 4.0 * ell, 30)
            values = sol.values()
            for m in range(31):
                expected = _pollaczek_series_exact(m, ell, b)
                got = values[m].real
                if expected == 0.0 and got == 0.0:
                    continue
                dev = abs(got - expected) / max(abs(expected), abs(got))
                worst = max(worst, dev)
    ok = worst <= 1e-9
    assert report(1, "recursion matches terminating-series family (k=2)", ok,
                  f"max rel dev {worst:.2e}") , f"max relative deviation {worst}"


def test_criterion_02_hermite_identity():
    devs = [hermite_identity_check(lam, 20) for lam in (0.6, -1.3)]
    ok = max(devs) <= 1e-10
    assert report(2, "k=1 solution matches normalized Hermite values", ok,
                  f"max rel dev {max(devs):.2e}"), devs


def test_criterion_03_orthonormality():
    start = time.monotonic()
    worst = 0.0
    for b in (0.25, 0.75):
        for m in range(11):
            for n in range(m, 11):
                def f(x, m=m, n=n, b=b):
                    table = pollaczek_table(max(m, n), x, b)
                    return table[m] * table[n]

                value, _ = integrate_weighted(f, b, 1e-9, degree=m + n)
                target = 1.0 if m == n else 0.0
                worst = max(worst, abs(value - target))
    elapsed = time.monotonic() - start
    ok = worst <= 1e-8 and elapsed <= 30.0
    assert report(3, "orthonormality of the polynomial family", ok,
                  f"max |int - delta| {worst:.2e}, {elapsed:.1f}s"), (worst, elapsed)


def test_criterion_04_moment_roundtrip():
    worst_c, worst_a = 0.0, 0.0
    for kappa, b in ((0, 0.25), (1, 0.75)):
        seq = moments(b, 18, 1e-10)
        rec = moments_to_jacobi(seq, 8)
        sector = SectorParams(2, kappa)
        for m in range(1, 9):
            target = off_diagonal(sector, m - 1) / 4.0
            worst_c = max(worst_c, abs(rec.offdiag[m - 1] - target))
        worst_a = max(worst_a, float(np.max(np.abs(rec.diag))))
    ok = worst_c <= 1e-6 and worst_a <= 1e-6
    assert report(4, "moments reproduce quarter-scaled off-diagonals", ok,
                  f"max |c err| {worst_c:.2e}, max |a| {worst_a:.2e}"), (worst_c, worst_a)


def test_criterion_05_determinacy_classification():
    ok = True
    details = []
    for M in (1000, 10000):
        for k, expected in ((1, Verdict.DETERMINED), (2, Verdict.DETERMINED),
                            (3, Verdict.LIMIT_CIRCLE), (4, Verdict.LIMIT_CIRCLE),
                            (5, Verdict.LIMIT_CIRCLE)):
            v = classify_determinacy(k, 0, M)
            ok &= v.verdict is expected
            if expected is Verdict.DETERMINED:
                # divergence certificate: unbounded closed-form lower bound
                ok &= math.isinf(v.tail_upper) and v.partial_sum >= v.lower_bound > 0
            else:
                ok &= math.isfinite(v.tail_upper) and v.log_concave_from == 1
            details.append(f"k={k},M={M}:{v.verdict.value}")
    assert report(5, "determinacy verdicts with certificates", ok,
                  "stable over M in {1e3,1e4}"), details


def test_criterion_06_deficiency_evidence():
    ok = True
    details = []
    for k, kappa, expected in ((1, 0, 1), (2, 0, 1), (3, 0, 2)):
        ev = deficiency_evidence(SectorParams(k, kappa), 5000)
        ok &= ev.conclusive and ev.count == expected
        details.append(f"k={k}:count={ev.count}")
        if k == 3:
            ok &= abs(ev.exponent_polynomial - (-0.75)) <= 0.1
            details.append(f"k=3 exponent {ev.exponent_polynomial:.3f}")
    assert report(6, "square-summable solution counts at spectral point i", ok,
                  ", ".join(details)), details


def test_criterion_07_sr_equality():
    ok = True
    details = []
    for k, nu, lam in ((1, 0.3, 1 + 1j), (2, 0.5j, 1 + 1j), (3, 0.3, 0.0), (3, 0.3, 1 + 1j)):
        params = SqueezeParams(SectorParams(k, 0), nu, lam)
        vec = build_state(params, 1e-12)
        rep = sr_report(vec, k)
        ratio = abs(rep.gap) / rep.rhs
        ok &= ratio <= 1e-6 and rep.gap >= -1e-10
        details.append(f"k={k}:gap/rhs={ratio:.1e}")
    control = np.zeros(2, dtype=np.complex128)
    control[1] = 1.0
    rep = sr_report(FockVector(SectorParams(1, 0), control, 0.0), 1)
    ok &= abs(rep.gap - 0.5) <= 1e-10
    details.append(f"control gap {rep.gap:.12f}")
    assert report(7, "uncertainty equality on constructed states", ok,
                  ", ".join(details)), details


def test_criterion_08_eigenvalue_consistency():
    sector = SectorParams(3, 0)
    # zeros of f_12 against the 12x12 truncation
    n = 12
    ev = eigenvalues_bisect(TridiagonalMatrix.truncation(sector, n), 1e-12).eigenvalues

    def f_n(x: float) -> float:
        return solve_recursion(sector, x, n).value(n).real

    worst = 0.0
    for target in ev:
        lo, hi = target - 1e-3, target + 1e-3
        flo = f_n(lo)
        assert flo * f_n(hi) < 0, "root bracket lost"
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if flo * f_n(mid) <= 0:
                hi = mid
            else:
                lo, flo = mid, f_n(mid)
        worst = max(worst, abs(0.5 * (lo + hi) - target))
    zeros_ok = worst <= 1e-8

    interlace_ok = True
    previous = eigenvalues_bisect(TridiagonalMatrix.truncation(sector, 2), 1e-10)
    for n in range(3, 201):
        current = eigenvalues_bisect(TridiagonalMatrix.truncation(sector, n), 1e-10)
        interlace_ok &= strict_interlacing(previous.eigenvalues, current.eigenvalues)
        previous = current
    ok = zeros_ok and interlace_ok
    assert report(8, "truncation eigenvalues = recursion zeros; interlacing", ok,
                  f"max zero dev {worst:.1e}, interlacing n<=200 {interlace_ok}"), (worst, interlace_ok)


def test_criterion_09_extension_spectra():
    start = time.monotonic()
    thetas = (0.0, 0.5, -0.7)
    tol = 1e-9
    reports = {
        (k, n): extension_sweep(SectorParams(k, 0), n, thetas, tol)
        for k in (3, 2)
        for n in (200, 400)
    }

    def shifts(k):
        out = []
        for i in range(len(thetas)):
            small = reports[(k, 200)][i].eigenvalues
            central = reports[(k, 400)][i].central(5)
            out.append(float(np.max(nearest_distance(small, central))))
        return out

    k3_shifts = shifts(3)
    k2_shifts = shifts(2)
    cauchy_ok = max(k3_shifts) <= 1e-6

    cross_ok = True
    reps400 = reports[(3, 400)]
    for i in range(len(thetas)):
        for j in range(i + 1, len(thetas)):
            gap = float(
                np.min(nearest_distance(reps400[j].eigenvalues, reps400[i].central(5)))
            )
            cross_ok &= gap > 1e-3

    contrast_ok = min(k2_shifts) > 1e-3
    elapsed = time.monotonic() - start
    ok = cauchy_ok and cross_ok and contrast_ok and elapsed <= 120.0
    assert report(
        9,
        "extension spectra: k=3 stability, disjointness, k=2 contrast",
        ok,
        f"k3 shifts {['%.3f' % s for s in k3_shifts]} (bound 1e-6), "
        f"cross-theta>1e-3 {cross_ok}, k2 shifts {['%.3f' % s for s in k2_shifts]}, "
        f"{elapsed:.0f}s",
    ), {
        "k3_shifts_200_400": k3_shifts,
        "cross_theta_disjoint": cross_ok,
        "k2_shifts_200_400": k2_shifts,
    }


DOCUMENTED_COMMANDS = (
    ("state", "--k", "2", "--kappa", "0", "--nu", "0.5", "--lambda", "0",
     "--tol", "1e-10", "--format", "csv"),
    ("classify", "--k", "3", "--M", "10000", "--format", "json"),
    ("spectrum", "--k", "1", "--n", "5", "--tol", "1e-10"),
)


def _run_cli(argv):
    return subprocess.run(
        [sys.executable, "-m", "powersqueeze.cli", *argv],
        capture_output=True,
        text=True,
    )


def test_criterion_10_residual_contract_and_determinism(tmp_path):
    # every CLI-emitted state passes residual_check at 10x its tolerance
    residual_ok = True
    cases = (
        ("2", "0", "0.5", "0"),
        ("1", "0", "0.3", "1+1i"),
        ("3", "0", "0.3", "1+1i"),
    )
    tol = 1e-10
    for k, kappa, nu, lam in cases:
        path = tmp_path / f"state_{k}_{kappa}.json"
        proc = _run_cli(
            ["state", "--k", k, "--kappa", kappa, "--nu", nu, "--lambda", lam,
             "--tol", str(tol), "--format", "json", "--out", str(path)]
        )
        assert proc.returncode == 0, proc.stderr
        doc = json.loads(path.read_text())
        sector = SectorParams(int(k), int(kappa))
        coeff = np.zeros(doc["results"]["cutoff"] + 1, dtype=np.complex128)
        for entry in doc["results"]["coefficients"]:
            coeff[entry["m"]] = complex(entry["re"], entry["im"])
        vec = FockVector(sector, coeff, doc["diagnostics"]["tail_estimate"])
        params = SqueezeParams(
            sector,
            complex(doc["config"]["nu"]["re"], doc["config"]["nu"]["im"]),
            complex(doc["config"]["lambda"]["re"], doc["config"]["lambda"]["im"]),
        )
        residual_ok &= residual_check(vec, params) <= 10.0 * tol

    deterministic = True
    for argv in DOCUMENTED_COMMANDS:
        first = _run_cli(list(argv))
        second = _run_cli(list(argv))
        deterministic &= (
            first.returncode == 0
            and first.stdout == second.stdout
            and bool(first.stdout)
        )
    ok = residual_ok and deterministic
    assert report(10, "CLI residual contract and byte determinism", ok,
                  f"residuals<=10*tol {residual_ok}, deterministic {deterministic}"), (
        residual_ok,
        deterministic,
    )
