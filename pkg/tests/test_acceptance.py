"""Acceptance gate: one test per shipped guarantee, one PASS/FAIL line each.

Each test prints a single line "PASS criterion-N: detail" (or FAIL) so the
-rA report reads as a checklist. Criterion 9 is advisory: it reports
measured scaling ratios and warns instead of failing, since wall-clock
ratios depend on machine load.
"""

import math
import time
import warnings

import mpmath
import numpy as np
import pytest

import hodlrfunm as hf

SQRT_U = float(np.sqrt(np.finfo(np.float64).eps))


def report(criterion, ok, detail):
    print(f"{'PASS' if ok else 'FAIL'} criterion-{criterion}: {detail}")
    assert ok, f"criterion-{criterion}: {detail}"


def rel_gap(got, want):
    scale = np.linalg.norm(want, 2)
    return float(np.linalg.norm(got - want, 2) / scale)


def test_criterion_01_bound_dominance():
    rows = 0
    violations = 0
    excess = -math.inf  # sigma - bound; stays negative unless the tail
    for kind in ("tridiag", "hessenberg"):  # hits the roundoff floor
        for fname in ("exp", "log_shift4", "sqrt_shift4"):
            cfg = hf.ExperimentConfig(kind, fname, size=256, trials=10, seed=0)
            for line in hf.run_decay_experiment(cfg).strip().splitlines()[1:]:
                _, _, sig, bound = line.split(",")
                rows += 1
                excess = max(excess, float(sig) - float(bound))
                if float(sig) > float(bound) + 1e-12:
                    violations += 1
    report(1, violations == 0,
           f"{rows} (trial, l) rows over 2 ensembles x 3 functions, "
           f"{violations} violations, worst sigma-bound gap {excess:.2e} "
           f"(slack 1e-12)")


def test_criterion_02_oracle_equivalence():
    fn = hf.get_function("exp")
    a = hf.gen_hermitian_tridiagonal(256, 0)
    oracle = hf.funm_eig(a, fn)
    dense = hf.contour_adaptive(fn, a).result
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # row-sum heuristic cannot certify r=1
        h = hf.contour_adaptive(fn, hf.hodlr_from_dense(a)).result
    rel_dense = rel_gap(dense, oracle)
    rel_hodlr = rel_gap(hf.hodlr_to_dense(h), dense)
    report(2, rel_dense <= 1e-10 and rel_hodlr <= 1e-9,
           f"dense vs eig {rel_dense:.2e} (<=1e-10), "
           f"hodlr vs dense {rel_hodlr:.2e} (<=1e-9)")


def test_criterion_03_pole_correction():
    fn = hf.get_function("exp_over_sin")
    pole = hf.PoleSpec(location=0.0, order=1, fj_derivatives=(1.0,))
    worst = 0.0
    for m in (128, 256):
        a = hf.gen_hermitian_tridiagonal(m, 0)
        e_a = hf.funm_eig(a, hf.get_function("exp"))
        sin_a = hf.funm_eig(a, np.sin)
        worst = max(worst, rel_gap(hf.funm_with_poles(fn, [pole], a),
                                   e_a @ np.linalg.inv(sin_a)))
    scalar = hf.funm_with_poles(fn, [pole], np.array([[0.5]]))[0, 0]
    scalar_err = abs(scalar - math.exp(0.5) / math.sin(0.5))
    report(3, worst <= 1e-8 and scalar_err <= 1e-10,
           f"matrix rel {worst:.2e} (<=1e-8) at m in (128, 256), "
           f"scalar err {scalar_err:.2e} (<=1e-10)")


def test_criterion_04_resolvent_counts():
    text = hf.run_expsin_benchmark(sizes=(128, 256), seed=0)
    ok = True
    details = []
    for line in text.strip().splitlines()[1:]:
        size, _, res_inv, _, res_sum, n_inv, n_sum = line.split(",")
        ok = ok and int(n_sum) < int(n_inv)
        ok = ok and float(res_inv) <= 1e-8 and float(res_sum) <= 1e-8
        details.append(f"m={size}: {n_sum}<{n_inv} resolvents, "
                       f"residuals {res_inv}/{res_sum}")
    report(4, ok, "; ".join(details))


def test_criterion_05_structural_identity():
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(50):
        s = int(rng.integers(1, 21))
        a = rng.standard_normal((32, 32)) + 1j * rng.standard_normal((32, 32))
        a *= 0.75 / np.linalg.norm(a, 2)
        coeffs = rng.standard_normal(s) + 1j * rng.standard_normal(s)
        split = int(rng.integers(8, 25))
        want = sum(c * np.linalg.matrix_power(a, q + 1)
                   for q, c in enumerate(coeffs))[split:, :split]
        got = hf.reconstruct_offdiag_block(a, split, coeffs)
        worst = max(worst, rel_gap(got, want))
    report(5, worst <= 1e-13,
           f"50 random (A, coeffs, s<=20) cases at m=32, worst rel {worst:.2e}")


def test_criterion_06_r_factor_decay():
    e = hf.enclosure_interval(0.75)
    level = math.sqrt(e.rho * e.r_outer)
    n, s = 24, 16
    coeffs = [1.0 / math.factorial(q) for q in range(1, s + 1)]  # <= 2 * 2^{-q}
    rng = np.random.default_rng(0)
    checks = 0
    violations = 0
    for seed in range(20):
        a = hf.gen_hermitian_tridiagonal(64, seed)
        b = rng.standard_normal(64) + 1j * rng.standard_normal(64)
        b_norm = float(np.linalg.norm(b))
        _, r = hf.householder_qr(hf.krylov_matrix(a, b, n))
        for i in range(n):
            for j in range(i, n):
                cap = hf.krylov_qr_entry_bound(e, 1.0, b_norm, level, i, j)
                checks += 1
                violations += abs(r[i, j]) > cap * (1 + 1e-9) + 1e-12
        b2 = rng.standard_normal(64) + 1j * rng.standard_normal(64)
        b2_norm = float(np.linalg.norm(b2))
        _, r2 = hf.householder_qr(hf.horner_matrix(a, b2, coeffs))
        for i in range(s):
            for j in range(i + 1, s + 1):  # columns are one-based
                cap = hf.horner_qr_entry_bound(e, 1.0, b2_norm, 2.0, 0.5, s, i, j)
                checks += 1
                violations += abs(r2[i, j - 1]) > cap * (1 + 1e-9) + 1e-12
    report(6, violations == 0,
           f"{checks} R entries over 20 Hermitian 64x64 instances, "
           f"{violations} violations")


def test_criterion_07_lemma_suite():
    rng = np.random.default_rng(0)
    violations = 0
    checks = 0
    for case in range(100):
        k = 1 + case % 3
        a = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
        u = rng.standard_normal((16, k)) + 1j * rng.standard_normal((16, k))
        v = rng.standard_normal((16, k)) + 1j * rng.standard_normal((16, k))
        sig_a = hf.singular_values(a)
        sig_sum = hf.singular_values(a + 10.0 * (u @ v.conj().T))
        for l in range(1, 17):
            cap = hf.composition_singular_bound("rankShift", l, k, sigmas=sig_a)
            checks += 1
            violations += sig_sum[l - 1] > cap + 1e-12

    gamma, alpha = 3.0, 0.5
    acc = np.zeros((50, 50), dtype=complex)
    for j in range(60):
        u = rng.standard_normal((50, 2)) + 1j * rng.standard_normal((50, 2))
        v = rng.standard_normal((50, 2)) + 1j * rng.standard_normal((50, 2))
        term = u @ v.conj().T
        acc += term * (gamma * math.exp(-alpha * j) / np.linalg.norm(term, 2))
    sig = hf.singular_values(acc)
    for l in range(1, 51):
        cap = hf.composition_singular_bound("dyadSum", l, 2, gamma=gamma, alpha=alpha)
        checks += 1
        violations += sig[l - 1] > cap * (1 + 1e-9) + 1e-12

    tot = np.zeros((40, 40), dtype=complex)
    for _ in range(3):
        q1, _ = np.linalg.qr(rng.standard_normal((40, 40))
                             + 1j * rng.standard_normal((40, 40)))
        q2, _ = np.linalg.qr(rng.standard_normal((40, 40))
                             + 1j * rng.standard_normal((40, 40)))
        sv = gamma * np.exp(-alpha * np.arange(1, 41))
        tot += (q1 * sv) @ q2.conj().T
    sig = hf.singular_values(tot)
    for l in range(1, 41):
        cap = hf.composition_singular_bound("rankKSum", l, 3, gamma=gamma, alpha=alpha)
        checks += 1
        violations += sig[l - 1] > cap * (1 + 1e-9) + 1e-12

    report(7, violations == 0,
           f"100 rank-shift cases (k in 1..3) plus dyad-sum and rank-k-sum "
           f"constructions, {checks} checks, {violations} violations")


def test_criterion_08_quotient_derivative():
    rng = np.random.default_rng(0)
    worst = 0.0
    points = 0
    for d in range(1, 6):
        for h in range(4):
            for _ in range(5):
                z = complex(rng.uniform(0.5, 2.0), rng.uniform(-1.0, 1.0))
                lam = complex(rng.uniform(-2.0, -0.5), rng.uniform(-1.0, 1.0))
                got = hf.quotient_derivative([np.exp(z)] * d, lam, z, d, h)
                with mpmath.workdps(50):
                    lam_mp = mpmath.mpc(lam.real, lam.imag)
                    want = mpmath.diff(
                        lambda t: mpmath.exp(t) / (t - lam_mp) ** (h + 1),
                        mpmath.mpc(z.real, z.imag), d - 1)
                    worst = max(worst, abs(got - complex(want)) / abs(complex(want)))
                points += 1
    symbolic = hf.pole_rational(
        hf.PoleSpec(location=0.0, order=2, fj_derivatives=(1.0, 1.0)), -0.5)
    sym_err = abs(symbolic - (-6.0))
    report(8, worst <= 1e-6 and sym_err <= 1e-12,
           f"{points} finite-difference points (d<=5, h<=3) worst rel "
           f"{worst:.2e} (<=1e-6), order-2 residue err {sym_err:.2e} (<=1e-12)")


def _median_seconds(fn, runs=5):
    times = []
    for _ in range(runs):
        start = time.monotonic()
        fn()
        times.append(time.monotonic() - start)
    return float(np.median(times))


def test_criterion_09_scaling_advisory():
    sizes = (256, 512, 1024)
    limits = {"matvec": 2.6, "mul": 3.2, "inverse": 3.2}
    timings = {name: [] for name in limits}
    for m in sizes:
        h = hf.hodlr_from_dense(hf.gen_hermitian_tridiagonal(m, 0))
        shifted = hf.hodlr_shift_diagonal(h, 2.0)  # keeps every pivot away from 0
        x = np.linspace(-1.0, 1.0, m) + 0.5j
        timings["matvec"].append(_median_seconds(lambda: hf.hodlr_matvec(h, x)))
        timings["mul"].append(_median_seconds(lambda: hf.hodlr_mul(h, h)))
        timings["inverse"].append(_median_seconds(lambda: hf.hodlr_inverse(shifted)))
    notes = []
    exceeded = []
    for name, ts in timings.items():
        ratios = [ts[i + 1] / ts[i] for i in range(len(ts) - 1)]
        notes.append(f"{name} " + "/".join(f"{r:.2f}" for r in ratios)
                     + f" (target <={limits[name]})")
        exceeded.extend(
            f"{name} doubling ratio {r:.2f} above {limits[name]}"
            for r in ratios if r > limits[name])
    if exceeded:
        warnings.warn("advisory scaling check: " + "; ".join(exceeded))
    report(9, True, "advisory, per-doubling time ratios " + ", ".join(notes))


def test_criterion_10_quadrature_decay():
    fn = hf.get_function("exp")
    worst_ratio = 0.0
    worst_final = 0.0
    for m, seed in ((64, 0), (128, 1), (256, 2)):
        diffs = hf.contour_adaptive(fn, hf.gen_hermitian_tridiagonal(m, seed)
                                    ).successive_diffs
        worst_final = max(worst_final, diffs[-1])
        for i in range(3, len(diffs)):
            worst_ratio = max(worst_ratio, diffs[i] / diffs[i - 1])
    report(10, worst_ratio <= 0.5 and worst_final <= SQRT_U,
           f"worst post-third-doubling diff ratio {worst_ratio:.3f} (<=0.5), "
           f"worst final diff {worst_final:.2e} (<=sqrt(u))")
