"""Acceptance criteria, one test each.  Every test prints a single PASS/FAIL line."""

import itertools
import math
import os
import subprocess
import sys
import time
from fractions import Fraction

import mpmath
import pytest
from mpmath import mp

from mocktheta import cli, divergence, heegner, kloosterman, modular, qseries, series, spectral
from mocktheta.numerics import DEFAULT_PREC, nearest_int

PREC = DEFAULT_PREC


@pytest.fixture
def report(capsys):
    def _report(label: str, ok: bool, detail: str = ""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {label}: {detail}", flush=True)
        assert ok, f"{label}: {detail}"

    return _report


def _run_suites(tasks):
    failures = {}
    cases = 0
    for task in tasks:
        suite, c, n_cases, fails = cli._suite_case(task)
        cases += n_cases
        if fails:
            failures.setdefault(suite, []).append((c, fails[:3]))
    return cases, failures


def test_c1_identity_suite(report):
    t0 = time.time()
    tasks = cli.identity_tasks(200, 50, PREC, ("lemma_fq_kloos", "fkmk"))
    tasks += cli.identity_tasks(200, 24, PREC, ("selberg_whiteman",))
    tasks += cli.identity_tasks(48, 0, PREC, ("gauss",))
    cases, failures = _run_suites(tasks)
    elapsed = time.time() - t0
    ok = not failures and elapsed < 300
    report("C1 identity suite (lemma, F/S, Selberg-Whiteman, Gauss)", ok,
           f"{cases} cases, failures={failures or 'none'}, {elapsed:.1f}s (limit 300s)")


def test_c2_heegner_kloosterman_match(report):
    t0 = time.time()
    bad = [(n, g) for n in range(1, 201) for g in (1, 2) if not heegner.algtoan_check(n, g, slack_bits=32)]
    elapsed = time.time() - t0
    ok = not bad and elapsed < 600
    report("C2 Heegner side = Kloosterman side", ok,
           f"400 pairs, mismatches={bad[:5] or 'none'}, {elapsed:.1f}s (limit 600s)")


def test_c3_rounding_reproduction(report):
    alpha_bad = [n for n in range(1, 501)
                 if nearest_int(series.andrews_truncated(n, math.isqrt(n))) != series.alpha_value(n)]
    p_bad = [n for n in range(1, 2001)
             if nearest_int(series.rademacher_truncated(n, math.isqrt(n))) != series.partition_value(n)]
    detail = f"alpha failures n={alpha_bad or 'none'}; p(n) failures n={p_bad[:10] or 'none'}"
    if alpha_bad == [1]:
        v = series.andrews_truncated(1, 1)
        detail += f" (n=1: one-term sum {mpmath.nstr(v, 12)} vs alpha(1)=1)"
    report("C3 rounding reproduction", not alpha_bad and not p_bad, detail)


def test_c4_bound_suite(report):
    slack = 1 + mpmath.ldexp(1, 16 - PREC)
    lehmer_bad, psi_bad, weil_bad = [], [], []
    worst_psi = mpmath.mpf(0)
    for c in range(1, 301):
        lb = kloosterman.lehmer_bound(c, PREC)
        pb = kloosterman.weil_psi_bound(c, PREC)
        for n in range(1, 51):
            A = kloosterman.A_c_direct(2 * c, kloosterman.shifted_A_argument(c, n), PREC).value
            S = kloosterman.kloosterman_S(0, n, 2 * c, modular.PSI, PREC).value
            with mp.workprec(PREC):
                if abs(A) > lb * slack:
                    lehmer_bad.append((c, n))
                if abs(S) > pb * slack:
                    psi_bad.append((c, n))
                worst_psi = max(worst_psi, abs(S) / pb)
    for c in range(24, 24 * 20 + 1, 24):
        for n in range(1, 51):
            S = kloosterman.kloosterman_S(n, n, c, modular.THETA12, PREC).value
            with mp.workprec(PREC):
                if abs(S) > kloosterman.weil_bound(n, c, PREC) * slack:
                    weil_bad.append((c, n))
    ratio = kloosterman.weil_psi_ratio(15552, 8278, PREC)
    ratio_ok = abs(ratio - mpmath.mpf("0.99992")) <= mpmath.mpf("1e-4")
    ok = not lehmer_bad and not psi_bad and not weil_bad and ratio_ok
    report("C4 bound suite", ok,
           f"Lehmer violations={lehmer_bad[:3] or 'none'}, psi violations={psi_bad[:3] or 'none'} "
           f"(max ratio {mpmath.nstr(worst_psi, 6)}), Weil violations={weil_bad[:3] or 'none'}, "
           f"ratio(15552, 8278)={mpmath.nstr(ratio, 10)}")


def test_c5_spectral_transforms(report):
    prec = spectral.SPECTRAL_PREC
    rows = spectral.comparison_rows(prec=prec)
    worst = max(mpmath.mpf(r["abs_err"]) for r in rows)
    quad_ok = worst <= mpmath.mpf("1e-8")

    positive = True
    floor_min = {}
    for k in (Fraction(1, 2), Fraction(-1, 2)):
        kk = mpmath.mpf(k.numerator) / k.denominator
        for j in range(1, 101):
            positive &= spectral.is_positive_real(spectral.phi_hat(mpmath.mpf(j) / 10, k, prec), prec)
        for j in range(1, 25):
            positive &= spectral.is_positive_real(spectral.phi_hat(mpmath.mpc(0, mpmath.mpf(j) / 100), k, prec), prec)
        if k > 0:
            positive &= spectral.is_positive_real(spectral.phi_hat(mpmath.mpc(0, 0.25), k, prec), prec)
        vals = []
        for j in range(2, 101):
            t = mpmath.mpf(j) / 2
            with mp.workprec(prec):
                vals.append(spectral.phi_hat(t, k, prec).real * t ** (3 - kk))
        floor_min[str(k)] = min(vals)
        limit_ok = abs(vals[-1] / spectral.phi_hat_floor_constant(prec) - 1) < mpmath.mpf("0.01")
        positive &= bool(limit_ok)
    floor_ok = all(v > 0 for v in floor_min.values())
    ok = quad_ok and positive and floor_ok
    report("C5 spectral transforms", ok,
           f"max |quadrature - closed form|={mpmath.nstr(worst, 3)} (limit 1e-8), positivity={positive}, "
           f"min t^(3-k) phi_hat on [1,50]: " + ", ".join(f"k={k}: {mpmath.nstr(v, 6)}" for k, v in floor_min.items()))


def test_c6_divergence_construction(report):
    from mocktheta.arith import legendre
    from sympy import primerange

    closed_bad = []
    for n in range(1, 21):
        for p in primerange(5, 501):
            if legendre(1 - 24 * n, p) != 1:
                continue
            a = divergence.F2p_closed_form(p, n, PREC)
            b = kloosterman.F_c(2 * p, n, PREC)
            with mp.workprec(PREC):
                if abs(a - b) > mpmath.ldexp(1, 16 - PREC):
                    closed_bad.append((n, p))
    grid = [10 ** 3, 10 ** 4, 10 ** 5]
    ws = divergence.scan_set_S(1, grid[-1])
    dens = divergence.density_table(ws, grid)
    dens_ok = all(r["density"] >= 0.05 for r in dens)
    sums = divergence.absolute_partial_sums(1, grid)
    vals = [r["partial_sum"] for r in sums]
    inc_ok = all(a < b for a, b in zip(vals, vals[1:]))
    bound_ok = all(r["partial_sum"] >= r["lower_bound"] for r in sums)
    ok = not closed_bad and dens_ok and inc_ok and bound_ok
    report("C6 divergence construction", ok,
           f"closed-form mismatches={closed_bad[:3] or 'none'}, densities="
           + ", ".join(f"{r['X']}:{r['density']:.4f}" for r in dens)
           + ", partial sums=" + ", ".join(mpmath.nstr(v, 8) for v in vals))


def test_c7_arithmetic_substrate(report):
    rec_bad = []
    for c, d in itertools.product(range(1, 501), repeat=2):
        if math.gcd(c, d) == 1:
            lhs = modular.dedekind_sum(d, c) + modular.dedekind_sum(c, d)
            if lhs != Fraction(-1, 4) + Fraction(d * d + c * c + 1, 12 * c * d):
                rec_bad.append((d, c))
    eta_bad = [(g.a, g.b, g.c, g.d) for c in range(1, 101) for g in modular.enumerate_gamma0(c)
               if modular.eta_multiplier(g) != modular.eta_multiplier_kronecker(g)]
    p_table = qseries.partition_exact(40)
    p_bad = [n for n in range(0, 41) if p_table[n] != sum(1 for _ in qseries.partitions(n))]
    a_table = qseries.alpha_exact(30)
    a_bad = [n for n in range(0, 31) if a_table[n] != qseries.alpha_rank_oracle(n)]
    ok = not (rec_bad or eta_bad or p_bad or a_bad)
    report("C7 arithmetic substrate", ok,
           f"reciprocity={rec_bad[:3] or 'ok'}, eta formulas={eta_bad[:3] or 'ok'}, "
           f"p(n)<=40={p_bad or 'ok'}, alpha(n)<=30={a_bad or 'ok'}")


def _cli_bytes(args, threads):
    proc = subprocess.run([sys.executable, "-m", "mocktheta.cli", *args, "--threads", str(threads)],
                          capture_output=True, env=dict(os.environ))
    return proc.returncode, proc.stdout


def test_c8_determinism(report):
    jobs = [
        ["alpha-series", "--n-min", "1", "--n-max", "60"],
        ["partition-series", "--n-min", "100", "--n-max", "130", "--format", "json"],
        ["kloosterman", "--n", "7", "--c-max", "60", "--mult", "psi"],
        ["heegner", "--n-min", "1", "--n-max", "12", "--gamma", "2"],
        ["identity-check", "--cmax", "16", "--nmax", "6"],
        ["divergence-scan", "--n", "1", "--p-max", "3000", "--format", "json", "--partial-sums"],
    ]
    bad = []
    for args in jobs:
        outs = [_cli_bytes(args, t) for t in (1, 1, 2, 4)]
        if any(o != outs[0] for o in outs) or outs[0][0] != 0 or not outs[0][1]:
            bad.append(args[0])
    report("C8 determinism across runs and worker counts", not bad,
           f"{len(jobs)} commands x 4 runs, differing={bad or 'none'}")
