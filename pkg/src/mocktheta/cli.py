"""Command line front end.

Every subcommand produces a list of rows and writes them as CSV or JSON.
Work is split over independent grid points; with --threads > 1 the points
are farmed out to worker processes and merged back in input order, so the
output bytes never depend on the worker count.

Exit status: 0 success, 1 a checked identity or bound failed, 2 usage error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from typing import Callable, Sequence

import mpmath
from mpmath import mp

from . import divergence, heegner, kloosterman, modular, qseries, series, spectral
from .arith import is_squarefree, totient
from .numerics import DEFAULT_POLICY, DEFAULT_PREC, PrecisionError

THREADS_ENV = "MOCKTHETA_THREADS"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
DIGITS = 30


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class JobConfig:
    command: str
    threads: int
    fmt: str
    output: str | None
    prec: int | None  # None means automatic
    args: argparse.Namespace


def _nstr(x, digits: int = DIGITS) -> str:
    return mpmath.nstr(x, digits)


def pmap(fn: Callable, items: Sequence, threads: int) -> list:
    """Ordered map, in-process for one worker and over processes otherwise."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def _range(args) -> list[int]:
    if args.n is not None:
        if args.n_min is not None or args.n_max is not None:
            raise UsageError("give either --n or --n-min/--n-max")
        lo = hi = args.n
    else:
        if args.n_max is None:
            raise UsageError("need --n or --n-max")
        lo = args.n_min if args.n_min is not None else 1
        hi = args.n_max
    if lo < 1 or hi < lo:
        raise UsageError(f"empty or invalid range [{lo}, {hi}]")
    return list(range(lo, hi + 1))


def _gamma(text: str) -> Fraction:
    try:
        g = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"gamma must be rational, got {text!r}")
    if g <= 0:
        raise UsageError("gamma must be positive")
    return g


def _auto_prec(cfg: JobConfig, n_max: int, N) -> int:
    return cfg.prec or DEFAULT_POLICY.bits(n_max, N)


# --- workers (module level so they pickle) ----------------------------------


def _report_row(n: int, gamma: Fraction, kind: str, prec: int) -> dict:
    return series.residual_report(n, gamma, kind, prec).row(DIGITS)


def _kloosterman_row(c: int, m: int, n: int, mult_name: str, prec: int) -> dict:
    mult = modular.MULTIPLIERS[mult_name]
    v = kloosterman.kloosterman_S(m, n, c, mult, prec)
    if mult_name == "psi" and m == 0 and c % 2 == 0:
        bound = kloosterman.weil_psi_bound(c // 2, prec)
    elif mult_name in ("theta", "theta12") and m == n:
        bound = kloosterman.weil_bound(n, c, prec)
    else:
        with mp.workprec(prec):
            bound = mpmath.mpf(totient(c))
    with mp.workprec(prec):
        ratio = abs(v.value) / bound
    return {"c": c, "n": n, "re": _nstr(v.value.real), "im": _nstr(v.value.imag),
            "bound": _nstr(bound), "ratio": _nstr(ratio, 12)}


def _suite_case(task: tuple) -> tuple[str, int, int, list]:
    """One (suite, c) slice of the identity checks: (suite, c, cases, failures)."""
    suite, c, nmax, prec = task
    fails = []
    cases = 0
    if suite == "lemma_fq_kloos":
        for n in range(1, nmax + 1):
            cases += 1
            if not kloosterman.lemma_fq_kloos_check(c, n, prec):
                fails.append(n)
    elif suite == "fkmk":
        if not kloosterman.F_c_acc(2 * c - 1, 1).is_zero():
            fails.append(("odd", 2 * c - 1))
        cases += 1
        for n in range(1, nmax + 1):
            cases += 1
            if not kloosterman.fkmk_check(c, n, prec):
                fails.append(n)
    elif suite == "selberg_whiteman":
        for n in range(-nmax, nmax + 1):
            cases += 1
            if not kloosterman.selberg_whiteman_check(c, n, prec):
                fails.append(n)
    elif suite == "gauss":
        tol = kloosterman.tolerance(prec)
        for a in [x for x in range(-48, 49) if x]:
            for b in range(0, 49):
                cases += 1
                g = kloosterman.gauss_sum(a, b, c, prec).value
                brute = kloosterman.gauss_sum_brute(a, b, c, prec)
                with mp.workprec(prec):
                    if abs(g - brute) > tol * max(1, abs(brute)):
                        fails.append((a, b))
    elif suite == "eta_agreement":
        for g in modular.enumerate_gamma0(c):
            cases += 1
            if modular.eta_multiplier(g) != modular.eta_multiplier_kronecker(g):
                fails.append((g.a, g.b, g.d))
    elif suite == "dedekind":
        for d in range(1, c + 1):
            if math.gcd(d, c) == 1:
                cases += 1
                if modular.dedekind_sum(d, c) != modular.dedekind_sum_direct(d, c):
                    fails.append(d)
    else:
        raise ValueError(suite)
    return suite, c, cases, fails


SUITES = ("lemma_fq_kloos", "fkmk", "selberg_whiteman", "gauss", "eta_agreement", "dedekind")


def identity_tasks(cmax: int, nmax: int, prec: int, suites=SUITES) -> list[tuple]:
    tasks = []
    for suite in suites:
        top = min(cmax, 48) if suite == "gauss" else cmax
        tasks.extend((suite, c, nmax, prec) for c in range(1, top + 1))
    return tasks


def _heegner_rows(n: int, gamma: Fraction, mode: str, prec: int) -> list[dict]:
    D = 24 * n - 1
    if mode == "prop":
        t, strict = gamma / 24, False
    else:
        t, strict = gamma, True
    return list(heegner.iter_rows(D, heegner.enumerate_forms(D, t, strict), prec, DIGITS))


def _spectral_row(item: tuple, prec: int) -> dict:
    kind, arg = item
    if kind == "2it":
        return spectral.comparison_rows(ts=(arg,), ls=(), prec=prec)[0]
    return spectral.comparison_rows(ts=(), ls=(arg,), prec=prec)[0]


# --- commands ----------------------------------------------------------------


def cmd_alpha_exact(cfg: JobConfig):
    a = cfg.args
    if a.n_max < 1:
        raise UsageError("--n-max must be positive")
    table = qseries.alpha_exact(a.n_max) if a.kind == "alpha" else qseries.partition_exact(a.n_max)
    return ["index", "value"], [{"index": i, "value": v} for i, v in enumerate(table.values)], True


def _series_cmd(cfg: JobConfig, kind: str):
    ns = _range(cfg.args)
    gamma = _gamma(cfg.args.gamma)
    prec = _auto_prec(cfg, ns[-1], series.truncation_cmax(ns[-1], gamma))
    rows = pmap(partial(_report_row, gamma=gamma, kind=kind, prec=prec), ns, cfg.threads)
    return list(series.TruncationReport.FIELDS), rows, True


def cmd_alpha_series(cfg):
    return _series_cmd(cfg, "mock")


def cmd_partition_series(cfg):
    return _series_cmd(cfg, "partition")


def cmd_kloosterman(cfg: JobConfig):
    a = cfg.args
    mult = modular.MULTIPLIERS.get(a.mult)
    if mult is None:
        raise UsageError(f"unknown multiplier {a.mult!r}")
    lo = a.c_min if a.c_min is not None else mult.level
    cs = [c for c in range(lo, a.c_max + 1) if c % mult.level == 0]
    if not cs:
        raise UsageError("no admissible moduli in range")
    prec = cfg.prec or DEFAULT_PREC
    rows = pmap(partial(_kloosterman_row, m=a.m, n=a.n, mult_name=a.mult, prec=prec), cs, cfg.threads)
    ok = all(Fraction(r["ratio"]) <= 1 for r in rows) if a.mult != "eta" else True
    return ["c", "n", "re", "im", "bound", "ratio"], rows, ok


def cmd_dedekind(cfg: JobConfig):
    a = cfg.args
    rows = []
    if a.d is not None:
        if a.c is None:
            raise UsageError("--d needs --c")
        pairs = [(a.d, a.c)]
    else:
        if a.c_max is None or a.c_max < 1:
            raise UsageError("need --d/--c or --c-max")
        pairs = [(d, c) for c in range(1, a.c_max + 1) for d in range(c) if math.gcd(d, c) == 1]
    for d, c in pairs:
        if c < 1 or math.gcd(d, c) != 1:
            raise UsageError(f"need c >= 1 and gcd(d, c) = 1, got d={d}, c={c}")
        rows.append({"d": d, "c": c, "s": str(modular.dedekind_sum(d, c))})
    return ["d", "c", "s"], rows, True


def cmd_gauss(cfg: JobConfig):
    a = cfg.args
    if a.c < 1 or a.a == 0:
        raise UsageError("need c >= 1 and a != 0")
    prec = cfg.prec or DEFAULT_PREC
    g = kloosterman.gauss_sum(a.a, a.b, a.c, prec)
    brute = kloosterman.gauss_sum_brute(a.a, a.b, a.c, prec)
    with mp.workprec(prec):
        ok = abs(g.value - brute) <= kloosterman.tolerance(prec) * max(1, abs(brute))
    row = {"a": a.a, "b": a.b, "c": a.c, "re": _nstr(g.value.real), "im": _nstr(g.value.imag),
           "method": g.method}
    return ["a", "b", "c", "re", "im", "method"], [row], ok


def cmd_heegner(cfg: JobConfig):
    a = cfg.args
    ns = _range(a)
    gamma = _gamma(a.gamma)
    prec = _auto_prec(cfg, ns[-1], heegner.kloosterman_cmax(ns[-1], gamma))
    chunks = pmap(partial(_heegner_rows, gamma=gamma, mode=a.mode, prec=prec), ns, cfg.threads)
    return list(heegner.CSV_FIELDS), [r for ch in chunks for r in ch], True


def cmd_identity_check(cfg: JobConfig):
    a = cfg.args
    if a.cmax < 1 or a.nmax < 1:
        raise UsageError("--cmax and --nmax must be positive")
    prec = cfg.prec or DEFAULT_PREC
    results = pmap(_suite_case, identity_tasks(a.cmax, a.nmax, prec), cfg.threads)
    summary: dict[str, list] = {}
    for suite, c, cases, fails in results:
        entry = summary.setdefault(suite, [0, 0, ""])
        entry[0] += cases
        entry[1] += len(fails)
        if fails and not entry[2]:
            entry[2] = f"c={c}: {fails[:3]}"
    rows = [{"suite": s, "cmax": min(a.cmax, 48) if s == "gauss" else a.cmax, "nmax": a.nmax,
             "cases": v[0], "failures": v[1], "status": "pass" if v[1] == 0 else "fail",
             "first_failure": v[2]} for s, v in summary.items()]
    ok = all(r["failures"] == 0 for r in rows)
    return ["suite", "cmax", "nmax", "cases", "failures", "status", "first_failure"], rows, ok


def cmd_divergence_scan(cfg: JobConfig):
    a = cfg.args
    if a.n < 1 or a.p_max < 5:
        raise UsageError("need --n >= 1 and --p-max >= 5")
    witnesses = divergence.scan_set_S(a.n, a.p_max)
    ok = all(w.check(a.n) for w in witnesses)
    if cfg.fmt == "csv":
        buf = io.StringIO()
        divergence.write_witness_csv(buf, witnesses)
        rows = list(csv.DictReader(io.StringIO(buf.getvalue())))
        return list(divergence.CSV_FIELDS), rows, ok
    grid = [10 ** k for k in range(3, 12) if 10 ** k <= a.p_max] or [a.p_max]
    density = divergence.density_table(witnesses, grid)
    sums = divergence.absolute_partial_sums(a.n, grid) if a.partial_sums else []
    doc = json.loads(divergence.summary_json(a.n, witnesses, density, sums))
    doc["witnesses"] = [{"p": w.p, "m_p": w.m_p, "eps_np": w.eps_np} for w in witnesses]
    return None, doc, ok


def cmd_spectral_check(cfg: JobConfig):
    prec = cfg.prec or spectral.SPECTRAL_PREC
    items = [("2it", t) for t in (1, 2, 5)] + [("real", Fraction(l, 2)) for l in (5, 9, 13)]
    rows = pmap(partial(_spectral_row, prec=prec), items, cfg.threads)
    ok = all(float(r["abs_err"]) <= 1e-8 for r in rows)
    return list(spectral.CSV_FIELDS), rows, ok


def cmd_exponent_fit(cfg: JobConfig):
    a = cfg.args
    ns = _range(a)
    gamma = _gamma(a.gamma)
    kind = a.kind
    if a.squarefree_only:
        shift = 1 if kind == "mock" else 23
        ns = [n for n in ns if is_squarefree(24 * n - shift)]
    if len(ns) < 8:
        raise UsageError("need at least 8 sample points")
    prec = _auto_prec(cfg, ns[-1], series.truncation_cmax(ns[-1], gamma))
    reports = pmap(partial(series.residual_report, gamma=gamma, kind=kind, prec=prec), ns, cfg.threads)
    reports = [r for r in reports if r.residual != 0]
    try:
        fit = series.exponent_fit(reports)
    except ValueError as exc:
        raise UsageError(str(exc))
    row = {"kind": kind, "gamma": str(gamma), "points": len(reports), "slope": repr(round(fit.slope, 12)),
           "intercept": repr(round(fit.intercept, 12)), "slope_stderr": repr(round(fit.slope_stderr, 12))}
    return list(row), [row], True


COMMANDS = {
    "alpha-exact": cmd_alpha_exact,
    "alpha-series": cmd_alpha_series,
    "partition-series": cmd_partition_series,
    "kloosterman": cmd_kloosterman,
    "dedekind": cmd_dedekind,
    "gauss": cmd_gauss,
    "heegner": cmd_heegner,
    "identity-check": cmd_identity_check,
    "divergence-scan": cmd_divergence_scan,
    "spectral-check": cmd_spectral_check,
    "exponent-fit": cmd_exponent_fit,
}


# --- parsing and output ------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _prec_arg(text: str):
    if text == "auto":
        return None
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("precision must be an integer or 'auto'")
    if p < 64:
        raise argparse.ArgumentTypeError("precision must be at least 64 bits")
    return p


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--threads", type=int, default=None,
                        help=f"worker processes (default ${THREADS_ENV} or 1)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--output", "-o", default=None, help="output file (default stdout)")
    common.add_argument("--prec", type=_prec_arg, default=None, help="working precision in bits, or 'auto'")

    p = _Parser(prog="mocktheta", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    def n_range(sp):
        sp.add_argument("--n", type=int)
        sp.add_argument("--n-min", type=int)
        sp.add_argument("--n-max", type=int)
        sp.add_argument("--gamma", default="1")

    sp = add("alpha-exact", "exact coefficients alpha(n) (or p(n) with --kind partition)")
    sp.add_argument("--n-max", type=int, required=True)
    sp.add_argument("--kind", choices=("alpha", "partition"), default="alpha")

    n_range(add("alpha-series", "truncated Andrews series and residual"))
    n_range(add("partition-series", "truncated Rademacher series and residual"))

    sp = add("kloosterman", "Kloosterman sums S(m, n, c, nu) with their Weil-type bounds")
    sp.add_argument("--m", type=int, default=0)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--c-min", type=int)
    sp.add_argument("--c-max", type=int, required=True)
    sp.add_argument("--mult", default="psi", help="psi, eta, theta or theta12")

    sp = add("dedekind", "Dedekind sums s(d, c)")
    sp.add_argument("--d", type=int)
    sp.add_argument("--c", type=int)
    sp.add_argument("--c-max", type=int)

    sp = add("gauss", "quadratic Gauss sum G(a, b, c)")
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--c", type=int, required=True)

    sp = add("heegner", "Heegner forms and their summands")
    n_range(sp)
    sp.add_argument("--mode", choices=("prop", "theorem"), default="prop")

    sp = add("identity-check", "exact identity suites")
    sp.add_argument("--cmax", type=int, default=100)
    sp.add_argument("--nmax", type=int, default=24)

    sp = add("divergence-scan", "primes with small m_p and the absolute partial sums")
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--p-max", type=int, default=10 ** 4)
    sp.add_argument("--partial-sums", action="store_true", help="include absolute partial sums (JSON only)")

    add("spectral-check", "quadrature against the closed-form Bessel transforms")

    sp = add("exponent-fit", "log-log fit of residuals against n")
    n_range(sp)
    sp.add_argument("--kind", choices=("mock", "partition"), default="mock")
    sp.add_argument("--squarefree-only", action="store_true")
    return p


def render(fields, rows, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    if fields is None:
        raise UsageError("this output is only available as JSON")
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def run(cfg: JobConfig) -> int:
    fields, rows, ok = COMMANDS[cfg.command](cfg)
    text = render(fields, rows, cfg.fmt)
    if cfg.output:
        with open(cfg.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_FAIL


def main(argv: Sequence[str] | None = None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        if ns.command is None:
            raise UsageError("a subcommand is required")
        threads = ns.threads if ns.threads is not None else _default_threads()
        if threads < 1:
            raise UsageError("--threads must be positive")
        cfg = JobConfig(ns.command, threads, ns.format, ns.output, ns.prec, ns)
        return run(cfg)
    except UsageError as exc:
        print(f"mocktheta: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PrecisionError, ArithmeticError) as exc:
        print(f"mocktheta: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
