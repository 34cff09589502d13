"""Command-line driver: fareygaps <command> [options].

Exit status is 0 on success, 1 on an internal failure (including a failed
check), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Callable

import numpy as np

from . import analytic, bcz, constrained, empirical, farey, oracles, runs
from .farey import ContractViolation, FareyFilter


class UsageError(Exception):
    pass


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {text!r}") from exc


def parse_grid(text: str) -> tuple[Fraction, Fraction, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError("grid must look like min:max:steps")
    lo, hi = parse_rational(parts[0]), parse_rational(parts[1])
    try:
        steps = int(parts[2])
    except ValueError as exc:
        raise UsageError("grid steps must be an integer") from exc
    if not lo < hi or steps < 1:
        raise UsageError("grid needs min < max and steps >= 1")
    return lo, hi, steps


def grid_values(grid: tuple[Fraction, Fraction, int]) -> np.ndarray:
    lo, hi, steps = grid
    if steps == 1:
        return np.array([float(lo)])
    return np.linspace(float(lo), float(hi), steps)


def threads() -> int:
    try:
        return max(1, int(os.environ.get("FAREY_THREADS", "1")))
    except ValueError:
        return 1


def make_filter(args) -> FareyFilter:
    if args.ell is not None and args.d is not None:
        raise UsageError("give at most one of --ell and --d")
    if args.ell is not None:
        return FareyFilter.numerator_not_divisible(args.ell)
    if args.d is not None:
        return FareyFilter.denominator_coprime(args.d)
    return FareyFilter.all()


class Output:
    """Collects text for the main artifact and writes it once, in order."""

    def __init__(self, path: str | None):
        self.path = path

    def write(self, text: str, suffix: str = "") -> None:
        if self.path is None:
            sys.stdout.write(text)
            return
        p = Path(self.path)
        if suffix:
            p = p.with_name(p.stem + suffix)
        p.write_text(text)


def _csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def _fmt(v: float) -> str:
    return repr(float(v))


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------


def cmd_enumerate(args) -> int:
    filt = make_filter(args)
    fr = list(farey.enumerate_farey(args.Q, filt))
    out = Output(args.out)
    if args.format == "json":
        out.write(_json([str(f) for f in fr]))
    else:
        out.write(_csv(["a", "q"], ((f.a, f.q) for f in fr)))
    return 0


def cmd_count(args) -> int:
    filt = make_filter(args)
    res = {"Q": args.Q, "filter": str(filt), "count": farey.count(args.Q, filt)}
    if args.Q <= 20000:
        res["count_by_totient"] = farey.count_by_totient(args.Q, filt)
    if args.xi is not None:
        xi = parse_rational(args.xi)
        res["xi"] = str(xi)
        res["threshold_count"] = empirical.threshold_count(args.Q, filt, xi)
    out = Output(args.out)
    if args.format == "csv":
        out.write(_csv(list(res), [list(res.values())]))
    else:
        out.write(_json(res))
    return 0


def _limit_curve(filt: FareyFilter) -> tuple[Callable, str]:
    if filt.kind == "numerator":
        ell = filt.param
        return (lambda s: analytic.Ftilde_cdf(ell, s)), f"Ftilde_{ell}"
    d = filt.param if filt.kind == "denominator" else 1
    return (lambda s: constrained.Fd_cdf(d, s)), f"F_{d}"


def cmd_gaps(args) -> int:
    filt = make_filter(args)
    grid = grid_values(parse_grid(args.grid))
    t0 = time.perf_counter()
    emp = empirical.gap_cdf(args.Q, filt, n_bins=args.bins)
    t1 = time.perf_counter()
    curve, name = _limit_curve(filt)
    e = emp(grid)
    f = np.asarray(curve(grid))
    ks = empirical.ks_distance(emp, curve)
    t2 = time.perf_counter()
    rows = [(_fmt(s), _fmt(a), _fmt(b), _fmt(a - b)) for s, a, b in zip(grid, e, f)]
    summary = {
        "Q": args.Q,
        "filter": str(filt),
        "curve": name,
        "gaps": emp.n,
        "span": str(emp.span),
        "binned": emp.binned,
        "ks_distance": ks,
        "grid_max_abs_diff": float(np.max(np.abs(e - f))),
    }
    if args.timings:
        summary["seconds"] = {"empirical": t1 - t0, "analytic_and_ks": t2 - t1}
    out = Output(args.out)
    if args.format == "json":
        out.write(_json({"summary": summary, "rows": [dict(zip(["s", "empirical", "analytic", "diff"], r)) for r in rows]}))
        return 0
    out.write(_csv(["s", "empirical", "analytic", "diff"], rows))
    if args.out is None:
        sys.stderr.write(_json(summary))
    else:
        out.write(_json(summary), suffix=".summary.json")
    return 0


CURVES = ("A", "A_K", "G", "Ftilde", "C_d", "F_d")


def cmd_analytic(args) -> int:
    xs = grid_values(parse_grid(args.grid))
    name = args.curve
    if name == "A":
        ys = analytic.A(xs)
    elif name == "A_K":
        ys = analytic.A_K(args.k or 1, xs)
        name = f"A_{args.k or 1}"
    elif name == "G":
        ys = analytic.G_ell(_need(args.ell, "--ell"), xs)
    elif name == "Ftilde":
        ys = analytic.Ftilde_cdf(_need(args.ell, "--ell"), xs)
    elif name == "C_d":
        ys = constrained.C_d_curve(_need(args.d, "--d"), xs)
    else:
        ys = constrained.Fd_cdf(_need(args.d, "--d"), xs)
    out = Output(args.out)
    if args.format == "json":
        out.write(_json({"curve": name, "x": [float(x) for x in xs], "value": [float(y) for y in ys]}))
    else:
        out.write(_csv(["x", "value"], ((_fmt(x), _fmt(y)) for x, y in zip(xs, ys))))
    return 0


def _need(v, flag):
    if v is None:
        raise UsageError(f"{flag} is required for this curve")
    return v


def cmd_pairs(args) -> int:
    d = args.d or 1
    kmax = args.k or 4
    res = empirical.pair_counts(args.Q, d, kmax)
    out = Output(args.out)
    rows = [(k, pc.count, _fmt(pc.density)) for k, pc in res.items()]
    if args.format == "json":
        out.write(_json({"Q": args.Q, "d": d, "counts": {str(k): c for k, c, _ in rows}}))
    else:
        out.write(_csv(["k", "count", "density"], rows))
    return 0


def cmd_runs(args) -> int:
    d = _need(args.d, "--d")
    cert = runs.certify_L(d, args.Qmax)
    Output(args.out).write(_json(cert.to_json()))
    return 0


def cmd_regions(args) -> int:
    if args.word:
        letters = tuple(int(x) for x in args.word.split(","))
    else:
        letters = (args.k or 1,)
    reg = bcz.word_region(letters)
    res = {"word": list(letters), "polygon": reg.polygon.to_json(), "linear_form": list(reg.linear_form)}
    if args.xi is not None:
        xi = float(parse_rational(args.xi))
        k = reg.linear_form[1]
        res["xi"] = args.xi
        res["omega_area"] = bcz.omega_area(letters, k, xi) if not reg.polygon.is_empty else 0.0
    Output(args.out).write(_json(res))
    return 0


# ---------------------------------------------------------------------------
# invariant suites for `check`


def suite_conjugacy(args) -> tuple[bool, list[str]]:
    bad = []
    for Q in range(2, args.Q + 1):
        _, q = farey.farey_arrays(Q)
        u, v = bcz.apply_T_lattice(Q, q[:-2], q[1:-1])
        miss = np.flatnonzero((u != q[1:-1]) | (v != q[2:]))
        if miss.size:
            bad.append(f"Q={Q} position {int(miss[0])}")
    return not bad, bad or [f"T maps consecutive denominator pairs correctly for all Q <= {args.Q}"]


def suite_inclusions(args) -> tuple[bool, list[str]]:
    C, T = bcz.Cyl, bcz.T
    claims = [(T(C(k)), C(1)) for k in range(5, 13)]
    claims += [
        (T(C(3) | C(4)), C(1) | C(2)),
        (T(C(2)), C(1) | C(2) | C(3) | C(4)),
        (T(T(C(3)) & C(2)), C(1) | C(2)),
    ]
    ok = True
    lines = []
    for lhs, rhs in claims:
        r = bcz.check_inclusion(lhs, rhs)
        ok &= r.holds
        lines.append(f"{'holds' if r.holds else 'FAILS'}: {r.lhs} ⊆ {r.rhs}")
    r = bcz.check_inclusion(T(T(C(3)) & C(2)), C(1) & C(2))
    w = "" if r.witness is None else f" (witness {r.witness[0]}, {r.witness[1]})"
    lines.append(f"{'holds' if r.holds else 'does not hold'}: {r.lhs} ⊆ {r.rhs}{w}")
    quad = (T(C(3)) & C(2)).pieces()
    same = len(quad) == 1 and quad[0].same_vertex_set([(Fraction(1, 2), Fraction(1, 2)), (Fraction(2, 5), Fraction(3, 5)), (Fraction(3, 5), Fraction(4, 5)), (Fraction(3, 7), Fraction(5, 7))])
    ok &= same
    lines.append(f"T(T_3) ∩ T_2 vertices {'match' if same else 'DIFFER'}")
    return ok, lines


def suite_identity32(args) -> tuple[bool, list[str]]:
    rep = runs.verify_identity_32(args.Q, args.ellmax)
    lines = [f"Q={args.Q} ell<={args.ellmax}: {rep.checked} checks, {len(rep.violations)} violations"]
    lines += [f"  {v}" for v in rep.violations[:10]]
    return rep.ok, lines


def suite_areas(args) -> tuple[bool, list[str]]:
    xis = np.arange(0.5, 30.01, 0.5)
    worst = 0.0
    for x in xis:
        worst = max(worst, abs(analytic.A(x) - bcz.omega_area("unit", 1, x)))
        for K in range(1, 9):
            worst = max(worst, abs(analytic.A_K(K, x) - bcz.omega_area((K,), K, x)))
    ok = worst <= 1e-8
    lines = [f"closed forms vs polygon areas: max deviation {worst:.3e}"]
    n = args.samples
    mA, mK = oracles.monte_carlo_areas(n, args.seed, xis, 8)
    z = 0.0
    for est, exact in [(mA, analytic.A(xis))] + [(mK[K - 1], analytic.A_K(K, xis)) for K in range(1, 9)]:
        sig = np.sqrt(np.maximum(exact * (1 - exact), 1e-300) / n)
        zz = np.where(exact > 0, np.abs(est - exact) / sig, np.where(est > 0, np.inf, 0.0))
        z = max(z, float(zz.max()))
    lines.append(f"Monte Carlo ({n} samples, seed {args.seed}, {oracles.PRNG}): max |z| = {z:.2f}")
    return ok and z <= 3, lines


def suite_counts(args) -> tuple[bool, list[str]]:
    Q = args.Q
    a = farey.count(Q)
    b = farey.count_by_totient(Q)
    ok = a == b
    return ok, [f"#F_{Q}: enumeration {a}, totient sum {b}"]


SUITES = {
    "conjugacy": suite_conjugacy,
    "inclusions": suite_inclusions,
    "identity32": suite_identity32,
    "areas": suite_areas,
    "counts": suite_counts,
}


def cmd_check(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    with ThreadPoolExecutor(max_workers=threads()) as pool:
        results = list(pool.map(lambda n: SUITES[n](args), names))
    all_ok = True
    buf = []
    for name, (ok, lines) in zip(names, results):
        all_ok &= ok
        buf.append(f"[{'pass' if ok else 'FAIL'}] {name}")
        buf.extend(f"    {ln}" for ln in lines)
    Output(args.out).write("\n".join(buf) + "\n")
    return 0 if all_ok else 1


COMMANDS = {
    "enumerate": cmd_enumerate,
    "count": cmd_count,
    "gaps": cmd_gaps,
    "analytic": cmd_analytic,
    "pairs": cmd_pairs,
    "runs": cmd_runs,
    "regions": cmd_regions,
    "check": cmd_check,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fareygaps", description="Gap statistics of constrained Farey fractions.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, Q_default=100):
        sp.add_argument("--Q", type=int, default=Q_default, help="Farey order")
        sp.add_argument("--ell", type=int, help="keep numerators not divisible by ell")
        sp.add_argument("--d", type=int, help="keep denominators coprime to d")
        sp.add_argument("--k", type=int, help="cylinder index, word continuant, or max determinant")
        sp.add_argument("--grid", default="0:5:500", help="min:max:steps (rationals allowed)")
        sp.add_argument("--bins", type=int, default=empirical.N_BINS, help="histogram bins above the exact-storage limit")
        sp.add_argument("--seed", type=int, default=0, help="seed for Monte Carlo checks")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", help="output file (default stdout)")
        return sp

    common(sub.add_parser("enumerate", help="list the (filtered) Farey sequence"), 10)
    c = common(sub.add_parser("count", help="size of the filtered sequence, optionally a threshold count"))
    c.add_argument("--xi", help="threshold xi (rational), counts gaps <= xi/Q^2")
    g = common(sub.add_parser("gaps", help="empirical gap CDF against the limit law"), 1000)
    g.add_argument("--timings", action="store_true", help="add wall-clock timings to the summary")
    a = common(sub.add_parser("analytic", help="tabulate a limit curve"))
    a.add_argument("--curve", choices=CURVES, default="A")
    common(sub.add_parser("pairs", help="consecutive coprime-denominator pairs by determinant"), 800)
    r = common(sub.add_parser("runs", help="longest runs of denominators sharing a factor with d"))
    r.add_argument("--Qmax", type=int, default=300)
    rg = common(sub.add_parser("regions", help="cylinder and word polygons as JSON"))
    rg.add_argument("--word", help="comma separated letters, e.g. 2,3")
    rg.add_argument("--xi", help="also report the thresholded area at this xi")
    ch = common(sub.add_parser("check", help="run invariant suites"), 300)
    ch.add_argument("--suite", choices=("all",) + tuple(SUITES), default="all")
    ch.add_argument("--ellmax", type=int, default=6)
    ch.add_argument("--samples", type=int, default=10**6, help="Monte Carlo sample count")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ContractViolation) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except Exception as exc:  # internal failure
        sys.stderr.write(f"internal error: {type(exc).__name__}: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
