"""Command line interface.

Every subcommand prints tabular rows (CSV with a header, or a JSON array of
objects) to stdout or --output.  Diagnostics go to stderr only.  Exit codes:
0 success, 1 invalid arguments, 2 range/budget/construction failures.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from math import ceil, gcd, isqrt, log, sqrt

import numpy as np

from . import ap, products, sequences, shifted, smooth
from .errors import ConstructionFailedError, InvalidArgumentError, RangeBudgetError
from .sieve import build_sieve, greatest_prime_factor, von_mangoldt


def _fmt_float(v: float) -> str:
    return f"{v:.15g}"


def _json_value(v):
    if isinstance(v, float):
        return float(_fmt_float(v))
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(_fmt_float(float(v)))
    return v


def _csv_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return _fmt_float(float(v))
    return str(v)


def _emit(columns, rows, args) -> None:
    out = open(args.output, "w", encoding="utf-8") if args.output else sys.stdout
    try:
        if args.format == "json":
            payload = [{c: _json_value(r.get(c)) for c in columns} for r in rows]
            json.dump(payload, out, indent=2)
            out.write("\n")
        else:
            writer = csv.writer(out, lineterminator="\n")
            writer.writerow(columns)
            for r in rows:
                writer.writerow([_csv_value(r.get(c)) for c in columns])
    finally:
        if args.output:
            out.close()


def _sieve_for(args, needed: int):
    limit = args.sieve_limit if args.sieve_limit else max(int(needed), 3)
    return build_sieve(limit)


def _parse_x(text: str) -> float:
    try:
        x = float(text)
    except ValueError as exc:
        raise InvalidArgumentError(f"bad numeric value {text!r}") from exc
    return x


def _x_list(args) -> list[float]:
    if getattr(args, "x_list", None):
        return [_parse_x(t) for t in args.x_list.split(",") if t.strip()]
    if getattr(args, "x", None) is None:
        raise InvalidArgumentError("need --x or --x-list")
    return [args.x]


def _load_set(path: str, n_max=None) -> shifted.IndexSet:
    return shifted.IndexSet.from_file(path, n_max=n_max)


def _random_set(n: int, card: int, rng) -> shifted.IndexSet:
    if card < 1 or card > n:
        raise InvalidArgumentError("random cardinality must be in [1, N]")
    members = rng.choice(n, size=card, replace=False) + 1
    return shifted.IndexSet.from_iterable(np.sort(members), n_max=n)


def _pair_of_sets(args, rng) -> tuple[shifted.IndexSet, shifted.IndexSet, int]:
    """Resolve --dense / --set-a,--set-b / --random-card into (A, B, n_max)."""
    if args.dense:
        if not args.n:
            raise InvalidArgumentError("--dense needs --n")
        A = shifted.IndexSet.dense(args.n)
        return A, A, args.n
    if args.random_card:
        if not args.n:
            raise InvalidArgumentError("--random-card needs --n")
        A = _random_set(args.n, args.random_card, rng)
        B = _random_set(args.n, args.random_card, rng)
        return A, B, args.n
    if args.set_a and args.set_b:
        A = _load_set(args.set_a)
        B = _load_set(args.set_b)
        return A, B, max(A.n_max, B.n_max)
    raise InvalidArgumentError("need --dense, --random-card, or --set-a/--set-b")


# ---------------------------------------------------------------------------
# handlers


def _cmd_gpf(args):
    values = [int(_parse_x(t)) for t in args.n.split(",") if t.strip()]
    if not values:
        raise InvalidArgumentError("--n needs at least one value")
    if min(values) < 1:
        raise InvalidArgumentError("gpf needs n >= 1")
    sieve = _sieve_for(args, isqrt(max(values)) + 1)
    rows = [{"n": n, "gpf": greatest_prime_factor(n, sieve)} for n in values]
    return ["n", "gpf"], rows


def _cmd_gamma_plus(args):
    rng = np.random.default_rng(args.rng_seed)
    A, B, n_max = _pair_of_sets(args, rng)
    sieve = _sieve_for(args, n_max + 1)
    res = shifted.gamma_plus(A, B, sieve)
    rows = [{"gamma_plus": res.gamma_plus,
             "witness_a": res.witness[0], "witness_b": res.witness[1]}]
    return ["gamma_plus", "witness_a", "witness_b"], rows


def _cmd_lv_count(args):
    ns = [int(_parse_x(t)) for t in args.n.split(",") if t.strip()]
    rows = [{"N": n, "count": shifted.lv_count(n)} for n in ns]
    return ["N", "count"], rows


def _cmd_ford_ratio(args):
    text = args.n_list if args.n_list else args.n
    if not text:
        raise InvalidArgumentError("need --n or --n-list")
    ns = [int(_parse_x(t)) for t in text.split(",") if t.strip()]
    rows = [{"N": n, "count": shifted.lv_count(n), "ratio": shifted.ford_ratio(n)}
            for n in ns]
    return ["N", "count", "ratio"], rows


def _cmd_smooth(args):
    sieve = _sieve_for(args, max(3, int(args.y)))
    rep = smooth.psi_approx_report(args.x, args.y, sieve)
    rows = [{"x": rep.x, "y": rep.y, "u": rep.u, "exact": rep.exact,
             "approx": rep.approx, "residual": rep.residual}]
    return ["x", "y", "u", "exact", "approx", "residual"], rows


def _cmd_rho(args):
    if args.u_list:
        us = [_parse_x(t) for t in args.u_list.split(",") if t.strip()]
    elif args.u is not None:
        us = [args.u]
    else:
        raise InvalidArgumentError("need --u or --u-list")
    rows = [{"u": u, "rho": smooth.dickman_rho(u)} for u in us]
    return ["u", "rho"], rows


def _cmd_pi_ap(args):
    sieve = _sieve_for(args, int(args.x))
    err = None
    if gcd(args.a, args.q) == 1:
        err = ap.error_term(args.x, args.q, args.a, sieve)
    rows = [{"x": args.x, "q": args.q, "a": args.a,
             "pi_count": ap.pi_ap(args.x, args.q, args.a, sieve),
             "psi_weight": ap.psi_ap(args.x, args.q, args.a, sieve),
             "error": err}]
    return ["x", "q", "a", "pi_count", "psi_weight", "error"], rows


def _report_rows(rep: ap.DiscrepancyReport, args, extra: dict):
    if args.per_q:
        cols = ["x"] + list(extra) + ["q", "value"]
        rows = [dict(x=rep.x, **extra, q=q, value=v) for q, v in rep.per_q]
        return cols, rows
    cols = ["x"] + list(extra) + ["total", "normalized"]
    return cols, [dict(x=rep.x, **extra, total=rep.total, normalized=rep.normalized)]


def _auto_bv_q(x: float) -> int:
    return max(1, int(sqrt(x) / log(x) ** 2)) if x > 1 else 1


def _auto_window_q(x: float) -> int:
    return max(1, int(sqrt(x * log(x) ** 3))) if x > 1 else 1


def _cmd_bv_sum(args):
    xs = _x_list(args)
    all_rows = []
    cols = None
    for x in xs:
        Q = args.Q if args.Q else _auto_bv_q(x)
        sieve = _sieve_for(args, int(x))
        rep = ap.bv_sum(x, Q, sieve, threads=args.threads)
        cols, rows = _report_rows(rep, args, {"Q": Q})
        all_rows.extend(rows)
    return cols, all_rows


def _cmd_signed_sum(args):
    sieve = _sieve_for(args, int(args.x))
    Q = args.Q if args.Q else _auto_bv_q(args.x)
    rep = ap.signed_sum(args.x, Q, args.a, sieve, threads=args.threads)
    return _report_rows(rep, args, {"Q": Q, "a": args.a})


def _cmd_dyadic_sum(args):
    sieve = _sieve_for(args, int(args.x))
    Q = args.Q if args.Q else _auto_bv_q(args.x)
    rep = ap.dyadic_abs_sum(args.x, Q, args.a, sieve, use_psi=args.psi,
                            threads=args.threads)
    extra = {"Q": Q, "a": args.a, "weight": "psi" if args.psi else "pi"}
    return _report_rows(rep, args, extra)


def _cmd_thm4_sum(args):
    xs = _x_list(args)
    if args.per_q and len(xs) > 1:
        raise InvalidArgumentError("--per-q needs a single --x")
    cols = ["x", "Q", "P1", "P2", "a", "total", "normalized", "trivial_ratio"]
    all_rows = []
    for x in xs:
        P1 = args.p1 if args.p1 is not None else sqrt(x)
        P2 = args.p2 if args.p2 is not None else x
        Q = args.Q if args.Q else _auto_window_q(x)
        sieve = _sieve_for(args, int(x) + abs(args.a) + 2)
        rep = ap.theorem4_sum(x, Q, P1, P2, args.a, sieve, threads=args.threads)
        if args.per_q:
            return _report_rows(rep, args,
                                {"Q": Q, "P1": P1, "P2": P2, "a": args.a})
        all_rows.append({"x": rep.x, "Q": Q, "P1": P1, "P2": P2, "a": args.a,
                         "total": rep.total, "normalized": rep.normalized,
                         "trivial_ratio": ap.trivial_bound_ratio(rep)})
    return cols, all_rows


def _cmd_lambda_ext(args):
    x = args.x
    P1 = args.p1 if args.p1 is not None else sqrt(x)
    P2 = args.p2 if args.p2 is not None else x
    z = args.z if args.z is not None else ap.default_rough_z(x)
    Q = args.Q if args.Q else _auto_window_q(x)
    sieve = _sieve_for(args, max(int(x), 2 * Q) + 1)
    rep = ap.lambda_extension_sum(x, Q, P1, P2, args.a, z, sieve,
                                  threads=args.threads)
    extra = {"Q": Q, "P1": P1, "P2": P2, "a": args.a, "z": z}
    return _report_rows(rep, args, extra)


def _cmd_hb_verify(args):
    x = args.x if args.x is not None else float(args.n)
    sieve = _sieve_for(args, isqrt(max(args.n, int(x))) + 1)
    res = sequences.heath_brown_terms(args.n, x, args.j, sieve)
    lam = von_mangoldt(args.n, sieve)
    if args.terms:
        cols = ["n", "x", "J", "j", "term"]
        rows = [{"n": res.n, "x": res.x, "J": res.J, "j": j, "term": t}
                for j, t in res.terms]
        return cols, rows
    cols = ["n", "x", "J", "total", "von_mangoldt", "abs_error"]
    rows = [{"n": res.n, "x": res.x, "J": res.J, "total": res.total,
             "von_mangoldt": lam, "abs_error": abs(res.total - lam)}]
    return cols, rows


def _load_sequence(args) -> sequences.WeightedSequence:
    if args.seq_file:
        return sequences.WeightedSequence.from_file(args.seq_file)
    if args.indicator:
        lo, hi = (int(t) for t in args.indicator.split(","))
        return sequences.WeightedSequence.indicator(lo, hi)
    raise InvalidArgumentError("need --seq-file or --indicator lo,hi")


def _cmd_delta(args):
    f = _load_sequence(args)
    rows = [{"q": args.q, "a": args.a, "value": sequences.delta(f, args.q, args.a),
             "norm": sequences.norm(f)}]
    return ["q", "a", "value", "norm"], rows


def _cmd_cond_check(args):
    f = _load_sequence(args)
    cond = args.condition
    if cond == "A1":
        if args.d is None or args.k is None or args.ell is None:
            raise InvalidArgumentError("A1 needs --d, --k, --ell")
        lhs = sequences.a1_lhs(f, args.d, args.k, args.ell)
        rows = [{"condition": "A1", "holds": None, "worst_case": None,
                 "lhs": lhs, "rhs": None}]
    elif cond == "A2":
        if args.bound is None:
            raise InvalidArgumentError("A2 needs --bound")
        rep = sequences.check_A2(f, args.bound)
        rows = [{"condition": rep.condition, "holds": rep.holds,
                 "worst_case": rep.worst_case, "lhs": rep.lhs, "rhs": rep.rhs}]
    elif cond == "A3":
        if args.x is None:
            raise InvalidArgumentError("A3 needs --x")
        rep = sequences.check_A3(f, args.x)
        rows = [{"condition": rep.condition, "holds": rep.holds,
                 "worst_case": rep.worst_case, "lhs": rep.lhs, "rhs": rep.rhs}]
    else:
        if args.z is None:
            raise InvalidArgumentError("A4 needs --z")
        rep = sequences.check_A4(f, args.z)
        rows = [{"condition": rep.condition, "holds": rep.holds,
                 "worst_case": rep.worst_case, "lhs": rep.lhs, "rhs": rep.rhs}]
    return ["condition", "holds", "worst_case", "lhs", "rhs"], rows


_SELECTOR_PARAM_KEYS = ("x", "y", "z", "w", "j", "ell", "k", "s", "nu",
                        "j1", "j2", "j3", "j4", "j5", "j6")


def _cmd_divisor_lhs(args):
    params = {}
    for key in _SELECTOR_PARAM_KEYS:
        v = getattr(args, key if key != "w" else "w_lo")
        if v is not None:
            params[key] = v
    need = params.get("x", 1)
    if args.selector in ("rough-tau-window-harmonic", "rough-tau-hyperbola-harmonic"):
        need = need * params.get("y", 1)
    sieve = _sieve_for(args, int(ceil(need)))
    lhs = sequences.divisor_sum_lhs(args.selector, params, sieve)
    rhs = sequences.divisor_sum_rhs_shape(args.selector, params)
    rows = [{"selector": args.selector, "lhs": lhs, "rhs_shape": rhs,
             "ratio": lhs / rhs if rhs else None}]
    return ["selector", "lhs", "rhs_shape", "ratio"], rows


def _cmd_adversarial(args):
    p, A, B = shifted.adversarial_sets(args.n, args.eps)
    if args.write_a:
        A.to_file(args.write_a)
    if args.write_b:
        B.to_file(args.write_b)
    rows = [{"N": args.n, "eps": args.eps, "p": p,
             "card_a": len(A), "card_b": len(B)}]
    return ["N", "eps", "p", "card_a", "card_b"], rows


def _cmd_thm1_search(args):
    sieve = _sieve_for(args, isqrt(int(args.hi)) + 1)
    hit = shifted.prime_in_interval_search(args.n, args.lo, args.hi, sieve)
    row = {"N": args.n, "lo": args.lo, "hi": args.hi,
           "found": hit is not None,
           "p": hit[0] if hit else None,
           "a": hit[1] if hit else None,
           "b": hit[2] if hit else None}
    return ["N", "lo", "hi", "found", "p", "a", "b"], [row]


def _cmd_thm1_sum(args):
    sieve = _sieve_for(args, args.n + 1)
    Y, Z1, Z2 = shifted.theorem1_thresholds(args.n, args.a_exp)
    total = shifted.theorem1_sum(args.n, args.a_exp, sieve)
    rows = [{"N": args.n, "A_exp": args.a_exp, "Y": Y, "Z1": Z1, "Z2": Z2,
             "total": total}]
    return ["N", "A_exp", "Y", "Z1", "Z2", "total"], rows


def _cmd_thm2_sum(args):
    rng = np.random.default_rng(args.rng_seed)
    if args.dense:
        B = shifted.IndexSet.dense(args.n)
    elif args.set_b:
        B = _load_set(args.set_b, n_max=args.n)
    elif args.random_card:
        B = _random_set(args.n, args.random_card, rng)
    else:
        raise InvalidArgumentError("need --dense, --set-b, or --random-card")
    sieve = _sieve_for(args, args.n + 1)
    total = shifted.theorem2_sum(args.n, args.delta, B, sieve)
    rows = [{"N": args.n, "delta": args.delta, "card_b": len(B), "total": total}]
    return ["N", "delta", "card_b", "total"], rows


def _cmd_ledger(args):
    rng = np.random.default_rng(args.rng_seed)
    A, B, n_max = _pair_of_sets(args, rng)
    N = args.n if args.n else n_max
    sieve = _sieve_for(args, max(N, 3))
    rep = products.ledger_report(A, B, N, sieve)
    cols = ["N", "A_card", "B_card", "log_E", "log_E1", "log_E2",
            "sigma1", "sigma2", "lemma72_lhs", "lemma72_rhs", "implied_exponent"]
    rows = [{c: getattr(rep, c) for c in cols}]
    return cols, rows


def _cmd_sqerr_check(args):
    rng = np.random.default_rng(args.rng_seed)
    if args.dense:
        U = shifted.IndexSet.dense(args.n)
    elif args.set_file:
        U = _load_set(args.set_file, n_max=args.n)
    elif args.random_card:
        U = _random_set(args.n, args.random_card, rng)
    else:
        raise InvalidArgumentError("need --dense, --set-file, or --random-card")
    sieve = _sieve_for(args, max(args.n, 3))
    res = products.square_errors_check(U, args.n, sieve)
    rows = [{"N": args.n, "card": len(U), "lhs": res.lhs, "rhs": res.rhs,
             "holds": res.holds}]
    return ["N", "card", "lhs", "rhs", "holds"], rows


# ---------------------------------------------------------------------------
# parser assembly


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_common(sp):
    sp.add_argument("--output", default=None, help="write rows to a file")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--rng-seed", type=int, default=0)
    sp.add_argument("--sieve-limit", type=int, default=None)


def _float_arg(sp, name, **kw):
    sp.add_argument(name, type=float, **kw)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gpflab",
                     description="computational lab for greatest prime factors "
                                 "of shifted products and related sums")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, handler, help_text):
        sp = sub.add_parser(name, help=help_text)
        _add_common(sp)
        sp.set_defaults(handler=handler)
        return sp

    sp = cmd("gpf", _cmd_gpf, "greatest prime factor of given integers")
    sp.add_argument("--n", required=True, help="comma separated integers")

    sp = cmd("gamma-plus", _cmd_gamma_plus,
             "max greatest prime factor over shifted products of two sets")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--dense", action="store_true")
    sp.add_argument("--set-a", default=None)
    sp.add_argument("--set-b", default=None)
    sp.add_argument("--random-card", type=int, default=None)

    sp = cmd("lv-count", _cmd_lv_count, "count distinct products a*b, a,b <= N")
    sp.add_argument("--n", required=True, help="comma separated N values")

    sp = cmd("ford-ratio", _cmd_ford_ratio,
             "distinct-product count against its density shape")
    sp.add_argument("--n", default=None, help="comma separated N values")
    sp.add_argument("--n-list", dest="n_list", default=None,
                    help="comma separated N values, one output row each")

    sp = cmd("smooth", _cmd_smooth, "smooth-number count and its approximation")
    _float_arg(sp, "--x", required=True)
    _float_arg(sp, "--y", required=True)

    sp = cmd("rho", _cmd_rho, "Dickman rho values")
    _float_arg(sp, "--u", default=None)
    sp.add_argument("--u-list", default=None)

    sp = cmd("pi-ap", _cmd_pi_ap, "primes in a progression, with error term")
    _float_arg(sp, "--x", required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--a", type=int, required=True)

    sp = cmd("bv-sum", _cmd_bv_sum, "max-over-residues discrepancy sum")
    _float_arg(sp, "--x", default=None)
    sp.add_argument("--x-list", default=None)
    sp.add_argument("--Q", type=int, default=None)
    sp.add_argument("--per-q", action="store_true")

    sp = cmd("signed-sum", _cmd_signed_sum, "signed discrepancy sum at fixed a")
    _float_arg(sp, "--x", required=True)
    sp.add_argument("--Q", type=int, default=None)
    sp.add_argument("--a", type=int, default=1)
    sp.add_argument("--per-q", action="store_true")

    sp = cmd("dyadic-sum", _cmd_dyadic_sum,
             "absolute discrepancy summed over dyadic modulus blocks")
    _float_arg(sp, "--x", required=True)
    sp.add_argument("--Q", type=int, default=None)
    sp.add_argument("--a", type=int, default=1)
    sp.add_argument("--psi", action="store_true", help="weight by log p")
    sp.add_argument("--per-q", action="store_true")

    sp = cmd("thm4-sum", _cmd_thm4_sum,
             "windowed product discrepancy over a dyadic modulus block")
    _float_arg(sp, "--x", default=None)
    sp.add_argument("--x-list", default=None)
    sp.add_argument("--Q", type=int, default=None)
    _float_arg(sp, "--p1", default=None)
    _float_arg(sp, "--p2", default=None)
    sp.add_argument("--a", type=int, default=1)
    sp.add_argument("--per-q", action="store_true")

    sp = cmd("lambda-ext", _cmd_lambda_ext,
             "extension discrepancy with rough cofactors and prime powers")
    _float_arg(sp, "--x", required=True)
    sp.add_argument("--Q", type=int, default=None)
    _float_arg(sp, "--p1", default=None)
    _float_arg(sp, "--p2", default=None)
    sp.add_argument("--a", type=int, default=1)
    _float_arg(sp, "--z", default=None)
    sp.add_argument("--per-q", action="store_true")

    sp = cmd("hb-verify", _cmd_hb_verify,
             "check the divisor expansion of the von Mangoldt function")
    sp.add_argument("--n", type=int, required=True)
    _float_arg(sp, "--x", default=None)
    sp.add_argument("--j", type=int, default=3, help="number of levels J")
    sp.add_argument("--terms", action="store_true", help="emit raw terms")

    sp = cmd("delta", _cmd_delta, "progression discrepancy of a weighted sequence")
    sp.add_argument("--seq-file", default=None)
    sp.add_argument("--indicator", default=None, metavar="LO,HI")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--a", type=int, required=True)

    sp = cmd("cond-check", _cmd_cond_check,
             "structural condition checks on a weighted sequence")
    sp.add_argument("--seq-file", default=None)
    sp.add_argument("--indicator", default=None, metavar="LO,HI")
    sp.add_argument("--condition", choices=("A1", "A2", "A3", "A4"), required=True)
    sp.add_argument("--d", type=int, default=None)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--ell", type=int, default=None)
    _float_arg(sp, "--bound", default=None)
    _float_arg(sp, "--x", default=None)
    _float_arg(sp, "--z", default=None)

    sp = cmd("divisor-lhs", _cmd_divisor_lhs,
             "exact multi-variable divisor sums with reference shapes")
    sp.add_argument("--selector", choices=sequences.DIVISOR_SELECTORS, required=True)
    _float_arg(sp, "--x", default=None)
    _float_arg(sp, "--y", default=None)
    _float_arg(sp, "--z", default=None)
    _float_arg(sp, "--w", dest="w_lo", default=None)
    sp.add_argument("--j", type=int, default=None)
    sp.add_argument("--ell", type=int, default=None)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--s", type=int, default=None)
    sp.add_argument("--nu", type=int, default=None)
    for i in range(1, 7):
        sp.add_argument(f"--j{i}", type=int, default=None)

    sp = cmd("adversarial", _cmd_adversarial,
             "congruence sets whose shifted products all share one prime")
    sp.add_argument("--n", type=int, required=True)
    _float_arg(sp, "--eps", required=True)
    sp.add_argument("--write-a", default=None)
    sp.add_argument("--write-b", default=None)

    sp = cmd("thm1-search", _cmd_thm1_search,
             "largest prime in [lo, hi] of the form a*b + 1 with a,b <= N")
    sp.add_argument("--n", type=int, required=True)
    _float_arg(sp, "--lo", required=True)
    _float_arg(sp, "--hi", required=True)

    sp = cmd("thm1-sum", _cmd_thm1_sum,
             "progression-prime pair count over the near-N window")
    sp.add_argument("--n", type=int, required=True)
    _float_arg(sp, "--a-exp", default=1.0)

    sp = cmd("thm2-sum", _cmd_thm2_sum,
             "progression-prime pair count over a delta window for a set B")
    sp.add_argument("--n", type=int, required=True)
    _float_arg(sp, "--delta", required=True)
    sp.add_argument("--dense", action="store_true")
    sp.add_argument("--set-b", default=None)
    sp.add_argument("--random-card", type=int, default=None)

    sp = cmd("ledger", _cmd_ledger, "full log-mass ledger for a pair of sets")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--dense", action="store_true")
    sp.add_argument("--set-a", default=None)
    sp.add_argument("--set-b", default=None)
    sp.add_argument("--random-card", type=int, default=None)

    sp = cmd("sqerr-check", _cmd_sqerr_check,
             "residue concentration inequality for a set in [1, N]")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--dense", action="store_true")
    sp.add_argument("--set-file", default=None)
    sp.add_argument("--random-card", type=int, default=None)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        columns, rows = args.handler(args)
    except InvalidArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (RangeBudgetError, ConstructionFailedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(columns, rows, args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
