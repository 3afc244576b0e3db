"""Command-line entry point.

Exit codes: 0 on success, 2 for usage or validation errors, 1 for runtime
failures.  Every failure prints a single ``fringetrees: error: ...`` line on
stderr.  Randomness only comes from ``--seed``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from . import constants as C
from . import experiments as E
from .dag import minimal_dag, unordered_minimal_dag
from .exact import (catalan, expected_identical_pairs_uniform, expected_occurrences_uniform,
                    expected_pairs_uniform, expected_z_bst, wedderburn_etherington)
from .models import ModelKind, make_rng, sample
from .textio import TreeParseError, decode_binary, encode_binary, format_tree, parse_tree

PROG = "fringetrees"
MAX_STATS_N = 1000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_in(lo, hi=None):
    def conv(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
        if v < lo or (hi is not None and v > hi):
            rng = f">= {lo}" if hi is None else f"in [{lo}, {hi}]"
            raise argparse.ArgumentTypeError(f"value {v} must be {rng}")
        return v
    return conv


def _seed(text):
    return _int_in(0, 2**64 - 1)(text)


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _real(x, digits=12):
    if x is None or not math.isfinite(x):
        return None
    return float(f"{x:.{digits}g}")


def _emit(text: str, path=None):
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path!r}: {exc.strerror or exc}") from exc


# commands


def cmd_generate(args):
    out = sys.stdout.buffer if args.format == "binary" else sys.stdout
    for i in range(args.count):
        t = sample(args.model, args.n, make_rng(args.seed, i))
        if args.format == "binary":
            out.write(encode_binary(t))
        else:
            out.write(format_tree(t) + "\n")
    out.flush()


def _read_trees(path, fmt):
    try:
        if fmt == "binary":
            with open(path, "rb") as fh:
                data = fh.read()
        else:
            with open(path, encoding="utf-8") as fh:
                lines = fh.read().splitlines()
    except OSError as exc:
        raise OSError(f"cannot read {path!r}: {exc.strerror or exc}") from exc
    if fmt == "binary":
        pos = 0
        while pos < len(data):
            t, used = decode_binary(data[pos:])
            pos += used
            yield t
        return
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            yield parse_tree(line)
        except TreeParseError as exc:
            raise TreeParseError(f"{path}:{lineno}: {exc.args[0].rsplit(' at position', 1)[0]}",
                                 exc.pos) from None


def cmd_compress(args):
    modes = ("ordered", "unordered") if args.mode == "both" else (args.mode,)
    trees = _read_trees(args.input, args.input_format)
    if args.format == "summary":
        lines = ["n," + ",".join(f"{m}_count" for m in modes)]
        for t in trees:
            sc = t.scan
            counts = {"ordered": sc.n_ordered, "unordered": sc.n_unordered}
            lines.append(",".join([str(t.n_leaves)] + [str(counts[m]) for m in modes]))
        _emit("\n".join(lines) + "\n")
        return
    build = {"ordered": minimal_dag, "unordered": unordered_minimal_dag}
    docs = [{"n": t.n_leaves, **{m: build[m](t).to_json() for m in modes}} for t in trees]
    _emit(json.dumps(docs, sort_keys=True) + "\n")


def cmd_stats(args):
    n = args.n
    head = ("n,k,catalan,wedderburn_etherington,uniform_mean,uniform_pairs,"
            "uniform_identical_pairs,bst_mean")
    lines = [head]
    for k in range(1, n + 1):
        s = catalan(k - 1)
        row = [n, k, s, wedderburn_etherington(k),
               _frac(expected_occurrences_uniform(n, k, s)),
               _frac(expected_pairs_uniform(n, k, s)),
               _frac(expected_identical_pairs_uniform(n, k)),
               _frac(expected_z_bst(n, k))]
        lines.append(",".join(map(str, row)))
    _emit("\n".join(lines) + "\n")


def cmd_constants(args):
    p = args.precision
    ref = C.REFERENCE
    if args.reference_only:
        rep = C.reference_report()
    else:
        rep = C.compute_report(args.mu_terms, args.nu_terms, args.b_terms)
    d = rep.as_dict()
    bounds = {"mu": d["mu_tail_bound"], "nu": d["nu_tail_bound"], "b": d["b_error"]}
    doc = {}
    for name in ("gamma", "mu", "nu", "b", "c", "c1", "c2", "c3", "c4", "c5", "c6"):
        entry = {"value": _real(d[name], p), "reference": ref[name],
                 "tail_bound": _real(bounds.get(name), p)}
        entry["abs_diff"] = _real(abs(d[name] - ref[name]), p)
        doc[name] = entry
    doc["gamma"]["source"] = "reference input"
    doc["b"]["bound_kind"] = "extrapolation error estimate"
    doc["sigma_sq_sym_bst"] = {"value": None, "reference": ref["sigma_sq_sym_bst"],
                               "tail_bound": None, "abs_diff": None}
    doc["_terms"] = ({} if args.reference_only else
                     {"mu": args.mu_terms, "nu": args.nu_terms, "b": args.b_terms})
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def cmd_experiment(args):
    cut = args.cut_point
    try:
        cut = float(cut)
    except ValueError:
        pass
    if args.kind == "clt":
        stat = args.statistic or ("log2_aut_uniform" if args.model == "uniform"
                                  else "log2_bst_weight")
        model = E._CLT_SETUP[E.CltKind(stat)][0]
        if model.value != args.model:
            raise ValueError(f"statistic {stat} belongs to the {model.value} model")
        if args.n < 4:
            raise ValueError("clt needs --n >= 4")
        obj = E.clt_sample(stat, args.n, args.trials, args.seed, args.workers)
    else:
        cfg = E.ExperimentConfig(model=args.model, n=args.n, trials=args.trials,
                                 seed=args.seed, epsilon=args.epsilon,
                                 cut_point_rule=cut, workers=args.workers)
        if args.kind == "counts":
            obj = E.run_count_experiment(cfg)
        else:
            if not E.admissible_sizes(cfg.n, cfg.epsilon, cfg.cut_point_a):
                raise ValueError(
                    f"no admissible k for n={cfg.n}, epsilon={cfg.epsilon}, "
                    f"cut point {cfg.cut_point_rule!r}; try a smaller --cut-point")
            obj = E.concentration_check(cfg)
    _emit(E.render(obj, args.format), args.out)


# parser


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog=PROG, description="Random binary trees and their minimal DAGs.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="sample random trees, one per line")
    g.add_argument("--model", choices=[m.value for m in ModelKind], required=True)
    g.add_argument("--n", type=_int_in(1, 2**31), required=True)
    g.add_argument("--seed", type=_seed, required=True)
    g.add_argument("--count", type=_int_in(1), default=1)
    g.add_argument("--format", choices=("text", "binary"), default="text")
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("compress", help="minimal DAG sizes or DAGs of input trees")
    c.add_argument("--input", required=True)
    c.add_argument("--input-format", choices=("text", "binary"), default="text")
    c.add_argument("--mode", choices=("ordered", "unordered", "both"), default="both")
    c.add_argument("--format", choices=("summary", "dag-json"), default="summary")
    c.set_defaults(func=cmd_compress)

    s = sub.add_parser("stats", help="exact counting sequences and expectations")
    ssub = s.add_subparsers(dest="what", required=True, parser_class=_Parser)
    se = ssub.add_parser("exact", help="CSV of exact values for 1 <= k <= n")
    se.add_argument("--n", type=_int_in(1, MAX_STATS_N), required=True)
    se.set_defaults(func=cmd_stats)

    k = sub.add_parser("constants", help="numerical constants as JSON")
    k.add_argument("--precision", type=_int_in(1, 17), default=12,
                   help="significant digits of printed reals (default 12)")
    k.add_argument("--mu-terms", type=_int_in(1, 10**9), default=10**7)
    k.add_argument("--nu-terms", type=_int_in(1, 10**6), default=10**4)
    k.add_argument("--b-terms", type=_int_in(20, 10**5), default=1000)
    k.add_argument("--reference-only", action="store_true",
                   help="skip the series and derive everything from the reference decimals")
    k.set_defaults(func=cmd_constants)

    e = sub.add_parser("experiment", help="Monte Carlo experiments")
    e.add_argument("--kind", choices=("counts", "concentration", "clt"), required=True)
    e.add_argument("--model", choices=[m.value for m in ModelKind], required=True)
    e.add_argument("--n", type=_int_in(1, 2**31), required=True,
                   help="tree size (for clt: the size k of each sampled tree)")
    e.add_argument("--trials", type=_int_in(0), required=True)
    e.add_argument("--seed", type=_seed, required=True)
    e.add_argument("--epsilon", type=float, default=1 / 6)
    e.add_argument("--cut-point", default="log4",
                   help="'log4', 'log_b' or a positive factor a with k >= a ln n")
    e.add_argument("--statistic", choices=[x.value for x in E.CltKind])
    e.add_argument("--workers", type=_int_in(1), default=1)
    e.add_argument("--out")
    e.add_argument("--format", choices=("csv", "json"), default="csv")
    e.set_defaults(func=cmd_experiment)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except UsageError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        args.func(args)
    except (UsageError, E.BudgetExceeded) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2
    except TreeParseError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2
    except (OSError, RuntimeError, MemoryError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
