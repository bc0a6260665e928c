"""Command line front-end.

Exit codes: 0 success, 1 verification or soundness failure, 2 input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from . import measures as M
from .constructions import (
    CUBE_BUDGET,
    DOMAIN_BUDGET,
    compose_or,
    gen_all_total,
    gen_fpp,
    gen_gth,
    gen_or,
    gen_osp,
    gen_random_partial,
)
from .core import parse_function, serialize_archive, serialize_function, word_to_str
from .errors import AdvboundError, NonBooleanAlphabet
from .verify import SUITES, run_suite
from .witnesses import (
    DistanceScheme,
    DistributionFamily,
    Rank1Witness,
    RelationalWitness,
    WeightScheme,
    as_rank1,
    eval_distance_scheme,
    eval_mm_witness,
    eval_rank1,
    eval_relational,
    eval_weighted,
    load_witness,
)

FAMILIES = ("gth", "osp", "fpp", "fpp-or", "or", "random", "all-total")


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"family {args.family!r} needs --{name}")


def _warn_budget(args, default_domain=DOMAIN_BUDGET, default_cube=CUBE_BUDGET):
    if args.max_domain != default_domain or args.max_cube != default_cube:
        print("warning: domain budget overridden; computations may be slow", file=sys.stderr)


def cmd_gen(args) -> int:
    _warn_budget(args)
    fam = args.family
    if fam in ("gth", "osp", "or"):
        _need(args, "n")
        text = serialize_function({"gth": gen_gth, "osp": gen_osp, "or": gen_or}[fam](args.n))
    elif fam == "fpp":
        _need(args, "t")
        text = serialize_function(gen_fpp(args.t))
    elif fam == "fpp-or":
        _need(args, "t", "k")
        text = serialize_function(compose_or(gen_fpp(args.t), args.k, budget=args.max_domain))
    elif fam == "random":
        _need(args, "n", "g", "h", "seed")
        fr = args.fraction if args.fraction is not None else Fraction(1)
        text = serialize_function(gen_random_partial(args.n, args.g, args.h, fr, args.seed, budget=args.max_cube))
    else:
        _need(args, "n", "g", "h")
        text = serialize_archive(gen_all_total(args.n, args.g, args.h, budget=args.max_cube))
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _load_function(path: str, max_domain: int):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    f = parse_function(text)
    if len(f) > max_domain:
        raise UsageError(f"|S| = {len(f)} exceeds the domain budget {max_domain} (see --max-domain)")
    return f


def cmd_compute(args) -> int:
    _warn_budget(args)
    f = _load_function(args.function, args.max_domain)
    names = [m.strip() for m in args.measures.split(",") if m.strip()]
    if args.side is not None and args.side not in (0, 1):
        raise UsageError("--side must be 0 or 1")
    if "ca1" in names and f.g != 2:
        raise NonBooleanAlphabet("ca1 needs Boolean inputs (g = 2)")
    fid = Path(args.function).name
    report = M.compute_report(f, names, side=args.side, function_id=fid)
    if args.json:
        doc = {
            "function": report.function,
            "n": report.n,
            "measures": {k: str(v) for k, v in report.values.items()},
            "argmax": {k: word_to_str(w) for k, w in report.argmax.items()},
        }
        if report.side is not None:
            doc["side"] = report.side
        print(json.dumps(doc))
    elif args.csv:
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(["function", "n", "side", "measure", "value", "argmax"])
        for k, v in report.values.items():
            arg = report.argmax.get(k)
            out.writerow([report.function, report.n, "" if report.side is None else report.side,
                          k, str(v), "" if arg is None else word_to_str(arg)])
        sys.stdout.write(buf.getvalue())
    else:
        for k, v in report.values.items():
            arg = report.argmax.get(k)
            suffix = f"  at {word_to_str(arg)}" if arg is not None else ""
            print(f"{k}{'' if report.side is None else '^' + str(report.side)} = {v}{suffix}")
    return 0


def cmd_witness(args) -> int:
    f = _load_function(args.function, args.max_domain)
    try:
        text = Path(args.witness).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {args.witness}: {exc.strerror}") from None
    w = load_witness(text, f.g)
    sound = True
    if isinstance(w, RelationalWitness):
        value = eval_relational(f, w)
        print(f"relational: {value}")
        r1 = as_rank1(f, w) if f.g == 2 else None
        if r1 is not None:
            exact = M.ca1(f)
            sound = value <= exact
            print(f"soundness: {value} <= ca1 = {exact} (relation has rank 1): {'ok' if sound else 'VIOLATED'}")
        else:
            print("soundness: value <= CA (not directly computed)")
    elif isinstance(w, WeightScheme):
        value = eval_weighted(f, w)
        rel = eval_relational(f, w.w)
        sound = value <= rel
        print(f"weighted: {value}")
        print(f"soundness: {value} <= relational value of w = {rel}: {'ok' if sound else 'VIOLATED'}")
        print("note: value <= WA = CA (not directly computed)")
    elif isinstance(w, DistributionFamily):
        value = eval_mm_witness(f, w)
        print(f"mm: {'infinite' if value == math.inf else value}")
        exact = M.mm(f)
        sound = value >= exact
        print(f"soundness: value >= mm = {exact}: {'ok' if sound else 'VIOLATED'}")
    elif isinstance(w, Rank1Witness):
        value = eval_rank1(f, w)
        print(f"rank1: {value}")
        if f.g == 2:
            exact = M.ca1(f)
            sound = value <= exact
            print(f"soundness: {value} <= ca1 = {exact}: {'ok' if sound else 'VIOLATED'}")
        else:
            print("soundness: value <= ca1 (not computed for non-Boolean inputs)")
    else:
        assert isinstance(w, DistanceScheme)
        res = eval_distance_scheme(f, w)
        print(f"distance: W = {res.W}")
        print(f"bound: {res.bound}")
        print("note: bound is a KA lower bound up to a constant factor; KA is not computed")
    return 0 if sound else 1


def cmd_verify(args) -> int:
    result = run_suite(args.suite, n=args.n, g=args.g, h=args.h, samples=args.samples,
                       seed=args.seed, fraction=args.fraction, jobs=args.jobs)
    print(f"{'suite':<20} {'cases':>7} {'failures':>9}")
    print(f"{result.suite:<20} {result.cases:>7} {len(result.failures):>9}")
    for fl in result.failures:
        print(f"FAIL {fl.function}: {fl.prop}: {fl.lhs} vs {fl.rhs}")
    return 0 if result.ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="advbound", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"advbound {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def budget(sp):
        sp.add_argument("--max-domain", type=int, default=DOMAIN_BUDGET, help="largest |S| accepted")
        sp.add_argument("--max-cube", type=int, default=CUBE_BUDGET, help="largest g^n accepted")

    g = sub.add_parser("gen", help="write a generated function file")
    g.add_argument("family", choices=FAMILIES)
    g.add_argument("--n", type=int)
    g.add_argument("--t", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("--g", type=int)
    g.add_argument("--h", type=int)
    g.add_argument("--fraction", type=_fraction)
    g.add_argument("--seed", type=int)
    g.add_argument("-o", "--output")
    budget(g)
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("compute", help="compute measures of a function file")
    c.add_argument("function")
    c.add_argument("--measures", default="bs,cert,fbs,fc,mm")
    c.add_argument("--side", type=int)
    fmt = c.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    budget(c)
    c.set_defaults(func=cmd_compute)

    w = sub.add_parser("witness", help="evaluate a witness file against a function file")
    w.add_argument("function")
    w.add_argument("witness")
    budget(w)
    w.set_defaults(func=cmd_witness, max_cube=CUBE_BUDGET)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--n", type=int, default=3)
    v.add_argument("--g", type=int, default=2)
    v.add_argument("--h", type=int, default=2)
    v.add_argument("--samples", type=int, default=100)
    v.add_argument("--seed", type=int, default=1)
    v.add_argument("--fraction", type=_fraction)
    v.add_argument("--jobs", type=int, default=1)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (AdvboundError, UsageError) as exc:
        print(f"advbound: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
