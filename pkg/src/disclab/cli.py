"""disclab command-line interface.

Exit codes:
    0  success
    2  bad command-line usage
    3  sequence parse error
    4  duplicate terms (prefix cannot be discriminated)
    5  integer width overflow
    6  prime search exhausted
    7  verification failed
    8  precondition violated / construction not applicable
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import sys

from . import __version__
from .arith import prime_power_ceiling
from .core import Method, discriminator_table, failure_witness
from .errors import (
    DuplicateTerm,
    NotApplicable,
    ParseError,
    PreconditionViolated,
    SearchExhausted,
    WidthOverflow,
)
from .grammar import parse_sequence
from .primes import PrimeSearchSpec, counterexample_qp, find_digit_prime, split_qp
from .report import dumps, parse_line, render_line
from .scan import CSV_FIELDS, ScanConfig, run_scan
from .witness import (
    classify_p2_half,
    classify_p2_integer,
    lemma2_witness,
    necessary_p3,
    p2_half_counterexample,
    p2_lower_witness,
    qr_not_disc_check,
    qt_lower_witness,
    sufficient_p3,
    tr_lower_witness,
)

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_DUPLICATE = 0, 2, 3, 4
EXIT_OVERFLOW, EXIT_EXHAUSTED, EXIT_VERIFY, EXIT_PRECONDITION = 5, 6, 7, 8


class Fail(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _emit(args, text):
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(rows, fields):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: "" if row.get(k) is None else row.get(k) for k in fields})
    return buf.getvalue()


# ------------------------------------------------------------ compute


def cmd_compute(args):
    q = parse_sequence(args.seq)
    table = discriminator_table(q, args.n, Method(args.method))
    rows = []
    for n, d in table.entries:
        row = {"n": n, "d": d}
        if args.against:
            target = prime_power_ceiling(args.against, n)
            row.update(target=target, match=d == target)
        rows.append(row)
    if args.format == "json":
        _emit(args, dumps({"seq": str(q), "method": table.method.value, "against": args.against,
                           "entries": rows}))
    elif args.format == "csv":
        _emit(args, _csv(rows, ["n", "d", "target", "match"] if args.against else ["n", "d"]))
    else:
        lines = [f"# D(n) for {q}  ({table.method.value})"]
        for row in rows:
            line = f"{row['n']:>6} {row['d']:>8}"
            if args.against:
                line += f" {row['target']:>8} {'match' if row['match'] else 'mismatch'}"
            lines.append(line)
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


# ----------------------------------------------------------- classify


def _classification_dict(cls, label):
    return {
        "predicate": label,
        "verdict": str(cls),
        "conditions": [{"id": c.id, "holds": c.holds, "detail": c.detail} for c in cls.conditions],
        "derived": cls.derived,
        "note": cls.note,
    }


def cmd_classify(args):
    p = args.p
    if args.half:
        if args.a_odd is None or args.b_odd is None:
            raise Fail(EXIT_USAGE, "--half needs --a-odd and --b-odd")
        if p == 2:
            out = _classification_dict(classify_p2_half(args.a_odd, args.b_odd), "p2-half")
        else:
            out = _classification_dict(qr_not_disc_check(p, args.a_odd, args.b_odd), "odd-p-half")
    elif args.sufficient:
        if p != 3 or args.b is None or args.c is None:
            raise Fail(EXIT_USAGE, "--sufficient needs --p 3 --b B --c C")
        out = _classification_dict(sufficient_p3(args.b, args.c), "p3-sufficient")
    else:
        if args.alpha is None or args.beta is None:
            raise Fail(EXIT_USAGE, "need --alpha and --beta")
        if p == 2:
            out = _classification_dict(classify_p2_integer(args.alpha, args.beta), "p2-integer")
        elif p == 3:
            out = _classification_dict(necessary_p3(args.alpha, args.beta), "p3-necessary")
        else:
            split = split_qp(args.alpha, args.beta, p) if args.alpha % p == 0 and args.beta % p else None
            out = {"predicate": f"p{p}-integer", "verdict": "Violates",
                   "conditions": [], "derived": {},
                   "note": "no quadratic has this discriminator for p >= 5"
                   + (f"; c(p^k n^2 + b n) with (k, b, c) = {split}" if split else "")}
    if args.format == "json":
        _emit(args, dumps(out))
    else:
        lines = [f"{out['predicate']}: {out['verdict']}"]
        for c in out["conditions"]:
            lines.append(f"  [{'x' if c['holds'] else ' '}] ({c['id']}) {c['detail']}")
        if out["derived"]:
            lines.append("  derived: " + ", ".join(f"{k}={v}" for k, v in out["derived"].items()))
        if out["note"]:
            lines.append(f"  note: {out['note']}")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


# ------------------------------------------------------------ witness


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise Fail(EXIT_USAGE, f"--lemma {args.lemma} needs " + ", ".join("--" + m.replace("_", "-") for m in missing))
    return [getattr(args, n) for n in names]


def cmd_witness(args):
    lemma = args.lemma
    if lemma == "general2":
        p, alpha, beta = _need(args, "p", "alpha", "beta")
        from .core import QuadSeq
        obj = lemma2_witness(p, QuadSeq.from_coeffs(alpha, beta), args.ell)
    elif lemma == "p2lower":
        t, b, k, m = _need(args, "t", "b", "k", "m")
        obj = p2_lower_witness(t, b, k, m)
    elif lemma == "trlower":
        k, m = _need(args, "k", "m")
        obj = tr_lower_witness(k, m)
    elif lemma == "qtlower":
        b, c, k, m = _need(args, "b", "c", "k", "m")
        obj = qt_lower_witness(b, c, k, m)
    elif lemma == "notqp":
        p, k, b, c = _need(args, "p", "k", "b", "c")
        obj = counterexample_qp(p, k, b, c, half=args.half)
    elif lemma == "p2half":
        a, b = _need(args, "a_odd", "b_odd")
        obj = p2_half_counterexample(a, b)
    elif lemma == "qrnotdisc":
        p, a, b = _need(args, "p", "a_odd", "b_odd")
        cls, obj = qr_not_disc_check(p, a, b, materialize=True)
        if obj is None:
            raise Fail(EXIT_PRECONDITION, f"undecided: {cls.note}")
    elif lemma == "failure":
        seq, n, m = _need(args, "seq", "n", "m")
        obj = failure_witness(parse_sequence(seq), n, m)
        if obj is None:
            raise Fail(EXIT_PRECONDITION, f"{m} discriminates the first {n} terms")
    else:  # argparse restricts choices
        raise Fail(EXIT_USAGE, f"unknown lemma {lemma}")
    line = render_line(obj)
    if args.format == "json":
        _emit(args, dumps({"lemma": lemma, "line": line, "verified": obj.holds()}))
    else:
        _emit(args, line + "\n")
    return EXIT_OK


def cmd_verify(args):
    if args.line:
        lines = list(args.line)
    else:
        fh = open(args.file) if args.file and args.file != "-" else sys.stdin
        with fh:
            lines = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
    failures = 0
    out = []
    for line in lines:
        ok = parse_line(line).holds()
        failures += not ok
        out.append(f"{'ok  ' if ok else 'FAIL'} {line}")
    _emit(args, "\n".join(out) + "\n")
    return EXIT_OK if failures == 0 else EXIT_VERIFY


# -------------------------------------------------------- scan & co.


def _emit_report(args, report):
    if args.format == "json":
        _emit(args, dumps(report.to_dict()))
    elif args.format == "csv":
        _emit(args, _csv(report.results, CSV_FIELDS))
    else:
        s = report.summary
        lines = [f"# {report.config.describe()}",
                 "cells={cells} evaluated={evaluated} skipped={skipped} agree={agree} "
                 "disagree={disagree} diverged={diverged} matched={matched}".format(**s)]
        for r in report.results:
            if args.verbose or (r["status"] == "ok" and not r["agree"]):
                if r["status"] != "ok":
                    lines.append(f"  ({r['x']}, {r['y']}) skipped: {r['reason']}")
                    continue
                div = r["first_divergence"]
                lines.append(f"  ({r['x']}, {r['y']}) {r['seq']}: {r['classifier']}, oracle {r['oracle']}"
                             + (f" at n={div} (D={r['d']})" if div else "")
                             + ("" if r["agree"] else "  <-- DISAGREE"))
        for f in report.findings:
            lines.append(f"finding {f['kind']} at {tuple(f['cell'])}: {f['detail']}")
        _emit(args, "\n".join(lines) + "\n")


def _cache_path(args):
    return args.cache or os.environ.get("DISCLAB_CACHE") or None


def cmd_scan(args):
    family = args.family
    p = args.p
    if family is None:
        family = {2: "p2-integer", 3: "p3-necessary"}.get(p, "prime")
    box = (-args.box, args.box) if args.box is not None else None
    x, y = args.x or box, args.y or box
    if x is None or y is None:
        raise Fail(EXIT_USAGE, "give --box R or both --x and --y")
    cfg = ScanConfig(family, p, x[0], x[1], y[0], y[1], args.horizon)
    report = run_scan(cfg, jobs=args.jobs, cache_path=_cache_path(args))
    _emit_report(args, report)
    return EXIT_OK


def cmd_conjecture(args):
    cfg = ScanConfig("conjecture", 3, -args.b_max, args.b_max, -args.c_max, args.c_max, args.horizon)
    report = run_scan(cfg, jobs=args.jobs, cache_path=_cache_path(args))
    _emit_report(args, report)
    return EXIT_OK


def cmd_prime_search(args):
    spec = PrimeSearchSpec(base=args.base, residue=args.residue % args.base, min_value=args.min_value,
                           leading_digit=args.leading_digit, max_digits=args.max_digits)
    r, u = find_digit_prime(spec)
    if args.format == "json":
        _emit(args, dumps({"base": spec.base, "residue": spec.residue, "leading_digit": spec.leading_digit,
                           "min_value": spec.min_value, "r": r, "u": u}))
    else:
        _emit(args, f"r={r} u={u}\n")
    return EXIT_OK


# ------------------------------------------------------------- parser


def _pair(text):
    parts = text.replace(",", " ").split()
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected LO HI")
    return int(parts[0]), int(parts[1])


def build_parser():
    parser = argparse.ArgumentParser(prog="disclab", description="Discriminators of quadratic sequences")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, formats=("text", "csv", "json")):
        sp.add_argument("--format", choices=formats, default="text")
        sp.add_argument("--out", metavar="PATH", help="write output here instead of stdout")

    sp = sub.add_parser("compute", help="tabulate D(n) for n = 1..N")
    sp.add_argument("--seq", required=True, help='e.g. "3n^2+7n" or "(1/2)n^2+(1/2)n"')
    sp.add_argument("--n", type=int, default=16)
    sp.add_argument("--against", type=int, metavar="P", help="compare with P^ceil(log_P n)")
    sp.add_argument("--method", choices=[m.value for m in Method], default="incremental")
    common(sp)
    sp.set_defaults(func=cmd_compute)

    sp = sub.add_parser("classify", help="evaluate coefficient conditions")
    sp.add_argument("--p", type=int, required=True)
    for name in ("alpha", "beta", "b", "c", "a-odd", "b-odd"):
        sp.add_argument(f"--{name}", type=int)
    sp.add_argument("--half", action="store_true", help="odd (half-integer) coefficients a', b'")
    sp.add_argument("--sufficient", action="store_true", help="p = 3 sufficient conditions on (b, c)")
    common(sp, ("text", "json"))
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("witness", help="run a constructive lemma and print its witness line")
    sp.add_argument("--lemma", required=True,
                    choices=["general2", "p2lower", "trlower", "qtlower", "notqp", "p2half", "qrnotdisc", "failure"])
    for name in ("p", "k", "m", "t", "b", "c", "alpha", "beta", "a-odd", "b-odd", "n"):
        sp.add_argument(f"--{name}", type=int)
    sp.add_argument("--ell", type=int, default=2)
    sp.add_argument("--seq")
    sp.add_argument("--half", action="store_true")
    common(sp, ("text", "json"))
    sp.set_defaults(func=cmd_witness)

    sp = sub.add_parser("verify", help="re-check witness lines")
    sp.add_argument("--line", action="append", help="a witness line (repeatable)")
    sp.add_argument("--file", help="file of witness lines, '-' for stdin")
    common(sp, ("text",))
    sp.set_defaults(func=cmd_verify)

    def scan_common(sp):
        sp.add_argument("--horizon", type=int, default=64)
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--cache", metavar="PATH", help="resume file (default: $DISCLAB_CACHE)")
        sp.add_argument("--verbose", action="store_true", help="list every cell in text output")
        common(sp)

    sp = sub.add_parser("scan", help="classifier vs oracle over a coefficient box")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--family", choices=["p2-integer", "p2-half", "p3-sufficient", "p3-necessary", "prime"])
    sp.add_argument("--box", type=int, metavar="R", help="both coefficients in [-R, R]")
    sp.add_argument("--x", type=_pair, metavar="LO,HI", help="first coefficient range (write --x=-5,5)")
    sp.add_argument("--y", type=_pair, metavar="LO,HI", help="second coefficient range")
    scan_common(sp)
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("conjecture", help="search (3c/2)n^2 + (bc/2)n for divergence from 3^ceil(log_3 n)")
    sp.add_argument("--b-max", type=int, default=9)
    sp.add_argument("--c-max", type=int, default=9)
    scan_common(sp)
    sp.set_defaults(func=cmd_conjecture, horizon=729)

    sp = sub.add_parser("prime-search", help="least prime with fixed leading digit and residue")
    sp.add_argument("--base", type=int, required=True)
    sp.add_argument("--residue", type=int, required=True)
    sp.add_argument("--min-value", type=int, default=1)
    sp.add_argument("--leading-digit", type=int, default=-1, help="default: base - 1")
    sp.add_argument("--max-digits", type=int, default=8)
    common(sp, ("text", "json"))
    sp.set_defaults(func=cmd_prime_search)
    return parser


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="disclab: %(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Fail as exc:
        print(f"disclab: {exc}", file=sys.stderr)
        return exc.code
    except ParseError as exc:
        print(f"disclab: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DuplicateTerm as exc:
        print(f"disclab: duplicate terms: {exc}", file=sys.stderr)
        return EXIT_DUPLICATE
    except WidthOverflow as exc:
        print(f"disclab: overflow: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except SearchExhausted as exc:
        print(f"disclab: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except (PreconditionViolated, NotApplicable, ValueError) as exc:
        print(f"disclab: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
