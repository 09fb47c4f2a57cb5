"""Command line front end: verify, dim, spanning, compare.

verify runs the named check suites on one instance (or sweeps every
lambda) and reports each claim with its expected and computed values;
dim prints a single closed-form dimension; spanning summarizes the
kernel families; compare tabulates the matched-size dimensions of the
related families.  Reports go to stdout or --out, as JSON, CSV or
plain text.  Exit status: 0 all claims pass, 1 some claim fails, 2
usage or internal error.
"""

import argparse
import csv
import io
import json
import sys

from . import formulas
from .linalg import span_of
from .primefield import validate_prime
from .spanning import build_S_sets, kernel_spanning_list
from .suites import SUITE_ORDER, Workspace, run_suites

FAMILY_CHOICES = ("SKO", "KO", "SHO", "HO", "W", "S", "H", "K")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skolab",
        description="exact verification of the odd contact family "
                    "and its distinguished simple quotient")
    sub = parser.add_subparsers(dest="command", required=True)

    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--p", type=int, default=5,
                        help="odd prime characteristic > 3 (default 5)")
    shared.add_argument("--n", type=int, default=3,
                        help="number of even lines, at least 3 (default 3)")
    shared.add_argument("--t", default=None, metavar="T1,..,TN",
                        help="divided power heights, one per line "
                             "(default all 1)")
    shared.add_argument("--lambda", dest="lam", default="2",
                        metavar="LAM", help="parameter residue mod p, or "
                        "'all' to sweep (verify only; default 2)")
    shared.add_argument("--seed", type=int, default=0,
                        help="seed for the randomized checks (default 0)")
    shared.add_argument("--output", choices=("json", "csv", "text"),
                        default=None, help="report format")
    shared.add_argument("--out", default=None, metavar="PATH",
                        help="write the report to PATH instead of stdout")

    pv = sub.add_parser("verify", parents=[shared],
                        help="run check suites and report each claim")
    pv.add_argument("--suite", action="append", default=None,
                    metavar="NAME", help="suite to run, repeatable or "
                    "comma separated; 'all' for every suite")
    pv.add_argument("--timings", action="store_true",
                    help="include per-suite millis (report is then not "
                         "byte-reproducible)")
    pv.add_argument("--parallel", action="store_true",
                    help="accepted for forward compatibility; suites "
                         "currently run sequentially")
    pv.set_defaults(fn=_cmd_verify)

    pd = sub.add_parser("dim", parents=[shared],
                        help="print one closed-form dimension")
    pd.add_argument("--family", choices=FAMILY_CHOICES, default="SKO",
                    help="family at the matched size (default SKO)")
    pd.set_defaults(fn=_cmd_dim)

    ps = sub.add_parser("spanning", parents=[shared],
                        help="summarize the kernel spanning families")
    ps.set_defaults(fn=_cmd_spanning)

    pc = sub.add_parser("compare", parents=[shared],
                        help="tabulate family dimensions at matched sizes")
    pc.set_defaults(fn=_cmd_compare)
    return parser


def _validated(parser: argparse.ArgumentParser, args, sweep: bool = False):
    """RunConfig invariants; argparse usage errors exit with status 2."""
    try:
        validate_prime(args.p)
    except (TypeError, ValueError):
        parser.error("p must be an odd prime > 3")
    if args.n < 3:
        parser.error("n must be at least 3")
    if args.t is None:
        t = (1,) * args.n
    else:
        try:
            t = tuple(int(x) for x in args.t.split(","))
        except ValueError:
            t = ()
        if len(t) != args.n or any(x < 1 for x in t):
            parser.error(f"t must be a comma list of {args.n} "
                         "positive integers")
    if args.seed < 0:
        parser.error("seed must be a nonnegative integer")
    if args.lam == "all":
        if not sweep:
            parser.error("--lambda all is only available with verify")
        lams = list(range(args.p))
    else:
        try:
            lam = int(args.lam)
        except ValueError:
            lam = -1
        if not 0 <= lam < args.p:
            parser.error(f"lambda must be a residue in [0, {args.p}) "
                         "or 'all'")
        lams = [lam]
    return t, lams


def _emit(text: str, out_path) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w") as fh:
            fh.write(text)


def _params(args, t, fmt) -> dict:
    return {"p": args.p, "n": args.n, "t": list(t),
            "lambda": args.lam if args.lam == "all" else int(args.lam),
            "seed": args.seed, "output": fmt}


def _suite_names(parser, raw):
    if raw is None:
        return list(SUITE_ORDER)
    names: list = []
    for chunk in raw:
        names.extend(x for x in chunk.split(",") if x)
    if "all" in names:
        return list(SUITE_ORDER)
    for name in names:
        if name not in SUITE_ORDER:
            parser.error(f"unknown suite {name!r}; choose from "
                         f"{', '.join(SUITE_ORDER)} or 'all'")
    return names


def _verify_csv(report: dict, timings: bool) -> str:
    buf = io.StringIO()
    cols = ["suite", "lambda", "anchor", "claim", "expected", "computed",
            "pass"]
    if timings:
        cols.append("millis")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for s in report["suites"]:
        for c in s["checks"]:
            row = [s["name"], s.get("lambda", ""), c["anchor"], c["claim"],
                   json.dumps(c["expected"]), json.dumps(c["computed"]),
                   c["pass"]]
            if timings:
                row.append(s.get("millis", ""))
            w.writerow(row)
    return buf.getvalue()


def _verify_text(report: dict) -> str:
    lines = []
    pr = report["params"]
    lines.append("p=%d n=%d t=%s lambda=%s seed=%d"
                 % (pr["p"], pr["n"], ",".join(map(str, pr["t"])),
                    pr["lambda"], pr["seed"]))
    total = failed = 0
    for s in report["suites"]:
        tag = s["name"]
        if "lambda" in s:
            tag += " lambda=%d" % s["lambda"]
        npass = sum(c["pass"] for c in s["checks"])
        lines.append("[%s] %d/%d" % (tag, npass, len(s["checks"])))
        for c in s["checks"]:
            total += 1
            if c["pass"]:
                lines.append("  ok   %s: %s" % (c["anchor"], c["claim"]))
            else:
                failed += 1
                lines.append("  FAIL %s: %s" % (c["anchor"], c["claim"]))
                lines.append("       expected %s"
                             % json.dumps(c["expected"]))
                lines.append("       computed %s"
                             % json.dumps(c["computed"]))
    lines.append("%d checks, %d failures" % (total, failed))
    return "\n".join(lines) + "\n"


def _cmd_verify(parser, args) -> int:
    t, lams = _validated(parser, args, sweep=True)
    names = _suite_names(parser, args.suite)
    fmt = args.output or "json"
    sweep = args.lam == "all"

    suites_out = []
    for lam in lams:
        ws = Workspace(args.p, args.n, t, lam)
        for rep in run_suites(ws, names, seed=args.seed,
                              timings=args.timings):
            if sweep:
                rep = {"name": rep["name"], "lambda": lam,
                       **{k: v for k, v in rep.items() if k != "name"}}
            suites_out.append(rep)

    report = {"params": _params(args, t, fmt), "suites": suites_out}
    report["params"]["suites"] = names
    if fmt == "json":
        _emit(json.dumps(report, indent=2) + "\n", args.out)
    elif fmt == "csv":
        _emit(_verify_csv(report, args.timings), args.out)
    else:
        _emit(_verify_text(report), args.out)
    ok = all(c["pass"] for s in suites_out for c in s["checks"])
    return 0 if ok else 1


def _cmd_dim(parser, args) -> int:
    t, lams = _validated(parser, args)
    rows = {r["family"]: r for r in
            formulas.comparison_rows(args.p, args.n, t, lams[0])}
    _emit("%d\n" % rows[args.family]["dim"], args.out)
    return 0


def _cmd_spanning(parser, args) -> int:
    t, lams = _validated(parser, args)
    ws = Workspace(args.p, args.n, t, lams[0])
    ctx = ws.ctx
    sets = build_S_sets(ctx)
    rank = span_of(kernel_spanning_list(ctx), ctx).dim
    nullity = ws.kernel.dim
    fams = {key: len(sets[key]) for key in ("S1", "S2", "S3", "S4", "S5")}
    report = {"params": _params(args, t, args.output or "json"),
              "families": fams, "unit": 1, "rank": rank,
              "nullity": nullity, "rank_equals_nullity": rank == nullity}

    fmt = args.output or "json"
    if fmt == "json":
        _emit(json.dumps(report, indent=2) + "\n", args.out)
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for key, val in list(fams.items()) + [
                ("unit", 1), ("rank", rank), ("nullity", nullity)]:
            w.writerow([key, val])
        _emit(buf.getvalue(), args.out)
    else:
        lines = ["%s %d" % (key, val) for key, val in fams.items()]
        lines += ["unit 1", "rank %d" % rank, "nullity %d" % nullity,
                  "rank == nullity: %s"
                  % ("yes" if rank == nullity else "NO")]
        _emit("\n".join(lines) + "\n", args.out)
    return 0 if rank == nullity else 1


def _cmd_compare(parser, args) -> int:
    t, lams = _validated(parser, args)
    rows = formulas.comparison_rows(args.p, args.n, t, lams[0])
    fmt = args.output or "csv"
    if fmt == "json":
        report = {"params": _params(args, t, fmt), "rows": rows}
        _emit(json.dumps(report, indent=2) + "\n", args.out)
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["family", "params", "dim", "parity"])
        for r in rows:
            w.writerow([r["family"], r["params"], r["dim"], r["parity"]])
        _emit(buf.getvalue(), args.out)
    else:
        wid = max(len(r["params"]) for r in rows)
        lines = ["%-4s %-*s %10s %s" % ("fam", wid, "params", "dim", "par")]
        lines += ["%-4s %-*s %10d %s" % (r["family"], wid, r["params"],
                                         r["dim"], r["parity"])
                  for r in rows]
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(parser, args)
    except SystemExit:
        raise
    except Exception as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
