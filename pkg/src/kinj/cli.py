"""Command-line front end.

Exit codes: 0 success, 1 domain or input error, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import random
import re
import sys

from . import exactlin as el
from .anmod import ComplexError, InjComplex, Unstable, hom_k_dim, identity_map
from .classify import (CanonLabel, classify, classify_complex, labels_to_json, pushdown,
                       pushdown_labels, realize_label, realize_labels)
from .quiver import BoundQuiver
from .rep import Rep, RepError, decompose_intervals
from .sampling import random_complex
from .ziegler import (bounded_probe_grid, cover_analysis, endofinite_certificate, format_table,
                      hom_table, hom_table_json)


class InputError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _load(path: str):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno} "
                         f"(char {exc.pos}): {exc.msg}") from exc


def _load_complex(path: str) -> InjComplex:
    data = _load(path)
    try:
        return InjComplex.from_json(data)
    except (KeyError, TypeError) as exc:
        raise InputError(f"{path}: not a complex description ({exc})") from exc


def _range(text: str) -> tuple:
    try:
        lo, hi = (int(p) for p in text.split(":"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from exc
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


# ---------------------------------------------------------------------------
# subcommands

def cmd_classify(args, out):
    x = _load_complex(args.complex)
    labels = classify_complex(x)
    if args.pretty:
        if not labels:
            out.write("(no indecomposable summands)\n")
        for lab, m in sorted(labels.items()):
            out.write(f"I[{lab}]  x{m}\n")
        return
    out.write(_dump({"labels": labels_to_json(labels)}) + "\n")


def cmd_hom(args, out):
    x, y = _load_complex(args.x), _load_complex(args.y)
    if x.n != y.n:
        raise InputError("complexes live over different algebras")
    res = hom_k_dim(x, y)
    if args.pretty:
        if res.stable:
            out.write(f"dim Hom_K = {res.dim} (stable at padding {res.stable_at})\n")
        else:
            out.write(f"unstable: {list(res.history)}\n")
    else:
        out.write(_dump(res.to_json()) + "\n")
    if not res.stable:
        return 1


def cmd_decompose_rep(args, out):
    data = _load(args.rep)
    try:
        quiver = BoundQuiver.from_json(data["quiver"])
        rep = Rep.from_json(quiver, data)
    except (KeyError, TypeError) as exc:
        raise InputError(f"{args.rep}: not a representation description ({exc})") from exc
    counts = decompose_intervals(rep)
    items = [iv.to_json(m) for iv, m in sorted(counts.items())]
    for item, (iv, _) in zip(items, sorted(counts.items())):
        item["component"] = iv.component
    if args.pretty:
        for it in items:
            out.write(f"[{it['a']}, {it['b']}] on component {it['component']}  x{it['mult']}\n")
        return
    out.write(_dump({"intervals": items}) + "\n")


def cmd_realize(args, out):
    label = CanonLabel.parse(args.label, args.n)
    x = realize_label(label, args.window)
    out.write(_dump(x.to_json()) + "\n")


def _labels_arg(texts, n):
    return [CanonLabel.parse(t, n) for t in texts]


def cmd_ziegler(args, out):
    n = args.n
    if args.zcmd == "table":
        labels = _labels_arg(args.labels, n)
        table = hom_table(labels)
        if args.pretty:
            out.write(format_table(labels, table) + "\n")
        else:
            out.write(_dump(hom_table_json(labels, table)) + "\n")
        return 0 if all(c.stable for row in table for c in row) else 1
    if args.zcmd == "endofinite":
        label = CanonLabel.parse(args.label, n)
        probes = bounded_probe_grid(n, *args.probes)
        cert = endofinite_certificate(label, probes)
        if args.pretty:
            out.write(f"{label}: {'finite' if cert.ok else 'FAILED'}\n")
            for p, r in cert.entries:
                out.write(f"  Hom_K({p}, E) = {r.dim if r.stable else '?'}\n")
        else:
            out.write(_dump(cert.to_json()) + "\n")
        return 0 if cert.ok else 1
    if args.zcmd == "cover":
        pool = bounded_probe_grid(n, *args.pool)
        opens = [CanonLabel(g, float("inf"), j, n) for g in range(args.opens[0], args.opens[1] + 1)
                 for j in range(1, n + 1)]
        report = cover_analysis(opens, pool)
        if args.pretty:
            out.write(f"pool covered: {report['covered']}\n")
            out.write(f"no finite subcover: {report['no_finite_subcover']}\n")
            for item in report["maximal_proper_subfamilies"]:
                out.write(f"  without {item['dropped']}: {item['escaping_point']} escapes\n")
        else:
            out.write(_dump(report) + "\n")
        return 0


def selftest(seed: int, cases: int) -> dict:
    rng = random.Random(seed)
    failures = []
    for case in range(cases):
        n = rng.choice([1, 2, 3, 4])
        x = random_complex(rng, n)
        problems = []
        res = classify(x)
        if classify_complex(realize_labels(res.labels, n, (x.lo, x.hi))) != res.labels:
            problems.append("realize/classify round trip")
        if not all(d.is_radical() for d in res.reduced.diff.values()):
            problems.append("stripped differential not radical")
        f, g = res.to_realized, res.from_realized
        if not (f.is_chain_map() and g.is_chain_map()):
            problems.append("witness not a chain map")
        elif not ((g.compose(f) - identity_map(x, x.lo, x.hi)).is_null_homotopic()
                  and (f.compose(g) - identity_map(res.realized, x.lo, x.hi)).is_null_homotopic()):
            problems.append("witness not a homotopy equivalence")
        if n >= 2 and classify_complex(pushdown(x)) != pushdown_labels(res.labels):
            problems.append("push-down mismatch")
        if problems:
            failures.append({"case": case, "n": n, "problems": problems, "complex": x.to_json()})
    return {"seed": seed, "cases": cases, "failures": len(failures), "failed": failures}


def cmd_selftest(args, out):
    report = selftest(args.seed, args.cases)
    if args.pretty:
        out.write(f"seed {report['seed']}: {report['cases']} cases, {report['failures']} failures\n")
    else:
        out.write(_dump(report) + "\n")
    return 0 if report["failures"] == 0 else 1


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default=argparse.SUPPRESS, help="rational (default) or fp:<p>")
    common.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS, help="human-readable output")

    p = argparse.ArgumentParser(prog="kinj", parents=[common],
                                description="Complexes of injectives over the cyclic Nakayama algebras A_n.")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("classify", parents=[common], help="decompose a complex into indecomposables")
    s.add_argument("complex")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("hom", parents=[common], help="stabilized dim Hom_K(X, Y)")
    s.add_argument("x")
    s.add_argument("y")
    s.set_defaults(func=cmd_hom)

    s = sub.add_parser("decompose-rep", parents=[common], help="interval decomposition of a path representation")
    s.add_argument("rep")
    s.set_defaults(func=cmd_decompose_rep)

    s = sub.add_parser("realize", parents=[common], help="complex of a label start,end,anchor")
    s.add_argument("label")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--window", type=_range, default=None)
    s.set_defaults(func=cmd_realize)

    z = sub.add_parser("ziegler", parents=[common], help="Hom tables, endofiniteness, open covers")
    zs = z.add_subparsers(dest="zcmd", required=True)
    t = zs.add_parser("table", parents=[common])
    t.add_argument("labels", nargs="+")
    t.add_argument("--n", type=int, default=1)
    e = zs.add_parser("endofinite", parents=[common])
    e.add_argument("label")
    e.add_argument("--n", type=int, default=1)
    e.add_argument("--probes", type=_range, default=(-2, 2), help="support range of the bounded probes")
    c = zs.add_parser("cover", parents=[common])
    c.add_argument("--n", type=int, default=1)
    c.add_argument("--pool", type=_range, default=(-5, 5), help="support range of the bounded pool")
    c.add_argument("--opens", type=_range, default=(-5, 5), help="range of generators g of (g,+inf)")
    z.set_defaults(func=cmd_ziegler)

    s = sub.add_parser("selftest", parents=[common], help="seeded random consistency checks")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--cases", type=int, default=100)
    s.set_defaults(func=cmd_selftest)
    return p


_NEGATIVE_VALUE = re.compile(r"^-(inf|\d+)[,:]")


def _protect(token: str) -> str:
    # labels like -inf,+inf,1 and ranges like -3:3 are values, not options
    return " " + token if _NEGATIVE_VALUE.match(token) else token


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args([_protect(a) for a in argv])
    except SystemExit as exc:
        return int(exc.code or 0)
    args.pretty = bool(getattr(args, "pretty", False))
    args.field = getattr(args, "field", None)
    try:
        with el.use_field(args.field or "rational"):
            code = args.func(args, out)
    except (InputError, ComplexError, RepError, Unstable, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return 1
    return int(code or 0)


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
