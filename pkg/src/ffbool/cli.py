"""Command-line interface: ``ffbool <command> ...``.

Exit status is 0 on success, 1 when a verification suite fails and 2 on
usage or input errors.  Partitions are read and written as ``1,2|3,5``,
face maps as strings over ``l, r, c`` and rationals as ``p/q``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from itertools import product
from pathlib import Path

from .chi import ChiMap, enumerate_ibnc, is_ibnc, render_diagram
from .climit import CovMatrix, clt_scaling_report, demo_universe, gamma_c_moment, random_centered_table
from .cumulants import cumulant_table, ffb_convolve, missing_subwords, moments_from_cumulant_table
from .errors import FFBError
from .fock import fock_model
from .lattice import get_lattice
from .mobius import mobius_bruteforce
from .moments import TableMoments, format_rational, read_table, table_to_json, tabulate, word_str
from .partitions import DEFAULT_CAP, Partition
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _chi(args) -> ChiMap:
    if not args.chi:
        raise UsageError("--chi is required")
    text = args.chi.strip().lower()
    bad = sorted(set(text) - set("lrc"))
    if bad or not text:
        raise UsageError(f"invalid chi string {args.chi!r}: characters must be l, r or c")
    if len(text) > args.cap:
        raise UsageError(f"chi of length {len(text)} exceeds the cap {args.cap}; raise it with --cap")
    return ChiMap.parse(text)


def _partition(text: str, chi: ChiMap, flag: str) -> Partition:
    try:
        p = Partition.parse(text)
    except ValueError as exc:
        raise UsageError(f"{flag}: {exc}") from None
    if p.ground != chi.ground:
        raise UsageError(f"{flag}: partition {p} is not a partition of 1..{chi.n}")
    return p


def _emit(args, text: str):
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


# -- commands ----------------------------------------------------------------


def cmd_ibnc(args) -> int:
    chi = _chi(args)
    if args.action == "diagram":
        pi = _partition(args.partition, chi, "--partition") if args.partition else None
        text = render_diagram(chi, pi) + "\n"
        if pi is not None and not is_ibnc(pi, chi):
            text += f"note: {pi} is not in IBNC({chi})\n"
        _emit(args, text)
        return EXIT_OK
    elems = enumerate_ibnc(chi)
    if args.format == "json":
        doc = {"chi": str(chi), "count": len(elems)}
        if args.list:
            doc["partitions"] = [str(p) for p in elems]
        _emit(args, json.dumps(doc, indent=1) + "\n")
    else:
        lines = [f"count: {len(elems)}"] + ([str(p) for p in elems] if args.list else [])
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_mobius(args) -> int:
    chi = _chi(args)
    lat = get_lattice(chi)
    mu = mobius_bruteforce(lat)
    if args.src or args.dst:
        if not (args.src and args.dst):
            raise UsageError("--from and --to go together")
        s = _partition(args.src, chi, "--from")
        p = _partition(args.dst, chi, "--to")
        for q, flag in ((s, "--from"), (p, "--to")):
            if q not in lat:
                raise UsageError(f"{flag}: {q} is not in IBNC({chi})")
        if not lat.leq_matrix[lat.idx(s), lat.idx(p)]:
            raise UsageError(f"{s} is not <= {p} in IBNC({chi})")
        _emit(args, format_rational(mu(s, p)) + "\n")
        return EXIT_OK
    rows = [(str(s), str(p), format_rational(v)) for s, p, v in mu.items()]
    if args.format == "json":
        doc = {"chi": str(chi), "mobius": [{"from": a, "to": b, "value": v} for a, b, v in rows]}
        _emit(args, json.dumps(doc, indent=1) + "\n")
    else:
        _emit(args, _csv([("from", "to", "value"), *rows]))
    return EXIT_OK


def _load_tables(args, count: int):
    paths = args.input or []
    if len(paths) != count:
        raise UsageError(f"expected {count} --input file(s), got {len(paths)}")
    out = []
    for p in paths:
        try:
            out.append(read_table(p))
        except FileNotFoundError:
            raise UsageError(f"no such file: {p}") from None
        except (ValueError, KeyError, json.JSONDecodeError) as exc:
            raise UsageError(f"{p}: {exc}") from None
    return out


def cmd_transform(args) -> int:
    ((letters, values, key),) = _load_tables(args, 1)
    gaps = missing_subwords(values, values)
    if gaps:
        names = "; ".join(word_str(w) for w in gaps[:20])
        more = f" (and {len(gaps) - 20} more)" if len(gaps) > 20 else ""
        raise UsageError(f"table lacks {len(gaps)} required subword(s): {names}{more}")
    if args.direction == "to-cumulants":
        if key != "moments":
            raise UsageError("to-cumulants needs a moment table")
        phi = TableMoments(letters, values)
        _emit(args, table_to_json(letters, cumulant_table(phi, words=values), key="cumulants"))
    else:
        if key != "cumulants":
            raise UsageError("to-moments needs a cumulant table")
        mom = moments_from_cumulant_table(letters, values)
        _emit(args, table_to_json(letters, mom.values))
    return EXIT_OK


def cmd_convolve(args) -> int:
    (la, va, ka), (lb, vb, kb) = _load_tables(args, 2)
    if ka != "moments" or kb != "moments":
        raise UsageError("convolve needs two moment tables")
    if set(la) != set(lb):
        raise UsageError("the two tables use different letters")
    a, b = TableMoments(la, va), TableMoments(la, vb)
    max_n = args.max_n or min(a.max_len, b.max_len)
    out = ffb_convolve(a, b, max_n)
    _emit(args, table_to_json(la, out.values))
    return EXIT_OK


def cmd_fock(args) -> int:
    k = args.indices
    D = args.max_n or 4
    if args.action == "moments":
        phi = fock_model(k, D)
        table = tabulate(phi, D)
        if args.format == "csv":
            rows = [(" ".join(map(str, w)), format_rational(v)) for w, v in table.values.items()]
            _emit(args, _csv([("word", "value"), *rows]))
        else:
            _emit(args, table_to_json(table.letters, table.values))
        return EXIT_OK
    phi = fock_model(k, D)
    rows = [("operator", "row", "col", "value")]
    for letter in phi.letters:
        if args.op and str(letter) != args.op:
            continue
        for r, c, v in phi.ops[letter].triples():
            rows.append((str(letter), r, c, format_rational(v)))
    if args.op and len(rows) == 1:
        names = ", ".join(str(l) for l in phi.letters)
        raise UsageError(f"unknown operator {args.op!r}; available: {names}")
    _emit(args, _csv(rows))
    return EXIT_OK


def cmd_clt(args) -> int:
    cov = CovMatrix.read(args.input) if args.input else demo_universe()
    max_n = args.max_n or 4
    lines = ["covariance:"]
    for k, row in zip(cov.ids, cov.C):
        lines.append(f"  {k} ({cov.face(k).lower()}): " + " ".join(format_rational(x) for x in row))
    lines.append("moments of the limit law:")
    for n in (2, 4):
        if n > max_n:
            break
        for om in product(cov.ids, repeat=n):
            lines.append(f"  {''.join(om)}: {format_rational(gamma_c_moment(cov, om))}")
    base = random_centered_table(cov.letters(), max_n, args.seed)
    rep = clt_scaling_report(base, (1, 4, 16), max_n)
    lines.append("scaling of a random centered table:")
    lines.append(rep.table())
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_verify(args) -> int:
    if args.suite not in SUITES + ("all",):
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}, all")
    results = run_suite(args.suite, args.max_n, args.indices, args.seed)
    ok = all(r.ok for r in results)
    if args.format == "json":
        _emit(args, json.dumps({"ok": ok, "suites": [r.to_json() for r in results]}, indent=1) + "\n")
    else:
        lines = [l for r in results for l in r.lines()]
        lines.append("OK" if ok else "FAILED")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


# -- parser ------------------------------------------------------------------


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--chi", help="face map as a string over l, r, c")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--max-n", type=_positive, help="maximal word length / truncation degree")
    common.add_argument("--cap", type=_positive, default=DEFAULT_CAP, help="largest ground set to enumerate")
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="ffbool", description="Free-free-Boolean cumulants and partition lattices.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ibnc", parents=[common], help="enumerate IBNC(chi) or draw a diagram")
    s.add_argument("action", choices=("enumerate", "diagram"))
    s.add_argument("--list", action="store_true", help="print every partition")
    s.add_argument("--partition", help="partition to annotate the diagram with")
    s.set_defaults(func=cmd_ibnc)

    s = sub.add_parser("mobius", parents=[common], help="Mobius function of IBNC(chi)")
    s.add_argument("--from", dest="src")
    s.add_argument("--to", dest="dst")
    s.set_defaults(func=cmd_mobius)

    s = sub.add_parser("transform", parents=[common], help="moment <-> cumulant tables")
    s.add_argument("direction", choices=("to-cumulants", "to-moments"))
    s.add_argument("--input", "-i", action="append")
    s.set_defaults(func=cmd_transform)

    s = sub.add_parser("convolve", parents=[common], help="additive convolution of two moment tables")
    s.add_argument("--input", "-i", action="append")
    s.set_defaults(func=cmd_convolve)

    s = sub.add_parser("fock", parents=[common], help="Fock model moments or operator dump")
    s.add_argument("action", choices=("moments", "dump"))
    s.add_argument("--indices", type=_positive, default=2)
    s.add_argument("--op", help="dump only this operator, e.g. 'creation[1l]'")
    s.set_defaults(func=cmd_fock)

    s = sub.add_parser("clt", parents=[common], help="central limit law demo")
    s.add_argument("action", choices=("demo",))
    s.add_argument("--input", "-i", help="covariance JSON file")
    s.set_defaults(func=cmd_clt)

    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("suite", help=f"one of {', '.join(SUITES)}, all")
    s.add_argument("--indices", type=_positive, default=2)
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, FFBError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
