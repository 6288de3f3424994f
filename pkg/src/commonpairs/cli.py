"""``commonpairs`` command line.

Exit status: 0 on success, 1 on a domain error (JSON description on stderr),
2 on a usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import certificate as cert_mod
from .errors import CommonPairsError, ParseError
from .expansion import (
    DEFAULT_DELTAS,
    DEFAULT_K4_DELTAS,
    DEFAULT_TENSOR_K,
    ColourSystem,
    candidate_p,
    commonality_gap,
    girth_witness,
    half_identity_witness,
    k4_witness,
    multicolour_girth_witness,
)
from .flags import gluing_table
from .graphs import enumerate_classes, parse_graph
from .kernels import density, half_identity, kernel_B, kernel_K, kernel_from_json, parse_rational

BUILTIN_KERNELS = {"B": kernel_B, "K": kernel_K, "W1": half_identity}


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _graph(text: str):
    try:
        return parse_graph(json.loads(text) if text.lstrip().startswith("{") else text)
    except (CommonPairsError, json.JSONDecodeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _read_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CommonPairsError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON ({exc.msg})", f"{path}:{exc.lineno}") from None


def _kernel(arg: str):
    if arg in BUILTIN_KERNELS:
        return BUILTIN_KERNELS[arg]()
    return kernel_from_json(_read_json(arg))


def _cert_path(arg: str) -> Path:
    """A path as given, else a certificate of that name shipped with the package."""
    path = Path(arg)
    if path.exists():
        return path
    packaged = cert_mod.data_path(path.name)
    if packaged.exists():
        return packaged
    raise CommonPairsError(f"no such certificate file: {arg}")


def _emit(args, payload, table_rows=None, text=None):
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    elif text is not None:
        print(text)
    elif table_rows is not None:
        widths = [max(len(str(r[k])) for r in table_rows) for k in range(len(table_rows[0]))]
        for r in table_rows:
            print("  ".join(str(x).ljust(w) for x, w in zip(r, widths)).rstrip())
    else:
        for key, value in payload.items():
            print(f"{key}: {value}")


# -- commands -----------------------------------------------------------------

def cmd_enumerate(args):
    table = enumerate_classes(args.n)
    rows = [{"index": k + 1, "graph": str(g), "edges": g.to_json()["edges"], "aut": aut}
            for k, (g, aut) in enumerate(table)]
    header = [("index", "graph", "aut")]
    _emit(args, {"n": args.n, "count": len(rows), "classes": rows},
          header + [(r["index"], r["graph"], r["aut"]) for r in rows])


def cmd_density(args):
    value = density(args.graph, _kernel(args.kernel))
    _emit(args, {"graph": str(args.graph), "density": str(value)})


def system_from_json(obj) -> ColourSystem:
    if not isinstance(obj, dict) or not isinstance(obj.get("colours"), list):
        raise ParseError("expected an object with a 'colours' list", "spec")
    entries = []
    for k, ent in enumerate(obj["colours"]):
        where = f"colours[{k}]"
        try:
            entries.append((parse_graph(ent["graph"]), parse_rational(ent["p"], f"{where}.p"),
                            kernel_from_json(ent["kernel"])))
        except (KeyError, TypeError) as exc:
            raise ParseError(f"missing or malformed field {exc}", where) from None
    return ColourSystem.build(entries)


def cmd_gap(args):
    gap = commonality_gap(system_from_json(_read_json(args.spec)))
    _emit(args, {"gap": str(gap), "verdict": "negative" if gap < 0 else "non-negative"})


def _witness_payload(args, report):
    payload = report.to_json()
    rows = [("delta", "k", "value")] + [(str(d), "-" if k is None else k, str(v))
                                        for d, k, v in report.sweep]
    text = "\n".join([
        f"verdict: {report.verdict}",
        f"value: {report.value}",
        f"delta: {report.delta}" + ("" if report.k is None else f"  k: {report.k}"),
        "tallies: " + ", ".join(f"{k}={v}" for k, v in report.tallies.items()),
    ])
    if args.sweep:
        payload["sweep"] = [{"delta": str(d), "k": k, "value": str(v)} for d, k, v in report.sweep]
        text += "\n" + "\n".join("  ".join(str(x) for x in r) for r in rows)
    _emit(args, payload, text=text)


def cmd_witness_girth(args):
    deltas = args.deltas or DEFAULT_DELTAS
    _witness_payload(args, girth_witness(args.h1, args.h2, args.p, deltas))


def cmd_witness_k4(args):
    report = k4_witness(args.h1, args.h2, args.p, args.deltas or DEFAULT_K4_DELTAS,
                        args.ks or DEFAULT_TENSOR_K)
    _witness_payload(args, report)


def cmd_witness_multicolour(args):
    if len(args.graphs) != 3 or len(args.ps) != 3:
        raise CommonPairsError("multicolour witnesses need exactly three graphs and three probabilities")
    report = multicolour_girth_witness(*args.graphs, tuple(args.ps), args.deltas or DEFAULT_DELTAS)
    _witness_payload(args, report)


def cmd_witness_c4c5(args):
    res = half_identity_witness(args.p)
    payload = {
        "p": str(res["p"]),
        "gap": str(res["gap"]),
        "verdict": res["verdict"],
        "polynomial": str(res["polynomial"]),
        "polynomial_sign": res["polynomial_sign"],
    }
    sign = {1: "positive", 0: "zero", -1: "negative"}[res["polynomial_sign"]]
    text = (f"gap: {res['gap']} ({res['verdict']})\n"
            f"40p^4 + 32(1-p)p^3 - 5 = {res['polynomial']} ({sign})")
    _emit(args, payload, text=text)


def cmd_candidate_p(args):
    res = candidate_p(args.h1, args.h2)
    if res is None:
        _emit(args, {"candidate": None}, text="no candidate (girths differ)")
        return
    payload = {
        "k": res.k,
        "alpha_power": str(res.alpha_power),
        "p_float": res.p_float,
        "p_exact": None if res.p_exact is None else str(res.p_exact),
    }
    _emit(args, payload)


def cmd_flags_table(args):
    entries = gluing_table().to_json()
    rows = [("i", "a", "b", "graph", "coefficient")] + [
        (e["i"], e["a"], e["b"], e["graph"], e["coefficient"]) for e in entries]
    _emit(args, {"entries": entries}, rows)


def cmd_cert_verify(args):
    cert = cert_mod.load_certificate(_cert_path(args.file))
    report = cert_mod.verify(cert)
    text = f"{report.verdict}, {report.equality_count}/{len(report.slacks)} equalities"
    text += f"\nmin slack: {report.min_slack}"
    if report.reason:
        text += f"\nreason: {report.reason}"
    _emit(args, report.to_json(), text=text)
    return 0 if report.certified or not args.strict else 1


def cmd_cert_search(args):
    fc = cert_mod.search(args.h1, args.h2, args.p, args.iters, args.seed)
    payload = fc.to_json()
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=1) + "\n")
    target = float(args.p / args.h1.e + (1 - args.p) / args.h2.e)
    text = f"status: {fc.status}\nobjective: {fc.objective!r}\ntarget: {target!r}"
    if args.out:
        text += f"\nwritten: {args.out}"
    _emit(args, {k: v for k, v in payload.items() if k != "matrices" or not args.out}, text=text)


def cmd_cert_round(args):
    fc = cert_mod.float_certificate_from_json(_read_json(args.file))
    cert = cert_mod.round_certificate(fc, args.den)
    if args.out:
        cert_mod.save_certificate(cert, args.out)
    report = cert_mod.verify(cert)
    payload = {"certificate": cert.to_json(), "verification": report.to_json()}
    text = f"{report.verdict}, {report.equality_count}/{len(report.slacks)} equalities"
    text += f"\nmin slack: {report.min_slack}"
    if report.reason:
        text += f"\nreason: {report.reason}"
    _emit(args, payload, text=text)


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("json", "table"), default=argparse.SUPPRESS,
                     help="output format (default: table)")

    parser = argparse.ArgumentParser(prog="commonpairs", parents=[fmt],
                                     description="Exact densities, commonality gaps, witnesses and flag certificates.")
    sub = parser.add_subparsers(dest="command", required=True)

    graphs = sub.add_parser("graphs", help="graph utilities").add_subparsers(dest="action", required=True)
    p = graphs.add_parser("enumerate", parents=[fmt], help="isomorphism classes on n vertices")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("density", parents=[fmt], help="homomorphism density t(G, U)")
    p.add_argument("--graph", type=_graph, required=True, help='shorthand like "C5" or graph JSON')
    p.add_argument("--kernel", required=True, help="kernel JSON file, or one of B, K, W1")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("gap", parents=[fmt], help="commonality gap of a colour system")
    p.add_argument("--spec", required=True, help="colour-system JSON file")
    p.set_defaults(func=cmd_gap)

    wit = sub.add_parser("witness", help="counterexample constructions").add_subparsers(dest="kind", required=True)
    sweep = argparse.ArgumentParser(add_help=False)
    sweep.add_argument("--deltas", type=_rational, nargs="+")
    sweep.add_argument("--sweep", action="store_true", help="print every grid point")
    for name, func in (("girth", cmd_witness_girth), ("k4", cmd_witness_k4)):
        p = wit.add_parser(name, parents=[fmt, sweep])
        p.add_argument("--h1", type=_graph, required=True)
        p.add_argument("--h2", type=_graph, required=True)
        p.add_argument("--p", type=_rational, required=True, help="p1")
        if name == "k4":
            p.add_argument("--ks", type=int, nargs="+")
        p.set_defaults(func=func)
    p = wit.add_parser("multicolour", parents=[fmt, sweep])
    p.add_argument("--graphs", type=_graph, nargs="+", required=True)
    p.add_argument("--ps", type=_rational, nargs="+", required=True)
    p.set_defaults(func=cmd_witness_multicolour)
    p = wit.add_parser("c4c5", parents=[fmt])
    p.add_argument("--p", type=_rational, required=True)
    p.set_defaults(func=cmd_witness_c4c5)

    p = sub.add_parser("candidate-p", parents=[fmt], help="only possible p for equal odd girth")
    p.add_argument("--h1", type=_graph, required=True)
    p.add_argument("--h2", type=_graph, required=True)
    p.set_defaults(func=cmd_candidate_p)

    flags = sub.add_parser("flags", help="flag gluing data").add_subparsers(dest="action", required=True)
    p = flags.add_parser("table", parents=[fmt])
    p.set_defaults(func=cmd_flags_table)

    cert = sub.add_parser("cert", help="flag certificates").add_subparsers(dest="action", required=True)
    p = cert.add_parser("verify", parents=[fmt])
    p.add_argument("file")
    p.add_argument("--strict", action="store_true", help="exit 1 when the certificate is rejected")
    p.set_defaults(func=cmd_cert_verify)
    p = cert.add_parser("search", parents=[fmt])
    p.add_argument("--h1", type=_graph, required=True)
    p.add_argument("--h2", type=_graph, required=True)
    p.add_argument("--p", type=_rational, required=True)
    p.add_argument("--iters", type=int, default=5000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_cert_search)
    p = cert.add_parser("round", parents=[fmt])
    p.add_argument("file")
    p.add_argument("--den", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_cert_round)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "format"):
        args.format = "table"
    try:
        code = args.func(args)
    except BrokenPipeError:  # reader went away, e.g. piped into head
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    except CommonPairsError as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        if getattr(exc, "location", None) is not None:
            err["location"] = exc.location
        print(json.dumps(err), file=sys.stderr)
        return 1
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
