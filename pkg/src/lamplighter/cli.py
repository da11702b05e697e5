"""Command line entry point.

Exit status: 0 when every check passes, 1 when a mathematical check fails,
2 on usage errors.  JSON output is sorted and indented so that identical
runs produce identical bytes.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import ce, lie, malcev, strata

DEFAULTS = {"m": 6, "q_max": 6, "n_max": 40, "r_max": 25, "i_max": 8, "trials": 100, "seed": 20240101}


def _positive(name, minimum=1):
    def parse(text):
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer, got {text!r}")
        if value < minimum:
            raise argparse.ArgumentTypeError(f"{name} must be >= {minimum}, got {value}")
        return value
    return parse


def _cell(v):
    return json.dumps(v) if isinstance(v, (list, dict)) else v


def render(payload: dict, fmt: str) -> str:
    records = payload.get("records")
    if fmt == "json":
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        rows = records if records is not None else [payload]
        buf = io.StringIO()
        fields = sorted({k for r in rows for k in r})
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({k: _cell(v) for k, v in r.items()})
        return buf.getvalue()
    lines = []
    for k in sorted(payload):
        if k != "records":
            lines.append(f"{k}: {_cell(payload[k])}")
    for r in records or []:
        lines.append("  " + " ".join(f"{k}={_cell(r[k])}" for k in sorted(r)))
    return "\n".join(lines) + "\n"


def _emit(args, payload: dict) -> None:
    text = render(payload, args.format)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


# -- subcommands ------------------------------------------------------------

def cmd_homology(args) -> int:
    L = lie.build_lamplighter_truncation(args.m)
    table = ce.homology_table(L)
    if args.q is not None:
        if args.q > L.dim:
            args.parser.error(f"--q must be at most dim L = {L.dim}")
        table = [row for row in table if row["q"] == args.q]
    records = [{"m": args.m, **row} for row in table]
    _emit(args, {"command": "homology", "m": args.m, "records": records})
    return 0


def _lemma3(args):
    return strata.lemma3_report(args.n_max)


def _lemma4(args):
    inj = strata.check_lemma(args.q_max, args.n_max)
    squares = strata.check_squares(args.q_max, args.n_max)
    records = []
    for rec, sq in zip(inj["records"], squares["records"]):
        records.append({
            "q": rec["q"], "n": rec["n"], "dimW": rec["dimW"], "rank_dW": rec["rank_dW"],
            "dimE": rec["dimE"], "rank_rhodE": rec["rank_rhodE"],
            "phi_square": sq["phi"], "psi_square": sq["psi"],
            "passed": rec["rank_dW"] == rec["dimW"] and rec["rank_rhodE"] == rec["dimE"]
            and sq["phi"] and sq["psi"],
        })
    failures = [{"q": r["q"], "n": r["n"]} for r in records if not r["passed"]]
    return {"check": "lemma4", "q_max": args.q_max, "n_max": args.n_max,
            "psi_sign": strata.PSI_SQUARE_SIGN, "records": records,
            "failures": failures, "passed": not failures}


def _lemma5(args):
    inj = strata.check_lemma(args.q_max, args.n_max)
    records = [{"q": r["q"], "n": r["n"], "dimV": r["dimV"], "rank_dV": r["rank_dV"],
                "passed": r["rank_dV"] == r["dimV"]} for r in inj["records"]]
    wit = strata.theorem_report(min(args.q_max, 5), r_max=args.r_max, extra_k=0)
    failures = [{"q": r["q"], "n": r["n"]} for r in records if not r["passed"]]
    failures += wit["failures"]
    return {"check": "lemma5", "q_max": args.q_max, "n_max": args.n_max,
            "records": records, "witnesses": wit["records"],
            "failures": failures, "passed": not failures}


def _theorem(args):
    return strata.theorem_report(args.q_max, r_max=-1, extra_k=3)


CHECKS = {"3": _lemma3, "4": _lemma4, "5": _lemma5, "theorem": _theorem}


def cmd_verify(args) -> int:
    names = list(CHECKS) if args.lemma == "all" else [args.lemma]
    reports = {name: CHECKS[name](args) for name in names}
    if len(reports) == 1:
        payload = next(iter(reports.values()))
    else:
        summary = [{"check": name, "passed": r["passed"], "failures": len(r["failures"])}
                   for name, r in reports.items()]
        payload = {"check": "all", "reports": reports, "records": summary,
                   "passed": all(r["passed"] for r in reports.values())}
    _emit(args, payload)
    if not payload["passed"]:
        for name, r in reports.items():
            for f in r["failures"]:
                print(f"FAILED {name}: {f}", file=sys.stderr)
        return 1
    return 0


def cmd_strata(args) -> int:
    if args.q is not None and args.n is not None:
        basis = strata.enumerate_stratum(args.q, args.n, args.part)
        payload = {"q": args.q, "n": args.n, "part": args.part, "dim": len(basis),
                   "records": [{"index": k, "exponents": list(e)} for k, e in enumerate(basis)]}
    else:
        if args.q_max < 2:
            args.parser.error("--q-max must be at least 2")
        payload = strata.check_lemma(args.q_max, args.n_max)
    _emit(args, payload)
    return 0 if payload.get("passed", True) else 1


def cmd_malcev(args) -> int:
    m = args.m
    rel = malcev.relations_report(m, args.i_max)
    payload = {
        "m": m, "i_max": args.i_max, "trials": args.trials, "seed": args.seed,
        "psi_b": "exp(-A)", "psi_a": "exp(B_0) = 1 + B_0", "conjugation": "a^(b^i) = b^i a b^-i",
        "jacobi": lie.verify_jacobi(lie.build_lamplighter_truncation(m)),
        "phi_brackets": lie.phi_check(m),
        "phi_injective": lie.phi_injective(m),
        "closure": malcev.group_closure_probe(m, args.trials, args.seed),
        "records": rel["records"],
    }
    payload["passed"] = (payload["jacobi"] and payload["phi_brackets"]
                         and rel["passed"] and payload["closure"])
    _emit(args, payload)
    return 0 if payload["passed"] else 1


def _load_matrix(path: str, size: int, parser) -> malcev.StrictTriangular:
    try:
        M = malcev.load_strict(json.loads(Path(path).read_text()))
    except (OSError, ValueError, TypeError) as exc:
        parser.error(f"cannot read strictly triangular matrix from {path}: {exc}")
    if M.size != size:
        parser.error(f"{path} holds a {M.size}x{M.size} matrix, expected --size {size}")
    return M


def cmd_bch(args) -> int:
    X = _load_matrix(args.x, args.size, args.parser)
    Y = _load_matrix(args.y, args.size, args.parser)
    Z = malcev.bch(X, Y)
    roundtrip = malcev.mat_exp(Z) == malcev.mat_exp(X) @ malcev.mat_exp(Y)
    payload = {"size": args.size, "Z": Z.to_json(), "exp_roundtrip": roundtrip, "passed": roundtrip}
    if args.format == "json":
        _emit(args, payload)
    else:
        rows = [" ".join(row) for row in Z.to_json()]
        text = "\n".join(rows) + f"\nexp(Z) == exp(X) exp(Y): {roundtrip}\n"
        if args.output:
            Path(args.output).write_text(text)
        else:
            sys.stdout.write(text)
    return 0 if roundtrip else 1


def cmd_dump_algebra(args) -> int:
    text = lie.export_structure(lie.build_lamplighter_truncation(args.m))
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lamplighter",
        description="Exact homology and Malcev checks for the lamplighter Lie algebra.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=("json", "csv", "text")):
        p.add_argument("--format", choices=formats, default="json")
        p.add_argument("--output", "-o", help="write to this file instead of stdout")
        p.set_defaults(parser=p)

    p = sub.add_parser("homology", help="Betti numbers of a truncation")
    p.add_argument("--m", type=_positive("--m"), default=DEFAULTS["m"])
    g = p.add_mutually_exclusive_group()
    g.add_argument("--q", type=_positive("--q", 0))
    g.add_argument("--all-q", action="store_true", help="every degree (the default)")
    common(p)
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("verify", help="run the stratum lemma checks")
    p.add_argument("--lemma", choices=["3", "4", "5", "theorem", "all"], default="all")
    p.add_argument("--q-max", type=_positive("--q-max", 2), default=DEFAULTS["q_max"])
    p.add_argument("--n-max", type=_positive("--n-max"), default=DEFAULTS["n_max"])
    p.add_argument("--r-max", type=_positive("--r-max"), default=DEFAULTS["r_max"])
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("strata", help="list a stratum or tabulate stratum ranks")
    p.add_argument("--q", type=_positive("--q"))
    p.add_argument("--n", type=_positive("--n", 0))
    p.add_argument("--part", choices=strata.PARTS, default="V")
    p.add_argument("--q-max", type=_positive("--q-max"), default=DEFAULTS["q_max"])
    p.add_argument("--n-max", type=_positive("--n-max"), default=DEFAULTS["n_max"])
    common(p)
    p.set_defaults(func=cmd_strata)

    p = sub.add_parser("malcev", help="check the group map psi and the E(m) model")
    p.add_argument("--m", type=_positive("--m"), default=DEFAULTS["m"])
    p.add_argument("--i-max", type=_positive("--i-max", 0), default=DEFAULTS["i_max"])
    p.add_argument("--trials", type=_positive("--trials", 0), default=DEFAULTS["trials"])
    p.add_argument("--seed", type=int, default=DEFAULTS["seed"])
    common(p)
    p.set_defaults(func=cmd_malcev)

    p = sub.add_parser("bch", help="exact BCH product of two strictly triangular matrices")
    p.add_argument("--size", type=_positive("--size"), required=True)
    p.add_argument("--x", required=True, help="JSON file: rows of 'p/q' strings")
    p.add_argument("--y", required=True, help="JSON file: rows of 'p/q' strings")
    common(p, formats=("json", "text"))
    p.set_defaults(func=cmd_bch)

    p = sub.add_parser("dump-algebra", help="structure constants of a truncation")
    p.add_argument("--m", type=_positive("--m"), default=DEFAULTS["m"])
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_dump_algebra, parser=p)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "strata" and (args.q is None) != (args.n is None):
        args.parser.error("--q and --n must be given together")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
