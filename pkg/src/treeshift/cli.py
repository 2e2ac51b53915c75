"""Command-line front end: ``treeshift <command> ...``.

Results go to stdout, diagnostics to stderr.  Exit status is 0 on success,
1 when a command fails and 2 on bad usage.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Any, Callable, Sequence

from . import complexity as cx
from . import entropy as en
from . import reference as ref
from . import topology as tp
from .core import (
    SystemError_,
    TransitionSystem,
    canonical_binary_catalog,
    catalog_system,
    load_json_file,
    load_system,
)
from .recode import (
    EmptyShiftError,
    ForbiddenSet,
    forbidden_set_from_system,
    higher_block_presentation,
    recoding_to_json,
    verify_recoding,
)

EXPECTED_ERRORS = (
    SystemError_,
    cx.ExactLimitError,
    cx.OracleBudgetError,
    cx.DegenerateSystemError,
    EmptyShiftError,
    KeyError,
    OSError,
    ValueError,
)


class CommandError(Exception):
    pass


# --- input --------------------------------------------------------------------


def resolve_systems(args) -> list[TransitionSystem]:
    if getattr(args, "catalog", False):
        return canonical_binary_catalog()
    if not args.input:
        raise CommandError("give a system file, a catalog name such as X_5, or --catalog")
    out = []
    for item in args.input:
        try:
            out.append(catalog_system(item))
        except KeyError:
            out.append(load_system(item))
    return out


# --- commands -----------------------------------------------------------------


def cmd_classify(args) -> dict:
    rows = []
    for s in resolve_systems(args):
        irr = tp.decide_irreducible(s)
        mix = tp.decide_mixing(s)
        chaos = tp.classify_chaos(s)
        row: dict[str, Any] = {
            "name": s.name,
            "k": s.k,
            "d": s.d,
            "admissible": s.admissible,
            "matrix_irreducible": [tp.matrix_irreducible(M) for M in s.matrices],
            "matrix_primitive": [tp.matrix_primitive(M) for M in s.matrices],
            "irreducible": irr.holds,
            "mixing": mix.holds,
            "chaotic": chaos.chaotic,
            "chaos_status": chaos.status.value,
            "chaos_evidence": chaos.evidence,
        }
        if args.certificates:
            row["certificates"] = {
                "irreducible": irr.to_json(certificates=True),
                "mixing": mix.to_json(certificates=True),
            }
        rows.append(row)
    return {"command": "classify", "results": rows}


def cmd_entropy(args) -> dict:
    rows = []
    for s in resolve_systems(args):
        rep = en.entropy_report(s, args.n_max, args.tol)
        rows.append({"name": s.name, **rep})
    return {"command": "entropy", "n_max": args.n_max, "tol": args.tol, "results": rows}


def cmd_complexity(args) -> dict:
    rows = []
    for s in resolve_systems(args):
        v = cx.complexity_value(s, args.n, exact=not args.log, exact_limit=args.exact_limit)
        rows.append({"name": s.name, "mode": "log" if args.log else "exact", **v.to_json()})
    return {"command": "complexity", "results": rows}


def cmd_oracle(args) -> dict:
    rows = []
    for s in resolve_systems(args):
        exact = cx.complexity_exact(s, args.n, exact_limit=max(args.exact_limit, args.n))
        brute = cx.oracle_count_blocks(s, args.n, budget=args.oracle_budget)
        rows.append({"name": s.name, "n": args.n, "exact": str(exact), "oracle": str(brute), "match": exact == brute})
    return {"command": "oracle", "results": rows}


def cmd_recode(args) -> dict:
    if args.from_system:
        try:
            base = catalog_system(args.from_system)
        except KeyError:
            base = load_system(args.from_system)
        f = forbidden_set_from_system(base)
    elif args.input:
        f = ForbiddenSet.from_json(load_json_file(args.input))
    else:
        raise CommandError("give a forbidden-set file or --from-system")
    system, table = higher_block_presentation(f, budget=args.oracle_budget)
    out = recoding_to_json(system, table)
    return {
        "command": "recode",
        "forbidden": f.to_json(),
        "presentation": out,
        "validation": system.report.to_json(),
        "n_check": args.n_check,
        "verified": verify_recoding(f, system, args.n_check),
    }


def build_table(n_max: int = en.DEFAULT_N_MAX, tol: float = en.DEFAULT_TOL) -> dict:
    classification = []
    entropy_rows = []
    for r, s in enumerate(canonical_binary_catalog(), start=1):
        irr = tp.decide_irreducible(s).holds
        mix = tp.decide_mixing(s).holds
        chaotic = tp.classify_chaos(s).chaotic
        expected = (r in ref.IRREDUCIBLE, r in ref.MIXING, r in ref.CHAOTIC)
        classification.append(
            {
                "name": s.name,
                "irreducible": irr,
                "mixing": mix,
                "chaotic": chaotic,
                "expected_irreducible": expected[0],
                "expected_mixing": expected[1],
                "expected_chaotic": expected[2],
                "pass": (irr, mix, chaotic) == expected,
            }
        )
        h = en.h_ps_estimate(s, n_max, tol).value
        target = ref.reference_for(r)
        entropy_rows.append(
            {
                "name": s.name,
                "group": target.group,
                "h_ps": h,
                "reference": target.describe(),
                "pass": target.check(h),
            }
        )
    return {"command": "table", "classification": classification, "entropy": entropy_rows}


def cmd_table(args) -> dict:
    return build_table(args.n_max, args.tol)


# --- output -------------------------------------------------------------------


def _flatten(row: dict, prefix: str = "") -> dict:
    flat: dict[str, Any] = {}
    for key, val in row.items():
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            flat.update(_flatten(val, name + "."))
        elif isinstance(val, (list, tuple)):
            flat[name] = json.dumps(val, separators=(",", ":"))
        else:
            flat[name] = val
    return flat


def _tables(doc: dict) -> list[tuple[str, list[dict]]]:
    if "results" in doc:
        return [(doc["command"], doc["results"])]
    if doc["command"] == "recode":
        p = doc["presentation"]
        row = {"k": p["k"], "d": p["d"], "verified": doc["verified"], "n_check": doc["n_check"],
               "admissible": doc["validation"]["admissible"], "matrices": p["matrices"], "symbols": p["symbols"]}
        return [("recode", [row])]
    return [(key, doc[key]) for key in ("classification", "entropy")]


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    chunks = []
    for title, rows in _tables(doc):
        flat = [_flatten(r) for r in rows]
        cols: list[str] = []
        for r in flat:
            cols.extend(c for c in r if c not in cols)
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(cols)
            for r in flat:
                w.writerow([_cell(r.get(c)) for c in cols])
            chunks.append(buf.getvalue())
        else:
            lines = [f"### {title}", "", "| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
            for r in flat:
                lines.append("| " + " | ".join(_cell(r.get(c)).replace("|", "\\|") for c in cols) + " |")
            chunks.append("\n".join(lines) + "\n")
    return "\n".join(chunks)


# --- parser -------------------------------------------------------------------


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", nargs="*", help="system JSON file(s) or catalog names such as X_5")
    p.add_argument("--catalog", action="store_true", help="use all 28 binary systems X_1..X_28")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "md"), default="json")

    parser = argparse.ArgumentParser(prog="treeshift", description="Analyse Markov tree-shifts given by k 0/1 matrices.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="irreducibility, mixing and chaos")
    _add_input(p)
    p.add_argument("--certificates", action="store_true", help="include complete-prefix-set certificates")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("entropy", parents=[common], help="h_PS, h_BC, bounds and growth constant")
    _add_input(p)
    p.add_argument("--n-max", type=int, default=en.DEFAULT_N_MAX)
    p.add_argument("--tol", type=float, default=en.DEFAULT_TOL)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("complexity", parents=[common], help="p(n), exact or as log p(n)")
    _add_input(p)
    p.add_argument("--n", type=int, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", default=True)
    mode.add_argument("--log", action="store_true")
    p.add_argument("--exact-limit", type=int, default=cx.DEFAULT_EXACT_LIMIT)
    p.set_defaults(func=cmd_complexity)

    p = sub.add_parser("oracle", parents=[common], help="compare p(n) with brute-force block enumeration")
    _add_input(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--oracle-budget", type=int, default=cx.DEFAULT_ORACLE_BUDGET)
    p.add_argument("--exact-limit", type=int, default=cx.DEFAULT_EXACT_LIMIT)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("recode", parents=[common], help="higher-block Markov presentation of a forbidden-block shift")
    p.add_argument("input", nargs="?", help="forbidden-set JSON file")
    p.add_argument("--from-system", help="recode a Markov system (file or catalog name) given as forbidden height-1 blocks")
    p.add_argument("--n-check", type=int, default=3)
    p.add_argument("--oracle-budget", type=int, default=cx.DEFAULT_ORACLE_BUDGET)
    p.set_defaults(func=cmd_recode)

    p = sub.add_parser("table", parents=[common], help="reproduce the classification grid and entropy table")
    p.add_argument("--n-max", type=int, default=en.DEFAULT_N_MAX)
    p.add_argument("--tol", type=float, default=en.DEFAULT_TOL)
    p.set_defaults(func=cmd_table)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    func: Callable[[argparse.Namespace], dict] = args.func
    try:
        doc = func(args)
    except (CommandError, *EXPECTED_ERRORS) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 1
    sys.stdout.write(render(doc, args.format))
    return 0


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
