"""Command-line front end.

Exit codes: 0 success; 1 verification failed (or, for ``construct``, a
builder failed its own exit check); 2 bad parameters or unreadable input;
3 search budget exhausted under ``--strict``.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .baranyai import partition_all_subsets, verify_partition
from .chromatic import (
    ENGINES,
    BudgetExceeded,
    Colourable,
    Multiple,
    NotColourable,
    SearchBudget,
    Unique,
    chromatic_number,
    is_uniquely_k_colourable,
)
from .constructions import (
    ConstructionResult,
    build_2chromatic_estar,
    build_equitable_2chromatic_3star,
    build_unique_2chromatic_estar,
    extend_kchromatic_3star,
    extend_kchromatic_estar,
    extend_unique_2chromatic,
    extend_unique_kchromatic,
    lift_3star_chromatic,
    lift_estar_chromatic,
    lift_unique_to_strong_equitable_k,
    make_unique_kchromatic,
)
from .core import check_colouring, validate_decomposition
from .errors import ConstructionError, FormatError, StarlightError
from .formats import (
    claims_json,
    export_json,
    read_colouring,
    read_system,
    write_colouring,
    write_system,
)

log = logging.getLogger("starlight")

THEOREMS = ("2.1", "2.2", "2.3", "3.1", "3.2", "3.3", "4.1", "4.2", "4.3", "4.4", "4.5")
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    """Parameters do not fit the requested construction."""


def _need(args: argparse.Namespace, *names: str) -> None:
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"--theorem {args.theorem} needs {', '.join(missing)}")


def _kchromatic_3star(k: int, seed: int) -> ConstructionResult:
    r = build_equitable_2chromatic_3star(6)
    while r.k < k:
        r = lift_3star_chromatic(r, seed=seed)
    return r


def _kchromatic_estar(e: int, k: int, seed: int) -> ConstructionResult:
    r = build_2chromatic_estar(e)
    while r.k < k:
        r = lift_estar_chromatic(r, seed=seed)
    return r


def _strong_equitable_3(e: int) -> ConstructionResult:
    return lift_unique_to_strong_equitable_k(build_unique_2chromatic_estar(e))


def build_for_theorem(args: argparse.Namespace) -> ConstructionResult:
    """Dispatch a ``construct`` request to the matching builder chain."""
    t, seed = args.theorem, args.seed
    if t in ("2.2", "2.3", "3.2", "3.3", "4.3", "4.4", "4.5") and args.k is None:
        args.k = {"2.2": 2, "3.2": 2}.get(t, 3)
    if t in ("2.1", "2.2", "2.3") and args.e not in (None, 3):
        raise UsageError(f"--theorem {t} builds 3-star systems; --e must be 3")
    if t == "2.1":
        _need(args, "n")
        return build_equitable_2chromatic_3star(args.n)
    if t == "2.2":
        _need(args, "n")
        if args.k < 2:
            raise UsageError("--k must be at least 2")
        return extend_kchromatic_3star(_kchromatic_3star(args.k, seed), args.split, args.n)
    if t == "2.3":
        if args.k < 3:
            raise UsageError("--k must be at least 3")
        return _kchromatic_3star(args.k, seed)
    _need(args, "e")
    e = args.e
    if t == "3.1":
        return build_2chromatic_estar(e)
    if t == "3.2":
        _need(args, "n")
        if args.k < 2:
            raise UsageError("--k must be at least 2")
        return extend_kchromatic_estar(_kchromatic_estar(e, args.k, seed), args.split, args.n)
    if t == "3.3":
        if args.k < 3:
            raise UsageError("--k must be at least 3")
        return _kchromatic_estar(e, args.k, seed)
    if t == "4.1":
        return build_unique_2chromatic_estar(e)
    if t == "4.2":
        _need(args, "n")
        return extend_unique_2chromatic(build_unique_2chromatic_estar(e), args.n)
    # The k-colour chains start from the uniquely 2-chromatic system, so only
    # k = 3 has a strongly equitable base available.
    if args.k != 3:
        raise UsageError(f"--theorem {t} is available for --k 3 only")
    if t == "4.3":
        return _strong_equitable_3(e)
    if t == "4.4":
        return make_unique_kchromatic(_strong_equitable_3(e))
    _need(args, "n")
    return extend_unique_kchromatic(make_unique_kchromatic(_strong_equitable_3(e)), args.n)


def _budget(args: argparse.Namespace) -> SearchBudget:
    kw = {"workers": args.workers}
    if args.budget is not None:
        kw["max_seconds"] = args.budget
    if args.max_nodes is not None:
        kw["max_nodes"] = args.max_nodes
    return SearchBudget(**kw)


def _emit(doc: dict) -> None:
    print(json.dumps(doc, sort_keys=True))


# ------------------------------------------------------------------ commands


def cmd_construct(args: argparse.Namespace) -> int:
    try:
        result = build_for_theorem(args)
    except ConstructionError as exc:
        log.error("self-verification failed: %s", exc)
        return EXIT_FAIL
    except (UsageError, StarlightError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    out = Path(args.out)
    write_system(result.system, out)
    col_out = Path(args.col_out) if args.col_out else out.with_name(out.name + ".col")
    write_colouring(result.colouring, col_out)
    claims_out = Path(args.claims_out) if args.claims_out else out.with_name(out.name + ".claims.json")
    claims_out.write_text(claims_json(result.claims), encoding="ascii")
    _emit(
        {
            "n": result.n,
            "e": result.e,
            "blocks": len(result.system),
            "system": str(out),
            "colouring": str(col_out),
            "claims": result.claims.to_dict(),
        }
    )
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        sys_ = read_system(args.system)
        col = read_colouring(args.colouring) if args.colouring else None
    except (OSError, FormatError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    rep = validate_decomposition(sys_)
    doc: dict = {
        "decomposition_ok": rep.ok,
        "blocks": rep.block_count_actual,
        "expected_blocks": rep.block_count_expected,
        "uncovered_edges": [list(p) for p in rep.uncovered_edges[: args.limit]],
        "multiply_covered_edges": [
            [list(p), c] for p, c in rep.multiply_covered_edges[: args.limit]
        ],
    }
    ok = rep.ok
    if col is not None:
        if col.n != sys_.n:
            log.error("colouring covers %d vertices, system has %d", col.n, sys_.n)
            return EXIT_USAGE
        crep = check_colouring(sys_, col)
        doc.update(
            colouring_proper=crep.proper,
            monochromatic_blocks=list(crep.monochromatic_blocks[: args.limit]),
            class_sizes=list(crep.class_sizes),
            equitable=crep.equitable,
            strongly_equitable=crep.strongly_equitable,
        )
        ok = ok and crep.proper
    _emit(doc)
    return EXIT_OK if ok else EXIT_FAIL


def _outcome_doc(out) -> dict:
    doc = {"verdict": out.verdict, "nodes": out.stats.nodes, "seconds": round(out.stats.seconds, 3)}
    if isinstance(out, (Colourable, Unique)):
        doc["class_sizes"] = out.colouring.class_sizes()
    if isinstance(out, Multiple):
        doc["class_sizes"] = [out.first.class_sizes(), out.second.class_sizes()]
    return doc


def cmd_chromatic(args: argparse.Namespace) -> int:
    try:
        sys_ = read_system(args.system)
    except (OSError, FormatError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    chi, cert = chromatic_number(sys_, _budget(args), max_k=args.max_k, engine=args.engine)
    doc = {"chi": chi, "lower": cert.lower, "upper": cert.upper}
    if cert.colouring is not None:
        doc["class_sizes"] = cert.colouring.class_sizes()
    _emit(doc)
    if chi is None and args.strict:
        return EXIT_BUDGET
    return EXIT_OK


def cmd_unique(args: argparse.Namespace) -> int:
    try:
        sys_ = read_system(args.system)
    except (OSError, FormatError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    out = is_uniquely_k_colourable(sys_, args.k, _budget(args), engine=args.engine)
    _emit(_outcome_doc(out))
    if isinstance(out, BudgetExceeded) and args.strict:
        return EXIT_BUDGET
    return EXIT_OK


def cmd_baranyai(args: argparse.Namespace) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
        part = partition_all_subsets(args.m, args.e, sizes, seed=args.seed)
    except (ValueError, StarlightError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    if not verify_partition(part, sizes):
        log.error("partition failed verification")
        return EXIT_FAIL
    text = part.format()
    if args.out:
        Path(args.out).write_text(text, encoding="ascii")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_export(args: argparse.Namespace) -> int:
    try:
        sys_ = read_system(args.system)
        claims = json.loads(Path(args.claims).read_text()) if args.claims else None
    except (OSError, FormatError, json.JSONDecodeError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    text = export_json(sys_, claims)
    if args.out:
        Path(args.out).write_text(text, encoding="ascii")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -------------------------------------------------------------------- parser


def _search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--budget", type=float, help="seconds per search (default: $STARLIGHT_BUDGET_SECONDS or 300)")
    p.add_argument("--max-nodes", type=int, help="decision limit per search")
    p.add_argument("--workers", type=int, default=1, help="worker processes for the dfs engine")
    p.add_argument("--engine", choices=ENGINES, default="learning")
    p.add_argument("--strict", action="store_true", help="exit 3 when the budget runs out")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="starlight", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a system and write it with its colouring and claims")
    p.add_argument("--theorem", required=True, choices=THEOREMS)
    p.add_argument("--e", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int, help="target order for the extension theorems")
    p.add_argument("--split", type=int, help="classes 1..split form one side when extending")
    p.add_argument("--seed", type=int, default=0, help="seed for the subset partitioner")
    p.add_argument("--out", required=True, help="system file to write")
    p.add_argument("--col-out", help="colouring file (default: OUT.col)")
    p.add_argument("--claims-out", help="claims sidecar (default: OUT.claims.json)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="check a decomposition and optionally a colouring")
    p.add_argument("system")
    p.add_argument("--colouring")
    p.add_argument("--limit", type=int, default=20, help="max edges or blocks listed in the report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("chromatic", help="determine the chromatic number")
    p.add_argument("system")
    p.add_argument("--max-k", type=int)
    _search_flags(p)
    p.set_defaults(func=cmd_chromatic)

    p = sub.add_parser("unique", help="decide whether the k-colouring is unique up to renaming")
    p.add_argument("system")
    p.add_argument("--k", type=int, required=True)
    _search_flags(p)
    p.set_defaults(func=cmd_unique)

    p = sub.add_parser("baranyai", help="partition all e-subsets of [m] into disjoint classes")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--e", type=int, required=True)
    p.add_argument("--sizes", required=True, help="comma-separated class sizes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_baranyai)

    p = sub.add_parser("export", help="convert a system file to another format")
    p.add_argument("system")
    p.add_argument("--format", choices=("json",), default="json")
    p.add_argument("--claims", help="claims sidecar to embed")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on bad usage already
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="starlight: %(levelname)s: %(message)s",
    )
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
