from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Optional, Sequence

from .billiards import (
    fast_path_basis,
    fast_path_basis_outer,
    path_basis,
    rectangle_facts,
    require_simple_filled,
)
from .checks import CHECKS, run_checks
from .errors import InvariantError, MatchParityError, PreconditionError
from .export import reports_to_dataframe, save_table, verify_to_dataframe
from .graph import GridRegion
from .models import num
from .moves import reduce
from .pipeline import analyze_sources, load_source
from .svg import billiard_svg, save_svg
from .utils import configure_logging, load_config

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2

# error codes of a batch item that count as bad input rather than a failed computation
INPUT_CODES = {"parse_error", "precondition", "unsupported_input", "missing_coloring", "unbalanced", "io_error"}


def _dump(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def cmd_analyze(args: argparse.Namespace) -> int:
    outputs = analyze_sources(args.files, max_count_vertices=args.max_count_vertices)
    if args.table:
        save_table(reports_to_dataframe(outputs), args.table)
    if args.json:
        _dump([o.to_dict(timing=args.timing) for o in outputs])
    else:
        for o in outputs:
            print(f"== {o.source}")
            if o.error:
                print(f"  error: {o.notes}")
                continue
            rep = o.report
            print(f"  vertices: {o.region.get('vertices')}  black: {o.region.get('black', '-')}"
                  f"  white: {o.region.get('white', '-')}")
            print(f"  parity: {rep.parity.value.capitalize()}")
            print(f"  dim C: {rep.dim_C}  dim C_B: {rep.dim_C_B}  dim C_W: {rep.dim_C_W}")
            print(f"  2^{rep.guaranteed_exponent} divides {rep.guarantee_target} ({rep.guarantee_status.value})")
            if rep.caveat:
                print(f"  caveat: {rep.caveat}")
            if rep.exact_count is not None:
                print(f"  count: {rep.exact_count}  valuation: {num(rep.exact_valuation)}")
            if o.billiards:
                print(f"  billiard paths: {o.billiards['d']}")
            if o.notes:
                print(f"  notes: {o.notes}")
            if args.timing:
                print(f"  seconds: {o.seconds:.6f}")
    codes = {o.error for o in outputs if o.error}
    if codes & INPUT_CODES:
        return EXIT_INPUT
    if codes or any("guarantee violated" in o.notes for o in outputs):
        return EXIT_FAILED
    return EXIT_OK


def _region(path: str) -> GridRegion:
    host = load_source(path)
    if not isinstance(host, GridRegion):
        raise PreconditionError(f"{path} is a graph, billiards need a lattice region")
    return host


def cmd_billiards(args: argparse.Namespace) -> int:
    region = _region(args.file)
    require_simple_filled(region)
    basis = path_basis(region)
    fast = fast_path_basis(region)
    if fast.d != basis.d:
        raise InvariantError(f"fast algorithm found {fast.d} paths, face graph {basis.d}")
    out = {"source": args.file, "d": num(basis.d), "sizes": [num(s) for s in basis.sizes()]}
    if args.outer:
        outer = fast_path_basis_outer(region)
        out["outer_d"] = num(outer.d)
        out["dim_C_B"] = num(outer.d - 1)
    if args.svg:
        save_svg(billiard_svg(region, basis), args.svg)
        logger.info("wrote %s", args.svg)
    if args.json:
        _dump(out)
    else:
        print(f"d = {basis.d}")
        for i, size in enumerate(basis.sizes()):
            print(f"  path {i}: {size} faces")
        if args.outer:
            print(f"outer completion: {out['outer_d']} paths, dim C_B = {out['dim_C_B']}")
    return EXIT_OK


def cmd_reduce(args: argparse.Namespace) -> int:
    host = load_source(args.file)
    g = host.graph if isinstance(host, GridRegion) else host
    trace = reduce(g)
    if args.json:
        _dump(trace.to_dict())
        return EXIT_OK
    if trace.fully_reduced:
        print(f"fully reduced: {trace.isolated_count} isolated vertices (dim C = {trace.isolated_count})")
    else:
        print(f"irreducible remainder: {len(trace.terminal)} vertices, {trace.terminal.edge_count} edges")
    if args.trace:
        for m in trace.moves:
            params = ", ".join(f"{k}={v!r}" for k, v in m.params.items())
            print(f"  {m.kind.value}({params})")
    return EXIT_OK


def cmd_rect(args: argparse.Namespace) -> int:
    facts = rectangle_facts(args.m, args.n)
    if args.json:
        _dump(facts.to_dict())
        return EXIT_OK
    print(f"R{facts.m}x{facts.n}")
    print(f"  parity: {facts.parity.value.capitalize()}")
    if facts.guaranteed_valuation is not None:
        print(f"  guaranteed valuation: >= {facts.guaranteed_valuation}")
    print(f"  billiard paths: {facts.path_basis_size if facts.path_basis_size is not None else '-'}")
    if facts.notes:
        print(f"  notes: {facts.notes}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = load_config()["verify"]
    seed = cfg["default_seed"] if args.seed is None else args.seed
    sizes = cfg["default_sizes"] if args.sizes is None else args.sizes
    cases = cfg["cases_per_size"] if args.cases is None else args.cases
    results = run_checks(seed, sizes, cases, fault=args.fault, names=args.check)
    if args.table:
        save_table(verify_to_dataframe(results), args.table)
    if args.json:
        _dump({"seed": num(seed), "results": [r.to_dict() for r in results]})
    else:
        width = max((len(c.name) for c in CHECKS), default=10)
        for r in results:
            status = "pass" if r.ok else "FAIL"
            print(f"{r.check:<{width}}  size {r.size:>3}  {r.passed:>4}/{r.cases:<4} {status}")
            if not r.ok:
                print(f"  {r.notes}")
                if r.reproducer:
                    print("  reproducer:")
                    for line in r.reproducer.splitlines():
                        print(f"    {line}")
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="matchparity", description="Parity and powers of 2 of perfect matching counts")
    ap.add_argument("--log-level", default=None, help="overrides logging.level from config.yaml")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="divisibility report for region files or graph JSON")
    p.add_argument("files", nargs="+")
    p.add_argument("--json", action="store_true")
    p.add_argument("--max-count-vertices", type=int, default=None, help="cap for the exact brute-force count")
    p.add_argument("--table", default=None, help="write a .tsv or .xlsx summary")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("billiards", help="billiard path basis of a lattice region")
    p.add_argument("file")
    p.add_argument("--svg", default=None)
    p.add_argument("--outer", action="store_true", help="also run the outer-completion variant")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_billiards)

    p = sub.add_parser("reduce", help="reduce by VC/ED/FV moves")
    p.add_argument("file")
    p.add_argument("--trace", action="store_true")
    p.add_argument("--json", action="store_true", help="emit the replayable trace")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("rect", help="closed forms for the m x n rectangle")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_rect)

    p = sub.add_parser("verify", help="randomized cross-checks")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--sizes", type=int, nargs="*", default=None)
    p.add_argument("--cases", type=int, default=None)
    p.add_argument("--fault", choices=["kasteleyn-sign"], default=None)
    p.add_argument("--check", nargs="*", default=None, choices=[c.name for c in CHECKS])
    p.add_argument("--table", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level or load_config()["logging"]["level"])
    try:
        return args.func(args)
    except InvariantError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILED
    except (MatchParityError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
