"""Command line driver.

Exit codes: 0 success, 2 usage, 3 parse error, 4 decision-diagram blow-up,
5 enumeration cap exceeded, 6 unknown query predicate, 1 other I/O errors.
"""
from __future__ import annotations

import argparse
import sys
import time
from typing import List, Optional

from .errors import (CompilationBlowup, EnumerationCapExceeded, ParseError,
                     UnknownPredicate)
from .formula import FormulaManager
from .generate import smokers_network
from .magic import MODES, magic_transform, solve
from .oracle import DEFAULT_CAP, enumerate_probs
from .parser import parse_program, parse_query
from .report import format_probability, to_json, to_tsv

EXIT_OK = 0
EXIT_IO = 1
EXIT_PARSE = 3
EXIT_BLOWUP = 4
EXIT_CAP = 5
EXIT_QUERY = 6


def _iterations(text: str) -> Optional[int]:
    if text.lower() in ("inf", "infinity", "none"):
        return None
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a natural number or 'inf', got {text!r}")
    if n < 0:
        raise argparse.ArgumentTypeError("iterations must be >= 0")
    return n


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="tcplog",
        description="Lineage-based inference for probabilistic logic programs.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="compute query probabilities or lower bounds")
    s.add_argument("file")
    s.add_argument("--query", "-q", action="append", required=True,
                   help="query atom; repeat for several queries")
    s.add_argument("--mode", choices=MODES, default="magic-opt")
    s.add_argument("--iterations", "-d", type=_iterations, default=None,
                   metavar="{N|inf}")
    s.add_argument("--format", choices=("json", "tsv"), default="tsv")
    s.add_argument("--node-limit", type=int, default=None)
    s.add_argument("--header", action="store_true", help="print a TSV header row")
    s.add_argument("--stats", action="store_true",
                   help="write entry counts and node totals to stderr")

    g = sub.add_parser("gen-smokers", help="write a Smokers benchmark program")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--max-facts", type=int, default=None,
                   help="trim to at most this many probabilistic facts")
    g.add_argument("--p-stress", type=float, default=0.3)
    g.add_argument("--p-influence", type=float, default=0.2)
    g.add_argument("--p-susceptible", type=float, default=0.4)

    o = sub.add_parser("oracle", help="exact probabilities by enumerating total choices")
    o.add_argument("file")
    o.add_argument("--query", "-q", action="append", required=True)
    o.add_argument("--cap", type=int, default=DEFAULT_CAP)

    m = sub.add_parser("magic", help="print the magic-sets rewrite for a query")
    m.add_argument("file")
    m.add_argument("--query", "-q", required=True)
    return ap


def _load(path: str):
    with open(path) as fh:
        return parse_program(fh.read())


def cmd_solve(args, out) -> int:
    t0 = time.perf_counter()
    program = _load(args.file)
    queries = [parse_query(q) for q in args.query]
    parse_ms = (time.perf_counter() - t0) * 1e3
    mgr = FormulaManager(args.node_limit)
    reports = []
    for q in queries:
        rep = solve(program, q, args.mode, args.iterations, mgr=mgr)
        rep.timings["parse_ms"] = parse_ms
        reports.append(rep)
        if args.stats:
            print(f"# query={q} mode={args.mode} entries={rep.entries} "
                  f"magic_entries={rep.magic_entries} dd_nodes={rep.dd_nodes}",
                  file=sys.stderr)
    if args.format == "json":
        out.write(to_json(reports) + "\n")
    else:
        out.write(to_tsv(reports, header=args.header))
    return EXIT_OK


def cmd_gen_smokers(args, out) -> int:
    net = smokers_network(args.n, args.seed, p_stress=args.p_stress,
                          p_influence=args.p_influence, p_susceptible=args.p_susceptible)
    if args.max_facts is not None:
        net = net.trimmed(args.max_facts)
    out.write(net.render())
    return EXIT_OK


def cmd_oracle(args, out) -> int:
    from .logic import match_atom

    program = _load(args.file)
    probs = enumerate_probs(program, cap=args.cap)
    for text in args.query:
        q = parse_query(text)
        rows = sorted(((a, p) for a, p in probs.items() if match_atom(q, a) is not None),
                      key=lambda r: str(r[0]))
        if not rows and q.is_ground():
            rows = [(q, 0.0)]
        for a, p in rows:
            out.write(f"{a}\t{format_probability(p)}\n")
    return EXIT_OK


def cmd_magic(args, out) -> int:
    program = _load(args.file)
    mp = magic_transform(program.rules, parse_query(args.query), program.fact_predicates())
    out.write(mp.render())
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "gen-smokers": cmd_gen_smokers,
            "oracle": cmd_oracle, "magic": cmd_magic}


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except ParseError as e:
        print(f"parse error [{e.code}]: {e}", file=sys.stderr)
        return EXIT_PARSE
    except CompilationBlowup as e:
        print(f"compilation blow-up: {e}", file=sys.stderr)
        return EXIT_BLOWUP
    except EnumerationCapExceeded as e:
        print(f"enumeration cap exceeded: {e}", file=sys.stderr)
        return EXIT_CAP
    except UnknownPredicate as e:
        print(f"query error: {e}", file=sys.stderr)
        return EXIT_QUERY
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
