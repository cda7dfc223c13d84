"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Optional, Sequence

from .analysis import analyze
from .catalog import CatalogError, TableParseError, load_paper_tables
from .constructions import REGISTRY, get_construction, to_candidate
from .gf2 import BitMatrix
from .search import GaConfig, VoaConfig, compare, comparison_csv, ga_run, voa_run
from .verify import verify_tables

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

CANDIDATE_HELP = (
    "Candidates are 9 hex digits, big-endian, with a_1 as the most significant "
    "of the 36 bits (a 36-character 0/1 string is also accepted)."
)


class UsageError(Exception):
    pass


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("SDFORGE_THREADS")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        raise UsageError(f"SDFORGE_THREADS must be an integer, got {env!r}") from None


def cmd_list_constructions(args, out) -> int:
    for c in REGISTRY.values():
        if args.json:
            out.write(json.dumps({"id": c.id, "label": c.label, "group": c.group_case, "pattern": c.pattern, "assembly": c.assembly}) + "\n")
        else:
            out.write(f"{c.id}\t{c.label}\t{c.group_case}\t{c.pattern}\t{c.assembly}\n")
    return EXIT_OK


def _read_matrix(path: str) -> BitMatrix:
    try:
        with open(path, encoding="utf-8") as f:
            lines = [ln.strip() for ln in f if ln.strip()]
    except OSError as e:
        raise CatalogError(f"cannot read {path}: {e}") from e
    try:
        m = BitMatrix.from_strings(lines)
    except ValueError as e:
        raise UsageError(f"{path}: {e}") from None
    if m.ncols != 2 * m.nrows:
        raise UsageError(f"{path}: expected k rows of 2k characters, got {m.nrows}x{m.ncols}")
    return m


def cmd_analyze(args, out) -> int:
    if args.matrix:
        g = _read_matrix(args.matrix)
        construction = candidate = None
    else:
        if not (args.construction and args.candidate):
            raise UsageError("give --matrix, or both --construction and --candidate")
        con = get_construction(args.construction)
        c = to_candidate(args.candidate)
        g = con.generator(c)
        construction, candidate = con.id, format(c, "09x")
    try:
        report = analyze(g, with_a16=args.a16)
    except ValueError as e:
        raise UsageError(str(e)) from None
    report.construction, report.candidate = construction, candidate
    out.write(json.dumps(report.to_dict(), sort_keys=True) + "\n")
    return EXIT_OK


def cmd_verify_tables(args, out) -> int:
    rows = load_paper_tables(args.tables)
    if not rows:
        sys.stderr.write("warning: no table rows found\n")
    results = verify_tables(
        rows,
        as_printed=args.as_printed,
        with_a16=args.a16,
        on_result=None if args.quiet else (lambda r: (out.write(r.line() + "\n"), out.flush())),
    )
    passed = sum(r.passed for r in results)
    out.write(f"{passed}/{len(results)} PASS\n")
    return EXIT_OK if passed == len(results) else EXIT_FAIL


def _voa_config(args) -> VoaConfig:
    cfg = VoaConfig(population_size=args.pop, iterations=args.iters, seed=args.seed)
    for name in ("strong_count", "strong_offspring", "common_offspring", "strong_flip_prob", "common_flip_prob", "stagnation_window"):
        v = getattr(args, name)
        if v is not None:
            setattr(cfg, name, v)
    return cfg


def _ga_config(args) -> GaConfig:
    cfg = GaConfig(population_size=args.pop, iterations=args.iters, seed=args.seed)
    for name in ("tournament_size", "crossover_prob", "mutation_flip_prob", "elite_count"):
        v = getattr(args, name)
        if v is not None:
            setattr(cfg, name, v)
    return cfg


def cmd_search(args, out) -> int:
    con = get_construction(args.construction)
    kw = dict(threads=_threads(args), out=args.out, timestamps=not args.no_timestamp)
    try:
        if args.algo == "voa":
            runlog = voa_run(con, _voa_config(args), **kw)
        else:
            runlog = ga_run(con, _ga_config(args), **kw)
    except ValueError as e:
        raise UsageError(str(e)) from None
    out.write(runlog.to_json(timing=not args.no_timestamp) + "\n")
    return EXIT_OK


def cmd_compare(args, out) -> int:
    ids = [s for s in args.constructions.split(",") if s.strip()]
    algos = [s.strip() for s in args.algos.split(",") if s.strip()]
    for a in algos:
        if a not in ("voa", "ga"):
            raise UsageError(f"unknown algorithm {a!r}")
    for cid in ids:
        get_construction(cid)
    if args.runs < 1:
        raise UsageError("--runs must be at least 1")
    try:
        rows = compare(ids, algos, runs=args.runs, seed0=args.seed0, population_size=args.pop, iterations=args.iters, threads=_threads(args))
    except ValueError as e:
        raise UsageError(str(e)) from None
    text = comparison_csv(rows)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as f:
                f.write(text)
        except OSError as e:
            raise CatalogError(f"cannot write {args.out}: {e}") from e
    out.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sdforge",
        description="Self-dual [72,36,12] codes from group matrix ring constructions.",
        epilog=CANDIDATE_HELP,
    )
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("list-constructions", help="list the 28 registered constructions")
    s.add_argument("--json", action="store_true", help="one JSON object per line")
    s.set_defaults(func=cmd_list_constructions)

    s = sub.add_parser("analyze", help="report on a generator matrix [I | A]", epilog=CANDIDATE_HELP)
    s.add_argument("--matrix", help="text file: k lines of 2k characters in {0,1}")
    s.add_argument("--construction", help="construction id such as G2.1 (with --candidate)")
    s.add_argument("--candidate", help="candidate as hex or 36-bit binary string")
    s.add_argument("--a16", action="store_true", help="also count weight-16 words")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("verify-tables", help="rebuild and check the published codes")
    s.add_argument("--tables", help="tables CSV (default: shipped copy)")
    s.add_argument("--as-printed", action="store_true", help="use the construction labels as printed, ignoring corrections")
    s.add_argument("--a16", action="store_true", help="confirm the Type I family with A16")
    s.add_argument("--quiet", action="store_true", help="summary line only")
    s.set_defaults(func=cmd_verify_tables)

    def common_search_flags(s):
        s.add_argument("--pop", type=int, default=500, help="population size")
        s.add_argument("--iters", type=int, default=100, help="iterations")
        s.add_argument("--threads", type=int, default=None, help="fitness workers (env SDFORGE_THREADS)")

    s = sub.add_parser("search", help="run VOA or GA on one construction", epilog=CANDIDATE_HELP)
    s.add_argument("--construction", required=True)
    s.add_argument("--algo", choices=["voa", "ga"], default="voa")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", help="append hits to this JSON-Lines file")
    s.add_argument("--no-timestamp", action="store_true", help="omit timestamps and wall time")
    common_search_flags(s)
    g = s.add_argument_group("VOA parameters")
    g.add_argument("--strong-count", dest="strong_count", type=int)
    g.add_argument("--strong-offspring", dest="strong_offspring", type=int)
    g.add_argument("--common-offspring", dest="common_offspring", type=int)
    g.add_argument("--strong-flip-prob", dest="strong_flip_prob", type=float)
    g.add_argument("--common-flip-prob", dest="common_flip_prob", type=float)
    g.add_argument("--stagnation-window", dest="stagnation_window", type=int)
    g = s.add_argument_group("GA parameters")
    g.add_argument("--tournament-size", dest="tournament_size", type=int)
    g.add_argument("--crossover-prob", dest="crossover_prob", type=float)
    g.add_argument("--mutation-flip-prob", dest="mutation_flip_prob", type=float)
    g.add_argument("--elite-count", dest="elite_count", type=int)
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("compare", help="distinct hits per construction and algorithm over several seeds")
    s.add_argument("--constructions", default="G6.1,G7.2,G8.1", help="comma-separated ids")
    s.add_argument("--algos", default="voa,ga")
    s.add_argument("--runs", type=int, default=1)
    s.add_argument("--seed0", type=int, default=0)
    s.add_argument("--out", help="write the CSV here as well as to stdout")
    common_search_flags(s)
    s.set_defaults(func=cmd_compare)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    if args.verbose:
        logging.basicConfig(level=logging.INFO, stream=sys.stderr, format="%(levelname)s %(message)s")
    try:
        return args.func(args, out)
    except UsageError as e:
        sys.stderr.write(f"sdforge: {e}\n")
        return EXIT_USAGE
    except KeyError as e:
        sys.stderr.write(f"sdforge: {e.args[0] if e.args else e}\n")
        return EXIT_USAGE
    except TableParseError as e:
        sys.stderr.write(f"sdforge: {e}\n")
        return EXIT_USAGE
    except (CatalogError, OSError) as e:
        sys.stderr.write(f"sdforge: {e}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
