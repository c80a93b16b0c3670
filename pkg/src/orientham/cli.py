"""Command-line interface.

Exit codes: 0 success or found, 1 definitive negative, 2 indeterminate or
capacity limit, 3 input error.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import json
import os
import sys
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .errors import CapacityError, ConstructionError, GenerationError, InputError
from .expander import (
    check_extremal_partition,
    check_path_system,
    find_balanced_path_system,
    find_matching_XY_WX,
    is_robust_outexpander,
)
from .extremal import TSV_HEADER, build_extremal, disjoint_special_edges, extend_to_proper_path, find_special_edges, table_row
from .expander import bad_vertices
from .graph import OrientedGraph, random_oriented_graph
from .partition import QuadPartition
from .solver import (
    DEFAULT_BUDGET,
    Verdict,
    find_oriented_cycle,
    oracle_enumerate,
    pancyclicity_sweep,
    threshold_experiment,
)
from .winding import concentration_experiment, parse_path_spec

OUT_DIR_ENV = "ORIENTHAM_OUT_DIR"
EXIT_OK, EXIT_NEGATIVE, EXIT_UNDECIDED, EXIT_INPUT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


# input helpers


def _read_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise InputError(f"file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None


def _load_graph(path: str) -> tuple[OrientedGraph, QuadPartition | None]:
    data = _read_json(path)
    if isinstance(data, dict) and "result" in data and isinstance(data["result"], dict):
        data = data["result"]
    part = None
    if isinstance(data, dict) and "graph" in data:
        if "partition" in data:
            part = data["partition"]
        data = data["graph"]
    g = OrientedGraph.from_json(data)
    return g, (QuadPartition.from_json(part, g.n) if part is not None else None)


def _load_partition(args, g: OrientedGraph, embedded: QuadPartition | None) -> QuadPartition:
    if getattr(args, "partition", None):
        data = _read_json(args.partition)
        if isinstance(data, dict) and "result" in data:
            data = data["result"]
        if isinstance(data, dict) and "partition" in data:
            data = data["partition"]
        return QuadPartition.from_json(data, g.n)
    if embedded is None:
        raise InputError("no partition given: pass --partition or a graph file that embeds one")
    return embedded


def _int_list(text: str | None) -> list[int]:
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}") from None


# output


def _config(args) -> dict:
    skip = {"func", "out", "force"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def render_report(command: str, config: dict, result: Any, timestamp: str | None = None) -> str:
    """Deterministic JSON; only ``generated_at`` varies between identical runs."""
    doc = {
        "command": command,
        "config": config,
        "seed": config.get("seed"),
        "version": __version__,
        "result": result,
        "generated_at": timestamp or _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _emit(args, text: str, suffix: str = "json") -> None:
    target = args.out
    if target is None and os.environ.get(OUT_DIR_ENV):
        target = str(Path(os.environ[OUT_DIR_ENV]) / f"{args.command}.{suffix}")
    if target is None or target == "-":
        sys.stdout.write(text)
        return
    path = Path(target)
    inputs = {getattr(args, k, None) for k in ("graph", "partition")}
    if str(path) in inputs:
        raise InputError(f"refusing to overwrite input file {path}")
    if path.exists() and not args.force:
        raise InputError(f"{path} exists; reports are never overwritten (use --force)")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _report(args, result: Any) -> None:
    _emit(args, render_report(args.command, _config(args), result))


# commands


def cmd_gen_extremal(args) -> int:
    if args.format == "tsv":
        rows = [table_row(n) for n in range(args.n, (args.n_max or args.n) + 1)]
        _emit(args, TSV_HEADER + "\n" + "".join(r.to_tsv() + "\n" for r in rows), "tsv")
        return EXIT_OK
    inst = build_extremal(args.n, args.seed)
    if args.format == "dot":
        labels = {v: f"{inst.partition.part_of(v)}{v}" for v in range(inst.graph.n)}
        _emit(args, inst.graph.to_dot(labels), "dot")
        return EXIT_OK
    _report(args, inst.to_json())
    return EXIT_OK


def cmd_gen_random(args) -> int:
    g = random_oriented_graph(args.n, args.min_semidegree, args.seed, args.max_attempts)
    _report(args, {"graph": g.to_json()})
    return EXIT_OK


_VERDICT_EXIT = {Verdict.FOUND: EXIT_OK, Verdict.NONE: EXIT_NEGATIVE, Verdict.INDETERMINATE: EXIT_UNDECIDED}


def cmd_solve(args) -> int:
    g, _ = _load_graph(args.graph)
    res = find_oriented_cycle(g, args.pattern, args.budget, args.kernel)
    _report(args, res.to_json())
    return _VERDICT_EXIT[res.verdict]


def cmd_sweep(args) -> int:
    g, _ = _load_graph(args.graph)
    rep = pancyclicity_sweep(g, args.tmin, args.tmax, args.budget, args.kind, args.threads, args.kernel)
    _report(args, rep.to_json())
    verdicts = {c.verdict for c in rep.cells}
    if Verdict.INDETERMINATE in verdicts:
        return EXIT_UNDECIDED
    return EXIT_NEGATIVE if Verdict.NONE in verdicts else EXIT_OK


def cmd_oracle(args) -> int:
    g, _ = _load_graph(args.graph)
    emb = oracle_enumerate(g, args.pattern, args.max_n)
    _report(args, {"pattern": args.pattern, "embedding": list(emb) if emb else None, "found": emb is not None})
    return EXIT_OK if emb else EXIT_NEGATIVE


def cmd_check_expander(args) -> int:
    g, embedded = _load_graph(args.graph)
    part = _load_partition(args, g, embedded) if (args.partition or embedded) else None
    if args.mode == "sampled" and args.seed is None:
        raise InputError("--seed is required in sampled mode")
    v = is_robust_outexpander(g, args.nu, args.tau, args.mode, args.samples, args.seed, part, args.kernel)
    _report(args, v.to_json())
    return EXIT_OK if v.is_expander else EXIT_NEGATIVE


def cmd_check_partition(args) -> int:
    g, embedded = _load_graph(args.graph)
    rep = check_extremal_partition(g, _load_partition(args, g, embedded), args.delta, args.C)
    _report(args, rep.to_json())
    return EXIT_OK if rep.passed else EXIT_NEGATIVE


def cmd_special_edges(args) -> int:
    g, embedded = _load_graph(args.graph)
    part = _load_partition(args, g, embedded)
    edges = find_special_edges(g, part)
    disjoint = disjoint_special_edges(g, part)
    _report(args, {
        "special_edges": [list(e) for e in edges],
        "disjoint_count": disjoint.count,
        "disjoint_witnesses": [list(e) for e in disjoint.edges],
    })
    return EXIT_OK


def cmd_proper_path(args) -> int:
    g, embedded = _load_graph(args.graph)
    part = _load_partition(args, g, embedded)
    edge = _int_list(args.edge)
    if len(edge) != 2:
        raise InputError("--edge must be two comma-separated vertices, e.g. 3,7")
    bad = bad_vertices(g, part, args.delta, args.C) - set(edge)
    try:
        path = extend_to_proper_path(g, part, (edge[0], edge[1]), _int_list(args.forbidden), bad)
    except ConstructionError as exc:
        _report(args, {"path": None, "failed_step": exc.step, "message": str(exc)})
        return EXIT_NEGATIVE
    _report(args, path.to_json())
    return EXIT_OK


def cmd_balanced_system(args) -> int:
    g, embedded = _load_graph(args.graph)
    part = _load_partition(args, g, embedded)
    if args.matching:
        matching = [tuple(e) for e in _read_json(args.matching)]
    else:
        m = find_matching_XY_WX(g, part)
        if not m.sufficient:
            _report(args, {"matching": m.to_json(), "paths": None, "message": "matching too small"})
            return EXIT_NEGATIVE
        matching = list(m.edges)[: m.required]
    try:
        system = find_balanced_path_system(g, part, matching, args.delta, args.C)
    except ConstructionError as exc:
        _report(args, {"matching": [list(e) for e in matching], "paths": None, "failed_step": exc.step, "message": str(exc)})
        return EXIT_NEGATIVE
    problems = check_path_system(g, part, system, matching, args.delta, args.C)
    _report(args, {"matching": [list(e) for e in matching], **system.to_json(), "problems": problems})
    return EXIT_OK if not problems else EXIT_NEGATIVE


def cmd_wind_sim(args) -> int:
    paths = parse_path_spec(args.paths, args.seed)
    rep = concentration_experiment(args.k, paths, args.trials, args.eps, args.seed, None if args.no_cap else "auto")
    _report(args, rep.to_json())
    return EXIT_OK if rep.conserved and rep.fraction_within >= args.min_fraction else EXIT_NEGATIVE


def cmd_threshold_exp(args) -> int:
    rep = threshold_experiment(args.n, args.trials, args.seed, args.budget, False if args.no_oracle else None, args.kernel)
    if args.format == "tsv":
        cols = ["trial", "seed", "min_semidegree", "patterns", "found", "none", "indeterminate", "oracle_agrees"]
        lines = ["\t".join(cols)] + ["\t".join(str(r[c]) for c in cols) for r in rep.rows]
        _emit(args, "\n".join(lines) + "\n", "tsv")
    else:
        _report(args, rep.to_json())
    return EXIT_OK


# parser


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help=f"report path ('-' for stdout; default ${OUT_DIR_ENV}/<command>.json or stdout)")
    p.add_argument("--force", action="store_true", help="allow replacing an existing report")
    # also accepted after the subcommand; SUPPRESS keeps the top-level value otherwise
    p.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker processes for sweeps")
    p.add_argument("--kernel", choices=["python", "cython"], default=argparse.SUPPRESS, help="force a search kernel")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="orientham", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--threads", type=int, default=1, help="worker processes for sweeps")
    parser.add_argument("--kernel", choices=["python", "cython"], default=None, help="force a search kernel")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, func: Callable, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        _add_common(p)
        p.set_defaults(func=func)
        return p

    p = add("gen-extremal", cmd_gen_extremal, "build the extremal graph of order n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--format", choices=["json", "dot", "tsv"], default="json")
    p.add_argument("--n-max", type=int, help="with --format tsv, emit table rows n..n-max")

    p = add("gen-random", cmd_gen_random, "random oriented graph with a semidegree floor")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--min-semidegree", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-attempts", type=int, default=50)

    p = add("solve", cmd_solve, "search for a cycle with the given orientation pattern")
    p.add_argument("--graph", required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    p = add("sweep", cmd_sweep, "search every canonical pattern over a range of lengths")
    p.add_argument("--graph", required=True)
    p.add_argument("--tmin", type=int, default=3)
    p.add_argument("--tmax", type=int)
    p.add_argument("--kind", choices=["all", "directed", "antidirected"], default="all")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    p = add("oracle", cmd_oracle, "brute-force cycle enumeration (small graphs)")
    p.add_argument("--graph", required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--max-n", type=int, default=11)

    p = add("check-expander", cmd_check_expander, "robust outexpander test")
    p.add_argument("--graph", required=True)
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.add_argument("--partition")

    p = add("check-partition", cmd_check_partition, "evaluate EP1-EP7 for a partition")
    p.add_argument("--graph", required=True)
    p.add_argument("--partition")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--C", type=float, required=True)

    p = add("special-edges", cmd_special_edges, "list special edges and disjoint pairs")
    p.add_argument("--graph", required=True)
    p.add_argument("--partition")

    p = add("proper-path", cmd_proper_path, "extend a special edge to a proper 13-path")
    p.add_argument("--graph", required=True)
    p.add_argument("--partition")
    p.add_argument("--edge", required=True, help="u,v")
    p.add_argument("--forbidden", help="comma-separated vertices to avoid")
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--C", type=float, default=2.0)

    p = add("balanced-system", cmd_balanced_system, "balanced path system from a matching")
    p.add_argument("--graph", required=True)
    p.add_argument("--partition")
    p.add_argument("--matching", help="JSON list of [u, v] edges; computed when omitted")
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--C", type=float, default=2.0)

    p = add("wind-sim", cmd_wind_sim, "winding concentration experiment")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--paths", required=True, help="COUNTxORDER[:dir|anti|rand], e.g. 1000x10")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--min-fraction", type=float, default=0.95)
    p.add_argument("--no-cap", action="store_true", help="allow paths longer than the cube root of n")

    p = add("threshold-exp", cmd_threshold_exp, "Hamilton patterns at the semidegree threshold")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--no-oracle", action="store_true")
    p.add_argument("--format", choices=["json", "tsv"], default="json")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    except GenerationError as exc:
        print(f"generation failed: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    except ConstructionError as exc:
        print(f"construction failed at {exc.step}: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE


if __name__ == "__main__":
    sys.exit(main())
