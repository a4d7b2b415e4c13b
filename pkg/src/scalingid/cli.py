"""Command-line interface: ``scalingid check|explain|repair|census``.

Exit codes: 0 for YES (or success), 1 for NO, 2 for input errors.
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys
from pathlib import Path
from typing import Optional, Sequence

from .algebra import DEFAULT_PRIME
from .census import classify, records_to_jsonl, rows_to_csv
from .ears import find_nontrivial_ear_decomposition
from .errors import NotStronglyConnected, OracleDisagreement, ScalingIdError
from .graph import DirectedGraph, is_inductively_strongly_connected, is_minimally_strongly_connected
from .identifiability import (
    MODES,
    YES,
    RunConfig,
    b_pattern,
    b_rank_verdict,
    condition_support,
    decide,
    index_sets,
    jacobian_verdict,
)
from .io import load_graph
from .transforms import repair

EXIT_YES, EXIT_NO, EXIT_INPUT = 0, 1, 2


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prime", type=lambda s: int(s, 0), default=DEFAULT_PRIME,
                        help="field size for randomized ranks (default 2**61-1)")
    common.add_argument("--trials", type=_positive, default=3, help="random evaluations per rank (default 3)")
    common.add_argument("--seed", type=_seed, default=None, help="64-bit seed; random and echoed if omitted")
    common.add_argument("--mode", choices=MODES, default="fast")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(
        prog="scalingid",
        description="Decide whether a linear compartment graph admits an identifiable scaling reparametrization.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="YES/NO verdict with certificate")
    p.add_argument("graph", type=Path)
    p.add_argument("--emit-B", action="store_true", dest="emit_b", help="include the symbolic B(G) matrix")

    p = sub.add_parser("explain", parents=[common], help="run every check and print a report")
    p.add_argument("graph", type=Path)
    p.add_argument("--emit-B", action="store_true", dest="emit_b", help="include the symbolic B(G) matrix")

    p = sub.add_parser("repair", parents=[common], help="remove or subdivide trivial ears")
    p.add_argument("graph", type=Path)
    p.add_argument("--out-dir", type=Path, default=None,
                   help="where to write the two variants (default: next to the input)")

    p = sub.add_parser("census", parents=[common], help="classify all graphs on n vertices")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dump", type=Path, default=None, help="per-graph classification as JSON lines")
    p.add_argument("--out", type=Path, default=None, help="write the CSV table here as well")
    return parser


def _config(args) -> RunConfig:
    seed = args.seed if args.seed is not None else secrets.randbits(64)
    return RunConfig(prime=args.prime, trials=args.trials, seed=seed, mode=args.mode)


def _b_json(g: DirectedGraph) -> dict:
    idx = index_sets(g)
    return {"rows": [list(r) for r in idx.R], "cols": [list(c) for c in idx.L], "pattern": b_pattern(g)}


def format_b_table(g: DirectedGraph) -> str:
    """Symbolic B(G), rows labeled by R and columns by L."""
    idx = index_sets(g)
    if not idx.L:
        return "B(G) is empty (|L| = 0)"
    pattern = b_pattern(g)
    head = [""] + [f"({i},{j})" for i, j in idx.L]
    body = [[f"({k},{l})"] + row for (k, l), row in zip(idx.R, pattern)]
    widths = [max(len(r[c]) for r in [head] + body) for c in range(len(head))]
    lines = ["  ".join(cell.rjust(w) for cell, w in zip(r, widths)) for r in [head] + body]
    return "\n".join(lines)


def cmd_check(args, out) -> int:
    g = load_graph(args.graph)
    config = _config(args)
    verdict = decide(g, config)
    if args.json:
        data = verdict.to_dict()
        if args.emit_b:
            data["B"] = _b_json(g)
        out.write(json.dumps(data) + "\n")
    else:
        out.write(f"{verdict.answer}  {verdict.certificate}\n")
        out.write(f"n={g.n} m={g.m} |L|={verdict.L_size} |R|={verdict.R_size} "
                  f"prime={config.prime} trials={config.trials} seed={config.seed} mode={config.mode}\n")
        if args.emit_b:
            out.write(format_b_table(g) + "\n")
    return EXIT_YES if verdict.answer == YES else EXIT_NO


def explain(g: DirectedGraph, config: RunConfig) -> dict:
    """Every check on one graph; the answer is the one :func:`decide` gives."""
    verdict = decide(g, config)
    bound = 2 * g.n - 2
    pair = condition_support(g)
    ed = find_nontrivial_ear_decomposition(g) if g.n > 1 else None
    order = is_inductively_strongly_connected(g)
    b = b_rank_verdict(g, config)
    jac = jacobian_verdict(g, config)
    return {
        "answer": verdict.answer,
        "certificate": verdict.certificate.to_dict(),
        "prime": config.prime,
        "trials": config.trials,
        "seed": config.seed,
        "mode": config.mode,
        "n": g.n,
        "m": g.m,
        "edge_bound": {"bound": bound, "exceeded": g.m > bound},
        "condition_support": list(pair) if pair else None,
        "nontrivial_ear_decomposition": ed.to_list() if ed else None,
        "minimally_strongly_connected": is_minimally_strongly_connected(g),
        "inductive_ordering": list(order) if order else None,
        "b_rank": {"rank": b.rank, "L_size": b.target, "R_size": len(index_sets(g).R), "full": b.full},
        "jacobian_rank": {"rank": jac.rank, "target": jac.target, "full": jac.full},
    }


def cmd_explain(args, out) -> int:
    g = load_graph(args.graph)
    config = _config(args)
    report = explain(g, config)
    if args.json:
        if args.emit_b:
            report["B"] = _b_json(g)
        out.write(json.dumps(report) + "\n")
    else:
        b, jac = report["b_rank"], report["jacobian_rank"]
        ed = report["nontrivial_ear_decomposition"]
        order = report["inductive_ordering"]
        pair = report["condition_support"]
        lines = [
            f"graph: n={g.n} m={g.m} edges={' '.join(f'{u}->{v}' for u, v in g.edges)}",
            f"edge bound m <= {report['edge_bound']['bound']}: "
            + ("violated" if report["edge_bound"]["exceeded"] else "ok"),
            "condition support: " + (f"ConditionSupport({pair[0]},{pair[1]})" if pair else "no pair"),
            "nontrivial ear decomposition: " + (" | ".join("->".join(map(str, p)) for p in ed) if ed else "none"),
            f"minimally strongly connected: {'yes' if report['minimally_strongly_connected'] else 'no'}",
            "inductively strongly connected: " + (",".join(map(str, order)) if order else "no"),
            f"B(G) rank: {b['rank']} of |L|={b['L_size']} (|R|={b['R_size']})",
            f"Jacobian rank: {jac['rank']} of m+1={jac['target']}",
            f"answer: {report['answer']}  {verdict_text(report)}",
            f"prime={config.prime} trials={config.trials} seed={config.seed} mode={config.mode}",
            format_b_table(g),
        ]
        out.write("\n".join(lines) + "\n")
    return EXIT_YES if report["answer"] == YES else EXIT_NO


def verdict_text(report: dict) -> str:
    cert = dict(report["certificate"])
    kind = cert.pop("kind")
    cert.pop("polarity")
    return f"{kind}({', '.join(f'{k}={v}' for k, v in cert.items())})"


def cmd_repair(args, out) -> int:
    g = load_graph(args.graph)
    config = _config(args)
    result = repair(g, config)
    folder = args.out_dir or args.graph.parent
    folder.mkdir(parents=True, exist_ok=True)
    stem = args.graph.stem
    paths = {
        "deleted": folder / f"{stem}.deleted.json",
        "subdivided": folder / f"{stem}.subdivided.json",
    }
    paths["deleted"].write_text(json.dumps(result.deleted_variant.to_dict()) + "\n")
    paths["subdivided"].write_text(json.dumps(result.subdivided_variant.to_dict()) + "\n")
    data = result.to_dict()
    data["files"] = {k: str(p) for k, p in paths.items()}
    data["seed"] = config.seed
    if args.json:
        out.write(json.dumps(data) + "\n")
    else:
        trivial = ", ".join(f"{u}->{v}" for u, v in result.decomposition_used.trivial_edges) or "none"
        out.write(f"trivial ears: {trivial}\n")
        out.write(f"deleted variant:    {result.deleted_variant}  -> {paths['deleted']}\n")
        out.write(f"subdivided variant: {result.subdivided_variant}  -> {paths['subdivided']}\n")
        out.write(f"seed={config.seed}\n")
    return EXIT_YES


def cmd_census(args, out) -> int:
    config = _config(args)
    row = classify(args.n, config)
    table = rows_to_csv([row])
    if args.out:
        args.out.write_text(table)
    if args.dump:
        args.dump.write_text(records_to_jsonl(row))
    if args.json:
        out.write(json.dumps({**row.to_dict(), "seed": config.seed, "prime": config.prime,
                              "trials": config.trials, "mode": config.mode}) + "\n")
    else:
        out.write(table)
        out.write(f"# seed={config.seed}\n")
    return EXIT_YES


COMMANDS = {"check": cmd_check, "explain": cmd_explain, "repair": cmd_repair, "census": cmd_census}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_YES
    try:
        return COMMANDS[args.command](args, out)
    except OracleDisagreement:
        raise
    except NotStronglyConnected as exc:
        print(f"error: {exc}; every compartment must reach and be reached from every other", file=sys.stderr)
        return EXIT_INPUT
    except (ScalingIdError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
