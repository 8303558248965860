"""Command-line entry point: ingestion, preprocessing, mining, selection,
ranking comparison, and the results service.

Subcommands: mine, filter-chaotic, project, select, eval, serve. All runs are
deterministic; re-running identical inputs reproduces identical result JSON.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from pathlib import Path

from .chaotic import FilterVariant, filter_chaotic
from .eventlog import CsvMapping, EventLog, LogError, parse_csv, parse_xes
from .gaps import GapConstraint, event_gap, time_gap
from .mining import ALL_OPERATORS, MinerConfig, Pruning, mine
from .projections import entropy_projections, markov_projections, mine_projected, mrig_projections
from .quality import RankingWeights, ndcg_at_k, recall_at_k
from .runstore import RunStore, build_run_document
from .selection import diversity_filter, score_set, select_alignment, select_greedy, select_greedy_fscore
from .tree import parse_tree, serialize_tree


class CliError(Exception):
    pass


def load_log(args) -> EventLog:
    path = Path(args.log)
    if not path.exists():
        raise CliError(f"E_INPUT: log file not found: {path}")
    data = path.read_bytes()
    if path.suffix.lower() == ".xes":
        return parse_xes(data)
    mapping = CsvMapping(
        case=getattr(args, "case", None) or "case",
        activity=getattr(args, "activity", None) or "activity",
        timestamp=getattr(args, "time", None),
    )
    return parse_csv(data, mapping)


_DURATION = re.compile(r"^(\d+(?:\.\d+)?)(ms|s|m|h|d)$")
_DURATION_MS = {"ms": 1, "s": 1000, "m": 60_000, "h": 3_600_000, "d": 86_400_000}


def parse_duration_ms(text: str) -> float:
    m = _DURATION.match(text.strip())
    if not m:
        raise CliError(f"E_ARGS: cannot parse duration {text!r} (use e.g. 120s, 2m)")
    return float(m.group(1)) * _DURATION_MS[m.group(2)]


def gap_from_args(args) -> GapConstraint | None:
    if getattr(args, "event_gap", None) is not None and getattr(args, "time_gap", None):
        raise CliError("E_ARGS: choose either --event-gap or --time-gap, not both")
    if getattr(args, "event_gap", None) is not None:
        return event_gap(args.event_gap)
    if getattr(args, "time_gap", None):
        return time_gap(parse_duration_ms(args.time_gap))
    return None


def weights_from_args(args) -> RankingWeights:
    w = getattr(args, "weights", None)
    if w:
        parts = [float(x) for x in w.split(",")]
        if len(parts) != 5:
            raise CliError("E_ARGS: --weights takes five comma-separated numbers")
        return RankingWeights(*parts, squash_constant=getattr(args, "squash", None))
    return RankingWeights(squash_constant=getattr(args, "squash", None))


def add_log_arguments(p: argparse.ArgumentParser):
    p.add_argument("--log", required=True, help="input log (.xes or .csv)")
    p.add_argument("--case", help="CSV case id column (default: case)")
    p.add_argument("--activity", help="CSV activity column (default: activity)")
    p.add_argument("--time", help="CSV timestamp column")


def cmd_mine(args) -> int:
    log = load_log(args)
    weights = weights_from_args(args)
    config = MinerConfig(
        min_support=args.min_support,
        min_determinism=args.min_determinism,
        max_iterations=args.max_iterations,
        top_k=args.top_k,
        weights=weights,
        operators=frozenset(args.operators.split(",")) if args.operators else ALL_OPERATORS,
        pruning=Pruning(args.pruning),
        gap=gap_from_args(args),
        workers=args.workers,
    )
    started = time.time()
    projections = None
    if args.projection == "markov":
        projections = markov_projections(log, inflation=args.inflation)
    elif args.projection == "entropy":
        threshold = args.entropy_threshold
        if threshold is None:
            import math

            threshold = 2 * math.log2(len(log.alphabet) + 1)
        projections = entropy_projections(log, threshold)
    elif args.projection == "mrig":
        projections = mrig_projections(log, args.mrig_threshold)

    if projections is None:
        result = mine(log, config)
    else:
        result = mine_projected(log, projections, config)
    elapsed = time.time() - started

    config_echo = {
        "min_support": config.min_support,
        "min_determinism": config.min_determinism,
        "max_iterations": config.max_iterations,
        "top_k": config.top_k,
        "operators": sorted(config.operators),
        "pruning": config.pruning.value,
        "projection": args.projection,
        "event_gap": args.event_gap,
        "time_gap": args.time_gap,
        "weights": list(weights.as_tuple()),
    }
    doc = build_run_document(log, result, config_echo, weights)
    store = RunStore(Path(args.data_dir))
    path = store.save(doc)

    manifest = {
        "schema": 1,
        "run_id": doc["run_id"],
        "config": config_echo,
        "rounds": [vars(r) for r in result.rounds],
        "projection_sets": projections.to_json() if projections is not None else None,
        "evaluations": result.evaluations,
        "wall_seconds": round(elapsed, 3),
        "output": str(path),
    }
    manifest_path = Path(args.out or f"{doc['run_id']}.manifest.json")
    manifest_path.write_text(json.dumps(manifest, indent=1, sort_keys=True))
    if args.emit_alignments:
        _emit_alignments(log, result, Path(str(manifest_path) + ".alignments.json"))
    print(json.dumps({"run_id": doc["run_id"], "patterns": len(result.patterns), "manifest": str(manifest_path)}))
    return 0


def _emit_alignments(log: EventLog, result, path: Path):
    from .align import INSTANCE_COUNTING, align
    from .eventlog import project as project_log
    from .petri import to_instance_counter, to_petri_net

    dumps = []
    for ep in result.patterns:
        net = to_instance_counter(to_petri_net(ep.tree))
        per_variant = []
        for variant in sorted({t.labels for t in project_log(log, ep.tree.activities())}):
            if not variant:
                continue
            alignment = align(net, variant, INSTANCE_COUNTING)
            per_variant.append({"variant": list(variant), **alignment.to_json(net)})
        dumps.append({"tree": ep.key, "alignments": per_variant, "instances": ep.instances.to_json()})
    path.write_text(json.dumps(dumps, indent=1))


def cmd_filter_chaotic(args) -> int:
    log = load_log(args)
    report = filter_chaotic(
        log,
        variant=FilterVariant(args.variant),
        smoothed=args.smoothing == "on",
        keep=args.keep,
    )
    out = json.dumps(report.to_json(), indent=1)
    if args.out:
        Path(args.out).write_text(out)
    print(out)
    return 0


def cmd_project(args) -> int:
    log = load_log(args)
    if args.projection == "markov":
        ps = markov_projections(log, inflation=args.inflation)
    elif args.projection == "entropy":
        import math

        threshold = args.entropy_threshold
        if threshold is None:
            threshold = 2 * math.log2(len(log.alphabet) + 1)
        ps = entropy_projections(log, threshold)
    elif args.projection == "mrig":
        ps = mrig_projections(log, args.mrig_threshold)
    else:
        raise CliError(f"E_ARGS: unknown projection {args.projection!r}")
    print(json.dumps(ps.to_json(), indent=1))
    return 0


def cmd_select(args) -> int:
    log = load_log(args)
    patterns = [parse_tree(line) for line in Path(args.patterns).read_text().splitlines() if line.strip()]
    if args.strategy == "alignment":
        chosen = select_alignment(log, patterns)
    elif args.strategy == "greedy":
        chosen = select_greedy(log, patterns)
    elif args.strategy == "greedy-fscore":
        chosen = select_greedy_fscore(log, patterns)
    elif args.strategy == "diversity":
        chosen = diversity_filter(patterns, args.diversity_threshold)
    else:
        raise CliError(f"E_ARGS: unknown strategy {args.strategy!r}")
    score = score_set(log, chosen) if chosen else score_set(log, [])
    out = json.dumps(
        {"selected": [serialize_tree(p) for p in chosen], "score": score.to_json()}, indent=1
    )
    if args.out:
        Path(args.out).write_text(out)
    print(out)
    return 0


def _ranking_from_file(path: str) -> list[dict]:
    doc = json.loads(Path(path).read_text())
    if isinstance(doc, dict) and "patterns" in doc:
        return doc["patterns"]
    return doc


def cmd_eval(args) -> int:
    ranking = _ranking_from_file(args.ranking)
    ideal = _ranking_from_file(args.ideal)
    rel = [p["quality"]["aggregate"] for p in ranking]
    rel_ideal = [p["quality"]["aggregate"] for p in ideal]
    ids = [p["tree"] for p in ranking]
    ids_ideal = [p["tree"] for p in ideal]
    rows = []
    for k in args.k:
        rows.append(
            {
                "k": k,
                "ndcg": ndcg_at_k(rel, rel_ideal, k),
                "recall": recall_at_k(ids, ids_ideal, k),
            }
        )
    print(json.dumps(rows, indent=1))
    return 0


def cmd_serve(args) -> int:
    from .service import serve

    serve(args.data_dir, port=args.port, host=args.host)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lpmforge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mine", help="mine ranked local process models")
    add_log_arguments(p)
    p.add_argument("--min-support", type=int, default=2)
    p.add_argument("--min-determinism", type=float, default=0.5)
    p.add_argument("--max-iterations", type=int, default=3)
    p.add_argument("--top-k", type=int, default=20)
    p.add_argument("--weights", help="five comma-separated weights")
    p.add_argument("--squash", type=float, help="normalized-support squash constant")
    p.add_argument("--operators", help="comma subset of seq,xor,and,loop")
    p.add_argument("--pruning", choices=[m.value for m in Pruning], default=Pruning.SAFE.value)
    p.add_argument("--projection", choices=["none", "markov", "entropy", "mrig"], default="none")
    p.add_argument("--inflation", type=float, default=1.5)
    p.add_argument("--entropy-threshold", type=float)
    p.add_argument("--mrig-threshold", type=float, default=0.1)
    p.add_argument("--event-gap", type=int)
    p.add_argument("--time-gap", help='duration such as "2m" or "120s"')
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p.add_argument("--data-dir", default="runs")
    p.add_argument("--out", help="manifest path")
    p.add_argument("--emit-alignments", action="store_true")
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("filter-chaotic", help="entropy-based chaotic activity filtering")
    add_log_arguments(p)
    p.add_argument("--variant", choices=[v.value for v in FilterVariant], default="direct")
    p.add_argument("--smoothing", choices=["on", "off"], default="off")
    p.add_argument("--keep", type=int, help="stop when this many activities remain")
    p.add_argument("--out")
    p.set_defaults(func=cmd_filter_chaotic)

    p = sub.add_parser("project", help="discover activity projection sets")
    add_log_arguments(p)
    p.add_argument("--projection", choices=["markov", "entropy", "mrig"], required=True)
    p.add_argument("--inflation", type=float, default=1.5)
    p.add_argument("--entropy-threshold", type=float)
    p.add_argument("--mrig-threshold", type=float, default=0.1)
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("select", help="non-redundant pattern-set selection")
    add_log_arguments(p)
    p.add_argument("--patterns", required=True, help="file with one tree expression per line")
    p.add_argument(
        "--strategy", choices=["alignment", "greedy", "greedy-fscore", "diversity"], required=True
    )
    p.add_argument("--diversity-threshold", type=float, default=0.5)
    p.add_argument("--out")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("eval", help="compare a ranking against an ideal ranking")
    p.add_argument("--ranking", required=True)
    p.add_argument("--ideal", required=True)
    p.add_argument("--k", type=int, nargs="+", default=[5, 10, 20])
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("serve", help="serve completed runs over HTTP")
    p.add_argument("--data-dir", default="runs")
    p.add_argument("--port", type=int, default=8173)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, LogError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
