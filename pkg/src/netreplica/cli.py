"""Command-line interface: ``netreplica <command> ...``."""

from __future__ import annotations

import argparse
import glob
import logging
import os
import random
import sys
from pathlib import Path
from typing import List, Optional

from . import baselines
from .config import ConfigError, EditConfig, preset
from .epidemics import SeirParams, epidemic_ensemble
from .graph import Graph
from .io import (SCHEMA_VERSION, EdgeListError, dump_json, load_json, read_edgelist,
                 write_csv, write_edgelist, write_node_map)
from .metrics import SCALAR_METRICS, EnsembleSummary, compare_ensemble, compute_metrics
from .vcycle import evolve, generate_ensemble

log = logging.getLogger("netreplica")


class UsageError(Exception):
    pass


def _meta(args, command: str) -> dict:
    flags = {k: v for k, v in vars(args).items() if k not in ("func",)}
    return {"schema_version": SCHEMA_VERSION, "command": command, "args": flags}


def _load_config(args) -> EditConfig:
    if args.config and args.preset:
        raise UsageError("use either --config or --preset, not both")
    if args.config:
        data = load_json(args.config)
        if not isinstance(data, dict):
            raise ConfigError("config", "top level must be a JSON object")
        cfg = EditConfig.from_dict(data)
    else:
        cfg = preset(args.preset or "p1")
    if args.seed is not None:
        cfg.rng_seed = args.seed
    return cfg


def _read_graph(path: str, relabel: bool = True):
    return read_edgelist(path, relabel=relabel)


def _write_summary(summary: EnsembleSummary, prefix: Path, meta: dict) -> None:
    dump_json({**summary.to_dict(), "meta": meta}, prefix.with_suffix(".json"))
    write_csv(summary.csv_rows(), EnsembleSummary.CSV_HEADER, prefix.with_suffix(".csv"))


def cmd_replicate(args) -> int:
    if args.count < 1:
        raise UsageError("--count must be >= 1")
    cfg = _load_config(args)
    g, tokens = _read_graph(args.input)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_node_map(tokens, out / "nodes.tsv")
    reports = generate_ensemble(g, cfg, args.count, cfg.rng_seed, jobs=args.jobs)
    meta = _meta(args, "replicate")
    meta["config"] = cfg.to_dict()
    orig_metrics = compute_metrics(g, random.Random(cfg.rng_seed)) if not args.no_metrics else None
    rep_metrics = []
    width = max(3, len(str(args.count - 1)))
    for i, rep in enumerate(reports):
        name = f"replica_{i:0{width}d}"
        write_edgelist(rep.replica, out / f"{name}.edges")
        body = {**rep.to_dict(include_timing=args.timing), "meta": meta}
        if orig_metrics is not None:
            m = compute_metrics(rep.replica, random.Random(rep.rng_seed))
            rep_metrics.append(m)
            body["metrics"] = m.to_dict()
        dump_json(body, out / f"{name}.report.json")
    if orig_metrics is not None:
        dump_json({**orig_metrics.to_dict(), "meta": meta}, out / "original.metrics.json")
        if len(rep_metrics) >= 2:
            _write_summary(compare_ensemble(orig_metrics, rep_metrics), out / "ensemble_summary", meta)
        else:
            log.warning("ensemble summary needs >= 2 replicas; skipped")
    print(f"wrote {len(reports)} replicas to {out}")
    return 0


def cmd_metrics(args) -> int:
    g, _ = _read_graph(args.input, relabel=not args.integer_ids)
    r = compute_metrics(g, random.Random(args.seed or 0))
    body = {**r.to_dict(), "meta": _meta(args, "metrics")}
    if args.out:
        dump_json(body, args.out)
    else:
        import json

        print(json.dumps(body, indent=2, sort_keys=True))
    return 0


def _expand(pattern_list: List[str]) -> List[str]:
    paths: List[str] = []
    for pat in pattern_list:
        hits = sorted(glob.glob(pat))
        if not hits:
            raise UsageError(f"no files match {pat!r}")
        paths.extend(hits)
    return paths


def cmd_compare(args) -> int:
    g, _ = _read_graph(args.original)
    seed = args.seed or 0
    orig = compute_metrics(g, random.Random(seed))
    reps = [compute_metrics(_read_graph(p, relabel=False)[0], random.Random(seed))
            for p in _expand(args.replicas)]
    summary = compare_ensemble(orig, reps)
    _write_summary(summary, Path(args.out), _meta(args, "compare"))
    print(f"compared {len(reps)} replicas; wrote {args.out}.json and {args.out}.csv")
    return 0


def cmd_baseline(args) -> int:
    rng = random.Random(args.seed)
    if args.like:
        g, _ = _read_graph(args.like)
        out = baselines.matched(args.model, g, rng)
    elif args.model == "er":
        out = baselines.erdos_renyi(_need(args, "n"), _need(args, "p"), rng)
    elif args.model == "ba":
        out = baselines.barabasi_albert(_need(args, "n"), _need(args, "m"), rng)
    elif args.model == "ws":
        out = baselines.watts_strogatz(_need(args, "n"), args.k, _need(args, "p"), rng)
    else:
        raise UsageError(f"model {args.model!r} needs --like INPUT")
    write_edgelist(out, args.out)
    dump_json(_meta(args, "baseline"), str(args.out) + ".meta.json")
    print(f"wrote {out} to {args.out}")
    return 0


def _need(args, name):
    v = getattr(args, name)
    if v is None:
        raise UsageError(f"--{name} is required for model {args.model!r}")
    return v


def cmd_epidemic(args) -> int:
    params = SeirParams(**load_json(args.params)) if args.params else SeirParams()
    if args.horizon:
        params.horizon_days = args.horizon
    graphs = [_read_graph(p, relabel=False)[0] for p in _expand(args.graphs)]
    stats = epidemic_ensemble(graphs, params, args.runs, args.seed)
    write_csv(stats.rows(), ["day", "mean", "std"], args.out)
    meta = _meta(args, "epidemic")
    meta["params"] = params.to_dict()
    meta["graphs"] = len(graphs)
    meta["peak_day"] = stats.peak_day()
    meta["peak_height"] = stats.peak_height()
    dump_json(meta, str(args.out) + ".meta.json")
    print(f"{stats.runs} runs; peak day {stats.peak_day()} height {stats.peak_height():.3f}")
    return 0


def cmd_evolve(args) -> int:
    if args.steps < 1:
        raise UsageError("--steps must be >= 1")
    cfg = _load_config(args)
    if args.rate_scale != 1.0:
        cfg = cfg.scaled(args.rate_scale)
    g, tokens = _read_graph(args.input)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_node_map(tokens, out / "nodes.tsv")
    traj = evolve(g, cfg, args.steps, random.Random(cfg.rng_seed))
    meta = _meta(args, "evolve")
    meta["config"] = cfg.to_dict()
    rows = []
    seed = cfg.rng_seed
    base = compute_metrics(g, random.Random(seed))
    rows.append([0] + [_cell(base.value(k)) for k in SCALAR_METRICS])
    for t, h in enumerate(traj, start=1):
        write_edgelist(h, out / f"step_{t:03d}.edges")
        m = compute_metrics(h, random.Random(seed))
        rows.append([t] + [_cell(m.value(k)) for k in SCALAR_METRICS])
    write_csv(rows, ["step", *SCALAR_METRICS], out / "trajectory.csv")
    dump_json(meta, out / "trajectory.meta.json")
    print(f"wrote {len(traj)} steps to {out}")
    return 0


def _cell(x) -> str:
    if x is None:
        return ""
    return str(x) if isinstance(x, int) else repr(float(x))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="netreplica", description="Multiscale network replication.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def cfg_flags(sp):
        sp.add_argument("--config", help="JSON file with EditConfig fields")
        sp.add_argument("--preset", choices=["p1", "p2", "zero"], help="named edit-rate preset (default p1)")
        sp.add_argument("--seed", type=int, default=None)

    r = sub.add_parser("replicate", help="generate an ensemble of replicas")
    r.add_argument("input")
    cfg_flags(r)
    r.add_argument("--count", type=int, default=1)
    r.add_argument("--out", required=True)
    r.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    r.add_argument("--no-metrics", action="store_true", help="skip metric reports and summary")
    r.add_argument("--timing", action="store_true", help="record wall time in reports (breaks byte-identity)")
    r.set_defaults(func=cmd_replicate)

    m = sub.add_parser("metrics", help="metric report for one edge list")
    m.add_argument("input")
    m.add_argument("--out")
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--integer-ids", action="store_true", help="use integer tokens as ids")
    m.set_defaults(func=cmd_metrics)

    c = sub.add_parser("compare", help="summarize replicas against an original")
    c.add_argument("original")
    c.add_argument("replicas", nargs="+", help="replica edge-list paths or globs")
    c.add_argument("--out", default="ensemble_summary", help="output prefix (.json/.csv added)")
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_compare)

    b = sub.add_parser("baseline", help="generate a comparison graph")
    b.add_argument("model", choices=baselines.MODELS)
    b.add_argument("--like", help="match size/density/degrees of this edge list")
    b.add_argument("--n", type=int)
    b.add_argument("--p", type=float)
    b.add_argument("--m", type=int)
    b.add_argument("--k", type=int, default=4)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_baseline)

    e = sub.add_parser("epidemic", help="SEIR incidence statistics over graphs")
    e.add_argument("graphs", nargs="+", help="edge-list paths or globs (integer ids)")
    e.add_argument("--params", help="JSON file with SeirParams fields")
    e.add_argument("--runs", type=int, default=1000, help="runs per graph")
    e.add_argument("--horizon", type=int)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_epidemic)

    v = sub.add_parser("evolve", help="iterated replication trajectory")
    v.add_argument("input")
    cfg_flags(v)
    v.add_argument("--steps", type=int, default=10)
    v.add_argument("--rate-scale", type=float, default=1.0, help="multiply all edit rates")
    v.add_argument("--out", required=True)
    v.set_defaults(func=cmd_evolve)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except EdgeListError as exc:
        print(f"malformed edge list: {exc}", file=sys.stderr)
        return 3
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
