"""Command-line front end: ``hypercoarsen {coarsen,eval,partition,oracle}``.

Exit codes: 0 ok, 2 configuration error, 3 input/output error, 4 oracle mismatch.
Failures print one line ``error: <CLASS>: <message>`` to stderr and remove any
output file the command had started writing.

Every deterministic output echoes the result-affecting configuration.  Wall-clock
timings, the thread count and the kernel backend go to a separate
``<prefix>.timing.json`` so the other outputs stay byte-identical across runs.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import replace
from types import SimpleNamespace

import numpy as np

from . import _backend
from .baselines import BASELINES
from .coarsen import ClusterAssignment, CoarsenConfig, ConfigError, balanced_assign, coarsen, contract
from .embed import dump_embedding, smooth_embed
from .hypergraph import HypergraphFormatError, read_hmetis, star_expand, write_hmetis
from .metrics import (
    cut_preservation,
    file_bisector,
    kway_conductance,
    local_conductance_report,
    spectral_bisector,
    write_cluster_csv,
)
from .partition import Partitioning, load_partition_file

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_ORACLE = 0, 2, 3, 4


class CliError(Exception):
    def __init__(self, cls: str, code: int, msg: str):
        super().__init__(msg)
        self.cls = cls
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("CONFIG", EXIT_CONFIG, message)


class _Outputs:
    """Tracks files written by a command so a failure can remove them."""

    def __init__(self):
        self.paths: list[str] = []

    def path(self, p: str) -> str:
        self.paths.append(p)
        return p

    def cleanup(self) -> None:
        for p in self.paths:
            try:
                os.remove(p)
            except FileNotFoundError:
                pass


def _json(obj) -> str:
    def fix(x):
        if isinstance(x, float) and not math.isfinite(x):
            return None if math.isnan(x) else ("inf" if x > 0 else "-inf")
        if isinstance(x, dict):
            return {k: fix(v) for k, v in x.items()}
        if isinstance(x, (list, tuple)):
            return [fix(v) for v in x]
        if isinstance(x, np.integer):
            return int(x)
        if isinstance(x, np.floating):
            return fix(float(x))
        return x

    return json.dumps(fix(obj), sort_keys=True, indent=2) + "\n"


def _write_text(outs: _Outputs, path: str, text: str) -> None:
    with open(outs.path(path), "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def _config(args) -> CoarsenConfig:
    cfg = CoarsenConfig(
        rr=args.rr,
        k=args.k,
        iters=args.iters,
        delta=args.delta,
        epsilon=args.epsilon,
        max_iters=args.max_iters,
        parts=args.parts,
        seed=args.seed,
        threads=args.threads,
        dedup=args.dedup,
        prune_singletons=args.prune_singletons,
        partition_file=args.partition_file,
    )
    try:
        return cfg.validate()
    except ConfigError as exc:
        raise CliError("CONFIG", EXIT_CONFIG, str(exc)) from None


def _echo(args, cfg: CoarsenConfig, **extra) -> dict:
    d = {"command": args.command, "input": args.input, **cfg.result_affecting(), **extra}
    if getattr(args, "baseline", None):
        d["baseline"] = args.baseline
    return d


def _load(path: str):
    try:
        return read_hmetis(path)
    except OSError as exc:
        raise CliError("IO", EXIT_IO, f"{path}: {exc.strerror or exc}") from None
    except HypergraphFormatError as exc:
        raise CliError("FORMAT", EXIT_IO, f"{path}: {exc}") from None


def _read_map(path: str, n: int) -> np.ndarray:
    try:
        with open(path, encoding="utf-8") as f:
            rows = [ln.split() for ln in f if ln.strip() and not ln.lstrip().startswith("%")]
    except OSError as exc:
        raise CliError("IO", EXIT_IO, f"{path}: {exc.strerror or exc}") from None
    try:
        pairs = [(int(a), int(b)) for a, b in rows]
    except ValueError:
        raise CliError("FORMAT", EXIT_IO, f"{path}: expected 'orig coarse' integer pairs") from None
    out = np.full(n, -1, dtype=np.int64)
    for a, b in pairs:
        if not 0 <= a < n or b < 0:
            raise CliError("FORMAT", EXIT_IO, f"{path}: id out of range in pair {a} {b}")
        out[a] = b
    if np.any(out < 0):
        raise CliError("FORMAT", EXIT_IO, f"{path}: map does not cover every vertex")
    return out


def _map_text(vmap: np.ndarray, echo: dict) -> str:
    head = "% " + json.dumps(echo, sort_keys=True) + "\n% orig coarse\n"
    return head + "".join(f"{v} {c}\n" for v, c in enumerate(vmap.tolist()))


def _check_partition_file(cfg: CoarsenConfig, n: int) -> None:
    if cfg.partition_file is None:
        return
    try:
        load_partition_file(cfg.partition_file, n)
    except OSError as exc:
        raise CliError("IO", EXIT_IO, f"{cfg.partition_file}: {exc.strerror or exc}") from None
    except ValueError as exc:
        raise CliError("FORMAT", EXIT_IO, str(exc)) from None


# --------------------------------------------------------------------------- commands


def cmd_coarsen(args, outs: _Outputs) -> int:
    cfg = _config(args)
    h = _load(args.input)
    _check_partition_file(cfg, h.n)
    prefix = args.out_prefix or os.path.splitext(args.input)[0] + ".coarse"
    t0 = time.perf_counter()
    if args.baseline:
        labels = BASELINES[args.baseline](h, cfg.rr, cfg.seed)
        asg = ClusterAssignment.from_labels(labels)
        coarse, vmap = contract(h, asg, cfg.dedup, cfg.prune_singletons)
        report = local_conductance_report(h, asg.clusters, cfg.delta)
        metrics = {
            "rr": cfg.rr, "n": h.n, "m": h.m, "n_coarse": coarse.n, "m_coarse": coarse.m,
            "phi_avg": report["phi_avg"], "zero_volume_clusters": report["excluded"], "delta": cfg.delta,
        }
        wall = {"total": (time.perf_counter() - t0) * 1e3}
        clusters, emb = asg.clusters, None
    else:
        try:
            res = coarsen(h, cfg)
        except ValueError as exc:
            raise CliError("CONFIG", EXIT_CONFIG, str(exc)) from None
        coarse, vmap, emb = res.coarse, res.vertex_map, res.embedding
        metrics = {k: v for k, v in res.metrics.items() if k != "wall_ms"}
        wall = res.metrics["wall_ms"]
        clusters = res.assignment.clusters
        report = local_conductance_report(h, clusters, cfg.delta)
    echo = _echo(args, cfg)
    metrics["config"] = echo
    comment = json.dumps(echo, sort_keys=True)
    with open(outs.path(prefix + ".hgr"), "w", encoding="utf-8", newline="\n") as f:
        write_hmetis(coarse, f, comment)
    _write_text(outs, prefix + ".map", _map_text(vmap, echo))
    _write_text(outs, prefix + ".metrics.json", _json(metrics))
    if args.csv:
        write_cluster_csv(outs.path(prefix + ".clusters.csv"), clusters, report["per_cluster"])
    if args.dump_embedding:
        if emb is None:
            emb = smooth_embed(star_expand(h), cfg.k, cfg.iters, cfg.seed)
        dump_embedding(emb, outs.path(args.dump_embedding))
    timing = {"wall_ms": wall, "threads": cfg.threads or os.cpu_count() or 1, "backend": _backend.BACKEND}
    _write_text(outs, prefix + ".timing.json", _json(timing))
    print(f"{prefix}.hgr: {h.n} -> {coarse.n} vertices, phi_avg={metrics['phi_avg']:.6g}")
    return EXIT_OK


def cmd_eval(args, outs: _Outputs) -> int:
    cfg = _config(args)
    h = _load(args.input)
    _check_partition_file(cfg, h.n)
    t0 = time.perf_counter()
    if args.map:
        asg = ClusterAssignment.from_labels(_read_map(args.map, h.n))
        coarse, vmap = contract(h, asg, cfg.dedup, cfg.prune_singletons)
        result = SimpleNamespace(coarse=coarse, vertex_map=vmap)
    else:
        try:
            result = coarsen(h, cfg)
        except ValueError as exc:
            raise CliError("CONFIG", EXIT_CONFIG, str(exc)) from None
        asg = result.assignment
    report = local_conductance_report(h, asg.clusters, cfg.delta)
    out = {
        "config": _echo(args, cfg, map=args.map),
        "n": h.n,
        "n_coarse": len(asg.clusters),
        "phi_avg": report["phi_avg"],
        "zero_volume_clusters": report["excluded"],
        "delta": cfg.delta,
    }
    if args.cut:
        if args.bisection_file:
            bis = file_bisector(args.bisection_file)
        else:
            bis = spectral_bisector(cfg.k, cfg.iters, cfg.seed)
        try:
            before, after, rel = cut_preservation(h, result, bis)
        except ValueError as exc:
            raise CliError("CONFIG", EXIT_CONFIG, str(exc)) from None
        out.update(cut_before=before, cut_after=after, relative_cut_diff=rel)
    if args.baseline:
        labels = BASELINES[args.baseline](h, cfg.rr, cfg.seed)
        base = ClusterAssignment.from_labels(labels)
        out["baseline"] = {
            "name": args.baseline,
            "n_coarse": len(base.clusters),
            "phi_avg": local_conductance_report(h, base.clusters, cfg.delta)["phi_avg"],
        }
    prefix = args.out_prefix
    text = _json(out)
    if prefix:
        _write_text(outs, prefix + ".eval.json", text)
        if args.csv:
            write_cluster_csv(outs.path(prefix + ".clusters.csv"), asg.clusters, report["per_cluster"])
        timing = {"wall_ms": {"total": (time.perf_counter() - t0) * 1e3}, "backend": _backend.BACKEND}
        _write_text(outs, prefix + ".eval.timing.json", _json(timing))
    sys.stdout.write(text)
    return EXIT_OK


def cmd_partition(args, outs: _Outputs) -> int:
    cfg = _config(args)
    if args.nparts is None:
        raise CliError("CONFIG", EXIT_CONFIG, "--nparts is required")
    h = _load(args.input)
    t0 = time.perf_counter()
    emb = smooth_embed(star_expand(h), cfg.k, cfg.iters, cfg.seed)
    try:
        parts = balanced_assign(h, emb, args.nparts, args.ubfactor, replace(cfg, partition_file=None))
    except ValueError as exc:
        raise CliError("CONFIG", EXIT_CONFIG, str(exc)) from None
    sizes = np.bincount(parts.parts, minlength=args.nparts).tolist()
    out = {
        "config": _echo(args, cfg, nparts=args.nparts, ubfactor=args.ubfactor),
        "nparts": args.nparts,
        "part_sizes": sizes,
        "kway_conductance": _kway(h, parts),
    }
    prefix = args.out_prefix or os.path.splitext(args.input)[0]
    head = "% " + json.dumps(out["config"], sort_keys=True) + "\n"
    _write_text(outs, f"{prefix}.part.{args.nparts}", head + "".join(f"{q}\n" for q in parts.parts.tolist()))
    _write_text(outs, prefix + ".partition.json", _json(out))
    timing = {"wall_ms": {"total": (time.perf_counter() - t0) * 1e3}, "backend": _backend.BACKEND}
    _write_text(outs, prefix + ".partition.timing.json", _json(timing))
    sys.stdout.write(_json(out))
    return EXIT_OK


def _kway(h, parts: Partitioning):
    try:
        return kway_conductance(h, parts)
    except ValueError:
        return None


def cmd_oracle(args, outs: _Outputs) -> int:
    from .oracle import DELTAS, run_suite

    deltas = tuple(args.deltas) if args.deltas else DELTAS
    checks = run_suite(deltas, corrupt_capacities=args.corrupt_capacities)
    bad = [c for c in checks if not c.ok]
    for c in bad:
        print(f"MISMATCH {c.name}: {c.detail}")
    print(f"oracle: {len(checks) - len(bad)}/{len(checks)} checks passed")
    if bad:
        raise CliError("ORACLE", EXIT_ORACLE, f"{len(bad)} oracle mismatches")
    return EXIT_OK


# --------------------------------------------------------------------------- parser


def _common(p: argparse.ArgumentParser) -> None:
    d = CoarsenConfig()
    p.add_argument("input", help="hypergraph in hMETIS format")
    p.add_argument("--rr", type=float, default=d.rr, help="reduction ratio (fraction of vertices removed)")
    p.add_argument("--k", type=int, default=d.k, help="embedding dimension")
    p.add_argument("--iters", type=int, default=d.iters, help="Gauss-Seidel smoothing sweeps")
    p.add_argument("--delta", type=float, default=d.delta, help="locality parameter")
    p.add_argument("--epsilon", type=float, default=d.epsilon, help="flow refinement stopping threshold")
    p.add_argument("--max-iters", type=int, default=d.max_iters, help="outer flow refinement iterations")
    p.add_argument("--parts", type=int, default=None, help="part count (default max(1, n // 5000))")
    p.add_argument("--seed", type=int, default=d.seed)
    p.add_argument("--threads", type=int, default=None, help="worker threads (default: all cores)")
    p.add_argument("--dedup", action="store_true", help="merge identical coarse hyperedges")
    p.add_argument("--prune-singletons", action="store_true", help="drop coarse hyperedges with one pin")
    p.add_argument("--partition-file", default=None, help="external part file, one 0-based id per line")
    p.add_argument("--baseline", choices=sorted(BASELINES), default=None)
    p.add_argument("--out-prefix", default=None)
    p.add_argument("--csv", action="store_true", help="also write per-cluster local conductance as CSV")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="hypercoarsen", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("coarsen", help="coarsen a hypergraph")
    _common(p)
    p.add_argument("--dump-embedding", default=None, help="write vertex embedding rows to this file")

    p = sub.add_parser("eval", help="evaluate a coarsening")
    _common(p)
    p.add_argument("--map", default=None, help="evaluate this vertex map instead of running the pipeline")
    p.add_argument("--cut", action="store_true", help="report cut preservation under bisection")
    p.add_argument("--bisection-file", default=None, help="two-way part file used instead of the internal bisector")

    p = sub.add_parser("partition", help="balanced k-way partition from coarsening clusters")
    _common(p)
    p.add_argument("--nparts", type=int, default=None)
    p.add_argument("--ubfactor", type=float, default=5.0, help="imbalance tolerance in percent")

    p = sub.add_parser("oracle", help="run the bundled brute-force self-checks")
    p.add_argument("--deltas", type=float, nargs="+", default=None)
    p.add_argument("--corrupt-capacities", action="store_true", help=argparse.SUPPRESS)
    return ap


COMMANDS = {"coarsen": cmd_coarsen, "eval": cmd_eval, "partition": cmd_partition, "oracle": cmd_oracle}


def main(argv: list[str] | None = None) -> int:
    outs = _Outputs()
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, outs)
    except CliError as exc:
        outs.cleanup()
        print(f"error: {exc.cls}: {exc}", file=sys.stderr)
        return exc.code
    except OSError as exc:
        outs.cleanup()
        print(f"error: IO: {exc}", file=sys.stderr)
        return EXIT_IO
    except Exception as exc:  # noqa: BLE001
        outs.cleanup()
        print(f"error: INTERNAL: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
