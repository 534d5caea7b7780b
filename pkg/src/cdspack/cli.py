"""Command-line entry point.

Subcommands: gen, conn, pack, partition, verify, simulate, extract,
experiment.  Exit codes: 0 success, 1 verification failure, 2 usage error,
3 I/O or file-format error.  Every randomized command echoes its resolved
seed; omitting --seed draws one from system entropy and records it.
"""

from __future__ import annotations

import argparse
import json
import os
import secrets
import sys

import numpy as np

from . import experiments
from .broadcast import ScheduleError, ScheduleLog, extract_packing, simulate_broadcast
from .generators import clique_chain, harary, make_graph
from .graph import Graph, GraphFormatError, load_edgelist, save_edgelist, vertex_connectivity
from .packing import BuildParams, build_packing, packing_from_json, packing_to_json
from .partition import build_partition, partition_to_json
from .verifier import verify_packing

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _resolve_seed(seed: int | None) -> int:
    return secrets.randbits(32) if seed is None else seed


def _load_graph(path: str) -> Graph:
    return load_edgelist(path)


def cmd_gen(args) -> int:
    seed = _resolve_seed(args.seed)
    rng = np.random.default_rng(seed)
    g, meta = make_graph(args.family, k=args.k, n=args.n, eta=args.eta,
                         edge_p=args.edge_p, rng=rng)
    if args.family == "gnp" and g.n >= 2:
        if g.n <= 3000:
            meta.declared_k = vertex_connectivity(g)
        else:
            print("warning: skipping exact connectivity for n > 3000",
                  file=sys.stderr)
    save_edgelist(g, args.out)
    meta.params["seed"] = seed
    with open(args.out + ".meta.json", "w", encoding="utf-8") as fh:
        fh.write(json.dumps(meta.to_dict(), sort_keys=True,
                            separators=(",", ":")) + "\n")
    print(f"wrote {args.out} (n={g.n}, m={g.m})")
    return EXIT_OK


def cmd_conn(args) -> int:
    g = _load_graph(args.graph)
    print(vertex_connectivity(g))
    return EXIT_OK


def _resolve_k(g: Graph, spec: str) -> int:
    if spec.upper() == "AUTO":
        if g.n > 3000:
            print(f"warning: exact connectivity of n={g.n} may be slow",
                  file=sys.stderr)
        return vertex_connectivity(g)
    return int(spec)


def cmd_pack(args) -> int:
    g = _load_graph(args.graph)
    k = _resolve_k(g, args.k)
    seed = _resolve_seed(args.seed)
    params = BuildParams(lam=args.lam, delta=args.delta, p=args.p, seed=seed,
                         fallback_policy=args.fallback)
    packing, assignment = build_packing(g, k, params)
    sampled = sorted(int(v) for v in np.flatnonzero(
        (assignment.class_of >= 0).any(axis=(0, 1))))
    doc = packing_to_json(
        packing, n=g.n, k=k, p=args.p, t=assignment.t, L=assignment.cfg.L,
        valid=bool(assignment.diagnostics["valid"]),
        m_trace=assignment.m_trace,
        extra={"seed": seed, "lambda": args.lam, "delta": args.delta,
               "mu": assignment.diagnostics["mu"],
               "failed_classes": assignment.diagnostics["failed_classes"],
               "sampled": sampled})
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(doc)
    print(f"packing size {packing.size:.6g} with t={assignment.t} classes "
          f"(valid={assignment.diagnostics['valid']}, seed={seed})")
    return EXIT_OK


def cmd_partition(args) -> int:
    g = _load_graph(args.graph)
    k = _resolve_k(g, args.k)
    seed = _resolve_seed(args.seed)
    params = BuildParams(lam=args.lam, delta=args.delta, seed=seed,
                         sqrt_threshold_c=args.sqrt_c)
    result = build_partition(g, k, params)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(partition_to_json(result, extra={"n": g.n, "k": k, "seed": seed}))
    print(f"partition count {result.count} (t={result.t}, seed={seed})")
    return EXIT_OK


def cmd_verify(args) -> int:
    g = _load_graph(args.graph)
    with open(args.packing, "r", encoding="utf-8") as fh:
        packing, doc = packing_from_json(fh.read())
    if args.sampled:
        with open(args.sampled, "r", encoding="utf-8") as fh:
            sampled = [int(tok) for tok in fh.read().split()]
    elif "sampled" in doc:
        sampled = doc["sampled"]
    else:
        sampled = sorted({int(v) for nodes in doc["classes"] for v in nodes})
    report = verify_packing(g, packing, sampled if sampled else None)
    print(f"size={report.size:.6g} max_weight_sum={report.max_weight_sum:.6g} "
          f"passed={report.passed}")
    for msg in report.messages:
        print(msg, file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_simulate(args) -> int:
    g = _load_graph(args.graph)
    with open(args.packing, "r", encoding="utf-8") as fh:
        packing, _ = packing_from_json(fh.read())
    seed = _resolve_seed(args.seed)
    rng = np.random.default_rng(seed)
    sources = rng.integers(0, g.n, size=args.messages)
    messages = [(i, int(src)) for i, src in enumerate(sources)]
    log, report = simulate_broadcast(g, packing, messages, rng)
    with open(args.out + ".schedule.csv", "w", encoding="utf-8") as fh:
        fh.write(log.to_csv())
    with open(args.out + ".report.json", "w", encoding="utf-8") as fh:
        doc = json.loads(report.to_json())
        doc["seed"] = seed
        fh.write(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n")
    print(f"T={report.rounds} throughput={report.throughput:.6g} (seed={seed})")
    return EXIT_OK


def cmd_extract(args) -> int:
    g = _load_graph(args.graph)
    with open(args.log, "r", encoding="utf-8") as fh:
        log = ScheduleLog.from_csv(fh.read(), g.n)
    packing = extract_packing(log, g)
    doc = {
        "n": g.n,
        "classes": [nodes.tolist() for nodes, _ in packing.entries],
        "weights": [float(w) for _, w in packing.entries],
        "size": packing.size,
        "T": log.T,
    }
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n")
    print(f"extracted packing size {packing.size:.6g} from T={log.T} rounds")
    return EXIT_OK


def _parse_config(pairs: list[str]) -> dict:
    out = {}
    for item in pairs:
        if "=" not in item:
            raise ValueError(f"config entries are key=value, got {item!r}")
        key, val = item.split("=", 1)
        try:
            out[key] = int(val)
        except ValueError:
            try:
                out[key] = float(val)
            except ValueError:
                out[key] = val
    return out


def _experiment_graph(cfg: dict) -> tuple[Graph, int]:
    family = cfg.get("family", "harary")
    k = int(cfg.get("k", 16))
    n = int(cfg.get("n", 256))
    if family == "harary":
        return harary(k, n), k
    if family == "clique-chain":
        return clique_chain(n, k), k
    raise ValueError(f"experiment families are harary and clique-chain, got {family!r}")


def cmd_experiment(args) -> int:
    cfg = _parse_config(args.config or [])
    seed = _resolve_seed(args.seed)
    cfg_all = dict(cfg)
    cfg_all["seed"] = seed
    cfg_all["kind"] = args.kind
    g, k = _experiment_graph(cfg)
    trials = int(cfg.get("trials", 100))
    workers = args.workers
    rows: list[tuple] = []
    extra: dict = {}
    if args.kind == "sampled-conn":
        ps = [float(tok) for tok in str(cfg.get("p", "0.5")).split("/")]
        header = ["p", "statistic", "value", "trials"]
        for p in ps:
            stats = experiments.sampled_connectivity_experiment(
                g, p, trials, seed, workers=workers)
            rows += [(p, "mean", stats.mean, trials),
                     (p, "median", stats.median, trials),
                     (p, "q10", stats.quantile(0.1), trials),
                     (p, "q90", stats.quantile(0.9), trials)]
    elif args.kind == "threshold":
        alphas = [float(tok) for tok in str(cfg.get("alphas", "0.05/0.1/0.2/0.4/0.7")).split("/")]
        curve = experiments.threshold_experiment(g, k, alphas, trials, seed,
                                                 workers=workers)
        header = ["alpha", "p", "statistic", "value", "trials"]
        for pt in curve.points:
            rows += [(pt.alpha, pt.p, "connected_frac", pt.frac, pt.trials),
                     (pt.alpha, pt.p, "wilson_lo", pt.wilson_lo, pt.trials),
                     (pt.alpha, pt.p, "wilson_hi", pt.wilson_hi, pt.trials),
                     (pt.alpha, pt.p, "smoothed", pt.smoothed, pt.trials)]
        extra["alpha_star"] = curve.alpha_star
    elif args.kind == "merger":
        params = BuildParams(lam=float(cfg.get("lambda", 4.0)),
                             delta=float(cfg.get("delta", 1.0 / 16.0)),
                             p=float(cfg.get("p", 1.0)), seed=seed)
        stats = experiments.merger_trace_experiment(g, k, params, trials,
                                                    workers=workers)
        header = ["statistic", "value", "trials"]
        rows = [("domination_rate", stats.domination_rate, trials),
                ("monotone_rate", stats.monotone_rate, trials),
                ("final_zero_rate", stats.final_zero_rate, trials),
                ("valid_rate", stats.valid_rate, trials),
                ("fast_merge_rate",
                 -1.0 if stats.fast_merge_rate is None else stats.fast_merge_rate,
                 len(stats.ratios))]
    elif args.kind == "scaling":
        pairs = str(cfg.get("grid", "16x256/32x1024")).split("/")
        runs = int(cfg.get("runs", 5))
        header = ["k", "n", "run", "statistic", "value"]
        seeds = np.random.SeedSequence(seed).generate_state(
            runs * len(pairs), dtype=np.uint64)
        i = 0
        for pair in pairs:
            kk, nn = (int(x) for x in pair.split("x"))
            gg = harary(kk, nn)
            for run in range(runs):
                params = BuildParams(p=1.0, seed=int(seeds[i]))
                i += 1
                packing, assignment = build_packing(gg, kk, params)
                rows += [(kk, nn, run, "size", packing.size),
                         (kk, nn, run, "t", assignment.t),
                         (kk, nn, run, "mu", assignment.diagnostics["mu"]),
                         (kk, nn, run, "valid",
                          int(assignment.diagnostics["valid"]))]
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(args.kind)
    experiments.write_csv(args.out, header, rows)
    experiments.write_manifest(args.out + ".manifest.json", args.kind,
                               cfg_all, [os.path.basename(args.out)],
                               extra=extra)
    print(f"wrote {args.out} ({len(rows)} rows, seed={seed})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cdspack")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a graph family instance")
    p.add_argument("--family", required=True,
                   choices=["sanders", "sanders-sub", "clique-chain", "harary", "gnp"])
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--eta", type=int)
    p.add_argument("--edge-p", type=float, dest="edge_p")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("conn", help="print exact vertex connectivity")
    p.add_argument("--graph", required=True)
    p.set_defaults(fn=cmd_conn)

    p = sub.add_parser("pack", help="build a CDS packing")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", default="AUTO")
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--lambda", type=float, default=4.0, dest="lam")
    p.add_argument("--delta", type=float, default=1.0 / 16.0)
    p.add_argument("--fallback", default="absorb",
                   choices=["absorb", "report-partial"])
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_pack)

    p = sub.add_parser("partition", help="build a CDS partition")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", default="AUTO")
    p.add_argument("--lambda", type=float, default=4.0, dest="lam")
    p.add_argument("--delta", type=float, default=1.0 / 16.0)
    p.add_argument("--sqrt-c", type=float, default=1.0, dest="sqrt_c")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_partition)

    p = sub.add_parser("verify", help="verify a packing JSON against a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--packing", required=True)
    p.add_argument("--sampled")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("simulate", help="simulate broadcasts over a packing")
    p.add_argument("--graph", required=True)
    p.add_argument("--packing", required=True)
    p.add_argument("--messages", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True,
                   help="prefix; writes OUT.schedule.csv and OUT.report.json")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("extract", help="extract a packing from a schedule log")
    p.add_argument("--log", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_extract)

    p = sub.add_parser("experiment", help="run a seeded experiment campaign")
    p.add_argument("kind", choices=["sampled-conn", "threshold", "merger", "scaling"])
    p.add_argument("--config", nargs="*", metavar="KEY=VALUE")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_experiment)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (GraphFormatError, FileNotFoundError, IsADirectoryError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ScheduleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:  # console-script wrapper
    sys.exit(main())
