"""Seeded Monte Carlo campaigns: connectivity of vertex-sampled subgraphs,
connectivity-threshold curves over the sampling probability, merger traces of
the packing builder, and packing-size scaling sweeps.

Determinism: every experiment derives one child seed per trial from the root
seed (SeedSequence spawning) and reduces results in trial order, so outputs
are byte-identical regardless of the worker count.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .graph import Graph, induced_subgraph, is_connected, mask_to_nodes, vertex_connectivity
from .packing import BuildParams, build_packing


# ---------------------------------------------------------------------------
# Sampling and small statistics helpers
# ---------------------------------------------------------------------------

def sample_vertices(g: Graph, p: float, rng: np.random.Generator) -> np.ndarray:
    """Independent Bernoulli(p) node sample, returned as a boolean mask."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be in [0, 1]")
    return rng.random(g.n) < p


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def isotonic_fit(values: list[float], weights: list[float] | None = None) -> list[float]:
    """Pool-adjacent-violators: least-squares non-decreasing fit."""
    if weights is None:
        weights = [1.0] * len(values)
    out: list[list[float]] = []   # pooled blocks [mean, weight]
    for v, w in zip(values, weights):
        out.append([v, w])
        while len(out) > 1 and out[-2][0] > out[-1][0]:
            v2, w2 = out.pop()
            v1, w1 = out.pop()
            out.append([(v1 * w1 + v2 * w2) / (w1 + w2), w1 + w2])
    result: list[float] = []
    j = 0
    for v, w in out:
        target = w
        while target > 1e-9 and j < len(values):
            result.append(v)
            target -= weights[j]
            j += 1
    return result


def _spawn_seeds(seed: int, count: int) -> list[int]:
    """Independent per-trial integer seeds derived from one root seed."""
    state = np.random.SeedSequence(seed).generate_state(count, dtype=np.uint64)
    return [int(x) for x in state]


def _run_trials(fn, payloads, workers: int):
    if workers <= 1:
        return [fn(p) for p in payloads]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, payloads, chunksize=max(1, len(payloads) // (4 * workers))))


# ---------------------------------------------------------------------------
# Sampled-connectivity experiment
# ---------------------------------------------------------------------------

@dataclass
class SampledConnStats:
    p: float
    trials: int
    values: list[int]
    sampled_sizes: list[int]

    @property
    def mean(self) -> float:
        return float(np.mean(self.values))

    @property
    def median(self) -> float:
        return float(np.median(self.values))

    def quantile(self, q: float) -> float:
        return float(np.quantile(self.values, q))


def _sampled_conn_trial(args) -> tuple[int, int]:
    indptr, indices, n, p, trial_seed = args
    g = Graph(n, indptr, indices)
    rng = np.random.default_rng(trial_seed)
    mask = sample_vertices(g, p, rng)
    size = int(mask.sum())
    if size < 2:
        return size, 0
    sub, _ = induced_subgraph(g, mask)
    return size, int(vertex_connectivity(sub))


def sampled_connectivity_experiment(g: Graph, p: float, trials: int, seed: int,
                                    workers: int = 1) -> SampledConnStats:
    """Exact vertex connectivity of g[S] over independent samples S."""
    if trials < 1:
        raise ValueError("need at least one trial")
    seeds = _spawn_seeds(seed, trials)
    payloads = [(g.indptr, g.indices, g.n, p, s) for s in seeds]
    results = _run_trials(_sampled_conn_trial, payloads, workers)
    return SampledConnStats(p=p, trials=trials,
                            values=[c for _, c in results],
                            sampled_sizes=[s for s, _ in results])


# ---------------------------------------------------------------------------
# Connectivity-threshold experiment
# ---------------------------------------------------------------------------

@dataclass
class ThresholdPoint:
    alpha: float
    p: float
    connected: int
    trials: int
    frac: float
    wilson_lo: float
    wilson_hi: float
    smoothed: float = 0.0


@dataclass
class ThresholdCurve:
    points: list[ThresholdPoint]
    alpha_star: float | None   # smallest grid alpha with smoothed prob >= 0.9

    def isotone_within_ci(self) -> bool:
        """No significant decrease: never lo(i) > hi(j) for i < j."""
        pts = self.points
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if pts[i].wilson_lo > pts[j].wilson_hi:
                    return False
        return True


def _connected_trial(args) -> int:
    indptr, indices, n, p, trial_seed = args
    g = Graph(n, indptr, indices)
    rng = np.random.default_rng(trial_seed)
    mask = sample_vertices(g, p, rng)
    if not mask.any():
        return 0
    return int(is_connected(g, mask))


def threshold_experiment(g: Graph, k: int, alphas: list[float], trials: int,
                         seed: int, workers: int = 1,
                         threshold: float = 0.9) -> ThresholdCurve:
    """Probability that g[S] is connected as the sampling probability sweeps
    p = alpha * log2(n) / sqrt(k); reports the smallest alpha reaching the
    target probability after monotone smoothing."""
    log2n = math.log2(g.n)
    points = []
    seeds = _spawn_seeds(seed, len(alphas) * trials)
    idx = 0
    for alpha in alphas:
        p = min(1.0, alpha * log2n / math.sqrt(k))
        payloads = [(g.indptr, g.indices, g.n, p, seeds[idx + j])
                    for j in range(trials)]
        idx += trials
        hits = sum(_run_trials(_connected_trial, payloads, workers))
        lo, hi = wilson_interval(hits, trials)
        points.append(ThresholdPoint(alpha, p, hits, trials, hits / trials, lo, hi))
    smooth = isotonic_fit([pt.frac for pt in points])
    for pt, s in zip(points, smooth):
        pt.smoothed = s
    alpha_star = None
    for pt in points:
        if pt.smoothed >= threshold:
            alpha_star = pt.alpha
            break
    return ThresholdCurve(points, alpha_star)


def disconnection_probability(g: Graph, p: float, trials: int, seed: int,
                              workers: int = 1) -> tuple[float, tuple[float, float]]:
    """Fraction of samples for which g[S] is disconnected (or empty)."""
    seeds = _spawn_seeds(seed, trials)
    payloads = [(g.indptr, g.indices, g.n, p, s) for s in seeds]
    hits = trials - sum(_run_trials(_connected_trial, payloads, workers))
    return hits / trials, wilson_interval(hits, trials)


def observation_disconnect_probability(n: int, k: int) -> float:
    """Sampling probability sqrt(log2(n/2k) / (2k)) at which a k-connected
    clique chain goes disconnected at least half the time."""
    return math.sqrt(math.log2(n / (2 * k)) / (2 * k))


# ---------------------------------------------------------------------------
# Merger-trace experiment
# ---------------------------------------------------------------------------

@dataclass
class MergerStats:
    trials: int
    m_traces: list[list[int]]
    domination_rate: float
    monotone_rate: float          # among runs with all classes dominating
    final_zero_rate: float
    ratios: list[float]           # M_{l+1}/M_l over layers past L/2 with M_l>0
    fast_merge_rate: float | None # fraction of those with ratio <= 5/6
    packing_sizes: list[float]
    valid_rate: float


def _merger_trial(args) -> tuple[list[int], bool, bool, float, bool]:
    indptr, indices, n, k, params_dict, trial_seed = args
    g = Graph(n, indptr, indices)
    params = BuildParams(**{**params_dict, "seed": trial_seed})
    packing, assignment = build_packing(g, k, params)
    dominated = all(assignment.dominating_after_jump)
    half = assignment.cfg.L // 2
    tail = assignment.m_trace[half - 1:]
    monotone = all(b <= a for a, b in zip(tail, tail[1:]))
    return (assignment.m_trace, dominated, monotone, packing.size,
            bool(assignment.diagnostics["valid"]))


def merger_trace_experiment(g: Graph, k: int, params: BuildParams, trials: int,
                            workers: int = 1) -> MergerStats:
    """Distribution of the excess-component trace M over repeated builds."""
    seeds = _spawn_seeds(params.seed, trials)
    pdict = {"lam": params.lam, "delta": params.delta, "p": params.p,
             "fallback_policy": params.fallback_policy,
             "sqrt_threshold_c": params.sqrt_threshold_c,
             "t_override": params.t_override}
    payloads = [(g.indptr, g.indices, g.n, k, pdict, s) for s in seeds]
    results = _run_trials(_merger_trial, payloads, workers)
    traces = [r[0] for r in results]
    dominated = [r[1] for r in results]
    monotone = [r[2] for r in results if r[1]]
    sizes = [r[3] for r in results]
    ratios = []
    for trace in traces:
        half = len(trace) // 2
        for a, b in zip(trace[half - 1:], trace[half:]):
            if a > 0:
                ratios.append(b / a)
    valid_flags = [r[4] for r in results]
    fast = None
    if ratios:
        fast = sum(1 for r in ratios if r <= 5.0 / 6.0) / len(ratios)
    return MergerStats(
        trials=trials, m_traces=traces,
        domination_rate=sum(dominated) / trials,
        monotone_rate=(sum(monotone) / len(monotone)) if monotone else 1.0,
        final_zero_rate=sum(1 for tr in traces if tr[-1] == 0) / trials,
        ratios=ratios, fast_merge_rate=fast,
        packing_sizes=sizes,
        valid_rate=sum(valid_flags) / trials)


# ---------------------------------------------------------------------------
# CSV / manifest output
# ---------------------------------------------------------------------------

def format_value(x) -> str:
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def write_csv(path, header: list[str], rows: list[tuple]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_value(x) for x in row) + "\n")


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def write_manifest(path, experiment: str, config: dict, outputs: list[str],
                   extra: dict | None = None) -> None:
    doc = {
        "experiment": experiment,
        "config": config,
        "config_sha256": config_hash(config),
        "outputs": outputs,
    }
    if extra:
        doc.update(extra)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n")
