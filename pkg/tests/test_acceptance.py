"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s``.  Criteria 3 and 4 share
one batch of 150 seeded builds.  Criterion 6 is known-red: the configured
40-block chain has 39 junction cuts, so the sampled connectivity is their
minimum, well below the single-junction mean k*p^2 (see the two-block test in
test_experiments.py for the law holding on the instance with one junction);
the criterion is asserted as stated anyway.
"""

import json
import math
import time
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np
import pytest

from cdspack import (BuildParams, CdsPacking, build_packing, build_partition,
                     brute_force_max_cds_partition,
                     brute_force_vertex_connectivity, clique_chain,
                     disconnection_probability, extract_packing, harary,
                     is_cds, observation_disconnect_probability,
                     sampled_connectivity_experiment, sanders_graph,
                     simulate_broadcast, threshold_experiment, verify_packing,
                     vertex_connectivity)
from cdspack.cli import main as cli_main

from util import complete, cycle, path, petersen, random_graph, star

HARARY_FAMILY = [(16, 256), (32, 1024), (64, 4096)]
RUNS_PER_FAMILY = 50


def _report(num: int, ok: bool, detail: str) -> None:
    print(f"\nACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} - {detail}")


@lru_cache(maxsize=1)
def _family_builds():
    """150 seeded p=1 builds shared by criteria 3 and 4."""
    out = {}
    for k, n in HARARY_FAMILY:
        g = harary(k, n)
        seeds = np.random.SeedSequence(20_000 + k).generate_state(
            RUNS_PER_FAMILY, dtype=np.uint64)
        runs = []
        for s in seeds:
            packing, asg = build_packing(g, k, BuildParams(p=1.0, seed=int(s)))
            runs.append((g, packing, asg))
        out[(k, n)] = runs
    return out


def test_criterion_1_oracle_equivalence():
    t0 = time.time()
    rng = np.random.default_rng(1001)
    mismatches = 0
    for _ in range(500):
        n = int(rng.integers(2, 11))
        g = random_graph(n, float(rng.uniform(0.1, 0.95)), rng)
        if vertex_connectivity(g) != brute_force_vertex_connectivity(g):
            mismatches += 1
    for g in [complete(5), complete(9), cycle(6), cycle(10), petersen()]:
        if vertex_connectivity(g) != brute_force_vertex_connectivity(g):
            mismatches += 1
    elapsed = time.time() - t0
    ok = mismatches == 0 and elapsed < 10
    _report(1, ok, f"505 graphs, {mismatches} mismatches, {elapsed:.1f}s")
    assert ok


def _sanders_no_small_cds(k: int, samples: int, rng) -> int:
    """Structured exhaustion: no vertex set with <= k clique-layer nodes is a
    CDS.  For every clique-side pattern A' some subset node is uncovered and
    has all its neighbors outside the candidate, so it must be included yet
    stays isolated; random candidates double-check."""
    g = sanders_graph(k)
    a_nodes = list(range(2 * k))
    b_nodes = list(range(2 * k, g.n))
    neigh = {b: set(int(u) for u in g.neighbors(b)) for b in b_nodes}
    checked = 0
    for size in range(0, k + 1):
        for a_sub in combinations(a_nodes, size):
            outside = set(a_nodes) - set(a_sub)
            uncovered = [b for b in b_nodes if neigh[b] <= outside]
            assert uncovered, f"pattern {a_sub} leaves no witness subset node"
            b = uncovered[0]
            assert not is_cds(g, {b})
            checked += 1
    for _ in range(samples):
        a_sub = [a for a in a_nodes if rng.random() < 0.4][:k]
        b_sub = [b for b in b_nodes if rng.random() < 0.5]
        assert not is_cds(g, set(a_sub) | set(b_sub))
        checked += 1
    return checked


def test_criterion_2_generators():
    t0 = time.time()
    notes = []
    for k in range(1, 7):
        assert vertex_connectivity(sanders_graph(k)) == k
    notes.append("sanders k=1..6")
    for n, k in [(12, 3), (100, 10), (800, 20)]:
        assert vertex_connectivity(clique_chain(n, k)) == k
    notes.append("chain 3 sizes")
    for k, n in [(2, 16), (2, 512), (4, 64), (8, 128), (16, 512), (16, 17)]:
        assert vertex_connectivity(harary(k, n)) == k
    notes.append("harary k in {2,4,8,16}")
    # every CDS of the k=2 instance keeps >= 3 clique nodes (full exhaustion)
    g2 = sanders_graph(2)
    small = 0
    for mask in range(1, 1 << g2.n):
        members = [v for v in range(g2.n) if mask >> v & 1]
        if is_cds(g2, members) and sum(1 for v in members if v < 4) <= 2:
            small += 1
    assert small == 0
    rng = np.random.default_rng(7)
    checked = _sanders_no_small_cds(3, 2000, rng)
    notes.append(f"CDS clique-majority (2^10 full + {checked} structured/random)")
    assert brute_force_max_cds_partition(sanders_graph(2)) == 1
    assert brute_force_max_cds_partition(cycle(4)) == 2
    elapsed = time.time() - t0
    ok = elapsed < 120
    _report(2, ok, "; ".join(notes) + f"; {elapsed:.1f}s")
    assert ok


def test_criterion_3_packing_validity_and_bounds():
    t0 = time.time()
    ratios = {}
    all_ok = True
    details = []
    for (k, n), runs in _family_builds().items():
        sizes = []
        lower = 0.05 * k / math.log2(n)
        hits = 0
        for g, packing, asg in runs:
            report = verify_packing(g, packing)
            all_ok &= report.passed
            all_ok &= packing.size <= k + 1e-9
            sizes.append(packing.size)
            hits += packing.size >= lower
        rate = hits / len(runs)
        all_ok &= rate >= 0.9
        med = float(np.median(sizes))
        ratios[(k, n)] = med / (k / math.log2(n))
        details.append(f"(k={k},n={n}) med_size={med:.3f} lower_rate={rate:.2f}")
    geo = math.exp(np.mean([math.log(r) for r in ratios.values()]))
    flat = all(0.5 * geo <= r <= 2.0 * geo for r in ratios.values())
    all_ok &= flat
    elapsed = time.time() - t0
    all_ok &= elapsed < 600
    _report(3, all_ok,
            "; ".join(details) +
            f"; trend ratios {['%.3f' % ratios[f] for f in HARARY_FAMILY]} "
            f"within x2 of geomean {geo:.3f}: {flat}; {elapsed:.0f}s")
    assert all_ok


def test_criterion_4_merger_dynamics():
    t0 = time.time()
    dominated = 0
    monotone_ok = 0
    final_zero = 0
    total = 0
    for (k, n), runs in _family_builds().items():
        for g, packing, asg in runs:
            total += 1
            half = asg.cfg.L // 2
            if all(asg.dominating_after_jump):
                dominated += 1
                tail = asg.m_trace[half - 1:]
                monotone_ok += all(b <= a for a, b in zip(tail, tail[1:]))
            final_zero += asg.m_trace[-1] == 0
    dom_rate = dominated / total
    zero_rate = final_zero / total
    mono_all = monotone_ok == dominated
    ok = mono_all and dom_rate >= 0.95 and zero_rate >= 0.95
    elapsed = time.time() - t0
    ok &= elapsed < 600
    _report(4, ok, f"monotone {monotone_ok}/{dominated} dominated runs; "
                   f"domination rate {dom_rate:.3f}; M_L=0 rate {zero_rate:.3f}; "
                   f"{elapsed:.0f}s")
    assert ok


def test_criterion_5_partition_validity():
    t0 = time.time()
    ok = True
    details = []
    for k, n in HARARY_FAMILY:
        g = harary(k, n)
        counts = []
        for seed in range(3):
            res = build_partition(g, k, BuildParams(seed=seed))
            seen = np.zeros(n, bool)
            for part in res.parts:
                ok &= not seen[part].any()
                seen[part] = True
                ok &= bool(is_cds(g, part))
            ok &= bool(seen.all())
            ok &= 1 <= res.count <= k
            counts.append(res.count)
        details.append(f"(k={k},n={n}) counts={counts}")
    elapsed = time.time() - t0
    ok &= elapsed < 600
    _report(5, ok, "; ".join(details) + f"; {elapsed:.0f}s")
    assert ok


def test_criterion_6_sampling_mean():
    t0 = time.time()
    g = clique_chain(800, 20)
    k = 20
    rows = []
    ok = True
    for p in (0.4, 0.5, 0.7):
        stats = sampled_connectivity_experiment(g, p, 200, seed=6000)
        target = k * p * p
        dev = (stats.mean - target) / target
        rows.append(f"p={p}: mean={stats.mean:.2f} kp2={target:.2f} dev={dev:+.0%}")
        ok &= abs(dev) <= 0.15
    elapsed = time.time() - t0
    _report(6, ok, "; ".join(rows) + f"; {elapsed:.0f}s" +
            ("" if ok else " [known spec defect: connectivity of a 40-block "
                           "chain is the min over 39 junction cuts, not the "
                           "single-junction mean; see notes/decisions.md]"))
    assert ok


def test_criterion_7_observation_disconnection():
    t0 = time.time()
    n, k = 4096, 16
    g = clique_chain(n, k)
    p = observation_disconnect_probability(n, k)
    frac, (lo, hi) = disconnection_probability(g, p, trials=400, seed=7000)
    elapsed = time.time() - t0
    ok = frac >= 0.45 and elapsed < 600
    _report(7, ok, f"p={p:.4f}, disconnected {frac:.3f} "
                   f"(wilson [{lo:.3f},{hi:.3f}]), {elapsed:.0f}s")
    assert ok


def test_criterion_8_threshold_monotone():
    t0 = time.time()
    g = harary(64, 4096)
    alphas = [0.02, 0.04, 0.06, 0.08, 0.10, 0.13, 0.17, 0.22, 0.30, 0.45, 0.667]
    curve = threshold_experiment(g, 64, alphas, trials=60, seed=8000)
    isotone = curve.isotone_within_ci()
    star_pt = None
    if curve.alpha_star is not None:
        star_pt = next(pt for pt in curve.points if pt.alpha == curve.alpha_star)
    ok = isotone and star_pt is not None and star_pt.smoothed >= 0.9
    elapsed = time.time() - t0
    ok &= elapsed < 900
    _report(8, ok, f"isotone={isotone}; alpha*={curve.alpha_star} "
                   f"(p={star_pt.p:.3f}, Pr={star_pt.smoothed:.3f}); {elapsed:.0f}s")
    assert ok


def _roundtrip_cases():
    rng = np.random.default_rng(900)
    cases = []
    g = harary(4, 20)
    cases.append((g, build_packing(g, 4, BuildParams(seed=1))[0], 5))
    g = harary(8, 64)
    cases.append((g, build_packing(g, 8, BuildParams(seed=2))[0], 10))
    g = clique_chain(12, 3)
    res = build_partition(g, 3, BuildParams(seed=3))
    cases.append((g, CdsPacking(12, [(part, Fraction(1)) for part in res.parts]), 7))
    g = star(15)
    cases.append((g, CdsPacking(15, [(np.array([0]), Fraction(1))]), 4))
    g = path(10)
    cases.append((g, CdsPacking(10, [(np.arange(10), Fraction(1))]), 6))
    g = complete(20)
    cases.append((g, CdsPacking(20, [(np.arange(e * 5, (e + 1) * 5), Fraction(1))
                                     for e in range(4)]), 12))
    out = []
    for i in range(20):
        g, packing, msgs = cases[i % len(cases)]
        sources = [(j, int(rng.integers(0, g.n))) for j in range(msgs)]
        out.append((g, packing, sources, int(rng.integers(0, 2 ** 31))))
    return out


def test_criterion_9_throughput_equivalence():
    t0 = time.time()
    ok = True
    worst = None
    for g, packing, msgs, seed in _roundtrip_cases():
        log, report = simulate_broadcast(g, packing, msgs, np.random.default_rng(seed))
        extracted = extract_packing(log, g)
        bound = Fraction(report.messages, report.rounds)
        ok &= extracted.size_exact >= bound
        ok &= verify_packing(g, extracted).passed
        gap = float(extracted.size_exact - bound)
        worst = gap if worst is None else min(worst, gap)
    elapsed = time.time() - t0
    ok &= elapsed < 300
    _report(9, ok, f"20 round trips, min(size - p/T) = {worst:.4f} >= 0; "
                   f"{elapsed:.0f}s")
    assert ok


def test_criterion_10_determinism(tmp_path):
    t0 = time.time()
    graph_file = tmp_path / "g.txt"
    assert cli_main(["gen", "--family", "harary", "--k", "8", "--n", "64",
                     "--seed", "1", "--out", str(graph_file)]) == 0
    artifacts = []

    def run_once(tag: str) -> list[bytes]:
        d = tmp_path / tag
        d.mkdir()
        blobs = []
        pk = d / "packing.json"
        assert cli_main(["pack", "--graph", str(graph_file), "--k", "8",
                         "--seed", "11", "--out", str(pk)]) == 0
        blobs.append(pk.read_bytes())
        pt = d / "parts.json"
        assert cli_main(["partition", "--graph", str(graph_file), "--k", "8",
                         "--seed", "12", "--out", str(pt)]) == 0
        blobs.append(pt.read_bytes())
        base = d / "sim"
        assert cli_main(["simulate", "--graph", str(graph_file), "--packing",
                         str(pk), "--messages", "5", "--seed", "13",
                         "--out", str(base)]) == 0
        blobs.append((d / "sim.schedule.csv").read_bytes())
        blobs.append((d / "sim.report.json").read_bytes())
        ex = d / "extract.json"
        assert cli_main(["extract", "--log", str(d / "sim.schedule.csv"),
                         "--graph", str(graph_file), "--out", str(ex)]) == 0
        blobs.append(ex.read_bytes())
        for kind, cfg in [
            ("sampled-conn", ["family=clique-chain", "k=6", "n=60", "p=0.5",
                              "trials=8"]),
            ("threshold", ["family=harary", "k=16", "n=128",
                           "alphas=0.1/0.3/0.9", "trials=8"]),
            ("merger", ["family=harary", "k=8", "n=64", "trials=4"]),
            ("scaling", ["grid=8x64", "runs=2"]),
        ]:
            out = d / f"{kind}.csv"
            assert cli_main(["experiment", kind, "--config", *cfg,
                             "--seed", "14", "--out", str(out)]) == 0
            blobs.append(out.read_bytes())
            blobs.append((d / f"{kind}.csv.manifest.json").read_bytes())
        return blobs

    first = run_once("a")
    second = run_once("b")
    same = all(x == y for x, y in zip(first, second)) and len(first) == len(second)
    elapsed = time.time() - t0
    ok = same and elapsed < 300
    _report(10, ok, f"{len(first)} artifacts byte-identical across reruns: "
                    f"{same}; {elapsed:.0f}s")
    assert ok
