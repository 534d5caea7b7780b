#!/usr/bin/env python3
"""Compare the JIT kernel backend against the pure-Python fallback.

Each task runs in a fresh subprocess so the backend flag (CDSPACK_NO_NUMBA)
is picked up at import time; one warmup call excludes JIT compilation from
the timed region.

Usage: python benchmarks/bench_kernels.py [--repeats N] [--heavy]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

TASKS = {
    "connectivity_harary_16_512": (
        "from cdspack.generators import harary;"
        "from cdspack import vertex_connectivity;"
        "g = harary(16, 512);"
        "run = lambda: vertex_connectivity(g)"
    ),
    "connectivity_chain_400_20": (
        "from cdspack.generators import clique_chain;"
        "from cdspack import vertex_connectivity;"
        "g = clique_chain(400, 20);"
        "run = lambda: vertex_connectivity(g)"
    ),
    "sampled_components_harary_64_4096": (
        "import numpy as np;"
        "from cdspack.generators import harary;"
        "from cdspack import kernels;"
        "g = harary(64, 4096);"
        "masks = [np.random.default_rng(s).random(g.n) < 0.2 for s in range(50)];"
        "run = lambda: [kernels.component_labels(g.indptr, g.indices, m)[1] "
        "for m in masks]"
    ),
    "disjoint_paths_chain_2000_10": (
        "import numpy as np;"
        "from cdspack.generators import clique_chain;"
        "from cdspack import max_disjoint_bounded_paths;"
        "g = clique_chain(2000, 10);"
        "a = np.zeros(g.n, bool); a[:10] = True;"
        "b = np.zeros(g.n, bool); b[20:30] = True;"
        "run = lambda: len(max_disjoint_bounded_paths(g, a, b))"
    ),
    "packing_build_harary_32_1024": (
        "from cdspack.generators import harary;"
        "from cdspack import BuildParams, build_packing;"
        "g = harary(32, 1024);"
        "run = lambda: build_packing(g, 32, BuildParams(seed=0))[0].size"
    ),
}

HEAVY_ONLY = {"packing_build_harary_32_1024", "connectivity_chain_400_20"}

WORKER = """
import json, time, sys
{setup}
run()  # warmup (includes JIT compilation when enabled)
times = []
for _ in range({repeats}):
    t0 = time.perf_counter()
    run()
    times.append(time.perf_counter() - t0)
import cdspack
print(json.dumps({{"backend": cdspack.backend_name(), "best": min(times)}}))
"""


def run_task(name: str, setup: str, repeats: int, no_numba: bool) -> dict:
    env = dict(os.environ)
    if no_numba:
        env["CDSPACK_NO_NUMBA"] = "1"
    else:
        env.pop("CDSPACK_NO_NUMBA", None)
    code = WORKER.format(setup=setup, repeats=repeats)
    out = subprocess.run([sys.executable, "-c", code], capture_output=True,
                         text=True, env=env)
    if out.returncode != 0:
        raise RuntimeError(f"{name} failed:\n{out.stderr}")
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--heavy", action="store_true",
                    help="include the slower tasks in the fallback run too")
    args = ap.parse_args()
    print(f"{'task':<40} {'numba':>10} {'python':>10} {'speedup':>9}")
    for name, setup in TASKS.items():
        jit = run_task(name, setup, args.repeats, no_numba=False)
        if name in HEAVY_ONLY and not args.heavy:
            print(f"{name:<40} {jit['best']:>9.3f}s {'(skipped)':>10} {'':>9}")
            continue
        py = run_task(name, setup, max(1, args.repeats // 3), no_numba=True)
        speed = py["best"] / jit["best"] if jit["best"] > 0 else float("inf")
        print(f"{name:<40} {jit['best']:>9.3f}s {py['best']:>9.3f}s {speed:>8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
