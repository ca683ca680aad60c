"""Compiled vs pure-Python kernels: Gauss-Seidel smoothing and Dinic max flow.

    python benchmarks/bench_kernels.py [--n 5000] [--repeat 3]

Both backends must agree exactly on every flow value and min-cut side; the script
exits nonzero otherwise.
"""
from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from hypercoarsen import _purepy
from hypercoarsen.flow import LocalHypergraph, build_flow_network, local_neighborhood
from hypercoarsen.hypergraph import star_expand
from hypercoarsen.synthetic import vlsi_like

try:
    from hypercoarsen import _kernels
except ImportError:
    _kernels = None


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def flow_networks(h, count: int, radius: int, seed: int):
    rng = np.random.default_rng(seed)
    nets = []
    for _ in range(count):
        r = {int(rng.integers(h.n))}
        region = set(r)
        for _ in range(radius):
            region = local_neighborhood(h, region)
        hl = LocalHypergraph(h, sorted(region))
        nets.append(build_flow_network(hl, sorted(r | set(list(region)[:3])), 0.5, alpha=0.5))
    return nets


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=5000)
    ap.add_argument("--k", type=int, default=25)
    ap.add_argument("--sweeps", type=int, default=10)
    ap.add_argument("--flows", type=int, default=20)
    ap.add_argument("--radius", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled extension not built; only the pure-Python kernels are available")
        return 1

    h = vlsi_like(args.n, seed=0)
    a = star_expand(h).adjacency()
    X0 = np.random.default_rng(0).uniform(-0.5, 0.5, size=(a.shape[0], args.k))
    print(f"hypergraph: n={h.n} m={h.m} pins={h.num_pins}; star graph nodes={a.shape[0]} nnz={a.nnz}")

    results = {}
    for name, mod in (("cython", _kernels), ("python", _purepy)):
        X = X0.copy()
        results[name] = best_of(lambda: mod.gauss_seidel(a.indptr, a.indices, a.data, X.copy(), args.sweeps), args.repeat)
    Xc, Xp = X0.copy(), X0.copy()
    _kernels.gauss_seidel(a.indptr, a.indices, a.data, Xc, args.sweeps)
    _purepy.gauss_seidel(a.indptr, a.indices, a.data, Xp, args.sweeps)
    gs_err = float(np.max(np.abs(Xc - Xp)))
    print(f"gauss_seidel k={args.k} sweeps={args.sweeps}: cython {results['cython'] * 1e3:9.2f} ms  "
          f"python {results['python'] * 1e3:9.2f} ms  speedup {results['python'] / results['cython']:6.1f}x  "
          f"max|diff| {gs_err:.1e}")

    nets = flow_networks(h, args.flows, args.radius, seed=1)
    sizes = [net.n_nodes for net in nets]
    agree = True
    for name, mod in (("cython", _kernels), ("python", _purepy)):
        def run(mod=mod):
            return [mod.dinic(net.n_nodes, net.tail, net.head, net.cap, 0, 1, net.eps) for net in nets]
        results[name] = best_of(run, args.repeat)
        results[name + "_out"] = run()
    for (fc, mc), (fp, mp) in zip(results["cython_out"], results["python_out"]):
        agree &= fc == fp and bool(np.array_equal(mc, mp))
    print(f"dinic x{len(nets)} (nodes {min(sizes)}..{max(sizes)}): cython {results['cython'] * 1e3:9.2f} ms  "
          f"python {results['python'] * 1e3:9.2f} ms  speedup {results['python'] / results['cython']:6.1f}x  "
          f"agree={agree}")
    return 0 if agree and gs_err < 1e-9 else 2


if __name__ == "__main__":
    sys.exit(main())
