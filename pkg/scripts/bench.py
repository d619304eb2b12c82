"""Stage timings for a seeded random graph (default n=1000, m=4000)."""

from __future__ import annotations

import argparse
import resource
import time

from graphmap.cli import build_map, compute_clustering, compute_layout, RunConfig
from graphmap.export import geojson_string, svg_string
from graphmap.style import build_render_spec
from graphmap.testgraphs import random_graph


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-n", type=int, default=1000)
    ap.add_argument("-m", type=int, default=4000)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--mode", default="natural")
    args = ap.parse_args()

    cfg = RunConfig(input="<memory>", svg="x", seed=args.seed, mode=args.mode)
    g = random_graph(args.n, args.m, 7)
    times = {}
    t = time.perf_counter()
    lay = compute_layout(g, cfg)
    times["layout"] = time.perf_counter() - t
    t = time.perf_counter()
    cl = compute_clustering(g, cfg)
    times["clustering"] = time.perf_counter() - t
    t = time.perf_counter()
    m = build_map(lay, cl, cfg)
    times["map"] = time.perf_counter() - t
    t = time.perf_counter()
    spec = build_render_spec(m, cl, g, lay)
    svg_string(m, spec)
    geojson_string(m, spec)
    times["style+export"] = time.perf_counter() - t
    for k, v in times.items():
        print(f"{k:14s} {v:6.2f}s")
    print(f"{'total':14s} {sum(times.values()):6.2f}s")
    print(f"layout iterations {lay.iterations_used}, stress {lay.final_stress:.4g}, clusters {cl.k}")
    print(f"peak RSS {resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024:.0f} MB")


if __name__ == "__main__":
    main()
