"""Time one replica for random graphs of growing size.

    python scripts/scaling.py --edges 10000 20000 40000 80000 --repeats 5
    python scripts/scaling.py --edges 300000 --avg-degree 5.45 --repeats 1
"""

import argparse
import logging
import random
import statistics
import time

from netreplica.baselines import erdos_renyi
from netreplica.config import preset
from netreplica.vcycle import replicate


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--edges", type=int, nargs="+", default=[10_000, 20_000, 40_000, 80_000])
    ap.add_argument("--avg-degree", type=float, default=5.5)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--preset", default="p1")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    cfg = preset(args.preset)
    prev = None
    for m in args.edges:
        n = int(round(2 * m / args.avg_degree))
        g = erdos_renyi(n, 2 * m / (n * (n - 1)), random.Random(m))
        times = []
        for s in range(args.repeats):
            t0 = time.perf_counter()
            replicate(g, cfg, seed=s)
            times.append(time.perf_counter() - t0)
        med = statistics.median(times)
        ratio = f"{med / prev:.2f}x" if prev else "-"
        logging.info("n=%7d  m=%7d  median %.2fs  vs previous %s", n, g.number_of_edges(), med, ratio)
        prev = med


if __name__ == "__main__":
    main()
