#!/usr/bin/env python3
"""Measure analytics latency at several class sizes.

Prints per-size wall time for the central-tendency summary, the bar
chart, and the pie chart, so the published 1-1.5 s upper bounds can be
compared against what this implementation actually does.
"""

import argparse
import random
import time
from fractions import Fraction

from gradelab.stats import (
    Dataset,
    bar_chart_data,
    central_tendency,
    pie_chart_data,
)


def bench(size: int, repeats: int, rng: random.Random) -> dict:
    scores = [(f"s{i:05d}", Fraction(rng.randint(0, 100))) for i in range(size)]
    names = {sid: f"Student {sid}" for sid, _ in scores}
    d = Dataset.from_scores(t for _, t in scores)
    timings = {}
    for label, fn in (
        ("central_tendency", lambda: central_tendency(d)),
        ("bar_chart", lambda: bar_chart_data(scores, names)),
        ("pie_chart", lambda: pie_chart_data(d, Fraction(50))),
    ):
        start = time.perf_counter()
        for _ in range(repeats):
            fn()
        timings[label] = (time.perf_counter() - start) / repeats
    return timings


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+",
                        default=[50, 100, 150, 1000, 10000])
    parser.add_argument("--repeats", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    rng = random.Random(args.seed)
    print(f"{'size':>8}  {'central':>12}  {'bar':>12}  {'pie':>12}")
    for size in args.sizes:
        t = bench(size, args.repeats, rng)
        print(f"{size:>8}  {t['central_tendency'] * 1000:>10.3f}ms"
              f"  {t['bar_chart'] * 1000:>10.3f}ms"
              f"  {t['pie_chart'] * 1000:>10.3f}ms")


if __name__ == "__main__":
    main()
