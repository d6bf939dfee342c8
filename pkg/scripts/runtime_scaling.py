"""Time WCP computation for simple undirected graphs and print log-runtime differences."""
import argparse
import math
import time

from liftpoly.parser import parse_sentence
from liftpoly.wcp import compute_wcp

UG = parse_sentence("""
predicate R/2
sentence: forall x. ~R(x,x)
sentence: forall x. forall y. (R(x,y) -> R(y,x))
""")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="4,8,12,16,20,24")
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    logs = []
    print(f"{'n':>4} {'seconds':>12} {'log t':>8} {'n log 2':>8}")
    for n in sizes:
        best = math.inf
        for _ in range(args.repeats):
            start = time.perf_counter()
            compute_wcp(UG, n, "R")
            best = min(best, time.perf_counter() - start)
        logs.append(math.log(best))
        print(f"{n:>4} {best:>12.6f} {logs[-1]:>8.3f} {n * math.log(2):>8.3f}")
    first = [b - a for a, b in zip(logs, logs[1:])]
    second = [b - a for a, b in zip(first, first[1:])]
    print("second differences of log t:", ", ".join(f"{d:+.3f}" for d in second))


if __name__ == "__main__":
    main()
