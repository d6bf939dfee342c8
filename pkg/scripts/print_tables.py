"""Print shifted WCP, extended WCP, NSCP and SSCP polynomials for n = 1..N."""
import argparse

from liftpoly.parser import parse_sentence
from liftpoly.scp import compute_nscp, compute_sscp
from liftpoly.wcp import compute_extended_wcp, compute_wcp

UG = parse_sentence("""
predicate R/2
sentence: forall x. ~R(x,x)
sentence: forall x. forall y. (R(x,y) -> R(y,x))
""")
DG = parse_sentence("predicate R/2\nsentence: forall x. ~R(x,x)")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=4)
    args = ap.parse_args()
    rows = [
        ("WCP of undirected graphs", lambda n: compute_wcp(UG, n, "R")),
        ("extended WCP of undirected graphs", lambda n: compute_extended_wcp(UG, n, "R")),
        ("NSCP of loop-free digraphs", lambda n: compute_nscp(DG, n, "R")),
        ("SSCP of loop-free digraphs", lambda n: compute_sscp(DG, n, "R")),
    ]
    for title, fn in rows:
        print(title)
        for n in range(1, args.max_n + 1):
            print(f"  n={n}: {fn(n).shift('u', -1)}")


if __name__ == "__main__":
    main()
