"""Elemental against exhaustive pm4 generation on random rate tuples."""

import argparse
import random
import time
from fractions import Fraction

from privic.bounds import PolymatroidInstance, polymatroid_check
from privic.catalogue import catalogue_entries
from privic.model import RateTuple


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=5, help="tuples per entry")
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    disagree = 0
    for e in catalogue_entries():
        t = time.perf_counter()
        verdicts = []
        for _ in range(args.samples):
            base = rng.choice(e.vertices).rate.as_vector(e.n)
            vec = [max(Fraction(0), v + Fraction(rng.randint(-2, 2), 2)) for v in base]
            rates = RateTuple.from_vector(vec, e.n)
            a = polymatroid_check(PolymatroidInstance(e.graph, rates)).passes
            b = polymatroid_check(PolymatroidInstance(e.graph, rates, mode="exhaustive")).passes
            disagree += a != b
            verdicts.append("P" if a else "V")
        print(f"{e.id:9s} {''.join(verdicts)} ({time.perf_counter() - t:.1f}s)")
    print("modes agree" if not disagree else f"{disagree} disagreements")
    raise SystemExit(1 if disagree else 0)


if __name__ == "__main__":
    main()
