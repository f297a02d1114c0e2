"""Scalar search at r <= 2 for every size-3 key structure of the five-user ring."""

import argparse
import time

from privic.catalogue import feasible_structures_of_size, scalar_search
from privic.catalogue.instances import RING5_NEIGHBOURS


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--width", type=int, default=2, help="key width cap per pattern")
    ap.add_argument("--q", type=int, default=2)
    args = ap.parse_args()
    structures = feasible_structures_of_size(RING5_NEIGHBOURS, 3)
    print(f"{len(structures)} feasible structures")
    found = 0
    for ks in structures:
        t = time.perf_counter()
        caps = {b: args.width for b in ks}
        hits = [r for r in (1, 2) if scalar_search(RING5_NEIGHBOURS, args.q, r, caps).found]
        found += bool(hits)
        print(f"{','.join(sorted(ks))}: {'found at r=' + str(hits[0]) if hits else 'none'} "
              f"({time.perf_counter() - t:.2f}s)")
    print("no scalar code with two transmissions" if not found else f"{found} structures admit r <= 2")


if __name__ == "__main__":
    main()
