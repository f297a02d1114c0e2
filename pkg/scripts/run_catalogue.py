"""Verify every catalogue vertex and print one line per entry."""

import argparse
import time

from privic.catalogue import catalogue_entries, verify_catalogue


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--no-oracle", action="store_true")
    args = ap.parse_args()
    bad = 0
    for e in catalogue_entries():
        t = time.perf_counter()
        rep = verify_catalogue([e], oracle=not args.no_oracle)
        bad += len(rep.failures)
        print(f"{e.id:9s} N={e.n} rows={e.printed_rows:2d} vertices={rep.vertices:2d} "
              f"failures={len(rep.failures)} ({time.perf_counter() - t:.2f}s)")
        for f in rep.failures:
            print(f"    vertex {f.vertex} {f.rates}: {f.check}: {f.detail}")
    print("all vertices verified" if not bad else f"{bad} failures")
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
