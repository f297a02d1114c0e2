"""Multicast session counts against the sum-key-rate bracket on the named graphs."""

import argparse

from privic.bounds import mais, sum_keyrate_bracket
from privic.catalogue import NAMED_GRAPHS
from privic.coloring import multicast_min_sessions, multicast_scheme_from_coloring
from privic.model import format_rational as fr
from privic.oracle import oracle_check_multicast


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--oracle", action="store_true", help="double-check each multicast scheme")
    args = ap.parse_args()
    print(f"{'graph':18s} {'N':>2s} {'mais':>4s} {'kappa':>6s} {'b':>2s} {'L':>3s} {'key lower':>10s} {'key upper':>9s}")
    for name, g in NAMED_GRAPHS.items():
        sc = multicast_min_sessions(g)
        br = sum_keyrate_bracket(g) if g.n <= 6 else None
        line = (f"{name:18s} {g.n:2d} {mais(g)[0]:4d} {fr(sc.kappa):>6s} {sc.b:2d} {sc.L:3d} "
                f"{fr(br.lower) if br else '-':>10s} {fr(br.upper) if br else '-':>9s}")
        if args.oracle:
            rep = oracle_check_multicast(multicast_scheme_from_coloring(g, sc.coloring), g)
            line += "  oracle ok" if rep.ok else "  ORACLE FAIL"
        print(line)


if __name__ == "__main__":
    main()
