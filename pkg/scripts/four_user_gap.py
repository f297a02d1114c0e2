"""Vector scheme at rate 5/2 against exhaustive scalar search on the four-user instance."""

import argparse

from privic.catalogue import four_user_gap_demo
from privic.catalogue.instances import GAP4_CAPS
from privic.model import format_rational
from privic.notation import scheme_to_sums


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q3", action="store_true", help="also search GF(3)")
    args = ap.parse_args()
    rep = four_user_gap_demo(q3=args.q3, relaxed=True)
    rate = rep.vector_rate
    print(f"vector scheme: {rep.vector_verdict.status}, oracle ok={rep.vector_oracle_ok}")
    print("  R =", format_rational(rate.R), {b: format_rational(v) for b, v in rate.key_rates})
    print("caps:", GAP4_CAPS)
    for q, res in rep.scalar.items():
        print(f"scalar r=2 over GF({q}): {'found' if res.found else 'none'} "
              f"({res.nodes} nodes, space {res.space})")
    if rep.relaxed.found:
        print("scalar r=3 with caps 2:", "; ".join(scheme_to_sums(rep.relaxed.scheme)))
    raise SystemExit(0 if rep.ok else 1)


if __name__ == "__main__":
    main()
