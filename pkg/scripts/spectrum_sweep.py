"""Tabulate (n, D, lambda) and the bound 2 q^{(d-1)/2} for every distance graph in a (q, d) grid."""

import argparse

from fqtrees.distgraph import DistanceGraphFamily, verify_ndl
from fqtrees.gf import field_from_q


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, nargs="+", default=[3, 5, 7, 9, 11, 13])
    ap.add_argument("--d", type=int, nargs="+", default=[2, 3])
    args = ap.parse_args()
    print(f"{'q':>3} {'d':>2} {'r':>3} {'n':>6} {'D':>5} {'lambda':>9} {'bound':>8} ok")
    for q in args.q:
        spec = field_from_q(q)
        for d in args.d:
            host = DistanceGraphFamily.build(spec.p, spec.ext_degree, d, "all")
            for r in host.radii:
                v = verify_ndl(host, r)
                print(f"{q:>3} {d:>2} {r:>3} {v['n']:>6} {v['D']:>5} {v['lambda']:>9.4f} "
                      f"{v['bound']:>8.3f} {v['pass']}")


if __name__ == "__main__":
    main()
