"""Build and verify every avoiding / saturating / IKR instance for the given q and d."""

import argparse

from fqtrees.constructions import (
    admissible_saturating_radii, construct_avoiding, construct_ikr, construct_saturating,
)
from fqtrees.gf import field_from_q


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, nargs="+", default=[3, 7])
    ap.add_argument("--d", type=int, nargs="+", default=[3, 5])
    args = ap.parse_args()
    for q in args.q:
        spec = field_from_q(q)
        for d in args.d:
            rows = []
            for k in range(1, (d - 1) // 2 + 1):
                for r in range(1, q):
                    if k < (d - 1) / 2:
                        rows.append(construct_avoiding(spec, d, k, r).verify())
                    if r in admissible_saturating_radii(spec, d, k):
                        rows.append(construct_saturating(spec, d, k, r).verify())
            rows.append(construct_ikr(spec, d).verify())
            for v in rows:
                print(f"{v['kind']:<11} q={q} d={d} k={v['slab_k']} r={v['r']} |X|={v['size_X']:<6} "
                      f"|Y|={v['size_Y']:<5} S_r={v['S_r']:<8} |X||Y|/q^(d+1)={v['product_over_q_d1']:.3f} "
                      f"pass={v['pass']}")


if __name__ == "__main__":
    main()
