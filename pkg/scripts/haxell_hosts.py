"""Search random dense hosts for the expansion hypotheses and embed every small colored tree."""

import argparse

from fqtrees.expander import random_dense_family
from fqtrees.haxell import GoodnessParams, PairTable, check_hypotheses, embed_tree
from fqtrees.trees import enumerate_colored_trees


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--hosts", type=int, default=20)
    ap.add_argument("--n", type=int, nargs=2, default=[10, 18], metavar=("LO", "HI"))
    ap.add_argument("--t", type=int, default=2)
    ap.add_argument("--m", type=int, default=1)
    ap.add_argument("--p", type=float, default=0.8)
    ap.add_argument("--Delta", type=int, default=2)
    ap.add_argument("--strategy", default="exact-good")
    args = ap.parse_args()
    trees = [T for T in enumerate_colored_trees(7, args.t, up_to_color_permutation=False)
             if T.max_color_degree() <= args.Delta]
    found, seed = 0, 0
    while found < args.hosts:
        n = args.n[0] + seed % (args.n[1] - args.n[0] + 1)
        fam = random_dense_family(n, args.t, args.p, seed)
        table = PairTable(fam)
        rep = check_hypotheses(fam, args.Delta, args.m, table=table)
        seed += 1
        if not rep["hyp1_ok"] or rep["k_max"] is None or rep["k_max"] < 2:
            continue
        found += 1
        k = rep["k_max"]
        params = GoodnessParams(args.Delta, args.m, k)
        todo = [T for T in trees if T.vertices <= min(k, 7)]
        ok = sum(embed_tree(fam, T, params, args.strategy, table=table).success for T in todo)
        print(f"seed={seed - 1:<4} n={n:<3} k_max={k:<3} trees={len(todo):<4} embedded={ok}")


if __name__ == "__main__":
    main()
