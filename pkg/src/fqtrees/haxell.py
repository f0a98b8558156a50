"""Colorful Haxell machinery: residual function, s-goodness, leaf extension, tree embedding.

For a partial embedding phi of a colored tree H into a family G and a set X
of (host vertex, color) pairs,

    R(X, phi) = |Gamma(X) minus phi(H)| - sum_{(v, r) in X} (Delta - D_{H,r}(phi^-1(v)))

with D_{H,r}(phi^-1(v)) = 0 off the image.  phi is s-good when R >= 0 for
every |X| <= s.  Goodness checks enumerate subsets exhaustively; host
neighbourhoods are packed into uint64 bit-rows so each subset size is a
handful of numpy reductions.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

import numpy as np

from .expander import ColoredFamily, DistanceColoredFamily, vertex_set
from .trees import ColoredTree

ENUM_CAP = 4_000_000
BACKTRACK_NODE_CAP = 2_000_000
STRATEGIES = ("exact-good", "greedy", "backtrack")


class Verdict(str, enum.Enum):
    GOOD = "good"
    BAD = "bad"
    CAPPED = "capped"


class EmbeddingError(RuntimeError):
    pass


@dataclass
class PartialEmbedding:
    """Injective map from embedded tree vertices to host vertices."""

    t: int
    phi: dict[int, int] = field(default_factory=dict)
    pull_degree: dict[int, list[int]] = field(default_factory=dict)

    @property
    def image(self) -> set[int]:
        return set(self.phi.values())

    def copy(self) -> "PartialEmbedding":
        return PartialEmbedding(self.t, dict(self.phi), {k: list(v) for k, v in self.pull_degree.items()})

    def place_root(self, tree_vertex: int, host: int) -> "PartialEmbedding":
        if host in self.image:
            raise EmbeddingError("host vertex already used")
        out = self.copy()
        out.phi[tree_vertex] = host
        out.pull_degree[host] = [0] * self.t
        return out

    def extend(self, tree_vertex: int, parent: int, color: int, host: int) -> "PartialEmbedding":
        if tree_vertex in self.phi:
            raise EmbeddingError(f"tree vertex {tree_vertex} is already embedded")
        if parent not in self.phi:
            raise EmbeddingError(f"parent {parent} is not embedded")
        if host in self.image:
            raise EmbeddingError("host vertex already used")
        out = self.place_root(tree_vertex, host)
        out.pull_degree[host][color] += 1
        out.pull_degree[self.phi[parent]][color] += 1
        return out

    def degree_at(self, host: int, r: int) -> int:
        row = self.pull_degree.get(host)
        return 0 if row is None else row[r]


def residual_R(family: ColoredFamily, phi: PartialEmbedding, Delta: int,
               X: Iterable[tuple[int, int]]) -> int:
    """Direct evaluation of R(X, phi) from neighbour lists."""
    X = list(X)
    if len(set(X)) != len(X):
        raise ValueError("X must not repeat pairs")
    covered: set[int] = set()
    for v, r in X:
        covered.update(int(w) for w in family.neighbors(v, r))
    slack = sum(Delta - phi.degree_at(v, r) for v, r in X)
    return len(covered - phi.image) - slack


@lru_cache(maxsize=64)
def _combos(P: int, s: int) -> np.ndarray:
    flat = np.fromiter(itertools.chain.from_iterable(itertools.combinations(range(P), s)),
                       dtype=np.int32, count=math.comb(P, s) * s)
    return flat.reshape(-1, s)


def subset_count(P: int, s: int) -> int:
    return sum(math.comb(P, i) for i in range(1, min(s, P) + 1))


class PairTable:
    """Bit-packed neighbourhoods of all (vertex, color) pairs of a family.

    Pair index = position of v in the universe * t + color.
    """

    def __init__(self, family: ColoredFamily):
        self.family = family
        self.universe = family.universe
        self.t = family.t
        self.pos = {int(v): i for i, v in enumerate(self.universe)}
        self.words = max(1, (len(self.universe) + 63) // 64)
        self.P = len(self.universe) * self.t
        masks = np.zeros((self.P, self.words), dtype=np.uint64)
        for i, v in enumerate(self.universe):
            for r in range(self.t):
                for w in family.neighbors(int(v), r):
                    j = self.pos[int(w)]
                    masks[i * self.t + r, j // 64] |= np.uint64(1) << np.uint64(j % 64)
        self.masks = masks

    def pair(self, idx: int) -> tuple[int, int]:
        return int(self.universe[idx // self.t]), idx % self.t

    def pairs(self, idxs) -> list[tuple[int, int]]:
        return [self.pair(int(i)) for i in idxs]

    def vertex_mask(self, vertices: Iterable[int]) -> np.ndarray:
        m = np.zeros(self.words, dtype=np.uint64)
        for v in vertices:
            j = self.pos[int(v)]
            m[j // 64] |= np.uint64(1) << np.uint64(j % 64)
        return m

    def weights(self, phi: PartialEmbedding, Delta: int) -> np.ndarray:
        w = np.full(self.P, Delta, dtype=np.int64)
        for host, row in phi.pull_degree.items():
            i = self.pos[int(host)]
            w[i * self.t:(i + 1) * self.t] -= np.asarray(row, dtype=np.int64)
        return w

    def coverage(self, combos: np.ndarray, exclude: np.ndarray | None = None) -> np.ndarray:
        """|Gamma(X) minus exclude| for every row of pair indices."""
        acc = np.bitwise_or.reduce(self.masks[combos], axis=1)
        if exclude is not None:
            acc &= ~exclude
        return np.bitwise_count(acc).sum(axis=1).astype(np.int64)

    def residuals(self, s: int, phi: PartialEmbedding, Delta: int):
        """Yield (combos, R values) for each subset size 1..s."""
        img = self.vertex_mask(phi.image)
        w = self.weights(phi, Delta)
        for size in range(1, min(s, self.P) + 1):
            combos = _combos(self.P, size)
            yield combos, self.coverage(combos, img) - w[combos].sum(axis=1)


@dataclass
class Goodness:
    verdict: Verdict
    s: int
    witness: list[tuple[int, int]] | None = None
    value: int | None = None

    def __bool__(self):
        return self.verdict is Verdict.GOOD


def is_s_good(family: ColoredFamily, phi: PartialEmbedding, Delta: int, s: int,
              cap: int = ENUM_CAP, table: PairTable | None = None) -> Goodness:
    """Exhaustive check of R(X, phi) >= 0 over all |X| <= s; witness is the first violator."""
    if s <= 0:
        return Goodness(Verdict.GOOD, s)
    table = table or PairTable(family)
    if subset_count(table.P, s) > cap:
        return Goodness(Verdict.CAPPED, s)
    for combos, R in table.residuals(s, phi, Delta):
        bad = np.flatnonzero(R < 0)
        if len(bad):
            i = int(bad[0])
            return Goodness(Verdict.BAD, s, table.pairs(combos[i]), int(R[i]))
    return Goodness(Verdict.GOOD, s)


def check_hypotheses(family: ColoredFamily, Delta: int, m: int, k: int | None = None,
                     cap: int = ENUM_CAP, table: PairTable | None = None) -> dict:
    """Expansion hypotheses: |Gamma(X)| >= Delta|X| + 1 (|X| <= m) and >= Delta|X| + k (m < |X| <= 2m).

    ``k_max`` is the largest k the second clause allows (None when it is vacuous).
    """
    table = table or PairTable(family)
    report = {"Delta": Delta, "m": m, "k": k, "P": table.P, "verdict": None}
    if subset_count(table.P, 2 * m) > cap:
        report["verdict"] = Verdict.CAPPED.value
        return report
    slack1, wit1 = None, None
    slack2, wit2 = None, None
    for size in range(1, min(2 * m, table.P) + 1):
        combos = _combos(table.P, size)
        excess = table.coverage(combos) - Delta * size
        i = int(np.argmin(excess))
        val = int(excess[i])
        if size <= m:
            if slack1 is None or val - 1 < slack1:
                slack1, wit1 = val - 1, table.pairs(combos[i])
        else:
            if slack2 is None or val < slack2:
                slack2, wit2 = val, table.pairs(combos[i])
    hyp1 = slack1 is None or slack1 >= 0
    k_max = slack2
    hyp2 = k is None or k_max is None or k_max >= k
    report.update({
        "hyp1_ok": hyp1, "hyp1_slack": slack1, "hyp1_witness": None if hyp1 else wit1,
        "k_max": k_max,
        "hyp2_ok": hyp2, "hyp2_slack": None if (k is None or k_max is None) else k_max - k,
        "hyp2_witness": None if hyp2 else wit2,
        "tightest_small": wit1, "tightest_large": wit2,
    })
    report["verdict"] = "pass" if hyp1 and hyp2 else "fail"
    return report


@dataclass
class GoodnessParams:
    Delta: int
    m: int
    tree_bound_k: int
    s_cap: int | None = None

    def __post_init__(self):
        if self.s_cap is None:
            self.s_cap = 2 * self.m
        if self.tree_bound_k < 1:
            raise ValueError("tree_bound_k must be at least 1")
        if not (0 <= self.s_cap <= max(2 * self.m, 0)) and not (self.m == 0 and self.s_cap == 0):
            raise ValueError("s_cap must lie in [1, 2m]")


def _candidates(family: ColoredFamily, phi: PartialEmbedding, anchor: int, color: int) -> np.ndarray:
    nbrs = family.neighbors(anchor, color)
    img = phi.image
    return np.array([w for w in nbrs.tolist() if w not in img], dtype=np.int64)


def _greedy_score(family: ColoredFamily, w: int, image: set[int]) -> int:
    used = image | {w}
    return min(sum(1 for x in family.neighbors(w, r).tolist() if x not in used)
               for r in range(family.t))


@dataclass
class ExtendResult:
    phi: PartialEmbedding | None
    witness: list[tuple[int, int]] | None = None
    tried: int = 0


def extend_leaf(family: ColoredFamily, phi: PartialEmbedding, tree: ColoredTree, v: int, u: int,
                color: int, Delta: int, strategy: str = "exact-good", s_cap: int = 2,
                table: PairTable | None = None, cap: int = ENUM_CAP) -> ExtendResult:
    """Embed new leaf v hanging off embedded u by an edge of ``color``."""
    if u not in phi.phi:
        raise EmbeddingError(f"anchor {u} is not embedded")
    if v in phi.phi:
        raise EmbeddingError(f"leaf {v} is already embedded")
    if phi.degree_at(phi.phi[u], color) + 1 > Delta:
        raise EmbeddingError("extension would exceed the color-degree cap")
    cands = _candidates(family, phi, phi.phi[u], color)
    if len(cands) == 0:
        return ExtendResult(None)
    if strategy == "greedy":
        img = phi.image
        best = max(cands.tolist(), key=lambda w: (_greedy_score(family, w, img), -w))
        return ExtendResult(phi.extend(v, u, color, best), tried=len(cands))
    if strategy != "exact-good":
        raise ValueError(f"unknown extension strategy {strategy!r}")
    table = table or PairTable(family)
    witness = None
    for i, w in enumerate(cands.tolist()):
        nxt = phi.extend(v, u, color, w)
        g = is_s_good(family, nxt, Delta, s_cap, cap=cap, table=table)
        if g.verdict is Verdict.CAPPED:
            raise EmbeddingError("goodness enumeration exceeds the cap; use the greedy strategy")
        if g:
            return ExtendResult(nxt, tried=i + 1)
        if witness is None:
            witness = g.witness
    return ExtendResult(None, witness=witness, tried=len(cands))


@dataclass
class TreeEmbeddingResult:
    success: bool
    strategy: str
    embedding: dict[int, int] | None
    embedded: int
    failed_vertex: int | None = None
    witness: list[tuple[int, int]] | None = None

    def to_dict(self) -> dict:
        return {
            "success": self.success, "strategy": self.strategy, "embedded": self.embedded,
            "embedding": None if self.embedding is None else [self.embedding[i] for i in sorted(self.embedding)],
            "failed_vertex": self.failed_vertex,
            "witness": None if self.witness is None else [list(x) for x in self.witness],
        }


def validate_tree_embedding(family: ColoredFamily, tree: ColoredTree, emb: dict[int, int]) -> bool:
    if sorted(emb) != list(range(tree.vertices)):
        return False
    if len(set(emb.values())) != tree.vertices:
        return False
    if not family.members[np.array(list(emb.values()), dtype=np.int64)].all():
        return False
    return all(emb[b] in set(family.neighbors(emb[a], c).tolist()) for a, b, c in tree.edges)


def _check_tree(family: ColoredFamily, tree: ColoredTree, params: GoodnessParams):
    if any(c >= family.t for c in tree.colors_used):
        raise ValueError("tree uses more colors than the family has")
    if tree.max_color_degree() > params.Delta:
        raise ValueError("tree exceeds the color-degree cap Delta")
    if tree.vertices > params.tree_bound_k:
        raise ValueError("tree is larger than tree_bound_k")


def embed_tree(family: ColoredFamily, tree: ColoredTree, params: GoodnessParams,
               strategy: str = "exact-good", cap: int = ENUM_CAP,
               table: PairTable | None = None) -> TreeEmbeddingResult:
    """Embed leaf by leaf in breadth-first order from tree vertex 0."""
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    _check_tree(family, tree, params)
    if strategy == "backtrack":
        return _embed_backtrack(family, tree)
    universe = family.universe
    if len(universe) == 0:
        return TreeEmbeddingResult(False, strategy, None, 0, failed_vertex=0)
    order = tree.bfs_order()
    empty = PartialEmbedding(family.t)
    if strategy == "exact-good":
        table = table or PairTable(family)
        if subset_count(table.P, params.s_cap) > cap:
            raise EmbeddingError("goodness enumeration exceeds the cap; use the greedy strategy")
        phi = None
        witness = None
        for v in universe.tolist():
            trial = empty.place_root(0, v)
            g = is_s_good(family, trial, params.Delta, params.s_cap, cap=cap, table=table)
            if g:
                phi = trial
                break
            witness = witness or g.witness
        if phi is None:
            return TreeEmbeddingResult(False, strategy, None, 0, failed_vertex=0, witness=witness)
    else:
        img_best = max(universe.tolist(), key=lambda w: (_greedy_score(family, w, set()), -w))
        phi = empty.place_root(0, img_best)
    for v, parent, color in order[1:]:
        res = extend_leaf(family, phi, tree, v, parent, color, params.Delta, strategy,
                          params.s_cap, table=table, cap=cap)
        if res.phi is None:
            return TreeEmbeddingResult(False, strategy, None, len(phi.phi), failed_vertex=v,
                                       witness=res.witness)
        phi = res.phi
    if not validate_tree_embedding(family, tree, phi.phi):
        raise EmbeddingError("internal error: produced an invalid tree embedding")
    return TreeEmbeddingResult(True, strategy, dict(phi.phi), tree.vertices)


def _embed_backtrack(family: ColoredFamily, tree: ColoredTree,
                     node_cap: int = BACKTRACK_NODE_CAP) -> TreeEmbeddingResult:
    order = tree.bfs_order()
    universe = family.universe.tolist()
    emb: dict[int, int] = {}
    used: set[int] = set()
    nodes = 0

    def rec(i: int) -> bool:
        nonlocal nodes
        if i == len(order):
            return True
        v, parent, color = order[i]
        pool = universe if parent is None else family.neighbors(emb[parent], color).tolist()
        for w in pool:
            if w in used:
                continue
            nodes += 1
            if nodes > node_cap:
                raise EmbeddingError("backtracking exceeded its node budget")
            emb[v] = w
            used.add(w)
            if rec(i + 1):
                return True
            used.discard(w)
            del emb[v]
        return False

    ok = rec(0)
    if ok:
        if not validate_tree_embedding(family, tree, emb):
            raise EmbeddingError("internal error: produced an invalid tree embedding")
        return TreeEmbeddingResult(True, "backtrack", dict(emb), tree.vertices)
    return TreeEmbeddingResult(False, "backtrack", None, 0)


def distance_tree_parameters(family: DistanceColoredFamily, size_S: int, Delta: int) -> dict:
    """Guarantees for trees inside an induced distance family, computed even when vacuous.

    ``k_induced`` uses the family's own (n, D, lambda); ``k_distance`` uses the
    field-level bound 30 (t Delta)^{1/2} q^{(d+1)/2}.
    """
    n, D, lam = family.peel_parameters()
    t = family.t
    host = family.host
    q, d = host.spec.q, host.d
    scale = n * lam / D
    return {
        "t": t, "Delta": Delta, "n": n, "D": D, "lambda": lam, "size_S": size_S,
        "k_induced": size_S - 10 * math.sqrt(t * Delta) * scale,
        "m_induced": math.sqrt(t) / math.sqrt(Delta) * scale,
        "k_distance": size_S - 30 * math.sqrt(t * Delta) * q ** ((d + 1) / 2),
    }
