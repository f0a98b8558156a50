"""Edge-colored trees: validation, degree tables, canonical forms, enumeration."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

# free (unlabeled) trees on n = 1..8 vertices
FREE_TREE_COUNTS = (1, 1, 1, 2, 3, 6, 11, 23)
MAX_ENUM_VERTICES = 8


@dataclass(frozen=True)
class ColoredTree:
    vertices: int
    edges: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        n = self.vertices
        edges = tuple((int(u), int(v), int(c)) for u, v, c in self.edges)
        object.__setattr__(self, "edges", edges)
        if n < 1:
            raise ValueError("a tree has at least one vertex")
        if len(edges) != n - 1:
            raise ValueError(f"a tree on {n} vertices has {n - 1} edges, got {len(edges)}")
        for u, v, c in edges:
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise ValueError(f"bad edge {(u, v)}")
            if c < 0:
                raise ValueError("colors are non-negative integers")
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y, _ in self.adjacency[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != n:
            raise ValueError("edge list is not connected")

    @classmethod
    def from_json(cls, obj: dict) -> "ColoredTree":
        return cls(int(obj["vertices"]), tuple(tuple(e) for e in obj["edges"]))

    def to_json(self) -> dict:
        return {"vertices": self.vertices, "edges": [list(e) for e in self.edges]}

    @cached_property
    def adjacency(self) -> list[list[tuple[int, int]]]:
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.vertices)]
        for u, v, c in self.edges:
            adj[u].append((v, c))
            adj[v].append((u, c))
        return adj

    @property
    def colors_used(self) -> set[int]:
        return {c for _, _, c in self.edges}

    def r_degree(self, v: int, r: int) -> int:
        return sum(1 for _, c in self.adjacency[v] if c == r)

    def max_r_degree(self, r: int) -> int:
        return max((self.r_degree(v, r) for v in range(self.vertices)), default=0)

    def max_color_degree(self) -> int:
        """max over colors r of the maximum r-degree."""
        return max((self.max_r_degree(r) for r in self.colors_used), default=0)

    def bfs_order(self) -> list[tuple[int, int | None, int | None]]:
        """(vertex, parent, edge color) from vertex 0; every later vertex is a leaf of the prefix."""
        order = [(0, None, None)]
        seen = {0}
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for y, c in sorted(self.adjacency[x]):
                if y not in seen:
                    seen.add(y)
                    order.append((y, x, c))
                    queue.append(y)
        return order

    def canonical_key(self, up_to_color_permutation: bool = False) -> tuple:
        if not up_to_color_permutation:
            return _canonical(self.vertices, self.edges)
        colors = sorted(self.colors_used)
        best = None
        for perm in itertools.permutations(range(len(colors))):
            relabel = dict(zip(colors, perm))
            key = _canonical(self.vertices, [(u, v, relabel[c]) for u, v, c in self.edges])
            if best is None or key < best:
                best = key
        return best


def _canonical(n: int, edges) -> tuple:
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for u, v, c in edges:
        adj[u].append((v, c))
        adj[v].append((u, c))

    def encode(x: int, parent: int) -> tuple:
        return tuple(sorted((c, encode(y, x)) for y, c in adj[x] if y != parent))

    return min(encode(root, -1) for root in range(n))


def free_trees(n: int) -> list[ColoredTree]:
    """One representative per isomorphism class of trees on n vertices (all edges color 0)."""
    if not 1 <= n <= MAX_ENUM_VERTICES:
        raise ValueError(f"tree enumeration supports 1..{MAX_ENUM_VERTICES} vertices")
    level = [ColoredTree(1, ())]
    for size in range(2, n + 1):
        nxt: dict[tuple, ColoredTree] = {}
        for tree in level:
            for attach in range(size - 1):
                grown = ColoredTree(size, tree.edges + ((attach, size - 1, 0),))
                nxt.setdefault(grown.canonical_key(), grown)
        level = list(nxt.values())
    return level


def enumerate_colored_trees(n_max: int, t: int,
                            up_to_color_permutation: bool = True) -> Iterator[ColoredTree]:
    """All colored trees on 1..n_max vertices with colors in range(t), one per class.

    Classes are tree isomorphisms preserving colors, optionally also allowing
    colors to be permuted.
    """
    if n_max > MAX_ENUM_VERTICES:
        raise ValueError(f"n_max = {n_max} exceeds the enumeration cap {MAX_ENUM_VERTICES}")
    if t < 1:
        raise ValueError("need at least one color")
    for n in range(1, n_max + 1):
        seen = set()
        for base in free_trees(n):
            pairs = [(u, v) for u, v, _ in base.edges]
            for coloring in itertools.product(range(t), repeat=len(pairs)):
                tree = ColoredTree(n, tuple((u, v, c) for (u, v), c in zip(pairs, coloring)))
                key = tree.canonical_key(up_to_color_permutation)
                if key not in seen:
                    seen.add(key)
                    yield tree
