"""One-pass depth-first search for embedding [t]-colored paths.

State: a pool A of unused vertices, the current path U, and dead-end bins
B_1..B_t.  Every step moves exactly one vertex, A -> U or U -> B_r.  A vertex
lands in B_r only when it has no color-r neighbour left in A, so
e_{G_r}(A, B_r) = 0 throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from .expander import ColoredFamily, DistanceColoredFamily, edge_count, vertex_set
from .incidence import SphereSet, count_incidences


class DfsError(RuntimeError):
    pass


@dataclass(frozen=True)
class ColoredPath:
    length: int
    colors: tuple[int, ...]

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("a path has at least one vertex")
        if len(self.colors) != self.length - 1:
            raise ValueError("a path on l vertices needs l - 1 edge colors")

    @classmethod
    def cyclic(cls, length: int, t: int) -> "ColoredPath":
        return cls(length, tuple(i % t for i in range(length - 1)))

    @classmethod
    def constant(cls, length: int, color: int = 0) -> "ColoredPath":
        return cls(length, (color,) * (length - 1))

    @classmethod
    def random(cls, length: int, t: int, seed: int) -> "ColoredPath":
        rng = np.random.Generator(np.random.PCG64(seed))
        return cls(length, tuple(int(c) for c in rng.integers(0, t, size=length - 1)))


@dataclass
class DfsState:
    in_A: np.ndarray  # bool mask over host ids
    U: list[int]
    B: list[list[int]]
    steps: int = 0
    size_A: int = 0
    _cursor: int = 0

    @classmethod
    def initial(cls, family: ColoredFamily, S) -> "DfsState":
        S = vertex_set(S)
        family._check_within(S)
        mask = family.mask(S)
        return cls(in_A=mask, U=[], B=[[] for _ in range(family.t)], size_A=len(S))

    @property
    def terminal(self) -> bool:
        return self.size_A == 0 and not self.U

    def A(self) -> np.ndarray:
        return np.flatnonzero(self.in_A)

    def census(self) -> dict:
        return {"size_A": self.size_A, "size_U": len(self.U),
                "size_B": [len(b) for b in self.B], "steps": self.steps}

    def _pop_smallest_A(self) -> int:
        while not self.in_A[self._cursor]:
            self._cursor += 1
        v = self._cursor
        self.in_A[v] = False
        self.size_A -= 1
        return v


def dfs_step(state: DfsState, family: ColoredFamily, path: ColoredPath) -> DfsState:
    """Advance one move in place (and return the state)."""
    if state.terminal:
        raise DfsError("dfs_step called on a terminal state")
    if not state.U:
        state.U.append(state._pop_smallest_A())
    else:
        k = len(state.U)
        if k >= path.length:
            raise DfsError("the path is already fully embedded")
        color = path.colors[k - 1]
        nbrs = family.neighbors(state.U[-1], color)
        free = nbrs[state.in_A[nbrs]]
        if len(free):
            w = int(free.min())
            state.in_A[w] = False
            state.size_A -= 1
            state.U.append(w)
        else:
            state.B[color].append(state.U.pop())
    state.steps += 1
    return state


def validate_state(state: DfsState, family: ColoredFamily, path: ColoredPath, S) -> None:
    """Raise DfsError if the partition, path-prefix or no-edge invariants fail."""
    S = vertex_set(S)
    A = state.A()
    parts = [A, np.array(state.U, dtype=np.int64)] + [np.array(b, dtype=np.int64) for b in state.B]
    joined = np.concatenate(parts)
    if len(joined) != len(S) or not np.array_equal(np.sort(joined), S):
        raise DfsError("A, U and the B sets do not partition S")
    if len(A) != state.size_A:
        raise DfsError("A size counter out of sync")
    for i in range(len(state.U) - 1):
        if state.U[i + 1] not in set(family.neighbors(state.U[i], path.colors[i]).tolist()):
            raise DfsError(f"U breaks the path at position {i}")
    for r, b in enumerate(state.B):
        if b and len(A) and edge_count(family, r, A, b) != 0:
            raise DfsError(f"edge between A and B_{r}")


def dfs_run(family: ColoredFamily, S, path: ColoredPath) -> Iterator[DfsState]:
    """Yield the initial state and the state after each step until success or exhaustion."""
    state = DfsState.initial(family, S)
    yield state
    while not state.terminal and len(state.U) < path.length:
        dfs_step(state, family, path)
        yield state


@dataclass
class PathResult:
    success: bool
    embedding: list[int]
    max_U: int
    census: dict
    length: int

    def to_dict(self) -> dict:
        return {"success": self.success, "length": self.length, "max_U": self.max_U,
                "census": self.census, "embedding": self.embedding}


def check_path_embedding(family: ColoredFamily, path: ColoredPath, emb: Sequence[int]) -> bool:
    if len(emb) != path.length or len(set(emb)) != len(emb):
        return False
    if not family.members[np.asarray(emb, dtype=np.int64)].all():
        return False
    return all(emb[i + 1] in set(family.neighbors(emb[i], c).tolist())
               for i, c in enumerate(path.colors))


def embed_path(family: ColoredFamily, S, path: ColoredPath,
               validate: bool = False,
               on_step: Callable[[DfsState], None] | None = None) -> PathResult:
    if any(not 0 <= c < family.t for c in path.colors):
        raise ValueError("path colors exceed the family's colors")
    S = vertex_set(S)
    max_U = 0
    state = None
    for state in dfs_run(family, S, path):
        max_U = max(max_U, len(state.U))
        if validate:
            validate_state(state, family, path, S)
        if on_step is not None:
            on_step(state)
    if len(state.U) >= path.length:
        emb = [int(v) for v in state.U[:path.length]]
        if not check_path_embedding(family, path, emb):
            raise DfsError("internal error: produced an invalid embedding")
        return PathResult(True, emb, max_U, state.census(), path.length)
    return PathResult(False, [], max_U, state.census(), path.length)


def path_bound(n: int, D: float, lam: float, t: int, size_S: int) -> float:
    """Longest path length guaranteed by the mixing-lemma accounting: |S| - 2 lambda n t^{1/2} / D."""
    return size_S - 2 * lam * n * math.sqrt(t) / D


def incidence_certificate(state: DfsState, family: ColoredFamily) -> dict:
    """Read the B bins as spheres (center b, radius r) and audit the incidence accounting."""
    if not isinstance(family, DistanceColoredFamily):
        raise TypeError("the incidence certificate needs a distance family")
    host = family.host
    q, d = host.spec.q, host.d
    spheres = SphereSet([(int(b), host.radii[r]) for r, bins in enumerate(state.B) for b in bins])
    A = state.A()
    inc = count_incidences(host.space, A, spheres)
    size_C = len(spheres)
    threshold = q ** ((d + 2) / 2)
    # I(A, C) = 0 with the incidence bound gives |A| |C| <= q^{d+2}
    general_ok = len(A) == 0 or size_C == 0 or len(A) * size_C <= q ** (d + 2)
    out = {"size_A": len(A), "size_C": size_C, "incidences": inc, "zero_ok": inc == 0,
           "product_ok": general_ok, "threshold": threshold}
    if len(A) >= threshold:
        out["bound_ok"] = size_C <= threshold
    return out


def threshold_snapshot(family: DistanceColoredFamily, S, path: ColoredPath) -> dict:
    """Run DFS and certify every snapshot; report the one where |A| first drops below 1 + q^{(d+2)/2}."""
    host = family.host
    limit = 1 + host.spec.q ** ((host.d + 2) / 2)
    first = None
    all_zero = True
    product_ok = True
    for state in dfs_run(family, S, path):
        cert = incidence_certificate(state, family)
        all_zero &= cert["zero_ok"]
        product_ok &= cert["product_ok"]
        if first is None and state.size_A < limit:
            first = dict(cert, step=state.steps, sum_B=sum(len(b) for b in state.B),
                         sum_B_ok=sum(len(b) for b in state.B) <= limit - 1)
    return {"snapshot": first, "all_zero": all_zero, "all_product_ok": product_ok, "limit": limit}
