"""t-colored graph families: edge counts, mixing checks, induced families, peeling.

A family lives on a host id space ``range(host_size)``; its universe is the
subset of host ids currently in play (``members``).  Vertex sets are sorted
int64 arrays of host ids.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from .distgraph import DistanceGraphFamily, SpectralCertificate

MIX_TOL = 1e-9
_CHUNK = 4096


def vertex_set(values: Iterable[int]) -> np.ndarray:
    arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values, dtype=np.int64)
    out = np.unique(arr)
    if len(out) != len(arr):
        raise ValueError("vertex sets may not contain duplicates")
    return out


class ColoredFamily:
    """Common interface; subclasses supply ``_rows`` or ``degrees``."""

    t: int
    host_size: int
    members: np.ndarray
    certificates: list[SpectralCertificate | None]

    @property
    def universe(self) -> np.ndarray:
        return np.flatnonzero(self.members)

    def mask(self, X: np.ndarray) -> np.ndarray:
        m = np.zeros(self.host_size, dtype=bool)
        m[np.asarray(X, dtype=np.int64)] = True
        return m

    def _check_color(self, color: int):
        if not 0 <= color < self.t:
            raise ValueError(f"unknown color {color} (t = {self.t})")

    def _check_within(self, X: np.ndarray):
        X = np.asarray(X, dtype=np.int64)
        if len(X) and (X.min() < 0 or X.max() >= self.host_size or not self.members[X].all()):
            raise ValueError("vertex set leaves the family's universe")

    def neighbors(self, v: int, color: int) -> np.ndarray:
        raise NotImplementedError

    def degrees(self, vertices: np.ndarray, color: int, within: np.ndarray | None = None) -> np.ndarray:
        raise NotImplementedError

    def induce(self, S) -> "ColoredFamily":
        raise NotImplementedError

    def peel_parameters(self) -> tuple[int, float, float]:
        """(n, D, lambda) shared by all colors: min degree, max second eigenvalue."""
        if any(c is None for c in self.certificates):
            raise ValueError("peeling needs a spectral certificate for every color")
        n = self.certificates[0].n
        return n, min(c.D for c in self.certificates), max(c.lam for c in self.certificates)


@dataclass(eq=False)
class DistanceColoredFamily(ColoredFamily):
    host: DistanceGraphFamily
    members: np.ndarray = None

    def __post_init__(self):
        if self.members is None:
            self.members = np.ones(self.host.n, dtype=bool)

    @property
    def t(self) -> int:
        return self.host.t

    @property
    def host_size(self) -> int:
        return self.host.n

    @property
    def certificates(self) -> list[SpectralCertificate]:
        return [self.host.certificate(r) for r in self.host.radii]

    def _rows(self, vertices: np.ndarray, color: int) -> np.ndarray:
        return self.host.space.translate(vertices, self.host.sphere(self.host.radii[color]).points)

    def neighbors(self, v: int, color: int) -> np.ndarray:
        self._check_color(color)
        ids = self._rows(np.array([v]), color)[0]
        return np.sort(ids[self.members[ids]])

    def degrees(self, vertices, color, within=None):
        self._check_color(color)
        vertices = np.asarray(vertices, dtype=np.int64)
        keep = self.members if within is None else (self.members & within)
        out = np.empty(len(vertices), dtype=np.int64)
        step = max(1, _CHUNK * 64 // max(1, self.host.degree(self.host.radii[color])))
        for lo in range(0, len(vertices), step):
            rows = self._rows(vertices[lo:lo + step], color)
            out[lo:lo + step] = keep[rows].sum(axis=1)
        return out

    def induce(self, S) -> "DistanceColoredFamily":
        return DistanceColoredFamily(self.host, self.members & self.mask(vertex_set(S)))


@dataclass(eq=False)
class ExplicitColoredFamily(ColoredFamily):
    """Family given by one dense boolean adjacency matrix per color."""

    adjacency: list[np.ndarray]
    members: np.ndarray = None
    certificates: list = None

    def __post_init__(self):
        n = self.adjacency[0].shape[0]
        for A in self.adjacency:
            if A.shape != (n, n) or not np.array_equal(A, A.T) or A.diagonal().any():
                raise ValueError("each color must be a symmetric irreflexive relation")
        self.adjacency = [np.asarray(A, dtype=bool) for A in self.adjacency]
        if self.members is None:
            self.members = np.ones(n, dtype=bool)
        if self.certificates is None:
            self.certificates = [None] * len(self.adjacency)

    @property
    def t(self) -> int:
        return len(self.adjacency)

    @property
    def host_size(self) -> int:
        return self.adjacency[0].shape[0]

    def neighbors(self, v, color):
        self._check_color(color)
        return np.flatnonzero(self.adjacency[color][v] & self.members)

    def degrees(self, vertices, color, within=None):
        self._check_color(color)
        keep = self.members if within is None else (self.members & within)
        vertices = np.asarray(vertices, dtype=np.int64)
        return (self.adjacency[color][vertices] & keep).sum(axis=1)

    def induce(self, S) -> "ExplicitColoredFamily":
        return ExplicitColoredFamily(self.adjacency, self.members & self.mask(vertex_set(S)),
                                     self.certificates)

    @classmethod
    def from_edges(cls, n: int, t: int, edges: Iterable[Sequence[int]], certify: bool = False):
        adj = [np.zeros((n, n), dtype=bool) for _ in range(t)]
        for u, v, c in edges:
            if u == v:
                raise ValueError("loops are not allowed")
            adj[c][u, v] = adj[c][v, u] = True
        fam = cls(adj)
        if certify:
            fam.certificates = [dense_certificate(A) for A in adj]
        return fam

    def edges(self) -> list[tuple[int, int, int]]:
        out = []
        for c, A in enumerate(self.adjacency):
            us, vs = np.nonzero(np.triu(A))
            out.extend((int(u), int(v), c) for u, v in zip(us, vs))
        return out


def dense_certificate(A: np.ndarray) -> SpectralCertificate | None:
    """(n, D, lambda) for a regular graph; None when the graph is not regular."""
    deg = A.sum(axis=1)
    if len(set(deg.tolist())) != 1:
        return None
    eig = np.linalg.eigvalsh(A.astype(float))
    D = int(deg[0])
    # drop one eigenvalue equal to D (the trivial one)
    idx = int(np.argmin(np.abs(eig - D)))
    rest = np.delete(eig, idx)
    lam = float(np.max(np.abs(rest), initial=0.0))
    return SpectralCertificate(n=A.shape[0], D=D, lam=lam, claimed_bound=lam)


def complete_family(n: int, t: int = 1) -> ExplicitColoredFamily:
    A = ~np.eye(n, dtype=bool)
    return ExplicitColoredFamily([A.copy() for _ in range(t)])


def random_regular_family(n: int, D: int, t: int, seed: int) -> ExplicitColoredFamily:
    """t independent random D-regular graphs on n vertices with dense certificates."""
    children = np.random.SeedSequence(seed).spawn(t)
    adj = []
    for child in children:
        g = nx.random_regular_graph(D, n, seed=int(child.generate_state(1)[0]))
        A = np.zeros((n, n), dtype=bool)
        for u, v in g.edges():
            A[u, v] = A[v, u] = True
        adj.append(A)
    fam = ExplicitColoredFamily(adj)
    fam.certificates = [dense_certificate(A) for A in adj]
    return fam


def random_dense_family(n: int, t: int, p: float, seed: int) -> ExplicitColoredFamily:
    """t independent G(n, p) graphs; used as small hosts for the tree-embedding checks."""
    rng = np.random.Generator(np.random.PCG64(seed))
    adj = []
    for _ in range(t):
        upper = np.triu(rng.random((n, n)) < p, 1)
        adj.append(upper | upper.T)
    return ExplicitColoredFamily(adj)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def edge_count(family: ColoredFamily, color: int, X, Y) -> int:
    """#{(x, y) in X x Y : xy an edge of color}; edges inside X & Y count twice."""
    family._check_color(color)
    X, Y = vertex_set(X), vertex_set(Y)
    family._check_within(X)
    family._check_within(Y)
    if len(X) == 0 or len(Y) == 0:
        return 0
    return int(family.degrees(X, color, family.mask(Y)).sum())


def mixing_check(family: ColoredFamily, color: int, X, Y) -> dict:
    cert = family.certificates[color]
    if cert is None:
        raise ValueError(f"color {color} has no spectral certificate")
    e = edge_count(family, color, X, Y)
    nx_, ny = len(X), len(Y)
    lhs = abs(e - cert.D * nx_ * ny / cert.n)
    rhs = cert.lam * math.sqrt(nx_ * ny)
    return {"e": e, "size_x": nx_, "size_y": ny, "lhs": lhs, "rhs": rhs,
            "slack": rhs - lhs, "pass": lhs <= rhs + MIX_TOL * max(1.0, rhs)}


def mixing_sweep(family: ColoredFamily, color: int, rng: np.random.Generator,
                 samples: int, dense_cap: int = 4096) -> dict:
    """Mixing inequality on ``samples`` random (X, Y) pairs of a full host.

    Each pair draws a density uniformly in [0, 1] and then includes every
    vertex independently, so sizes span the whole range.  Edge counts come from
    one dense product when the host is small enough.
    """
    cert = family.certificates[color]
    if cert is None:
        raise ValueError(f"color {color} has no spectral certificate")
    n = family.host_size
    if not family.members.all():
        raise ValueError("the sweep expects the full host")
    dens = rng.random((samples, 2))
    Xm = rng.random((samples, n)) < dens[:, :1]
    Ym = rng.random((samples, n)) < dens[:, 1:]
    if n <= dense_cap:
        A = np.zeros((n, n), dtype=np.float64)
        for v in range(n):
            A[v, family.neighbors(v, color)] = 1.0
        e = np.rint(((Xm.astype(np.float64) @ A) * Ym).sum(axis=1)).astype(np.int64)
    else:
        e = np.array([edge_count(family, color, np.flatnonzero(x), np.flatnonzero(y))
                      for x, y in zip(Xm, Ym)], dtype=np.int64)
    sx, sy = Xm.sum(axis=1), Ym.sum(axis=1)
    lhs = np.abs(e - cert.D * sx * sy / cert.n)
    rhs = cert.lam * np.sqrt(sx * sy)
    ok = lhs <= rhs + MIX_TOL * np.maximum(1.0, rhs)
    return {"samples": samples, "failures": int((~ok).sum()), "min_slack": float((rhs - lhs).min()),
            "D": cert.D, "lambda": cert.lam, "n": cert.n}


def induce(family: ColoredFamily, S) -> ColoredFamily:
    S = vertex_set(S)
    if len(S) == 0:
        raise ValueError("cannot induce on an empty set")
    return family.induce(S)


def gamma(family: ColoredFamily, X: Iterable[tuple[int, int]]) -> np.ndarray:
    """Union of color-respecting neighbourhoods of the (vertex, color) pairs in X."""
    parts = [family.neighbors(v, c) for v, c in X]
    if not parts:
        return np.zeros(0, dtype=np.int64)
    return np.unique(np.concatenate(parts)).astype(np.int64)


@dataclass
class PeelReport:
    S: np.ndarray
    C: float
    tau: float
    W: np.ndarray
    removals: list[tuple[int, int, int]]
    bound: float
    implied_C: float
    lemma_applies: bool
    t: int
    n: int = 0
    D: int = 0
    lam: float = 0.0
    min_degrees: list[int] = field(default_factory=list)

    @property
    def removed(self) -> int:
        return len(self.removals)

    @property
    def violation(self) -> bool:
        return self.lemma_applies and self.removed > self.bound + 1e-9

    def to_dict(self, include_sets: bool = False) -> dict:
        out = {
            "size_S": int(len(self.S)), "C": self.C, "tau": self.tau, "size_W": int(len(self.W)),
            "removed": self.removed, "bound": self.bound, "implied_C": self.implied_C,
            "lemma_applies": self.lemma_applies, "violation": self.violation, "t": self.t,
            "n": self.n, "D": self.D, "lambda": self.lam, "min_degrees": self.min_degrees,
            "removals": [list(r) for r in self.removals],
        }
        if include_sets:
            out["W"] = self.W.tolist()
        return out


def peel_threshold(family: ColoredFamily, S, tau: float,
                   rng: np.random.Generator | None = None) -> tuple[np.ndarray, list]:
    """Remove vertices with some color-degree < tau inside the current set until none remain.

    Without ``rng`` the smallest-index low vertex goes first; with ``rng`` a
    uniformly random low vertex does (the fixed point is the same either way).
    """
    S = vertex_set(S)
    alive = family.mask(S) & family.members
    S = np.flatnonzero(alive)
    deg = np.stack([family.degrees(S, c, alive) for c in range(family.t)], axis=1) if len(S) else \
        np.zeros((0, family.t), dtype=np.int64)
    pos = {int(v): i for i, v in enumerate(S)}
    low = [int(v) for v, row in zip(S, deg) if (row < tau).any()]
    queued = set(low)
    heapq.heapify(low)
    removals = []
    while low:
        if rng is None:
            v = heapq.heappop(low)
        else:
            j = int(rng.integers(len(low)))
            low[j], low[-1] = low[-1], low[j]
            v = low.pop()
        row = deg[pos[v]]
        color = int(np.flatnonzero(row < tau)[0])
        removals.append((v, color, int(row[color])))
        alive[v] = False
        for c in range(family.t):
            for w in family.neighbors(v, c):
                w = int(w)
                if alive[w]:
                    i = pos[w]
                    deg[i, c] -= 1
                    if deg[i, c] < tau and w not in queued:
                        queued.add(w)
                        if rng is None:
                            heapq.heappush(low, w)
                        else:
                            low.append(w)
    return np.flatnonzero(alive), removals


def min_color_degrees(family: ColoredFamily, W) -> list[int]:
    W = vertex_set(W)
    if len(W) == 0:
        return []
    within = family.mask(W)
    return [int(family.degrees(W, c, within).min()) for c in range(family.t)]


def peel(family: ColoredFamily, S, C: float | None = None) -> PeelReport:
    """Min-degree peeling at threshold C * lambda / 4, audited against the removal bound 8tC^-2|S|.

    With ``C`` omitted the implied value |S| D / (n lambda) is used.
    """
    S = vertex_set(S)
    n, D, lam = family.peel_parameters()
    t = family.t
    implied = len(S) * D / (n * lam) if lam > 0 else math.inf
    if C is None:
        C = implied
    if C <= 0:
        raise ValueError("C must be positive")
    tau = C * lam / 4
    W, removals = peel_threshold(family, S, tau)
    bound = 8 * t * len(S) / C**2
    applies = C >= 4 * math.sqrt(t) and implied >= C - 1e-12
    return PeelReport(S=S, C=C, tau=tau, W=W, removals=removals, bound=bound, implied_C=implied,
                      lemma_applies=applies, t=t, n=n, D=D, lam=lam,
                      min_degrees=min_color_degrees(family, W))


def star_report(family: ColoredFamily, W, S_size: int) -> dict:
    """Per-color minimum degree inside W, compared with |S| / (6q) for distance families."""
    W = vertex_set(W)
    if len(W) == 0:
        return {}
    mins = min_color_degrees(family, W)
    out = {"min_degrees": mins}
    if isinstance(family, DistanceColoredFamily):
        q = family.host.spec.q
        d = family.host.d
        t = family.t
        threshold = S_size / (6 * q)
        out.update({
            "threshold": threshold,
            "degrees_ok": all(m >= threshold for m in mins),
            "size_bound": S_size - 80 * t * q ** (d + 1) / S_size if S_size else 0.0,
            "size_ok": len(W) >= S_size - 80 * t * q ** (d + 1) / S_size if S_size else True,
            "hypothesis_ok": S_size >= 12 * math.sqrt(t) * q ** ((d + 1) / 2),
        })
    return out


def probe_min_degree_conjecture(family: DistanceColoredFamily, S) -> dict:
    """Peel at |S| / (10q) over every nonzero distance and compare with 100 C^-2 |S|."""
    host = family.host
    q, d = host.spec.q, host.d
    if set(host.radii) != set(range(1, q)):
        raise ValueError("the probe needs the full distance set F_q^*")
    S = vertex_set(S)
    tau = len(S) / (10 * q)
    W, removals = peel_threshold(family, S, tau)
    C = len(S) / q ** ((d + 1) / 2)
    conj = 100 * len(S) / C**2 if C > 0 else math.inf
    return {"q": q, "d": d, "size_S": int(len(S)), "tau": tau, "C": C, "size_W": int(len(W)),
            "removed": len(removals), "conjectured_bound": conj,
            "ratio": len(removals) / conj if conj and math.isfinite(conj) else None,
            "hypothesis_ok": C > 50, "within_conjecture": len(removals) <= conj}
