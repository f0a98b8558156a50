"""Point-sphere incidences in F_q^d.

A sphere is a (center, radius) pair with the center given as a point index;
radius 0 is allowed.  Counts are exact; two independent strategies are kept
so each can check the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .distgraph import sphere
from .gf import FqSpace

PAIR_CAP = 2**26


@dataclass(frozen=True)
class SphereSet:
    spheres: tuple[tuple[int, int], ...]

    def __init__(self, spheres: Iterable[tuple[int, int]]):
        items = tuple((int(c), int(r)) for c, r in spheres)
        if len(set(items)) != len(items):
            raise ValueError("sphere set contains a repeated (center, radius) pair")
        object.__setattr__(self, "spheres", items)

    def __len__(self) -> int:
        return len(self.spheres)

    def centers(self) -> np.ndarray:
        return np.array([c for c, _ in self.spheres], dtype=np.int64)

    def radii(self) -> np.ndarray:
        return np.array([r for _, r in self.spheres], dtype=np.int64)


def count_by_pairs(space: FqSpace, X, Y: SphereSet) -> int:
    """Test every (point, sphere) pair: ||x - c|| == r."""
    X = np.asarray(X, dtype=np.int64)
    if len(X) == 0 or len(Y) == 0:
        return 0
    if len(X) * len(Y) > PAIR_CAP:
        raise ValueError(f"|X||Y| = {len(X) * len(Y)} exceeds the pair cap {PAIR_CAP}")
    xc = space.coords_of(X)
    cc = space.coords_of(Y.centers())
    radii = Y.radii()
    total = 0
    step = max(1, PAIR_CAP // (16 * max(1, len(X))))
    for lo in range(0, len(Y), step):
        diff = space.sub(xc[:, None, :], cc[None, lo:lo + step, :])
        total += int((space.norm(diff) == radii[None, lo:lo + step]).sum())
    return total


def count_by_spheres(space: FqSpace, X, Y: SphereSet) -> int:
    """Translate each sphere's point set and count members of X on it."""
    X = np.asarray(X, dtype=np.int64)
    if len(X) == 0 or len(Y) == 0:
        return 0
    member = np.zeros(space.n, dtype=bool)
    member[X] = True
    total = 0
    radii = Y.radii()
    centers = Y.centers()
    for r in np.unique(radii):
        pts = sphere(space, int(r)).points
        if len(pts) == 0:
            continue
        ids = space.translate(centers[radii == r], pts)
        total += int(member[ids].sum())
    return total


def count_incidences(space: FqSpace, X, Y: SphereSet, strategy: str = "auto") -> int:
    if strategy == "pairs":
        return count_by_pairs(space, X, Y)
    if strategy == "spheres":
        return count_by_spheres(space, X, Y)
    if strategy != "auto":
        raise ValueError(f"unknown strategy {strategy!r}")
    if len(X) * len(Y) <= PAIR_CAP // 4:
        return count_by_pairs(space, X, Y)
    return count_by_spheres(space, X, Y)


def bound_check_general(space: FqSpace, X, Y: SphereSet, exponent: float | None = None,
                        incidences: int | None = None) -> dict:
    """|I - |X||Y|/q| <= q^{d/2} sqrt(|X||Y|); ``exponent`` swaps d/2 for an alternative power."""
    q, d = space.q, space.d
    I = count_incidences(space, X, Y) if incidences is None else incidences
    nx_, ny = len(X), len(Y)
    lhs = abs(I - nx_ * ny / q)
    power = d / 2 if exponent is None else exponent
    rhs = q**power * math.sqrt(nx_ * ny)
    return {"q": q, "d": d, "size_X": nx_, "size_Y": ny, "incidences": I, "lhs": lhs,
            "rhs": rhs, "exponent": power, "slack": rhs - lhs, "pass": lhs <= rhs + 1e-9 * max(1.0, rhs)}


def random_configuration(space: FqSpace, rng: np.random.Generator) -> tuple[np.ndarray, SphereSet]:
    """Random point set and random sphere set (sizes uniform, radii over all of F_q)."""
    n = space.n
    X = np.sort(rng.choice(n, size=int(rng.integers(0, n + 1)), replace=False))
    ny = int(rng.integers(0, n * space.q + 1))
    codes = np.sort(rng.choice(n * space.q, size=ny, replace=False))
    return X, SphereSet((int(c // space.q), int(c % space.q)) for c in codes)
