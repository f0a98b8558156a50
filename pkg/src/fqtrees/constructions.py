"""Extremal point-set constructions in odd dimension, with exact verifiers.

All sets live in the coordinates of the alternating form
Q(x) = x_1^2 - x_2^2 + ... - x_{d-1}^2 + mu x_d^2, which is equivalent to the
sum of squares for mu = select_mu(d).  Points are indices into FqSpace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .distgraph import sphere
from .gf import FieldSpec, FqSpace, select_mu

PAIR_CAP = 2**26
KINDS = ("avoiding", "saturating", "ikr")


class ConstructionError(ValueError):
    pass


@dataclass
class ConstructionOutput:
    kind: str
    space: FqSpace
    X: np.ndarray
    Y: np.ndarray
    r: int
    mu: int
    slab_k: int | None = None
    extra: dict = field(default_factory=dict)

    @property
    def params(self) -> dict:
        return {"q": self.space.q, "d": self.space.d, "slab_k": self.slab_k, "mu": self.mu, "r": self.r}

    def verify(self) -> dict:
        """Exact pair count at distance r (under Q) plus the size identities."""
        q, d, k = self.space.q, self.space.d, self.slab_k
        nx_, ny = len(self.X), len(self.Y)
        count = count_Sr(self.space, self.X, self.Y, self.r, form="Q", mu=self.mu)
        out = dict(self.params, kind=self.kind, size_X=nx_, size_Y=ny, S_r=count,
                   product=nx_ * ny, product_over_q_d1=nx_ * ny / q ** (d + 1))
        out.update(self.extra)
        if self.kind == "avoiding":
            out["size_Y_expected"] = q ** (k + 1) - q**k
            out["pass"] = count == 0 and ny == out["size_Y_expected"] and nx_ >= 1
            out["X_ratio"] = nx_ / q ** (d - k)
            out["within_4q_d1"] = nx_ * ny <= 4 * q ** (d + 1)
        elif self.kind == "saturating":
            out["size_Y_expected"] = q**k
            out["pass"] = count == nx_ * ny and ny == q**k and nx_ >= 1
            out["X_ratio"] = nx_ / q ** (d - k - 1)
        else:
            out["size_X_expected"] = q ** ((d + 1) // 2)
            out["pass"] = nx_ == out["size_X_expected"] and all(v == 0 for v in self.extra["S_r_by_radius"].values())
        return out


def _check_odd(d: int):
    if d < 3 or d % 2 == 0:
        raise ConstructionError(f"constructions need odd d >= 3, got d = {d}")


def _paired(points: np.ndarray, k: int) -> np.ndarray:
    """Mask of points whose first 2k coordinates come in equal pairs."""
    ok = np.ones(len(points), dtype=bool)
    for i in range(k):
        ok &= points[:, 2 * i] == points[:, 2 * i + 1]
    return ok


def _alternating(space: FqSpace, cols: np.ndarray) -> np.ndarray:
    """c_1^2 - c_2^2 + c_3^2 - ... over the columns of ``cols``."""
    spec = space.spec
    sq = spec.square_table[cols]
    sq[:, 1::2] = spec.neg_table[sq[:, 1::2]]
    if sq.shape[1] == 0:
        return np.zeros(len(cols), dtype=np.int64)
    return space._sum_last(sq)


def construct_avoiding(spec: FieldSpec, d: int, slab_k: int, r: int) -> ConstructionOutput:
    """X, Y with no pair at Q-distance r; |Y| = q^{k+1} - q^k.

    X keeps the tail points whose partial form t1 avoids {r - s : eta(s) in {0, eta(mu)}}.
    The s = 0 exclusion (t1 != r) is needed: otherwise x_d = y_d gives Q(x - y) = t1 = r.
    """
    _check_odd(d)
    if not 1 <= slab_k < (d - 1) / 2:
        raise ConstructionError(f"slab_k must satisfy 1 <= k < (d-1)/2, got k = {slab_k}, d = {d}")
    r = int(r)
    if not 0 < r < spec.q:
        raise ConstructionError("r must be a nonzero field element")
    space = FqSpace(spec, d)
    mu = int(select_mu(d, spec))
    leg = spec.legendre_table
    eta_mu = int(leg[mu])
    excluded = sorted({spec.sub(r, s) for s in range(spec.q) if leg[s] in (0, eta_mu)})
    P = space.points
    paired = _paired(P, slab_k)
    t1 = _alternating(space, P[:, 2 * slab_k:d - 1])
    X = np.flatnonzero(paired & ~np.isin(t1, excluded))
    Y = np.flatnonzero(paired & (P[:, 2 * slab_k:d - 1] == 0).all(axis=1) & (P[:, d - 1] != 0))
    return ConstructionOutput("avoiding", space, X, Y, r, mu, slab_k,
                              {"excluded_t1": excluded, "R_times": sorted(
                                  spec.sub(r, s) for s in range(spec.q) if leg[s] == eta_mu)})


def admissible_saturating_radii(spec: FieldSpec, d: int, slab_k: int) -> list[int]:
    _check_odd(d)
    if slab_k == (d - 1) // 2:
        eta_mu = int(spec.legendre_table[int(select_mu(d, spec))])
        return [a for a in range(1, spec.q) if spec.legendre_table[a] == eta_mu]
    return list(range(1, spec.q))


def construct_saturating(spec: FieldSpec, d: int, slab_k: int, r: int | None = None) -> ConstructionOutput:
    """X, Y with every pair at Q-distance r; |Y| = q^k.  Default r: smallest admissible radius."""
    _check_odd(d)
    if not 1 <= slab_k <= (d - 1) // 2:
        raise ConstructionError(f"slab_k must satisfy 1 <= k <= (d-1)/2, got k = {slab_k}, d = {d}")
    allowed = admissible_saturating_radii(spec, d, slab_k)
    if not allowed:
        raise ConstructionError("no admissible radius")  # pragma: no cover
    if r is None:
        r = allowed[0]
    if int(r) not in allowed:
        raise ConstructionError(f"r = {r} is not admissible here; eta(r) must equal eta(mu)")
    r = int(r)
    space = FqSpace(spec, d)
    mu = int(select_mu(d, spec))
    P = space.points
    paired = _paired(P, slab_k)
    tail = P[:, 2 * slab_k:]
    head = _alternating(space, tail[:, :-1])
    last = spec.mul_table[mu, spec.square_table[tail[:, -1]]]
    qt = spec.add_table[head, last]
    X = np.flatnonzero(paired & (qt == r))
    Y = np.flatnonzero(paired & (tail == 0).all(axis=1))
    return ConstructionOutput("saturating", space, X, Y, r, mu, slab_k)


def construct_ikr(spec: FieldSpec, d: int) -> ConstructionOutput:
    """Paired coordinates plus a free last one; Q(x - y) = mu (x_d - y_d)^2 on X."""
    _check_odd(d)
    space = FqSpace(spec, d)
    mu = int(select_mu(d, spec))
    X = np.flatnonzero(_paired(space.points, (d - 1) // 2))
    leg = spec.legendre_table
    target = -int(leg[mu])
    radii = [a for a in range(1, spec.q) if leg[a] == target]
    by_r = {a: count_Sr(space, X, X, a, form="Q", mu=mu) for a in radii}
    return ConstructionOutput("ikr", space, X, X, radii[0], mu, None, {"S_r_by_radius": by_r})


def _forms(space: FqSpace, coords: np.ndarray, form: str, mu: int | None) -> np.ndarray:
    if form == "norm":
        return space.norm(coords)
    if form == "Q":
        if mu is None:
            mu = int(select_mu(space.d, space.spec))
        return space.qform(coords, mu)
    raise ValueError(f"unknown form {form!r}")


def count_Sr(space: FqSpace, X, Y, r: int, form: str = "norm", mu: int | None = None,
             cap: int = PAIR_CAP) -> int:
    """#{(x, y) in X x Y : form(x - y) = r}, ordered pairs, brute force."""
    X = np.asarray(X, dtype=np.int64)
    Y = np.asarray(Y, dtype=np.int64)
    if len(X) == 0 or len(Y) == 0:
        return 0
    if len(X) * len(Y) > cap:
        raise ValueError(f"|X||Y| = {len(X) * len(Y)} exceeds the pair cap {cap}")
    xc = space.coords_of(X)
    yc = space.coords_of(Y)
    step = max(1, 2**22 // max(1, len(Y) * space.d))
    total = 0
    for lo in range(0, len(X), step):
        diff = space.sub(xc[lo:lo + step, None, :], yc[None, :, :])
        total += int((_forms(space, diff, form, mu) == r).sum())
    return total


def two_set_check(space: FqSpace, X, Y, r: int) -> dict:
    """||S_r| - (D_r/n)|X||Y|| <= 2 q^{(d-1)/2} (|X||Y|)^{1/2} with D_r the observed sphere size."""
    q, d = space.q, space.d
    nx_, ny = len(X), len(Y)
    count = count_Sr(space, X, Y, r)
    density = len(sphere(space, r).points) / space.n
    lhs = abs(count - density * nx_ * ny)
    rhs = 2 * q ** ((d - 1) / 2) * math.sqrt(nx_ * ny)
    return {"S_r": count, "density": density, "eps": density - 1 / q, "lhs": lhs, "rhs": rhs,
            "pass": lhs <= rhs + 1e-9 * max(1.0, rhs)}
