"""Distance graphs G_r^d on F_q^d as implicit Cayley graphs.

x ~ y in G_r^d iff ||x - y|| = r.  The connection set is the origin-centred
sphere of radius r, so neighbourhoods are translates of one point array and
eigenvalues are additive character sums over that sphere.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .gf import ENUM_CAP, FieldElement, FieldError, FieldSpec, FqSpace, field_build

CACHE_ENV = "FQTREES_CACHE_DIR"
DENSE_CAP = 1000
SPECTRUM_CAP = 2**31
IMAG_TOL = 1e-9
MULTISET_TOL = 1e-6


class SpectrumError(RuntimeError):
    """Character sums failed an internal consistency check."""


@dataclass(frozen=True)
class Sphere:
    spec: FieldSpec
    d: int
    radius: int
    points: np.ndarray  # (size, d) encodings, sorted by point index

    @property
    def size(self) -> int:
        return len(self.points)


def _cache_file(spec: FieldSpec, d: int, r: int) -> Path | None:
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    return Path(root) / f"sphere_p{spec.p}_k{spec.ext_degree}_d{d}_r{r}.npy"


def sphere(space: FqSpace, r: int) -> Sphere:
    """Origin-centred sphere {s : ||s|| = r} by brute force (r = 0 allowed)."""
    space.check_cap()
    path = _cache_file(space.spec, space.d, r)
    if path is not None and path.exists():
        return Sphere(space.spec, space.d, r, np.load(path))
    pts = space.points[space.norm(space.points) == r]
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(f".{os.getpid()}.tmp.npy")
        np.save(tmp, pts)
        os.replace(tmp, path)
    return Sphere(space.spec, space.d, r, pts)


@dataclass(frozen=True)
class SpectralCertificate:
    n: int
    D: int
    lam: float
    claimed_bound: float

    def to_dict(self) -> dict:
        return {"n": self.n, "D": self.D, "lambda": self.lam, "bound": self.claimed_bound}


@dataclass(eq=False)
class DistanceGraphFamily:
    """The family {G_r^d : r in radii}; color i is radii[i]."""

    space: FqSpace
    radii: tuple[int, ...]
    _spheres: dict = field(default_factory=dict, repr=False)
    _spectra: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.radii = tuple(int(r) for r in self.radii)
        if not self.radii:
            raise FieldError("distance set must be nonempty")
        if len(set(self.radii)) != len(self.radii):
            raise FieldError("distance set has repeated radii")
        if any(not 0 < r < self.space.q for r in self.radii):
            raise FieldError("radii must be nonzero field elements")

    @classmethod
    def build(cls, p: int, k: int, d: int, radii: Sequence | str = "all",
              cap: int = ENUM_CAP) -> "DistanceGraphFamily":
        spec = field_build(p, k)
        space = FqSpace(spec, d, cap)
        if radii == "all":
            radii = range(1, spec.q)
        return cls(space, tuple(int(spec(r).value) if not isinstance(r, FieldElement) else r.value
                                for r in radii))

    @property
    def spec(self) -> FieldSpec:
        return self.space.spec

    @property
    def d(self) -> int:
        return self.space.d

    @property
    def t(self) -> int:
        return len(self.radii)

    @property
    def n(self) -> int:
        return self.space.n

    def color_of(self, r: int) -> int:
        try:
            return self.radii.index(int(r))
        except ValueError:
            raise FieldError(f"radius {r} is not in the distance set {self.radii}") from None

    def sphere(self, r: int) -> Sphere:
        r = int(r)
        self.color_of(r)
        if r not in self._spheres:
            self._spheres[r] = sphere(self.space, r)
        return self._spheres[r]

    def degree(self, r: int) -> int:
        return self.sphere(r).size

    def neighbors(self, x: int, r: int) -> np.ndarray:
        """Sorted point indices at distance r from point index x."""
        return np.sort(self.space.translate(x, self.sphere(r).points)[0])

    def spectrum(self, r: int, workers: int = 1) -> tuple[SpectralCertificate, np.ndarray]:
        r = int(r)
        if r not in self._spectra:
            self._spectra[r] = spectrum_character(self, r, workers=workers)
        return self._spectra[r]

    def certificate(self, r: int) -> SpectralCertificate:
        return self.spectrum(r)[0]


def sphere_points(family: DistanceGraphFamily, r: int) -> Sphere:
    return family.sphere(r)


def neighbors(family: DistanceGraphFamily, x: int, r: int) -> np.ndarray:
    return family.neighbors(x, r)


def lambda_bound(q: int, d: int) -> float:
    return 2.0 * q ** ((d - 1) / 2)


def _character_chunk(args) -> np.ndarray:
    p, k, d, sphere_pts, lo, hi = args
    space = FqSpace(field_build(p, k), d)
    m = space.coords_of(np.arange(lo, hi))
    dots = space.dot(m[:, None, :], sphere_pts[None, :, :])
    tr = space.spec.trace_table[dots]
    counts = np.stack([(tr == j).sum(axis=1) for j in range(p)], axis=1)
    roots = np.exp(2j * np.pi * np.arange(p) / p)
    return counts @ roots


def spectrum_character(family: DistanceGraphFamily, r: int, workers: int = 1,
                       chunk: int = 512) -> tuple[SpectralCertificate, np.ndarray]:
    """Eigenvalues lambda_m = sum_{s in sphere} exp(2 pi i Tr(<m, s>) / p), m in index order."""
    space, spec = family.space, family.spec
    sph = family.sphere(r)
    work = space.n * max(sph.size, 1) * family.d
    if work > SPECTRUM_CAP:
        raise FieldError(f"character sweep size {work} exceeds the compute cap {SPECTRUM_CAP}")
    jobs = [(spec.p, spec.ext_degree, family.d, sph.points, lo, min(lo + chunk, space.n))
            for lo in range(0, space.n, chunk)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_character_chunk, jobs))
    else:
        parts = [_character_chunk(j) for j in jobs]
    vals = np.concatenate(parts)
    if np.max(np.abs(vals.imag), initial=0.0) > IMAG_TOL:
        raise SpectrumError(f"character sums not real for r = {r}")
    eig = vals.real
    D = sph.size
    if abs(eig[0] - D) > MULTISET_TOL:
        raise SpectrumError("trivial character does not give the degree")
    lam = float(np.max(np.abs(eig[1:]), initial=0.0))
    cert = SpectralCertificate(n=space.n, D=D, lam=lam, claimed_bound=lambda_bound(spec.q, family.d))
    return cert, eig


def adjacency_matrix(family: DistanceGraphFamily, r: int, dense_cap: int = DENSE_CAP) -> np.ndarray:
    n = family.n
    if n > dense_cap:
        raise FieldError(f"n = {n} exceeds the dense cap {dense_cap}")
    nbrs = family.space.translate(np.arange(n), family.sphere(r).points)
    A = np.zeros((n, n), dtype=np.float64)
    A[np.repeat(np.arange(n), nbrs.shape[1]), nbrs.ravel()] = 1.0
    return A


def spectrum_dense(family: DistanceGraphFamily, r: int, dense_cap: int = DENSE_CAP) -> np.ndarray:
    """Sorted eigenvalues of the explicit adjacency matrix."""
    return np.linalg.eigvalsh(adjacency_matrix(family, r, dense_cap))


def multisets_agree(a: np.ndarray, b: np.ndarray, tol: float = MULTISET_TOL) -> bool:
    a, b = np.sort(np.asarray(a)), np.sort(np.asarray(b))
    return a.shape == b.shape and bool(np.all(np.abs(a - b) <= tol))


def verify_ndl(family: DistanceGraphFamily, r: int) -> dict:
    """Audit the (n, D, lambda) claims for G_r^d; failures are entries, not exceptions."""
    cert = family.certificate(r)
    q, d = family.spec.q, family.d
    base = q ** (d - 1)
    if d % 2:
        allowed = {q ** ((d - 1) // 2)}
    else:
        allowed = {q ** ((d - 2) // 2)}
    offset = cert.D - base
    lam_ok = cert.lam <= cert.claimed_bound + MULTISET_TOL
    return {
        "q": q, "d": d, "r": int(r), "n": cert.n, "D": cert.D,
        "lambda": cert.lam, "bound": cert.claimed_bound,
        "lambda_ok": lam_ok,
        "degree_offset": offset,
        "degree_offset_ok": abs(offset) in allowed,
        "sandwich_ok": (2 / 3) * base <= cert.D <= (4 / 3) * base,
        "pass": lam_ok and abs(offset) in allowed and (2 / 3) * base <= cert.D <= (4 / 3) * base,
    }


def eigen_sum_checks(eig: np.ndarray, n: int, D: int, tol: float = 1e-6) -> tuple[bool, bool]:
    """(trace A = 0, trace A^2 = nD)."""
    return (abs(float(np.sum(eig))) <= tol * max(1, n),
            math.isclose(float(np.sum(eig**2)), n * D, rel_tol=1e-9, abs_tol=tol * n))
