"""Finite fields GF(p^k) for odd p, and the quadratic forms used on F_q^d.

Elements are encoded as integers ``sum(c_i * p**i)`` where ``c_0, ..., c_{k-1}``
are the coefficients of the polynomial representative modulo the field's
modulus (little-endian).  For ``k == 1`` the encoding is just the residue.

Two layers live here:

* :class:`FieldSpec` / :class:`FieldElement` / :class:`PointVec` -- exact scalar
  arithmetic with a small object API.
* :class:`FqSpace` -- vectorised (numpy) arithmetic on whole arrays of points of
  F_q^d, used by every enumeration-heavy module.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

SIZE_CAP = 2**20
TABLE_CAP = 2048
ENUM_CAP = 2**22


class FieldError(ValueError):
    """Invalid field construction or arithmetic (e.g. division by zero)."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# ---------------------------------------------------------------------------
# polynomials over F_p, coefficient lists low-to-high, no trailing zeros
# ---------------------------------------------------------------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - coef * mc) % p
        _trim(a)
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Irreducibility of a monic polynomial over F_p by exhaustive trial division."""
    deg = len(poly) - 1
    if deg <= 0:
        return False
    if deg == 1:
        return True
    # no roots: enough for degree 2 and 3
    for x in range(p):
        if sum(c * pow(x, i, p) for i, c in enumerate(poly)) % p == 0:
            return False
    if deg <= 3:
        return True
    for fdeg in range(2, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=fdeg):
            if not _poly_mod(poly, list(low) + [1], p):
                return False
    return True


def _smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    # lexicographic over the stored (low-to-high) coefficient list
    for low in itertools.product(range(p), repeat=k):
        poly = list(low) + [1]
        if is_irreducible(poly, p):
            return tuple(poly)
    raise FieldError(f"no irreducible polynomial of degree {k} over F_{p}")  # pragma: no cover


# ---------------------------------------------------------------------------
# FieldSpec
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FieldSpec:
    """The field GF(p^k) with a fixed monic irreducible modulus."""

    p: int
    ext_degree: int
    q: int
    modulus: tuple[int, ...]

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.ext_degree) == (other.p, other.ext_degree)

    def __hash__(self):
        return hash((self.p, self.ext_degree))

    def __repr__(self):
        return f"GF({self.p}^{self.ext_degree})" if self.ext_degree > 1 else f"GF({self.p})"

    # -- encodings ---------------------------------------------------------
    def coeffs(self, a: int) -> list[int]:
        out = []
        for _ in range(self.ext_degree):
            a, c = divmod(a, self.p)
            out.append(c)
        return out

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.ext_degree:
            coeffs = _poly_mod(coeffs, self.modulus, self.p)
        return sum((c % self.p) * self.p**i for i, c in enumerate(coeffs))

    def __call__(self, value) -> "FieldElement":
        """Build an element from an int encoding, a coefficient list, or an element."""
        if isinstance(value, FieldElement):
            if value.spec != self:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, (list, tuple)):
            return FieldElement(self, self.from_coeffs(value))
        value = int(value)
        if not 0 <= value < self.q:
            if self.ext_degree == 1:
                value %= self.p
            else:
                raise FieldError(f"encoding {value} out of range for {self!r}")
        return FieldElement(self, value)

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(self, a) for a in range(self.q)]

    # -- scalar arithmetic on encodings -----------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.ext_degree == 1:
            return (a + b) % self.p
        return self.from_coeffs([x + y for x, y in zip(self.coeffs(a), self.coeffs(b))])

    def neg(self, a: int) -> int:
        if self.ext_degree == 1:
            return (-a) % self.p
        return self.from_coeffs([-x for x in self.coeffs(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.ext_degree == 1:
            return a * b % self.p
        prod = _poly_mul(_trim(self.coeffs(a)), _trim(self.coeffs(b)), self.p)
        return self.from_coeffs(_poly_mod(prod, self.modulus, self.p))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldError("inverse of zero")
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def legendre(self, a: int) -> int:
        if a == 0:
            return 0
        return 1 if self.pow(a, (self.q - 1) // 2) == 1 else -1

    def trace(self, a: int) -> int:
        """Absolute trace a + a^p + ... + a^(p^(k-1)), returned as a residue mod p."""
        total, x = 0, a
        for _ in range(self.ext_degree):
            total = self.add(total, x)
            x = self.pow(x, self.p)
        if total >= self.p:  # pragma: no cover - trace always lands in F_p
            raise FieldError("trace left the prime subfield")
        return total

    # -- lookup tables (lazy) -------------------------------------------------
    def _require_tables(self):
        if self.q > TABLE_CAP:
            raise FieldError(f"q = {self.q} exceeds the table cap {TABLE_CAP}")

    @cached_property
    def add_table(self) -> np.ndarray:
        self._require_tables()
        digits = np.array([self.coeffs(a) for a in range(self.q)], dtype=np.int64)
        summed = (digits[:, None, :] + digits[None, :, :]) % self.p
        weights = self.p ** np.arange(self.ext_degree, dtype=np.int64)
        return (summed @ weights).astype(np.int32)

    @cached_property
    def neg_table(self) -> np.ndarray:
        self._require_tables()
        return np.array([self.neg(a) for a in range(self.q)], dtype=np.int32)

    @cached_property
    def mul_table(self) -> np.ndarray:
        self._require_tables()
        # via discrete logs of a primitive element
        exp, log = self._exp_log
        la = log[1:]
        table = np.zeros((self.q, self.q), dtype=np.int32)
        table[1:, 1:] = exp[(la[:, None] + la[None, :]) % (self.q - 1)]
        return table

    @cached_property
    def _exp_log(self) -> tuple[np.ndarray, np.ndarray]:
        self._require_tables()
        order = self.q - 1
        prime_factors = [f for f in range(2, order + 1) if order % f == 0 and is_prime(f)]
        for g in range(1, self.q):
            if all(self.pow(g, order // f) != 1 for f in prime_factors):
                break
        exp = np.zeros(order, dtype=np.int64)
        x = 1
        for i in range(order):
            exp[i] = x
            x = self.mul(x, g)
        log = np.zeros(self.q, dtype=np.int64)
        log[exp] = np.arange(order)
        return exp, log

    @cached_property
    def square_table(self) -> np.ndarray:
        return self.mul_table[np.arange(self.q), np.arange(self.q)]

    @cached_property
    def legendre_table(self) -> np.ndarray:
        self._require_tables()
        return np.array([self.legendre(a) for a in range(self.q)], dtype=np.int8)

    @cached_property
    def trace_table(self) -> np.ndarray:
        self._require_tables()
        return np.array([self.trace(a) for a in range(self.q)], dtype=np.int32)


@lru_cache(maxsize=None)
def _field_build_cached(p: int, k: int) -> FieldSpec:
    modulus = _smallest_irreducible(p, k)
    return FieldSpec(p=p, ext_degree=k, q=p**k, modulus=modulus)


def field_build(p: int, k: int = 1, size_cap: int = SIZE_CAP) -> FieldSpec:
    """GF(p^k) whose modulus is the lexicographically smallest monic irreducible."""
    if not isinstance(p, int) or not is_prime(p):
        raise FieldError(f"p = {p} is not prime")
    if p == 2:
        raise FieldError("p = 2: only odd characteristic is supported")
    if not isinstance(k, int) or k < 1:
        raise FieldError(f"extension degree k = {k} must be a positive integer")
    if p**k > size_cap:
        raise FieldError(f"q = {p}^{k} exceeds the size cap {size_cap}")
    return _field_build_cached(p, k)


def field_from_q(q: int, size_cap: int = SIZE_CAP) -> FieldSpec:
    """Build GF(q) from a prime power q."""
    for p in range(3, q + 1, 2):
        if q % p == 0:
            k, rest = 0, q
            while rest % p == 0:
                rest //= p
                k += 1
            if rest != 1 or not is_prime(p):
                break
            return field_build(p, k, size_cap)
    raise FieldError(f"q = {q} is not an odd prime power")


# ---------------------------------------------------------------------------
# object API
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=False)
class FieldElement:
    spec: FieldSpec
    value: int

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise FieldError("mixing elements of different fields")
            return other.value
        return self.spec(other).value

    def __add__(self, other):
        return FieldElement(self.spec, self.spec.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.spec, self.spec.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.spec, self.spec.sub(self._other(other), self.value))

    def __mul__(self, other):
        return FieldElement(self.spec, self.spec.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.spec, self.spec.div(self.value, self._other(other)))

    def __rtruediv__(self, other):
        return FieldElement(self.spec, self.spec.div(self._other(other), self.value))

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.spec, self.spec.pow(self.value, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.spec == other.spec and self.value == other.value
        if isinstance(other, int):
            return self == self.spec(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.spec, self.value))

    def __lt__(self, other: "FieldElement"):
        return self.value < self._other(other)

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    @property
    def coeffs(self) -> list[int]:
        return self.spec.coeffs(self.value)

    def encode(self):
        """JSON encoding: bare int for prime fields, coefficient list otherwise."""
        return self.value if self.spec.ext_degree == 1 else self.coeffs

    def __repr__(self):
        if self.spec.ext_degree == 1:
            return f"{self.value}"
        return f"{self.coeffs}"


def arith(a: FieldElement, b: FieldElement | None, op: str) -> FieldElement:
    """Dispatch one of add, sub, mul, div, neg, inv, pow (b is an int exponent for pow)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    if op == "pow":
        return a ** int(b)
    raise FieldError(f"unknown operation {op!r}")


def legendre(x: FieldElement) -> int:
    return x.spec.legendre(x.value)


def abs_trace(x: FieldElement) -> int:
    return x.spec.trace(x.value)


@dataclass(frozen=True)
class PointVec:
    coords: tuple[FieldElement, ...]

    def __post_init__(self):
        if len(self.coords) < 1:
            raise FieldError("points need at least one coordinate")
        spec = self.coords[0].spec
        if any(c.spec != spec for c in self.coords):
            raise FieldError("coordinates from different fields")

    @classmethod
    def of(cls, spec: FieldSpec, values: Iterable) -> "PointVec":
        return cls(tuple(spec(v) for v in values))

    @property
    def spec(self) -> FieldSpec:
        return self.coords[0].spec

    @property
    def d(self) -> int:
        return len(self.coords)

    def __add__(self, other: "PointVec") -> "PointVec":
        return PointVec(tuple(a + b for a, b in zip(self.coords, other.coords, strict=True)))

    def __sub__(self, other: "PointVec") -> "PointVec":
        return PointVec(tuple(a - b for a, b in zip(self.coords, other.coords, strict=True)))

    def __neg__(self) -> "PointVec":
        return PointVec(tuple(-a for a in self.coords))

    def values(self) -> tuple[int, ...]:
        return tuple(c.value for c in self.coords)

    def encode(self) -> list:
        return [c.encode() for c in self.coords]


def norm_form(x: PointVec) -> FieldElement:
    """||x|| = x_1^2 + ... + x_d^2."""
    spec = x.spec
    total = spec(0)
    for c in x.coords:
        total = total + c * c
    return total


def select_mu(d: int, spec: FieldSpec) -> FieldElement:
    """Smallest nonzero mu making the alternating form equivalent to the sum of squares.

    eta(mu) = -1 exactly when d = 3 mod 4 and q = 3 mod 4, else +1.
    """
    if d < 3 or d % 2 == 0:
        raise FieldError(f"mu is defined for odd d >= 3, got d = {d}")
    want = -1 if (d % 4 == 3 and spec.q % 4 == 3) else 1
    for a in range(1, spec.q):
        if spec.legendre(a) == want:
            return FieldElement(spec, a)
    raise FieldError("no element with the required character")  # pragma: no cover


def quadratic_form_Q(x: PointVec, mu: FieldElement) -> FieldElement:
    """x_1^2 - x_2^2 + ... + x_{d-2}^2 - x_{d-1}^2 + mu x_d^2 (odd d only)."""
    d = x.d
    if d % 2 == 0:
        raise FieldError("the alternating form needs odd dimension")
    total = x.spec(0)
    for i, c in enumerate(x.coords[:-1]):
        sq = c * c
        total = total + sq if i % 2 == 0 else total - sq
    return total + mu * x.coords[-1] * x.coords[-1]


def form_value_distribution(form: Callable[[PointVec], FieldElement], d: int, spec: FieldSpec,
                            cap: int = ENUM_CAP) -> dict[FieldElement, int]:
    """Exact histogram of ``form`` over all q^d points (scalar path, slow but independent)."""
    if spec.q**d > cap:
        raise FieldError(f"q^d = {spec.q**d} exceeds the enumeration cap {cap}")
    elements = spec.elements()
    counts: Counter = Counter()
    for coords in itertools.product(elements, repeat=d):
        counts[form(PointVec(coords))] += 1
    return dict(counts)


# ---------------------------------------------------------------------------
# vectorised space F_q^d
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class FqSpace:
    """F_q^d with points indexed lexicographically (first coordinate most significant)."""

    spec: FieldSpec
    d: int
    cap: int = ENUM_CAP
    _weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.d < 1:
            raise FieldError("dimension must be positive")
        self._weights = self.spec.q ** np.arange(self.d - 1, -1, -1, dtype=np.int64)

    @property
    def q(self) -> int:
        return self.spec.q

    @property
    def n(self) -> int:
        return self.spec.q**self.d

    def check_cap(self, what: str = "enumeration"):
        if self.n > self.cap:
            raise FieldError(f"q^d = {self.n} exceeds the {what} cap {self.cap}")

    @cached_property
    def points(self) -> np.ndarray:
        """All q^d points as an (n, d) array of element encodings, in index order."""
        self.check_cap()
        idx = np.arange(self.n, dtype=np.int64)
        return ((idx[:, None] // self._weights[None, :]) % self.q).astype(np.int32)

    def index(self, coords: np.ndarray) -> np.ndarray:
        return np.asarray(coords, dtype=np.int64) @ self._weights

    def coords_of(self, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        return ((idx[..., None] // self._weights) % self.q).astype(np.int32)

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.spec.add_table[a, b]

    def sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.spec.add_table[a, self.spec.neg_table[b]]

    def neg(self, a: np.ndarray) -> np.ndarray:
        return self.spec.neg_table[a]

    def _sum_last(self, terms: np.ndarray) -> np.ndarray:
        table = self.spec.add_table
        total = terms[..., 0]
        for i in range(1, terms.shape[-1]):
            total = table[total, terms[..., i]]
        return total

    def norm(self, coords: np.ndarray) -> np.ndarray:
        return self._sum_last(self.spec.square_table[coords])

    def qform(self, coords: np.ndarray, mu: int) -> np.ndarray:
        d = coords.shape[-1]
        if d % 2 == 0:
            raise FieldError("the alternating form needs odd dimension")
        sq = self.spec.square_table[coords]
        neg = self.spec.neg_table
        terms = sq.copy()
        terms[..., 1:d - 1:2] = neg[sq[..., 1:d - 1:2]]
        terms[..., d - 1] = self.spec.mul_table[int(mu), sq[..., d - 1]]
        return self._sum_last(terms)

    def dot(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self._sum_last(self.spec.mul_table[a, b])

    def translate(self, base_idx, offsets: np.ndarray) -> np.ndarray:
        """Indices of base + offset for every base (rows) and offset (columns)."""
        base = self.coords_of(np.atleast_1d(base_idx))
        summed = self.spec.add_table[base[:, None, :], offsets[None, :, :]]
        return self.index(summed)

    def to_point(self, idx: int) -> PointVec:
        return PointVec.of(self.spec, self.coords_of(int(idx)).tolist())

    def from_point(self, x: PointVec) -> int:
        return int(self.index(np.array(x.values())))

    def encode_point(self, idx: int) -> list:
        return self.to_point(idx).encode()

    def decode_point(self, enc: Sequence) -> int:
        if len(enc) != self.d:
            raise FieldError(f"point {enc} does not have {self.d} coordinates")
        return self.from_point(PointVec.of(self.spec, enc))


def fast_value_distribution(space: FqSpace, values: np.ndarray) -> dict[int, int]:
    counts = np.bincount(values.ravel(), minlength=space.q)
    return {int(a): int(c) for a, c in enumerate(counts) if c}
