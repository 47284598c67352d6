"""Finite groups and field arithmetic underlying the graph constructions.

Covers: Legendre symbols, PGL(2,q)/PSL(2,q) as canonically normalized
projective 2x2 matrices, the unipotent subgroup, abstract cyclic groups,
the group algebra of Z_ell over GF(2) with its circulant lift, and
GF(2^m) as polynomials modulo a fixed primitive polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import CapExceeded, DimensionMismatch, InvalidModulus, NotPGL
from .f2la import F2Matrix

PGL_ORDER_CAP = 61  # q(q^2-1) ~ 230k; beyond this full enumeration is off the table


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) via the Euler criterion a^((p-1)/2) mod p."""
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise InvalidModulus(f"modulus {p} is not an odd prime")
    a %= p
    if a == 0:
        return 0
    e = pow(a, (p - 1) // 2, p)
    return 1 if e == 1 else -1


# -- projective 2x2 matrices over F_q ----------------------------------


@dataclass(frozen=True, order=True)
class ProjMat2:
    """Element of PGL(2,q) as a matrix normalized so its first nonzero
    entry (scanning a,b,c,d) equals 1."""

    q: int
    a: int
    b: int
    c: int
    d: int

    @staticmethod
    def make(q: int, a: int, b: int, c: int, d: int) -> "ProjMat2":
        a, b, c, d = a % q, b % q, c % q, d % q
        det = (a * d - b * c) % q
        if det == 0:
            raise InvalidModulus("matrix is singular")
        for lead in (a, b, c, d):
            if lead != 0:
                inv = pow(lead, q - 2, q)
                return ProjMat2(q, a * inv % q, b * inv % q, c * inv % q, d * inv % q)
        raise InvalidModulus("zero matrix")

    @staticmethod
    def identity(q: int) -> "ProjMat2":
        return ProjMat2(q, 1, 0, 0, 1)

    def mul(self, other: "ProjMat2") -> "ProjMat2":
        q = self.q
        return ProjMat2.make(
            q,
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inv(self) -> "ProjMat2":
        return ProjMat2.make(self.q, self.d, -self.b, -self.c, self.a)

    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.q

    def det_is_square(self) -> bool:
        return legendre(self.det(), self.q) == 1

    def is_unipotent_upper(self) -> bool:
        return self.a == 1 and self.c == 0 and self.d == 1


class FiniteGroup:
    """A finite group held as an indexed element list.

    Multiplication goes through a lookup table when the order is small
    enough, otherwise it is computed on the fly from the elements.
    """

    TABLE_CAP = 10_000

    def __init__(self, elements, mul_fn, name: str = "", check: bool | None = None):
        self.elements = list(elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise InvalidModulus("duplicate group elements")
        self._mul_fn = mul_fn
        self.name = name
        self.order = len(self.elements)
        self._table = None
        self.identity = self._find_identity()
        self._inv = self._build_inverses()
        if check is None:
            check = self.order <= 400
        if check:
            self._check_closure()

    def _find_identity(self) -> int:
        e0 = self.elements[0]
        for i, e in enumerate(self.elements):
            if self._mul_fn(e, e0) == e0 and self._mul_fn(e0, e) == e0:
                return i
        raise InvalidModulus("no identity element found")

    def _build_inverses(self) -> list[int]:
        inv = [-1] * self.order
        ident = self.elements[self.identity]
        for i, e in enumerate(self.elements):
            if inv[i] >= 0:
                continue
            found = None
            if hasattr(e, "inv"):
                cand = e.inv()
                j = self.index.get(cand)
                if j is not None and self._mul_fn(e, cand) == ident:
                    found = j
            if found is None:
                for j, f in enumerate(self.elements):
                    if self._mul_fn(e, f) == ident:
                        found = j
                        break
            if found is None:
                raise InvalidModulus(f"element {e} has no inverse in the list")
            inv[i] = found
            inv[found] = i
        return inv

    def _check_closure(self) -> None:
        for e in self.elements:
            for f in self.elements:
                if self._mul_fn(e, f) not in self.index:
                    raise InvalidModulus(f"product {e} * {f} leaves the element list")

    def mul(self, i: int, j: int) -> int:
        if self._table is not None:
            return self._table[i][j]
        prod = self._mul_fn(self.elements[i], self.elements[j])
        k = self.index.get(prod)
        if k is None:
            raise InvalidModulus("product leaves the group")
        return k

    def inv(self, i: int) -> int:
        return self._inv[i]

    def build_table(self) -> None:
        if self._table is not None:
            return
        if self.order > self.TABLE_CAP:
            raise CapExceeded(f"order {self.order} exceeds table cap {self.TABLE_CAP}")
        self._table = [
            [self.index[self._mul_fn(e, f)] for f in self.elements]
            for e in self.elements
        ]

    def element_order(self, i: int) -> int:
        k, acc = 1, i
        while acc != self.identity:
            acc = self.mul(acc, i)
            k += 1
            if k > self.order:
                raise InvalidModulus("element order exceeds group order")
        return k

    def subgroup_indices(self, generators: list[int]) -> list[int]:
        """Closure of the generators, as sorted element indices."""
        seen = {self.identity}
        frontier = [self.identity]
        gens = list(generators) + [self.inv(g) for g in generators]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    def conjugate(self, g: int, h: int) -> int:
        return self.mul(self.mul(g, h), self.inv(g))

    def dump_generators(self) -> dict:
        """JSON-ready description (name, order, element sample)."""
        sample = [repr(self.elements[i]) for i in range(min(self.order, 8))]
        return {"name": self.name, "order": self.order, "elements_head": sample}


def cyclic_group(n: int) -> FiniteGroup:
    """Z_n with elements 0..n-1 under addition mod n."""
    return FiniteGroup(range(n), lambda a, b: (a + b) % n, name=f"Z_{n}")


def _pgl2_elements(q: int) -> list[ProjMat2]:
    elems: list[ProjMat2] = []
    # canonical forms: first nonzero of (a,b,c,d) equals 1
    for b in range(q):
        for c in range(q):
            for d in range(q):
                if (d - b * c) % q != 0:
                    elems.append(ProjMat2(q, 1, b, c, d))
    for c in range(q):
        for d in range(q):
            if c != 0:  # det = -c must be nonzero
                elems.append(ProjMat2(q, 0, 1, c, d))
    # a = b = 0: det = 0 always; no elements
    return elems


@lru_cache(maxsize=None)
def build_pgl2(q: int) -> FiniteGroup:
    """PGL(2,q) fully enumerated; order q(q^2-1)."""
    if not is_prime(q) or q % 2 == 0:
        raise InvalidModulus(f"{q} is not an odd prime")
    if q > PGL_ORDER_CAP:
        raise CapExceeded(f"q={q} exceeds the enumeration cap {PGL_ORDER_CAP}")
    g = FiniteGroup(_pgl2_elements(q), lambda x, y: x.mul(y), name=f"PGL(2,{q})")
    if g.order != q * (q * q - 1):
        raise InvalidModulus("PGL enumeration produced a wrong order")
    return g


@lru_cache(maxsize=None)
def build_psl2(q: int) -> FiniteGroup:
    """PSL(2,q) as the square-determinant-class subgroup of PGL(2,q)."""
    pgl = build_pgl2(q)
    elems = [e for e in pgl.elements if e.det_is_square()]
    g = FiniteGroup(elems, lambda x, y: x.mul(y), name=f"PSL(2,{q})")
    if g.order != q * (q * q - 1) // 2:
        raise InvalidModulus("PSL enumeration produced a wrong order")
    return g


def unipotent_subgroup(g: FiniteGroup) -> FiniteGroup:
    """The cyclic subgroup {[[1,x],[0,1]]} of PGL(2,q); order exactly q."""
    if not g.elements or not isinstance(g.elements[0], ProjMat2):
        raise NotPGL("group elements are not projective matrices")
    q = g.elements[0].q
    elems = [ProjMat2(q, 1, x, 0, 1) for x in range(q)]
    for e in elems:
        if e not in g.index:
            raise NotPGL("unipotent elements are not all present in the group")
    sub = FiniteGroup(elems, lambda x, y: x.mul(y), name=f"U({q})")
    if sub.order != q:
        raise NotPGL("unipotent subgroup has unexpected order")
    return sub


# -- group algebra of Z_ell over GF(2) ---------------------------------


@dataclass(frozen=True)
class GroupAlgebraElem:
    """Element of GF(2)[Z_ell]; coeffs is an ell-bit mask, bit k = coefficient
    of the k-th power of the generator."""

    ell: int
    coeffs: int

    def __post_init__(self):
        if self.ell < 1:
            raise DimensionMismatch("cyclic order must be positive")
        if self.coeffs >> self.ell:
            raise DimensionMismatch("coefficient mask wider than the cyclic order")

    @staticmethod
    def zero(ell: int) -> "GroupAlgebraElem":
        return GroupAlgebraElem(ell, 0)

    @staticmethod
    def one(ell: int) -> "GroupAlgebraElem":
        return GroupAlgebraElem(ell, 1)

    @staticmethod
    def monomial(ell: int, k: int) -> "GroupAlgebraElem":
        return GroupAlgebraElem(ell, 1 << (k % ell))

    def add(self, other: "GroupAlgebraElem") -> "GroupAlgebraElem":
        if self.ell != other.ell:
            raise DimensionMismatch("mixed cyclic orders")
        return GroupAlgebraElem(self.ell, self.coeffs ^ other.coeffs)

    def mul(self, other: "GroupAlgebraElem") -> "GroupAlgebraElem":
        """Cyclic convolution mod 2."""
        if self.ell != other.ell:
            raise DimensionMismatch("mixed cyclic orders")
        ell, acc = self.ell, 0
        x = self.coeffs
        while x:
            k = (x & -x).bit_length() - 1
            rotated = ((other.coeffs << k) | (other.coeffs >> (ell - k))) if k else other.coeffs
            acc ^= rotated & ((1 << ell) - 1)
            x &= x - 1
        return GroupAlgebraElem(ell, acc)

    def is_zero(self) -> bool:
        return self.coeffs == 0


def circulant_lift(x: GroupAlgebraElem) -> F2Matrix:
    """Left-multiplication matrix of x in the monomial basis of GF(2)[Z_ell].

    Entry (i, j) is the coefficient of the generator power (i - j) mod ell,
    so lift(x*y) = lift(x) @ lift(y).
    """
    ell = x.ell
    ones = []
    for k in range(ell):
        if (x.coeffs >> k) & 1:
            for j in range(ell):
                ones.append(((j + k) % ell, j))
    return F2Matrix.from_entries(ell, ell, ones)


def lift_group_algebra_matrix(entries: list[list[GroupAlgebraElem]]) -> F2Matrix:
    """Blockwise circulant lift of a matrix over GF(2)[Z_ell].

    Output row (i, r) and column (j, s) are ordered block-major, i.e. index
    i*ell + r.
    """
    if not entries or not entries[0]:
        raise DimensionMismatch("empty matrix")
    ell = entries[0][0].ell
    rows, cols = len(entries), len(entries[0])
    ones = []
    for i, row in enumerate(entries):
        if len(row) != cols:
            raise DimensionMismatch("ragged matrix")
        for j, e in enumerate(row):
            if e.ell != ell:
                raise DimensionMismatch("mixed cyclic orders in matrix")
            for k in range(ell):
                if (e.coeffs >> k) & 1:
                    for s in range(ell):
                        ones.append((i * ell + (s + k) % ell, j * ell + s))
    return F2Matrix.from_entries(rows * ell, cols * ell, ones)


# -- GF(2^m) ------------------------------------------------------------

# Fixed primitive polynomials (bitmask includes the leading term), m <= 12.
PRIMITIVE_POLY = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000001010011,
}


class GF2m:
    """GF(2^m) with elements as m-bit polynomial masks."""

    def __init__(self, m: int):
        if m not in PRIMITIVE_POLY:
            raise InvalidModulus(f"no primitive polynomial on file for m={m}")
        self.m = m
        self.poly = PRIMITIVE_POLY[m]
        self.size = 1 << m

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        acc = 0
        while b:
            if b & 1:
                acc ^= a
            b >>= 1
            a <<= 1
            if a >> self.m:
                a ^= self.poly
        return acc

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        acc, base = 1, a
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in GF(2^m)")
        return self.pow(a, self.size - 2)

    def generator(self) -> int:
        return 0b10  # x is primitive for every polynomial in the table

    def element_order(self, a: int) -> int:
        k, acc = 1, a
        while acc != 1:
            acc = self.mul(acc, a)
            k += 1
            if k > self.size:
                raise InvalidModulus("not a unit")
        return k

    def poly_eval(self, coeffs: list[int], x: int) -> int:
        """Evaluate a polynomial with GF(2^m) coefficients, coeffs[k] on x^k."""
        acc = 0
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), c)
        return acc

    def coords(self, a: int) -> list[int]:
        """GF(2)-coordinates of a in the polynomial basis 1, x, ..., x^(m-1)."""
        return [(a >> k) & 1 for k in range(self.m)]
