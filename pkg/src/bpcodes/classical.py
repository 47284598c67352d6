"""Binary linear codes used as Tanner local codes.

Hamming, BCH-via-Goppa, general binary Goppa codes, duals, exact minimum
distance by enumeration, and the seeded random search for codes whose
distance and dual distance both clear a target fraction of the block
length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .algebra import GF2m
from .errors import (
    DomainError,
    DuplicateLocator,
    IncompatibleLength,
    LocatorRoot,
    SearchExhausted,
    TooLarge,
)
from .f2la import F2Matrix, kernel_basis, rank, rref

EXACT_DISTANCE_CAP_K = 28
_GRAY_LOOP_CAP_K = 20


@dataclass(frozen=True)
class LinearCode:
    """[n, k, d] binary linear code.

    ``check`` rows may be redundant (e.g. all cyclic shifts of one dual
    word); ``gen`` rows are always independent. ``d`` is present only when
    it has been computed exactly.
    """

    n: int
    check: F2Matrix
    gen: F2Matrix
    k: int
    d: int | None = None
    cyclic: bool = False
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.check.cols != self.n or self.gen.cols != self.n:
            raise DomainError("check/generator width differs from block length")
        if not self.gen.matmul(self.check.transpose()).is_zero():
            raise DomainError("generator rows do not satisfy the checks")
        if self.k != self.gen.rows or self.k != self.n - rank(self.check):
            raise DomainError("dimension bookkeeping is inconsistent")
        if rank(self.gen) != self.k:
            raise DomainError("generator rows are dependent")

    @staticmethod
    def from_check(check: F2Matrix, cyclic: bool = False, name: str = "") -> "LinearCode":
        gen = kernel_basis(check).basis
        return LinearCode(check.cols, check, gen, gen.rows, cyclic=cyclic, name=name)

    @staticmethod
    def from_gen(gen: F2Matrix, cyclic: bool = False, name: str = "") -> "LinearCode":
        g, _ = rref(gen)
        check = kernel_basis(g).basis
        return LinearCode(g.cols, check, g, g.rows, cyclic=cyclic, name=name)

    def reduced_check(self) -> F2Matrix:
        """Full-row-rank row echelon form of the check matrix."""
        r, _ = rref(self.check)
        return r

    def contains(self, word: int) -> bool:
        return self.check.mul_vec_int(word) == 0

    def with_distance(self, d: int) -> "LinearCode":
        return replace(self, d=d)


def exact_distance(code: LinearCode, cap_k: int = EXACT_DISTANCE_CAP_K) -> int:
    """Exact minimum nonzero codeword weight by message-space enumeration.

    Gray-code walk for small k, meet-in-the-middle over numpy-packed
    halves otherwise. Raises TooLarge above 2^cap_k messages and
    DomainError for the zero code.
    """
    k = code.k
    if k == 0:
        raise DomainError("zero code has no nonzero codewords")
    if k > cap_k:
        raise TooLarge(f"2^{k} codewords exceed the enumeration cap")
    rows = code.gen.row_ints()
    if k <= _GRAY_LOOP_CAP_K:
        best = min_weight_gray(rows)
    else:
        best = _min_weight_mitm(code.gen)
    return best


def min_weight_gray(rows: list[int]) -> int:
    """Minimum weight over nonzero GF(2) combinations of the given rows."""
    k = len(rows)
    cur = 0
    best = None
    for i in range(1, 1 << k):
        cur ^= rows[(i & -i).bit_length() - 1]
        w = cur.bit_count()
        if w and (best is None or w < best):
            best = w
    if best is None:
        raise DomainError("all combinations vanish; rows were dependent")
    return best


def _min_weight_mitm(gen: F2Matrix) -> int:
    k = gen.rows
    ka = k // 2
    left = _span_packed(gen.submatrix_rows(range(ka)))
    right = _span_packed(gen.submatrix_rows(range(ka, k)))
    best = np.iinfo(np.int64).max
    chunk = max(1, (1 << 22) // max(1, right.shape[0]))
    for start in range(0, left.shape[0], chunk):
        block = left[start : start + chunk]
        xored = block[:, None, :] ^ right[None, :, :]
        weights = np.bitwise_count(xored).sum(axis=2)
        if start == 0:
            weights[0, 0] = np.iinfo(np.int64).max  # exclude the zero word
        best = min(best, int(weights.min()))
    return best


def _span_packed(gen: F2Matrix) -> np.ndarray:
    """All 2^rows combinations as packed uint64 rows, in Gray-walk order
    starting from zero."""
    k = gen.rows
    out = np.zeros((1 << k, gen.data.shape[1]), dtype=np.uint64)
    cur = np.zeros(gen.data.shape[1], dtype=np.uint64)
    for i in range(1, 1 << k):
        cur = cur ^ gen.data[(i & -i).bit_length() - 1]
        out[i] = cur
    return out


def dual_code(code: LinearCode) -> LinearCode:
    """Dual code: generators are the (row-reduced) checks of the input."""
    gen, _ = rref(code.check)
    if gen.rows == 0:
        gen = F2Matrix.zeros(0, code.n)
    check = kernel_basis(gen).basis if gen.rows else F2Matrix.identity(code.n)
    return LinearCode(code.n, check, gen, gen.rows, name=f"dual({code.name})" if code.name else "")


def repetition_code(n: int) -> LinearCode:
    ones = [(i, j) for i in range(n - 1) for j in (i, i + 1)]
    check = F2Matrix.from_entries(n - 1, n, ones)
    code = LinearCode.from_check(check, name=f"rep{n}")
    return code.with_distance(n)


def full_space_code(n: int) -> LinearCode:
    return LinearCode(
        n, F2Matrix.zeros(0, n), F2Matrix.identity(n), n, d=1, name=f"full{n}"
    )


def hamming_7_4() -> LinearCode:
    """The [7,4,3] Hamming code in cyclic form: check rows are the seven
    cyclic shifts of one dual word, generator rows shifts of 1+x+x^3."""
    gen_poly = (1, 1, 0, 1, 0, 0, 0)
    dual_word = (1, 0, 1, 1, 1, 0, 0)  # reciprocal of (x^7+1)/(x^3+x+1)
    gen = F2Matrix.from_dense([_cyclic_shift(gen_poly, i) for i in range(4)])
    check = F2Matrix.from_dense([_cyclic_shift(dual_word, i) for i in range(7)])
    code = LinearCode(7, check, gen, 4, cyclic=True, name="hamming7")
    return code.with_distance(exact_distance(code))


def _cyclic_shift(vec, i: int) -> list[int]:
    n = len(vec)
    return [vec[(j - i) % n] for j in range(n)]


# -- Goppa codes --------------------------------------------------------


def goppa_code(
    m: int, g_coeffs: list[int], locators: list[int], name: str = ""
) -> LinearCode:
    """Binary Goppa code from g in GF(2^m)[x] and locators with g != 0 there.

    Parity checks expand the mod-g congruence into deg(g) rows over
    GF(2^m), each split into m binary rows coordinate-wise; hence
    k >= n - m*deg(g).
    """
    f = GF2m(m)
    while g_coeffs and g_coeffs[-1] == 0:
        g_coeffs = g_coeffs[:-1]
    t = len(g_coeffs) - 1
    if t < 0:
        raise DomainError("zero polynomial")
    n = len(locators)
    if len(set(locators)) != n:
        raise DuplicateLocator("locators must be distinct")
    gvals = [f.poly_eval(g_coeffs, γ) for γ in locators]
    if any(v == 0 for v in gvals):
        raise LocatorRoot("a locator is a root of g")
    if t == 0:
        return full_space_code(n)

    # H[j, i] = locator_i^j / g(locator_i); row-equivalent to the canonical
    # divided-difference form since the change of basis is triangular
    rows_bin: list[list[int]] = []
    for j in range(t):
        row = [f.mul(f.pow(γ, j), f.inv(gv)) for γ, gv in zip(locators, gvals)]
        for bit in range(m):
            rows_bin.append([(x >> bit) & 1 for x in row])
    check = F2Matrix.from_dense(rows_bin)
    code = LinearCode.from_check(check, name=name or f"goppa(m={m},t={t},n={n})")
    if code.k < n - m * t:
        raise DomainError("rank exceeded m*t; construction bug")
    return code


def goppa_is_separable(m: int, g_coeffs: list[int]) -> bool:
    """Squarefree test: gcd(g, g') = 1 in GF(2^m)[x]."""
    f = GF2m(m)
    g = list(g_coeffs)
    # formal derivative in characteristic 2: odd-degree terms survive
    dg = [g[i] if i % 2 == 1 else 0 for i in range(1, len(g))]
    gcd = _poly_gcd(f, g, dg)
    return len(gcd) == 1


def _poly_trim(p: list[int]) -> list[int]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mod(f: GF2m, a: list[int], b: list[int]) -> list[int]:
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial mod zero")
    inv_lead = f.inv(b[-1])
    while len(a) >= len(b) and a:
        coef = f.mul(a[-1], inv_lead)
        shift = len(a) - len(b)
        for i, bc in enumerate(b):
            a[shift + i] ^= f.mul(coef, bc)
        a = _poly_trim(a)
    return a


def _poly_gcd(f: GF2m, a: list[int], b: list[int]) -> list[int]:
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        a, b = b, _poly_mod(f, a, b)
    if a:
        inv_lead = f.inv(a[-1])
        a = [f.mul(x, inv_lead) for x in a]
    return a


def moreno_moreno_dual_bound(m: int, t: int) -> float:
    """Dual-distance lower bound for a separable degree-t Goppa polynomial
    with all t roots in the field and locators on every non-root."""
    return 2 ** (m - 1) - (t - 1) / 2 - (t - 1) * 2 ** (m / 2)


def bch_code(s: int, t: int) -> LinearCode:
    """BCH code of length s and design parameter t, realized as the Goppa
    code with g = x^(2t) on the powers of a primitive s-th root of unity.

    The binary moment conditions at even exponents are consequences of the
    odd ones, so k >= s - m*t while the designed distance is 2t + 1.
    """
    if s < 1 or s % 2 == 0:
        raise IncompatibleLength("length must be odd")
    if t < 0:
        raise DomainError("negative design parameter")
    if t == 0:
        code = full_space_code(s)
        return replace(code, cyclic=True, name=f"bch({s},0)")
    m = _multiplicative_order_of_two(s)
    f = GF2m(m)
    beta = f.pow(f.generator(), (f.size - 1) // s)
    if f.element_order(beta) != s:
        raise IncompatibleLength("no primitive s-th root of unity found")
    locators = [f.pow(beta, i) for i in range(s)]
    g = [0] * (2 * t) + [1]
    code = goppa_code(m, g, locators, name=f"bch({s},{t})")
    code = replace(code, cyclic=True)
    if code.k < s - m * t:
        raise DomainError("BCH dimension fell below s - m*t")
    if code.k <= EXACT_DISTANCE_CAP_K and code.k > 0:
        d = exact_distance(code)
        if d < 2 * t + 1:
            raise DomainError(f"designed distance violated: d={d} < {2 * t + 1}")
        code = code.with_distance(d)
    return code


def _multiplicative_order_of_two(s: int) -> int:
    if math.gcd(s, 2) != 1:
        raise IncompatibleLength("length must be odd")
    m, acc = 1, 2 % s
    while acc != 1:
        acc = (acc * 2) % s
        m += 1
        if m > 12:
            raise IncompatibleLength("2 has order > 12 modulo s; field too large")
    return m


# -- randomized search for good local codes ------------------------------


def binary_entropy(delta: float) -> float:
    if not (0 < delta < 1):
        raise DomainError("entropy argument must lie in (0,1)")
    return -delta * math.log2(delta) - (1 - delta) * math.log2(1 - delta)


@dataclass(frozen=True)
class GvSearchResult:
    code: LinearCode
    d: int
    d_dual: int
    target: int
    trials: int
    trial_log: tuple[tuple[int, int, int | None, int | None], ...]
    theorem_threshold: float
    threshold_satisfied: bool


def gv_plus_search(
    s: int,
    delta: float,
    rate_floor: float = 0.5,
    seed: int = 0,
    max_trials: int = 2000,
) -> GvSearchResult:
    """Seeded random search for a code with k > rate_floor*s and both the
    distance and the dual distance at least ceil(delta*s).

    Existence is guaranteed above the entropy threshold n > 2/(1/2 -
    H2(delta)) for delta in (0, 0.11); below the threshold the search is
    still run (such codes are abundant at small sizes) and the threshold
    is only reported. Every trial is logged as (trial, rank, d, d_dual)
    with None entries for stages not reached.
    """
    if not (0 < delta < 0.11):
        raise DomainError("delta must lie in (0, 0.11)")
    k = int(math.floor(rate_floor * s)) + 1
    if k > EXACT_DISTANCE_CAP_K or s - k > EXACT_DISTANCE_CAP_K:
        raise TooLarge("distance enumeration infeasible at this size")
    target = math.ceil(delta * s)
    h2 = binary_entropy(delta)
    threshold = 2 / (0.5 - h2)
    rng = np.random.default_rng(seed)
    log: list[tuple[int, int, int | None, int | None]] = []
    for trial in range(1, max_trials + 1):
        g = F2Matrix.from_dense(rng.integers(0, 2, (k, s), dtype=np.uint8))
        r = rank(g)
        if r < k:
            log.append((trial, r, None, None))
            continue
        code = LinearCode.from_gen(g)
        d = exact_distance(code)
        if d < target:
            log.append((trial, r, d, None))
            continue
        dual = dual_code(code)
        dd = exact_distance(dual)
        log.append((trial, r, d, dd))
        if dd < target:
            continue
        found = code.with_distance(d)
        found = replace(found, name=f"gv(s={s},delta={delta},seed={seed})")
        return GvSearchResult(
            code=found,
            d=d,
            d_dual=dd,
            target=target,
            trials=trial,
            trial_log=tuple(log),
            theorem_threshold=threshold,
            threshold_satisfied=s > threshold,
        )
    raise SearchExhausted(f"no code found in {max_trials} trials at s={s}, delta={delta}")


def singleton_ok(code: LinearCode) -> bool:
    return code.d is None or code.d <= code.n - code.k + 1


# -- registry ------------------------------------------------------------


def local_code_from_spec(spec: str) -> LinearCode:
    """Parse a construction recipe string.

    Formats: ``hamming7``, ``rep:N``, ``full:N``, ``bch:S,T``,
    ``goppa:M,T,SEED`` (random separable polynomial and all-nonroot
    locators), ``gv:S,DELTA,SEED``.
    """
    head, _, arg = spec.partition(":")
    if head == "hamming7":
        return hamming_7_4()
    if head == "rep":
        return repetition_code(int(arg))
    if head == "full":
        return full_space_code(int(arg))
    if head == "bch":
        s, t = (int(x) for x in arg.split(","))
        return bch_code(s, t)
    if head == "goppa":
        parts = arg.split(",")
        m, t = int(parts[0]), int(parts[1])
        seed = int(parts[2]) if len(parts) > 2 else 0
        return random_separable_goppa(m, t, seed)
    if head == "gv":
        parts = arg.split(",")
        s, delta = int(parts[0]), float(parts[1])
        seed = int(parts[2]) if len(parts) > 2 else 0
        return gv_plus_search(s, delta, seed=seed).code
    raise DomainError(f"unknown local code spec {spec!r}")


def random_separable_goppa(m: int, t: int, seed: int = 0) -> LinearCode:
    """Goppa code whose polynomial has t distinct roots drawn from the
    field; locators are all remaining field elements."""
    f = GF2m(m)
    rng = np.random.default_rng(seed)
    roots = [int(r) for r in rng.choice(f.size, size=t, replace=False)]
    g = [1]
    for r in roots:  # multiply by (x + r)
        nxt = [0] * (len(g) + 1)
        for i, c in enumerate(g):
            nxt[i + 1] ^= c
            nxt[i] ^= f.mul(r, c)
        g = nxt
    locators = [x for x in range(f.size) if x not in set(roots)]
    return goppa_code(m, g, locators, name=f"goppa(m={m},t={t},seed={seed})")
