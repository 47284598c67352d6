"""Chain complexes over GF(2): homology, tensor products, total complexes.

Degree convention: differentials lower the degree by one. Cochain-side
quantities come from transposed differentials rather than a mirrored
type. Missing differentials at the ends of the degree range are implicit
zero maps.

Tensor-product cell bases are ordered lexicographically (left-factor
index major, right-factor index minor) and total-complex blocks by
decreasing left degree, so every product matrix is bit-reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegreeOutOfRange,
    DimensionMismatch,
    KunnethViolation,
    NotChainComplex,
    NotDoubleComplex,
    NotTwoByTwo,
    TooSmall,
)
from .f2la import (
    F2Matrix,
    F2Subspace,
    IncrementalSpan,
    alist_dumps,
    alist_loads,
    kernel_basis,
    rank,
    rref,
    solve,
)


class ChainComplex:
    """Graded GF(2) vector spaces with differentials d_i: C_i -> C_{i-1}."""

    def __init__(self, dims: dict[int, int], diffs: dict[int, F2Matrix], check: bool = True):
        self.dims = dict(dims)
        self.diffs = dict(diffs)
        if not self.dims:
            raise NotChainComplex("empty complex")
        degs = sorted(self.dims)
        if degs != list(range(degs[0], degs[-1] + 1)):
            raise NotChainComplex("degree range is not contiguous")
        self.min_degree, self.max_degree = degs[0], degs[-1]
        for i, d in self.diffs.items():
            if i - 1 not in self.dims or i not in self.dims:
                raise NotChainComplex(f"differential at degree {i} leaves the range")
            if d.rows != self.dims[i - 1] or d.cols != self.dims[i]:
                raise NotChainComplex(
                    f"differential at degree {i} has shape {d.rows}x{d.cols}, "
                    f"expected {self.dims[i - 1]}x{self.dims[i]}"
                )
        if check:
            for i in self.diffs:
                if i - 1 in self.diffs:
                    if not self.diffs[i - 1].matmul(self.diffs[i]).is_zero():
                        raise NotChainComplex(f"d_{i-1} d_{i} != 0")

    def dim(self, i: int) -> int:
        return self.dims.get(i, 0)

    def differential(self, i: int) -> F2Matrix:
        """d_i, materializing the zero map at range ends."""
        if i in self.diffs:
            return self.diffs[i]
        return F2Matrix.zeros(self.dim(i - 1), self.dim(i))

    def degrees(self) -> range:
        return range(self.min_degree, self.max_degree + 1)

    def _require_degree(self, i: int) -> None:
        if i not in self.dims:
            raise DegreeOutOfRange(f"degree {i} outside [{self.min_degree}, {self.max_degree}]")

    def homology_dim(self, i: int) -> int:
        self._require_degree(i)
        return self.dim(i) - rank(self.differential(i)) - rank(self.differential(i + 1))

    def cohomology_dim(self, i: int) -> int:
        """Computed from transposed differentials; equals homology_dim."""
        self._require_degree(i)
        delta_out = self.differential(i + 1).transpose()  # C^i -> C^{i+1}
        delta_in = self.differential(i).transpose()  # C^{i-1} -> C^i
        return self.dim(i) - rank(delta_out) - rank(delta_in)

    def cycle_space(self, i: int) -> F2Subspace:
        self._require_degree(i)
        return kernel_basis(self.differential(i))

    def boundary_space(self, i: int) -> F2Subspace:
        self._require_degree(i)
        d = self.differential(i + 1)
        r, _ = rref(d.transpose())
        return F2Subspace(self.dim(i), r)

    def homology_basis(self, i: int) -> "HomologyBasis":
        """Cycle representatives spanning H_i, canonical given the bases.

        Boundary rows are spanned first; kernel vectors that extend the
        span become the class representatives, in kernel-basis order.
        """
        cycles = self.cycle_space(i)
        bounds = self.boundary_space(i)
        span = IncrementalSpan(bounds.basis.row_ints())
        reps = [v for v in cycles.basis.row_ints() if span.add(v)]
        rep_matrix = F2Matrix.from_rows(reps, self.dim(i))
        return HomologyBasis(i, F2Subspace(self.dim(i), rep_matrix), bounds)

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * self.dim(i) for i in self.degrees())

    def shift(self, k: int) -> "ChainComplex":
        """Same complex with degrees translated by k."""
        return ChainComplex(
            {i + k: n for i, n in self.dims.items()},
            {i + k: d for i, d in self.diffs.items()},
            check=False,
        )

    def to_json_dict(self) -> dict:
        return {
            "degrees": [self.min_degree, self.max_degree],
            "dims": {str(i): self.dims[i] for i in self.degrees()},
            "diffs": {str(i): alist_dumps(d) for i, d in sorted(self.diffs.items())},
        }

    @staticmethod
    def from_json_dict(obj: dict) -> "ChainComplex":
        dims = {int(k): v for k, v in obj["dims"].items()}
        diffs = {int(k): alist_loads(s) for k, s in obj["diffs"].items()}
        return ChainComplex(dims, diffs)

    def save_json(self, path) -> None:
        with open(path, "w") as f:
            json.dump(self.to_json_dict(), f)

    @staticmethod
    def load_json(path) -> "ChainComplex":
        with open(path) as f:
            return ChainComplex.from_json_dict(json.load(f))


@dataclass(frozen=True)
class HomologyBasis:
    degree: int
    cycle_reps: F2Subspace
    boundary_space: F2Subspace

    @property
    def dim(self) -> int:
        return self.cycle_reps.dim


def one_complex(d: F2Matrix) -> ChainComplex:
    """The two-term complex C_1 --d--> C_0."""
    return ChainComplex({1: d.cols, 0: d.rows}, {1: d}, check=False)


def cycle_graph_complex(ell: int) -> ChainComplex:
    """Chain complex of the circle cellulated into ell edges and ell vertices.

    Accepts ell >= 2; the two-cell circle is a valid cell complex even
    though it is not a simple graph.
    """
    if ell < 2:
        raise TooSmall("need at least 2 cells on the circle")
    ones = []
    for i in range(ell):
        ones.append((i, i))
        ones.append(((i + 1) % ell, i))
    d = F2Matrix.from_entries(ell, ell, ones)
    return one_complex(d)


class DoubleComplex:
    """Commuting grid of spaces E_{p,q} with vertical maps (q -> q-1) and
    horizontal maps (p -> p-1)."""

    def __init__(
        self,
        grid: dict[tuple[int, int], int],
        vdiffs: dict[tuple[int, int], F2Matrix],
        hdiffs: dict[tuple[int, int], F2Matrix],
        check: bool = True,
    ):
        self.grid = dict(grid)
        self.vdiffs = dict(vdiffs)
        self.hdiffs = dict(hdiffs)
        for (p, q), m in self.vdiffs.items():
            if m.rows != self.dim(p, q - 1) or m.cols != self.dim(p, q):
                raise NotDoubleComplex(f"vertical map at ({p},{q}) has a wrong shape")
        for (p, q), m in self.hdiffs.items():
            if m.rows != self.dim(p - 1, q) or m.cols != self.dim(p, q):
                raise NotDoubleComplex(f"horizontal map at ({p},{q}) has a wrong shape")
        if check:
            self._check_laws()

    def dim(self, p: int, q: int) -> int:
        return self.grid.get((p, q), 0)

    def vdiff(self, p: int, q: int) -> F2Matrix:
        return self.vdiffs.get((p, q), F2Matrix.zeros(self.dim(p, q - 1), self.dim(p, q)))

    def hdiff(self, p: int, q: int) -> F2Matrix:
        return self.hdiffs.get((p, q), F2Matrix.zeros(self.dim(p - 1, q), self.dim(p, q)))

    def _check_laws(self) -> None:
        for (p, q) in self.grid:
            if self.dim(p, q) == 0:
                continue
            vv = self.vdiff(p, q - 1).matmul(self.vdiff(p, q))
            if not vv.is_zero():
                raise NotDoubleComplex(f"(d^v)^2 != 0 at ({p},{q})")
            hh = self.hdiff(p - 1, q).matmul(self.hdiff(p, q))
            if not hh.is_zero():
                raise NotDoubleComplex(f"(d^h)^2 != 0 at ({p},{q})")
            vh = self.vdiff(p - 1, q).matmul(self.hdiff(p, q))
            hv = self.hdiff(p, q - 1).matmul(self.vdiff(p, q))
            if vh != hv:
                raise NotDoubleComplex(f"square at ({p},{q}) does not commute")

    def cells(self) -> list[tuple[int, int]]:
        return sorted(self.grid)


def tensor_double_complex(c: ChainComplex, d: ChainComplex) -> DoubleComplex:
    """Tensor product grid: E_{p,q} = C_p (x) D_q.

    The horizontal map (lowering p) is d^C (x) id and the vertical map
    (lowering q) is id (x) d^D, so the left factor stretches out
    horizontally.
    """
    grid: dict[tuple[int, int], int] = {}
    for p in c.degrees():
        for q in d.degrees():
            grid[(p, q)] = c.dim(p) * d.dim(q)
    vdiffs: dict[tuple[int, int], F2Matrix] = {}
    hdiffs: dict[tuple[int, int], F2Matrix] = {}
    for p in c.degrees():
        for q in d.degrees():
            if grid[(p, q)] == 0:
                continue
            if c.dim(p - 1) and d.dim(q):
                hdiffs[(p, q)] = _kron(c.differential(p), F2Matrix.identity(d.dim(q)))
            if c.dim(p) and d.dim(q - 1):
                vdiffs[(p, q)] = _kron(F2Matrix.identity(c.dim(p)), d.differential(q))
    return DoubleComplex(grid, vdiffs, hdiffs, check=False)


def _kron(a: F2Matrix, b: F2Matrix) -> F2Matrix:
    """Kronecker product with left-factor-major index order."""
    if a.rows * a.cols == 0 or b.rows * b.cols == 0:
        return F2Matrix.zeros(a.rows * b.rows, a.cols * b.cols)
    da = a.to_dense().astype(np.uint8)
    db = b.to_dense().astype(np.uint8)
    return F2Matrix.from_dense(np.kron(da, db))


def total_complex(e: DoubleComplex) -> ChainComplex:
    """Collapse a double complex along antidiagonals; d = d^v + d^h.

    Degree-n blocks are laid out by decreasing p.
    """
    degrees = sorted({p + q for p, q in e.grid})
    full = range(min(degrees), max(degrees) + 1)
    blocks: dict[int, list[tuple[int, int]]] = {
        n: sorted(
            [(p, q) for (p, q) in e.grid if p + q == n and e.dim(p, q) > 0],
            key=lambda pq: -pq[0],
        )
        for n in full
    }
    offs: dict[tuple[int, int], int] = {}
    dims: dict[int, int] = {}
    for n in full:
        off = 0
        for pq in blocks[n]:
            offs[pq] = off
            off += e.dim(*pq)
        dims[n] = off
    diffs: dict[int, F2Matrix] = {}
    for n in full:
        if n - 1 not in dims or dims[n] == 0 or dims[n - 1] == 0:
            continue
        ones: list[tuple[int, int]] = []
        for (p, q) in blocks[n]:
            src = offs[(p, q)]
            v = e.vdiff(p, q)
            if v.rows and (p, q - 1) in offs:
                dst = offs[(p, q - 1)]
                ones.extend(_shift_entries(v, dst, src))
            h = e.hdiff(p, q)
            if h.rows and (p - 1, q) in offs:
                dst = offs[(p - 1, q)]
                ones.extend(_shift_entries(h, dst, src))
        diffs[n] = F2Matrix.from_entries(dims[n - 1], dims[n], ones)
    tot = ChainComplex(dims, diffs, check=True)
    return tot


def _shift_entries(m: F2Matrix, row_off: int, col_off: int) -> list[tuple[int, int]]:
    rows, cols = np.nonzero(m.to_dense())
    return [(int(r) + row_off, int(c) + col_off) for r, c in zip(rows, cols)]


def tensor_complex(c: ChainComplex, d: ChainComplex) -> ChainComplex:
    return total_complex(tensor_double_complex(c, d))


@dataclass(frozen=True)
class KunnethReport:
    degree: int
    total_dim: int
    sum_of_products: int
    terms: tuple[tuple[int, int, int], ...]  # (p, q, dim H_p(C) * dim H_q(D))

    @property
    def holds(self) -> bool:
        return self.total_dim == self.sum_of_products


def verify_kunneth(c: ChainComplex, d: ChainComplex, n: int) -> KunnethReport:
    """Check dim H_n(C (x) D) against the sum of products of factor homologies.

    Both sides are computed independently; disagreement raises, since the
    identity is unconditional.
    """
    tot = tensor_complex(c, d)
    if n not in tot.dims:
        lhs = 0
    else:
        lhs = tot.homology_dim(n)
    terms = []
    rhs = 0
    for p in c.degrees():
        q = n - p
        if q in d.dims:
            t = c.homology_dim(p) * d.homology_dim(q)
            terms.append((p, q, t))
            rhs += t
    report = KunnethReport(n, lhs, rhs, tuple(terms))
    if not report.holds:
        raise KunnethViolation(f"degree {n}: total {lhs} != sum {rhs}")
    return report


def homology_2x2_via_pages(e: DoubleComplex, n: int) -> int:
    """Homology dimension of Tot(E) for a 2x2 grid, computed by taking
    vertical homology first and then the induced horizontal homology.

    The result is checked against the direct total-complex computation
    and returned.
    """
    if any(p not in (0, 1) or q not in (0, 1) for (p, q) in e.grid):
        raise NotTwoByTwo("grid is not supported on {0,1} x {0,1}")

    vert: dict[tuple[int, int], HomologyBasis] = {}
    for p in (0, 1):
        col = ChainComplex(
            {1: e.dim(p, 1), 0: e.dim(p, 0)},
            {1: e.vdiff(p, 1)} if e.dim(p, 1) and e.dim(p, 0) else {},
            check=False,
        )
        for q in (0, 1):
            vert[(p, q)] = col.homology_basis(q)

    page: dict[tuple[int, int], int] = {}
    for q in (0, 1):
        induced = _induced_map(e, q, vert)
        page[(1, q)] = induced.cols - rank(induced)
        page[(0, q)] = induced.rows - rank(induced)

    result = sum(page[(p, q)] for p in (0, 1) for q in (0, 1) if p + q == n)
    direct = total_complex(e).homology_dim(n) if n in total_complex(e).dims else 0
    if result != direct:
        raise KunnethViolation(
            f"page computation {result} != total homology {direct} at degree {n}"
        )
    return result


def _induced_map(e: DoubleComplex, q: int, vert) -> F2Matrix:
    """Matrix of d^h on vertical homology H_q(E_{1,*}) -> H_q(E_{0,*})."""
    src: HomologyBasis = vert[(1, q)]
    dst: HomologyBasis = vert[(0, q)]
    h = e.hdiff(1, q)
    cols: list[int] = []
    # coordinates of [h z] against (dst reps | dst boundaries)
    dst_matrix = dst.cycle_reps.basis.vstack(dst.boundary_space.basis).transpose()
    for z in src.cycle_reps.basis.row_ints():
        img = h.mul_vec_int(z)
        x = solve(dst_matrix, img)
        if x is None:
            raise KunnethViolation("induced horizontal image is not a cycle")
        cols.append(x & ((1 << dst.dim) - 1))
    if not cols:
        return F2Matrix.zeros(dst.dim, 0)
    return F2Matrix.from_rows(cols, dst.dim).transpose()


def verify_euler(c: ChainComplex) -> bool:
    """Euler characteristic from chain dims equals the one from homology."""
    chain = c.euler_characteristic()
    hom = sum((-1) ** i * c.homology_dim(i) for i in c.degrees())
    return chain == hom
