"""Regular labeled graphs: Cayley/LPS expanders, group actions, quotients
with connections, coset graphs, spectral gaps, and brute-force checks of
the expansion lemmas.

A LabeledGraph is a simple s-regular graph where every vertex carries a
bijection from its incident edges to the label set {0..s-1}; the labels
are what a Tanner local code attaches to.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .algebra import FiniteGroup, ProjMat2, is_prime, legendre
from .errors import (
    Disconnected,
    DomainError,
    IncidenceDegenerate,
    InvalidPrimes,
    NotFree,
    NotSimpleGraph,
    NotSymmetric,
    QuotientConditionViolated,
    SelfLoop,
    SizeMismatch,
)


class LabeledGraph:
    """Simple s-regular graph with an edge labeling around each vertex.

    edges[e] = (u, v) with u < v; labels[e] = (label at u, label at v).
    """

    def __init__(self, n_vertices: int, edges, labels, degree: int):
        self.n = n_vertices
        self.edges = [tuple(e) for e in edges]
        self.labels = [tuple(l) for l in labels]
        self.s = degree
        self._validate()
        # incidence lookups
        self.incident: list[list[int]] = [[] for _ in range(self.n)]
        for e, (u, v) in enumerate(self.edges):
            self.incident[u].append(e)
            self.incident[v].append(e)
        # edge_at[v][label] = edge index
        self.edge_at: list[list[int]] = [[-1] * self.s for _ in range(self.n)]
        for e, (u, v) in enumerate(self.edges):
            lu, lv = self.labels[e]
            self.edge_at[u][lu] = e
            self.edge_at[v][lv] = e

    def _validate(self) -> None:
        if len(self.labels) != len(self.edges):
            raise NotSimpleGraph("labels and edges differ in length")
        seen = set()
        deg = [0] * self.n
        per_vertex_labels: list[set[int]] = [set() for _ in range(self.n)]
        for e, (u, v) in enumerate(self.edges):
            if u == v:
                raise SelfLoop(f"edge {e} is a self-loop at {u}")
            if not (0 <= u < v < self.n):
                raise NotSimpleGraph(f"edge {e} endpoints out of order or range")
            if (u, v) in seen:
                raise NotSimpleGraph(f"parallel edge {u}-{v}")
            seen.add((u, v))
            deg[u] += 1
            deg[v] += 1
            lu, lv = self.labels[e]
            for w, l in ((u, lu), (v, lv)):
                if not (0 <= l < self.s):
                    raise NotSimpleGraph(f"label {l} outside [0,{self.s}) at vertex {w}")
                if l in per_vertex_labels[w]:
                    raise NotSimpleGraph(f"label {l} repeated at vertex {w}")
                per_vertex_labels[w].add(l)
        if any(d != self.s for d in deg):
            raise NotSimpleGraph("graph is not regular of the declared degree")

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def label_at(self, v: int, e: int) -> int:
        u, w = self.edges[e]
        if v == u:
            return self.labels[e][0]
        if v == w:
            return self.labels[e][1]
        raise NotSimpleGraph(f"vertex {v} not on edge {e}")

    def other_endpoint(self, v: int, e: int) -> int:
        u, w = self.edges[e]
        return w if v == u else u

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.float64)
        for u, v in self.edges:
            a[u, v] = 1.0
            a[v, u] = 1.0
        return a

    def adjacency_sparse(self) -> scipy.sparse.csr_matrix:
        rows, cols = [], []
        for u, v in self.edges:
            rows += [u, v]
            cols += [v, u]
        data = np.ones(len(rows))
        return scipy.sparse.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    def is_connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for e in self.incident[v]:
                w = self.other_endpoint(v, e)
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    # -- text export --------------------------------------------------

    def save_edge_list(self, path) -> None:
        """One line per edge: ``u v label_u label_v``."""
        with open(path, "w") as f:
            f.write(f"# vertices={self.n} degree={self.s}\n")
            for (u, v), (lu, lv) in zip(self.edges, self.labels):
                f.write(f"{u} {v} {lu} {lv}\n")

    @staticmethod
    def load_edge_list(path) -> "LabeledGraph":
        edges, labels = [], []
        n = degree = None
        with open(path) as f:
            for line in f:
                line = line.strip()
                if line.startswith("#"):
                    for tok in line[1:].split():
                        k, _, val = tok.partition("=")
                        if k == "vertices":
                            n = int(val)
                        elif k == "degree":
                            degree = int(val)
                    continue
                if not line:
                    continue
                u, v, lu, lv = map(int, line.split())
                edges.append((u, v))
                labels.append((lu, lv))
        if n is None:
            n = 1 + max(max(u, v) for u, v in edges)
        if degree is None:
            degree = (2 * len(edges)) // n
        return LabeledGraph(n, edges, labels, degree)


# -- Cayley graphs ------------------------------------------------------


def cayley_graph(group: FiniteGroup, gens: list[int]) -> LabeledGraph:
    """Undirected Cayley graph: g joined to s*g for each generator s.

    The label of the edge {g, s*g} at g is the index of s in the given
    (symmetric, ordered) generator list. Involutive generators would give
    one undirected edge two labels at once, so they are rejected.
    """
    gen_set = set(gens)
    if group.identity in gen_set:
        raise SelfLoop("identity in the generating set")
    for s in gens:
        if group.inv(s) not in gen_set:
            raise NotSymmetric("generating set is not closed under inverses")
        if group.inv(s) == s:
            raise NotSymmetric("involutive generator; labeling convention undefined")
    edges = {}
    labels = {}
    for g in range(group.order):
        for idx, s in enumerate(gens):
            h = group.mul(s, g)
            if h == g:
                raise SelfLoop("a generator fixes a vertex")
            key = (min(g, h), max(g, h))
            if key not in edges:
                edges[key] = len(edges)
                labels[key] = [-1, -1]
            side = 0 if g == key[0] else 1
            prev = labels[key][side]
            if prev not in (-1, idx):
                raise NotSimpleGraph("two generators produce the same edge")
            labels[key][side] = idx
    ordered = sorted(edges, key=edges.get)
    return LabeledGraph(
        group.order, ordered, [tuple(labels[k]) for k in ordered], len(gens)
    )


# -- LPS generator sets ---------------------------------------------------


def _sum_of_four_squares(p: int) -> list[tuple[int, int, int, int]]:
    bound = int(math.isqrt(p))
    out = []
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            ab = a * a + b * b
            if ab > p:
                continue
            for c in range(-bound, bound + 1):
                rem = p - ab - c * c
                if rem < 0:
                    continue
                d = int(math.isqrt(rem))
                for dd in {d, -d}:
                    if dd * dd == rem:
                        out.append((a, b, c, dd))
    return out


def lps_quadruples(p: int) -> list[tuple[int, int, int, int]]:
    """The p+1 integer quadruples with a^2+b^2+c^2+d^2 = p, filtered by the
    sign/parity rule for p mod 4."""
    if not is_prime(p) or p == 2:
        raise InvalidPrimes(f"p={p} is not an odd prime")
    quads = _sum_of_four_squares(p)
    if p % 4 == 1:
        chosen = [q for q in quads if q[0] > 0 and q[0] % 2 == 1]
    else:
        def first_nonzero_positive(q):
            for x in q:
                if x != 0:
                    return x > 0
            return False

        chosen = [q for q in quads if q[0] % 2 == 0 and first_nonzero_positive(q)]
    if len(chosen) != p + 1:
        raise SizeMismatch(f"expected {p + 1} quadruples, found {len(chosen)}")
    return sorted(chosen)


def solve_x2_y2_plus_one(q: int) -> tuple[int, int]:
    """Smallest (x, y) lexicographically with x^2 + y^2 + 1 = 0 mod q."""
    for x in range(q):
        for y in range(q):
            if (x * x + y * y + 1) % q == 0:
                return x, y
    raise InvalidPrimes(f"no solution of x^2+y^2+1=0 mod {q}")  # unreachable for prime q


def lps_generators(p: int, q: int) -> list[ProjMat2]:
    """The p+1 projective matrices generating the LPS expander X_{p,q}.

    The set is symmetric; whether it generates PSL or PGL is decided by
    the Legendre symbol (p/q).
    """
    if p == q or not is_prime(p) or not is_prime(q) or p == 2 or q == 2:
        raise InvalidPrimes("p and q must be distinct odd primes")
    if q <= 2 * math.sqrt(p):
        raise InvalidPrimes(f"need q > 2*sqrt(p); got q={q}, p={p}")
    x, y = solve_x2_y2_plus_one(q)
    mats = []
    for a, b, c, d in lps_quadruples(p):
        mats.append(
            ProjMat2.make(
                q,
                a + b * x + d * y,
                -b * y + c + d * x,
                -b * y - c + d * x,
                a - b * x - d * y,
            )
        )
    if len(set(mats)) != p + 1:
        raise SizeMismatch("quadruples collapsed to fewer projective matrices")
    inv_set = {m.inv() for m in mats}
    if inv_set != set(mats):
        raise NotSymmetric("LPS generator set is not closed under inverses")
    return mats


def lps_graph(p: int, q: int) -> tuple[LabeledGraph, FiniteGroup, list[int]]:
    """Cayley graph of PGL(2,q) or PSL(2,q) on the LPS generators.

    Returns (graph, group, generator indices). The group is PSL when
    (p/q) = 1 and PGL when (p/q) = -1.
    """
    from .algebra import build_pgl2, build_psl2

    mats = lps_generators(p, q)
    group = build_psl2(q) if legendre(p, q) == 1 else build_pgl2(q)
    gens = [group.index[m] for m in mats]
    graph = cayley_graph(group, gens)
    return graph, group, gens


# -- spectra -------------------------------------------------------------

EIG_TOL = 1e-6
DENSE_EIG_CAP = 3000


def second_eigenvalue(x: LabeledGraph, tol: float = EIG_TOL) -> float:
    """Second largest adjacency eigenvalue of a connected regular graph.

    Dense symmetric solve below DENSE_EIG_CAP vertices, Lanczos above.
    Raises Disconnected when the top eigenvalue s has multiplicity > 1
    (within tol).
    """
    if x.n <= 2:
        raise DomainError("graph too small for a second eigenvalue")
    if x.n <= DENSE_EIG_CAP:
        vals = scipy.linalg.eigvalsh(x.adjacency())
        top, second = vals[-1], vals[-2]
    else:
        a = x.adjacency_sparse()
        rng = np.random.default_rng(12345)
        v0 = rng.standard_normal(x.n)
        vals = scipy.sparse.linalg.eigsh(
            a, k=2, which="LA", v0=v0, return_eigenvectors=False, tol=0.0
        )
        vals = np.sort(vals)
        top, second = vals[-1], vals[-2]
    if abs(top - x.s) > 1e-8:
        raise Disconnected("top eigenvalue differs from the degree")
    if abs(second - x.s) <= tol:
        raise Disconnected("degree eigenvalue has multiplicity > 1")
    return float(second)


# -- expansion bound formulas ---------------------------------------------


def cheeger_lower_bound(s: float, lam2: float, alpha: float) -> float:
    """Vertex-set boundary bound: |dS|/|S| >= (1-alpha)(s-lam2) for |S| <= alpha n."""
    if not (0 <= alpha <= 1):
        raise DomainError("alpha outside [0,1]")
    return (1 - alpha) * (s - lam2)


def edge_to_vertex_beta(s: float, lam2: float, alpha: float) -> float:
    """beta with |Gamma(E)| >= beta |E| for |E| <= alpha |X^1|."""
    if alpha <= 0:
        raise DomainError("alpha must be positive")
    return (math.sqrt(lam2 * lam2 + 4 * s * (s - lam2) * alpha) - lam2) / (
        s * (s - lam2) * alpha
    )


def strong_neighbor_beta(s: float, lam2: float, alpha: float, b: float) -> float:
    """beta with |A| >= beta |S| where A = vertices of S having at least s-b
    boundary edges, for |S| <= alpha n."""
    if b <= 0 or b > s:
        raise DomainError("need 0 < b <= s")
    if alpha < 0:
        raise DomainError("alpha must be nonnegative")
    return ((b - lam2) - alpha * (s - lam2)) / b


def alon_chung_edge_fraction(s: float, lam2: float, gamma: float) -> float:
    """Upper bound on the induced-subgraph edge fraction for |S| = gamma n."""
    if not (0 <= gamma <= 1):
        raise DomainError("gamma outside [0,1]")
    return gamma * gamma + (lam2 / s) * gamma * (1 - gamma)


@dataclass(frozen=True)
class ExpansionCheckReport:
    lemma: str
    subsets_checked: int
    violations: int
    tightest_ratio: float  # min of (observed / bound) over checked subsets

    @property
    def holds(self) -> bool:
        return self.violations == 0


def brute_force_expansion_check(
    x: LabeledGraph, lemma: str, max_subset: int, alpha: float = 1.0, b: float | None = None
) -> ExpansionCheckReport:
    """Verify one of the expansion inequalities over every subset up to
    max_subset elements (vertex subsets or edge subsets depending on the
    lemma). Ratios <= 1 would be violations.
    """
    lam2 = second_eigenvalue(x)
    s = x.s
    checked = violations = 0
    tightest = math.inf

    if lemma == "cheeger":
        n = x.n
        for size in range(1, min(max_subset, n) + 1):
            if size > alpha * n:
                break
            for sub in itertools.combinations(range(n), size):
                bound = cheeger_lower_bound(s, lam2, size / n)
                cut = _cut_size(x, set(sub))
                checked += 1
                ratio = (cut / size) / bound if bound > 0 else math.inf
                tightest = min(tightest, ratio)
                if cut / size < bound - 1e-9:
                    violations += 1
    elif lemma == "edge_vertex":
        ne = x.n_edges
        for size in range(1, min(max_subset, ne) + 1):
            if size > alpha * ne:
                break
            beta = edge_to_vertex_beta(s, lam2, alpha)
            for sub in itertools.combinations(range(ne), size):
                touched = set()
                for e in sub:
                    touched.update(x.edges[e])
                checked += 1
                ratio = len(touched) / (beta * size) if beta > 0 else math.inf
                tightest = min(tightest, ratio)
                if len(touched) < beta * size - 1e-9:
                    violations += 1
    elif lemma == "strong_neighbor":
        if b is None:
            b = s
        n = x.n
        for size in range(1, min(max_subset, n) + 1):
            if size > alpha * n:
                break
            beta = strong_neighbor_beta(s, lam2, alpha, b)
            for sub in itertools.combinations(range(n), size):
                subset = set(sub)
                a_count = 0
                for v in subset:
                    boundary_here = sum(
                        1 for e in x.incident[v] if x.other_endpoint(v, e) not in subset
                    )
                    if boundary_here >= s - b:
                        a_count += 1
                checked += 1
                ratio = a_count / (beta * size) if beta > 0 else math.inf
                tightest = min(tightest, ratio)
                if a_count < beta * size - 1e-9:
                    violations += 1
    elif lemma == "alon_chung":
        n = x.n
        for size in range(1, min(max_subset, n) + 1):
            gamma = size / n
            cap = alon_chung_edge_fraction(s, lam2, gamma) * x.n_edges
            for sub in itertools.combinations(range(n), size):
                subset = set(sub)
                inner = sum(1 for u, v in x.edges if u in subset and v in subset)
                checked += 1
                ratio = cap / inner if inner > 0 else math.inf
                tightest = min(tightest, ratio)
                if inner > cap + 1e-9:
                    violations += 1
    else:
        raise DomainError(f"unknown lemma id {lemma!r}")

    return ExpansionCheckReport(lemma, checked, violations, tightest)


def _cut_size(x: LabeledGraph, subset: set[int]) -> int:
    return sum(1 for u, v in x.edges if (u in subset) != (v in subset))


# -- group actions on graphs ----------------------------------------------


class GraphAction:
    """A free action of a finite group on a labeled graph.

    vertex_perms[h][v] and edge_perms[h][e] give the images under the h-th
    group element. Construction checks freeness, that the permutations
    respect incidence, label invariance, and the quotient condition (no
    edge inside a vertex orbit).
    """

    def __init__(self, graph: LabeledGraph, group: FiniteGroup, vertex_perms, edge_perms):
        self.graph = graph
        self.group = group
        self.vertex_perms = [list(p) for p in vertex_perms]
        self.edge_perms = [list(p) for p in edge_perms]
        self._validate()

    def _validate(self) -> None:
        g, x = self.group, self.graph
        if len(self.vertex_perms) != g.order or len(self.edge_perms) != g.order:
            raise NotFree("permutation list length differs from the group order")
        ident = g.identity
        if self.vertex_perms[ident] != list(range(x.n)):
            raise NotFree("identity does not act as the identity on vertices")
        # homomorphism spot-check on all pairs for small groups
        pairs = (
            itertools.product(range(g.order), repeat=2)
            if g.order <= 60
            else zip(range(g.order), reversed(range(g.order)))
        )
        for h1, h2 in pairs:
            prod = g.mul(h1, h2)
            for v in range(0, x.n, max(1, x.n // 16)):
                if self.vertex_perms[prod][v] != self.vertex_perms[h1][self.vertex_perms[h2][v]]:
                    raise NotFree("vertex permutations are not a homomorphism")
        for h in range(g.order):
            vp, ep = self.vertex_perms[h], self.edge_perms[h]
            if h != ident:
                if any(vp[v] == v for v in range(x.n)):
                    raise NotFree("action has a vertex fixed point")
                if any(ep[e] == e for e in range(x.n_edges)):
                    raise NotFree("action has an edge fixed point")
            for e, (u, v) in enumerate(x.edges):
                iu, iv = vp[u], vp[v]
                image = (min(iu, iv), max(iu, iv))
                if x.edges[ep[e]] != image:
                    raise NotFree("edge permutation does not match vertex images")
                # label invariance at both endpoints
                if x.label_at(iu, ep[e]) != x.label_at(u, e):
                    raise QuotientConditionViolated("labels are not action-invariant")
                if x.label_at(iv, ep[e]) != x.label_at(v, e):
                    raise QuotientConditionViolated("labels are not action-invariant")
        for h in range(g.order):
            if h == ident:
                continue
            vp = self.vertex_perms[h]
            for u, v in self.graph.edges:
                if vp[u] == v or vp[v] == u:
                    raise QuotientConditionViolated(
                        f"edge {u}-{v} joins a vertex to its own orbit"
                    )

    def vertex_orbit(self, v: int) -> list[int]:
        return sorted({p[v] for p in self.vertex_perms})

    def edge_orbit(self, e: int) -> list[int]:
        return sorted({p[e] for p in self.edge_perms})


def cayley_right_action(
    graph: LabeledGraph, group: FiniteGroup, gens: list[int], sub: FiniteGroup
) -> GraphAction:
    """Right-multiplication action of a subgroup on a Cayley graph.

    The Cayley graph must have been built by cayley_graph(group, gens) so
    vertex v is the group element of index v.
    """
    edge_index = {e: i for i, e in enumerate(graph.edges)}
    vperms, eperms = [], []
    for h_elem in sub.elements:
        h = group.index[h_elem] if h_elem in group.index else None
        if h is None:
            raise NotFree("subgroup element missing from the ambient group")
        vp = [group.mul(v, h) for v in range(group.order)]
        ep = []
        for u, v in graph.edges:
            iu, iv = vp[u], vp[v]
            key = (min(iu, iv), max(iu, iv))
            ep.append(edge_index[key])
        vperms.append(vp)
        eperms.append(ep)
    return GraphAction(graph, sub, vperms, eperms)


def cycle_labeled_graph(ell: int) -> LabeledGraph:
    """The cycle on ell >= 3 vertices; edge (i, i+1) is labeled 1 at i and
    0 at i+1, which is invariant under rotation."""
    if ell < 3:
        raise NotSimpleGraph("simple cycle needs at least 3 vertices")
    edges, labels = [], []
    for i in range(ell):
        j = (i + 1) % ell
        u, v = min(i, j), max(i, j)
        lab_i, lab_j = 1, 0
        if u == i:
            labels.append((lab_i, lab_j))
        else:
            labels.append((lab_j, lab_i))
        edges.append((u, v))
    return LabeledGraph(ell, edges, labels, 2)


def cycle_rotation_action(graph: LabeledGraph, subgroup_order: int) -> GraphAction:
    """Z_m acting on the cycle C_ell by rotation through ell/m steps."""
    from .algebra import cyclic_group

    ell = graph.n
    if ell % subgroup_order:
        raise NotFree("subgroup order must divide the cycle length")
    step = ell // subgroup_order
    edge_index = {e: i for i, e in enumerate(graph.edges)}
    sub = cyclic_group(subgroup_order)
    vperms, eperms = [], []
    for k in range(subgroup_order):
        shift = k * step
        vp = [(v + shift) % ell for v in range(ell)]
        ep = []
        for u, v in graph.edges:
            iu, iv = vp[u], vp[v]
            ep.append(edge_index[(min(iu, iv), max(iu, iv))])
        vperms.append(vp)
        eperms.append(ep)
    return GraphAction(graph, sub, vperms, eperms)


@dataclass(frozen=True)
class Connection:
    """Group element attached to each oriented base edge of a quotient.

    values[e] is the element index h (in the acting group) such that the
    lift of base edge e starting at the source representative ends at
    (target representative) * h. Orientation follows the stored base edge
    (lower vertex index first); reversing the orientation inverts h.
    """

    base: LabeledGraph
    group: FiniteGroup
    values: tuple[int, ...]

    def value(self, e: int, reverse: bool = False) -> int:
        v = self.values[e]
        return self.group.inv(v) if reverse else v


@dataclass(frozen=True)
class QuotientData:
    base: LabeledGraph
    connection: Connection
    vertex_orbit_of: tuple[int, ...]  # vertex -> base vertex
    vertex_rep: tuple[int, ...]  # base vertex -> chosen representative
    vertex_shift: tuple[int, ...]  # vertex v = rep[orbit(v)] acted by group element shift[v]
    edge_orbit_of: tuple[int, ...]
    edge_rep: tuple[int, ...]  # base edge -> source-lift representative edge
    edge_shift: tuple[int, ...]  # edge e = edge_rep[orbit(e)] shifted by this element


def quotient_graph(action: GraphAction) -> QuotientData:
    """Quotient by a free action satisfying the quotient condition.

    Vertex representatives are the smallest orbit members. Each base edge
    is oriented (lower orbit index first) and its representative lift is
    the unique orbit member through the source representative; the
    connection value is the group element carrying the target
    representative to the lift's far endpoint.
    """
    x, h = action.graph, action.group
    _, orbit_of, rep, shift, _ = _orbit_tables(x.n, h, action.vertex_perms)
    e_orbits, e_orbit_of_old, _, _, e_members = _orbit_tables(
        x.n_edges, h, action.edge_perms
    )

    info = []  # per old edge-orbit id: (base pair, labels, connection, lift)
    seen_base = set()
    for eo in range(e_orbits):
        member = e_members[eo][0]
        u, v = x.edges[member]
        ou, ov = orbit_of[u], orbit_of[v]
        if ou == ov:
            raise QuotientConditionViolated("edge orbit collapses to a loop")
        src, dst = (ou, ov) if ou < ov else (ov, ou)
        if (src, dst) in seen_base:
            raise NotSimpleGraph("quotient has parallel edges; not representable")
        seen_base.add((src, dst))
        src_rep = rep[src]
        lift = None
        for e in e_members[eo]:
            a, b = x.edges[e]
            if a == src_rep or b == src_rep:
                lift = e
                break
        if lift is None:
            raise QuotientConditionViolated("no orbit member passes the source rep")
        a, b = x.edges[lift]
        far = b if a == src_rep else a
        info.append(
            ((src, dst), (x.label_at(src_rep, lift), x.label_at(far, lift)), shift[far], lift)
        )

    order = sorted(range(e_orbits), key=lambda eo: info[eo][0])
    renum = {old: new for new, old in enumerate(order)}
    base_edges = [info[old][0] for old in order]
    base_labels = [info[old][1] for old in order]
    conn_values = [info[old][2] for old in order]
    edge_rep = [info[old][3] for old in order]
    e_orbit_of = [renum[eo] for eo in e_orbit_of_old]

    base = LabeledGraph(len(rep), base_edges, base_labels, x.s)
    conn = Connection(base, h, tuple(conn_values))

    edge_shift = [-1] * x.n_edges
    for eo in range(e_orbits):
        lift = edge_rep[eo]
        for hidx in range(h.order):
            edge_shift[action.edge_perms[hidx][lift]] = hidx
    if min(edge_shift) < 0:
        raise NotFree("edge orbit table inconsistent")

    return QuotientData(
        base=base,
        connection=conn,
        vertex_orbit_of=tuple(orbit_of),
        vertex_rep=tuple(rep),
        vertex_shift=tuple(shift),
        edge_orbit_of=tuple(e_orbit_of),
        edge_rep=tuple(edge_rep),
        edge_shift=tuple(edge_shift),
    )


def _orbit_tables(
    n: int, h: FiniteGroup, perms
) -> tuple[int, list[int], list[int], list[int], list[list[int]]]:
    """Orbit decomposition of a free action given as permutations.

    Returns (count, orbit_of, representative, shift, members) where
    shift[w] is the group element index carrying the orbit representative
    to w (perms[shift[w]][rep] == w) and representatives are the minimal
    orbit members.
    """
    orbit_of = [-1] * n
    rep: list[int] = []
    shift = [-1] * n
    members_by_orbit: list[list[int]] = []
    for v in range(n):
        if orbit_of[v] >= 0:
            continue
        members = {perms[k][v]: k for k in range(h.order)}
        if len(members) != h.order:
            raise NotFree("orbit smaller than the group order")
        r = min(members)
        o = len(rep)
        rep.append(r)
        base_k = members[r]
        # w = perms[k][v] and r = perms[base_k][v], so w = perms[k * base_k^-1][r]
        for w, k in members.items():
            orbit_of[w] = o
            shift[w] = h.mul(k, h.inv(base_k))
        members_by_orbit.append(sorted(members))
    for r in rep:
        if shift[r] != h.identity:
            raise NotFree("representative shift normalization failed")
    return len(rep), orbit_of, rep, shift, members_by_orbit


def reconstruct_from_quotient(qd: QuotientData) -> LabeledGraph:
    """Rebuild the covering graph from (base, connection); vertices are
    (base vertex, group element) pairs ordered base-major."""
    base, conn = qd.base, qd.connection
    h = conn.group
    n = base.n * h.order

    def vid(bv: int, k: int) -> int:
        return bv * h.order + k

    edges, labels = [], []
    for e, (u, v) in enumerate(base.edges):
        lu, lv = base.labels[e]
        phi = conn.values[e]
        for k in range(h.order):
            a = vid(u, k)
            b = vid(v, h.mul(phi, k))
            lo, hi = (a, b) if a < b else (b, a)
            if a < b:
                labels.append((lu, lv))
            else:
                labels.append((lv, lu))
            edges.append((lo, hi))
    return LabeledGraph(n, edges, labels, base.s)


def graphs_isomorphic_by_map(a: LabeledGraph, b: LabeledGraph, vmap) -> bool:
    """Check that the explicit vertex map vmap carries a onto b with labels."""
    if a.n != b.n or a.n_edges != b.n_edges or a.s != b.s:
        return False
    b_edges = {}
    for e, (u, v) in enumerate(b.edges):
        b_edges[(u, v)] = e
    for e, (u, v) in enumerate(a.edges):
        iu, iv = vmap[u], vmap[v]
        key = (min(iu, iv), max(iu, iv))
        if key not in b_edges:
            return False
        eb = b_edges[key]
        if b.label_at(iu, eb) != a.label_at(u, e):
            return False
        if b.label_at(iv, eb) != a.label_at(v, e):
            return False
    return True


# -- quotient condition ----------------------------------------------------


@dataclass(frozen=True)
class QuotientConditionReport:
    holds: bool
    witness: tuple[int, int, int] | None  # (g, h, s) with g h g^-1 = s
    determinant_shortcut: bool | None  # None when not applicable


def check_quotient_condition(
    group: FiniteGroup, gens: list[int], sub: FiniteGroup
) -> QuotientConditionReport:
    """Exhaustively test that no conjugate of the subgroup meets the
    generator set; cross-checks the determinant-class argument when the
    elements are projective matrices."""
    gen_set = set(gens)
    sub_in_g = [group.index[e] for e in sub.elements]
    witness = None
    for g in range(group.order):
        for h in sub_in_g:
            if h == group.identity:
                continue
            c = group.conjugate(g, h)
            if c in gen_set:
                witness = (g, h, c)
                break
        if witness:
            break

    shortcut = None
    if witness is None and isinstance(group.elements[0], ProjMat2):
        q = group.elements[0].q
        # dets live in F_q^x / squares; conjugates of unipotents are in the
        # square class, so disjointness is forced when no generator is
        sub_classes = {legendre(group.elements[h].det(), q) for h in sub_in_g if h != group.identity}
        gen_classes = {legendre(group.elements[s].det(), q) for s in gens}
        shortcut = sub_classes.isdisjoint(gen_classes)

    return QuotientConditionReport(witness is None, witness, shortcut)


# -- coset graphs ----------------------------------------------------------


def find_rotation_pair(group: FiniteGroup, r: int, s: int) -> tuple[int, int]:
    """First pair (by index order) of elements with orders (r, s) whose
    product is an involution."""
    r_elems = [i for i in range(group.order) if group.element_order(i) == r]
    s_elems = [i for i in range(group.order) if group.element_order(i) == s]
    for a in r_elems:
        for b in s_elems:
            if group.element_order(group.mul(a, b)) == 2:
                return a, b
    raise IncidenceDegenerate(f"no ({r},{s},2) generator pair in {group.name}")


def coset_graph(group: FiniteGroup, rho: int, sigma: int) -> LabeledGraph:
    """Graph of a rotation system: vertices are left cosets of <sigma>,
    edges are left cosets of <rho*sigma> (an involution), incidence by
    intersection.

    Labels around each vertex follow the sigma-rotation orbit starting at
    the smallest coset member, so the labeling respects the rotational
    symmetry.
    """
    s_sub = group.subgroup_indices([sigma])
    edge_inv = group.mul(rho, sigma)
    if group.element_order(edge_inv) != 2:
        raise IncidenceDegenerate("rho*sigma is not an involution")
    e_sub = group.subgroup_indices([edge_inv])
    s_order = len(s_sub)

    vertex_of = {}
    vertices = []
    for g in range(group.order):
        coset = frozenset(group.mul(g, h) for h in s_sub)
        if coset not in vertex_of:
            vertex_of[coset] = len(vertices)
            vertices.append(coset)
    edge_of = {}
    edge_cosets = []
    for g in range(group.order):
        coset = frozenset(group.mul(g, h) for h in e_sub)
        if coset not in edge_of:
            edge_of[coset] = len(edge_cosets)
            edge_cosets.append(coset)

    n = len(vertices)
    edges_endpoints: list[set[int]] = [set() for _ in edge_cosets]
    for ei, coset in enumerate(edge_cosets):
        for g in coset:
            for vi, vcoset in enumerate(vertices):
                if g in vcoset:
                    edges_endpoints[ei].add(vi)
    for ends in edges_endpoints:
        if len(ends) != 2:
            raise IncidenceDegenerate("an edge coset does not meet exactly two vertex cosets")

    # labels: at vertex coset with representative ghat (minimal element),
    # edge ghat*sigma^k*<rho sigma> gets label k
    labels_at: list[dict[int, int]] = [dict() for _ in range(n)]
    for vi, vcoset in enumerate(vertices):
        ghat = min(vcoset)
        cur = ghat
        for k in range(s_order):
            ecoset = frozenset(group.mul(cur, h) for h in e_sub)
            ei = edge_of[ecoset]
            if ei in labels_at[vi]:
                raise IncidenceDegenerate("rotation orbit revisits an edge")
            labels_at[vi][ei] = k
            cur = group.mul(cur, sigma)

    edges, labels = [], []
    order = sorted(range(len(edge_cosets)), key=lambda ei: tuple(sorted(edges_endpoints[ei])))
    for ei in order:
        u, v = sorted(edges_endpoints[ei])
        edges.append((u, v))
        labels.append((labels_at[u][ei], labels_at[v][ei]))
    return LabeledGraph(n, edges, labels, s_order)


def klein_quartic_graph() -> tuple[LabeledGraph, FiniteGroup, int, int]:
    """The 7-regular graph on 24 vertices and 84 edges from the {3,7}
    rotation system inside PSL(2,7)."""
    from .algebra import build_psl2

    group = build_psl2(7)
    rho, sigma = find_rotation_pair(group, 3, 7)
    graph = coset_graph(group, rho, sigma)
    if (graph.n, graph.n_edges, graph.s) != (24, 84, 7):
        raise IncidenceDegenerate("unexpected Klein-quartic skeleton")
    return graph, group, rho, sigma


def complete_graph(n: int) -> LabeledGraph:
    """K_n with labels given by the cyclic difference j - i mod n (minus 1)."""
    edges, labels = [], []
    for i in range(n):
        for j in range(i + 1, n):
            edges.append((i, j))
            labels.append(((j - i) % n - 1, (i - j) % n - 1))
    return LabeledGraph(n, edges, labels, n - 1)
