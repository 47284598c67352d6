import numpy as np
import pytest

from bpcodes.algebra import GroupAlgebraElem, cyclic_group
from bpcodes.classical import repetition_code
from bpcodes.complexes import cycle_graph_complex, one_complex, tensor_complex
from bpcodes.errors import (
    ActionInvalid,
    EvenOrder,
    IncidenceMissing,
    NotAutomorphism,
    NotFreeOnBasis,
)
from bpcodes.f2la import F2Matrix, rank
from bpcodes.graphs import cycle_labeled_graph, cycle_rotation_action
from bpcodes.products import (
    ComplexWithAction,
    balanced_product,
    circle_balanced_product,
    cycle_complex_with_action,
    fiber_bundle_complex,
    homology_split,
    horizontal_homology_dim,
    identity_automorphism,
    lifted_product,
    pi_iota_is_identity,
    rotation_automorphism,
    aligned_total,
    tanner_group_algebra_matrix,
    triple_equivalence_holds,
    trivial_connection,
    verify_bundle_kunneth,
)
from bpcodes.tanner import build_tanner


@pytest.fixture(scope="module")
def toy():
    graph = cycle_labeled_graph(9)
    t = build_tanner(graph, repetition_code(2))
    action = cycle_rotation_action(graph, 3)
    return circle_balanced_product(t, action)


# -- fiber bundles -------------------------------------------------------------


def test_trivial_connection_is_tensor_product():
    b, f = cycle_graph_complex(3), cycle_graph_complex(4)
    fb = fiber_bundle_complex(b, f, trivial_connection(b, f))
    tens = tensor_complex(b, f)
    for i in (1, 2):
        assert fb.total.differential(i) == tens.differential(i)
    assert fb.total.homology_dim(1) == 2


def test_twisted_bundle_kunneth():
    b, f = cycle_graph_complex(2), cycle_graph_complex(5)
    conn = trivial_connection(b, f)
    conn[(0, 0)] = rotation_automorphism(5, 2)
    fb = fiber_bundle_complex(b, f, conn)
    rep = verify_bundle_kunneth(fb, 1)
    assert rep.hypothesis_ok and rep.total_dim == rep.sum_of_products == 2


def test_bundle_missing_incidence_rejected():
    b, f = cycle_graph_complex(3), cycle_graph_complex(3)
    conn = trivial_connection(b, f)
    conn.pop(next(iter(conn)))
    with pytest.raises(IncidenceMissing):
        fiber_bundle_complex(b, f, conn)


def test_bundle_non_automorphism_rejected():
    b, f = cycle_graph_complex(3), cycle_graph_complex(3)
    conn = trivial_connection(b, f)
    bad = F2Matrix.from_dense(np.triu(np.ones((3, 3), dtype=int)))
    from bpcodes.products import FiberAutomorphism

    conn[(0, 0)] = FiberAutomorphism(bad, bad)
    with pytest.raises(NotAutomorphism):
        fiber_bundle_complex(b, f, conn)


def test_bundle_projection_iso_with_full_rank_base():
    # base with independent checks: H_0(B) = 0
    rng = np.random.default_rng(4)
    while True:
        m = F2Matrix.from_dense(rng.integers(0, 2, (3, 5)))
        if rank(m) == 3:
            break
    base = one_complex(m)
    fiber = cycle_graph_complex(5)
    conn = trivial_connection(base, fiber)
    for key in list(conn)[:2]:
        conn[key] = rotation_automorphism(5, 3)
    fb = fiber_bundle_complex(base, fiber, conn)
    rep = verify_bundle_kunneth(fb, 1)
    assert rep.hypothesis_ok and rep.projection_iso is True


def test_bundle_hypothesis_failure_skips():
    # an automorphism moving degree-1 homology: swap two fiber edges of a
    # disconnected fiber (two 2-cycles), exchanging the cycles
    d = F2Matrix.from_dense([[1, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 1], [0, 0, 1, 1]])
    fiber = one_complex(d)
    swap = F2Matrix.from_entries(4, 4, [(0, 2), (1, 3), (2, 0), (3, 1)])
    from bpcodes.products import FiberAutomorphism

    aut = FiberAutomorphism(swap, swap)
    base = cycle_graph_complex(3)
    conn = trivial_connection(base, fiber)
    conn[(0, 0)] = aut
    fb = fiber_bundle_complex(base, fiber, conn)
    rep = verify_bundle_kunneth(fb, 1)
    assert not rep.hypothesis_ok


# -- balanced products ----------------------------------------------------------


def test_trivial_group_balanced_is_tensor():
    triv = cyclic_group(1)
    c = cycle_graph_complex(3)
    ca = ComplexWithAction(c, triv, {d: [list(range(3))] for d in (0, 1)}, free=False)
    bp = balanced_product(ca, ca)
    tens = tensor_complex(c, c)
    assert bp.total.dims == tens.dims
    for i in (1, 2):
        assert bp.total.differential(i) == tens.differential(i)


def test_balanced_cycle_dims_divide(toy):
    # cells carry dim C_p * dim D_q / |H|
    bp = toy.product
    assert bp.cell_dim(1, 1) == 9 * 3 // 3
    assert bp.cell_dim(1, 0) == 9
    assert bp.cell_dim(0, 1) == 9
    assert bp.total.dim(1) == 18


def test_coinvariants_from_trivial_right_factor():
    # W = F_2 with the trivial action: quotient dim = dim V / |H|
    ell = 3
    grp = cyclic_group(ell)
    v = one_complex(F2Matrix.zeros(3, 3))
    perms_v = {
        d: [[(j + k) % 3 for j in range(3)] for k in range(3)] for d in (0, 1)
    }
    va = ComplexWithAction(v, grp, perms_v)
    w = one_complex(F2Matrix.zeros(1, 1))
    perms_w = {d: [[0], [0], [0]] for d in (0, 1)}
    wa = ComplexWithAction(w, grp, perms_w, free=False)
    bp = balanced_product(va, wa)
    assert bp.cell_dim(1, 1) == 1 and bp.cell_dim(0, 0) == 1


def test_balanced_rejects_nonfree_left():
    grp = cyclic_group(2)
    c = one_complex(F2Matrix.zeros(2, 2))
    perms = {d: [[0, 1], [0, 1]] for d in (0, 1)}  # trivial, not free
    with pytest.raises(NotFreeOnBasis):
        ComplexWithAction(c, grp, perms, free=True)


def test_balanced_rejects_non_chain_action():
    grp = cyclic_group(2)
    d = F2Matrix.from_dense([[1, 0], [0, 0]])
    c = one_complex(d)
    perms = {d_: [[0, 1], [1, 0]] for d_ in (0, 1)}
    with pytest.raises(Exception):
        ComplexWithAction(c, grp, perms)


# -- lifted products -------------------------------------------------------------


def test_lifted_1x1_one_plus_g():
    e = GroupAlgebraElem(3, 0b011)
    lp = lifted_product([[e]], [[e]])
    assert {i: lp.total.dim(i) for i in lp.total.degrees()} == {0: 3, 1: 6, 2: 3}
    assert lp.total.homology_dim(1) == 2


def test_lifted_ell_1_is_plain_hypergraph_product():
    # ell = 1 collapses the group: plain hypergraph product of binary matrices
    one = GroupAlgebraElem(1, 1)
    zero = GroupAlgebraElem(1, 0)
    a = [[one, zero], [one, one]]
    lp = lifted_product(a, [[one]])
    assert {i: lp.total.dim(i) for i in lp.total.degrees()} == {0: 2, 1: 4, 2: 2}
    d1 = lp.total.differential(1).to_dense()
    assert d1[:, :2].tolist() == [[1, 0], [1, 1]]  # the A block survives verbatim


def test_circle_product_matches_lifted_tanner(toy):
    a = tanner_group_algebra_matrix(toy)
    b = [[GroupAlgebraElem(3, 0b11)]]
    lp = lifted_product(a, b)
    bal = aligned_total(toy, "balanced")
    for i in (1, 2):
        assert lp.total.differential(i) == bal.differential(i)


# -- circle specialization --------------------------------------------------------


def test_even_order_rejected():
    graph = cycle_labeled_graph(8)
    t = build_tanner(graph, repetition_code(2))
    action = cycle_rotation_action(graph, 2)
    with pytest.raises(EvenOrder):
        circle_balanced_product(t, action)


def test_action_graph_mismatch():
    g1 = cycle_labeled_graph(9)
    g2 = cycle_labeled_graph(9)
    t = build_tanner(g1, repetition_code(2))
    action = cycle_rotation_action(g2, 3)
    with pytest.raises(ActionInvalid):
        circle_balanced_product(t, action)


def test_triple_equivalence_toy(toy):
    assert triple_equivalence_holds(toy)


def test_homology_split_toy(toy):
    split = homology_split(toy)
    assert split.dim_h == 1 and split.dim_v == 1
    assert split.total_logical == toy.product.total.homology_dim(1) == 2
    assert pi_iota_is_identity(split)
    assert horizontal_homology_dim(toy) == toy.base_tanner.code_dimension() == 1


def test_split_projections_are_complementary(toy):
    split = homology_split(toy)
    # each homology basis element decomposes into h and v parts exactly
    for r in range(split.homology_reps.rows):
        z = split.homology_reps.row_int(r)
        h_coord = split.p_h.transpose().row_int(r)
        v_coord = split.p_v.transpose().row_int(r)
        rebuilt = 0
        for i in range(split.dim_h):
            if (h_coord >> i) & 1:
                rebuilt ^= split.h_reps.row_int(i)
        for i in range(split.dim_v):
            if (v_coord >> i) & 1:
                rebuilt ^= split.v_reps.row_int(i)
        # difference must be a boundary
        diff = z ^ rebuilt
        from bpcodes.f2la import IncrementalSpan

        span = IncrementalSpan(
            toy.product.total.boundary_space(1).basis.row_ints()
        )
        assert span.contains(diff)


def test_split_invariant_under_adding_boundaries(toy):
    # the fiber-sum projection formula ignores boundaries
    split = homology_split(toy)
    bounds = toy.product.total.boundary_space(1).basis
    rng = np.random.default_rng(0)
    z = split.homology_reps.row_int(0)
    base_img = split.fiber_sum.mul_vec_int(z)
    for _ in range(10):
        b = 0
        for i in range(bounds.rows):
            if rng.integers(0, 2):
                b ^= bounds.row_int(i)
        assert split.fiber_sum.mul_vec_int(z ^ b) == base_img


def test_cycle_complex_with_action():
    cwa = cycle_complex_with_action(5)
    assert cwa.complex.homology_dim(1) == 1
    assert cwa.group.order == 5
