import math

import numpy as np
import pytest

from bpcodes.algebra import FiniteGroup, build_pgl2, cyclic_group, unipotent_subgroup
from bpcodes.errors import (
    Disconnected,
    DomainError,
    NotSimpleGraph,
    NotSymmetric,
    QuotientConditionViolated,
    SelfLoop,
)
from bpcodes.graphs import (
    GraphAction,
    brute_force_expansion_check,
    cayley_graph,
    cayley_right_action,
    check_quotient_condition,
    cheeger_lower_bound,
    complete_graph,
    coset_graph,
    cycle_labeled_graph,
    cycle_rotation_action,
    edge_to_vertex_beta,
    find_rotation_pair,
    graphs_isomorphic_by_map,
    klein_quartic_graph,
    alon_chung_edge_fraction,
    lps_generators,
    lps_graph,
    lps_quadruples,
    quotient_graph,
    reconstruct_from_quotient,
    second_eigenvalue,
    solve_x2_y2_plus_one,
    strong_neighbor_beta,
    LabeledGraph,
)


def petersen() -> LabeledGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    edges = []
    for u, v in outer + spokes + inner:
        edges.append((min(u, v), max(u, v)))
    # greedy labeling: next free label at each endpoint
    used = [set() for _ in range(10)]
    labels = []
    for u, v in edges:
        lu = min(set(range(3)) - used[u])
        lv = min(set(range(3)) - used[v])
        used[u].add(lu)
        used[v].add(lv)
        labels.append((lu, lv))
    return LabeledGraph(10, edges, labels, 3)


# -- LPS ingredients ---------------------------------------------------------


def test_s5_quadruples():
    assert lps_quadruples(5) == sorted(
        [(1, -2, 0, 0), (1, 2, 0, 0), (1, 0, -2, 0), (1, 0, 2, 0), (1, 0, 0, -2), (1, 0, 0, 2)]
    )


@pytest.mark.parametrize("p", [5, 13, 17, 29])
def test_quadruple_counts(p):
    assert len(lps_quadruples(p)) == p + 1


def test_x2_y2_solution():
    x, y = solve_x2_y2_plus_one(13)
    assert (x * x + y * y + 1) % 13 == 0
    assert (5 * 5 + 0 * 0 + 1) % 13 == 0  # (5,0) is also a solution


@pytest.mark.parametrize("p,q", [(5, 13), (13, 17)])
def test_lps_generator_sets(p, q):
    gens = lps_generators(p, q)
    assert len(gens) == p + 1
    assert {m.inv() for m in gens} == set(gens)
    # no involutions for p = 1 mod 4 (labeling convention relies on it)
    assert all(m.inv() != m for m in gens)


def test_lps_graph_shape():
    graph, group, gens = lps_graph(5, 13)
    assert graph.n == 2184 and graph.s == 6
    assert graph.n_edges == 2184 * 6 // 2
    assert graph.is_connected()


def test_cayley_cycle():
    z9 = cyclic_group(9)
    g = cayley_graph(z9, [1, 8])
    assert (g.n, g.n_edges, g.s) == (9, 9, 2)
    assert g.is_connected()


def test_cayley_vertex_transitive():
    # left multiplication permutes edges (Cayley property) on a small group
    z7 = cyclic_group(7)
    g = cayley_graph(z7, [2, 5])
    edge_set = set(g.edges)
    for shift in range(7):
        for u, v in g.edges:
            iu, iv = (u + shift) % 7, (v + shift) % 7
            assert (min(iu, iv), max(iu, iv)) in edge_set


def test_cayley_rejects_asymmetric_and_involutions():
    z9 = cyclic_group(9)
    with pytest.raises(NotSymmetric):
        cayley_graph(z9, [1])
    z6 = cyclic_group(6)
    with pytest.raises(NotSymmetric):
        cayley_graph(z6, [3, 1, 5])  # 3 is an involution
    with pytest.raises(SelfLoop):
        cayley_graph(z9, [0, 1, 8])


# -- spectra ------------------------------------------------------------------


def test_second_eigenvalue_complete_graph():
    assert abs(second_eigenvalue(complete_graph(6)) + 1) < 1e-9


@pytest.mark.parametrize("ell", [5, 7, 12])
def test_second_eigenvalue_cycle_closed_form(ell):
    lam2 = second_eigenvalue(cycle_labeled_graph(ell))
    assert abs(lam2 - 2 * math.cos(2 * math.pi / ell)) < 1e-9


def test_disconnected_detected():
    # two disjoint triangles
    edges = [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]
    labels = [(0, 0), (1, 1), (1, 0), (0, 0), (1, 1), (1, 0)]
    g = LabeledGraph(6, edges, labels, 2)
    with pytest.raises(Disconnected):
        second_eigenvalue(g)


def test_lps_ramanujan_small():
    graph, _, _ = lps_graph(5, 13)
    assert second_eigenvalue(graph) < 2 * math.sqrt(5)


def test_lps_ramanujan_13_17():
    # legendre(13,17) = +1, so the graph sits on the projective special group
    graph, group, _ = lps_graph(13, 17)
    assert group.name.startswith("PSL") and graph.n == 17 * (17 * 17 - 1) // 2
    assert graph.s == 14
    assert second_eigenvalue(graph) < 2 * math.sqrt(13)


# -- expansion bounds ---------------------------------------------------------


def test_formula_special_cases():
    assert cheeger_lower_bound(5, 2, 0) == 3  # alpha=0 gives s - lambda2
    assert alon_chung_edge_fraction(5, 2, 1.0) == 1.0  # whole graph
    # b = s, alpha = 0 reduces to (s - lambda2)/s
    assert strong_neighbor_beta(5, 2, 0, 5) == pytest.approx(3 / 5)


def test_formula_domains():
    with pytest.raises(DomainError):
        edge_to_vertex_beta(3, 1, 0)
    with pytest.raises(DomainError):
        strong_neighbor_beta(3, 1, 0.1, 0)


def test_brute_force_cheeger_complete_graph():
    rep = brute_force_expansion_check(complete_graph(5), "cheeger", max_subset=5)
    assert rep.holds
    assert rep.subsets_checked == 31  # all nonempty subsets of 5 vertices


def test_brute_force_edge_vertex_petersen():
    rep = brute_force_expansion_check(petersen(), "edge_vertex", max_subset=4, alpha=4 / 15)
    assert rep.holds


def test_brute_force_strong_neighbor_cycle():
    rep = brute_force_expansion_check(
        cycle_labeled_graph(5), "strong_neighbor", max_subset=2, alpha=0.4, b=2
    )
    assert rep.holds


def test_brute_force_alon_chung_complete():
    rep = brute_force_expansion_check(complete_graph(5), "alon_chung", max_subset=5)
    assert rep.holds
    assert rep.tightest_ratio >= 1.0


# -- actions and quotients ----------------------------------------------------


def test_cycle_rotation_quotient():
    c9 = cycle_labeled_graph(9)
    act = cycle_rotation_action(c9, 3)
    qd = quotient_graph(act)
    assert (qd.base.n, qd.base.n_edges, qd.base.s) == (3, 3, 2)
    # connection is trivial except on one edge
    nontrivial = [v for v in qd.connection.values if v != qd.connection.group.identity]
    assert len(nontrivial) == 1


def test_quotient_reconstruction_isomorphic():
    c9 = cycle_labeled_graph(9)
    act = cycle_rotation_action(c9, 3)
    qd = quotient_graph(act)
    rec = reconstruct_from_quotient(qd)
    inv_map = {}
    for v in range(9):
        inv_map[qd.vertex_orbit_of[v] * 3 + qd.vertex_shift[v]] = v
    vmap = [inv_map[i] for i in range(9)]
    assert graphs_isomorphic_by_map(rec, c9, vmap)


def test_lps_quotient_shape():
    graph, group, gens = lps_graph(5, 13)
    sub = unipotent_subgroup(group)
    act = cayley_right_action(graph, group, gens, sub)
    qd = quotient_graph(act)
    assert (qd.base.n, qd.base.n_edges, qd.base.s) == (168, 504, 6)
    rec = reconstruct_from_quotient(qd)
    inv_map = {}
    for v in range(graph.n):
        inv_map[qd.vertex_orbit_of[v] * 13 + qd.vertex_shift[v]] = v
    vmap = [inv_map[i] for i in range(graph.n)]
    assert graphs_isomorphic_by_map(rec, graph, vmap)


def test_parallel_quotient_rejected():
    c6 = cycle_labeled_graph(6)
    act = cycle_rotation_action(c6, 3)
    with pytest.raises(NotSimpleGraph):
        quotient_graph(act)


def test_rotation_action_requires_divisor():
    from bpcodes.errors import NotFree

    with pytest.raises(NotFree):
        cycle_rotation_action(cycle_labeled_graph(9), 4)


# -- quotient condition -------------------------------------------------------


def test_quotient_condition_trivial_subgroup():
    z6 = cyclic_group(6)
    triv = FiniteGroup([0], lambda a, b: 0)
    assert check_quotient_condition(z6, [1, 5], triv).holds


def test_quotient_condition_violated_with_witness():
    # Z_9 with generators {3, 6} and the subgroup {0,3,6}: the generator 3
    # lies in the subgroup itself
    z9 = cyclic_group(9)
    sub = FiniteGroup([0, 3, 6], lambda a, b: (a + b) % 9)
    rep = check_quotient_condition(z9, [3, 6], sub)
    assert not rep.holds
    g, h, s = rep.witness
    assert (g + h - g) % 9 == s  # the conjugate relation in additive form


def test_quotient_condition_lps():
    graph, group, gens = lps_graph(5, 13)
    sub = unipotent_subgroup(group)
    rep = check_quotient_condition(group, gens, sub)
    assert rep.holds and rep.determinant_shortcut is True


# -- coset graphs -------------------------------------------------------------


def test_rotation_pair_exists():
    from bpcodes.algebra import build_psl2

    g = build_psl2(7)
    rho, sigma = find_rotation_pair(g, 3, 7)
    assert g.element_order(rho) == 3
    assert g.element_order(sigma) == 7
    assert g.element_order(g.mul(rho, sigma)) == 2


def test_klein_quartic_graph_shape():
    graph, group, rho, sigma = klein_quartic_graph()
    assert (graph.n, graph.n_edges, graph.s) == (24, 84, 7)
    assert graph.is_connected()
    # known spectrum: {7, sqrt(7)^8, -1^7, -sqrt(7)^8}
    lam2 = second_eigenvalue(graph)
    assert abs(lam2 - math.sqrt(7)) < 1e-9


def test_coset_graph_degenerate_rejected():
    from bpcodes.errors import IncidenceDegenerate

    z5 = cyclic_group(5)
    with pytest.raises(IncidenceDegenerate):
        find_rotation_pair(z5, 3, 7)


# -- edge list io -------------------------------------------------------------


def test_edge_list_roundtrip(tmp_path):
    g = cycle_labeled_graph(7)
    path = tmp_path / "g.edges"
    g.save_edge_list(path)
    g2 = LabeledGraph.load_edge_list(path)
    assert g2.edges == g.edges and g2.labels == g.labels and g2.s == g.s
