"""Reduction rules: the cheap heuristics, SPT, TDT, and the full schedule."""
import random

from steinerkit import Instance, WorkingGraph, preprocessing
from steinerkit.reductions import (BridgeForest, ReductionReport,
                                   contract_cheapest_terminal_edge,
                                   contract_terminal_pendant,
                                   contract_zero_edges, quick_heuristics,
                                   remove_degree_low_steiner, spt_full,
                                   spt_two_edges, tdt)
from tests.gen import random_instance
from tests.instances import gadget, tdt_cycle, working
from tests.oracles import check_invariants, exact_steiner


def test_zero_edges_contracted_and_bought():
    inst = Instance(3, ((0, 1, 0), (1, 2, 4)), frozenset({0, 2}))
    g = working(inst)
    assert contract_zero_edges(g) == 1
    assert g.bought == {0}
    assert sorted(g.vertices()) == [0, 2]
    check_invariants(g, inst)


def test_low_degree_steiner_removed():
    # 3 dangles off the t0-1-t2 path; 1 is suppressed afterwards
    inst = Instance(4, ((0, 1, 1), (1, 2, 2), (1, 3, 5)), frozenset({0, 2}))
    g = working(inst)
    assert remove_degree_low_steiner(g) == 2
    assert sorted(g.vertices()) == [0, 2]
    e = g.edges[g.edge_between(0, 2)]
    assert e.weight == 3 and sorted(e.prov) == [0, 1]
    check_invariants(g, inst)


def test_pendant_terminal_contracted():
    inst = Instance(3, ((0, 1, 2), (1, 2, 3)), frozenset({0, 2}))
    g = working(inst)
    assert contract_terminal_pendant(g) == 2
    assert g.bought == {0, 1}
    assert len(g.terminals) == 1
    check_invariants(g, inst)


def test_pendant_rule_needs_two_terminals():
    inst = Instance(2, ((0, 1, 2),), frozenset({0}))
    g = working(inst)
    assert contract_terminal_pendant(g) == 0
    assert g.bought == set()


def test_cheapest_terminal_edge_needs_strict_minimum():
    inst = Instance(3, ((0, 1, 1), (0, 2, 3), (1, 2, 3)), frozenset({0, 1}))
    g = working(inst)
    assert contract_cheapest_terminal_edge(g) == 1
    assert g.bought == {0}
    # a tie with another incident edge blocks the rule
    tie = Instance(3, ((0, 1, 2), (0, 2, 2), (1, 2, 3)), frozenset({0, 1}))
    h = working(tie)
    assert contract_cheapest_terminal_edge(h) == 0
    assert h.bought == set()


def test_quick_heuristics_reach_fixpoint():
    # t0 - s1 - s2 - t3 chain collapses to one bought path
    inst = Instance(4, ((0, 1, 1), (1, 2, 1), (2, 3, 1)), frozenset({0, 3}))
    g = working(inst)
    assert quick_heuristics(g) > 0
    assert len(g.terminals) == 1
    assert g.bought == {0, 1, 2}
    check_invariants(g, inst)


def test_spt_two_edges_deletes_dominated_edge():
    inst = Instance(3, ((0, 1, 8), (0, 2, 3), (1, 2, 4)), frozenset({0, 1}))
    g = working(inst)
    assert spt_two_edges(g) == 1
    assert g.edge_between(0, 1) is None
    # an equally long detour is not strictly better, nothing fires
    eq = Instance(3, ((0, 1, 7), (0, 2, 3), (1, 2, 4)), frozenset({0, 1}))
    h = working(eq)
    assert spt_two_edges(h) == 0


def test_spt_full_uses_longer_detours():
    inst = Instance(4, ((0, 1, 1), (0, 3, 5), (1, 2, 1), (2, 3, 1)),
                    frozenset({0, 3}))
    assert spt_two_edges(working(inst)) == 0  # detour needs three edges
    g = working(inst)
    assert spt_full(g) == 1
    assert g.edge_between(0, 3) is None
    check_invariants(g, inst)


def test_bridge_forest_reports_cycle_bridges():
    bf = BridgeForest(range(5))
    assert bf.add_edge(0, 0, 1) is None
    assert bf.add_edge(1, 1, 2) is None
    assert bf.add_edge(2, 0, 2) == [0, 1]
    assert bf.add_edge(3, 0, 2) == []
    assert bf.add_edge(4, 3, 4) is None
    assert bf.add_edge(5, 2, 3) is None
    assert bf.add_edge(6, 0, 4) == [4, 5]
    assert bf.add_edge(7, 1, 3) == []


def test_tdt_buys_cycle_edges_within_budget():
    inst = tdt_cycle()
    g = working(inst)
    assert tdt(g) > 0
    # both unit edges pass their test against the weight-3 alternative
    assert g.bought == {0, 2}
    assert len(g.terminals) == 1
    check_invariants(g, inst)


def test_tdt_budget_is_non_strict():
    # heavy edges weigh exactly the test value 2
    inst = Instance(4, ((0, 2, 1), (0, 3, 2), (1, 2, 1), (1, 3, 2)),
                    frozenset({0, 1}))
    g = working(inst)
    assert tdt(g) > 0
    assert g.bought >= {0, 2}


def test_tdt_ignores_trees():
    inst = Instance(4, ((0, 1, 2), (1, 2, 3), (2, 3, 4)), frozenset({0, 3}))
    g = working(inst)
    assert tdt(g) == 0
    assert g.bought == set()


def test_preprocessing_solves_hub_gadget():
    # every terminal is pendant, so the cheap rules eat the whole gadget
    inst = gadget()
    g = working(inst)
    report = preprocessing(g)
    assert len(g.terminals) == 1
    assert g.bought_weight(inst) == 5
    assert report.rounds == 7
    assert report.applications["terminal_pendant"] > 0


def test_preprocessing_identity_on_irreducible_instance():
    # 4-cycle of equal weights with all vertices terminals: nothing fires
    inst = Instance(4, ((0, 1, 5), (0, 2, 5), (1, 3, 5), (2, 3, 5)),
                    frozenset({0, 1, 2, 3}))
    g = working(inst)
    report = preprocessing(g)
    assert report.total_applications() == 0
    assert len(g.edges) == 4 and g.bought == set()


def test_report_csv_rows():
    inst = gadget()
    g = working(inst)
    report = preprocessing(g)
    rows = report.csv_rows()
    assert rows[0] == "rule,applications,edges_bought"
    assert all(len(r.split(",")) == 3 for r in rows[1:])


def test_preprocessing_preserves_optimum_exactly():
    rng = random.Random(11)
    for _ in range(150):
        inst = random_instance(rng, max_n=10, max_t=4)
        g = working(inst)
        preprocessing(g)
        check_invariants(g, inst)
        reduced, _remap = g.to_instance()
        assert exact_steiner(inst) == g.bought_weight(inst) + exact_steiner(reduced)
