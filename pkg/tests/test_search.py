import dataclasses
import itertools
from fractions import Fraction

import pytest

from quadstrata.core import StratumSignature
from quadstrata.search import (
    BudgetExceeded,
    IncidenceGraph,
    OutOfScope,
    PropertyViolated,
    check_half_integer_lengths,
    check_sum_bound,
    enumerate_normal_forms,
    first_witness,
    search_report,
    sorted_root_tuples,
    sweep_strata,
    unicyclic_graphs,
)
from quadstrata.surface import verify


def sig(orders):
    return StratumSignature.from_orders(0, orders)


THREE = sig([1, 1, -2, -2, -2])


def _connected(n, edges):
    seen, stack = {0}, [0]
    while stack:
        u = stack.pop()
        for a, b in edges:
            for x, y in ((a, b), (b, a)):
                if x == u and y not in seen:
                    seen.add(y)
                    stack.append(y)
    return len(seen) == n


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_unicyclic_graphs_are_all_connected_n_edge_multigraphs(n):
    pairs = list(itertools.combinations_with_replacement(range(n), 2))
    brute = {multi for multi in itertools.combinations_with_replacement(pairs, n) if _connected(n, multi)}
    assert set(unicyclic_graphs(n)) == brute
    assert len(unicyclic_graphs(n)) == len(brute)


def test_search_finds_a_fold_for_unbalanced_roots():
    w = first_witness(THREE, [1, 2, 4])
    assert w is not None
    inv = verify(w.surface)
    assert inv.zero_orders == (1, 1) and inv.primitive
    assert sorted(inv.residue_map.values(), key=lambda z: z.re) == [1, 4, 16]


def test_triangular_roots_have_no_normal_form():
    assert first_witness(THREE, [1, 1, 2]) is None
    assert first_witness(THREE, [1, 2, 3]) is None


def test_two_equal_roots_have_no_normal_form_with_a_simple_pole():
    assert first_witness(sig([1, -1, -2, -2]), [1, 1]) is None
    assert first_witness(sig([1, -1, -2, -2]), [1, 3]) is not None


def test_every_witness_in_a_five_pole_stratum_has_the_predicted_length_parity():
    s = sig([3, 3, -2, -2, -2, -2, -2])
    roots = [1, 2, 3, 4, 6]
    witnesses = list(enumerate_normal_forms(s, roots, budget=5))
    assert witnesses
    for w in witnesses:
        assert check_half_integer_lengths(w)["sum_parity"] == "even"
        check_sum_bound(w)


def test_odd_root_sum_puts_half_integers_on_the_cycle():
    w = first_witness(THREE, [1, 2, 4])
    info = check_half_integer_lengths(w)
    assert info["sum_parity"] == "odd"
    for e in info["cycle_edges"]:
        assert w.lengths[e].denominator == 2


def test_a_forged_length_is_reported():
    w = first_witness(THREE, [1, 2, 4])
    forged = dataclasses.replace(w, lengths=(w.lengths[0] + Fraction(1, 2),) + w.lengths[1:])
    with pytest.raises(PropertyViolated):
        check_half_integer_lengths(forged)


def test_budget_is_enforced():
    with pytest.raises(BudgetExceeded):
        first_witness(sig([3, 3, -2, -2, -2, -2, -2]), [1, 1, 1, 1, 1], budget=4)


@pytest.mark.parametrize("s,roots", [
    (StratumSignature.from_orders(1, [4, -2, -2]), [1, 2]),
    (sig([5, -3, -2, -2]), [1, 2]),
    (sig([2, 2, -2, -2, -2, -2]), [1, 1, 1, 1]),
    (THREE, [1, 2]),
    (THREE, [1, -2, 4]),
])
def test_out_of_scope_inputs(s, roots):
    with pytest.raises(OutOfScope):
        first_witness(s, roots)


def test_report_counts_and_serializes():
    report, first = search_report(THREE, [1, 2, 4], budget=3)
    assert report["witness_count"] >= 1
    assert report["property_checks"]["half_integer_lengths"]["violations"] == 0
    assert report["first_witness"]["roots"] == [1, 2, 4]
    assert IncidenceGraph.from_json(first.graph.to_json()) == first.graph


def test_sweep_lists_two_odd_zero_strata():
    strata = sweep_strata(3)
    assert sig([-1, -1, -2]) in strata
    assert sig([1, -1, -2, -2]) in strata
    assert sig([3, -1, -2, -2, -2]) in strata
    assert all(st.genus == 0 and st.n_odd_zeros == 2 for st in strata)


def test_sorted_root_tuples_are_nondecreasing_and_bounded():
    tuples = list(sorted_root_tuples(3, 6))
    assert (1, 1, 1) in tuples and (2, 2, 2) in tuples and (1, 1, 4) in tuples
    assert all(list(t) == sorted(t) and sum(t) <= 6 for t in tuples)
