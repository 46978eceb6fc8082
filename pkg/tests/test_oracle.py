from fractions import Fraction

import pytest

from cutfair import oracle
from cutfair.allocation import (
    bundle_values,
    check_alpha_ef1,
    check_ef,
    check_ef1,
    check_ts,
    check_wts,
    social_welfare,
)
from cutfair.instances import (
    SplitMix64,
    gen_appendix_a,
    gen_complete_bipartite,
    gen_cycle,
    gen_fig3,
    gen_path,
    gen_random_graph,
)
from cutfair.oracle import CapExceededError, OracleQuery
from cutfair.oracle._kernel import EF1, KERNEL_NAME, scan, scan_python


def query(*preds, **kwargs):
    return OracleQuery.of(set(preds), **kwargs)


def test_query_validation():
    with pytest.raises(ValueError, match="unknown predicates"):
        OracleQuery.of({"ef2"})
    q = query("ef1", "ts")
    assert q.predicates == frozenset({"ef1", "ts"})


def test_cap_enforced():
    g = gen_random_graph(12, 0.5, 1).graph
    with pytest.raises(CapExceededError):
        oracle.oracle_exists(g, 3, query("ef1", max_states=1000))
    with pytest.raises(CapExceededError):
        oracle.max_welfare(g, 3, max_states=1000)


def test_enumerate_allocations_counts():
    g = gen_path(3).graph
    assert sum(1 for _ in oracle.enumerate_allocations(g, 2)) == 8
    partial = list(oracle.enumerate_allocations(g, 2, complete_only=False))
    assert len(partial) == 27
    with pytest.raises(CapExceededError):
        list(oracle.enumerate_allocations(g, 5, max_states=10))


def test_oracle_against_checkers_brute_force():
    """The kernel's per-predicate bits must agree with the reference checkers
    on every complete allocation of a handful of small instances."""
    rng = SplitMix64(303)
    for trial in range(12):
        m = 3 + rng.below(4)
        n = 2 + trial % 2
        g = gen_random_graph(m, 0.5, rng.next_u64()).graph
        expected = {"ef": 0, "ef1": 0, "ts": 0, "wts": 0, "nonempty": 0}
        for a in oracle.enumerate_allocations(g, n):
            expected["ef"] += bool(check_ef(a, g).holds)
            expected["ef1"] += bool(check_ef1(a, g).holds)
            expected["ts"] += bool(check_ts(a, g).holds)
            expected["wts"] += bool(check_wts(a, g).holds)
            expected["nonempty"] += a.all_nonempty()
        for name, count in expected.items():
            assert oracle.oracle_count(g, n, query(name)) == count


def test_alpha_ef1_counts_match_checker():
    g = gen_random_graph(5, 0.6, 5).graph
    for alpha in (Fraction(1), Fraction(1, 2), Fraction(2, 3)):
        expected = sum(
            bool(check_alpha_ef1(a, g, alpha).holds)
            for a in oracle.enumerate_allocations(g, 2)
        )
        assert oracle.oracle_count(g, 2, query("alpha_ef1", alpha=alpha)) == expected


def test_witness_satisfies_query_and_is_first():
    g = gen_cycle(6).graph
    w = oracle.oracle_exists(g, 3, query("ef1", "wts", "nonempty"))
    assert w is not None
    assert check_ef1(w, g).holds and check_wts(w, g).holds and w.all_nonempty()
    # first in enumeration order: no earlier allocation qualifies
    for a in oracle.enumerate_allocations(g, 3):
        if a.bundles == w.bundles:
            break
        assert not (check_ef1(a, g).holds and check_wts(a, g).holds and a.all_nonempty())


def test_two_hub_instance_verdicts():
    g = gen_fig3(3).graph
    assert oracle.oracle_exists(g, 3, query("ef1", "ts")) is None
    w = oracle.oracle_exists(g, 3, query("ef1", "wts"))
    assert w is not None
    assert check_wts(w, g).holds


def test_pareto_and_so_queries():
    g = gen_cycle(6).graph
    w = oracle.oracle_exists(g, 3, query("ef1", "so"))
    assert w is not None
    assert social_welfare(w, g) == oracle.max_welfare(g, 3)
    po = oracle.oracle_exists(g, 3, query("ef1", "po"))
    assert po is not None
    assert oracle.oracle_pareto(po, g, 3)
    # welfare-maximal implies Pareto-undominated
    assert oracle.oracle_pareto(w, g, 3)


def test_pareto_rejects_dominated():
    g = gen_path(4).graph
    dominated = oracle.Allocation.of([{0, 1}, {2, 3}])
    assert not oracle.oracle_pareto(dominated, g, 2)
    with pytest.raises(ValueError, match="complete"):
        oracle.oracle_pareto(oracle.Allocation.of([{0}, {1}]), g, 2)


def test_find_all_matches_count_and_filters():
    g = gen_path(4).graph
    for preds in ({"ef1"}, {"ef1", "ts"}, {"ef1", "so"}):
        q = query(*preds)
        found = oracle.oracle_find_all(g, 2, q)
        assert len(found) == oracle.oracle_count(g, 2, q)
        for a in found:
            assert check_ef1(a, g).holds


def test_leximin_maximizes_sorted_vector():
    g = gen_cycle(6).graph
    best = oracle.oracle_leximin(g, 3)
    target = tuple(sorted(bundle_values(best, g)))
    for a in oracle.enumerate_allocations(g, 3):
        assert tuple(sorted(bundle_values(a, g))) <= target
    assert oracle.oracle_pareto(best, g, 3)


def test_max_cut_exact_on_known_graphs():
    for a, b in ((1, 3), (2, 3), (3, 4)):
        g = gen_complete_bipartite(a, b).graph
        _, best = oracle.oracle_max_cut(g)
        assert best == g.num_edges
    g = gen_cycle(5).graph
    alloc, best = oracle.oracle_max_cut(g)
    assert best == 4
    assert social_welfare(alloc, g) == 8


def test_completability():
    inst = gen_appendix_a()
    assert not oracle.oracle_completable_ef1(inst.partial, inst.graph, 4)
    g = gen_path(4).graph
    partial = oracle.Allocation.of([{0}, {3}])
    assert oracle.oracle_completable_ef1(partial, g, 2)
    not_ef1 = oracle.Allocation.of([set(), {1, 3}])
    with pytest.raises(ValueError, match="must itself be EF1"):
        oracle.oracle_completable_ef1(not_ef1, g, 2)


def test_symmetry_prunes_but_preserves_existence():
    g = gen_fig3(3).graph
    assert oracle.oracle_exists(g, 3, query("ef1", "ts", symmetry=True)) is None
    full = oracle.oracle_count(g, 3, query("ef1"))
    pinned = oracle.oracle_count(g, 3, query("ef1", symmetry=True))
    assert 0 < pinned < full


def test_threads_agree_with_serial():
    g = gen_fig3(3).graph
    q1 = query("ef1", "wts")
    q2 = query("ef1", "wts", threads=2)
    assert oracle.oracle_count(g, 3, q1) == oracle.oracle_count(g, 3, q2)
    w1 = oracle.oracle_exists(g, 3, q1)
    w2 = oracle.oracle_exists(g, 3, q2)
    assert w1.bundles == w2.bundles


def test_kernel_parity_compiled_vs_python():
    """Both kernels must return identical result dictionaries."""
    rng = SplitMix64(404)
    for trial in range(10):
        m = 3 + rng.below(4)
        n = 2 + trial % 2
        g = gen_random_graph(m, 0.5, rng.next_u64()).graph
        fixed = [-1] * m
        if trial % 3 == 0:
            fixed[0] = 0
        args = oracle._scan_args(
            g, n, fixed, EF1 | 1, Fraction(1), False, True, 0, n ** sum(f < 0 for f in fixed)
        )
        got = scan(*args)
        ref = scan_python(*args)
        assert got == ref


def test_kernel_name_is_reported():
    assert KERNEL_NAME in ("compiled", "python")
