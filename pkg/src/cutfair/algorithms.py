"""Polynomial-time allocation procedures with deterministic tie-breaking.

Every solver is a deterministic state machine: all "choose an item/agent"
points resolve to the least-index qualifying candidate, bundles are kept in
non-decreasing value order by stable relabeling, and each loop carries a hard
iteration budget sized from the proven complexity bound.  Blowing a budget or
hitting a structurally impossible state raises an error (it means the
implementation is wrong), never a silent best-effort return.

Isolated vertices have zero marginal value everywhere, so they are stripped
before solving and re-appended round-robin afterwards (empty bundles first);
this changes no bundle's cut-value and preserves every checker verdict.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .allocation import Allocation, Potential, potential_from_values
from .graph import Graph, RootedForest
from .valuation import BundleStats


class BudgetExceededError(RuntimeError):
    """An iteration budget was blown; signals an implementation bug."""


class SolverInvariantError(RuntimeError):
    """A state the convergence proofs rule out was reached; signals a bug."""


class GoalInfeasibleError(ValueError):
    """The requested guarantee is not available for this instance class."""


class SolveGoal(enum.Enum):
    EF_TS_2 = "ef-ts-2"
    EF1_TS = "ef1-ts"
    EF1_WTS = "ef1-wts"
    EF1_SO_FOREST = "ef1-so-forest"
    EQUITABLE = "equitable"


@dataclass
class SolveTrace:
    iterations: int = 0
    case_history: list[str] = field(default_factory=list)
    potential_history: list[Potential] = field(default_factory=list)
    welfare_history: list[int] = field(default_factory=list)
    guarantee: str = ""
    snapshots: list = field(default_factory=list)

    def case_counts(self) -> dict[str, int]:
        return dict(Counter(self.case_history))


# ---------------------------------------------------------------------------
# shared machinery


def _split_isolated(g: Graph):
    keep = [v for v in range(g.num_vertices) if g.degree(v) > 0]
    iso = [v for v in range(g.num_vertices) if g.degree(v) == 0]
    remap = {v: i for i, v in enumerate(keep)}
    core = Graph.from_edges(len(keep), [(remap[u], remap[v]) for u, v in g.edges])
    return core, keep, iso


def _reattach(bundles, keep, iso, n):
    out = [set(keep[o] for o in b) for b in bundles]
    slots = sorted(range(n), key=lambda i: (len(out[i]), i))
    for t, v in enumerate(iso):
        out[slots[t % n]].add(v)
    return out


def _members(stats: BundleStats, b: int) -> list[int]:
    return [o for o, x in enumerate(stats.assignment) if x == b]


def _relabel(stats: BundleStats, order: list[int]) -> None:
    order.sort(key=lambda b: stats.bundle_value[b])


def _record(stats: BundleStats, order: list[int], trace: SolveTrace) -> None:
    values = [stats.bundle_value[b] for b in order]
    trace.potential_history.append(potential_from_values(values))
    trace.welfare_history.append(sum(values))


def _allocation(stats: BundleStats, order: list[int]) -> Allocation:
    return Allocation.of([set(_members(stats, b)) for b in order])


def _drop_value(stats: BundleStats, b: int) -> int:
    """min over o in A_b of v(A_b - o); 0 for an empty bundle."""
    best = stats.min_removal_value(b)
    return 0 if best is None else best[1]


def _violator_positions(stats: BundleStats, order: list[int]) -> list[int]:
    """Positions of bundles the minimum bundle has an unremovable envy toward."""
    v1 = stats.bundle_value[order[0]]
    return [
        pos
        for pos in range(1, len(order))
        if stats.bundle_value[order[pos]] > v1 and _drop_value(stats, order[pos]) > v1
    ]


def _first_receiver(stats, order, o, exclude) -> Optional[int]:
    for b in order:
        if b not in exclude and stats.marginal_add(b, o) > 0:
            return b
    return None


def _find_weak_chore(stats: BundleStats, order: list[int]):
    """Least (position, item) whose removal does not hurt its bundle.

    Degree-0 items are skipped: they are weak chores everywhere, no transfer
    involving them changes any value, and they cannot violate stability.
    """
    for pos, b in enumerate(order):
        for o in _members(stats, b):
            if stats.graph.degree(o) > 0 and stats.marginal_remove(b, o) >= 0:
                return pos, b, o
    return None


def _find_strict_chore(stats: BundleStats, order: list[int]):
    for pos, b in enumerate(order):
        for o in _members(stats, b):
            if stats.marginal_remove(b, o) > 0:
                return pos, b, o
    return None


# ---------------------------------------------------------------------------
# n = 2: first-improvement hill climb on the cut


def greedy_two_agents(g: Graph) -> tuple[Allocation, SolveTrace]:
    """Local-search bipartition: EF (both sides see the cut) and TS (local max)."""
    if g.num_vertices < 2:
        raise ValueError("need at least 2 vertices")
    core, keep, iso = _split_isolated(g)
    trace = SolveTrace(guarantee="EF+TS")
    side = [0] * core.num_vertices
    cnt = [[0, 0] for _ in range(core.num_vertices)]
    for v in range(core.num_vertices):
        cnt[v][0] = core.degree(v)
    cut = 0
    budget = max(1, 2 * core.num_edges)
    moves = 0
    improved = True
    while improved:
        improved = False
        for v in range(core.num_vertices):
            s = side[v]
            gain = core.degree(v) - 2 * cnt[v][1 - s]
            if gain > 0:
                side[v] = 1 - s
                for u in core.adjacency[v]:
                    cnt[u][s] -= 1
                    cnt[u][1 - s] += 1
                cut += gain
                moves += 1
                if moves > budget:
                    raise BudgetExceededError("hill climb exceeded its move budget")
                trace.welfare_history.append(2 * cut)
                improved = True
                break
    trace.iterations = moves
    bundles = [
        {v for v in range(core.num_vertices) if side[v] == s} for s in (0, 1)
    ]
    return Allocation.of(_reattach(bundles, keep, iso, 2)), trace


# ---------------------------------------------------------------------------
# strong transfer-stability subroutine (used by the n >= 4 solver)


def _ts_pass(stats: BundleStats, order: list[int], special: Optional[int], trace: SolveTrace):
    """Drain weak chores until no transfer weakly helps both sides.

    The special bundle never receives.  Each move raises welfare by >= 1 and
    never lowers the potential.
    """
    budget = max(1, 2 * stats.graph.num_edges)
    moves = 0
    while True:
        found = _find_weak_chore(stats, order)
        if found is None:
            return
        pos, b, o = found
        a1 = order[0]
        if pos == 0:
            receiver = _first_receiver(stats, order, o, exclude={b, special})
        elif a1 != special and stats.marginal_add(a1, o) > 0:
            receiver = a1
        else:
            receiver = _first_receiver(stats, order, o, exclude={b, special})
        if receiver is None:
            raise SolverInvariantError(
                f"no receiver values item {o} positively; impossible for n >= 4"
            )
        sw_before = sum(stats.bundle_value)
        stats.apply_move(o, b, receiver)
        moves += 1
        if moves > budget:
            raise BudgetExceededError("stability subroutine exceeded 2|E| moves")
        _relabel(stats, order)
        phi_before = trace.potential_history[-1] if trace.potential_history else None
        _record(stats, order, trace)
        if trace.welfare_history[-1] <= sw_before:
            raise SolverInvariantError("welfare did not rise on a chore transfer")
        if phi_before is not None and trace.potential_history[-1] < phi_before:
            raise SolverInvariantError("potential decreased in stability subroutine")


def ts_subroutine(
    a: Allocation, g: Graph, special: Optional[int] = None
) -> tuple[Allocation, SolveTrace]:
    """Public wrapper: resort the input, drain weak chores, return sorted result.

    special names a bundle by its index in the input allocation.
    """
    if a.n < 4:
        raise ValueError("needs at least 4 bundles")
    if not a.is_complete(g):
        raise ValueError("needs a complete allocation")
    stats = BundleStats.from_bundles(g, a.bundles)
    order = list(range(a.n))
    _relabel(stats, order)
    trace = SolveTrace()
    _record(stats, order, trace)
    _ts_pass(stats, order, special, trace)
    trace.iterations = len(trace.welfare_history) - 1
    return _allocation(stats, order), trace


# ---------------------------------------------------------------------------
# n >= 4 solver: EF1 + TS


def solve_ef1_ts_n4(g: Graph, n: int) -> tuple[Allocation, SolveTrace]:
    if n < 4:
        raise ValueError("this solver needs n >= 4")
    if g.num_vertices < n:
        raise ValueError("need at least as many vertices as bundles")
    core, keep, iso = _split_isolated(g)
    trace = SolveTrace(guarantee="EF1+TS")
    stats = BundleStats(core, n)
    for v in range(core.num_vertices):
        stats.apply_move(v, None, v % n)
    order = list(range(n))
    _relabel(stats, order)
    _record(stats, order, trace)
    _ts_pass(stats, order, None, trace)
    budget = max(1, 8 * core.num_vertices * core.num_vertices * n)
    while _violator_positions(stats, order):
        trace.iterations += 1
        if trace.iterations > budget:
            raise BudgetExceededError("outer loop exceeded its budget")
        # first resolve every violation fixable by a transfer that helps the
        # minimum bundle
        while True:
            pick = None
            a1 = order[0]
            for pos in _violator_positions(stats, order):
                for o in _members(stats, order[pos]):
                    if stats.marginal_add(a1, o) > 0:
                        pick = (order[pos], o)
                        break
                if pick:
                    break
            if pick is None:
                break
            src, o = pick
            stats.apply_move(o, src, a1)
            trace.case_history.append("I")
            _relabel(stats, order)
            _record(stats, order, trace)
            _ts_pass(stats, order, None, trace)
            trace.snapshots.append(("I", trace.potential_history[-1]))
        violators = _violator_positions(stats, order)
        if not violators:
            break
        if len(violators) != 1:
            raise SolverInvariantError(
                f"{len(violators)} unremovable envies with no helpful item; "
                "the single-violator property failed"
            )
        i_star = order[violators[0]]
        a1 = order[0]
        v1 = stats.bundle_value[a1]
        # every item of the violator now has non-positive marginal value for
        # the minimum bundle; park such items with third parties
        while (
            stats.bundle_value[i_star] > v1
            and _drop_value(stats, i_star) > v1
            and all(stats.marginal_add(a1, o) <= 0 for o in _members(stats, i_star))
        ):
            o = min(o for o in _members(stats, i_star) if stats.marginal_add(a1, o) <= 0)
            receiver = None
            for b in order[1:]:
                if b != i_star and stats.marginal_add(b, o) > 0:
                    receiver = b
                    break
            if receiver is None:
                raise SolverInvariantError(
                    f"item {o} has no positive receiver; impossible for n >= 4"
                )
            stats.apply_move(o, i_star, receiver)
        trace.case_history.append("II")
        _relabel(stats, order)
        _record(stats, order, trace)
        _ts_pass(stats, order, i_star, trace)
        trace.snapshots.append(("II", trace.potential_history[-1]))
    bundles = [set(_members(stats, b)) for b in order]
    return Allocation.of(_reattach(bundles, keep, iso, n)), trace


# ---------------------------------------------------------------------------
# weak transfer-stability subroutine and the general-n solver


def _wts_pass(stats: BundleStats, order: list[int], trace: SolveTrace):
    """Drain strict chores; each move strictly improves the potential."""
    if len(order) < 2:
        return
    budget = max(1, 2 * stats.graph.num_edges * len(order))
    moves = 0
    while True:
        found = _find_strict_chore(stats, order)
        if found is None:
            return
        pos, b, o = found
        receiver = order[1] if pos == 0 else order[0]
        if stats.marginal_add(receiver, o) <= 0:
            raise SolverInvariantError(
                f"item {o} is a strict chore in two bundles at once"
            )
        phi_before = potential_from_values([stats.bundle_value[x] for x in order])
        stats.apply_move(o, b, receiver)
        moves += 1
        if moves > budget:
            raise BudgetExceededError("weak-stability subroutine exceeded its budget")
        _relabel(stats, order)
        _record(stats, order, trace)
        if trace.potential_history[-1] <= phi_before:
            raise SolverInvariantError("potential did not strictly improve")


def wts_subroutine(a: Allocation, g: Graph) -> tuple[Allocation, SolveTrace]:
    if a.n < 2:
        raise ValueError("needs at least 2 bundles")
    if not a.is_complete(g):
        raise ValueError("needs a complete allocation")
    stats = BundleStats.from_bundles(g, a.bundles)
    order = list(range(a.n))
    _relabel(stats, order)
    trace = SolveTrace()
    _record(stats, order, trace)
    _wts_pass(stats, order, trace)
    trace.iterations = len(trace.welfare_history) - 1
    return _allocation(stats, order), trace


def solve_ef1_wts(g: Graph, n: int) -> tuple[Allocation, SolveTrace]:
    if n < 1:
        raise ValueError("need n >= 1")
    if g.num_vertices < n:
        raise ValueError("need at least as many vertices as bundles")
    trace = SolveTrace(guarantee="EF1+wTS")
    if n == 1:
        return Allocation.of([set(range(g.num_vertices))]), trace
    core, keep, iso = _split_isolated(g)
    stats = BundleStats(core, n)
    for v in range(core.num_vertices):
        stats.apply_move(v, None, v % n)
    order = list(range(n))
    _relabel(stats, order)
    _record(stats, order, trace)
    _wts_pass(stats, order, trace)
    budget = max(1, 8 * core.num_vertices * core.num_vertices * n)
    while True:
        violators = _violator_positions(stats, order)
        if not violators:
            break
        trace.iterations += 1
        if trace.iterations > budget:
            raise BudgetExceededError("outer loop exceeded its budget")
        a1 = order[0]
        pick = None
        for pos in violators:
            for o in _members(stats, order[pos]):
                if stats.marginal_add(a1, o) > 0:
                    pick = (order[pos], o)
                    break
            if pick:
                break
        if pick is not None:
            src, o = pick
            stats.apply_move(o, src, a1)
            trace.case_history.append("1")
        else:
            if len(violators) != 1:
                raise SolverInvariantError("single-violator property failed")
            if n < 3:
                raise SolverInvariantError(
                    "unremovable envy with no helpful item cannot happen for n = 2"
                )
            i = order[violators[0]]
            v1 = stats.bundle_value[a1]
            # carve out a just-above-minimum subset for the violator and park
            # the rest with a third bundle
            pool = _members(stats, i)
            in_s = set()
            vs = 0
            while vs <= v1:
                o = None
                for cand in pool:
                    if cand in in_s:
                        continue
                    margin = core.degree(cand) - 2 * sum(
                        1 for u in core.adjacency[cand] if u in in_s
                    )
                    if margin > 0:
                        o = cand
                        break
                if o is None:
                    raise SolverInvariantError(
                        "subset building stalled below the minimum value"
                    )
                in_s.add(o)
                vs += core.degree(o) - 2 * sum(
                    1 for u in core.adjacency[o] if u in in_s and u != o
                )
            j = next(b for b in order if b not in (a1, i))
            for o in sorted(set(pool) - in_s):
                stats.apply_move(o, i, j)
            trace.case_history.append("2")
        _relabel(stats, order)
        _record(stats, order, trace)
        _wts_pass(stats, order, trace)
        trace.snapshots.append((trace.case_history[-1], trace.potential_history[-1]))
    bundles = [set(_members(stats, b)) for b in order]
    out = _reattach(bundles, keep, iso, n)
    if not all(out):
        raise SolverInvariantError("an empty bundle survived round-robin start")
    return Allocation.of(out), trace


# ---------------------------------------------------------------------------
# forests: EF1 + SO by rooting and peeling


def solve_forest_ef1_so(g: Graph, n: int) -> tuple[Allocation, SolveTrace]:
    if not g.is_forest():
        raise ValueError("this solver needs an acyclic graph")
    if n < 2:
        raise ValueError("need n >= 2")
    if g.num_vertices < n:
        raise ValueError("need at least as many vertices as bundles")
    core, keep, iso = _split_isolated(g)
    trace = SolveTrace(guarantee="EF1+SO+TS")
    if core.num_vertices == 0:
        return Allocation.of(_reattach([set() for _ in range(n)], keep, iso, n)), trace
    if n == 2:
        rf = RootedForest.build(core)
        color = [0] * core.num_vertices
        for r in rf.roots:
            stack = [(r, 0)]
            while stack:
                v, c = stack.pop()
                color[v] = c
                for u in rf.children[v]:
                    stack.append((u, 1 - c))
        bundles = [{v for v in range(core.num_vertices) if color[v] == c} for c in (0, 1)]
        return Allocation.of(_reattach(bundles, keep, iso, 2)), trace

    comps = core.connected_components()
    roots = []
    exempt = set()
    for comp in comps:
        if len(comp) >= 3:
            roots.append(min(v for v in comp if core.degree(v) >= 2))
        else:
            r = min(comp)
            roots.append(r)
            exempt.add(r)
    rf = RootedForest.build(core, roots)
    stats = BundleStats(core, n)
    order = list(range(n))
    frontier = set(rf.roots)
    budget = max(1, 4 * core.num_vertices)

    def feasible_roots(b):
        return [
            r
            for r in sorted(frontier)
            if rf.parent[r] is None or stats.assignment[rf.parent[r]] != b
        ]

    def best_root(candidates):
        return min(candidates, key=lambda r: (-core.degree(r), r))

    def allocate(v, b):
        stats.apply_move(v, None, b)
        frontier.discard(v)
        frontier.update(rf.children[v])

    def leaf_children(o_t):
        return [
            c
            for c in rf.children[o_t]
            if stats.assignment[c] is None and core.degree(c) == 1
        ]

    def unallocated_children(o_t):
        return [c for c in rf.children[o_t] if stats.assignment[c] is None]

    def distribute_leaf_children(o_t, positions):
        while True:
            ls = leaf_children(o_t)
            if not ls:
                return
            vmin = min(stats.bundle_value[order[p]] for p in positions)
            tied = [p for p in positions if stats.bundle_value[order[p]] == vmin]
            j = tied[0]
            if len(tied) >= 2:
                for cand in tied:
                    if any(
                        feasible_roots(order[k]) for k in tied if k != cand
                    ):
                        j = cand
                        break
            allocate(ls[0], order[j])

    while frontier:
        trace.iterations += 1
        if trace.iterations > budget:
            raise BudgetExceededError("peeling loop exceeded its budget")
        _relabel(stats, order)
        _record(stats, order, trace)
        # frontier roots are mostly non-leaf (leaf-children go out with their
        # parent), but a compensation step that hands a non-leaf child to the
        # minimum bundle can promote that child's own leaves to the frontier
        a1, a2 = order[0], order[1]
        f1 = feasible_roots(a1)
        if f1:
            o_t = f1[0]
            allocate(o_t, a1)
            distribute_leaf_children(o_t, list(range(1, n)))
            tag = "1"
        else:
            best2 = stats.min_removal_value(a2)
            drop2 = 0 if best2 is None else best2[1]
            deg2 = 0 if best2 is None else core.degree(best2[0])
            f2 = feasible_roots(a2)
            o_t = best_root(f2) if f2 else None
            if f2 and (
                stats.bundle_value[a1] > drop2 or core.degree(o_t) > deg2
            ):
                allocate(o_t, a2)
                h2 = stats.min_removal_value(a2)[0]
                distribute_leaf_children(o_t, [0] + list(range(2, n)))
                while (
                    stats.bundle_value[a1]
                    < stats.bundle_value[a2] + stats.marginal_remove(a2, h2)
                ):
                    rest = unallocated_children(o_t)
                    if not rest:
                        raise SolverInvariantError("ran out of children to compensate")
                    allocate(rest[0], a1)
                tag = "2"
            else:
                drops = {
                    pos: stats.min_removal_value(order[pos]) for pos in range(2, n)
                }
                dvals = {
                    pos: (0 if item is None else item[1]) for pos, item in drops.items()
                }
                dmin = min(dvals.values())
                pick = None
                if stats.bundle_value[a1] > dmin:
                    for pos in range(2, n):
                        if dvals[pos] != dmin:
                            continue
                        fj = feasible_roots(order[pos])
                        if fj:
                            pick = (pos, fj)
                            break
                if pick is None:
                    raise SolverInvariantError("no peeling case applies")
                pos, fj = pick
                j = order[pos]
                oj = drops[pos][0] if drops[pos] else None
                o_t = best_root(fj)
                allocate(o_t, j)
                for leaf in leaf_children(o_t):
                    allocate(leaf, a1)
                while stats.bundle_value[a1] < min(
                    stats.bundle_value[a2],
                    stats.bundle_value[j]
                    + (stats.marginal_remove(j, oj) if oj is not None else 0),
                ):
                    rest = unallocated_children(o_t)
                    if not rest:
                        raise SolverInvariantError("ran out of children to compensate")
                    allocate(rest[0], a1)
                tag = "3"
        trace.case_history.append(tag)
        trace.snapshots.append(
            (tag, [sorted(keep[o] for o in _members(stats, b)) for b in order])
        )

    _relabel(stats, order)
    _record(stats, order, trace)
    if any(x is None for x in stats.assignment):
        raise SolverInvariantError("peeling terminated with unallocated items")
    bundles = [set(_members(stats, b)) for b in order]
    return Allocation.of(_reattach(bundles, keep, iso, n)), trace


# ---------------------------------------------------------------------------
# equitable partitioning and goal routing


def equitable_cut(g: Graph, n: int) -> tuple[Allocation, SolveTrace]:
    """Non-empty n-partition with pairwise cut-value gap at most the max degree."""
    if not 2 <= n <= g.num_vertices:
        raise ValueError("need 2 <= n <= number of vertices")
    a, trace = solve_ef1_wts(g, n)
    values = sorted(
        BundleStats.from_bundles(g, a.bundles).bundle_value
    )
    if values[-1] - values[0] > g.max_degree():
        raise SolverInvariantError("gap bound violated; the EF1 guarantee failed")
    trace.guarantee = "EF1+wTS+gap<=maxdeg"
    return a, trace


def dispatch_solve(g: Graph, n: int, goal) -> tuple[Allocation, SolveTrace]:
    """Route to the strongest applicable solver and verify the goal is covered."""
    goal = SolveGoal(goal)
    if goal is SolveGoal.EF_TS_2 and n != 2:
        raise GoalInfeasibleError("that guarantee is defined only for n = 2")
    if goal is SolveGoal.EF1_SO_FOREST:
        if not g.is_forest():
            raise GoalInfeasibleError("the SO-by-construction solver needs a forest")
        return solve_forest_ef1_so(g, n)
    if goal is SolveGoal.EQUITABLE:
        return equitable_cut(g, n)
    if n == 2:
        return greedy_two_agents(g)
    if g.is_forest() and n >= 2:
        return solve_forest_ef1_so(g, n)
    if n >= 4:
        return solve_ef1_ts_n4(g, n)
    if goal is SolveGoal.EF1_TS and n == 3:
        raise GoalInfeasibleError(
            "an EF1 allocation that is also transfer-stable need not exist for "
            "n = 3 on general graphs; use the oracle to decide this instance"
        )
    a, trace = solve_ef1_wts(g, n)
    if n == 1:
        trace.guarantee = "EF1+TS+wTS"
    return a, trace


__all__ = [
    "BudgetExceededError",
    "GoalInfeasibleError",
    "SolveGoal",
    "SolveTrace",
    "SolverInvariantError",
    "dispatch_solve",
    "equitable_cut",
    "greedy_two_agents",
    "solve_ef1_ts_n4",
    "solve_ef1_wts",
    "solve_forest_ef1_so",
    "ts_subroutine",
    "wts_subroutine",
]
