"""Allocations and exact fairness/efficiency checkers.

Agents share one cut-valuation, so envy-freeness degenerates to "all bundle
values equal" and EF1 checks reduce (after sorting) to checks against the
minimum-value bundle.  Both the pairwise and the min-only EF1 paths are
implemented; they must agree and the test suite asserts it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence

from .graph import Graph
from .valuation import BundleStats


@dataclass(frozen=True)
class Allocation:
    """Ordered partition of (a subset of) the vertices into n bundles."""

    bundles: tuple[frozenset[int], ...]

    @staticmethod
    def of(bundles: Sequence[Iterable[int]]) -> "Allocation":
        frozen = tuple(frozenset(b) for b in bundles)
        assigned: set[int] = set()
        for b in frozen:
            if assigned & b:
                raise ValueError(f"bundles overlap on {sorted(assigned & b)}")
            assigned |= b
        return Allocation(frozen)

    @property
    def n(self) -> int:
        return len(self.bundles)

    def assigned(self) -> frozenset[int]:
        return frozenset().union(*self.bundles) if self.bundles else frozenset()

    def is_complete(self, g: Graph) -> bool:
        return len(self.assigned()) == g.num_vertices

    def all_nonempty(self) -> bool:
        return all(self.bundles)

    def to_lists(self) -> list[list[int]]:
        return [sorted(b) for b in self.bundles]


@dataclass
class FairnessReport:
    """Checker verdict.  holds is None for a deferred (unknown) SO verdict."""

    predicate: str
    holds: Optional[bool]
    violations: list[dict] = field(default_factory=list)

    def __post_init__(self):
        if self.holds is True and self.violations:
            raise ValueError("holds=True with non-empty violations")

    def to_json(self) -> str:
        return json.dumps(
            {"predicate": self.predicate, "holds": self.holds, "violations": self.violations}
        )


class Potential(NamedTuple):
    """Lexicographic termination measure: (min bundle value, -count of minima)."""

    min_value: int
    neg_min_count: int


def _stats(a: Allocation, g: Graph) -> BundleStats:
    return BundleStats.from_bundles(g, a.bundles)


def bundle_values(a: Allocation, g: Graph) -> list[int]:
    return _stats(a, g).bundle_value


def sort_bundles(a: Allocation, stats: BundleStats) -> Allocation:
    """Bundles in non-decreasing value order; ties keep the previous order."""
    order = sorted(range(a.n), key=lambda i: stats.bundle_value[i])
    return Allocation(tuple(a.bundles[i] for i in order))


def social_welfare(a: Allocation, g: Graph) -> int:
    return sum(bundle_values(a, g))


def potential_from_values(values: Sequence[int]) -> Potential:
    vmin = min(values)
    return Potential(vmin, -sum(1 for v in values if v == vmin))


def potential(a: Allocation, g: Graph) -> Potential:
    values = bundle_values(a, g)
    if any(values[i] > values[i + 1] for i in range(len(values) - 1)):
        raise ValueError("potential requires bundles sorted by value")
    return potential_from_values(values)


def min_drop_item(a: Allocation, g: Graph, i: int) -> Optional[tuple[int, int]]:
    """Item of bundle i minimizing the post-removal value, with that value.

    None for an empty bundle (convention: the post-removal value is then 0).
    """
    return _stats(a, g).min_removal_value(i)


def check_ef(a: Allocation, g: Graph) -> FairnessReport:
    values = bundle_values(a, g)
    violations = []
    for i, vi in enumerate(values):
        for j, vj in enumerate(values):
            if vj > vi:
                violations.append({"i": i, "j": j, "item": None, "values": [vi, vj]})
    return FairnessReport("EF", not violations, violations)


def _removal_floor(stats: BundleStats, j: int) -> int:
    """min over o in A_j of v(A_j - o); 0 for an empty bundle."""
    best = stats.min_removal_value(j)
    return 0 if best is None else best[1]


def check_ef1(a: Allocation, g: Graph) -> FairnessReport:
    """Pairwise EF1: every envy is removable by deleting one item from the envied bundle."""
    stats = _stats(a, g)
    values = stats.bundle_value
    violations = []
    for i, vi in enumerate(values):
        for j, vj in enumerate(values):
            if vj <= vi:
                continue
            floor = _removal_floor(stats, j)
            if floor > vi:
                witness = stats.min_removal_value(j)
                violations.append(
                    {"i": i, "j": j, "item": witness[0] if witness else None, "values": [vi, floor]}
                )
    return FairnessReport("EF1", not violations, violations)


def check_ef1_min_only(a: Allocation, g: Graph) -> bool:
    """EF1 verdict via the identical-valuations shortcut: only the minimum-value
    bundle can be on the envious side."""
    stats = _stats(a, g)
    values = stats.bundle_value
    vmin = min(values) if values else 0
    for j, vj in enumerate(values):
        if vj > vmin and _removal_floor(stats, j) > vmin:
            return False
    return True


def check_alpha_ef1(a: Allocation, g: Graph, alpha: Fraction) -> FairnessReport:
    """alpha-scaled EF1; comparisons by exact cross-multiplication."""
    alpha = Fraction(alpha)
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    stats = _stats(a, g)
    values = stats.bundle_value
    violations = []
    for i, vi in enumerate(values):
        for j, vj in enumerate(values):
            if vj <= vi:
                continue
            floor = _removal_floor(stats, j)
            if alpha.numerator * floor > alpha.denominator * vi:
                violations.append({"i": i, "j": j, "item": None, "values": [vi, floor]})
    return FairnessReport(f"{alpha}-EF1", not violations, violations)


def _require_complete(a: Allocation, g: Graph, predicate: str) -> None:
    if not a.is_complete(g):
        raise ValueError(f"{predicate} requires a complete allocation")


def check_ts(a: Allocation, g: Graph) -> FairnessReport:
    """Transfer stability: no single-item transfer leaves both endpoints weakly
    better with at least one strictly better."""
    _require_complete(a, g, "TS")
    stats = _stats(a, g)
    violations = []
    for o, i in enumerate(stats.assignment):
        drop = stats.marginal_remove(i, o)
        if drop < 0:
            continue
        for j in range(a.n):
            if j == i:
                continue
            gain = stats.marginal_add(j, o)
            if gain >= 0 and (drop > 0 or gain > 0):
                violations.append(
                    {"i": i, "j": j, "item": o, "values": [stats.bundle_value[i], stats.bundle_value[j]]}
                )
    return FairnessReport("TS", not violations, violations)


def check_wts(a: Allocation, g: Graph) -> FairnessReport:
    """Weak transfer stability: no transfer makes both endpoints strictly better."""
    _require_complete(a, g, "wTS")
    stats = _stats(a, g)
    violations = []
    for o, i in enumerate(stats.assignment):
        if stats.marginal_remove(i, o) <= 0:
            continue
        for j in range(a.n):
            if j != i and stats.marginal_add(j, o) > 0:
                violations.append(
                    {"i": i, "j": j, "item": o, "values": [stats.bundle_value[i], stats.bundle_value[j]]}
                )
    return FairnessReport("wTS", not violations, violations)


def check_so(a: Allocation, g: Graph, max_states: Optional[int] = None) -> FairnessReport:
    """Social optimality, three tiers:

    1. welfare == 2|E| is always sufficient;
    2. on forests with n >= 2 it is equivalent to "no edge monochromatic";
    3. otherwise defer to exhaustive welfare maximization when the instance
       fits the oracle cap, else report unknown (holds=None).
    """
    _require_complete(a, g, "SO")
    sw = social_welfare(a, g)
    if sw == 2 * g.num_edges:
        return FairnessReport("SO", True)
    if g.is_forest() and a.n >= 2:
        owner = {}
        for i, b in enumerate(a.bundles):
            for o in b:
                owner[o] = i
        violations = [
            {"i": owner[u], "j": owner[v], "item": [u, v], "values": [sw, 2 * g.num_edges]}
            for (u, v) in g.edges
            if owner[u] == owner[v]
        ]
        return FairnessReport("SO", not violations, violations)
    from . import oracle  # deferred: oracle depends on this module

    try:
        best = oracle.max_welfare(g, a.n, max_states=max_states)
    except oracle.CapExceededError:
        return FairnessReport("SO", None)
    if sw == best:
        return FairnessReport("SO", True)
    return FairnessReport("SO", False, [{"i": None, "j": None, "item": None, "values": [sw, best]}])


def monochromatic_edges(a: Allocation, g: Graph) -> list[tuple[int, int]]:
    owner: dict[int, int] = {}
    for i, b in enumerate(a.bundles):
        for o in b:
            owner[o] = i
    return [(u, v) for (u, v) in g.edges if owner.get(u) is not None and owner.get(u) == owner.get(v)]
