"""Cut-values and O(deg) incremental marginal maintenance.

The value of a bundle S is the number of edges with exactly one endpoint in S.
Unassigned vertices count as "outside" every bundle, which is what partial
allocations need.  BundleStats caches, for every vertex o and bundle i, the
count of o's neighbors inside A_i, giving closed-form marginals:

    add    o to A_i:     deg(o) - 2 * |N_{A_i}(o)|
    remove o from A_i:   2 * |N_{A_i \\ {o}}(o)| - deg(o)

All arithmetic is exact integer arithmetic.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

from .graph import Graph

STRICT_GOOD = "strict-good"
WEAK_CHORE = "weak-chore"
STRICT_CHORE = "strict-chore"


def cut_value(g: Graph, s: Iterable[int]) -> int:
    """Number of boundary edges of the vertex set s."""
    inside = set(s)
    for v in inside:
        if not 0 <= v < g.num_vertices:
            raise ValueError(f"vertex {v} out of range")
    total = 0
    for v in inside:
        for u in g.adjacency[v]:
            if u not in inside:
                total += 1
    return total


class BundleStats:
    """Mutable per-(vertex, bundle) neighbor counts with cached bundle values.

    Single-owner mutable; copy() before sharing.
    """

    def __init__(self, g: Graph, n: int):
        if n < 1:
            raise ValueError("need at least one bundle")
        self.graph = g
        self.n = n
        self.assignment: list[Optional[int]] = [None] * g.num_vertices
        self.neighbors_in_bundle = [[0] * n for _ in range(g.num_vertices)]
        self.bundle_value = [0] * n
        self.bundle_size = [0] * n

    @staticmethod
    def from_bundles(g: Graph, bundles: Sequence[Iterable[int]]) -> "BundleStats":
        stats = BundleStats(g, len(bundles))
        for i, bundle in enumerate(bundles):
            for o in bundle:
                stats.apply_move(o, None, i)
        return stats

    def copy(self) -> "BundleStats":
        dup = BundleStats(self.graph, self.n)
        dup.assignment = list(self.assignment)
        dup.neighbors_in_bundle = [list(row) for row in self.neighbors_in_bundle]
        dup.bundle_value = list(self.bundle_value)
        dup.bundle_size = list(self.bundle_size)
        return dup

    def value(self, i: int) -> int:
        return self.bundle_value[i]

    def bundles(self) -> list[set[int]]:
        out: list[set[int]] = [set() for _ in range(self.n)]
        for o, b in enumerate(self.assignment):
            if b is not None:
                out[b].add(o)
        return out

    def marginal_add(self, i: int, o: int) -> int:
        """v(A_i + o) - v(A_i).  o must not already be in bundle i."""
        if self.assignment[o] == i:
            raise ValueError(f"vertex {o} already in bundle {i}")
        return self.graph.degree(o) - 2 * self.neighbors_in_bundle[o][i]

    def marginal_remove(self, i: int, o: int) -> int:
        """v(A_i - o) - v(A_i).  o must be in bundle i."""
        if self.assignment[o] != i:
            raise ValueError(f"vertex {o} not in bundle {i}")
        return 2 * self.neighbors_in_bundle[o][i] - self.graph.degree(o)

    def classify_item(self, i: int, o: int) -> str:
        """Classify o against A_i (against A_i minus o when o sits in A_i)."""
        margin = self.graph.degree(o) - 2 * self.neighbors_in_bundle[o][i]
        if margin > 0:
            return STRICT_GOOD
        if margin == 0:
            return WEAK_CHORE
        return STRICT_CHORE

    def apply_move(self, o: int, src: Optional[int], dst: Optional[int]) -> None:
        """Move o from bundle src to bundle dst (None means unassigned). O(deg(o))."""
        if self.assignment[o] != src:
            raise ValueError(f"vertex {o} is in bundle {self.assignment[o]}, not {src}")
        if src == dst:
            raise ValueError("no-op move")
        deg = self.graph.degree(o)
        cnt = self.neighbors_in_bundle
        if src is not None:
            self.bundle_value[src] += 2 * cnt[o][src] - deg
            self.bundle_size[src] -= 1
        for u in self.graph.adjacency[o]:
            if src is not None:
                cnt[u][src] -= 1
            if dst is not None:
                cnt[u][dst] += 1
        if dst is not None:
            self.bundle_value[dst] += deg - 2 * cnt[o][dst]
            self.bundle_size[dst] += 1
        self.assignment[o] = dst

    def min_removal_value(self, i: int) -> Optional[tuple[int, int]]:
        """(item, v(A_i - item)) minimizing the post-removal value; None if empty.

        Ties broken by least vertex index.
        """
        best: Optional[tuple[int, int]] = None
        for o, b in enumerate(self.assignment):
            if b != i:
                continue
            val = self.bundle_value[i] + self.marginal_remove(i, o)
            if best is None or val < best[1]:
                best = (o, val)
        return best

    def check_consistency(self) -> None:
        """Recompute everything from scratch and compare against the caches."""
        g = self.graph
        for o in range(g.num_vertices):
            for i in range(self.n):
                actual = sum(1 for u in g.adjacency[o] if self.assignment[u] == i)
                if actual != self.neighbors_in_bundle[o][i]:
                    raise AssertionError(f"stale neighbor count at ({o}, {i})")
        for i in range(self.n):
            members = [o for o in range(g.num_vertices) if self.assignment[o] == i]
            if len(members) != self.bundle_size[i]:
                raise AssertionError(f"stale size for bundle {i}")
            if cut_value(g, members) != self.bundle_value[i]:
                raise AssertionError(f"stale value for bundle {i}")
