"""Simple undirected graphs over dense 0-indexed vertices.

All valuations in this package are derived from graph cuts, so the graph
representation is deliberately minimal: an immutable edge list plus sorted
adjacency lists, with strict validation (no self-loops, no duplicate edges).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence


class GraphError(ValueError):
    """Raised for malformed graph input (self-loop, duplicate edge, bad vertex)."""


@dataclass(frozen=True)
class Graph:
    num_vertices: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...] = field(compare=False)

    @staticmethod
    def from_edges(num_vertices: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        if num_vertices < 0:
            raise GraphError("num_vertices must be non-negative")
        seen = set()
        norm = []
        adj: list[list[int]] = [[] for _ in range(num_vertices)]
        for u, v in edges:
            if not (0 <= u < num_vertices and 0 <= v < num_vertices):
                raise GraphError(f"edge ({u}, {v}) out of range for {num_vertices} vertices")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphError(f"duplicate edge ({u}, {v})")
            seen.add(key)
            norm.append(key)
            adj[u].append(v)
            adj[v].append(u)
        return Graph(
            num_vertices=num_vertices,
            edges=tuple(sorted(norm)),
            adjacency=tuple(tuple(sorted(nbrs)) for nbrs in adj),
        )

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degree(self, o: int) -> int:
        if not 0 <= o < self.num_vertices:
            raise GraphError(f"vertex {o} out of range")
        return len(self.adjacency[o])

    def max_degree(self) -> int:
        if self.num_vertices == 0:
            return 0
        return max(len(a) for a in self.adjacency)

    def connected_components(self) -> list[set[int]]:
        """Maximal connected vertex sets, ordered by least vertex."""
        seen = [False] * self.num_vertices
        comps = []
        for start in range(self.num_vertices):
            if seen[start]:
                continue
            comp = {start}
            seen[start] = True
            stack = [start]
            while stack:
                v = stack.pop()
                for u in self.adjacency[v]:
                    if not seen[u]:
                        seen[u] = True
                        comp.add(u)
                        stack.append(u)
            comps.append(comp)
        return comps

    def is_forest(self) -> bool:
        """True iff acyclic: every component has |E_c| = |V_c| - 1."""
        for comp in self.connected_components():
            internal = sum(len(self.adjacency[v]) for v in comp) // 2
            if internal != len(comp) - 1:
                return False
        return True


@dataclass
class RootedForest:
    """Parent/children structure over a forest, with a frontier of unallocated roots.

    The frontier is mutated by the forest peeling solver: allocating a vertex
    removes it from the frontier and promotes its unallocated children to roots.
    """

    graph: Graph
    parent: list[Optional[int]]
    children: list[list[int]]
    roots: list[int]

    @staticmethod
    def build(g: Graph, roots: Optional[Sequence[int]] = None) -> "RootedForest":
        if not g.is_forest():
            raise GraphError("root_forest requires an acyclic graph")
        comps = g.connected_components()
        if roots is None:
            chosen = [min(c) for c in comps]
        else:
            chosen = list(roots)
            if len(chosen) != len(comps):
                raise GraphError(f"expected {len(comps)} roots, got {len(chosen)}")
            covered = set(chosen)
            for c in comps:
                if len(covered & c) != 1:
                    raise GraphError("exactly one root per component is required")
        parent: list[Optional[int]] = [None] * g.num_vertices
        children: list[list[int]] = [[] for _ in range(g.num_vertices)]
        seen = [False] * g.num_vertices
        for r in chosen:
            seen[r] = True
            queue = [r]
            while queue:
                v = queue.pop(0)
                for u in g.adjacency[v]:
                    if not seen[u]:
                        seen[u] = True
                        parent[u] = v
                        children[v].append(u)
                        queue.append(u)
        return RootedForest(graph=g, parent=parent, children=children, roots=sorted(chosen))


def degree(g: Graph, o: int) -> int:
    return g.degree(o)


def is_forest(g: Graph) -> bool:
    return g.is_forest()


def connected_components(g: Graph) -> list[set[int]]:
    return g.connected_components()


def root_forest(g: Graph, roots: Optional[Sequence[int]] = None) -> RootedForest:
    return RootedForest.build(g, roots)
