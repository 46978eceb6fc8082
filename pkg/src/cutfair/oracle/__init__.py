"""Exhaustive enumeration over n-partitions of small instances.

Ground truth for existence questions, Pareto optimality, leximin, max-cut,
and EF1-completability.  The hot loop lives in a kernel (compiled when the
extension is available, pure Python otherwise); this module owns caps,
predicate wiring, witness decoding, and the Pareto/SO/leximin logic built on
top of the kernel's sorted-value-vector summaries.

Pareto dominance between allocations is compared sorted-vector to
sorted-vector: agents are interchangeable under a shared valuation, so bundle
identities carry no information.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

from ..allocation import Allocation, check_ef1
from ..graph import Graph
from ._kernel import ALPHA_EF1, EF, EF1, KERNEL_NAME, NONEMPTY, TS, WTS, scan

DEFAULT_MAX_STATES = 20_000_000

_PRED_BITS = {"nonempty": NONEMPTY, "ef": EF, "ef1": EF1, "ts": TS, "wts": WTS}
KNOWN_PREDICATES = frozenset(_PRED_BITS) | {"alpha_ef1", "po", "so"}


class CapExceededError(RuntimeError):
    """The query would enumerate more states than its cap allows."""


@dataclass(frozen=True)
class OracleQuery:
    predicates: frozenset[str]
    mode: str = "exists"  # exists | find_all | count
    alpha: Fraction = Fraction(1)
    max_states: int = DEFAULT_MAX_STATES
    symmetry: bool = False
    threads: int = 1

    @staticmethod
    def of(predicates, **kwargs) -> "OracleQuery":
        preds = frozenset(predicates)
        unknown = preds - KNOWN_PREDICATES
        if unknown:
            raise ValueError(f"unknown predicates: {sorted(unknown)}")
        return OracleQuery(predicates=preds, **kwargs)


def _csr(g: Graph):
    indptr = [0]
    indices = []
    for v in range(g.num_vertices):
        indices.extend(g.adjacency[v])
        indptr.append(len(indices))
    degrees = [len(a) for a in g.adjacency]
    return indptr, indices, degrees


def _shift(g: Graph) -> int:
    return max(1, g.num_edges).bit_length()


def _num_states(n: int, fixed) -> int:
    f = sum(1 for b in fixed if b < 0)
    return n**f


def _check_cap(n: int, fixed, max_states: int) -> int:
    states = _num_states(n, fixed)
    if states > max_states:
        raise CapExceededError(f"{states} states exceed the cap of {max_states}")
    return states


def _decode(g: Graph, n: int, fixed, index: int) -> Allocation:
    free = [v for v in range(g.num_vertices) if fixed[v] < 0]
    assign = list(fixed)
    rem = index
    for v in reversed(free):
        assign[v] = rem % n
        rem //= n
    bundles: list[set[int]] = [set() for _ in range(n)]
    for v, b in enumerate(assign):
        bundles[b].add(v)
    return Allocation.of(bundles)


def _scan_args(g, n, fixed, mask, alpha, first_only, collect, start, stop):
    indptr, indices, degrees = _csr(g)
    shift = _shift(g)
    if n * shift > 62:
        raise CapExceededError("value vector does not pack into 64 bits")
    return (
        g.num_vertices, n, indptr, indices, degrees, list(fixed),
        mask, alpha.numerator, alpha.denominator,
        first_only, collect, start, stop, shift,
    )


def _scan_worker(args):
    return scan(*args)


def _merge(results):
    out = dict(results[0])
    for res in results[1:]:
        out["states"] += res["states"]
        out["matched"] += res["matched"]
        if res["first_index"] >= 0 and (out["first_index"] < 0 or res["first_index"] < out["first_index"]):
            out["first_index"] = res["first_index"]
        for name in ("all_vectors", "matched_first"):
            if res[name] is not None:
                for key, idx in res[name].items():
                    if key not in out[name] or idx < out[name][key]:
                        out[name][key] = idx
        if res["matched_count"] is not None:
            for key, c in res["matched_count"].items():
                out["matched_count"][key] = out["matched_count"].get(key, 0) + c
    return out


def _run(g, n, fixed, mask, alpha=Fraction(1), first_only=False, collect=False, threads=1):
    states = _num_states(n, fixed)
    if threads <= 1 or states < 4 * threads:
        return scan(*_scan_args(g, n, fixed, mask, alpha, first_only, collect, 0, states))
    bounds = [states * k // threads for k in range(threads + 1)]
    jobs = [
        _scan_args(g, n, fixed, mask, alpha, False, collect, bounds[k], bounds[k + 1])
        for k in range(threads)
    ]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(_scan_worker, jobs))
    return _merge(results)


def _unpack(key: int, n: int, shift: int) -> tuple[int, ...]:
    vals = []
    mask = (1 << shift) - 1
    for _ in range(n):
        vals.append(key & mask)
        key >>= shift
    return tuple(reversed(vals))


def _dominates(x, y) -> bool:
    """x, y ascending-sorted value vectors; bundle-by-bundle after sorting."""
    return all(a >= b for a, b in zip(x, y)) and any(a > b for a, b in zip(x, y))


def _nondominated(keys, n, shift) -> set[int]:
    vecs = {k: _unpack(k, n, shift) for k in keys}
    out = set()
    for k, v in vecs.items():
        if not any(_dominates(w, v) for w in vecs.values()):
            out.add(k)
    return out


def _prepare(g, n, query: OracleQuery):
    mask = 0
    for name in query.predicates:
        if name in _PRED_BITS:
            mask |= _PRED_BITS[name]
    if "alpha_ef1" in query.predicates:
        mask |= ALPHA_EF1
    fixed = [-1] * g.num_vertices
    if query.symmetry and g.num_vertices > 0 and n > 0:
        fixed[0] = 0
    _check_cap(n, fixed, query.max_states)
    return mask, fixed


def enumerate_allocations(
    g: Graph, n: int, complete_only: bool = True, max_states: int = DEFAULT_MAX_STATES
) -> Iterator[Allocation]:
    """Every assignment function exactly once, in lexicographic order.

    With complete_only=False, each vertex may also stay unassigned (encoded as
    the extra symbol sorting after all bundle indices).
    """
    base = n if complete_only else n + 1
    if base**g.num_vertices > max_states:
        raise CapExceededError(f"{base ** g.num_vertices} states exceed the cap of {max_states}")
    for assign in itertools.product(range(base), repeat=g.num_vertices):
        bundles: list[set[int]] = [set() for _ in range(n)]
        for v, b in enumerate(assign):
            if b < n:
                bundles[b].add(v)
        yield Allocation.of(bundles)


def _qualifying_keys(g, n, query, result):
    """Keys whose allocations pass the PO/SO parts of the query."""
    shift = _shift(g)
    keys = set(result["matched_first"])
    if "so" in query.predicates:
        best = max(sum(_unpack(k, n, shift)) for k in result["all_vectors"])
        keys = {k for k in keys if sum(_unpack(k, n, shift)) == best}
    if "po" in query.predicates:
        keys &= _nondominated(result["all_vectors"], n, shift)
    return keys


def oracle_exists(g: Graph, n: int, query: OracleQuery) -> Optional[Allocation]:
    """A witness satisfying every predicate in the query, or None if none exists."""
    mask, fixed = _prepare(g, n, query)
    global_preds = query.predicates & {"po", "so"}
    if not global_preds:
        result = _run(g, n, fixed, mask, query.alpha, first_only=True, threads=query.threads)
        if result["first_index"] < 0:
            return None
        return _decode(g, n, fixed, result["first_index"])
    result = _run(g, n, fixed, mask, query.alpha, collect=True, threads=query.threads)
    keys = _qualifying_keys(g, n, query, result)
    if not keys:
        return None
    index = min(result["matched_first"][k] for k in keys)
    return _decode(g, n, fixed, index)


def oracle_count(g: Graph, n: int, query: OracleQuery) -> int:
    mask, fixed = _prepare(g, n, query)
    if not query.predicates & {"po", "so"}:
        return _run(g, n, fixed, mask, query.alpha, threads=query.threads)["matched"]
    result = _run(g, n, fixed, mask, query.alpha, collect=True, threads=query.threads)
    keys = _qualifying_keys(g, n, query, result)
    return sum(result["matched_count"][k] for k in keys)


def oracle_find_all(g: Graph, n: int, query: OracleQuery) -> list[Allocation]:
    """All matching allocations in enumeration order (desk-scale only)."""
    mask, fixed = _prepare(g, n, query)
    result = _run(g, n, fixed, mask, query.alpha, collect=True, threads=query.threads)
    keys = _qualifying_keys(g, n, query, result) if query.predicates & {"po", "so"} else None
    shift = _shift(g)
    out = []
    states = _num_states(n, fixed)
    for index in range(states):
        one = scan(*_scan_args(g, n, fixed, mask, query.alpha, False, True, index, index + 1))
        if one["matched"] != 1:
            continue
        if keys is not None and next(iter(one["matched_first"])) not in keys:
            continue
        out.append(_decode(g, n, fixed, index))
    return out


def max_welfare(g: Graph, n: int, max_states: Optional[int] = None) -> int:
    """Exact maximum utilitarian welfare over all complete n-partitions."""
    fixed = [-1] * g.num_vertices
    _check_cap(n, fixed, max_states if max_states is not None else DEFAULT_MAX_STATES)
    result = _run(g, n, fixed, 0, collect=True)
    shift = _shift(g)
    return max(sum(_unpack(k, n, shift)) for k in result["all_vectors"])


def oracle_pareto(a: Allocation, g: Graph, n: int, max_states: int = DEFAULT_MAX_STATES) -> bool:
    """True iff no complete allocation Pareto dominates a (sorted-vector order)."""
    if a.n != n:
        raise ValueError("allocation size mismatch")
    if not a.is_complete(g):
        raise ValueError("Pareto check requires a complete allocation")
    fixed = [-1] * g.num_vertices
    _check_cap(n, fixed, max_states)
    from ..allocation import bundle_values

    mine = tuple(sorted(bundle_values(a, g)))
    result = _run(g, n, fixed, 0, collect=True)
    shift = _shift(g)
    return not any(_dominates(_unpack(k, n, shift), mine) for k in result["all_vectors"])


def oracle_leximin(g: Graph, n: int, max_states: int = DEFAULT_MAX_STATES, threads: int = 1) -> Allocation:
    """Allocation whose sorted value vector is lexicographically maximal; first
    in enumeration order on ties."""
    fixed = [-1] * g.num_vertices
    _check_cap(n, fixed, max_states)
    result = _run(g, n, fixed, 0, collect=True, threads=threads)
    best = max(result["all_vectors"])
    return _decode(g, n, fixed, result["all_vectors"][best])


def oracle_max_cut(g: Graph, max_states: int = DEFAULT_MAX_STATES) -> tuple[Allocation, int]:
    """Optimal bipartition by exhaustive scan (vertex 0 pinned by symmetry)."""
    fixed = [-1] * g.num_vertices
    if g.num_vertices > 0:
        fixed[0] = 0
    _check_cap(2, fixed, max_states)
    result = _run(g, 2, fixed, 0, collect=True)
    shift = _shift(g)
    best = max(sum(_unpack(k, 2, shift)) for k in result["all_vectors"])
    index = min(
        idx for k, idx in result["all_vectors"].items() if sum(_unpack(k, 2, shift)) == best
    )
    return _decode(g, 2, fixed, index), best // 2


def oracle_completable_ef1(
    partial: Allocation, g: Graph, n: int, max_states: int = DEFAULT_MAX_STATES
) -> bool:
    """Can the partial EF1 allocation be extended to a complete EF1 one?"""
    if partial.n != n:
        raise ValueError("allocation size mismatch")
    if not check_ef1(partial, g).holds:
        raise ValueError("the partial allocation must itself be EF1")
    fixed = [-1] * g.num_vertices
    for i, bundle in enumerate(partial.bundles):
        for o in bundle:
            fixed[o] = i
    _check_cap(n, fixed, max_states)
    result = _run(g, n, fixed, EF1, first_only=True)
    return result["first_index"] >= 0


__all__ = [
    "CapExceededError",
    "DEFAULT_MAX_STATES",
    "KERNEL_NAME",
    "KNOWN_PREDICATES",
    "OracleQuery",
    "enumerate_allocations",
    "max_welfare",
    "oracle_completable_ef1",
    "oracle_count",
    "oracle_exists",
    "oracle_find_all",
    "oracle_leximin",
    "oracle_max_cut",
    "oracle_pareto",
]
