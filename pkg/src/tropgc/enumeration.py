"""Isomorph-free enumeration of stable graphs of fixed genus.

Maximal cells are the trivalent weight-0 graphs; every other stable graph of
the same genus is reached from them by collapsing edges.  All functions return
canonical representatives sorted by canonical key.
"""

from __future__ import annotations

import logging
from collections import defaultdict, deque
from functools import lru_cache
from itertools import combinations_with_replacement

from .canonical import canonical_form, canonical_key
from .graphs import StableGraph, contract_index, dumbbell, genus, theta

log = logging.getLogger(__name__)

MATRIX_ENUMERATION_MAX_GENUS = 4


def _canonical_set(graphs) -> dict[str, StableGraph]:
    out = {}
    for g in graphs:
        c, k = canonical_form(g)
        out.setdefault(k.key, c)
    return out


def _sorted(d: dict[str, StableGraph]) -> list[StableGraph]:
    return [d[k] for k in sorted(d)]


def trivalent_by_matrices(g: int) -> list[StableGraph]:
    """All connected trivalent multigraphs of genus ``g`` by brute force over
    labelled adjacency matrices, deduplicated by canonical form."""
    n = 2 * g - 2
    found: dict[str, StableGraph] = {}
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]

    for loopmask in range(1 << n):
        loops = [(loopmask >> v) & 1 for v in range(n)]
        need = [3 - 2 * l for l in loops]

        def rec(k: int, edges: list[tuple[int, int]]) -> None:
            if k == len(pairs):
                if any(need):
                    return
                gr = StableGraph((0,) * n, tuple(edges))
                if gr.is_connected():
                    c, key = canonical_form(gr)
                    found.setdefault(key.key, c)
                return
            i, j = pairs[k]
            # vertex i sees no later pair once j == n - 1
            top = min(need[i], need[j])
            lo = need[i] if j == n - 1 else 0
            if lo > top:
                return
            for m in range(lo, top + 1):
                need[i] -= m
                need[j] -= m
                rec(k + 1, edges + [(i, j)] * m)
                need[i] += m
                need[j] += m

        rec(0, [(v, v) for v in range(n) if loops[v]])
    return _sorted(found)


def trivalent_by_matchings(g: int) -> list[StableGraph]:
    """Brute force over perfect matchings of the 6g-6 labelled half-edges
    (three per vertex).  Exponential; used as an oracle for small genus."""
    n = 2 * g - 2
    owner = [h // 3 for h in range(3 * n)]
    found: dict[str, StableGraph] = {}

    def rec(free: list[int], edges: list[tuple[int, int]]) -> None:
        if not free:
            gr = StableGraph((0,) * n, tuple(edges))
            if gr.is_connected():
                c, key = canonical_form(gr)
                found.setdefault(key.key, c)
            return
        a = free[0]
        for idx in range(1, len(free)):
            b = free[idx]
            rest = free[1:idx] + free[idx + 1:]
            rec(rest, edges + [(owner[a], owner[b])])

    rec(list(range(3 * n)), [])
    return _sorted(found)


def _subdivide(edges: list[tuple[int, int]], i: int, new: int) -> None:
    u, v = edges[i]
    edges[i] = (u, new)
    edges.append((new, v))


def insert_handle(gr: StableGraph, a: int, b: int) -> StableGraph:
    """Put a new vertex on edge ``a`` and one on edge ``b`` and join them.
    With ``a == b`` both new vertices sit on the same edge."""
    n = gr.n_vertices
    edges = list(gr.edges)
    _subdivide(edges, a, n)
    if a == b:
        _subdivide(edges, len(edges) - 1, n + 1)
    else:
        _subdivide(edges, b, n + 1)
    edges.append((n, n + 1))
    return StableGraph(gr.weights + (0, 0), tuple(edges))


def insert_lollipop(gr: StableGraph, a: int) -> StableGraph:
    """Hang a bridge ending in a loop off a new vertex on edge ``a``."""
    n = gr.n_vertices
    edges = list(gr.edges)
    _subdivide(edges, a, n)
    edges += [(n, n + 1), (n + 1, n + 1)]
    return StableGraph(gr.weights + (0, 0), tuple(edges))


def trivalent_by_augmentation(g: int) -> list[StableGraph]:
    """Genus-by-genus augmentation from the two genus-2 graphs.

    Every connected trivalent multigraph of genus >= 3 has either an edge whose
    removal (followed by smoothing its two endpoints) leaves a connected
    trivalent graph, or a pendant loop on a bridge; the two inverse moves are
    ``insert_handle`` and ``insert_lollipop``.
    """
    level = {canonical_key(x): canonical_form(x)[0] for x in (theta(), dumbbell())}
    for _ in range(3, g + 1):
        nxt: dict[str, StableGraph] = {}
        for parent in level.values():
            m = parent.n_edges
            for a, b in combinations_with_replacement(range(m), 2):
                c, k = canonical_form(insert_handle(parent, a, b))
                nxt.setdefault(k.key, c)
            for a in range(m):
                c, k = canonical_form(insert_lollipop(parent, a))
                nxt.setdefault(k.key, c)
        level = nxt
    return _sorted(level)


@lru_cache(maxsize=None)
def _trivalent(g: int) -> tuple[StableGraph, ...]:
    if g < 2:
        raise ValueError("genus must be at least 2")
    if g <= MATRIX_ENUMERATION_MAX_GENUS:
        return tuple(trivalent_by_matrices(g))
    return tuple(trivalent_by_augmentation(g))


def enumerate_trivalent(g: int) -> list[StableGraph]:
    """Connected trivalent weight-0 multigraphs of genus ``g`` (loops and
    parallel edges allowed), one per isomorphism class."""
    return list(_trivalent(g))


def saturate_contractions(seed, edge_filter=None) -> list[StableGraph]:
    """Closure of ``seed`` under single-edge contraction, up to isomorphism.

    ``edge_filter(graph, i)`` restricts which edges may be collapsed.
    """
    found = _canonical_set(seed)
    queue = deque(found.values())
    while queue:
        gr = queue.popleft()
        for i in range(gr.n_edges):
            if edge_filter is not None and not edge_filter(gr, i):
                continue
            c, k = canonical_form(contract_index(gr, i))
            if k.key not in found:
                found[k.key] = c
                queue.append(c)
    return _sorted(found)


@lru_cache(maxsize=None)
def _jg(g: int) -> tuple[StableGraph, ...]:
    out = tuple(saturate_contractions(_trivalent(g)))
    log.info("J_%d: %d isomorphism classes", g, len(out))
    return out


def enumerate_jg(g: int) -> list[StableGraph]:
    """All stable graphs of genus ``g`` up to isomorphism."""
    return list(_jg(g))


def _nonparallel(gr: StableGraph, i: int) -> bool:
    return not gr.is_loop(i) and gr.multiplicity(i) == 1


@lru_cache(maxsize=None)
def _gc_by_degree(g: int) -> dict[int, tuple[StableGraph, ...]]:
    seed = [x for x in _trivalent(g) if x.loop_count() == 0]
    closure = saturate_contractions(seed, _nonparallel)
    by_degree = defaultdict(list)
    for x in closure:
        by_degree[x.n_edges - 2 * g].append(x)
    return {k: tuple(v) for k, v in by_degree.items()}


def enumerate_gc_generators(g: int, k: int) -> list[StableGraph]:
    """Loopless weight-0 connected graphs of genus ``g`` with all valences at
    least 3, ``2g + k`` edges and ``g + 1 + k`` vertices."""
    if g < 2:
        raise ValueError("genus must be at least 2")
    return list(_gc_by_degree(g).get(k, ()))


def gc_degrees(g: int) -> range:
    """Degrees in which generators can exist: 1 <= 2g + k <= 3g - 3."""
    return range(1 - 2 * g, g - 2)


def counts_by_shape(graphs) -> dict[tuple[int, int], int]:
    c: dict[tuple[int, int], int] = defaultdict(int)
    for x in graphs:
        c[(x.n_vertices, x.n_edges)] += 1
    return dict(sorted(c.items()))


__all__ = [
    "enumerate_trivalent", "enumerate_jg", "enumerate_gc_generators",
    "saturate_contractions", "trivalent_by_matrices", "trivalent_by_matchings",
    "trivalent_by_augmentation", "insert_handle", "insert_lollipop", "gc_degrees",
    "counts_by_shape", "genus",
]
