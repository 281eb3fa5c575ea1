"""Canonical labeling and automorphism groups of weighted multigraphs.

Vertices are ordered by individualization/refinement.  The initial colouring
is by (weight, valence, loop count) and is refined by neighbour colours with
edge multiplicities; the search branches on the first non-singleton cell.  Every leaf of the
search tree is an ordering of the vertices; the canonical one is the leaf with
the smallest encoding (ties broken by the ordering itself, which makes a graph
already in canonical form map to itself by the identity).  Leaves that tie with
the minimum are exactly the vertex automorphisms.

Automorphisms act on half-edges.  Beyond the vertex automorphisms there are the
permutations inside bundles of parallel edges and, at each vertex, the
permutations and flips of its loops.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from math import factorial

from .graphs import GraphError, StableGraph, genus


@dataclass(frozen=True)
class CanonicalKey:
    key: str
    vertex_map: tuple[int, ...]  # input vertex -> canonical position
    edge_map: tuple[int, ...]  # input edge -> canonical edge index


@dataclass(frozen=True)
class AutInfo:
    generators: tuple[tuple[int, ...], ...]  # half-edge permutations
    vertex_automorphisms: tuple[tuple[int, ...], ...]
    has_odd_edge_automorphism: bool
    group_order: int


def permutation_sign(perm) -> int:
    """Sign of a permutation given as a sequence ``i -> perm[i]``."""
    n = len(perm)
    seen = [False] * n
    sign = 1
    for i in range(n):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _structure(g: StableGraph):
    n = g.n_vertices
    mult = [[0] * n for _ in range(n)]
    loops = [0] * n
    for u, v in g.edges:
        if u == v:
            loops[u] += 1
        else:
            mult[u][v] += 1
            mult[v][u] += 1
    nbrs = [[(u, mult[v][u]) for u in range(n) if mult[v][u]] for v in range(n)]
    return mult, loops, nbrs


def _refine(colors: list[int], nbrs) -> list[int]:
    n_cells = len(set(colors))
    while True:
        sigs = [(colors[v], tuple(sorted((colors[u], m) for u, m in nbrs[v])))
                for v in range(len(colors))]
        ranks = {s: i for i, s in enumerate(sorted(set(sigs)))}
        colors = [ranks[s] for s in sigs]
        if len(ranks) == n_cells:
            return colors
        n_cells = len(ranks)


def _encode(order, weights, loops, mult) -> tuple:
    n = len(order)
    return (tuple(weights[v] for v in order),
            tuple(loops[v] for v in order),
            tuple(mult[order[i]][order[j]] for i in range(n) for j in range(i + 1, n)))


@lru_cache(maxsize=None)
def _search(g: StableGraph):
    """Return (best encoding, best ordering, all vertex automorphisms)."""
    n = g.n_vertices
    mult, loops, nbrs = _structure(g)
    val = g.valences()
    init = [(g.weights[v], val[v], loops[v]) for v in range(n)]
    ranks = {c: i for i, c in enumerate(sorted(set(init)))}
    root = _refine([ranks[c] for c in init], nbrs)

    leaves: list[tuple[tuple, tuple[int, ...]]] = []

    def visit(colors: list[int]) -> None:
        counts = defaultdict(list)
        for v, c in enumerate(colors):
            counts[c].append(v)
        target = min((c for c, vs in counts.items() if len(vs) > 1), default=None)
        if target is None:
            order = [0] * n
            for v, c in enumerate(colors):
                order[c] = v
            leaves.append((_encode(order, g.weights, loops, mult), tuple(order)))
            return
        for v in counts[target]:
            child = [2 * c for c in colors]
            child[v] -= 1
            visit(_refine(child, nbrs))

    visit(root)
    best_enc, best_order = min(leaves)
    auts = []
    for enc, order in leaves:
        if enc == best_enc:
            a = [0] * n
            for b, x in zip(best_order, order):
                a[b] = x
            auts.append(tuple(a))
    auts.sort()
    return best_enc, best_order, tuple(auts)


def _key_string(gen: int, enc: tuple) -> str:
    w, l, m = enc
    return "g{}|n{}|w{}|l{}|m{}".format(
        gen, len(w), ",".join(map(str, w)), ",".join(map(str, l)), ",".join(map(str, m)))


@lru_cache(maxsize=None)
def canonical_form(g: StableGraph) -> tuple[StableGraph, CanonicalKey]:
    """Canonically relabelled copy of ``g`` and the relabeling data."""
    enc, order, _ = _search(g)
    n = g.n_vertices
    pos = [0] * n
    for i, v in enumerate(order):
        pos[v] = i
    w, l, m = enc
    edges = []
    k = 0
    for i in range(n):
        edges.extend([(i, i)] * l[i])
        for j in range(i + 1, n):
            edges.extend([(i, j)] * m[k])
            k += 1
    canon = StableGraph(tuple(w), tuple(edges))

    slots = defaultdict(list)
    for idx, e in enumerate(edges):
        slots[e].append(idx)
    edge_map = [0] * g.n_edges
    used = defaultdict(int)
    for i, (u, v) in enumerate(g.edges):
        a, b = sorted((pos[u], pos[v]))
        edge_map[i] = slots[(a, b)][used[(a, b)]]
        used[(a, b)] += 1
    return canon, CanonicalKey(_key_string(genus(g), enc), tuple(pos), tuple(edge_map))


def canonical_key(g: StableGraph) -> str:
    return canonical_form(g)[1].key


def are_isomorphic(a: StableGraph, b: StableGraph) -> bool:
    return canonical_key(a) == canonical_key(b)


def _lift(g: StableGraph, a) -> tuple[int, ...]:
    """Half-edge automorphism over the vertex automorphism ``a``."""
    bundles = defaultdict(list)
    for i, (u, v) in enumerate(g.edges):
        bundles[frozenset((u, v))].append(i)
    perm = [0] * (2 * g.n_edges)
    for key, src in bundles.items():
        dst = bundles[frozenset(a[x] for x in key)]
        for i, j in zip(src, dst):
            u, v = g.edges[i]
            x, _ = g.edges[j]
            if u == v or x == a[u]:
                perm[2 * i], perm[2 * i + 1] = 2 * j, 2 * j + 1
            else:
                perm[2 * i], perm[2 * i + 1] = 2 * j + 1, 2 * j
    return tuple(perm)


def _closure(gens, n):
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for s in gens:
                q = tuple(s[x] for x in p)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return seen


def induced_edge_permutation(perm) -> list[int]:
    return [perm[2 * i] >> 1 for i in range(len(perm) // 2)]


@lru_cache(maxsize=None)
def automorphisms(g: StableGraph) -> AutInfo:
    _, _, vauts = _search(g)
    n = g.n_vertices
    # small generating set of the vertex automorphism group
    vgens: list[tuple[int, ...]] = []
    group = {tuple(range(n))}
    for a in vauts:
        if a not in group:
            vgens.append(a)
            group = _closure(vgens, n)

    gens = [_lift(g, a) for a in vgens]
    h = 2 * g.n_edges
    order = len(vauts)
    odd = False
    bundles = defaultdict(list)
    for i, (u, v) in enumerate(g.edges):
        bundles[(min(u, v), max(u, v))].append(i)
    for (u, v), idx in sorted(bundles.items()):
        m = len(idx)
        order *= factorial(m)
        if u == v:
            order *= 2 ** m
            for i in idx:
                p = list(range(h))
                p[2 * i], p[2 * i + 1] = 2 * i + 1, 2 * i
                gens.append(tuple(p))
        if m >= 2:
            odd = True
            p = list(range(h))
            i, j = idx[0], idx[1]
            p[2 * i], p[2 * j] = 2 * j, 2 * i
            p[2 * i + 1], p[2 * j + 1] = 2 * j + 1, 2 * i + 1
            gens.append(tuple(p))
            if m >= 3:
                p = list(range(h))
                for a, b in zip(idx, idx[1:] + idx[:1]):
                    p[2 * a], p[2 * a + 1] = 2 * b, 2 * b + 1
                gens.append(tuple(p))
    if not odd:
        odd = any(permutation_sign(induced_edge_permutation(_lift(g, a))) < 0 for a in vauts)
    return AutInfo(tuple(gens), vauts, odd, order)


def has_odd_automorphism(g: StableGraph) -> bool:
    return automorphisms(g).has_odd_edge_automorphism


def check_automorphism(g: StableGraph, perm) -> list[int]:
    """Validate a half-edge automorphism; return its vertex map."""
    h = 2 * g.n_edges
    if sorted(perm) != list(range(h)):
        raise GraphError("not a permutation of the half-edges")
    vmap: dict[int, int] = {}
    for x in range(h):
        if perm[x ^ 1] != perm[x] ^ 1:
            raise GraphError("permutation does not commute with the partner involution")
        u, v = g.incidence(x), g.incidence(perm[x])
        if vmap.setdefault(u, v) != v:
            raise GraphError("permutation does not commute with the incidence map")
    if len(set(vmap.values())) != len(vmap):
        raise GraphError("induced vertex map is not injective")
    if any(g.weights[u] != g.weights[v] for u, v in vmap.items()):
        raise GraphError("permutation does not preserve weights")
    return [vmap.get(v, v) for v in range(g.n_vertices)]


def edge_permutation_sign(g: StableGraph, perm) -> int:
    """Parity of the edge permutation induced by a half-edge automorphism."""
    check_automorphism(g, perm)
    return permutation_sign(induced_edge_permutation(perm))
