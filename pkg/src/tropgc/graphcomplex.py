"""Kontsevich's graph complex in fixed genus.

A generator is a loopless weight-0 graph with all valences >= 3, oriented by a
total order of its edges; reordering by a permutation multiplies by its sign.
Basis elements are canonical graphs oriented by their canonical edge order, and
graphs with an automorphism that permutes edges oddly are zero.  The degree of
a graph is ``|V| - (g + 1) = |E| - 2g``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .canonical import automorphisms, canonical_form, permutation_sign
from .enumeration import enumerate_gc_generators
from .exactla import GradedChainComplex, SparseIntMatrix
from .graphs import GraphError, StableGraph, contract_index, genus


@dataclass(frozen=True, order=True)
class Generator:
    key: str
    graph: StableGraph
    genus: int
    degree: int

    def __repr__(self) -> str:
        return f"Generator({self.key})"


class ChainVector(dict):
    """Sparse rational combination of generators of one degree."""

    def add(self, gen: Generator, coeff) -> None:
        c = self.get(gen, 0) + coeff
        if c:
            self[gen] = Fraction(c)
        else:
            self.pop(gen, None)

    def __neg__(self) -> "ChainVector":
        return ChainVector({k: -v for k, v in self.items()})


def check_gc_graph(gr: StableGraph) -> None:
    if gr.loop_count():
        raise GraphError(f"{gr!r} has a loop")
    if any(gr.weights):
        raise GraphError(f"{gr!r} has a positive vertex weight")
    if any(v < 3 for v in gr.valences()):
        raise GraphError(f"{gr!r} has a vertex of valence below 3")


def normalize(gr: StableGraph, ordering=None) -> tuple[int, Generator] | None:
    """Reduce ``[gr, ordering]`` to ``sign * basis element``, or ``None`` if zero.

    ``ordering[i]`` is the edge in position ``i``; the default is edge-index order.
    """
    check_gc_graph(gr)
    m = gr.n_edges
    ordering = list(range(m)) if ordering is None else list(ordering)
    if sorted(ordering) != list(range(m)):
        raise GraphError("ordering is not a permutation of the edges")
    if gr.has_parallel_edges():
        return None
    canon, ck = canonical_form(gr)
    if automorphisms(canon).has_odd_edge_automorphism:
        return None
    g = genus(gr)
    sign = permutation_sign([ck.edge_map[e] for e in ordering])
    return sign, Generator(ck.key, canon, g, m - 2 * g)


def boundary(x: Generator) -> ChainVector:
    """Alternating sum of single-edge contractions."""
    out = ChainVector()
    for i in range(x.graph.n_edges):
        if x.graph.is_loop(i):
            continue
        term = normalize(contract_index(x.graph, i))
        if term is not None:
            out.add(term[1], (-1) ** i * term[0])
    return out


def vertex_splittings(gr: StableGraph, v: int):
    """Graphs obtained by splitting vertex ``v`` along a partition of its
    half-edges into two blocks of size >= 2, joined by a new last edge."""
    hs = gr.half_edges_at(v)
    rest = hs[1:]  # hs[0] always stays at v
    n = gr.n_vertices
    for mask in range(1 << len(rest)):
        moved = {h for b, h in enumerate(rest) if not (mask >> b) & 1}
        if len(moved) < 2 or len(hs) - len(moved) < 2:
            continue
        edges = []
        for i, (a, b) in enumerate(gr.edges):
            a = n if 2 * i in moved else a
            b = n if 2 * i + 1 in moved else b
            edges.append((a, b))
        edges.append((v, n))
        yield StableGraph(gr.weights + (0,), tuple(edges))


def dual_coboundary(x: Generator) -> ChainVector:
    """Vertex-splitting differential; raises the degree by one."""
    out = ChainVector()
    sign = (-1) ** x.graph.n_edges
    for v in range(x.graph.n_vertices):
        for split in vertex_splittings(x.graph, v):
            term = normalize(split)
            if term is not None:
                out.add(term[1], sign * term[0])
    return out


def wheel(g: int) -> StableGraph:
    """Hub 0 with spokes to rim vertices 1..g, then the rim cycle.

    The edge order (spokes, then rim, each cyclically) is the distinguished
    orientation.
    """
    if g < 3:
        raise GraphError("wheels need at least 3 spokes")
    spokes = [(0, i) for i in range(1, g + 1)]
    rim = [(i, i % g + 1) for i in range(1, g + 1)]
    return StableGraph((0,) * (g + 1), tuple(spokes + rim))


def wheel_chain(g: int) -> ChainVector:
    out = ChainVector()
    term = normalize(wheel(g))
    if term is not None:
        out.add(term[1], term[0])
    return out


def gc_degree_range(g: int) -> range:
    """Degrees with 2 <= |V| <= 2g - 2."""
    return range(1 - g, g - 2)


@lru_cache(maxsize=None)
def gc_basis(g: int, k: int) -> tuple[Generator, ...]:
    out = []
    for gr in enumerate_gc_generators(g, k):
        term = normalize(gr)
        if term is not None:
            out.append(term[1])
    return tuple(out)


def _matrix(src, dst, op) -> SparseIntMatrix:
    index = {x: i for i, x in enumerate(dst)}
    entries = {}
    for col, x in enumerate(src):
        for y, c in op(x).items():
            if c.denominator != 1:
                raise ArithmeticError("non-integral differential coefficient")
            entries[(index[y], col)] = int(c)
    return SparseIntMatrix(len(dst), len(src), entries)


def boundary_matrix(g: int, k: int) -> SparseIntMatrix:
    """Matrix of the boundary from degree ``k`` to ``k - 1``."""
    return _matrix(gc_basis(g, k), gc_basis(g, k - 1), boundary)


def coboundary_matrix(g: int, k: int) -> SparseIntMatrix:
    """Matrix of the vertex-splitting differential from degree ``k`` to ``k + 1``."""
    return _matrix(gc_basis(g, k), gc_basis(g, k + 1), dual_coboundary)


def build_graph_complex(g: int, degrees=None) -> GradedChainComplex:
    if g < 2:
        raise ValueError("genus must be at least 2")
    degs = list(degrees) if degrees is not None else list(gc_degree_range(g))
    bases = {k: list(gc_basis(g, k)) for k in degs}
    diffs = {k: boundary_matrix(g, k) for k in degs if k - 1 in bases}
    return GradedChainComplex(bases, diffs, name=f"G^({g})")


def coboundary_complex(g: int, degrees=None) -> GradedChainComplex:
    """The vertex-splitting cochain complex, stored with ``differentials[k]``
    mapping degree ``k`` to ``k + 1``."""
    degs = list(degrees) if degrees is not None else list(gc_degree_range(g))
    bases = {k: list(gc_basis(g, k)) for k in degs}
    diffs = {k: coboundary_matrix(g, k) for k in degs if k + 1 in bases}
    return GradedChainComplex(bases, diffs, name=f"dual G^({g})")


def chain_to_column(vec: ChainVector, basis) -> list[Fraction]:
    index = {x: i for i, x in enumerate(basis)}
    col = [Fraction(0)] * len(basis)
    for x, c in vec.items():
        col[index[x]] = c
    return col
