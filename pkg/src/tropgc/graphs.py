"""Weighted multigraphs in half-edge form.

A graph stores one ``(u, v)`` pair per edge; edge ``i`` owns the half-edges
``2*i`` (at ``u``) and ``2*i + 1`` (at ``v``).  A loop is ``(v, v)`` and parallel
edges are simply repeated pairs.  An edge is named by its smaller half-edge id.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class StableGraph:
    weights: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        n = len(self.weights)
        if any(w < 0 for w in self.weights):
            raise GraphError("negative vertex weight")
        for u, v in self.edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) references a missing vertex")

    @classmethod
    def from_edges(cls, weights: Iterable[int], edges: Iterable[tuple[int, int]]) -> "StableGraph":
        return cls(tuple(int(w) for w in weights), tuple((int(u), int(v)) for u, v in edges))

    @property
    def n_vertices(self) -> int:
        return len(self.weights)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    # half-edge view
    @property
    def half_edges(self) -> range:
        return range(2 * len(self.edges))

    @staticmethod
    def partner(h: int) -> int:
        return h ^ 1

    def incidence(self, h: int) -> int:
        return self.edges[h >> 1][h & 1]

    def half_edges_at(self, v: int) -> list[int]:
        return [h for h in self.half_edges if self.incidence(h) == v]

    def is_loop(self, i: int) -> bool:
        u, v = self.edges[i]
        return u == v

    def valence(self, v: int) -> int:
        return sum((a == v) + (b == v) for a, b in self.edges)

    def valences(self) -> list[int]:
        val = [0] * self.n_vertices
        for u, v in self.edges:
            val[u] += 1
            val[v] += 1
        return val

    def loop_count(self) -> int:
        return sum(1 for u, v in self.edges if u == v)

    def has_parallel_edges(self) -> bool:
        c = Counter((min(u, v), max(u, v)) for u, v in self.edges if u != v)
        return any(m > 1 for m in c.values())

    def multiplicity(self, i: int) -> int:
        """Number of edges (including ``i``) with the same endpoints as edge ``i``."""
        a, b = sorted(self.edges[i])
        return sum(1 for u, v in self.edges if sorted((u, v)) == [a, b])

    def is_connected(self) -> bool:
        n = self.n_vertices
        if n == 0:
            return False
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == n

    def to_record(self) -> dict:
        return {"genus": genus(self), "weights": list(self.weights),
                "edges": [list(e) for e in self.edges]}

    def __repr__(self) -> str:
        return f"StableGraph(w={list(self.weights)}, E={list(self.edges)})"


def first_betti(g: StableGraph) -> int:
    return g.n_edges - g.n_vertices + 1


def genus(g: StableGraph) -> int:
    return first_betti(g) + sum(g.weights)


def is_stable(g: StableGraph) -> bool:
    return all(2 * w - 2 + val > 0 for w, val in zip(g.weights, g.valences()))


def check_stable(g: StableGraph, target_genus: int | None = None) -> None:
    if not g.is_connected():
        raise GraphError(f"{g!r} is not connected")
    if not is_stable(g):
        raise GraphError(f"{g!r} is not stable")
    if target_genus is not None and genus(g) != target_genus:
        raise GraphError(f"{g!r} has genus {genus(g)}, expected {target_genus}")


def edge_id(i: int) -> int:
    """Edge id (smaller half-edge) of edge number ``i``."""
    return 2 * i


def edge_index(g: StableGraph, e: int) -> int:
    if e < 0 or e % 2 or e // 2 >= g.n_edges:
        raise GraphError(f"invalid edge id {e} for a graph with {g.n_edges} edges")
    return e // 2


def contract(g: StableGraph, e: int) -> StableGraph:
    """Collapse the edge with id ``e``.

    Surviving edges keep their relative order; the merged vertex takes the
    smaller of the two vertex indices.
    """
    return contract_index(g, edge_index(g, e))


def contract_index(g: StableGraph, i: int) -> StableGraph:
    if not 0 <= i < g.n_edges:
        raise GraphError(f"edge {i} out of range")
    u, v = g.edges[i]
    rest = g.edges[:i] + g.edges[i + 1:]
    if u == v:
        w = list(g.weights)
        w[u] += 1
        return StableGraph(tuple(w), rest)
    keep, drop = min(u, v), max(u, v)

    def relabel(x: int) -> int:
        if x == drop:
            x = keep
        return x - 1 if x > drop else x

    w = list(g.weights)
    w[keep] += w[drop]
    del w[drop]
    return StableGraph(tuple(w), tuple((relabel(a), relabel(b)) for a, b in rest))


def point(g: int) -> StableGraph:
    """The edgeless graph: one vertex of weight ``g``."""
    return StableGraph((g,), ())


def theta() -> StableGraph:
    return StableGraph((0, 0), ((0, 1), (0, 1), (0, 1)))


def dumbbell() -> StableGraph:
    return StableGraph((0, 0), ((0, 0), (0, 1), (1, 1)))


def complete_graph(n: int) -> StableGraph:
    return StableGraph((0,) * n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


# JSONL records: {"genus": int, "weights": [...], "edges": [[u, v], ...]}

def graph_from_record(rec: dict) -> StableGraph:
    g = StableGraph.from_edges(rec["weights"], (tuple(e) for e in rec["edges"]))
    if "genus" in rec and genus(g) != rec["genus"]:
        raise GraphError(f"record genus {rec['genus']} != computed genus {genus(g)}")
    return g


def dumps_jsonl(graphs: Iterable[StableGraph]) -> str:
    return "".join(json.dumps(g.to_record(), separators=(",", ":")) + "\n" for g in graphs)


def loads_jsonl(text: str) -> Iterator[StableGraph]:
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            yield graph_from_record(json.loads(line))
