"""Symmetric Delta-complexes and their cellular chains.

A symmetric Delta-complex is stored by orbits: for each dimension ``p`` a list
of orbit representatives under the symmetric group on ``[p] = {0..p}``, each
with its full stabilizer.  An element of ``X_p`` is a pair ``(orbit, sigma)``
standing for ``sigma^* rep``; two pairs name the same element iff the
permutations differ by left multiplication with a stabilizer element, and we
store the lexicographically smallest one.

Permutations are tuples ``i -> perm[i]`` and compose as ``(a*b)[i] = a[b[i]]``.
Injections act contravariantly: ``(theta o phi)^* = phi^* theta^*``.

Face data for a representative is ``d_i(rep) = w^*(rep_t)`` for a target orbit
``t`` one dimension down and a witness permutation ``w``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from typing import Callable, Hashable

from .canonical import (
    automorphisms,
    canonical_form,
    induced_edge_permutation,
    permutation_sign,
)
from .enumeration import enumerate_jg
from .exactla import ChainComplexError, GradedChainComplex, SparseIntMatrix
from .graphs import StableGraph, contract_index

Perm = tuple[int, ...]


def compose(a: Perm, b: Perm) -> Perm:
    return tuple(a[x] for x in b)


def inverse(a: Perm) -> Perm:
    inv = [0] * len(a)
    for i, x in enumerate(a):
        inv[x] = i
    return tuple(inv)


def identity(n: int) -> Perm:
    return tuple(range(n))


def adjacent_transposition(p: int, j: int) -> Perm:
    """The bijection of ``[p]`` swapping ``j - 1`` and ``j``."""
    t = list(range(p + 1))
    t[j - 1], t[j] = j, j - 1
    return tuple(t)


def group_closure(gens, n: int) -> frozenset[Perm]:
    ident = identity(n)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = compose(s, x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


@dataclass(frozen=True)
class Orbit:
    label: Hashable
    stabilizer: frozenset[Perm]

    @property
    def alternating(self) -> bool:
        """Whether the stabilizer consists of even permutations only."""
        return all(permutation_sign(s) > 0 for s in self.stabilizer)

    @property
    def stabilizer_order(self) -> int:
        return len(self.stabilizer)


@dataclass(frozen=True, order=True)
class Element:
    dim: int
    orbit: int
    perm: Perm


class RelationError(ChainComplexError):
    pass


class SymmetricDeltaComplex:
    """Finite symmetric Delta-complex given by orbits and face data.

    ``face(p, o, i)`` returns ``(t, w)`` with ``d_i(rep_{p,o}) = w^* rep_{p-1,t}``.
    """

    def __init__(self, orbits: dict[int, list[Orbit]], face: Callable[[int, int, int], tuple[int, Perm]],
                 name: str = ""):
        self.orbits = orbits
        self._face = lru_cache(maxsize=None)(face)
        self.name = name

    @property
    def top(self) -> int:
        return max((p for p, o in self.orbits.items() if o), default=-1)

    def dims(self) -> list[int]:
        return list(range(-1, self.top + 1))

    def orbits_in(self, p: int) -> list[Orbit]:
        return self.orbits.get(p, [])

    def face_eval(self, p: int, o: int, i: int) -> tuple[int, Perm]:
        if not 0 <= i <= p:
            raise IndexError(f"face index {i} outside [0, {p}]")
        return self._face(p, o, i)

    # element-level operations

    def element(self, p: int, o: int, perm: Perm | None = None) -> Element:
        perm = identity(p + 1) if perm is None else tuple(perm)
        stab = self.orbits[p][o].stabilizer
        return Element(p, o, min(compose(s, perm) for s in stab))

    def elements(self, p: int) -> list[Element]:
        out = set()
        for o in range(len(self.orbits_in(p))):
            for perm in permutations(range(p + 1)):
                out.add(self.element(p, o, perm))
        return sorted(out)

    def permute(self, x: Element, perm: Perm) -> Element:
        """``perm^* x``."""
        return self.element(x.dim, x.orbit, compose(x.perm, perm))

    def transposition_eval(self, p: int, o: int, j: int) -> tuple[int, int]:
        """``tau_j`` on the representative stays in its orbit and acts by -1
        on the cellular chain of that orbit."""
        if not 1 <= j <= p:
            raise IndexError(f"transposition index {j} outside [1, {p}]")
        return o, -1

    def transposition(self, x: Element, j: int) -> Element:
        """``tau_j x`` for the bijection ``(j, j - 1)``."""
        return self.permute(x, adjacent_transposition(x.dim, j))

    def _face_raw(self, p: int, o: int, sigma: Perm, i: int) -> Element:
        # sigma o delta^i = delta^{sigma(i)} o rest
        si = sigma[i]
        rest = tuple(v - (v > si) for k, v in enumerate(sigma) if k != i)
        t, w = self.face_eval(p, o, si)
        return self.element(p - 1, t, compose(w, rest))

    def face(self, x: Element, i: int) -> Element:
        """``d_i x``."""
        if not 0 <= i <= x.dim:
            raise IndexError(f"face index {i} outside [0, {x.dim}]")
        return self._face_raw(x.dim, x.orbit, x.perm, i)

    def restrict(self, x: Element, theta) -> Element:
        """``theta^* x`` for an injection ``theta: [q] -> [p]``."""
        theta = tuple(theta)
        p = x.dim
        missing = sorted(set(range(p + 1)) - set(theta))
        if not missing:
            return self.permute(x, theta)
        j = missing[-1]
        y = self.face(x, j)
        return self.restrict(y, tuple(v - (v > j) for v in theta))

    # consistency checks

    def check_relations(self, elements_per_orbit: int | None = None, seed: int = 0) -> int:
        """Check well-definedness of faces on stabilizer cosets, the simplicial
        identities and the four mixed relations between faces and the
        transpositions ``tau_j``.  Returns the number of elements examined.

        With ``elements_per_orbit=None`` every element is checked; otherwise
        the representative plus that many random translates per orbit.
        """
        rng = random.Random(seed)
        count = 0
        for p in self.dims():
            if p < 0:
                continue
            for o, orb in enumerate(self.orbits_in(p)):
                if elements_per_orbit is None:
                    perms = list(permutations(range(p + 1)))
                else:
                    perms = [identity(p + 1)]
                    for _ in range(elements_per_orbit):
                        q = list(range(p + 1))
                        rng.shuffle(q)
                        perms.append(tuple(q))
                for perm in perms:
                    count += 1
                    x = self.element(p, o, perm)
                    for s in orb.stabilizer:
                        for i in range(p + 1):
                            if self._face_raw(p, o, compose(s, perm), i) != self.face(x, i):
                                raise RelationError(f"{self.name}: d_{i} not constant on the class of {x}")
                    for i in range(p + 1):
                        for j in range(i + 1, p + 1):
                            if p >= 1 and self.face(self.face(x, j), i) != self.face(self.face(x, i), j - 1):
                                raise RelationError(f"{self.name}: d_{i} d_{j} != d_{j - 1} d_{i} on {x}")
                    for j in range(1, p + 1):
                        tx = self.transposition(x, j)
                        for i in range(p + 1):
                            lhs = self.face(tx, i)
                            if i > j:
                                rhs = self.transposition(self.face(x, i), j)
                            elif i == j:
                                rhs = self.face(x, i - 1)
                            elif i == j - 1:
                                rhs = self.face(x, i + 1)
                            else:
                                rhs = self.transposition(self.face(x, i), j - 1)
                            if lhs != rhs:
                                raise RelationError(f"{self.name}: d_{i} tau_{j} relation fails on {x}")
        return count


def cellular_chain_complex(x: SymmetricDeltaComplex) -> GradedChainComplex:
    """Augmented cellular chains with rational coefficients.

    The basis in degree ``p`` is the orbits with alternating stabilizers; a
    face landing on an orbit whose stabilizer has an odd element contributes 0.
    """
    bases: dict[int, list] = {}
    index: dict[int, dict[int, int]] = {}
    for p in x.dims():
        keep = [o for o, orb in enumerate(x.orbits_in(p)) if orb.alternating]
        bases[p] = [x.orbits[p][o].label for o in keep]
        index[p] = {o: i for i, o in enumerate(keep)}
    diffs = {}
    for p in x.dims():
        if p < 0:
            continue
        entries: dict[tuple[int, int], int] = {}
        for o, col in index[p].items():
            for i in range(p + 1):
                t, w = x.face_eval(p, o, i)
                if t in index[p - 1]:
                    key = (index[p - 1][t], col)
                    entries[key] = entries.get(key, 0) + (-1) ** i * permutation_sign(w)
        diffs[p] = SparseIntMatrix(len(bases[p - 1]), len(bases[p]), entries)
    c = GradedChainComplex(bases, diffs, name=f"C({x.name})")
    c.check_squares_zero()
    return c


# small fixtures

def half_interval() -> SymmetricDeltaComplex:
    """One vertex, one edge folded onto itself by the flip of [1]."""
    orbits = {
        -1: [Orbit("*", frozenset({()}))],
        0: [Orbit("v", frozenset({(0,)}))],
        1: [Orbit("e", frozenset({(0, 1), (1, 0)}))],
    }

    def face(p, o, i):
        return 0, identity(p)

    return SymmetricDeltaComplex(orbits, face, name="half interval")


def representable(p: int) -> SymmetricDeltaComplex:
    """The functor of injections into ``[p]``: a p-simplex.  Orbits are the
    nonempty subsets of ``[p]`` (plus the empty set in dimension -1)."""
    subsets = {q: [] for q in range(-1, p + 1)}
    for mask in range(1 << (p + 1)):
        s = tuple(i for i in range(p + 1) if (mask >> i) & 1)
        subsets[len(s) - 1].append(s)
    for q in subsets:
        subsets[q].sort()
    where = {s: (q, i) for q, ss in subsets.items() for i, s in enumerate(ss)}
    orbits = {q: [Orbit(s, frozenset({identity(q + 1)})) for s in ss] for q, ss in subsets.items()}

    def face(q, o, i):
        s = subsets[q][o]
        return where[s[:i] + s[i + 1:]][1], identity(q)

    return SymmetricDeltaComplex(orbits, face, name=f"I(-,[{p}])")


# the tropical moduli space

def _edge_stabilizer(gr: StableGraph) -> frozenset[Perm]:
    gens = [tuple(induced_edge_permutation(h)) for h in automorphisms(gr).generators]
    return group_closure(gens, gr.n_edges)


@lru_cache(maxsize=None)
def delta_g(g: int) -> SymmetricDeltaComplex:
    """Orbit of dimension ``p`` per stable genus-``g`` graph with ``p + 1``
    edges; the representative labels edge ``i`` of the canonical graph by ``i``.
    Faces contract one edge and canonicalize; the witness is the induced
    relabeling of the surviving edges."""
    graphs: dict[int, list[StableGraph]] = {}
    for gr in enumerate_jg(g):
        graphs.setdefault(gr.n_edges - 1, []).append(gr)
    keys = {p: {canonical_form(gr)[1].key: o for o, gr in enumerate(gs)} for p, gs in graphs.items()}
    orbits = {p: [Orbit(canonical_form(gr)[1].key, _edge_stabilizer(gr)) for gr in gs]
              for p, gs in graphs.items()}

    def face(p, o, i):
        gr = graphs[p][o]
        _, ck = canonical_form(contract_index(gr, i))
        return keys[p - 1][ck.key], ck.edge_map

    x = SymmetricDeltaComplex(orbits, face, name=f"Delta_{g}")
    x.graphs = graphs
    return x


def delta_g_graph(x: SymmetricDeltaComplex, p: int, label: str) -> StableGraph:
    for gr in x.graphs[p]:
        if canonical_form(gr)[1].key == label:
            return gr
    raise KeyError(label)


def is_a_graph(gr: StableGraph) -> bool:
    """Loopless with all weights zero."""
    return gr.loop_count() == 0 and not any(gr.weights)


def split_AB(g: int) -> tuple[GradedChainComplex, GradedChainComplex]:
    """Split the cellular chains of Delta_g into the loopless weight-0 part A
    and the part B spanned by graphs with a loop or a positive weight."""
    x = delta_g(g)
    c = cellular_chain_complex(x)
    side = {}
    for p, labels in c.bases.items():
        for i, lab in enumerate(labels):
            side[(p, i)] = is_a_graph(delta_g_graph(x, p, lab))
    parts = []
    for want in (True, False):
        bases, remap = {}, {}
        for p, labels in c.bases.items():
            idx = [i for i in range(len(labels)) if side[(p, i)] == want]
            bases[p] = [labels[i] for i in idx]
            remap[p] = {i: n for n, i in enumerate(idx)}
        diffs = {}
        for p, m in c.differentials.items():
            entries = {}
            for (r, col), v in m.entries.items():
                if side[(p - 1, r)] != side[(p, col)]:
                    raise ChainComplexError(
                        f"boundary of {c.bases[p][col]} meets {c.bases[p - 1][r]} across the A/B split")
                if side[(p, col)] == want:
                    entries[(remap[p - 1][r], remap[p][col])] = v
            diffs[p] = SparseIntMatrix(len(bases[p - 1]), len(bases[p]), entries)
        parts.append(GradedChainComplex(bases, diffs, name=f"{'AB'[not want]}^({g})"))
    return parts[0], parts[1]


def shift_check(g: int) -> dict:
    """Compare the A-part of the Delta_g cellular chains with the graph complex
    shifted by ``2g - 1``: equal canonical bases and equal matrices."""
    from .graphcomplex import build_graph_complex

    a, _ = split_AB(g)
    gc = build_graph_complex(g)
    shift = 2 * g - 1
    report = {"genus": g, "shift": shift, "degrees": {}, "ok": True, "mismatch": None}
    for k in sorted(set(gc.degrees()) | {p - shift for p in a.degrees()}):
        p = k + shift
        left = [x.key for x in gc.bases.get(k, [])]
        right = list(a.bases.get(p, []))
        entry = {"gc_dim": len(left), "a_dim": len(right), "bases_equal": sorted(left) == sorted(right)}
        if entry["bases_equal"] and k - 1 in gc.bases and p - 1 in a.bases:
            lo = [x.key for x in gc.bases[k - 1]]
            rpos = {lab: i for i, lab in enumerate(a.bases[p - 1])}
            cpos = {lab: i for i, lab in enumerate(right)}
            m1 = gc.differential(k)
            m2 = a.differential(p)
            moved = {(rpos[lo[r]], cpos[left[c]]): v for (r, c), v in m1.entries.items()}
            entry["matrices_equal"] = moved == m2.entries
        else:
            entry["matrices_equal"] = entry["bases_equal"]
        if not (entry["bases_equal"] and entry["matrices_equal"]):
            report["ok"] = False
            if report["mismatch"] is None:
                extra = sorted(set(left) ^ set(right))
                report["mismatch"] = {"degree": k, "generator": extra[0] if extra else None}
        report["degrees"][k] = entry
    return report


# barycentric subdivision

class OrdinaryDeltaComplex:
    """Augmented semi-simplicial set: ``faces[q][s][i]`` is the index of
    ``d_i`` of simplex ``s`` in dimension ``q - 1``."""

    def __init__(self, simplices: dict[int, list], faces: dict[int, list[tuple[int, ...]]], name: str = ""):
        self.simplices = simplices
        self.faces = faces
        self.name = name

    def count(self, q: int) -> int:
        return len(self.simplices.get(q, ()))

    def dims(self) -> list[int]:
        return sorted(self.simplices)

    def check_identities(self) -> None:
        for q, fs in self.faces.items():
            if q < 1:
                continue
            for s, f in enumerate(fs):
                for i in range(q + 1):
                    for j in range(i + 1, q + 1):
                        if self.faces[q - 1][f[j]][i] != self.faces[q - 1][f[i]][j - 1]:
                            raise RelationError(f"{self.name}: d_{i} d_{j} != d_{j - 1} d_{i} on simplex {s}")

    def chain_complex(self) -> GradedChainComplex:
        bases = {q: list(self.simplices[q]) for q in self.dims()}
        diffs = {}
        for q in self.dims():
            if q - 1 not in bases:
                continue
            entries: dict[tuple[int, int], int] = {}
            for s, f in enumerate(self.faces[q]):
                for i, t in enumerate(f):
                    entries[(t, s)] = entries.get((t, s), 0) + (-1) ** i
            diffs[q] = SparseIntMatrix(len(bases[q - 1]), len(bases[q]), entries)
        return GradedChainComplex(bases, diffs, name=self.name)


def circle() -> OrdinaryDeltaComplex:
    return OrdinaryDeltaComplex({-1: ["*"], 0: ["v"], 1: ["e"]}, {0: [(0,)], 1: [(0, 0)]}, "circle")


def point_complex() -> OrdinaryDeltaComplex:
    return OrdinaryDeltaComplex({-1: ["*"], 0: ["v"]}, {0: [(0,)]}, "point")


def _surjections(n: int, k: int):
    for f in product(range(k), repeat=n):
        if len(set(f)) == k:
            yield f


def barycentric_subdivision(x: SymmetricDeltaComplex) -> OrdinaryDeltaComplex:
    """q-simplices are classes of (orbit rep in X_p, flag A_0 < ... < A_q = [p])
    modulo the stabilizer; a flag is stored as the map sending each vertex
    ``e`` of ``[p]`` to the first ``j`` with ``e`` in ``A_j``."""

    def normal(p: int, o: int, f: tuple[int, ...]) -> tuple:
        stab = x.orbits[p][o].stabilizer
        # s acts on flags by images: f -> f o s^{-1}
        return (p, o, min(tuple(f[s_inv[e]] for e in range(p + 1))
                          for s_inv in (inverse(s) for s in stab)))

    simplices: dict[int, list] = {-1: [(-1, o, ()) for o in range(len(x.orbits_in(-1)))]}
    for p in x.dims():
        if p < 0:
            continue
        for q in range(p + 1):
            found = simplices.setdefault(q, [])
            seen = set()
            for o in range(len(x.orbits_in(p))):
                for f in _surjections(p + 1, q + 1):
                    s = normal(p, o, f)
                    if s not in seen:
                        seen.add(s)
                        found.append(s)
    for q in simplices:
        simplices[q].sort()
    where = {q: {s: i for i, s in enumerate(ss)} for q, ss in simplices.items()}

    def drop(q: int, s: tuple, i: int) -> tuple:
        p, o, f = s
        if i < q:
            return normal(p, o, tuple(v - (v > i) for v in f))
        support = tuple(e for e in range(p + 1) if f[e] < q)
        y = x.restrict(x.element(p, o), support)
        if y.dim < 0:
            return (-1, y.orbit, ())
        g = tuple(f[e] for e in support)
        inv = inverse(y.perm)
        return normal(y.dim, y.orbit, tuple(g[inv[e]] for e in range(y.dim + 1)))

    faces: dict[int, list[tuple[int, ...]]] = {}
    for q, ss in simplices.items():
        if q < 0:
            continue
        faces[q] = [tuple(where[q - 1][drop(q, s, i)] for i in range(q + 1)) for s in ss]
    return OrdinaryDeltaComplex(simplices, faces, name=f"sd({x.name})")


def ordinary_simplicial_homology(y: OrdinaryDeltaComplex, method: str = "exact") -> dict[int, int]:
    """Reduced rational homology (the complex is augmented)."""
    from .exactla import homology_dims

    return homology_dims(y.chain_complex(), method)
