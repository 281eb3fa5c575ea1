"""Exact sparse linear algebra over the rationals.

Ranks come from fraction-free sparse elimination on Python integers, with rows
divided by their content after each update so entries stay small.  Pivots are
chosen Markowitz-style (sparsest column, then sparsest row in it, lowest index
on ties), which keeps fill-in low on boundary matrices.  A separate mod-p
elimination serves as a fast filter and as an oracle.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Hashable, Iterable, Sequence


class ChainComplexError(ArithmeticError):
    pass


class SparseIntMatrix:
    """Coordinate-format integer matrix with no stored zeros."""

    def __init__(self, rows: int, cols: int, entries: dict[tuple[int, int], int] | None = None):
        self.rows = rows
        self.cols = cols
        self.entries: dict[tuple[int, int], int] = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r}, {c}) outside a {rows}x{cols} matrix")
            if v:
                self.entries[(r, c)] = int(v)

    @classmethod
    def from_triplets(cls, rows: int, cols: int, triplets: Iterable[tuple[int, int, int]]):
        acc: dict[tuple[int, int], int] = {}
        for r, c, v in triplets:
            acc[(r, c)] = acc.get((r, c), 0) + v
        return cls(rows, cols, acc)

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]]):
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        return cls(rows, cols, {(r, c): v for r, row in enumerate(dense) for c, v in enumerate(row) if v})

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def __getitem__(self, rc: tuple[int, int]) -> int:
        return self.entries.get(rc, 0)

    def __eq__(self, other) -> bool:
        return isinstance(other, SparseIntMatrix) and self.shape == other.shape and self.entries == other.entries

    def __neg__(self) -> "SparseIntMatrix":
        return SparseIntMatrix(self.rows, self.cols, {k: -v for k, v in self.entries.items()})

    def __repr__(self) -> str:
        return f"SparseIntMatrix({self.rows}x{self.cols}, nnz={self.nnz})"

    def transpose(self) -> "SparseIntMatrix":
        return SparseIntMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def triplets(self) -> list[tuple[int, int, int]]:
        """Entries sorted by (col, row)."""
        return [(r, c, v) for (r, c), v in sorted(self.entries.items(), key=lambda kv: (kv[0][1], kv[0][0]))]

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def row_dicts(self) -> dict[int, dict[int, int]]:
        rows: dict[int, dict[int, int]] = {}
        for (r, c), v in self.entries.items():
            rows.setdefault(r, {})[c] = v
        return rows

    def __matmul__(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        right = other.row_dicts()
        acc: dict[tuple[int, int], int] = {}
        for (r, k), v in self.entries.items():
            for c, w in right.get(k, {}).items():
                acc[(r, c)] = acc.get((r, c), 0) + v * w
        return SparseIntMatrix(self.rows, other.cols, acc)

    def is_zero(self) -> bool:
        return not self.entries

    def dumps(self) -> str:
        lines = [f"{self.rows} {self.cols} {self.nnz}"]
        lines += [f"{r} {c} {v}" for r, c, v in self.triplets()]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "SparseIntMatrix":
        lines = [ln.split() for ln in text.splitlines() if ln.strip()]
        rows, cols, nnz = map(int, lines[0])
        if len(lines) - 1 != nnz:
            raise ValueError(f"header announces {nnz} entries, found {len(lines) - 1}")
        return cls.from_triplets(rows, cols, ((int(r), int(c), int(v)) for r, c, v in lines[1:]))


def _content(row: dict[int, int]) -> int:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    return g


def _eliminate(rows: dict[int, dict[int, int]], modulus: int | None, markowitz_rows: bool) -> int:
    cols: dict[int, set[int]] = {}
    for r, row in rows.items():
        for c in row:
            cols.setdefault(c, set()).add(r)
    heap = [(len(rs), c) for c, rs in cols.items()]
    heapq.heapify(heap)
    rank = 0
    while heap:
        cnt, c = heapq.heappop(heap)
        rs = cols.get(c)
        if not rs:
            continue
        if cnt != len(rs):
            heapq.heappush(heap, (len(rs), c))
            continue
        if markowitz_rows:
            p = min(rs, key=lambda r: (len(rows[r]), r))
        else:
            p = min(rs)
        prow = rows.pop(p)
        for cc in prow:
            cols[cc].discard(p)
        a = prow[c]
        rank += 1
        for r in list(cols[c]):
            row = rows[r]
            b = row[c]
            if modulus is None:
                g = gcd(a, b)
                fa, fb = a // g, b // g
                if fa != 1:
                    for k in row:
                        row[k] *= fa
            else:
                fa, fb = 1, b * pow(a, -1, modulus) % modulus
            for k, v in prow.items():
                nv = row.get(k, 0) - fb * v
                if modulus is not None:
                    nv %= modulus
                if nv:
                    if k not in row:
                        cols[k].add(r)
                        heapq.heappush(heap, (len(cols[k]), k))
                    row[k] = nv
                elif k in row:
                    del row[k]
                    cols[k].discard(r)
                    if k != c:
                        heapq.heappush(heap, (len(cols[k]), k))
            if not row:
                del rows[r]
            elif modulus is None:
                g = _content(row)
                if g > 1:
                    for k in row:
                        row[k] //= g
        del cols[c]
        for cc in prow:
            if cc != c and cols.get(cc):
                heapq.heappush(heap, (len(cols[cc]), cc))
    return rank


def rank_exact(m: SparseIntMatrix) -> int:
    """Rank over Q."""
    # eliminate along the shorter side
    src = m if m.rows >= m.cols else m.transpose()
    return _eliminate(src.row_dicts(), None, True)


DEFAULT_PRIME = 2147483629  # a 31-bit prime


def random_prime(rng: random.Random | None = None, bits: int = 31) -> int:
    rng = rng or random.Random()
    while True:
        p = rng.randrange(2 ** (bits - 1), 2 ** bits) | 1
        if _is_prime(p):
            return p


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def rank_mod_p(m: SparseIntMatrix, p: int = DEFAULT_PRIME) -> int:
    """Rank over F_p; never exceeds the rational rank."""
    rows: dict[int, dict[int, int]] = {}
    for (r, c), v in m.entries.items():
        v %= p
        if v:
            rows.setdefault(r, {})[c] = v
    return _eliminate(rows, p, False)


def in_column_space(m: SparseIntMatrix, b: Sequence) -> bool:
    """Whether ``b`` (rational entries) lies in the Q-span of the columns of ``m``."""
    if len(b) != m.rows:
        raise ValueError(f"vector of length {len(b)} against {m.rows} rows")
    fr = [Fraction(x) for x in b]
    if not any(fr):
        return True
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    aug = dict(m.entries)
    for r, x in enumerate(fr):
        if x:
            aug[(r, m.cols)] = int(x * den)
    return rank_exact(SparseIntMatrix(m.rows, m.cols + 1, aug)) == rank_exact(m)


@dataclass
class GradedChainComplex:
    """Per-degree bases and boundary matrices.

    ``differentials[k]`` maps degree ``k`` to degree ``k - 1``: it has
    ``len(bases[k-1])`` rows and ``len(bases[k])`` columns.
    """

    bases: dict[int, list[Hashable]]
    differentials: dict[int, SparseIntMatrix] = field(default_factory=dict)
    name: str = ""

    def degrees(self) -> list[int]:
        return sorted(self.bases)

    def dim(self, k: int) -> int:
        return len(self.bases.get(k, ()))

    def differential(self, k: int) -> SparseIntMatrix:
        d = self.differentials.get(k)
        if d is None:
            return SparseIntMatrix(self.dim(k - 1), self.dim(k))
        return d

    def check_squares_zero(self) -> None:
        for k in self.degrees():
            prod = self.differential(k) @ self.differential(k + 1)
            if not prod.is_zero():
                (r, c), v = next(iter(sorted(prod.entries.items())))
                raise ChainComplexError(
                    f"{self.name}: d_{k} d_{k + 1} != 0, entry {v} at "
                    f"({self.bases[k - 1][r]!r}, {self.bases[k + 1][c]!r})")

    def euler_characteristic(self) -> int:
        return sum((-1) ** (k % 2) * self.dim(k) for k in self.degrees())


def rank_checked(m: SparseIntMatrix, prime: int | None = None, retries: int = 3) -> int:
    """Exact rank, cross-checked against mod-p ranks (retrying new primes)."""
    r = rank_exact(m)
    if m.nnz == 0:
        return r
    rng = random.Random(prime or 0)
    p = prime or DEFAULT_PRIME
    for _ in range(retries):
        rp = rank_mod_p(m, p)
        if rp > r:
            raise ChainComplexError(f"mod-{p} rank {rp} exceeds rational rank {r}")
        if rp == r:
            return r
        p = random_prime(rng)
    raise ChainComplexError(f"mod-p rank never reached the rational rank {r}")


@dataclass
class HomologyRow:
    degree: int
    dim_chains: int
    rank_in: int  # rank of the differential arriving in this degree
    rank_out: int  # rank of the differential leaving this degree
    dim_homology: int


def homology_table(c: GradedChainComplex, method: str = "exact", prime: int | None = None,
                   check: bool = True) -> list[HomologyRow]:
    """Rational homology per degree.

    ``method`` is ``"exact"`` (rational rank, mod-p cross-check) or ``"modp"``
    (ranks over F_p only; a lower bound on rational rank).
    """
    if check:
        c.check_squares_zero()
    if method == "exact":
        def rk(m): return rank_checked(m, prime)
    elif method == "modp":
        def rk(m): return rank_mod_p(m, prime or DEFAULT_PRIME)
    else:
        raise ValueError(f"unknown rank method {method!r}")
    degs = c.degrees()
    ranks = {k: rk(c.differential(k)) for k in set(degs) | {k + 1 for k in degs}}
    return [HomologyRow(k, c.dim(k), ranks[k + 1], ranks[k], c.dim(k) - ranks[k] - ranks[k + 1])
            for k in degs]


def homology_dims(c: GradedChainComplex, method: str = "exact", prime: int | None = None) -> dict[int, int]:
    return {row.degree: row.dim_homology for row in homology_table(c, method, prime)}
