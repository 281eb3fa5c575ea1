"""Command-line entry points for the enumeration and homology engines.

Exit codes: 0 success, 1 usage error, 2 a mathematical invariant failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import random
import sys
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .canonical import automorphisms, canonical_form, canonical_key, permutation_sign
from .enumeration import counts_by_shape, enumerate_gc_generators, enumerate_jg, enumerate_trivalent
from .exactla import (
    ChainComplexError,
    GradedChainComplex,
    HomologyRow,
    _is_prime,
    homology_table,
    in_column_space,
)
from .graphs import GraphError, StableGraph, dumps_jsonl, loads_jsonl

log = logging.getLogger("tropgc")

CACHE_ENV = "TROPGC_CACHE"
CACHE_FORMAT = "# tropgc-jsonl v1"
KINDS = ("jg", "gc-generators", "trivalent")
COMPLEXES = ("gc", "c", "a", "b", "delta")
SUITES = ("signs", "relations", "duality", "acyclic", "shift", "subdivision", "wheel", "growth")
MAX_SUBDIVISION_GENUS = 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    genus: int | None = None
    kind: str | None = None
    complex: str = "gc"
    degrees: tuple[int, int] | None = None
    prime: int | None = None
    out: Path | None = None
    cache: Path | None = None
    max: int | None = None
    suite: str | None = None


def parse_degrees(text: str) -> tuple[int, int]:
    """``A..B`` (inclusive) or a single degree."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad degree range {text!r}; expected A..B") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty degree range {text!r}")
    return lo, hi


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
        return
    try:
        _write_atomic(cfg.out, text)
    except OSError as exc:
        raise UsageError(f"cannot write {cfg.out}: {exc}") from exc


def _require_genus(cfg: RunConfig) -> int:
    if cfg.genus is None:
        raise UsageError("--genus is required")
    if cfg.genus < 2:
        raise UsageError("genus must be at least 2")
    return cfg.genus


# enumeration and cache

def _enumerate(kind: str, g: int, degree: int | None) -> list[StableGraph]:
    if kind == "trivalent":
        return enumerate_trivalent(g)
    if kind == "jg":
        return enumerate_jg(g)
    if degree is not None:
        return enumerate_gc_generators(g, degree)
    out: list[StableGraph] = []
    for k in range(1 - 2 * g, g - 2):
        out.extend(enumerate_gc_generators(g, k))
    return sorted(out, key=canonical_key)


def cache_path(root: Path, g: int, kind: str) -> Path:
    return root / f"g{g}" / f"{kind}.jsonl"


def load_or_enumerate(kind: str, g: int, cache: Path | None) -> list[StableGraph]:
    """Full enumeration of ``kind`` in genus ``g``, served from the cache when
    its header matches the current format."""
    if cache is not None:
        path = cache_path(cache, g, kind)
        if path.exists():
            text = path.read_text()
            if text.startswith(CACHE_FORMAT + "\n"):
                log.info("cache hit %s", path)
                return list(loads_jsonl(text))
            log.info("stale cache %s", path)
    graphs = _enumerate(kind, g, None)
    if cache is not None:
        try:
            _write_atomic(cache_path(cache, g, kind), CACHE_FORMAT + "\n" + dumps_jsonl(graphs))
        except OSError as exc:
            log.warning("cache not written: %s", exc)
    return graphs


def cmd_enumerate(cfg: RunConfig) -> int:
    g = _require_genus(cfg)
    if cfg.kind not in KINDS:
        raise UsageError(f"--kind must be one of {', '.join(KINDS)}")
    graphs = load_or_enumerate(cfg.kind, g, cfg.cache)
    if cfg.degrees is not None:
        if cfg.kind != "gc-generators":
            raise UsageError("--degrees only applies to --kind gc-generators")
        lo, hi = cfg.degrees
        graphs = [x for x in graphs if lo <= x.n_edges - 2 * g <= hi]
    _emit(cfg, dumps_jsonl(graphs))
    shape = " ".join(f"({v},{e}):{n}" for (v, e), n in counts_by_shape(graphs).items())
    print(f"genus {g} {cfg.kind}: {len(graphs)} graphs; (v,e) counts {shape}", file=sys.stderr if cfg.out is None else sys.stdout)
    return 0


# complexes

def build_complex(name: str, g: int) -> GradedChainComplex:
    from .graphcomplex import build_graph_complex
    from .symdelta import barycentric_subdivision, cellular_chain_complex, delta_g, split_AB

    if name == "gc":
        return build_graph_complex(g)
    if name == "c":
        return cellular_chain_complex(delta_g(g))
    if name == "a":
        return split_AB(g)[0]
    if name == "b":
        return split_AB(g)[1]
    if name == "delta":
        if g > MAX_SUBDIVISION_GENUS:
            raise UsageError(f"the subdivision of Delta_{g} is too large; use --complex c")
        return barycentric_subdivision(delta_g(g)).chain_complex()
    raise UsageError(f"--complex must be one of {', '.join(COMPLEXES)}")


def _restrict(c: GradedChainComplex, degrees) -> GradedChainComplex:
    if degrees is None:
        return c
    lo, hi = degrees
    keep = {k: v for k, v in c.bases.items() if lo - 1 <= k <= hi + 1}
    diffs = {k: m for k, m in c.differentials.items() if k in keep and k - 1 in keep}
    return GradedChainComplex(keep, diffs, c.name)


def homology_rows(cfg: RunConfig) -> list[HomologyRow]:
    g = _require_genus(cfg)
    c = _restrict(build_complex(cfg.complex, g), cfg.degrees)
    method = "modp" if cfg.prime else "exact"
    rows = homology_table(c, method, cfg.prime)
    if cfg.degrees is not None:
        rows = [r for r in rows if cfg.degrees[0] <= r.degree <= cfg.degrees[1]]
    return rows


def cmd_homology(cfg: RunConfig) -> int:
    rows = homology_rows(cfg)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["complex", "genus", "degree", "dim_chains", "rank_in", "rank_out", "dim_homology"])
    for r in rows:
        w.writerow([cfg.complex, cfg.genus, r.degree, r.dim_chains, r.rank_in, r.rank_out, r.dim_homology])
    _emit(cfg, buf.getvalue())
    return 0


def complex_to_json(c: GradedChainComplex, name: str, g: int) -> dict:
    def label(x):
        return getattr(x, "key", x)

    out = {"complex": name, "genus": g, "degrees": {}}
    for k in c.degrees():
        m = c.differential(k)
        out["degrees"][str(k)] = {
            "basis": [label(x) for x in c.bases[k]],
            "boundary": {"rows": m.rows, "cols": m.cols, "triplets": [list(t) for t in m.triplets()]},
        }
    return out


def _subdivision_json(g: int) -> dict:
    from .symdelta import barycentric_subdivision, delta_g

    if g > MAX_SUBDIVISION_GENUS:
        raise UsageError(f"the subdivision of Delta_{g} is too large")
    x = delta_g(g)
    y = barycentric_subdivision(x)
    c = y.chain_complex()
    out = complex_to_json(c, "delta", g)
    for q, ss in y.simplices.items():
        rows = []
        for p, o, f in ss:
            flags = [[e for e in range(p + 1) if f[e] <= j] for j in range(max(f, default=-1) + 1)]
            rows.append({"cell": x.orbits[p][o].label, "dim": p, "flags": flags})
        out["degrees"][str(q)]["basis"] = rows
    return out


def cmd_export(cfg: RunConfig) -> int:
    g = _require_genus(cfg)
    if cfg.complex == "delta":
        data = _subdivision_json(g)
    else:
        data = complex_to_json(_restrict(build_complex(cfg.complex, g), cfg.degrees), cfg.complex, g)
    _emit(cfg, json.dumps(data, indent=1) + "\n")
    return 0


def cmd_growth(cfg: RunConfig) -> int:
    from .growth import growth_report

    rep = growth_report(cfg.max or 400)
    _emit(cfg, rep.to_csv())
    return 0


# verification suites; each returns a list of (name, ok, detail)

def _suite_signs(g: int, rng: random.Random):
    from .graphcomplex import normalize

    checks = []
    graphs = _enumerate("gc-generators", g, None)
    bad = 0
    for gr in graphs:
        key = canonical_key(gr)
        m = gr.n_edges
        base = normalize(gr)
        for _ in range(5):
            perm = list(range(gr.n_vertices))
            rng.shuffle(perm)
            relabeled = StableGraph(tuple(gr.weights[perm.index(v)] for v in range(gr.n_vertices)),
                                    tuple((perm[u], perm[v]) for u, v in gr.edges))
            if canonical_key(relabeled) != key:
                bad += 1
            order = list(range(m))
            rng.shuffle(order)
            t = normalize(gr, order)
            if (t is None) != (base is None) or (t and (t[1] != base[1] or t[0] != base[0] * permutation_sign(order))):
                bad += 1
    checks.append(("canonical keys and normalize signs equivariant", bad == 0, f"{len(graphs)} graphs"))
    odd = sum(1 for gr in graphs if automorphisms(canonical_form(gr)[0]).has_odd_edge_automorphism)
    zero = sum(1 for gr in graphs if normalize(gr) is None)
    par = sum(1 for gr in graphs if gr.has_parallel_edges())
    checks.append(("zero generators are exactly the odd-symmetric or parallel-edged ones",
                   zero == sum(1 for gr in graphs if gr.has_parallel_edges()
                               or automorphisms(canonical_form(gr)[0]).has_odd_edge_automorphism),
                   f"{zero} zero, {odd} odd, {par} with parallel edges"))
    return checks


def _suite_relations(g: int, rng: random.Random):
    from .symdelta import delta_g, half_interval, representable

    checks = []
    for x in (half_interval(), representable(2), representable(3)):
        n = x.check_relations()
        checks.append((f"relations on {x.name}", True, f"{n} elements"))
    x = delta_g(g)
    n = x.check_relations(elements_per_orbit=None if g <= 2 else 2, seed=rng.randrange(1 << 30))
    checks.append((f"relations on Delta_{g}", True, f"{n} elements"))
    return checks


def _suite_duality(g: int, rng: random.Random):
    from .graphcomplex import boundary_matrix, coboundary_matrix, gc_basis, gc_degree_range

    checks = []
    transpose_ok = weighted_ok = True
    for k in gc_degree_range(g):
        if k + 1 not in gc_degree_range(g):
            continue
        d = coboundary_matrix(g, k)
        b = boundary_matrix(g, k + 1)
        if d != b.transpose():
            transpose_ok = False
        a0 = [automorphisms(x.graph).group_order for x in gc_basis(g, k)]
        a1 = [automorphisms(x.graph).group_order for x in gc_basis(g, k + 1)]
        rows = set(d.entries) | {(c, r) for (r, c) in b.entries}
        if any(d[(r, c)] * a1[r] != b[(c, r)] * a0[c] for r, c in rows):
            weighted_ok = False
    checks.append(("coboundary equals the |Aut|-weighted transpose of the boundary", weighted_ok,
                   f"exact transpose: {'yes' if transpose_ok else 'no'}"))
    return checks


def _suite_acyclic(g: int, rng: random.Random):
    from .symdelta import split_AB

    _, b = split_AB(g)
    dims = {r.degree: r.dim_homology for r in homology_table(b)}
    return [(f"B^({g}) acyclic", not any(dims.values()), json.dumps(dims))]


def _suite_shift(g: int, rng: random.Random):
    from .graphcomplex import build_graph_complex
    from .symdelta import cellular_chain_complex, delta_g, shift_check

    rep = shift_check(g)
    checks = [("A-part equals shifted graph complex", rep["ok"], json.dumps(rep["mismatch"]))]
    hg = {r.degree: r.dim_homology for r in homology_table(build_graph_complex(g))}
    hd = {r.degree: r.dim_homology for r in homology_table(cellular_chain_complex(delta_g(g)))}
    shift = 2 * g - 1
    ok = all(hd.get(k + shift, 0) == v for k, v in hg.items()) and \
        all(hg.get(p - shift, 0) == v for p, v in hd.items())
    checks.append(("reduced homology of Delta_g is the shifted graph homology", ok,
                   f"G: {json.dumps(hg)} Delta: {json.dumps(hd)}"))
    return checks


def _suite_subdivision(g: int, rng: random.Random):
    from .symdelta import (barycentric_subdivision, cellular_chain_complex, delta_g, half_interval,
                           ordinary_simplicial_homology, representable)
    from .exactla import homology_dims

    if g > MAX_SUBDIVISION_GENUS:
        raise UsageError(f"subdivision check supports genus <= {MAX_SUBDIVISION_GENUS}")
    checks = []
    for x in (half_interval(), representable(2), delta_g(g)):
        y = barycentric_subdivision(x)
        y.check_identities()
        cell = homology_dims(cellular_chain_complex(x))
        simp = ordinary_simplicial_homology(y)
        checks.append((f"cellular vs subdivision homology of {x.name}", cell == simp,
                       f"{json.dumps(cell)} vs {json.dumps(simp)}"))
    return checks


WHEEL_RANK_MAX_GENUS = 6


def _suite_wheel(g: int, rng: random.Random):
    from .graphcomplex import boundary, boundary_matrix, chain_to_column, gc_basis, normalize, wheel

    w = normalize(wheel(g))
    if w is None:
        return [(f"W_{g} vanishes", g % 2 == 0, "odd automorphism")]
    sign, gen = w
    checks = [(f"W_{g} is nonzero", g % 2 == 1, gen.key), (f"boundary of W_{g} is 0", not boundary(gen), "")]
    if g <= WHEEL_RANK_MAX_GENUS:
        col = chain_to_column({gen: sign}, gc_basis(g, 0))
        hit = in_column_space(boundary_matrix(g, 1), col)
        checks.append((f"W_{g} is not a boundary", not hit, ""))
    return checks


def _suite_growth(g: int | None, rng: random.Random, n_max: int = 400):
    from .growth import growth_report, lie_dimensions, lie_dimensions_by_log, p_coefficients, p_coefficients_by_series

    rep = growth_report(n_max)
    return [
        ("a_n recurrence matches series division, n <= 30", p_coefficients(30) == p_coefficients_by_series(30), ""),
        ("Moebius inversion matches log expansion, n <= 30", lie_dimensions(30) == lie_dimensions_by_log(30), ""),
        ("alpha and beta_0", abs(rep.alpha - 0.75488) < 1e-4 and abs(rep.beta0 - 1.3247) < 1e-4,
         f"{rep.alpha:.12f} {rep.beta0:.12f}"),
        ("residue at alpha is -alpha", abs(rep.residue + rep.alpha) < 1e-8 and abs(rep.residue_estimate + rep.alpha) < 1e-8,
         f"{rep.residue:.12f}"),
        (f"|a_n alpha^n - 1| < {rep.threshold:g} for {rep.start} <= n <= {n_max}", rep.converged, ""),
    ]


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.suite not in SUITES:
        raise UsageError(f"unknown suite {cfg.suite!r}; choose from {', '.join(SUITES)}")
    rng = random.Random(0)
    t0 = time.perf_counter()
    if cfg.suite == "growth":
        g = None
        checks = _suite_growth(None, rng, cfg.max or 400)
    else:
        g = _require_genus(cfg)
        if cfg.suite == "wheel" and g < 3:
            raise UsageError("wheels need genus at least 3")
        try:
            checks = globals()[f"_suite_{cfg.suite}"](g, rng)
        except (ChainComplexError, GraphError) as exc:
            checks = [(cfg.suite, False, str(exc))]
    ok = all(c[1] for c in checks)
    report = {"suite": cfg.suite, "genus": g, "ok": ok, "seconds": round(time.perf_counter() - t0, 3),
              "checks": [{"name": n, "ok": bool(p), "detail": d} for n, p, d in checks]}
    _emit(cfg, json.dumps(report, indent=1) + "\n")
    return 0 if ok else 2


COMMANDS = {"enumerate": cmd_enumerate, "homology": cmd_homology, "export": cmd_export,
            "verify": cmd_verify, "growth": cmd_growth}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--genus", type=int)
    common.add_argument("--kind", choices=KINDS)
    common.add_argument("--complex", choices=COMPLEXES, default="gc")
    common.add_argument("--degrees", type=parse_degrees, metavar="A..B")
    common.add_argument("--mod-p", type=int, dest="prime", metavar="P", help="use ranks over F_P")
    common.add_argument("--out", type=Path)
    common.add_argument("--cache", type=Path, help=f"cache root (default ${CACHE_ENV})")
    common.add_argument("--max", type=int, help="series order for growth")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="tropgc", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("enumerate", parents=[common], help="write graphs as JSONL")
    sub.add_parser("homology", parents=[common], help="CSV homology table")
    sub.add_parser("export", parents=[common], help="JSON bases and boundary matrices")
    v = sub.add_parser("verify", parents=[common], help="run an invariant battery")
    v.add_argument("suite", choices=SUITES)
    sub.add_parser("growth", parents=[common], help="CSV of a_n, A_n and a_n alpha^n")
    return p


def _join_degree_values(argv: list[str]) -> list[str]:
    # argparse reads "-1..3" as an option; bind it to the flag explicitly
    out: list[str] = []
    it = iter(argv)
    for a in it:
        if a in ("--degree", "--degrees"):
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _join_degree_values(list(sys.argv[1:] if argv is None else argv))
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format="%(message)s")
    cache = ns.cache or (Path(os.environ[CACHE_ENV]) if os.environ.get(CACHE_ENV) else None)
    cfg = RunConfig(ns.command, ns.genus, ns.kind, ns.complex, ns.degrees, ns.prime, ns.out, cache, ns.max,
                    getattr(ns, "suite", None))
    if cfg.prime is not None and not _is_prime(cfg.prime):
        print("error: --mod-p needs a prime", file=sys.stderr)
        return 1
    try:
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ChainComplexError as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
