"""Exhaustive search over horizontal normal forms of genus-zero strata with two
odd zeros and double poles only.

In the normal form every saddle connection is horizontal and every double
pole is a half-infinite cylinder with a horizontal boundary.  With real
positive roots, all cylinders point upward and every gluing is a half-turn.
A surface is therefore an *incidence graph* (one vertex per cylinder, one
edge per saddle connection) together with a rotation system (the cyclic
order of saddle connections along each cylinder boundary).  For two zeros
the graph has as many edges as vertices: one cycle plus trees.

Segment lengths solve ``M x = r`` where ``M[i][e]`` counts the sides of
saddle connection ``e`` on cylinder ``i``; the system is invertible exactly
when the cycle is odd, which is also exactly when the surface is primitive.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from .core import QuadStrataError, StratumSignature
from .surface import (
    CYLINDER,
    HALF_TURN,
    EdgeRef,
    FlatSurface,
    Gluing,
    Piece,
    PoleMark,
)

DEFAULT_BUDGET = 7


class SearchError(QuadStrataError):
    code = "SearchError"


class BudgetExceeded(SearchError):
    code = "BudgetExceeded"


class PropertyViolated(SearchError):
    code = "PropertyViolated"


class OutOfScope(SearchError):
    code = "OutOfScope"


HalfEdge = tuple[int, int]  # (edge index, side 0 or 1)


@dataclass(frozen=True)
class IncidenceGraph:
    """Cylinders ``0..n-1`` joined by saddle connections ``edges``.

    ``rotation[i]`` lists the half-edges met along the boundary of cylinder
    ``i`` (in boundary order); side 0 of edge ``(u, v)`` lies on ``u`` and
    side 1 on ``v``.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    rotation: tuple[tuple[HalfEdge, ...], ...]

    def incidence_matrix(self) -> list[list[Fraction]]:
        m = [[Fraction(0)] * len(self.edges) for _ in range(self.n)]
        for e, (u, v) in enumerate(self.edges):
            m[u][e] += 1
            m[v][e] += 1
        return m

    def vertex_classes(self) -> list[int]:
        """Number of corners (each of angle pi) in each vertex class."""
        return _vertex_classes(self.n, self.edges, self.rotation)

    def cycle_edges(self) -> tuple[int, ...]:
        """Edges on the unique cycle (a self-loop is a cycle of length one)."""
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        alive = set(range(len(self.edges)))
        changed = True
        while changed:
            changed = False
            for e in list(alive):
                u, v = self.edges[e]
                if u != v and (deg[u] == 1 or deg[v] == 1):
                    alive.discard(e)
                    deg[u] -= 1
                    deg[v] -= 1
                    changed = True
        return tuple(sorted(alive))

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges],
                "rotation": [[list(h) for h in r] for r in self.rotation]}

    @staticmethod
    def from_json(obj) -> "IncidenceGraph":
        return IncidenceGraph(int(obj["n"]), tuple(tuple(e) for e in obj["edges"]),
                              tuple(tuple(tuple(h) for h in r) for r in obj["rotation"]))


def _vertex_classes(n: int, edges: Sequence[tuple[int, int]], rotation: Sequence[Sequence[HalfEdge]]) -> list[int]:
    base = []
    pos: dict[HalfEdge, tuple[int, int]] = {}
    total = 0
    for i, rot in enumerate(rotation):
        base.append(total)
        for j, h in enumerate(rot):
            pos[h] = (i, j)
        total += len(rot)
    parent = list(range(total))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def corner(i: int, j: int) -> int:
        return base[i] + j % len(rotation[i])

    for e in range(len(edges)):
        i0, j0 = pos[(e, 0)]
        i1, j1 = pos[(e, 1)]
        # half-turn: start of one side meets end of the other
        for a, b in ((corner(i0, j0 - 1), corner(i1, j1)), (corner(i0, j0), corner(i1, j1 - 1))):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
    counts: dict[int, int] = {}
    for c in range(total):
        r = find(c)
        counts[r] = counts.get(r, 0) + 1
    return sorted(counts.values(), reverse=True)


def _prufer_trees(n: int) -> Iterator[list[tuple[int, int]]]:
    if n == 1:
        yield []
        return
    if n == 2:
        yield [(0, 1)]
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        degree = [1] * n
        for x in seq:
            degree[x] += 1
        edges = []
        seq = list(seq)
        for x in seq:
            leaf = min(i for i in range(n) if degree[i] == 1)
            edges.append((min(leaf, x), max(leaf, x)))
            degree[leaf] -= 1
            degree[x] -= 1
        u, v = [i for i in range(n) if degree[i] == 1]
        edges.append((u, v))
        yield edges


def unicyclic_graphs(n: int) -> list[tuple[tuple[int, int], ...]]:
    """Connected multigraphs (loops allowed) on labeled vertices with ``n`` edges."""
    seen = set()
    out = []
    pairs = [(u, v) for u in range(n) for v in range(u, n)]
    for tree in _prufer_trees(n):
        for extra in pairs:
            key = tuple(sorted(tree + [extra]))
            if key not in seen:
                seen.add(key)
                out.append(key)
    out.sort()
    return out


def _rotation_systems(n: int, edges: Sequence[tuple[int, int]]) -> Iterator[tuple[tuple[HalfEdge, ...], ...]]:
    halves: list[list[HalfEdge]] = [[] for _ in range(n)]
    for e, (u, v) in enumerate(edges):
        halves[u].append((e, 0))
        halves[v].append((e, 1))
    per_vertex = []
    for hs in halves:
        first, rest = hs[0], hs[1:]
        per_vertex.append([(first,) + p for p in itertools.permutations(rest)])
    for combo in itertools.product(*per_vertex):
        yield combo


@dataclass
class _GraphEntry:
    edges: tuple[tuple[int, int], ...]
    inverse: list[list[Fraction]]
    _by_classes: dict[tuple[int, ...], list[tuple[tuple[HalfEdge, ...], ...]]] | None = None

    @property
    def by_classes(self) -> dict[tuple[int, ...], list[tuple[tuple[HalfEdge, ...], ...]]]:
        """Rotation systems grouped by vertex-class sizes, built on first use."""
        if self._by_classes is None:
            n = 1 + max(v for e in self.edges for v in e)
            groups: dict[tuple[int, ...], list] = {}
            for rot in _rotation_systems(n, self.edges):
                groups.setdefault(tuple(_vertex_classes(n, self.edges, rot)), []).append(rot)
            self._by_classes = groups
        return self._by_classes


def _integer_inverse(m: list[list[int]]) -> list[list[Fraction]] | None:
    """Inverse of an integer matrix by fraction-free Gauss-Jordan elimination."""
    n = len(m)
    a = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(m)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return None
        a[k], a[piv] = a[piv], a[k]
        pk = a[k]
        for i in range(n):
            if i != k and a[i][k]:
                f, g = pk[k], a[i][k]
                row = [f * x - g * y for x, y in zip(a[i], pk)]
                d = math.gcd(*row)
                a[i] = [x // d for x in row] if d > 1 else row
    return [[Fraction(x, a[i][i]) for x in a[i][n:]] for i in range(n)]


@lru_cache(maxsize=None)
def _catalog(n: int) -> tuple[_GraphEntry, ...]:
    """Every primitive incidence graph on ``n`` cylinders with its inverse
    incidence matrix; rotation systems are grouped lazily per graph."""
    out = []
    for edges in unicyclic_graphs(n):
        g = IncidenceGraph(n, edges, ())
        inv = _integer_inverse([[int(x) for x in row] for row in g.incidence_matrix()])
        if inv is None:
            continue
        out.append(_GraphEntry(edges, inv))
    return tuple(out)


@dataclass
class NormalFormWitness:
    signature: StratumSignature
    roots: tuple[int, ...]
    graph: IncidenceGraph
    lengths: tuple[Fraction, ...]

    _surface: FlatSurface | None = None

    @property
    def surface(self) -> FlatSurface:
        if self._surface is None:
            self._surface = surface_from_graph(self.graph, self.lengths)
        return self._surface

    def to_json(self) -> dict:
        from .core import fraction_to_str

        return {"graph": self.graph.to_json(), "lengths": [fraction_to_str(x) for x in self.lengths],
                "roots": list(self.roots)}


def surface_from_graph(graph: IncidenceGraph, lengths: Sequence[Fraction], labels: Sequence[str] | None = None) -> FlatSurface:
    """Assemble upward cylinders and half-turn gluings from a rotation system."""
    labels = list(labels) if labels is not None else [f"d{i}" for i in range(graph.n)]
    pieces = []
    where: dict[HalfEdge, EdgeRef] = {}
    for i, rot in enumerate(graph.rotation):
        pid = f"C{i}"
        pieces.append(Piece(CYLINDER, pid, [lengths[e] for e, _ in rot]))
        for j, h in enumerate(rot):
            where[h] = EdgeRef(pid, j)
    gluings = [Gluing(where[(e, 0)], where[(e, 1)], HALF_TURN) for e in range(len(graph.edges))]
    marks = [PoleMark(labels[i], -2, (f"C{i}",)) for i in range(graph.n)]
    return FlatSurface(pieces, gluings, marks)


def _check_scope(sig: StratumSignature, roots: Sequence[int]) -> tuple[int, int]:
    if sig.genus != 0 or sig.p or sig.r or sig.n_even_zeros or sig.n_odd_zeros != 2:
        raise OutOfScope(f"{sig} is not a genus-zero stratum with two odd zeros and double poles only")
    if len(roots) != sig.s:
        raise OutOfScope(f"{len(roots)} roots for {sig.s} double poles")
    for r in roots:
        if Fraction(r) <= 0 or Fraction(r).denominator != 1:
            raise OutOfScope("roots must be positive integers")
    a1, a2 = sig.odd_zeros()
    return a1, a2


def enumerate_normal_forms(sig: StratumSignature, roots: Sequence[int], budget: int = DEFAULT_BUDGET) -> Iterator[NormalFormWitness]:
    """All normal-form surfaces in ``sig`` whose double poles have residues ``r_i**2``.

    Enumeration order is deterministic (graphs in lexicographic order, then
    rotation systems in generation order).
    """
    a1, a2 = _check_scope(sig, roots)
    if sig.s > budget:
        raise BudgetExceeded(f"{sig.s} double poles exceed the budget {budget}")
    target = tuple(sorted((a1 + 2, a2 + 2), reverse=True))
    rs = [Fraction(r) for r in roots]
    for entry in _catalog(sig.s):
        x = [sum((row[j] * rs[j] for j in range(len(rs))), Fraction(0)) for row in entry.inverse]
        if any(v <= 0 for v in x):
            continue
        rots = entry.by_classes.get(target)
        if not rots:
            continue
        for rot in rots:
            yield NormalFormWitness(sig, tuple(int(r) for r in roots), IncidenceGraph(sig.s, entry.edges, rot), tuple(x))


def first_witness(sig: StratumSignature, roots: Sequence[int], budget: int = DEFAULT_BUDGET) -> NormalFormWitness | None:
    return next(enumerate_normal_forms(sig, roots, budget), None)


def check_half_integer_lengths(w: NormalFormWitness) -> dict:
    """Parity of saddle lengths for coprime integer roots.

    Even root sum: every length is an integer.  Odd root sum: lengths on the
    cycle are half-integers and lengths on the trees are integers.
    Non-coprime roots are divided by their gcd first.
    """
    g = 0
    for r in w.roots:
        g = math.gcd(g, r)
    if g == 0:
        return {"checked": False, "reason": "no roots"}
    total = sum(w.roots) // g
    lengths = [x / g for x in w.lengths]
    cycle = set(w.graph.cycle_edges())
    half = Fraction(1, 2)
    for e, x in enumerate(lengths):
        if total % 2 == 0:
            ok = x.denominator == 1
        elif e in cycle:
            ok = (x - half).denominator == 1
        else:
            ok = x.denominator == 1
        if not ok:
            raise PropertyViolated(f"edge {e} has length {x} with root sum {total} ({'cycle' if e in cycle else 'tree'})")
    return {"checked": True, "sum_parity": "even" if total % 2 == 0 else "odd", "cycle_edges": sorted(cycle)}


def check_sum_bound(w: NormalFormWitness) -> dict:
    """Lower bound on the root sum of a realizable arithmetic configuration."""
    g = 0
    for r in w.roots:
        g = math.gcd(g, r)
    total = sum(w.roots) // g
    a1, a2 = w.signature.odd_zeros()
    bound = a1 + 2 if total % 2 else a1 + a2 + 4
    if total < bound:
        raise PropertyViolated(f"root sum {total} below {bound} for zeros {(a1, a2)}")
    return {"checked": True, "sum": total, "bound": bound}


def search_report(sig: StratumSignature, roots: Sequence[int], budget: int = DEFAULT_BUDGET, keep: int = 1) -> dict:
    """Witness count, first witness and property checks over the whole stream."""
    count = 0
    first = None
    half_int = sum_bound = 0
    for w in enumerate_normal_forms(sig, roots, budget):
        count += 1
        check_half_integer_lengths(w)
        check_sum_bound(w)
        half_int += 1
        sum_bound += 1
        if first is None:
            first = w
    report = {"witness_count": count,
              "property_checks": {"half_integer_lengths": {"checked": half_int, "violations": 0},
                                  "root_sum_bound": {"checked": sum_bound, "violations": 0}}}
    if first is not None:
        report["first_witness"] = first.to_json()
        report["first_witness"]["surface"] = first.surface.to_json()
    return report, first


def sweep_strata(max_s: int) -> list[StratumSignature]:
    """Every two-odd-zero genus-zero stratum with ``s <= max_s`` double poles."""
    out = []
    for s in range(1, max_s + 1):
        total = 2 * s - 4
        for a2 in range(-1, total + 2, 2):
            a1 = total - a2
            if a1 < a2 or a1 < -1:
                continue
            out.append(StratumSignature(0, (a1, a2), (), (), s))
    return out


def sorted_root_tuples(s: int, max_sum: int) -> Iterator[tuple[int, ...]]:
    """Nondecreasing positive integer tuples of length ``s`` with sum <= ``max_sum``."""
    def rec(prefix: list[int], start: int, remaining: int, left: int):
        if left == 0:
            yield tuple(prefix)
            return
        for v in range(start, remaining // left + 1):
            prefix.append(v)
            yield from rec(prefix, v, remaining - v, left - 1)
            prefix.pop()

    yield from rec([], 1, max_sum, s)
