"""Flat-surface kernel: catalog pieces, gluings and an independent verifier.

A surface is a finite set of pieces whose boundary segments and rays are
glued in pairs, either by a translation or by a translation composed with a
half-turn.  Each piece is made of *sheets*: half-planes bounded by a broken
line and two rays parallel to the surface axis, half-infinite cylinders, or
finite polygons.  :func:`verify` recomputes cone angles, pole orders,
residues, genus, connectivity and primitivity from this data alone.

Conventions
-----------
Every boundary element is read along the positively oriented boundary of
its piece (the piece lies on the left).  A translation gluing pairs vectors
``u`` and ``-u``; a half-turn gluing pairs ``u`` with ``u``.  In both cases
the start of one side is identified with the end of the other.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .core import (
    GaussianRational,
    GaussLike,
    ParseError,
    QuadStrataError,
    StratumSignature,
)

G = GaussianRational
TRANSLATION = "translation"
HALF_TURN = "half_turn"
TWISTS = (TRANSLATION, HALF_TURN)

POSITIVE = "positive_domain"
NEGATIVE = "negative_domain"
OPEN_LEFT = "open_left_domain"
OPEN_RIGHT = "open_right_domain"
CYLINDER = "cylinder_end"
POLYGON = "polygon"
KINDS = (POSITIVE, NEGATIVE, OPEN_LEFT, OPEN_RIGHT, CYLINDER, POLYGON)


class SurfaceError(QuadStrataError):
    code = "SurfaceError"


class SelfIntersection(SurfaceError):
    code = "SelfIntersection"


class DegeneratePolygon(SurfaceError):
    code = "DegeneratePolygon"


class BadType(SurfaceError):
    code = "BadType"


class BadOrder(SurfaceError):
    code = "BadOrder"


class VectorMismatch(SurfaceError):
    code = "VectorMismatch"


class AlreadyGlued(SurfaceError):
    code = "AlreadyGlued"


class FreeEdge(SurfaceError):
    code = "FreeEdge"


class NonIntegerAngle(SurfaceError):
    code = "NonIntegerAngle"


class MalformedSurface(SurfaceError):
    code = "MalformedSurface"


class PoleMarkMismatch(SurfaceError):
    code = "PoleMarkMismatch"


class NotClosed(SurfaceError):
    code = "NotClosed"


# ---------------------------------------------------------------------------
# exact planar predicates
# ---------------------------------------------------------------------------


def cross(a: G, b: G) -> Fraction:
    return a.re * b.im - a.im * b.re


def dot(a: G, b: G) -> Fraction:
    return a.re * b.re + a.im * b.im


def same_direction(a: G, b: G) -> bool:
    return cross(a, b) == 0 and dot(a, b) > 0


def _half(d: G) -> int:
    """0 if the argument of ``d`` lies in [0, pi), else 1."""
    return 0 if (d.im > 0 or (d.im == 0 and d.re > 0)) else 1


def arg_less(a: G, b: G) -> bool:
    """Strict comparison of arguments taken in [0, 2*pi)."""
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return ha < hb
    return cross(a, b) > 0


def ccw_crossings(frm: G, to: G) -> int:
    """Number of multiples of pi met by a counterclockwise sweep from ``frm`` to
    ``to`` (half-open at the start).  Equal directions mean a full turn.

    Summed over consecutive sweeps this counts exactly the half-turns of the
    total angle; it is invariant under rotating both directions by pi.
    """
    if same_direction(frm, to):
        return 2
    if _half(frm) != _half(to):
        return 1
    return 0 if cross(frm, to) > 0 else 2


def _orient(a: G, b: G, c: G) -> int:
    v = cross(b - a, c - a)
    return (v > 0) - (v < 0)


def _on_segment(a: G, b: G, p: G) -> bool:
    return (min(a.re, b.re) <= p.re <= max(a.re, b.re)) and (min(a.im, b.im) <= p.im <= max(a.im, b.im))


def segments_intersect(p1: G, p2: G, p3: G, p4: G) -> bool:
    """Closed segments [p1,p2] and [p3,p4] share a point."""
    d1 = _orient(p3, p4, p1)
    d2 = _orient(p3, p4, p2)
    d3 = _orient(p1, p2, p3)
    d4 = _orient(p1, p2, p4)
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True
    if d1 == 0 and _on_segment(p3, p4, p1):
        return True
    if d2 == 0 and _on_segment(p3, p4, p2):
        return True
    if d3 == 0 and _on_segment(p1, p2, p3):
        return True
    if d4 == 0 and _on_segment(p1, p2, p4):
        return True
    return False


def _far_factor(points: Sequence[G], direction: G) -> Fraction:
    bound = Fraction(1)
    for p in points:
        bound = max(bound, abs(p.re), abs(p.im))
    scale = max(abs(direction.re), abs(direction.im))
    return (4 * bound + 4) / scale


def _check_simple_path(pieces: list[tuple[G, G]], cyclic: bool, err) -> None:
    """``pieces`` are consecutive closed segments of a path (rays already
    truncated far away).  Raise ``err`` unless the path is simple."""
    n = len(pieces)
    for i in range(n):
        a0, a1 = pieces[i]
        if a0 == a1:
            raise err("zero-length boundary element")
    for i in range(n):
        for j in range(i + 1, n):
            adjacent = j == i + 1 or (cyclic and i == 0 and j == n - 1)
            a0, a1 = pieces[i]
            b0, b1 = pieces[j]
            if adjacent:
                if n == 2 and cyclic:
                    raise err("two-edge closed path")
                # consecutive elements may only share their common endpoint
                if j == i + 1:
                    u, w = a1 - a0, b1 - b0
                else:
                    u, w = b1 - b0, a1 - a0
                if cross(u, w) == 0 and dot(u, w) < 0:
                    raise err("boundary folds back on itself")
                continue
            if segments_intersect(a0, a1, b0, b1):
                raise err("boundary is not simple")


# ---------------------------------------------------------------------------
# pieces and sheets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Element:
    kind: str  # "seg", "in" (ray arriving from infinity), "out" (ray leaving to infinity)
    vec: G  # travel vector for segments, travel direction for rays


@dataclass(frozen=True)
class Sweep:
    frm: G
    to: G


@dataclass
class Sheet:
    piece: str
    kind: str  # "upper", "lower", "cylinder", "polygon"
    elems: list[Element]
    cyclic: bool
    corners: list[list[Sweep]]  # corner k sits between elems[k] and elems[k+1]

    def start_corner(self, k: int) -> int | None:
        if self.cyclic:
            return (k - 1) % len(self.elems)
        return k - 1 if k >= 1 else None

    def end_corner(self, k: int) -> int | None:
        if self.cyclic:
            return k
        return k if k < len(self.elems) - 1 else None


def _corner_sweeps(elems: list[Element], cyclic: bool) -> list[list[Sweep]]:
    n = len(elems)
    m = n if cyclic else n - 1
    out = []
    for k in range(m):
        e_in, e_out = elems[k], elems[(k + 1) % n]
        out.append([Sweep(e_out.vec, -e_in.vec)])
    return out


def _upper_sheet(pid: str, vectors: Sequence[G], axis: G) -> Sheet:
    elems = [Element("in", axis)] + [Element("seg", v) for v in vectors] + [Element("out", axis)]
    return Sheet(pid, "upper", elems, False, _corner_sweeps(elems, False))


def _lower_sheet(pid: str, vectors: Sequence[G], axis: G) -> Sheet:
    elems = [Element("in", -axis)] + [Element("seg", -w) for w in reversed(vectors)] + [Element("out", -axis)]
    return Sheet(pid, "lower", elems, False, _corner_sweeps(elems, False))


def _half_plane_path(start: G, vectors: Sequence[G], axis: G, lower: bool) -> list[tuple[G, G]]:
    pts = [start]
    for v in vectors:
        pts.append(pts[-1] + v)
    k = _far_factor(pts, axis)
    far_left = pts[0] - axis * G(k)
    far_right = pts[-1] + axis * G(k)
    path = [(far_left, pts[0])] + [(pts[i], pts[i + 1]) for i in range(len(vectors))] + [(pts[-1], far_right)]
    return path


def check_half_plane(vectors: Sequence[G], axis: G) -> None:
    """The broken line (ray, vectors, ray) bounding a basic domain is simple."""
    for v in vectors:
        if not v:
            raise SelfIntersection("zero vector in a basic domain")
    _check_simple_path(_half_plane_path(G(0), vectors, axis, False), False, SelfIntersection)


def arguments_monotone(vectors: Sequence[G], decreasing: bool = True) -> bool:
    """Sufficient non-intersection condition for a horizontal axis: every
    vector points into the open right half-plane or straight up, and the
    arguments are monotone."""
    for v in vectors:
        if not (v.re > 0 or (v.re == 0 and v.im > 0)):
            return False
    for a, b in zip(vectors, vectors[1:]):
        c = cross(a, b)
        if decreasing and c > 0:
            return False
        if not decreasing and c < 0:
            return False
    return True


def default_cylinder_direction(vectors: Sequence[G]) -> G:
    total = sum(vectors, G(0))
    return G(0, 1) * total


def check_cylinder(vectors: Sequence[G], direction: G) -> None:
    if not vectors:
        raise SelfIntersection("a cylinder end needs at least one vector")
    for v in vectors:
        if not v:
            raise SelfIntersection("zero vector in a cylinder end")
    total = sum(vectors, G(0))
    if not total:
        raise SelfIntersection("cylinder circumference vector is zero")
    if cross(total, direction) <= 0:
        raise SelfIntersection("(circumference, ray direction) is not a positive basis")
    pts = [G(0)]
    for v in vectors:
        pts.append(pts[-1] + v)
    if same_direction(vectors[0], direction) or same_direction(-vectors[-1], direction):
        raise SelfIntersection("cylinder boundary runs along a bounding ray")
    k = _far_factor(pts, direction)
    path = [(pts[0] + direction * G(k), pts[0])] + [(pts[i], pts[i + 1]) for i in range(len(vectors))]
    path.append((pts[-1], pts[-1] + direction * G(k)))
    _check_simple_path(path, False, SelfIntersection)


def check_polygon(vectors: Sequence[G]) -> None:
    if len(vectors) < 3:
        raise DegeneratePolygon("a polygon needs at least three edges")
    if sum(vectors, G(0)):
        raise DegeneratePolygon("polygon edges do not close up")
    pts = [G(0)]
    for v in vectors[:-1]:
        pts.append(pts[-1] + v)
    path = [(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))]
    _check_simple_path(path, True, DegeneratePolygon)
    area2 = sum((cross(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))), Fraction(0))
    if area2 <= 0:
        raise DegeneratePolygon("polygon is not positively oriented")


@dataclass(frozen=True)
class Piece:
    """A catalog piece.

    ``vectors`` are the segments of a positive or negative domain, a cylinder
    end or a polygon; open domains use ``vectors`` for the upper broken line
    and ``lower`` for the lower one.  ``direction`` is the ray direction of a
    cylinder end.
    """

    kind: str
    id: str
    vectors: tuple[G, ...] = ()
    lower: tuple[G, ...] = ()
    direction: G | None = None

    def __init__(self, kind: str, id: str, vectors: Sequence[GaussLike] = (), lower: Sequence[GaussLike] = (),
                 direction: GaussLike | None = None):
        if kind not in KINDS:
            raise ParseError(f"unknown piece kind {kind!r}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "id", str(id))
        object.__setattr__(self, "vectors", tuple(G.coerce(v) for v in vectors))
        object.__setattr__(self, "lower", tuple(G.coerce(v) for v in lower))
        if kind == CYLINDER and direction is None and self.vectors:
            direction = default_cylinder_direction(self.vectors)
        object.__setattr__(self, "direction", None if direction is None else G.coerce(direction))

    def check(self, axis: G) -> None:
        if self.kind in (POSITIVE, NEGATIVE):
            check_half_plane(self.vectors, axis)
        elif self.kind in (OPEN_LEFT, OPEN_RIGHT):
            check_half_plane(self.vectors, axis)
            check_half_plane(self.lower, axis)
        elif self.kind == CYLINDER:
            check_cylinder(self.vectors, self.direction)
        else:
            check_polygon(self.vectors)
        if self.kind not in (OPEN_LEFT, OPEN_RIGHT) and self.lower:
            raise ParseError(f"piece {self.id}: only open domains carry lower vectors")

    def scaled(self, k: GaussLike) -> "Piece":
        k = G.coerce(k)
        d = None if self.direction is None else self.direction * k
        return Piece(self.kind, self.id, [v * k for v in self.vectors], [v * k for v in self.lower], d)

    def to_json(self) -> dict:
        d: dict = {"id": self.id, "kind": self.kind, "vectors": [v.to_json() for v in self.vectors]}
        if self.kind in (OPEN_LEFT, OPEN_RIGHT):
            d["lower"] = [v.to_json() for v in self.lower]
        if self.kind == CYLINDER:
            d["direction"] = self.direction.to_json()
        return d

    @staticmethod
    def from_json(obj) -> "Piece":
        if not isinstance(obj, dict):
            raise ParseError("piece must be a JSON object")
        try:
            direction = obj.get("direction")
            return Piece(
                obj["kind"], obj["id"],
                [G.from_json(v) for v in obj.get("vectors", [])],
                [G.from_json(v) for v in obj.get("lower", [])],
                None if direction is None else G.from_json(direction),
            )
        except KeyError as exc:
            raise ParseError(f"piece is missing {exc}") from exc


@dataclass
class _Expanded:
    sheets: list[Sheet]
    internal: list[tuple[tuple[int, int], tuple[int, int], str]]
    walk: list[tuple[int, int]]  # external boundary walk as (sheet, element)
    walk_corners: list[list[tuple[int, int]]]  # sheet corners between walk[k] and walk[k+1]
    cyclic: bool


def expand_piece(piece: Piece, axis: G) -> _Expanded:
    pid = piece.id
    if piece.kind == POSITIVE:
        sh = _upper_sheet(pid, piece.vectors, axis)
        n = len(sh.elems)
        return _Expanded([sh], [], [(0, k) for k in range(n)], [[(0, k)] for k in range(n - 1)], False)
    if piece.kind == NEGATIVE:
        sh = _lower_sheet(pid, piece.vectors, axis)
        n = len(sh.elems)
        return _Expanded([sh], [], [(0, k) for k in range(n)], [[(0, k)] for k in range(n - 1)], False)
    if piece.kind == OPEN_LEFT:
        up = _upper_sheet(pid, piece.vectors, axis)
        lo = _lower_sheet(pid, piece.lower, axis)
        nu, nl = len(up.elems), len(lo.elems)
        walk = [(0, k) for k in range(nu - 1)] + [(1, k) for k in range(1, nl)]
        corners = [[(0, k)] for k in range(nu - 2)] + [[(1, 0), (0, nu - 2)]] + [[(1, k)] for k in range(1, nl - 1)]
        return _Expanded([up, lo], [((0, nu - 1), (1, 0), TRANSLATION)], walk, corners, False)
    if piece.kind == OPEN_RIGHT:
        up = _upper_sheet(pid, piece.vectors, axis)
        lo = _lower_sheet(pid, piece.lower, axis)
        nu, nl = len(up.elems), len(lo.elems)
        walk = [(1, k) for k in range(nl - 1)] + [(0, k) for k in range(1, nu)]
        corners = [[(1, k)] for k in range(nl - 2)] + [[(0, 0), (1, nl - 2)]] + [[(0, k)] for k in range(1, nu - 1)]
        return _Expanded([up, lo], [((0, 0), (1, nl - 1), TRANSLATION)], walk, corners, False)
    if piece.kind == CYLINDER:
        elems = [Element("seg", v) for v in piece.vectors]
        corners = _corner_sweeps(elems, True)
        l = piece.direction
        corners[-1] = [Sweep(elems[0].vec, l), Sweep(l, -elems[-1].vec)]
        sh = Sheet(pid, "cylinder", elems, True, corners)
        n = len(elems)
        return _Expanded([sh], [], [(0, k) for k in range(n)], [[(0, k)] for k in range(n)], True)
    elems = [Element("seg", v) for v in piece.vectors]
    sh = Sheet(pid, "polygon", elems, True, _corner_sweeps(elems, True))
    n = len(elems)
    return _Expanded([sh], [], [(0, k) for k in range(n)], [[(0, k)] for k in range(n)], True)


# ---------------------------------------------------------------------------
# gluings and surfaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class EdgeRef:
    piece: str
    index: int

    def to_json(self) -> dict:
        return {"piece": self.piece, "index": self.index}

    @staticmethod
    def from_json(obj) -> "EdgeRef":
        try:
            return EdgeRef(str(obj["piece"]), int(obj["index"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad edge reference {obj!r}") from exc


@dataclass(frozen=True)
class Gluing:
    a: EdgeRef
    b: EdgeRef
    twist: str

    def __post_init__(self):
        if self.twist not in TWISTS:
            raise ParseError(f"unknown twist {self.twist!r}")

    def to_json(self) -> dict:
        return {"a": self.a.to_json(), "b": self.b.to_json(), "twist": self.twist}

    @staticmethod
    def from_json(obj) -> "Gluing":
        if not isinstance(obj, dict):
            raise ParseError("gluing must be a JSON object")
        try:
            return Gluing(EdgeRef.from_json(obj["a"]), EdgeRef.from_json(obj["b"]), obj["twist"])
        except KeyError as exc:
            raise ParseError(f"gluing is missing {exc}") from exc


@dataclass(frozen=True)
class PoleMark:
    label: str
    order: int
    pieces: tuple[str, ...]

    def to_json(self) -> dict:
        return {"label": self.label, "order": self.order, "pieces": list(self.pieces)}

    @staticmethod
    def from_json(obj) -> "PoleMark":
        try:
            return PoleMark(str(obj["label"]), int(obj["order"]), tuple(str(p) for p in obj["pieces"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad pole mark {obj!r}") from exc


def check_gluing_vectors(ea: Element, eb: Element, twist: str, where: str = "") -> None:
    if (ea.kind == "seg") != (eb.kind == "seg"):
        raise VectorMismatch(f"{where}: segments glue to segments and rays to rays")
    if ea.kind == "seg":
        want = -ea.vec if twist == TRANSLATION else ea.vec
        if eb.vec != want:
            raise VectorMismatch(f"{where}: {twist} needs u'={want}, got u={ea.vec}, u'={eb.vec}")
        return
    if {ea.kind, eb.kind} != {"in", "out"}:
        raise VectorMismatch(f"{where}: a ray arriving from infinity must meet a ray leaving to infinity")
    want = -ea.vec if twist == TRANSLATION else ea.vec
    if not same_direction(eb.vec, want):
        raise VectorMismatch(f"{where}: ray directions incompatible with {twist}")


class FlatSurface:
    """Pieces, gluings and pole marks; validated on construction."""

    def __init__(self, pieces: Sequence[Piece], gluings: Sequence[Gluing], pole_marks: Sequence[PoleMark] = (),
                 axis: GaussLike = 1, check: bool = True):
        self.pieces: tuple[Piece, ...] = tuple(pieces)
        self.gluings: tuple[Gluing, ...] = tuple(gluings)
        self.pole_marks: tuple[PoleMark, ...] = tuple(pole_marks)
        self.axis: G = G.coerce(axis)
        if not self.axis:
            raise ParseError("axis must be nonzero")
        ids = [p.id for p in self.pieces]
        if len(set(ids)) != len(ids):
            raise ParseError("duplicate piece ids")
        self._by_id = {p.id: p for p in self.pieces}
        self._expanded = {p.id: expand_piece(p, self.axis) for p in self.pieces}
        if check:
            # gluings first: a single edited vector shows up as a mismatch with its partner
            self._check_gluings()
            for p in self.pieces:
                p.check(self.axis)

    # -- lookups ---------------------------------------------------------
    def piece(self, pid: str) -> Piece:
        try:
            return self._by_id[pid]
        except KeyError:
            raise MalformedSurface(f"no piece {pid!r}") from None

    def expansion(self, pid: str) -> _Expanded:
        return self._expanded[pid]

    def walk_length(self, pid: str) -> int:
        return len(self._expanded[pid].walk)

    def element(self, ref: EdgeRef) -> Element:
        ex = self._expanded.get(ref.piece)
        if ex is None:
            raise MalformedSurface(f"no piece {ref.piece!r}")
        if not 0 <= ref.index < len(ex.walk):
            raise MalformedSurface(f"edge index {ref.index} out of range for {ref.piece}")
        s, k = ex.walk[ref.index]
        return ex.sheets[s].elems[k]

    def edge_refs(self) -> list[EdgeRef]:
        return [EdgeRef(p.id, k) for p in self.pieces for k in range(len(self._expanded[p.id].walk))]

    def partner(self) -> dict[EdgeRef, tuple[EdgeRef, str]]:
        out = {}
        for g in self.gluings:
            out[g.a] = (g.b, g.twist)
            out[g.b] = (g.a, g.twist)
        return out

    def _check_gluings(self) -> None:
        seen: set[EdgeRef] = set()
        for g in self.gluings:
            for e in (g.a, g.b):
                if e in seen:
                    raise AlreadyGlued(f"edge {e.piece}[{e.index}] glued twice")
                seen.add(e)
            if g.a == g.b:
                raise VectorMismatch("an edge cannot be glued to itself")
            check_gluing_vectors(self.element(g.a), self.element(g.b), g.twist, f"{g.a.piece}[{g.a.index}]~{g.b.piece}[{g.b.index}]")
        for e in self.edge_refs():
            if e not in seen:
                raise FreeEdge(f"edge {e.piece}[{e.index}] is not glued")

    # -- derived surfaces ------------------------------------------------
    def scaled(self, k: GaussLike) -> "FlatSurface":
        """Multiply every vector (and the axis) by ``k``."""
        k = G.coerce(k)
        return FlatSurface([p.scaled(k) for p in self.pieces], self.gluings, self.pole_marks, self.axis * k)

    # -- serialization ---------------------------------------------------
    def to_json(self) -> dict:
        return {
            "axis": self.axis.to_json(),
            "pieces": [p.to_json() for p in self.pieces],
            "gluings": [g.to_json() for g in self.gluings],
            "pole_marks": [m.to_json() for m in self.pole_marks],
        }

    @staticmethod
    def from_json(obj) -> "FlatSurface":
        if not isinstance(obj, dict):
            raise ParseError("surface must be a JSON object")
        try:
            axis = G.from_json(obj["axis"]) if "axis" in obj else G(1)
            return FlatSurface(
                [Piece.from_json(p) for p in obj["pieces"]],
                [Gluing.from_json(g) for g in obj["gluings"]],
                [PoleMark.from_json(m) for m in obj.get("pole_marks", [])],
                axis,
            )
        except KeyError as exc:
            raise ParseError(f"surface is missing {exc}") from exc


class SurfaceBuilder:
    """Incremental construction with eager convention checks."""

    def __init__(self, axis: GaussLike = 1):
        self.axis = G.coerce(axis)
        self.pieces: list[Piece] = []
        self.gluings: list[Gluing] = []
        self.pole_marks: list[PoleMark] = []
        self._exp: dict[str, _Expanded] = {}
        self._used: set[EdgeRef] = set()

    def add(self, piece: Piece) -> Piece:
        if piece.id in self._exp:
            raise ParseError(f"duplicate piece id {piece.id!r}")
        piece.check(self.axis)
        self.pieces.append(piece)
        self._exp[piece.id] = expand_piece(piece, self.axis)
        return piece

    def walk_length(self, pid: str) -> int:
        return len(self._exp[pid].walk)

    def element(self, ref: EdgeRef) -> Element:
        ex = self._exp.get(ref.piece)
        if ex is None or not 0 <= ref.index < len(ex.walk):
            raise MalformedSurface(f"no edge {ref}")
        s, k = ex.walk[ref.index]
        return ex.sheets[s].elems[k]

    def glue(self, a: EdgeRef, b: EdgeRef, twist: str) -> Gluing:
        for e in (a, b):
            if e in self._used:
                raise AlreadyGlued(f"edge {e.piece}[{e.index}] is already glued")
        if a == b:
            raise VectorMismatch("an edge cannot be glued to itself")
        check_gluing_vectors(self.element(a), self.element(b), twist, f"{a.piece}[{a.index}]~{b.piece}[{b.index}]")
        g = Gluing(a, b, twist)
        self._used.update((a, b))
        self.gluings.append(g)
        return g

    def mark_pole(self, label: str, order: int, pieces: Iterable[str]) -> None:
        self.pole_marks.append(PoleMark(label, order, tuple(pieces)))

    def free_edges(self) -> list[EdgeRef]:
        return [EdgeRef(p.id, k) for p in self.pieces for k in range(len(self._exp[p.id].walk))
                if EdgeRef(p.id, k) not in self._used]

    def build(self) -> FlatSurface:
        return FlatSurface(self.pieces, self.gluings, self.pole_marks, self.axis)


def glue(builder: SurfaceBuilder, gluing: Gluing) -> SurfaceBuilder:
    builder.glue(gluing.a, gluing.b, gluing.twist)
    return builder


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


class _UF:
    def __init__(self, n: int):
        self.p = list(range(n))

    def find(self, x: int) -> int:
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.p[max(ra, rb)] = min(ra, rb)


@dataclass(frozen=True)
class LocalInvariants:
    genus: int
    zero_orders: tuple[int, ...]
    pole_orders: tuple[int, ...]
    residues: tuple[tuple[str, G], ...]
    connected: bool
    primitive: bool
    marked_points: int = 0

    def __init__(self, genus: int, zero_orders: Iterable[int], pole_orders: Iterable[int],
                 residues: dict | Iterable[tuple[str, G]], connected: bool, primitive: bool, marked_points: int = 0):
        object.__setattr__(self, "genus", genus)
        zs = [a for a in zero_orders]
        object.__setattr__(self, "zero_orders", tuple(sorted((a for a in zs if a % 2), reverse=True))
                           + tuple(sorted((a for a in zs if a % 2 == 0), reverse=True)))
        object.__setattr__(self, "pole_orders", tuple(sorted(pole_orders)))
        items = residues.items() if isinstance(residues, dict) else residues
        object.__setattr__(self, "residues", tuple(sorted(((str(k), G.coerce(v)) for k, v in items), key=lambda t: t[0])))
        object.__setattr__(self, "connected", connected)
        object.__setattr__(self, "primitive", primitive)
        object.__setattr__(self, "marked_points", marked_points)

    @property
    def residue_map(self) -> dict[str, G]:
        return dict(self.residues)

    def signature(self) -> StratumSignature:
        return StratumSignature.from_orders(self.genus, self.zero_orders + self.pole_orders)

    def degree_identity_holds(self) -> bool:
        return sum(self.zero_orders) + sum(self.pole_orders) == 4 * self.genus - 4

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "zero_orders": list(self.zero_orders),
            "pole_orders": list(self.pole_orders),
            "residues": {k: v.to_json() for k, v in self.residues},
            "connected": self.connected,
            "primitive": self.primitive,
            "marked_points": self.marked_points,
        }

    @staticmethod
    def from_json(obj) -> "LocalInvariants":
        return LocalInvariants(obj["genus"], obj["zero_orders"], obj["pole_orders"],
                               {k: G.from_json(v) for k, v in obj.get("residues", {}).items()},
                               obj["connected"], obj["primitive"], obj.get("marked_points", 0))


@dataclass
class SurfaceReport:
    """Full output of :func:`analyze`: invariants plus combinatorial detail."""

    invariants: LocalInvariants
    vertex_angles: list[int]  # cone angle of each vertex class, in units of pi
    vertex_corners: list[list[tuple[str, int, int]]]  # (piece, sheet, corner) per class
    poles: list[dict]
    euler_characteristic: int


def analyze(surface: FlatSurface) -> SurfaceReport:
    # global numbering of sheets and corners
    sheets: list[Sheet] = []
    sheet_index: dict[tuple[str, int], int] = {}
    for p in surface.pieces:
        ex = surface.expansion(p.id)
        for s_local, sh in enumerate(ex.sheets):
            sheet_index[(p.id, s_local)] = len(sheets)
            sheets.append(sh)
    corner_base = []
    total = 0
    for sh in sheets:
        corner_base.append(total)
        total += len(sh.corners)
    uf = _UF(total)

    def endpoint(si: int, k: int, which: str) -> int | None:
        sh = sheets[si]
        c = sh.start_corner(k) if which == "start" else sh.end_corner(k)
        return None if c is None else corner_base[si] + c

    # all gluings at sheet level: (sheet, elem), (sheet, elem), twist
    sheet_gluings: list[tuple[tuple[int, int], tuple[int, int], str]] = []
    for p in surface.pieces:
        ex = surface.expansion(p.id)
        for (sa, ka), (sb, kb), tw in ex.internal:
            sheet_gluings.append(((sheet_index[(p.id, sa)], ka), (sheet_index[(p.id, sb)], kb), tw))
    seg_gluings = 0
    for g in surface.gluings:
        exa, exb = surface.expansion(g.a.piece), surface.expansion(g.b.piece)
        sa, ka = exa.walk[g.a.index]
        sb, kb = exb.walk[g.b.index]
        A = (sheet_index[(g.a.piece, sa)], ka)
        B = (sheet_index[(g.b.piece, sb)], kb)
        sheet_gluings.append((A, B, g.twist))
        if sheets[A[0]].elems[A[1]].kind == "seg":
            seg_gluings += 1

    for (sa, ka), (sb, kb), _tw in sheet_gluings:
        for x, y in ((endpoint(sa, ka, "start"), endpoint(sb, kb, "end")),
                     (endpoint(sa, ka, "end"), endpoint(sb, kb, "start"))):
            if (x is None) != (y is None):
                raise MalformedSurface("a finite vertex is glued to infinity")
            if x is not None:
                uf.union(x, y)

    # vertex classes and cone angles
    classes: dict[int, list[int]] = {}
    for c in range(total):
        classes.setdefault(uf.find(c), []).append(c)
    corner_owner = []
    for si, sh in enumerate(sheets):
        for k in range(len(sh.corners)):
            corner_owner.append((si, k))
    angles = []
    vertex_corners = []
    for root in sorted(classes):
        halfturns = 0
        members = []
        for c in classes[root]:
            si, k = corner_owner[c]
            for sw in sheets[si].corners[k]:
                halfturns += ccw_crossings(sw.frm, sw.to)
            members.append((sheets[si].piece, si, k))
        if halfturns < 1:
            raise NonIntegerAngle("vertex with nonpositive cone angle")
        angles.append(halfturns)
        vertex_corners.append(members)

    # connectivity and primitivity over sheets
    n = len(sheets)
    conn = _UF(n)
    adj: dict[int, list[tuple[int, int]]] = {i: [] for i in range(n)}
    for (sa, _), (sb, _), tw in sheet_gluings:
        conn.union(sa, sb)
        sign = 1 if tw == TRANSLATION else -1
        adj[sa].append((sb, sign))
        adj[sb].append((sa, sign))
    connected = len({conn.find(i) for i in range(n)}) <= 1
    primitive = False
    colour: dict[int, int] = {}
    for start in range(n):
        if start in colour:
            continue
        colour[start] = 1
        stack = [start]
        while stack:
            u = stack.pop()
            for v, sign in adj[u]:
                want = colour[u] * sign
                if v not in colour:
                    colour[v] = want
                    stack.append(v)
                elif colour[v] != want:
                    primitive = True

    # poles: cycles of half-planes through ray gluings, and cylinders
    ray_next: dict[int, tuple[int, str]] = {}
    for (sa, ka), (sb, kb), tw in sheet_gluings:
        ea = sheets[sa].elems[ka]
        if ea.kind == "seg":
            continue
        if ea.kind == "out":
            ray_next[sa] = (sb, tw)
        else:
            ray_next[sb] = (sa, tw)
    poles = []
    visited: set[int] = set()
    for si, sh in enumerate(sheets):
        if sh.kind == "cylinder":
            total_vec = sum((e.vec for e in sh.elems), G(0))
            poles.append({"order": -2, "pieces": {sh.piece}, "residue": total_vec.square(), "sheets": [si]})
            continue
        if sh.kind == "polygon" or si in visited:
            continue
        cyc = []
        eps = 1
        acc = G(0)
        cur = si
        while True:
            if cur in visited:
                raise MalformedSurface("ray gluings do not form cycles")
            visited.add(cur)
            cyc.append(cur)
            seg_sum = sum((e.vec for e in sheets[cur].elems if e.kind == "seg"), G(0))
            acc = acc + seg_sum * G(eps)
            if cur not in ray_next:
                raise MalformedSurface("free ray")
            nxt, tw = ray_next[cur]
            if tw == HALF_TURN:
                eps = -eps
            cur = nxt
            if cur == si:
                break
        order = -(len(cyc) + 2)
        even = eps == 1
        if even != (order % 2 == 0):
            raise MalformedSurface("pole holonomy disagrees with its order")
        poles.append({"order": order, "pieces": {sheets[c].piece for c in cyc},
                      "residue": acc.square() if even else None, "sheets": cyc})

    faces = len(poles) + sum(1 for sh in sheets if sh.kind == "polygon")
    chi = len(angles) - seg_gluings + faces
    if connected:
        if chi % 2 or chi > 2:
            raise MalformedSurface(f"Euler characteristic {chi} is not that of a closed orientable surface")
        genus = (2 - chi) // 2
    else:
        genus = -1

    # labels from pole marks
    residues: dict[str, G] = {}
    labels = _label_poles(surface, poles)
    for pole, label in zip(poles, labels):
        pole["label"] = label
        if pole["residue"] is not None:
            residues[label] = pole["residue"]
    zero_orders = [a - 2 for a in angles if a != 2]
    marked = sum(1 for a in angles if a == 2)
    inv = LocalInvariants(genus, zero_orders, [p["order"] for p in poles], residues, connected, primitive, marked)
    return SurfaceReport(inv, angles, vertex_corners, poles, chi)


def _label_poles(surface: FlatSurface, poles: list[dict]) -> list[str]:
    if not surface.pole_marks:
        return [f"pole{k}" for k in range(len(poles))]
    marks = {frozenset(m.pieces): m for m in surface.pole_marks}
    if len(marks) != len(surface.pole_marks):
        raise PoleMarkMismatch("two pole marks list the same pieces")
    labels = []
    used = set()
    for pole in poles:
        m = marks.get(frozenset(pole["pieces"]))
        if m is None:
            raise PoleMarkMismatch(f"no pole mark for the pole made of {sorted(pole['pieces'])}")
        if m.order != pole["order"]:
            raise PoleMarkMismatch(f"pole {m.label} declared of order {m.order}, its sheets give {pole['order']}")
        labels.append(m.label)
        used.add(m.label)
    if len(used) != len(surface.pole_marks):
        raise PoleMarkMismatch("a pole mark does not correspond to any pole")
    return labels


def verify(surface: FlatSurface) -> LocalInvariants:
    """Recompute the local invariants of a glued surface."""
    return analyze(surface).invariants


# ---------------------------------------------------------------------------
# loops and rotation numbers
# ---------------------------------------------------------------------------


class _Lifted:
    """A direction together with its number of completed full turns."""

    def __init__(self, d: G):
        self.m = 0
        self.d = d

    def ccw(self, to: G) -> None:
        if same_direction(self.d, to):
            self.m += 1
        elif not arg_less(self.d, to):
            self.m += 1
        self.d = to

    def cw(self, to: G) -> None:
        if same_direction(self.d, to):
            self.m -= 1
        elif arg_less(self.d, to):
            self.m -= 1
        self.d = to

    def ccw_sweeps(self, sweeps: Sequence[Sweep], eps: int) -> None:
        for sw in sweeps:
            if not same_direction(self.d, sw.frm * G(eps)):
                self._fail()
            self.ccw(sw.to * G(eps))

    def cw_sweeps(self, sweeps: Sequence[Sweep], eps: int) -> None:
        for sw in reversed(sweeps):
            if not same_direction(self.d, sw.to * G(eps)):
                self._fail()
            self.cw(sw.frm * G(eps))

    @staticmethod
    def _fail():
        raise NotClosed("loop directions are inconsistent")


@dataclass(frozen=True)
class Hop:
    """The part of a loop inside one piece: it enters through boundary element
    ``entry`` and leaves through ``exit``.  ``route`` selects the side of the
    boundary the arc follows in a cylinder end or polygon ("forward" follows
    the boundary walk from entry to exit); it is ignored for half-plane pieces,
    where only the finite side exists."""

    piece: str
    entry: int
    exit: int
    route: str = "forward"

    def to_json(self) -> dict:
        return {"piece": self.piece, "entry": self.entry, "exit": self.exit, "route": self.route}

    @staticmethod
    def from_json(obj) -> "Hop":
        return Hop(str(obj["piece"]), int(obj["entry"]), int(obj["exit"]), obj.get("route", "forward"))


def _hop_forward(ex: _Expanded, hop: Hop) -> bool:
    if ex.cyclic:
        return hop.route != "backward"
    return hop.entry < hop.exit


def _arc_corners(ex: _Expanded, i: int, j: int, forward: bool) -> list[list[tuple[int, int]]]:
    """Walk corners met going from element ``i`` to element ``j``."""
    n = len(ex.walk)
    out = []
    if forward:
        k = i
        while k != j:
            out.append(ex.walk_corners[k % len(ex.walk_corners)] if ex.cyclic else ex.walk_corners[k])
            k = (k + 1) % n if ex.cyclic else k + 1
    else:
        k = i
        while k != j:
            prev = (k - 1) % n if ex.cyclic else k - 1
            out.append(ex.walk_corners[prev])
            k = prev
    return out


def loop_index(surface: FlatSurface, loop: Sequence[Hop]) -> int:
    """Total turning of a closed loop, counted in half-turns.

    Inside each piece the loop runs parallel to the boundary between its
    entry and exit points; it crosses glued edges transversally.
    """
    if not loop:
        raise NotClosed("empty loop")
    partner = surface.partner()
    for k, hop in enumerate(loop):
        nxt = loop[(k + 1) % len(loop)]
        if hop.entry == hop.exit:
            raise NotClosed("a hop must leave through a different edge")
        out_ref = EdgeRef(hop.piece, hop.exit)
        if out_ref not in partner or partner[out_ref][0] != EdgeRef(nxt.piece, nxt.entry):
            raise NotClosed(f"hop {k} exits through {hop.piece}[{hop.exit}], not glued to the next entry")

    def sheet_elem(pid: str, idx: int) -> Element:
        return surface.element(EdgeRef(pid, idx))

    eps = 1
    first = loop[0]
    e0 = sheet_elem(first.piece, first.entry)
    start_dir = G(0, 1) * e0.vec
    tr = _Lifted(start_dir)
    for k, hop in enumerate(loop):
        ex = surface.expansion(hop.piece)
        if not 0 <= hop.exit < len(ex.walk) or not 0 <= hop.entry < len(ex.walk):
            raise NotClosed("edge index out of range")
        e_in = sheet_elem(hop.piece, hop.entry)
        e_out = sheet_elem(hop.piece, hop.exit)
        if not same_direction(tr.d, G(0, 1) * e_in.vec * G(eps)):
            raise NotClosed("loop enters against the inward normal")
        forward = _hop_forward(ex, hop)
        corners = _arc_corners(ex, hop.entry, hop.exit, forward)
        if forward:
            tr.cw(e_in.vec * G(eps))
            for corner in corners:
                sweeps = [ex.sheets[s].corners[c] for s, c in corner]
                flat = [sw for group in sweeps for sw in group]
                tr.ccw(-tr.d)
                tr.cw_sweeps(flat, eps)
            tr.cw(G(0, -1) * e_out.vec * G(eps))
        else:
            tr.ccw(-e_in.vec * G(eps))
            for corner in corners:
                sweeps = [ex.sheets[s].corners[c] for s, c in corner]
                flat = [sw for group in sweeps for sw in group]
                tr.cw(-tr.d)
                tr.ccw_sweeps(flat, eps)
            tr.ccw(G(0, -1) * e_out.vec * G(eps))
        _, twist = partner[EdgeRef(hop.piece, hop.exit)]
        if twist == HALF_TURN:
            eps = -eps
    end_dir = tr.d
    if same_direction(end_dir, start_dir):
        delta = 0
    elif same_direction(end_dir, -start_dir):
        delta = 1 if _half(start_dir) == 0 else -1
    else:
        raise NotClosed("loop does not close up")
    return 2 * tr.m + delta


def _chord_crossings(ex: _Expanded, c1, c2) -> int:
    (a1, b1, h1), (a2, b2, h2) = c1, c2
    if not ex.cyclic or ex.sheets[0].kind == "polygon":
        if ex.cyclic:
            n = len(ex.walk)
            lo, hi = min(a1, b1), max(a1, b1)
            inside = sum(1 for x in (a2, b2) if lo < x < hi)
            return 1 if inside == 1 else 0
        lo, hi = min(a1, b1), max(a1, b1)
        inside = sum(1 for x in (a2, b2) if lo < x < hi)
        return 1 if inside == 1 else 0
    n = len(ex.walk)

    def arc(h, a, b):
        # forward arc from a to b (or from b to a when routed backward), as a cyclic interval
        return (a, b) if h.route != "backward" else (b, a)

    def inside(x, iv):
        s, e = iv
        # rank positions starting from s going forward
        def rank(p):
            d = (p[0] - s[0]) % n
            if d == 0 and p[1] < s[1]:
                d = n
            return (d, p[1])
        return rank(s) < rank(x) < rank(e)

    i1 = arc(h1, a1, b1)
    i2 = arc(h2, a2, b2)
    in12 = sum(1 for x in i2 if inside(x, i1))
    in21 = sum(1 for x in i1 if inside(x, i2))
    if in12 == 1 and in21 == 1:
        return 1
    if in12 == 2 and in21 == 2:
        return 2
    return 0


def intersection_count(surface: FlatSurface, loop1: Sequence[Hop], loop2: Sequence[Hop]) -> int:
    """Number of crossings of two loops realised with one tight arc per hop.

    Where both loops cross the same glued edge the first crosses at one third
    and the second at two thirds of the edge (measured along side ``a`` of
    the gluing).
    """
    gl_side = {}
    for g in surface.gluings:
        gl_side[g.a] = "a"
        gl_side[g.b] = "b"

    def chords(loop, t):
        out = []
        for k, hop in enumerate(loop):
            ein = EdgeRef(hop.piece, hop.entry)
            eout = EdgeRef(hop.piece, hop.exit)
            tin = t if gl_side[ein] == "a" else 1 - t
            tout = t if gl_side[eout] == "a" else 1 - t
            out.append((hop.piece, (hop.entry, tin), (hop.exit, tout), hop))
        return out

    c1 = chords(loop1, Fraction(1, 3))
    c2 = chords(loop2, Fraction(2, 3))
    total = 0
    for p1, a1, b1, h1 in c1:
        for p2, a2, b2, h2 in c2:
            if p1 != p2:
                continue
            ex = surface.expansion(p1)
            total += _chord_crossings(ex, (a1, b1, h1), (a2, b2, h2))
    return total


def _piece_cycles(surface: FlatSurface, max_len: int = 12) -> list[list[Hop]]:
    """Simple cycles of the piece adjacency graph, as loops."""
    partner = surface.partner()
    out: list[list[Hop]] = []
    seen: set = set()
    order = {p.id: k for k, p in enumerate(surface.pieces)}

    def extend(path: list[Hop], entry_piece: str, entry_index: int, start_ref: EdgeRef, visited: set):
        # at piece entry_piece having entered through entry_index
        pid = entry_piece
        for k in range(surface.walk_length(pid)):
            if k == entry_index:
                continue
            out_ref = EdgeRef(pid, k)
            nxt, _ = partner[out_ref]
            hop = Hop(pid, entry_index, k)
            if nxt == start_ref:
                cyc = path + [hop]
                key = frozenset((h.piece, h.entry, h.exit) for h in cyc)
                key2 = frozenset((h.piece, h.exit, h.entry) for h in cyc)
                if key not in seen and key2 not in seen:
                    seen.add(key)
                    out.append(cyc)
                continue
            if nxt.piece in visited or len(path) + 1 >= max_len:
                continue
            if order[nxt.piece] < order[start_ref.piece]:
                continue
            extend(path + [hop], nxt.piece, nxt.index, start_ref, visited | {nxt.piece})

    for p in surface.pieces:
        for k in range(surface.walk_length(p.id)):
            start = EdgeRef(p.id, k)
            extend([], p.id, k, start, {p.id})
    return out


@dataclass(frozen=True)
class RotationCertificate:
    rho: int
    alpha: tuple[Hop, ...]
    beta: tuple[Hop, ...]
    index_alpha: int
    index_beta: int

    def to_json(self) -> dict:
        return {"rho": self.rho, "alpha": [h.to_json() for h in self.alpha], "beta": [h.to_json() for h in self.beta],
                "index_alpha": self.index_alpha, "index_beta": self.index_beta}


def rotation_number_from_loops(surface: FlatSurface, alpha: Sequence[Hop], beta: Sequence[Hop],
                               inv: LocalInvariants | None = None) -> RotationCertificate:
    """gcd of the singularity orders and the indices of two loops meeting once."""
    inv = inv or verify(surface)
    if intersection_count(surface, alpha, beta) != 1:
        raise NotClosed("the two loops do not meet exactly once")
    ia, ib = loop_index(surface, alpha), loop_index(surface, beta)
    g = 0
    for x in inv.zero_orders + inv.pole_orders + (ia, ib):
        g = math.gcd(g, abs(x))
    return RotationCertificate(g, tuple(alpha), tuple(beta), ia, ib)


def find_rotation_certificates(surface: FlatSurface, limit: int = 50) -> list[RotationCertificate]:
    """Search pairs of simple loops meeting exactly once (genus one only)."""
    inv = verify(surface)
    if inv.genus != 1:
        raise MalformedSurface("rotation numbers are defined for genus-one surfaces")
    loops = _piece_cycles(surface)
    certs = []
    for l1, l2 in itertools.combinations(loops, 2):
        pieces1 = [h.piece for h in l1]
        pieces2 = [h.piece for h in l2]
        if len(set(pieces1)) != len(pieces1) or len(set(pieces2)) != len(pieces2):
            continue
        if intersection_count(surface, l1, l2) != 1:
            continue
        certs.append(rotation_number_from_loops(surface, l1, l2, inv))
        if len(certs) >= limit:
            break
    return certs


# ---------------------------------------------------------------------------
# polar parts
# ---------------------------------------------------------------------------


@dataclass
class PolarPart:
    """A neighbourhood of one pole, made of pieces glued along their rays.

    ``upper`` and ``lower`` list the free segment edges in the order of the
    defining vectors; they are what the rest of a construction glues to.
    """

    order: int
    pieces: list[Piece]
    gluings: list[Gluing]
    upper: list[EdgeRef] = field(default_factory=list)
    lower: list[EdgeRef] = field(default_factory=list)

    @property
    def piece_ids(self) -> list[str]:
        return [p.id for p in self.pieces]

    def add_to(self, builder: SurfaceBuilder, label: str | None = None) -> "PolarPart":
        for p in self.pieces:
            builder.add(p)
        for g in self.gluings:
            builder.glue(g.a, g.b, g.twist)
        if label is not None:
            builder.mark_pole(label, self.order, self.piece_ids)
        return self


def _seg_refs(pid: str, n: int) -> list[EdgeRef]:
    return [EdgeRef(pid, k) for k in range(1, n + 1)]


def _lower_refs(pid: str, n: int) -> list[EdgeRef]:
    # the lower walk lists -w_n, ..., -w_1; return refs in the order w_1..w_n
    return [EdgeRef(pid, n + 1 - j) for j in range(1, n + 1)]


def make_polar_part_even(b: int, tau: int, upper: Sequence[GaussLike], lower: Sequence[GaussLike],
                         prefix: str = "P", axis: GaussLike = 1) -> PolarPart:
    """Polar part of even order ``b >= 4`` and type ``tau``.

    Made of a positive domain on ``upper``, a negative domain on ``lower``,
    ``tau - 1`` open-left domains and ``b/2 - 1 - tau`` open-right domains.
    Its residue is ``(sum(upper) - sum(lower))**2``.
    """
    if b % 2 or b < 4:
        raise BadOrder(f"an even polar part needs an even order >= 4, got {b}")
    if not 1 <= tau <= b // 2 - 1:
        raise BadType(f"type must lie in 1..{b // 2 - 1} for order {b}, got {tau}")
    axis = G.coerce(axis)
    upper = [G.coerce(v) for v in upper]
    lower = [G.coerce(v) for v in lower]
    dp = Piece(POSITIVE, f"{prefix}+", upper)
    dm = Piece(NEGATIVE, f"{prefix}-", lower)
    dp.check(axis)
    dm.check(axis)
    lefts = [Piece(OPEN_LEFT, f"{prefix}g{k}") for k in range(1, tau)]
    rights = [Piece(OPEN_RIGHT, f"{prefix}d{k}") for k in range(1, b // 2 - tau)]
    glues = []
    last_dp, last_dm = len(upper) + 1, len(lower) + 1
    # left cycle: D- left ray, open-left domains, D+ left ray
    prev = EdgeRef(dm.id, last_dm)
    for g in lefts:
        glues.append(Gluing(prev, EdgeRef(g.id, 0), TRANSLATION))
        prev = EdgeRef(g.id, 1)
    glues.append(Gluing(prev, EdgeRef(dp.id, 0), TRANSLATION))
    # right cycle: D+ right ray, open-right domains, D- right ray
    prev = EdgeRef(dp.id, last_dp)
    for d in rights:
        glues.append(Gluing(prev, EdgeRef(d.id, 0), TRANSLATION))
        prev = EdgeRef(d.id, 1)
    glues.append(Gluing(prev, EdgeRef(dm.id, 0), TRANSLATION))
    return PolarPart(-b, [dp, dm] + lefts + rights, glues, _seg_refs(dp.id, len(upper)), _lower_refs(dm.id, len(lower)))


def make_polar_part_order2(vectors: Sequence[GaussLike], prefix: str = "C", direction: GaussLike | None = None) -> PolarPart:
    """Half-infinite cylinder: a pole of order 2 with residue ``sum(vectors)**2``."""
    piece = Piece(CYLINDER, prefix, vectors, direction=direction)
    piece.check(G(1))
    return PolarPart(-2, [piece], [], [EdgeRef(prefix, k) for k in range(len(piece.vectors))], [])


def make_polar_part_odd(c: int, side: str, vectors: Sequence[GaussLike], prefix: str = "Q",
                        axis: GaussLike = 1) -> PolarPart:
    """Polar part of odd order ``c >= 3`` (no residue).

    ``side="upper"``: a positive domain on ``vectors`` and ``(c-3)/2``
    open-left domains, closed up by a half-turn between rays.
    ``side="lower"``: the mirror construction with a negative domain and
    open-right domains.
    """
    if c % 2 == 0 or c < 3:
        raise BadOrder(f"an odd polar part needs an odd order >= 3, got {c}")
    if side not in ("upper", "lower"):
        raise BadType(f"side must be 'upper' or 'lower', got {side!r}")
    axis = G.coerce(axis)
    vectors = [G.coerce(v) for v in vectors]
    ell = (c - 1) // 2
    n = len(vectors)
    glues = []
    if side == "upper":
        main = Piece(POSITIVE, f"{prefix}+", vectors)
        main.check(axis)
        extra = [Piece(OPEN_LEFT, f"{prefix}g{k}") for k in range(1, ell)]
        prev = EdgeRef(main.id, 0)  # D+ left ray, arriving from infinity
        for g in extra:
            glues.append(Gluing(prev, EdgeRef(g.id, 1), TRANSLATION))
            prev = EdgeRef(g.id, 0)
        glues.append(Gluing(prev, EdgeRef(main.id, n + 1), HALF_TURN))
        return PolarPart(-c, [main] + extra, glues, _seg_refs(main.id, n), [])
    main = Piece(NEGATIVE, f"{prefix}-", vectors)
    main.check(axis)
    extra = [Piece(OPEN_RIGHT, f"{prefix}d{k}") for k in range(1, ell)]
    prev = EdgeRef(main.id, 0)  # D- right ray, arriving from infinity
    for d in extra:
        glues.append(Gluing(prev, EdgeRef(d.id, 1), TRANSLATION))
        prev = EdgeRef(d.id, 0)
    glues.append(Gluing(prev, EdgeRef(main.id, n + 1), HALF_TURN))
    return PolarPart(-c, [main] + extra, glues, [], _lower_refs(main.id, n))
