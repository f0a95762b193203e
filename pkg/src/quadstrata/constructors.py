"""Executable gluing recipes producing flat-surface witnesses.

Each constructor returns a :class:`Witness`: the surface, the invariants it
is claimed to have and, in genus one, a rotation-number certificate.  The
claim is built from the request, never from the surface, so that
``verify(witness.surface) == witness.claimed`` is a real check.

Pole labels follow the residue configuration: ``e{i}`` for the ``i``-th pole
of even order at least 4, ``o{j}`` for odd poles and ``d{k}`` for double
poles.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import search as _search
from .core import (
    WHOLE,
    ComponentSelector,
    GaussianRational,
    GaussLike,
    QuadStrataError,
    RootedResidueConfig,
    StratumSignature,
    canonical_root,
    check_component,
    legal_rotation_numbers,
)
from .oracle import classify
from .surface import (
    CYLINDER,
    HALF_TURN,
    POLYGON,
    TRANSLATION,
    DegeneratePolygon,
    EdgeRef,
    FlatSurface,
    Gluing,
    LocalInvariants,
    Piece,
    PoleMark,
    RotationCertificate,
    SurfaceBuilder,
    SurfaceError,
    arg_less,
    check_half_plane,
    find_rotation_certificates,
    make_polar_part_even,
    make_polar_part_odd,
    make_polar_part_order2,
    verify,
)

G = GaussianRational


class ConstructionError(QuadStrataError):
    code = "ConstructionError"


class ObstructedConfiguration(ConstructionError):
    code = "ObstructedConfiguration"


class BadSignature(ConstructionError):
    code = "BadSignature"


class ClosureFailure(ConstructionError):
    code = "ClosureFailure"


class InfeasibleLengths(ConstructionError):
    code = "InfeasibleLengths"


class AngleMismatch(ConstructionError):
    code = "AngleMismatch"


class UnsupportedCase(ConstructionError):
    code = "UnsupportedCase"


class ClaimMismatch(ConstructionError):
    code = "ClaimMismatch"


@dataclass
class Witness:
    recipe: str
    signature: StratumSignature
    config: RootedResidueConfig
    surface: FlatSurface
    claimed: LocalInvariants
    rotation: RotationCertificate | None = None
    claimed_rho: int | None = None
    metadata: dict = field(default_factory=dict)

    def check(self) -> LocalInvariants:
        """Verify the surface and compare with the claim (exact equality)."""
        got = verify(self.surface)
        if got != self.claimed:
            raise ClaimMismatch(f"{self.recipe}: claimed {self.claimed}, verified {got}")
        if self.claimed_rho is not None:
            certs = find_rotation_certificates(self.surface)
            if not certs or any(c.rho != self.claimed_rho for c in certs):
                raise ClaimMismatch(f"{self.recipe}: claimed rotation number {self.claimed_rho}, "
                                    f"loops give {sorted({c.rho for c in certs})}")
        return got

    def to_json(self) -> dict:
        d = {"recipe": self.recipe, "signature": self.signature.to_json(), "roots": self.config.to_json(),
             "surface": self.surface.to_json(), "claimed": self.claimed.to_json()}
        if self.rotation is not None:
            d["rotation"] = self.rotation.to_json()
        if self.metadata:
            d["metadata"] = self.metadata
        return d


def claimed_invariants(sig: StratumSignature, cfg: RootedResidueConfig) -> LocalInvariants:
    residues = {f"e{i}": r.square() for i, r in enumerate(cfg.even_pole_roots)}
    residues.update({f"d{k}": r.square() for k, r in enumerate(cfg.double_pole_roots)})
    zeros = [a for a in sig.zeros if a != 0]
    return LocalInvariants(sig.genus, zeros, sig.pole_orders(), residues, True, True, sum(1 for a in sig.zeros if a == 0))


def _require_realizable(sig: StratumSignature, cfg: RootedResidueConfig, comp: ComponentSelector = WHOLE) -> None:
    v = classify(sig, cfg, comp)
    if not v.realizable:
        raise ObstructedConfiguration(f"{sig} with these residues is not realizable ({v.obstruction}, {v.citation})")


# ---------------------------------------------------------------------------
# polygon construction: two odd zeros, double poles
# ---------------------------------------------------------------------------


def _two_odd_zero_double_pole(sig: StratumSignature) -> tuple[int, int]:
    if sig.genus != 0 or sig.p or sig.r or sig.n_even_zeros or sig.n_odd_zeros != 2 or sig.s < 1:
        raise BadSignature(f"{sig} is not of the form (a1, a2; (-2)^s) in genus zero")
    a1, a2 = sig.odd_zeros()
    return a1, a2


def cc_surface(edges_e1: Sequence[G], edges_e2: Sequence[G], v: G, labels: Sequence[str]) -> FlatSurface:
    """Polygon ``v, E1, v, E2`` with its two ``v`` sides glued by a half-turn and a
    half-infinite cylinder glued by translation on every other side."""
    polygon = [v] + list(edges_e1) + [v] + list(edges_e2)
    pieces = [Piece(POLYGON, "G", polygon)]
    gluings = [Gluing(EdgeRef("G", 0), EdgeRef("G", len(edges_e1) + 1), HALF_TURN)]
    marks = []
    root_positions = [k for k in range(len(polygon)) if k not in (0, len(edges_e1) + 1)]
    for label, k in zip(labels, root_positions):
        pid = f"C_{label}"
        pieces.append(Piece(CYLINDER, pid, [-polygon[k]]))
        gluings.append(Gluing(EdgeRef("G", k), EdgeRef(pid, 0), TRANSLATION))
        marks.append(PoleMark(label, -2, (pid,)))
    return FlatSurface(pieces, gluings, marks)


def _relative_arg_key(base: G):
    def key(w: G):
        # argument of w measured counterclockwise from base, as a sortable pair
        rot = w * base.conjugate()
        half = 0 if (rot.im > 0 or (rot.im == 0 and rot.re > 0)) else 1
        return (half, _Slope(rot))
    return key


class _Slope:
    __slots__ = ("z",)

    def __init__(self, z: G):
        self.z = z

    def __lt__(self, other: "_Slope") -> bool:
        return arg_less(self.z, other.z)

    def __eq__(self, other) -> bool:
        return not arg_less(self.z, other.z) and not arg_less(other.z, self.z)


def construct_cc(sig: StratumSignature, roots: Sequence[GaussLike], split: tuple[Sequence[int], Sequence[int]] | None = None,
                 signs: Sequence[int] | None = None, v: GaussLike | None = None) -> Witness:
    """Polygon construction for ``(a1, a2; (-2)^s)``.

    With ``a_i = 2 l_i - 1`` and ``l1 <= l2``, the roots are split into
    ``E1`` of size ``l1`` and ``E2`` of size ``l2 + 1``; the polygon
    ``v, E1, v, E2`` closes with ``2v = -(sum of signed roots)``.  Without an
    explicit split every split and sign choice is tried.
    """
    a1, a2 = _two_odd_zero_double_pole(sig)
    rs = [G.coerce(r) for r in roots]
    if len(rs) != sig.s or any(not r for r in rs):
        raise BadSignature("one nonzero root per double pole is required")
    cfg = RootedResidueConfig((), rs)
    claimed = claimed_invariants(sig, cfg)
    labels = [f"d{k}" for k in range(sig.s)]

    def attempt(idx1: Sequence[int], idx2: Sequence[int], sg: Sequence[int], vv: G | None) -> Witness:
        signed = [rs[k] * G(sg[k]) for k in range(len(rs))]
        E1 = [signed[k] for k in idx1]
        E2 = [signed[k] for k in idx2]
        total = sum(signed, G(0))
        if vv is None:
            vv = total * G(Fraction(-1, 2))
        elif vv * G(2) + total:
            raise ClosureFailure("2v + sum of the signed roots is not zero")
        if not vv:
            raise ClosureFailure("the closing vector v vanishes")
        surf = cc_surface(E1, E2, vv, [labels[k] for k in list(idx1) + list(idx2)])
        got = verify(surf)
        if got.zero_orders != claimed.zero_orders:
            raise AngleMismatch(f"polygon gives zeros {got.zero_orders}, expected {claimed.zero_orders}")
        return Witness("cc", sig, cfg, surf, claimed, metadata={"split": [list(idx1), list(idx2)],
                                                                    "signs": list(sg), "v": vv.to_json()})

    if split is not None:
        idx1, idx2 = list(split[0]), list(split[1])
        if sorted(idx1 + idx2) != list(range(sig.s)):
            raise BadSignature("split must partition the roots")
        sg = list(signs) if signs is not None else [1] * sig.s
        return attempt(idx1, idx2, sg, None if v is None else G.coerce(v))

    w = _cc_search(sig, tuple(rs))
    if w is None:
        raise DegeneratePolygon(f"no split and sign choice gives a nondegenerate polygon for {sig}")
    idx1, idx2, sg = w
    return attempt(idx1, idx2, sg, None)


@lru_cache(maxsize=4096)
def _cc_search(sig: StratumSignature, rs: tuple[G, ...]):
    a1, a2 = sig.odd_zeros()
    l1 = (a2 + 1) // 2
    s = len(rs)
    if all((r * rs[0].conjugate()).im == 0 for r in rs):
        return None  # parallel sides: every polygon is flat
    canon = [canonical_root(r) for r in rs]
    target = tuple(sorted((a1, a2), reverse=True))
    tried = set()
    # sign vectors ordered by number of flips from the canonical choice
    sign_vectors = sorted(itertools.product((1, -1), repeat=s), key=lambda t: (sum(x < 0 for x in t), [-x for x in t]))
    for sg in sign_vectors:
        signed = [canon[k] * G(sg[k]) for k in range(s)]
        total = sum(signed, G(0))
        if not total:
            continue
        v = total * G(Fraction(-1, 2))
        key = _relative_arg_key(v)
        for idx1 in itertools.combinations(range(s), l1):
            idx2 = [k for k in range(s) if k not in idx1]
            sig_key = (tuple(sorted((signed[k].re, signed[k].im) for k in idx1)),
                       tuple(sorted((signed[k].re, signed[k].im) for k in idx2)))
            if sig_key in tried:
                continue
            tried.add(sig_key)
            for rev1, rev2 in ((False, False), (True, False), (False, True), (True, True)):
                o1 = sorted(idx1, key=lambda k: key(signed[k]), reverse=rev1)
                o2 = sorted(idx2, key=lambda k: key(signed[k]), reverse=rev2)
                try:
                    surf = cc_surface([signed[k] for k in o1], [signed[k] for k in o2], v, [f"d{k}" for k in o1 + o2])
                    got = verify(surf)
                except SurfaceError:
                    continue
                if got.zero_orders == target and got.primitive:
                    actual = [sg[k] * (1 if canon[k] == rs[k] else -1) for k in range(s)]
                    return (o1, o2, actual)
    return None


# ---------------------------------------------------------------------------
# genus zero, one zero, odd poles
# ---------------------------------------------------------------------------


def construct_genus0_odd_pole(sig: StratumSignature, cfg: RootedResidueConfig) -> Witness:
    """Single zero and at least one odd pole.

    Zero residues (needs two odd poles): trivial even polar parts on ``(1;1)``
    are chained and feed one odd polar part on ``(1;)``; the remaining
    segments are collected by an odd polar part on ``(;1,...,1)``.
    Nonzero residues: every nonzero pole gets a polar part carrying its root,
    zero-residue even poles are stacked on one of them, other odd poles get
    ``(1;)`` and one collector odd polar part receives every free segment.
    """
    if sig.genus != 0 or sig.n != 1 or sig.r < 1:
        raise BadSignature(f"{sig} needs genus zero, a single zero and an odd pole")
    cfg.check_against(sig)
    _require_realizable(sig, cfg)
    claimed = claimed_invariants(sig, cfg)
    if cfg.is_origin():
        if sig.r < 2:
            raise BadSignature("zero residues need at least two odd poles for this recipe")
        surf = _odd_pole_zero_residues(sig)
        return Witness("genus0_odd_pole_zero", sig, cfg, surf, claimed)
    surf = _odd_pole_nonzero(sig, cfg)
    return Witness("genus0_odd_pole", sig, cfg, surf, claimed)


def _odd_pole_zero_residues(sig: StratumSignature) -> FlatSurface:
    b = SurfaceBuilder()
    evens = [make_polar_part_even(order, 1, [1], [1], prefix=f"E{i}").add_to(b, f"e{i}")
             for i, order in enumerate(sig.even_poles)]
    odds = sig.odd_poles
    collector = make_polar_part_odd(odds[0], "lower", [1] * (sig.r - 1), prefix="O0").add_to(b, "o0")
    others = [make_polar_part_odd(c, "upper", [1], prefix=f"O{j}").add_to(b, f"o{j}")
              for j, c in enumerate(odds) if j > 0]
    free = []
    for i in range(len(evens) - 1):
        b.glue(evens[i].lower[0], evens[i + 1].upper[0], TRANSLATION)
    if evens:
        b.glue(evens[-1].lower[0], others[0].upper[0], TRANSLATION)
        free.append(evens[0].upper[0])
        free.extend(o.upper[0] for o in others[1:])
    else:
        free.extend(o.upper[0] for o in others)
    for seg, slot in zip(free, collector.lower):
        b.glue(seg, slot, TRANSLATION)
    return b.build()


def _collector_order(vectors: list[G]) -> list[G]:
    for order in (sorted(vectors, key=_relative_arg_key(G(1)), reverse=True), sorted(vectors, key=_relative_arg_key(G(1)))):
        try:
            check_half_plane(order, G(1))
            return order
        except SurfaceError:
            continue
    raise UnsupportedCase("no non-self-intersecting order for the collector segments")


def _odd_pole_nonzero(sig: StratumSignature, cfg: RootedResidueConfig) -> FlatSurface:
    b = SurfaceBuilder()
    free: list[tuple[G, EdgeRef]] = []
    # nonzero even poles: (r;) nontrivial polar parts
    zero_evens = []
    for i, (order, root) in enumerate(zip(sig.even_poles, cfg.even_pole_roots)):
        if root:
            r = canonical_root(root)
            part = make_polar_part_even(order, 1, [r], [], prefix=f"E{i}").add_to(b, f"e{i}")
            free.append((r, part.upper[0]))
        else:
            zero_evens.append((i, order))
    for k, root in enumerate(cfg.double_pole_roots):
        r = canonical_root(root)
        part = make_polar_part_order2([r], prefix=f"D{k}").add_to(b, f"d{k}")
        free.append((r, part.upper[0]))
    # zero-residue even poles: trivial (r;r) parts stacked on the first free segment
    if zero_evens:
        r, host = free[0]
        for i, order in zero_evens:
            part = make_polar_part_even(order, 1, [r], [r], prefix=f"E{i}").add_to(b, f"e{i}")
            b.glue(host, part.lower[0], TRANSLATION)
            host = part.upper[0]
        free[0] = (r, host)
    odds = sig.odd_poles
    for j, c in enumerate(odds[1:], start=1):
        part = make_polar_part_odd(c, "upper", [1], prefix=f"O{j}").add_to(b, f"o{j}")
        free.append((G(1), part.upper[0]))
    vectors = _collector_order([v for v, _ in free])
    collector = make_polar_part_odd(odds[0], "lower", vectors, prefix="O0").add_to(b, "o0")
    pool = list(free)
    for vec, slot in zip(vectors, collector.lower):
        k = next(i for i, (w, _) in enumerate(pool) if w == vec)
        _, ref = pool.pop(k)
        b.glue(ref, slot, TRANSLATION)
    return b.build()


# ---------------------------------------------------------------------------
# cylinder chains
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChainPlan:
    """Incidence graph of a cylinder chain.

    ``edges`` are saddle connections between cylinders (a pair ``(i, i)`` is a
    fold of cylinder ``i`` onto itself).  ``rotation`` optionally fixes the
    boundary order of each cylinder; ``lengths`` optionally fixes the saddle
    lengths (otherwise solved from the roots).
    """

    edges: tuple[tuple[int, int], ...]
    rotation: tuple[tuple[tuple[int, int], ...], ...] | None = None
    lengths: tuple[Fraction, ...] | None = None

    def to_json(self) -> dict:
        from .core import fraction_to_str

        d: dict = {"edges": [list(e) for e in self.edges]}
        if self.rotation is not None:
            d["rotation"] = [[list(h) for h in r] for r in self.rotation]
        if self.lengths is not None:
            d["lengths"] = [fraction_to_str(x) for x in self.lengths]
        return d


def construct_cylinder_chain(sig: StratumSignature, roots: Sequence[GaussLike], plan: ChainPlan) -> Witness:
    """Half-infinite cylinders on real roots glued along horizontal saddle
    connections according to ``plan``."""
    a1, a2 = _two_odd_zero_double_pole(sig)
    rs = [G.coerce(r) for r in roots]
    if len(rs) != sig.s:
        raise BadSignature("one root per double pole is required")
    if any(r.im != 0 or r.re <= 0 for r in rs):
        raise BadSignature("cylinder chains use positive real roots")
    n = sig.s
    edges = tuple((min(u, v), max(u, v)) for u, v in plan.edges)
    if len(edges) != n or any(not (0 <= u < n and 0 <= v < n) for u, v in edges):
        raise BadSignature(f"a chain on {n} cylinders needs {n} saddle connections between them")
    graph = _search.IncidenceGraph(n, edges, ())
    m = graph.incidence_matrix()
    target = [r.re for r in rs]
    if plan.lengths is not None:
        x = [Fraction(v) for v in plan.lengths]
        if len(x) != n:
            raise InfeasibleLengths("one length per saddle connection is required")
        for i in range(n):
            if sum((m[i][e] * x[e] for e in range(n)), Fraction(0)) != target[i]:
                raise InfeasibleLengths(f"cylinder {i}: boundary lengths do not add up to its root")
    else:
        from .core import solve_rational

        sol = solve_rational(m, target)
        if sol is None:
            raise InfeasibleLengths("the length system is singular (even cycle: the surface would be a square)")
        x = sol
    if any(v <= 0 for v in x):
        raise InfeasibleLengths(f"lengths {[str(v) for v in x]} are not all positive")
    want = tuple(sorted((a1 + 2, a2 + 2), reverse=True))
    rotations = [plan.rotation] if plan.rotation is not None else _search._rotation_systems(n, edges)
    for rot in rotations:
        rot = tuple(tuple(tuple(h) for h in r) for r in rot)
        if tuple(_search._vertex_classes(n, edges, rot)) == want:
            g = _search.IncidenceGraph(n, edges, rot)
            surf = _search.surface_from_graph(g, x)
            cfg = RootedResidueConfig((), rs)
            return Witness("cylinder_chain", sig, cfg, surf, claimed_invariants(sig, cfg),
                           metadata={"plan": ChainPlan(edges, rot, tuple(x)).to_json()})
    raise AngleMismatch(f"no boundary order of this plan gives zeros {(a1, a2)}")


def three_pole_plan(roots: Sequence[int]) -> ChainPlan:
    """Plan for ``(1, 1; (-2)^3)`` with ``r3 != r1 + r2`` (roots sorted increasingly).

    ``r3 > r1 + r2``: the two small cylinders sit on the large one, which is
    folded onto itself along the remaining length.  ``r3 < r1 + r2``: the
    three cylinders form a triangle.
    """
    r1, r2, r3 = roots
    if r3 > r1 + r2:
        return ChainPlan(((0, 2), (1, 2), (2, 2)))
    return ChainPlan(((0, 1), (1, 2), (0, 2)))


def construct_chain_auto(sig: StratumSignature, roots: Sequence[GaussLike], budget: int = 5) -> Witness:
    """Cylinder chain from a plan found by the normal-form search.

    Roots must lie on one line through the origin, ``r_i = n_i * c`` with
    rational ``n_i``; the chain is built on ``|n_i|`` and rotated by ``c``.
    """
    _two_odd_zero_double_pole(sig)
    rs = [G.coerce(r) for r in roots]
    form = _common_line(rs)
    if form is None:
        raise UnsupportedCase("cylinder chains need all roots on one line through the origin")
    ints, c = form
    if sig.s > budget:
        raise UnsupportedCase(f"plan search limited to {budget} double poles")
    w = _search.first_witness(sig, ints, budget)
    if w is None:
        raise InfeasibleLengths("no normal-form plan realizes these roots")
    plan = ChainPlan(w.graph.edges, w.graph.rotation, w.lengths)
    base = construct_cylinder_chain(sig, ints, plan)
    cfg = RootedResidueConfig((), rs)
    return Witness("cylinder_chain_search", sig, cfg, base.surface.scaled(c), claimed_invariants(sig, cfg),
                   metadata={"plan": base.metadata["plan"], "scale": c.to_json()})


def _common_line(rs: Sequence[G]) -> tuple[list[int], G] | None:
    """Write ``r_i = ±n_i * c`` with coprime positive integers ``n_i``."""
    if not rs or any(not r for r in rs):
        return None
    ratios = [r / rs[0] for r in rs]
    if any(q.im != 0 for q in ratios):
        return None
    vals = [abs(q.re) for q in ratios]
    den = 1
    for q in vals:
        den = den * q.denominator // _gcd(den, q.denominator)
    ints = [int(q * den) for q in vals]
    g = 0
    for v in ints:
        g = _gcd(g, v)
    return [v // g for v in ints], rs[0] * G(Fraction(g, den))


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


# ---------------------------------------------------------------------------
# genus one, one zero and one pole
# ---------------------------------------------------------------------------


def _axis_for(v: G) -> G:
    return G(1) if v.im != 0 else G(0, 1)


def _single_zero_pole(sig: StratumSignature) -> int:
    if sig.genus != 1:
        raise BadSignature(f"{sig} is not of genus one")
    if not (sig.n == 1 and sig.p == 1 and sig.r == 0 and sig.s == 0 and sig.zeros[0] == sig.even_poles[0]):
        raise UnsupportedCase(f"genus-one witnesses cover (2l; -2l) only, not {sig}")
    return sig.zeros[0] // 2


def construct_genus1_single_zero(sig: StratumSignature, cfg: RootedResidueConfig, rho: int | None = None) -> Witness:
    """Genus-one surface in ``(2l; -2l)`` with prescribed residue and rotation number.

    Nonzero residue ``R = r**2``: one polar part of order ``2l`` and type
    ``(rho + 1) / 2`` on ``(v, v; -v, -v)`` with ``v = r / 4``, segments glued
    crosswise by half-turns.  Zero residue: two trivial polar parts whose
    orders add up to ``2l + 2``, cut open along one ray each and glued
    crosswise; the pair of orders and types is chosen to reach ``rho``.
    The rotation number is certified by loops that meet once.
    """
    ell = _single_zero_pole(sig)
    cfg.check_against(sig)
    comp = ComponentSelector(rho) if rho is not None else WHOLE
    check_component(sig, comp)
    _require_realizable(sig, cfg, comp)
    if rho is None:
        table = _zero_residue_table(ell) if cfg.is_origin() else {1: None}
        if not table:
            raise UnsupportedCase(f"no two-part gluing found for {sig}")
        rho = min(table)
    claimed = claimed_invariants(sig, cfg)
    if not cfg.is_origin():
        r = cfg.even_pole_roots[0]
        if r.im < 0 or (r.im == 0 and r.re < 0):
            r = -r  # same residue; keeps v above the horizontal axis
        v = r * G(Fraction(1, 4))
        tau = (rho + 1) // 2
        if v.im == 0:
            # with a vertical axis left and right domains trade places
            tau = ell - tau
        b = SurfaceBuilder(axis=_axis_for(v))
        part = make_polar_part_even(2 * ell, tau, [v, v], [-v, -v], prefix="P", axis=b.axis).add_to(b, "e0")
        b.glue(part.upper[0], part.lower[1], HALF_TURN)
        b.glue(part.upper[1], part.lower[0], HALF_TURN)
        surf = b.build()
        wit = Witness("genus1_residue", sig, cfg, surf, claimed, claimed_rho=rho, metadata={"type": tau})
    else:
        table = _zero_residue_table(ell)
        if rho not in table:
            raise UnsupportedCase(f"no two-part gluing found for rotation number {rho} in {sig}")
        surf = _two_part_surface(ell, *table[rho])
        wit = Witness("genus1_zero_residue", sig, cfg, surf, claimed, claimed_rho=rho,
                      metadata={"parts": list(table[rho][:4])})
    certs = find_rotation_certificates(wit.surface, limit=8)
    matching = [c for c in certs if c.rho == rho]
    if not matching:
        raise ClaimMismatch(f"loops on the constructed surface do not give rotation number {rho}")
    wit.rotation = matching[0]
    return wit


def _two_part_surface(ell: int, b1: int, t1: int, b2: int, t2: int, cut1: int, cut2: int, seg: int) -> FlatSurface:
    v = G(1)
    p1 = make_polar_part_even(b1, t1, [v], [v], prefix="A")
    p2 = make_polar_part_even(b2, t2, [v], [v], prefix="B")
    g1, g2 = p1.gluings[cut1], p2.gluings[cut2]
    glues = [g for g in p1.gluings if g is not g1] + [g for g in p2.gluings if g is not g2]
    glues.append(Gluing(g1.a, g2.b, TRANSLATION))
    glues.append(Gluing(g2.a, g1.b, TRANSLATION))
    u1, l1, u2, l2 = p1.upper[0], p1.lower[0], p2.upper[0], p2.lower[0]
    pairings = [((u1, u2), (l1, l2)), ((u1, l2), (l1, u2))]
    twists = [(HALF_TURN, HALF_TURN), (TRANSLATION, TRANSLATION)]
    (x, y), (z, w) = pairings[seg // 2]
    tw = twists[seg % 2]
    glues.append(Gluing(x, y, tw[0]))
    glues.append(Gluing(z, w, tw[1]))
    pieces = p1.pieces + p2.pieces
    marks = [PoleMark("e0", -2 * ell, tuple(p.id for p in pieces))]
    return FlatSurface(pieces, glues, marks)


@lru_cache(maxsize=None)
def _zero_residue_table(ell: int) -> dict[int, tuple[int, int, int, int, int, int, int]]:
    """Rotation number -> parameters of a two-part zero-residue surface in ``(2l; -2l)``."""
    out: dict[int, tuple] = {}
    sig = StratumSignature(1, [2 * ell], [2 * ell])
    origin = RootedResidueConfig([0])
    wanted = {rho for rho in legal_rotation_numbers(sig)
              if classify(sig, origin, ComponentSelector(rho)).realizable}
    total = 2 * ell + 2
    for b1 in range(4, total - 3, 2):
        b2 = total - b1
        if b2 < b1:
            break
        for t1 in range(1, b1 // 2):
            for t2 in range(1, b2 // 2):
                p1 = make_polar_part_even(b1, t1, [1], [1], prefix="A")
                p2 = make_polar_part_even(b2, t2, [1], [1], prefix="B")
                for cut1 in range(len(p1.gluings)):
                    for cut2 in range(len(p2.gluings)):
                        for seg in range(4):
                            try:
                                surf = _two_part_surface(ell, b1, t1, b2, t2, cut1, cut2, seg)
                                inv = verify(surf)
                            except (SurfaceError, QuadStrataError):
                                continue
                            if (inv.genus, inv.zero_orders, inv.pole_orders) != (1, (2 * ell,), (-2 * ell,)):
                                continue
                            if not inv.primitive or not inv.connected:
                                continue
                            certs = find_rotation_certificates(surf, limit=4)
                            if not certs:
                                continue
                            rhos = {c.rho for c in certs}
                            if len(rhos) != 1:
                                continue
                            rho = rhos.pop()
                            out.setdefault(rho, (b1, t1, b2, t2, cut1, cut2, seg))
                            if wanted <= out.keys():
                                return out
    return out


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def construct(sig: StratumSignature, cfg: RootedResidueConfig, comp: ComponentSelector = WHOLE) -> Witness:
    """First applicable recipe; precedence: polygon, cylinder chain, others."""
    cfg.check_against(sig)
    v = classify(sig, cfg, comp)
    if not v.realizable:
        raise ObstructedConfiguration(f"{sig}: {v.obstruction} ({v.citation})")
    errors = []
    for name, fn in _recipes(sig, cfg, comp):
        try:
            w = fn()
            w.check()
            w.metadata.setdefault("citation", v.citation)
            return w
        except ClaimMismatch:
            raise
        except (ConstructionError, SurfaceError) as exc:
            errors.append(f"{name}: {exc.code}")
    raise UnsupportedCase(f"no recipe covers {sig} with these residues ({'; '.join(errors) or 'no applicable recipe'})")


def _recipes(sig: StratumSignature, cfg: RootedResidueConfig, comp: ComponentSelector):
    out = []
    two_odd = (sig.genus == 0 and not sig.p and not sig.r and not sig.n_even_zeros
               and sig.n_odd_zeros == 2 and sig.s >= 1)
    if two_odd:
        roots = cfg.double_pole_roots
        out.append(("cc", lambda: construct_cc(sig, roots)))
        out.append(("cylinder_chain", lambda: construct_chain_auto(sig, roots)))
    if sig.genus == 0 and sig.n == 1 and sig.r >= 1:
        out.append(("genus0_odd_pole", lambda: construct_genus0_odd_pole(sig, cfg)))
    if sig.genus == 1:
        out.append(("genus1_single_zero", lambda: construct_genus1_single_zero(sig, cfg, comp.rho)))
    return out


@lru_cache(maxsize=8192)
def _covering_recipe_cached(sig: StratumSignature, cfg: RootedResidueConfig, comp: ComponentSelector) -> str | None:
    try:
        return construct(sig, cfg, comp).recipe
    except QuadStrataError:
        return None


def covering_recipe(sig: StratumSignature, cfg: RootedResidueConfig, comp: ComponentSelector = WHOLE) -> str | None:
    """Name of the recipe that builds a witness, or ``None`` outside coverage."""
    return _covering_recipe_cached(sig, cfg, comp)


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    signature: StratumSignature
    config: RootedResidueConfig
    component: ComponentSelector = WHOLE
    plan: ChainPlan | None = None

    def build(self) -> Witness:
        if self.plan is not None:
            return construct_cylinder_chain(self.signature, self.config.double_pole_roots, self.plan)
        return construct(self.signature, self.config, self.component)


def _cat(name: str, genus: int, zeros, even=(), odd=(), s: int = 0, even_roots=(), double_roots=(),
         rho: int | None = None, plan: ChainPlan | None = None) -> CatalogEntry:
    sig = StratumSignature(genus, zeros, even, odd, s)
    cfg = RootedResidueConfig([G.coerce(r) for r in even_roots], [G.coerce(r) for r in double_roots])
    return CatalogEntry(name, sig, cfg, WHOLE if rho is None else ComponentSelector(rho), plan)


I_ = G(0, 1)


def witness_catalog() -> list[CatalogEntry]:
    """Fixed list of witnesses exercised by the round-trip tests and the CLI."""
    return [
        # polygon with two odd zeros
        _cat("cc_two_poles_generic", 0, (1, -1), s=2, double_roots=(1, I_)),
        _cat("cc_simple_poles", 0, (-1, -1), s=1, double_roots=(G(1, 2),)),
        _cat("cc_three_poles", 0, (1, 1), s=3, double_roots=(1, I_, G(2, 3))),
        _cat("cc_four_poles", 0, (3, 1), s=4, double_roots=(1, I_, 2, G(1, 1))),
        _cat("cc_four_poles_high", 0, (5, -1), s=4, double_roots=(1, G(2, 1), I_, G(-1, 3))),
        _cat("cc_five_poles", 0, (3, 3), s=5, double_roots=(1, I_, G(1, 1), 2, G(1, -2))),
        _cat("cc_five_poles_skew", 0, (5, 1), s=5, double_roots=(G(1, 3), 2, I_, G(3, 1), 1)),
        _cat("cc_six_poles", 0, (5, 3), s=6, double_roots=(1, I_, 2, G(0, 3), G(1, 1), G(2, -1))),
        # cylinder chains on real roots
        _cat("chain_fold", 0, (1, 1), s=3, double_roots=(1, 2, 4), plan=three_pole_plan([1, 2, 4])),
        _cat("chain_triangle", 0, (1, 1), s=3, double_roots=(2, 3, 4), plan=three_pole_plan([2, 3, 4])),
        _cat("chain_triangle_equal", 0, (1, 1), s=3, double_roots=(1, 1, 1), plan=three_pole_plan([1, 1, 1])),
        _cat("chain_search_two", 0, (1, -1), s=2, double_roots=(1, 3)),
        _cat("chain_search_four", 0, (3, 1), s=4, double_roots=(1, 2, 3, 5)),
        _cat("chain_search_five", 0, (3, 3), s=5, double_roots=(1, 1, 2, 3, 4)),
        _cat("chain_search_rotated", 0, (1, 1), s=3, double_roots=(I_, G(0, -2), G(0, 4))),
        _cat("chain_simple_poles", 0, (-1, -1), s=1, double_roots=(3,)),
        # genus zero, one zero, odd poles
        _cat("odd_zero_residue", 0, (6,), even=(4,), odd=(3, 3), even_roots=(0,)),
        _cat("odd_nonzero_residue", 0, (6,), even=(4,), odd=(3, 3), even_roots=(1,)),
        _cat("odd_two_poles_only", 0, (2,), odd=(3, 3)),
        _cat("odd_high_orders", 0, (6,), odd=(5, 5)),
        _cat("odd_with_doubles", 0, (5,), odd=(5,), s=2, double_roots=(1, I_)),
        _cat("odd_single_with_double", 0, (3,), odd=(3,), s=2, double_roots=(2, 1)),
        _cat("odd_mixed", 0, (7,), even=(4,), odd=(5,), s=1, even_roots=(3,), double_roots=(1,)),
        _cat("odd_stacked_even", 0, (9,), even=(4, 4), odd=(5,), even_roots=(3, 0)),
        _cat("odd_four_poles", 0, (8,), odd=(3, 3, 3, 3)),
        _cat("odd_chain_evens", 0, (10,), even=(4, 4), odd=(3, 3), even_roots=(0, 0)),
        # genus one, one zero and one pole
        _cat("g1_residue_rho1", 1, (4,), even=(4,), even_roots=(2,), rho=1),
        _cat("g1_residue_complex", 1, (6,), even=(6,), even_roots=(G(1, 1),), rho=1),
        _cat("g1_residue_rho3", 1, (6,), even=(6,), even_roots=(G(-2, -3),), rho=3),
        _cat("g1_zero_rho3", 1, (6,), even=(6,), even_roots=(0,), rho=3),
        _cat("g1_zero_rho1", 1, (8,), even=(8,), even_roots=(0,), rho=1),
        _cat("g1_residue_rho5", 1, (10,), even=(10,), even_roots=(3,), rho=5),
        _cat("g1_zero_rho5", 1, (10,), even=(10,), even_roots=(0,), rho=5),
    ]
