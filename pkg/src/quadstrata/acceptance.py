"""Acceptance checks, shared by the test suite and ``quadstrata acceptance``.

Each ``criterion_*`` function returns a :class:`CriterionResult`; nothing here
asserts, so a failing check reports its evidence instead of stopping the run.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Iterator

from . import constructors, search
from .core import (
    WHOLE,
    ComponentSelector,
    GaussianRational,
    RootedResidueConfig,
    StratumSignature,
    stratum_nonempty_holomorphic,
)
from .oracle import NOT_REALIZABLE, REALIZABLE, decide
from .surface import (
    TRANSLATION,
    FlatSurface,
    SurfaceBuilder,
    make_polar_part_even,
    make_polar_part_order2,
    verify,
)

G = GaussianRational


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float
    failures: list = field(default_factory=list)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number}. {self.title}: {self.detail} ({self.seconds:.2f} s)"

    def to_json(self) -> dict:
        return {"criterion": self.number, "title": self.title, "passed": self.passed, "detail": self.detail,
                "seconds": round(self.seconds, 3), "failures": [str(f) for f in self.failures[:20]]}


# ---------------------------------------------------------------------------
# regression table
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RegressionRow:
    genus: int
    orders: tuple[int, ...]
    roots: tuple[str, ...]
    component: int | None
    expected: str  # Realizable or NotRealizable
    citation: str

    def request(self) -> tuple[StratumSignature, RootedResidueConfig, ComponentSelector]:
        from .core import parse_gaussian

        sig = StratumSignature.from_orders(self.genus, self.orders)
        vals = [parse_gaussian(r) for r in self.roots]
        cfg = RootedResidueConfig(vals[:sig.p], vals[sig.p:])
        comp = WHOLE if self.component is None else ComponentSelector(self.component)
        return sig, cfg, comp


def _row(genus: int, orders: str, roots: str, expected: str, citation: str, rho: int | None = None) -> RegressionRow:
    return RegressionRow(genus, tuple(int(x) for x in orders.split(",")),
                         tuple(r for r in roots.split(",") if r), rho,
                         REALIZABLE if expected == "R" else NOT_REALIZABLE, citation)


# Roots list even poles by decreasing order, then double poles.
REGRESSION_TABLE: tuple[RegressionRow, ...] = (
    # genus at least two: surjective on every component
    _row(2, "5,1,-2", "1", "R", "Thm 1.1"),
    _row(2, "3,3,-2", "i", "R", "Thm 1.1"),
    _row(3, "9,1,-2", "2", "R", "Thm 1.1"),
    _row(2, "7,1,-4", "0", "R", "Thm 1.1"),
    _row(2, "5,3,-4", "0", "R", "Thm 1.1"),
    # holomorphic strata
    _row(1, "-1,1", "", "N", "Prop 1.10"),
    _row(2, "4", "", "N", "Prop 1.10"),
    _row(2, "1,3", "", "N", "Prop 1.10"),
    _row(2, "1,1,2", "", "R", "Prop 1.10"),
    _row(0, "-1,-1,-1,-1", "", "R", "Prop 1.10"),
    # genus one
    _row(1, "4,-4", "0", "N", "Thm 1.2 i"),
    _row(1, "4,-4", "1", "R", "Thm 1.2 iv"),
    _row(1, "8,-4,-4", "0,0", "N", "Thm 1.2 i"),
    _row(1, "8,-4,-4", "1,0", "R", "Thm 1.2 iv"),
    _row(1, "3,5,-4,-4", "0,0", "N", "Thm 1.2 i"),
    _row(1, "1,3,-4", "0", "N", "Thm 1.2 i"),
    _row(1, "4,-2,-2", "1,1", "N", "Thm 1.2 ii"),
    _row(1, "4,-2,-2", "1,-1", "N", "Thm 1.2 ii"),
    _row(1, "4,-2,-2", "1,2", "R", "Thm 1.2 iv"),
    _row(1, "3,5,-2,-2,-2,-2", "2,2,2,2", "N", "Thm 1.2 ii"),
    _row(1, "1,3,-2,-2", "i,i", "N", "Thm 1.2 ii"),
    _row(1, "6,-6", "0", "N", "Thm 1.2 iii", rho=1),
    _row(1, "6,-6", "0", "R", "Thm 1.2 iv", rho=3),
    _row(1, "6,-6", "0", "R", "Thm 1.2 iii"),
    _row(1, "3,3,-6", "0", "N", "Thm 1.2 iii", rho=1),
    _row(1, "12,-6,-6", "0,0", "N", "Thm 1.2 iii", rho=3),
    _row(1, "12,-6,-6", "0,0", "R", "Thm 1.2 iv", rho=1),
    _row(1, "6,-6", "1", "R", "Thm 1.2 iv", rho=1),
    _row(1, "5,1,-6", "0", "R", "Thm 1.2 iv"),
    # genus zero, at least four odd singularities
    _row(0, "1,1,-1,-1,-4", "0", "R", "Thm 1.3"),
    _row(0, "-1,-1,-1,1,-2", "1", "R", "Thm 1.3"),
    _row(0, "1,1,-3,-3", "", "R", "Thm 1.3"),
    # two odd poles
    _row(0, "2,-3,-3", "", "R", "Thm 1.4"),
    _row(0, "4,-3,-3,-2", "1", "R", "Thm 1.4"),
    _row(0, "4,2,-3,-3,-4", "0", "R", "Thm 1.4"),
    # one odd zero and one odd pole
    _row(0, "3,-3,-4", "0", "N", "Thm 1.5 i"),
    _row(0, "3,-3,-4", "1", "R", "Thm 1.5 ii"),
    _row(0, "3,2,-5,-4", "0", "R", "Thm 1.5 ii"),
    _row(0, "3,-3,-2,-2", "1,1", "R", "Thm 1.5 ii"),
    _row(0, "5,2,-3,-4,-4", "0,0", "N", "Thm 1.5 i"),
    # two odd zeros, poles of order four and double poles
    _row(0, "1,3,-4,-2,-2", "0,1,1", "N", "Thm 1.6 i"),
    _row(0, "1,3,-4,-2,-2", "0,1,2", "R", "Thm 1.6"),
    _row(0, "1,3,-4,-2,-2", "1,1,1", "R", "Thm 1.6"),
    _row(0, "3,5,-4,-4,-2,-2", "0,0,1,1", "N", "Thm 1.6 ii"),
    _row(0, "3,5,-4,-4,-2,-2", "1,0,1,1", "R", "Thm 1.6"),
    _row(0, "1,1,-4,-2", "1,1", "N", "Thm 1.6 iii"),
    _row(0, "3,3,-4,-2,-2,-2", "2,2,-2,2", "N", "Thm 1.6 iii"),
    _row(0, "3,3,-4,-2,-2,-2", "1,1,1,2", "R", "Thm 1.6"),
    _row(0, "3,3,-4,-4,-2", "1,0,1", "N", "Thm 1.6 iv"),
    _row(0, "3,3,-4,-4,-2", "0,1,1", "N", "Thm 1.6 iv"),
    _row(0, "3,3,-4,-4,-2", "1,1,1", "R", "Thm 1.6"),
    # two odd zeros, poles of even order at least four
    _row(0, "3,3,-6,-4", "1,1", "N", "Thm 1.7 i"),
    _row(0, "3,3,-6,-4", "0,0", "N", "Thm 1.7 i"),
    _row(0, "3,3,-6,-4", "1,2", "R", "Thm 1.7 iii"),
    _row(0, "1,3,-4,-4", "1,1", "N", "Thm 1.7 i"),
    _row(0, "1,3,-4,-4", "1,-1", "N", "Thm 1.7 i"),
    _row(0, "1,3,-4,-4", "1,2", "R", "Thm 1.7 iii"),
    _row(0, "1,1,2,-4,-4", "0,0", "N", "Thm 1.7 ii"),
    _row(0, "1,1,2,-4,-4", "1,1", "R", "Thm 1.7 iii"),
    _row(0, "1,1,4,-6,-4", "0,0", "R", "Thm 1.7 iii"),
    _row(0, "7,5,-4,-4,-4,-4", "1,1,1,1", "R", "Thm 1.7 iii"),
    _row(0, "7,5,-4,-4,-4,-4", "1,1,0,0", "N", "Thm 1.7 i"),
    # double poles only
    _row(0, "-1,-1,-2", "5", "R", "Thm 1.8"),
    _row(0, "1,-1,-2,-2", "1,1", "N", "Thm 1.8 i"),
    _row(0, "1,-1,-2,-2", "1,2", "R", "Thm 1.8"),
    _row(0, "3,1,-2,-2,-2,-2", "1,1,2,2", "N", "Thm 1.8 i"),
    _row(0, "3,1,-2,-2,-2,-2", "1,1,i,i", "N", "Thm 1.8 i"),
    _row(0, "1,1,-2,-2,-2", "1,2,3", "N", "Thm 1.8 ii"),
    _row(0, "1,1,-2,-2,-2", "1,1,2", "N", "Thm 1.8 ii"),
    _row(0, "1,1,-2,-2,-2", "2,4,6", "N", "Thm 1.8 ii"),
    _row(0, "1,1,-2,-2,-2", "1,2,4", "R", "Thm 1.8"),
    _row(0, "1,1,-2,-2,-2", "i,2i,4i", "R", "Thm 1.8"),
    _row(0, "1,1,-2,-2,-2", "1,i,2+3i", "R", "Thm 1.8"),
    _row(0, "3,3,-2,-2,-2,-2,-2", "1,2,3,3,3", "N", "Thm 1.8 ii"),
    _row(0, "3,3,-2,-2,-2,-2,-2", "1,1,1,1,1", "R", "Thm 1.8"),
    _row(0, "5,1,-2,-2,-2,-2,-2", "1,1,1,1,1", "N", "Thm 1.8 iii"),
    _row(0, "5,1,-2,-2,-2,-2,-2", "1,1,1,1,2", "N", "Thm 1.8 iv"),
    _row(0, "5,1,-2,-2,-2,-2,-2", "1,1,1,2,2", "R", "Thm 1.8"),
    _row(0, "-1,-1,2,-2,-2", "1,1", "R", "Thm 1.8"),
    _row(0, "1,3,-2,-2,-2,-2", "1,2,3,4", "R", "Thm 1.8"),
)


def criterion_regression() -> CriterionResult:
    t = time.perf_counter()
    failures = []
    for row in REGRESSION_TABLE:
        sig, cfg, comp = row.request()
        v = decide(sig, cfg, comp)
        got = NOT_REALIZABLE if not v.realizable else REALIZABLE
        if got != row.expected or v.citation != row.citation:
            failures.append((row, v.status, v.citation))
    dt = time.perf_counter() - t
    ok = not failures and len(REGRESSION_TABLE) >= 50 and dt < 1.0
    return CriterionResult(1, "classification regression", ok,
                           f"{len(REGRESSION_TABLE) - len(failures)}/{len(REGRESSION_TABLE)} rows agree", dt, failures)


# ---------------------------------------------------------------------------
# witnesses
# ---------------------------------------------------------------------------


def criterion_round_trip() -> CriterionResult:
    t = time.perf_counter()
    failures = []
    entries = constructors.witness_catalog()
    slowest = 0.0
    for e in entries:
        t0 = time.perf_counter()
        try:
            w = e.build()
            got = verify(w.surface)
            if got != w.claimed:
                failures.append((e.name, "verified invariants differ from the claim"))
        except Exception as exc:  # report, do not stop
            failures.append((e.name, f"{type(exc).__name__}: {exc}"))
        dt = time.perf_counter() - t0
        slowest = max(slowest, dt)
        if dt >= 1.0:
            failures.append((e.name, f"took {dt:.2f} s"))
    ok = not failures and len(entries) >= 30
    return CriterionResult(2, "witness round-trip", ok,
                           f"{len(entries) - len(failures)}/{len(entries)} catalog witnesses, slowest {slowest:.2f} s",
                           time.perf_counter() - t, failures)


def criterion_three_poles() -> CriterionResult:
    t = time.perf_counter()
    sig = StratumSignature(0, (1, 1), (), (), 3)
    failures = []
    n = 0
    for r1, r2, r3 in itertools.combinations_with_replacement(range(1, 11), 3):
        if math.gcd(r1, r2, r3) != 1:
            continue
        n += 1
        found = search.first_witness(sig, (r1, r2, r3)) is not None
        if found != (r3 != r1 + r2):
            failures.append((r1, r2, r3, found))
    dt = time.perf_counter() - t
    return CriterionResult(3, "three double poles exhaustive check", not failures and dt < 60,
                           f"{n - len(failures)}/{n} triples match r3 != r1 + r2", dt, failures)


def _sweep() -> Iterator[tuple[StratumSignature, tuple[int, ...]]]:
    for sig in search.sweep_strata(5):
        for roots in search.sorted_root_tuples(sig.s, 12):
            yield sig, roots


def criterion_half_integer() -> CriterionResult:
    t = time.perf_counter()
    failures = []
    n = 0
    for sig, roots in _sweep():
        for w in search.enumerate_normal_forms(sig, roots):
            n += 1
            try:
                search.check_half_integer_lengths(w)
            except search.PropertyViolated as exc:
                failures.append((str(sig), roots, str(exc)))
    return CriterionResult(4, "half-integer saddle lengths", not failures,
                           f"{n} witnesses checked, {len(failures)} violations", time.perf_counter() - t, failures)


def criterion_agreement() -> CriterionResult:
    t = time.perf_counter()
    failures = []
    n = 0
    for sig, roots in _sweep():
        n += 1
        cfg = RootedResidueConfig((), [G(r) for r in roots])
        verdict = decide(sig, cfg, check_witness=False)
        found = search.first_witness(sig, roots) is not None
        if verdict.realizable != found:
            failures.append((str(sig), roots, verdict.status, found))
    return CriterionResult(5, "oracle and search agree", not failures,
                           f"{n} configurations, {len(failures)} disagreements", time.perf_counter() - t, failures)


def square_surfaces() -> list[FlatSurface]:
    """Twenty genus-zero surfaces glued only by translations (squares of abelian differentials)."""
    out = []
    vectors = [G(1), G(1, 1), G(2, 1), G(-1, 2), G(0, 1)]
    # one polar part glued to itself: (b - 4; -b)
    for b in (4, 6, 8, 10):
        for tau in range(1, b // 2):
            if len(out) >= 8:
                break
            v = vectors[(b + tau) % len(vectors)]
            bld = SurfaceBuilder()
            part = make_polar_part_even(b, tau, [v], [v], prefix="P").add_to(bld, "e0")
            bld.glue(part.upper[0], part.lower[0], TRANSLATION)
            out.append(bld.build())
    # two polar parts of order two: (0; -2, -2) up to the marked point
    for v in vectors:
        bld = SurfaceBuilder()
        a = make_polar_part_order2([v], prefix="A").add_to(bld, "d0")
        c = make_polar_part_order2([-v], prefix="B").add_to(bld, "d1")
        bld.glue(a.upper[0], c.upper[0], TRANSLATION)
        out.append(bld.build())
    # a nontrivial even polar part closed by a cylinder: (b - 2; -b, -2)
    for b, tau in ((4, 1), (6, 1), (6, 2), (8, 1), (8, 2), (8, 3), (10, 2)):
        v = vectors[(b * tau) % len(vectors)]
        bld = SurfaceBuilder()
        part = make_polar_part_even(b, tau, [v], [], prefix="P").add_to(bld, "e0")
        cyl = make_polar_part_order2([-v], prefix="C").add_to(bld, "d0")
        bld.glue(part.upper[0], cyl.upper[0], TRANSLATION)
        out.append(bld.build())
    return out[:20]


def criterion_primitivity() -> CriterionResult:
    t = time.perf_counter()
    failures = []
    squares = square_surfaces()
    for k, surf in enumerate(squares):
        inv = verify(surf)
        orders = list(inv.zero_orders) + list(inv.pole_orders)
        if inv.genus != 0 or any(o % 2 for o in orders):
            failures.append((f"square {k}", "not a genus-zero all-even surface", inv))
        elif inv.primitive:
            failures.append((f"square {k}", "flagged primitive"))
    checked = 0
    for e in constructors.witness_catalog():
        if all(o % 2 == 0 for o in e.signature.all_orders()):
            continue
        checked += 1
        if not verify(e.build().surface).primitive:
            failures.append((e.name, "catalog witness flagged non-primitive"))
    ok = not failures and len(squares) == 20
    return CriterionResult(6, "primitivity detection", ok,
                           f"{len(squares)} squares, {checked} odd-order catalog witnesses, {len(failures)} failures",
                           time.perf_counter() - t, failures)


def holomorphic_signatures(max_genus: int = 3, max_positive: int = 8) -> Iterator[StratumSignature]:
    """Holomorphic signatures (orders >= -1, no order 0) with ``g <= max_genus``
    and positive orders summing to at most ``max_positive``."""

    def parts(total: int, largest: int) -> Iterator[tuple[int, ...]]:
        if total == 0:
            yield ()
            return
        for k in range(min(total, largest), 0, -1):
            for rest in parts(total - k, k):
                yield (k,) + rest

    for g in range(max_genus + 1):
        for pos in range(max_positive + 1):
            minus = pos - (4 * g - 4)
            if minus < 0:
                continue
            for p in parts(pos, pos):
                yield StratumSignature(g, list(p) + [-1] * minus)


EMPTY_HOLOMORPHIC = {(1, ()), (1, (-1, 1)), (2, (4,)), (2, (1, 3))}


def criterion_empty_strata() -> CriterionResult:
    t = time.perf_counter()
    found = set()
    n = 0
    for sig in holomorphic_signatures():
        n += 1
        if not stratum_nonempty_holomorphic(sig):
            found.add((sig.genus, tuple(sorted(sig.zeros))))
    ok = found == EMPTY_HOLOMORPHIC
    return CriterionResult(7, "empty holomorphic strata", ok,
                           f"{n} signatures, empty: {sorted(found)}", time.perf_counter() - t,
                           [] if ok else [("expected", sorted(EMPTY_HOLOMORPHIC)), ("found", sorted(found))])


def suite_surfaces() -> list[tuple[str, FlatSurface]]:
    out = [(e.name, e.build().surface) for e in constructors.witness_catalog()]
    out += [(f"square {k}", s) for k, s in enumerate(square_surfaces())]
    for sig in search.sweep_strata(4):
        for roots in search.sorted_root_tuples(sig.s, 8):
            w = search.first_witness(sig, roots)
            if w is not None:
                out.append((f"{sig} {roots}", w.surface))
    return out


def criterion_degree_identity() -> CriterionResult:
    t = time.perf_counter()
    failures = []
    surfaces = suite_surfaces()
    for name, surf in surfaces:
        inv = verify(surf)
        if sum(inv.zero_orders) + sum(inv.pole_orders) != 4 * inv.genus - 4:
            failures.append((name, inv))
    return CriterionResult(8, "degree identity", not failures,
                           f"{len(surfaces) - len(failures)}/{len(surfaces)} surfaces", time.perf_counter() - t, failures)


def criterion_scaling() -> CriterionResult:
    t = time.perf_counter()
    failures = []
    entries = constructors.witness_catalog()
    for e in entries:
        surf = e.build().surface
        a, b = verify(surf), verify(surf.scaled(2))
        same = (a.genus, a.zero_orders, a.pole_orders, a.primitive) == (b.genus, b.zero_orders, b.pole_orders, b.primitive)
        ra, rb = a.residue_map, b.residue_map
        if not same or ra.keys() != rb.keys() or any(rb[k] != ra[k] * G(4) for k in ra):
            failures.append((e.name, a, b))
    return CriterionResult(9, "scaling by two", not failures,
                           f"{len(entries) - len(failures)}/{len(entries)} catalog witnesses", time.perf_counter() - t,
                           failures)


CRITERIA: tuple[Callable[[], CriterionResult], ...] = (
    criterion_regression,
    criterion_round_trip,
    criterion_three_poles,
    criterion_half_integer,
    criterion_agreement,
    criterion_primitivity,
    criterion_empty_strata,
    criterion_degree_identity,
    criterion_scaling,
)


def run_all() -> list[CriterionResult]:
    return [c() for c in CRITERIA]
