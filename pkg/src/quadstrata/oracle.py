"""Realizability decision procedure for quadratic residues.

Given a stratum, a rooted residue configuration and a component selector,
:func:`decide` returns whether some primitive quadratic differential in that
stratum (or component) has exactly these residues.  The decision tree is a
list of ordered guards; every leaf carries the label of the classification
statement it transcribes.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from itertools import permutations, product
from typing import Sequence

from .core import (
    WHOLE,
    ComponentSelector,
    GaussianRational,
    GaussLike,
    QuadStrataError,
    RootedResidueConfig,
    StratumSignature,
    check_component,
    stratum_nonempty_holomorphic,
    validate_signature,
)

G = GaussianRational

REALIZABLE = "Realizable"
NOT_REALIZABLE = "NotRealizable"
REALIZABLE_NO_WITNESS = "RealizableNoWitness"


class NonPrimitiveStratum(QuadStrataError):
    code = "NonPrimitiveStratum"


class ComponentUnknownForGenusGe2(QuadStrataError):
    code = "ComponentUnknownForGenusGe2"


@dataclass(frozen=True)
class Obstruction:
    kind: str
    name: str | None = None

    def to_json(self):
        return self.kind if self.name is None else {"kind": self.kind, "name": self.name}

    @staticmethod
    def from_json(obj) -> "Obstruction":
        if isinstance(obj, str):
            return Obstruction(obj)
        return Obstruction(obj["kind"], obj.get("name"))

    def __str__(self) -> str:
        return self.kind if self.name is None else f"{self.kind}({self.name})"


ORIGIN = Obstruction("Origin")
CROSSE = Obstruction("Crosse")
TRIANGULAR = Obstruction("Triangular")
ARITH_ODD = Obstruction("ArithmeticOddSum")
ARITH_EVEN = Obstruction("ArithmeticEvenSum")
EXCEPTIONAL = Obstruction("ExceptionalComponent")
ALL_ONES = Obstruction("ProportionalAllOnes")


def special_family(name: str) -> Obstruction:
    return Obstruction("SpecialFamily", name)


@dataclass(frozen=True)
class Verdict:
    status: str
    obstruction: Obstruction | None
    citation: str
    witness: str | None = None  # name of the covering recipe, if any

    def __post_init__(self):
        if (self.status == NOT_REALIZABLE) != (self.obstruction is not None):
            raise ValueError("an obstruction is present exactly for NotRealizable verdicts")
        if not self.citation:
            raise ValueError("citation must be nonempty")

    @property
    def realizable(self) -> bool:
        return self.status != NOT_REALIZABLE

    def to_json(self) -> dict:
        d: dict = {"status": self.status, "citation": self.citation}
        if self.obstruction is not None:
            d["obstruction"] = self.obstruction.to_json()
        if self.witness is not None:
            d["witness"] = self.witness
        return d


# ---------------------------------------------------------------------------
# predicates
# ---------------------------------------------------------------------------


def is_triangular(r1: GaussLike, r2: GaussLike, r3: GaussLike) -> bool:
    """Residues admitting square roots that sum to zero (closed form)."""
    a, b, c = (G.coerce(x) for x in (r1, r2, r3))
    return a * a + b * b + c * c == (a * b + a * c + b * c) * G(2)


def roots_sum_to_zero(r1: GaussLike, r2: GaussLike, r3: GaussLike) -> bool:
    """Sign enumeration on given roots: some choice of ``±r1 ± r2 ± r3`` vanishes."""
    a, b, c = (G.coerce(x) for x in (r1, r2, r3))
    return any(not (a + b * G(s2) + c * G(s3)) for s2, s3 in product((1, -1), repeat=2))


def is_crosse(residues: Sequence[GaussLike]) -> bool:
    """Tuple proportional to ``(1, ..., 1, R, R)`` with ``R`` nonzero (``R = 1`` allowed)."""
    rs = [G.coerce(x) for x in residues]
    if len(rs) < 3 or any(not x for x in rs):
        return False
    counts = Counter(rs)
    if len(counts) == 1:
        return True
    if len(counts) == 2:
        return 2 in counts.values()
    return False


def is_triangular_pattern(residues: Sequence[GaussLike], repeat: int) -> bool:
    """``(R1, R2, R3, ..., R3)`` up to order, ``R3`` repeated ``repeat`` times and
    ``(R1, R2, R3)`` triangular."""
    rs = [G.coerce(x) for x in residues]
    if len(rs) != repeat + 2:
        return False
    counts = Counter(rs)
    for v, k in counts.items():
        if k < repeat:
            continue
        rest = list(rs)
        for _ in range(repeat):
            rest.remove(v)
        if is_triangular(rest[0], rest[1], v):
            return True
    return False


@dataclass(frozen=True)
class ArithmeticForm:
    roots: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.roots)

    @property
    def parity(self) -> str:
        return "even" if self.total % 2 == 0 else "odd"

    def to_json(self) -> dict:
        return {"roots": list(self.roots), "sum": self.total, "parity": self.parity}


def arithmetic_normal_form(roots: Sequence[GaussLike]) -> ArithmeticForm | None:
    """Coprime positive integers proportional to ``|r_i|`` when every ratio
    ``r_i / r_1`` is a real rational, else ``None``."""
    rs = [G.coerce(x) for x in roots]
    if not rs or any(not x for x in rs):
        return None
    ratios = []
    for x in rs:
        q = x / rs[0]
        if q.im != 0:
            return None
        ratios.append(abs(q.re))
    den = 1
    for q in ratios:
        den = den * q.denominator // math.gcd(den, q.denominator)
    ints = [int(q * den) for q in ratios]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    return ArithmeticForm(tuple(v // g for v in ints))


def _all_equal(xs: Sequence[G]) -> bool:
    return len(set(xs)) <= 1


# ---------------------------------------------------------------------------
# decision tree
# ---------------------------------------------------------------------------


def _no(obstruction: Obstruction, citation: str) -> Verdict:
    return Verdict(NOT_REALIZABLE, obstruction, citation)


def _yes(citation: str) -> Verdict:
    return Verdict(REALIZABLE, None, citation)


def _genus_one(sig: StratumSignature, cfg: RootedResidueConfig, comp: ComponentSelector) -> Verdict:
    zeros = tuple(sorted(sig.zeros))
    p, s = sig.p, sig.s
    if sig.r == 0 and s == 0 and p >= 1 and all(b == 4 for b in sig.even_poles):
        a = p
        if zeros in ((4 * a,), (2 * a - 1, 2 * a + 1)) and cfg.is_origin():
            return _no(ORIGIN, "Thm 1.2 i")
    if sig.r == 0 and p == 0 and s >= 2 and s % 2 == 0:
        if zeros in ((2 * s,), (s - 1, s + 1)) and _all_equal(cfg.double_residues):
            return _no(ALL_ONES, "Thm 1.2 ii")
    exceptional = {((6,), (6,), ()): 1, ((3, 3), (6,), ()): 1, ((12,), (6, 6), ()): 3}
    rho = exceptional.get((zeros, tuple(sig.even_poles), tuple(sig.odd_poles)))
    if rho is not None and s == 0 and cfg.is_origin():
        if comp.rho == rho:
            return _no(EXCEPTIONAL, "Thm 1.2 iii")
        if comp.whole:
            return _yes("Thm 1.2 iii")
    return _yes("Thm 1.2 iv")


def _thm16_family(sig: StratumSignature) -> list[tuple[str, str]]:
    """Special families with an odd pair of zeros, poles of order 4 and double poles."""
    if sig.n_even_zeros or sig.n_odd_zeros != 2 or any(b != 4 for b in sig.even_poles):
        return []
    a1, a2 = sig.odd_zeros()
    p, s = sig.p, sig.s
    out = []
    if p == 1 and a1 == a2 + 2 and s == a1 - 1 and s % 2 == 0 and s >= 2:
        out.append(("i", "zero_even_equal_doubles"))
    if s == 2 and a1 == a2 + 2 and (a1 - 1) == 2 * p:
        out.append(("ii", "zero_evens_two_equal_doubles"))
    if p == 1 and a1 == a2 and s == a1 and s % 2 == 1:
        out.append(("iii", "all_equal"))
    if s == 1 and a1 == a2 and a1 == 2 * p - 1:
        out.append(("iv", "single_even_matches_double"))
    return out


def _thm16_excluded(case: str, cfg: RootedResidueConfig) -> bool:
    ev, db = cfg.even_residues, cfg.double_residues
    if case == "i":
        return not any(ev) and _all_equal(db)
    if case == "ii":
        return not any(ev) and _all_equal(db)
    if case == "iii":
        return _all_equal(ev + db)
    nonzero = [x for x in ev if x]
    return len(nonzero) == 1 and nonzero[0] == db[0]


def _thm17_special(sig: StratumSignature) -> list[tuple[int, int]]:
    """Pole-order pairs ``(b, b')`` of the two families whose residues may not be
    proportional to ``(1, 1, 0, ..., 0)``; empty if the stratum is not one of them."""
    if sig.n_even_zeros or sig.n_odd_zeros != 2:
        return []
    p = sig.p
    if p < 2:
        return []
    a1, a2 = sig.odd_zeros()
    poles = Counter(sig.even_poles)
    out = []
    for b in sorted(set(sig.even_poles)):
        for pair in ((b, b + 2), (b, b)):
            rest = poles.copy()
            rest[pair[0]] -= 1
            rest[pair[1]] -= 1
            if any(v < 0 for v in rest.values()):
                continue
            if set(k for k, v in rest.items() if v > 0) - {4}:
                continue
            if pair[1] == b + 2:
                ok = a1 == a2 == 2 * p + b - 5
            else:
                ok = (a1, a2) == (2 * p + b - 5, 2 * p + b - 7)
            if ok and pair not in out:
                out.append(pair)
    return out


def _matches_11_0(sig: StratumSignature, cfg: RootedResidueConfig, pair: tuple[int, int]) -> bool:
    res = cfg.even_residues
    orders = sig.even_poles
    for i, j in permutations(range(len(orders)), 2):
        if (orders[i], orders[j]) != pair:
            continue
        if res[i] != res[j]:
            continue
        if all(not res[k] for k in range(len(orders)) if k not in (i, j)):
            return True
    return False


def _genus_zero(sig: StratumSignature, cfg: RootedResidueConfig) -> Verdict:
    odd_zeros = sig.n_odd_zeros
    r, p, s = sig.r, sig.p, sig.s
    even_sum = sum(sig.even_zeros())
    if odd_zeros + r >= 4:
        return _yes("Thm 1.3")
    if r == 2:
        return _yes("Thm 1.4")
    if r == 1 and odd_zeros == 1:
        if cfg.is_origin() and even_sum < 2 * p:
            return _no(ORIGIN, "Thm 1.5 i")
        return _yes("Thm 1.5 ii")
    # from here on: two odd zeros, no odd pole
    if p and s:
        for case, name in _thm16_family(sig):
            if _thm16_excluded(case, cfg):
                return _no(special_family(name), f"Thm 1.6 {case}")
        return _yes("Thm 1.6")
    if s == 0:
        for pair in _thm17_special(sig):
            if _matches_11_0(sig, cfg, pair):
                name = "equal_pair_b_b_plus_2" if pair[1] != pair[0] else "equal_pair_b_b"
                if cfg.is_origin():
                    return _no(ORIGIN, "Thm 1.7 i")
                return _no(special_family(name), "Thm 1.7 i")
        if cfg.is_origin() and even_sum < 2 * p:
            return _no(ORIGIN, "Thm 1.7 ii")
        return _yes("Thm 1.7 iii")
    return _genus_zero_double_poles(sig, cfg)


def _genus_zero_double_poles(sig: StratumSignature, cfg: RootedResidueConfig) -> Verdict:
    a1, a2 = sig.odd_zeros()
    s = sig.s
    res = cfg.double_residues
    if sig.n_even_zeros == 0 and (a1, a2) == (-1, -1) and s == 1:
        return _yes("Thm 1.8")
    if sig.n_even_zeros == 0 and a1 == a2 + 2 and a1 % 2 == 1 and s == a1 + 1:
        if s == 2:
            if res[0] == res[1]:
                return _no(CROSSE, "Thm 1.8 i")
        elif is_crosse(res):
            return _no(CROSSE, "Thm 1.8 i")
    if sig.n_even_zeros == 0 and a1 == a2 and a1 >= 1 and s == a1 + 2:
        if is_triangular_pattern(res, a1):
            return _no(TRIANGULAR, "Thm 1.8 ii")
    form = arithmetic_normal_form(cfg.double_pole_roots)
    if form is not None:
        total = form.total
        if total % 2 == 1 and total < max(a1, a2) + 2:
            return _no(ARITH_ODD, "Thm 1.8 iii")
        if total % 2 == 0 and total < a1 + a2 + 4:
            return _no(ARITH_EVEN, "Thm 1.8 iv")
    return _yes("Thm 1.8")


def classify(sig: StratumSignature, cfg: RootedResidueConfig, comp: ComponentSelector = WHOLE) -> Verdict:
    """The realizability verdict, ignoring which constructions are available."""
    v = validate_signature(sig)
    cfg.check_against(sig)
    if sig.genus >= 2 and not comp.whole:
        raise ComponentUnknownForGenusGe2("component selectors are not computed in genus >= 2")
    check_component(sig, comp)
    if not sig.has_poles:
        if stratum_nonempty_holomorphic(sig):
            return _yes("Prop 1.10")
        return _no(special_family("empty_stratum"), "Prop 1.10")
    if v.forces_square:
        raise NonPrimitiveStratum(f"every differential in {sig} is a square")
    if sig.genus >= 2:
        return _yes("Thm 1.1")
    if sig.genus == 1:
        return _genus_one(sig, cfg, comp)
    return _genus_zero(sig, cfg)


def decide(sig: StratumSignature, cfg: RootedResidueConfig, comp: ComponentSelector = WHOLE,
           check_witness: bool = True) -> Verdict:
    """Full verdict; a realizable case outside the construction catalog is
    reported as ``RealizableNoWitness``."""
    verdict = classify(sig, cfg, comp)
    if verdict.status != REALIZABLE or not check_witness:
        return verdict
    from .constructors import covering_recipe  # constructors depend on this module

    recipe = covering_recipe(sig, cfg, comp)
    if recipe is None:
        return Verdict(REALIZABLE_NO_WITNESS, None, verdict.citation)
    return Verdict(REALIZABLE, None, verdict.citation, recipe)
