"""Exact arithmetic, stratum signatures, residue configurations and two
standalone applications (emptiness of finite-area strata, cylinder bound).

Everything here is an immutable value built on :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

RationalLike = Union[int, Fraction, str]


class QuadStrataError(Exception):
    """Base class for every error raised by the package."""

    code = "Error"

    def to_json(self) -> dict:
        return {"error": self.code, "message": str(self)}


class DegreeMismatch(QuadStrataError):
    code = "DegreeMismatch"


class IllegalOrder(QuadStrataError):
    code = "IllegalOrder"


class EmptyStratum(QuadStrataError):
    code = "EmptyStratum"


class ConfigMismatch(QuadStrataError):
    code = "ConfigMismatch"


class InvalidComponent(QuadStrataError):
    code = "InvalidComponent"


class ParseError(QuadStrataError):
    code = "ParseError"


# ---------------------------------------------------------------------------
# Gaussian rationals
# ---------------------------------------------------------------------------


def _frac(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex number ``re + i*im`` with rational parts.

    ``Fraction`` keeps both parts reduced with a positive denominator, so
    structural equality is mathematical equality.
    """

    re: Fraction
    im: Fraction = Fraction(0)

    def __init__(self, re: RationalLike = 0, im: RationalLike = 0):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    @staticmethod
    def coerce(x: "GaussLike") -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            raise TypeError("floating complex numbers are not accepted")
        return GaussianRational(x, 0)

    def __add__(self, other: "GaussLike") -> "GaussianRational":
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other: "GaussLike") -> "GaussianRational":
        return self + (-GaussianRational.coerce(other))

    def __rsub__(self, other: "GaussLike") -> "GaussianRational":
        return GaussianRational.coerce(other) - self

    def __mul__(self, other: "GaussLike") -> "GaussianRational":
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other: "GaussLike") -> "GaussianRational":
        o = GaussianRational.coerce(other)
        n = o.norm2()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        p = self * o.conjugate()
        return GaussianRational(p.re / n, p.im / n)

    def __rtruediv__(self, other: "GaussLike") -> "GaussianRational":
        return GaussianRational.coerce(other) / self

    def __bool__(self) -> bool:
        return self.re != 0 or self.im != 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def square(self) -> "GaussianRational":
        return self * self

    def is_real(self) -> bool:
        return self.im == 0

    def __repr__(self) -> str:
        if self.im == 0:
            return f"G({self.re})"
        return f"G({self.re}, {self.im})"

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"

    def to_json(self) -> dict:
        return {"re": fraction_to_str(self.re), "im": fraction_to_str(self.im)}

    @staticmethod
    def from_json(obj) -> "GaussianRational":
        if isinstance(obj, dict):
            try:
                return GaussianRational(parse_fraction(obj.get("re", "0")), parse_fraction(obj.get("im", "0")))
            except (TypeError, ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"bad complex number {obj!r}: {exc}") from exc
        if isinstance(obj, str):
            return parse_gaussian(obj)
        if isinstance(obj, int) and not isinstance(obj, bool):
            return GaussianRational(obj)
        raise ParseError(f"bad complex number {obj!r}")


GaussLike = Union[GaussianRational, int, Fraction]
G = GaussianRational
I = GaussianRational(0, 1)
ZERO = GaussianRational(0)
ONE = GaussianRational(1)


def fraction_to_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(s) -> Fraction:
    if isinstance(s, bool):
        raise ParseError("booleans are not rationals")
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise ParseError(f"rationals must be strings 'p/q', got {s!r}")
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {s!r}") from exc


def parse_gaussian(text: str) -> GaussianRational:
    """Parse ``'3/2'``, ``'2i'``, ``'-i'``, ``'1+2/3i'`` or ``'1/2-i'``."""
    t = text.strip().replace(" ", "")
    if not t:
        raise ParseError("empty complex number")
    try:
        if not t.endswith("i"):
            return GaussianRational(Fraction(t))
        body = t[:-1]
        # split at the last sign that is not a leading sign nor part of an exponent
        cut = -1
        for k in range(len(body) - 1, 0, -1):
            if body[k] in "+-":
                cut = k
                break
        if cut == -1:
            re_part, im_part = "0", body
        else:
            re_part, im_part = body[:cut], body[cut:]
        if im_part in ("", "+"):
            im_part = "1"
        elif im_part == "-":
            im_part = "-1"
        return GaussianRational(Fraction(re_part), Fraction(im_part))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad complex number {text!r}") from exc


def is_rational_square(q: Fraction) -> bool:
    if q < 0:
        return False
    n, d = q.numerator, q.denominator
    return math.isqrt(n) ** 2 == n and math.isqrt(d) ** 2 == d


def rational_sqrt(q: Fraction) -> Fraction:
    if not is_rational_square(q):
        raise ValueError(f"{q} is not the square of a rational")
    return Fraction(math.isqrt(q.numerator), math.isqrt(q.denominator))


def gaussian_sqrt(z: GaussianRational) -> GaussianRational | None:
    """An exact square root of ``z`` in Q(i), or ``None`` if there is none.

    The returned root has positive real part, or zero real part and
    nonnegative imaginary part.
    """
    if not z:
        return ZERO
    # (x+iy)^2 = z  with |z| = x^2+y^2 must be rational
    n2 = z.norm2()
    if not is_rational_square(n2):
        return None
    m = rational_sqrt(n2)
    x2 = (m + z.re) / 2
    y2 = (m - z.re) / 2
    if not (is_rational_square(x2) and is_rational_square(y2)):
        return None
    x = rational_sqrt(x2)
    y = rational_sqrt(y2)
    if z.im < 0:
        y = -y
    root = GaussianRational(x, y)
    return canonical_root(root)


def canonical_root(r: GaussianRational) -> GaussianRational:
    """Choose between ``r`` and ``-r``: positive real part, or zero real part
    and positive imaginary part."""
    if r.re < 0 or (r.re == 0 and r.im < 0):
        return -r
    return r


# ---------------------------------------------------------------------------
# Signatures
# ---------------------------------------------------------------------------


def _canonical_zeros(zeros: Iterable[int]) -> tuple[int, ...]:
    zs = list(zeros)
    odd = sorted((a for a in zs if a % 2), reverse=True)
    even = sorted((a for a in zs if a % 2 == 0), reverse=True)
    return tuple(odd + even)


@dataclass(frozen=True)
class StratumSignature:
    """Genus and singularity orders of a stratum of quadratic differentials.

    ``zeros`` holds the orders ``a_i >= -1`` (simple poles are zeros of order
    -1); ``even_poles`` and ``odd_poles`` store the positive numbers ``b`` and
    ``c`` meaning poles of order ``-b`` and ``-c``; ``double_poles`` counts
    the poles of order -2.
    """

    genus: int
    zeros: tuple[int, ...] = ()
    even_poles: tuple[int, ...] = ()
    odd_poles: tuple[int, ...] = ()
    double_poles: int = 0

    def __init__(self, genus: int, zeros: Sequence[int] = (), even_poles: Sequence[int] = (),
                 odd_poles: Sequence[int] = (), double_poles: int = 0):
        object.__setattr__(self, "genus", int(genus))
        object.__setattr__(self, "zeros", _canonical_zeros(int(a) for a in zeros))
        object.__setattr__(self, "even_poles", tuple(sorted((int(b) for b in even_poles), reverse=True)))
        object.__setattr__(self, "odd_poles", tuple(sorted((int(c) for c in odd_poles), reverse=True)))
        object.__setattr__(self, "double_poles", int(double_poles))

    # derived quantities
    @property
    def n_odd_zeros(self) -> int:
        return sum(1 for a in self.zeros if a % 2)

    @property
    def n_even_zeros(self) -> int:
        return sum(1 for a in self.zeros if a % 2 == 0)

    @property
    def p(self) -> int:
        return len(self.even_poles)

    @property
    def r(self) -> int:
        return len(self.odd_poles)

    @property
    def s(self) -> int:
        return self.double_poles

    @property
    def n(self) -> int:
        return len(self.zeros)

    @property
    def has_poles(self) -> bool:
        return bool(self.even_poles or self.odd_poles or self.double_poles)

    def odd_zeros(self) -> tuple[int, ...]:
        return tuple(a for a in self.zeros if a % 2)

    def even_zeros(self) -> tuple[int, ...]:
        return tuple(a for a in self.zeros if a % 2 == 0)

    def pole_orders(self) -> tuple[int, ...]:
        """All pole orders as negative integers, canonical order."""
        return tuple(-b for b in self.even_poles) + tuple(-c for c in self.odd_poles) + (-2,) * self.double_poles

    def degree(self) -> int:
        return sum(self.zeros) - sum(self.even_poles) - sum(self.odd_poles) - 2 * self.double_poles

    def all_orders(self) -> tuple[int, ...]:
        return self.zeros + self.pole_orders()

    def orders_gcd(self) -> int:
        g = 0
        for x in self.all_orders():
            g = math.gcd(g, abs(x))
        return g

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "zeros": list(self.zeros),
            "even_poles": list(self.even_poles),
            "odd_poles": list(self.odd_poles),
            "double_poles": self.double_poles,
        }

    @staticmethod
    def from_json(obj: dict) -> "StratumSignature":
        if not isinstance(obj, dict):
            raise ParseError("signature must be a JSON object")
        try:
            if "orders" in obj:  # flat list, poles negative
                return StratumSignature.from_orders(int(obj["genus"]), [int(m) for m in obj["orders"]])
            return StratumSignature(
                genus=obj["genus"],
                zeros=obj.get("zeros", []),
                even_poles=obj.get("even_poles", []),
                odd_poles=obj.get("odd_poles", []),
                double_poles=obj.get("double_poles", 0),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad signature {obj!r}: {exc}") from exc

    @staticmethod
    def from_orders(genus: int, orders: Iterable[int]) -> "StratumSignature":
        """Build a signature from a flat list of orders (poles negative)."""
        zeros, even, odd, s = [], [], [], 0
        for m in orders:
            if m >= -1:
                zeros.append(m)
            elif m == -2:
                s += 1
            elif m % 2 == 0:
                even.append(-m)
            else:
                odd.append(-m)
        return StratumSignature(genus, zeros, even, odd, s)

    def __str__(self) -> str:
        parts = [",".join(map(str, self.zeros))]
        poles = [str(-b) for b in self.even_poles] + [str(-c) for c in self.odd_poles]
        if self.double_poles:
            poles.append(f"(-2)^{self.double_poles}")
        return f"Q{self.genus}(" + ";".join([parts[0]] + ([",".join(poles)] if poles else [])) + ")"


@dataclass(frozen=True)
class ValidatedSignature:
    signature: StratumSignature
    n_odd_zeros: int
    n_even_zeros: int
    forces_square: bool

    def to_json(self) -> dict:
        d = self.signature.to_json()
        d.update({"odd_zero_count": self.n_odd_zeros, "even_zero_count": self.n_even_zeros,
                  "forces_square": self.forces_square})
        return d


def validate_signature(sig: StratumSignature) -> ValidatedSignature:
    """Check orders and the degree condition; annotate parity counts."""
    if sig.genus < 0:
        raise IllegalOrder(f"negative genus {sig.genus}")
    for a in sig.zeros:
        if a < -1:
            raise IllegalOrder(f"zero order {a} < -1")
    for b in sig.even_poles:
        if b % 2 or b < 4:
            raise IllegalOrder(f"even pole order -{b} must be even and <= -4")
    for c in sig.odd_poles:
        if c % 2 == 0 or c < 3:
            raise IllegalOrder(f"odd pole order -{c} must be odd and <= -3")
    if sig.double_poles < 0:
        raise IllegalOrder("negative number of double poles")
    if sig.degree() != 4 * sig.genus - 4:
        raise DegreeMismatch(f"orders sum to {sig.degree()}, expected {4 * sig.genus - 4}")
    # parity of odd singularities follows from the degree condition, checked anyway
    if (sig.n_odd_zeros + sig.r) % 2:
        raise DegreeMismatch("odd number of odd singularities")
    forces = sig.genus == 0 and all(m % 2 == 0 for m in sig.all_orders())
    return ValidatedSignature(sig, sig.n_odd_zeros, sig.n_even_zeros, forces)


def stratum_nonempty_holomorphic(sig: StratumSignature) -> bool:
    """Whether the primitive finite-area stratum is nonempty."""
    if sig.has_poles:
        raise IllegalOrder("signature has poles of order <= -2")
    validate_signature(sig)
    mu = tuple(sorted(sig.zeros))
    if sig.genus == 1 and mu in ((), (-1, 1)):
        return False
    if sig.genus == 2 and mu in ((4,), (1, 3)):
        return False
    if sig.genus == 0 and all(a % 2 == 0 for a in mu):
        return False
    return True


def max_disjoint_cylinders(sig: StratumSignature) -> int:
    """Maximal number of disjoint cylinders, ``g + #even zeros + #odd zeros/2 - 1``."""
    if not stratum_nonempty_holomorphic(sig):
        raise EmptyStratum(f"{sig} is empty")
    return sig.genus + sig.n_even_zeros + sig.n_odd_zeros // 2 - 1


# ---------------------------------------------------------------------------
# Residue configurations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RootedResidueConfig:
    """Residues given through square roots: pole ``j`` has residue ``r_j**2``."""

    even_pole_roots: tuple[GaussianRational, ...] = ()
    double_pole_roots: tuple[GaussianRational, ...] = ()

    def __init__(self, even_pole_roots: Sequence[GaussLike] = (), double_pole_roots: Sequence[GaussLike] = ()):
        object.__setattr__(self, "even_pole_roots", tuple(GaussianRational.coerce(r) for r in even_pole_roots))
        object.__setattr__(self, "double_pole_roots", tuple(GaussianRational.coerce(r) for r in double_pole_roots))

    def check_against(self, sig: StratumSignature) -> None:
        if len(self.even_pole_roots) != sig.p:
            raise ConfigMismatch(f"{len(self.even_pole_roots)} even-pole roots for {sig.p} even poles")
        if len(self.double_pole_roots) != sig.s:
            raise ConfigMismatch(f"{len(self.double_pole_roots)} double-pole roots for {sig.s} double poles")
        if any(not r for r in self.double_pole_roots):
            raise ConfigMismatch("double poles have nonzero residues")

    @property
    def even_residues(self) -> tuple[GaussianRational, ...]:
        return tuple(r.square() for r in self.even_pole_roots)

    @property
    def double_residues(self) -> tuple[GaussianRational, ...]:
        return tuple(r.square() for r in self.double_pole_roots)

    def residues(self) -> tuple[GaussianRational, ...]:
        return self.even_residues + self.double_residues

    def is_origin(self) -> bool:
        return not any(self.even_pole_roots) and not any(self.double_pole_roots)

    def scaled(self, lam: GaussLike) -> "RootedResidueConfig":
        """Multiply every root by ``lam`` (every residue by ``lam**2``)."""
        lam = GaussianRational.coerce(lam)
        return RootedResidueConfig([lam * r for r in self.even_pole_roots], [lam * r for r in self.double_pole_roots])

    def to_json(self) -> dict:
        return {
            "even_pole_roots": [r.to_json() for r in self.even_pole_roots],
            "double_pole_roots": [r.to_json() for r in self.double_pole_roots],
        }

    @staticmethod
    def from_json(obj) -> "RootedResidueConfig":
        if not isinstance(obj, dict):
            raise ParseError("roots must be a JSON object")
        return RootedResidueConfig(
            [GaussianRational.from_json(x) for x in obj.get("even_pole_roots", [])],
            [GaussianRational.from_json(x) for x in obj.get("double_pole_roots", [])],
        )


def normalize_by_first_nonzero(residues: Sequence[GaussLike]) -> tuple[GaussianRational, ...]:
    """Divide a residue tuple by its first nonzero entry (C*-scaling helper)."""
    rs = [GaussianRational.coerce(x) for x in residues]
    for x in rs:
        if x:
            return tuple(y / x for y in rs)
    return tuple(rs)


@dataclass(frozen=True)
class ComponentSelector:
    """Either the whole stratum or the genus-one component with rotation number ``rho``."""

    rho: int | None = None

    @property
    def whole(self) -> bool:
        return self.rho is None

    def to_json(self):
        return "whole" if self.rho is None else {"rotation_number": self.rho}

    @staticmethod
    def from_json(obj) -> "ComponentSelector":
        if obj in (None, "whole", "whole_stratum"):
            return ComponentSelector()
        if isinstance(obj, dict) and "rotation_number" in obj:
            return ComponentSelector(int(obj["rotation_number"]))
        if isinstance(obj, int) and not isinstance(obj, bool):
            return ComponentSelector(obj)
        if isinstance(obj, str) and obj.isdigit():
            return ComponentSelector(int(obj))
        raise ParseError(f"bad component selector {obj!r}")


WHOLE = ComponentSelector()


def legal_rotation_numbers(sig: StratumSignature) -> tuple[int, ...]:
    """Odd rotation numbers of the primitive components of a genus-one stratum."""
    if sig.genus != 1:
        raise InvalidComponent("rotation numbers are defined in genus one only")
    g = sig.orders_gcd()
    single = sig.n == 1 and (sig.p + sig.r + sig.s) == 1
    out = []
    for d in range(1, g + 1):
        if g % d or d % 2 == 0:
            continue
        if single and d == g:
            continue
        out.append(d)
    return tuple(out)


def check_component(sig: StratumSignature, comp: ComponentSelector) -> None:
    if comp.whole:
        return
    if sig.genus != 1:
        raise InvalidComponent("rotation-number components exist only in genus one")
    if comp.rho not in legal_rotation_numbers(sig):
        raise InvalidComponent(
            f"rotation number {comp.rho} is not that of a primitive component of {sig}; "
            f"legal values {legal_rotation_numbers(sig)}")


# ---------------------------------------------------------------------------
# Exact linear algebra
# ---------------------------------------------------------------------------


def solve_rational(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction] | None:
    """Unique solution of a square rational system, ``None`` if singular."""
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        rowc = [x / pv for x in a[col]]
        a[col] = rowc
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], rowc)]
    return [a[r][n] for r in range(n)]


def rational_inverse(matrix: Sequence[Sequence[Fraction]]) -> list[list[Fraction]] | None:
    """Inverse of a square rational matrix, ``None`` if singular."""
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        rowc = [x / pv for x in a[col]]
        a[col] = rowc
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], rowc)]
    return [row[n:] for row in a]
