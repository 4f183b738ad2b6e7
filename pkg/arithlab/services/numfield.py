# multiquadratic number field towers
# exact arithmetic in F(sqrt r1, ..., sqrt rk) with F = Q or a real quadratic field Q(sqrt m)
# also: Galois sign characters, real places, prime splitting and reduction mod prime ideals

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Dict, List, Optional, Sequence, Tuple, Union

import galois
from mpmath import iv
from sympy import factorint, isprime
from sympy.ntheory import legendre_symbol, sqrt_mod

from arithlab.core.config import settings
from arithlab.core.errors import (
    BadReduction, ComplexPlace, DependentRadicands, DivisionByZero, FieldMismatch,
    InputError, NotPrime, NotSquarefree, PrecisionExhausted, UnsupportedCharacter, ZeroRadicand,
)
from arithlab.utils.rational import (
    as_fraction, format_fraction, int_valuation, mod_p, parse_fraction, rational_sqrt,
)

logger = logging.getLogger(__name__)

MAX_RADICANDS = 3


# ============================================================================
# BASE FIELDS
# ============================================================================

class QuadNum:
    """Element u + v*sqrt(m) of a real quadratic field, u and v rational"""

    __slots__ = ("u", "v", "m")

    def __init__(self, u, v, m: int):
        self.u = as_fraction(u)
        self.v = as_fraction(v)
        self.m = m

    def _coerce(self, other):
        if isinstance(other, QuadNum):
            if other.m != self.m:
                raise FieldMismatch(f"Q(sqrt {self.m}) vs Q(sqrt {other.m})")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadNum(other, 0, self.m)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadNum(self.u + o.u, self.v + o.v, self.m)

    __radd__ = __add__

    def __neg__(self):
        return QuadNum(-self.u, -self.v, self.m)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadNum(self.u - o.u, self.v - o.v, self.m)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadNum(
            self.u * o.u + self.m * self.v * o.v,
            self.u * o.v + self.v * o.u,
            self.m,
        )

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.u * self.u - self.m * self.v * self.v

    def conj(self) -> "QuadNum":
        return QuadNum(self.u, -self.v, self.m)

    def inverse(self) -> "QuadNum":
        n = self.norm()
        if n == 0:
            raise DivisionByZero("inverse of zero")
        return QuadNum(self.u / n, -self.v / n, self.m)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        return _power(self, k, QuadNum(1, 0, self.m))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.v == 0 and self.u == other
        if isinstance(other, QuadNum):
            return self.m == other.m and self.u == other.u and self.v == other.v
        return NotImplemented

    def __hash__(self):
        if self.v == 0:
            return hash(self.u)
        return hash((self.u, self.v, self.m))

    def __bool__(self):
        return self.u != 0 or self.v != 0

    def __repr__(self):
        if self.v == 0:
            return format_fraction(self.u)
        return f"({format_fraction(self.u)}{'+' if self.v > 0 else '-'}{format_fraction(abs(self.v))}*sqrt{self.m})"


BaseNum = Union[Fraction, QuadNum]


def base_str(x: BaseNum) -> str:
    return repr(x) if isinstance(x, QuadNum) else format_fraction(x)


def _power(x, k: int, one):
    if k < 0:
        return _power(one / x, -k, one)
    result = one
    base = x
    while k:
        if k & 1:
            result = result * base
        base = base * base
        k >>= 1
    return result


class BaseField:
    """
    Q (m=None) or the real quadratic field Q(sqrt m)

    Real places are indexed by the sign given to sqrt m: +1 is the identity
    embedding, -1 the conjugate one. Q has the single place +1.
    """

    def __init__(self, m: Optional[int] = None):
        if m is not None:
            m = int(m)
            if m <= 1 or not _is_squarefree(m):
                raise NotSquarefree(f"base radicand {m} must be a squarefree integer > 1")
        self.m = m

    @property
    def kind(self) -> str:
        return "rationals" if self.m is None else "real-quadratic"

    @property
    def degree(self) -> int:
        return 1 if self.m is None else 2

    def places(self) -> List[int]:
        return [1] if self.m is None else [1, -1]

    def coerce(self, x) -> BaseNum:
        if isinstance(x, FieldElem):
            if not x.is_base():
                raise FieldMismatch(f"{x!r} is not in the base field")
            return self.coerce(x.coeffs[0])
        if isinstance(x, str):
            x = parse_fraction(x)
        if isinstance(x, (list, tuple)):
            u, v = (parse_fraction(c) for c in x)
            if self.m is None:
                if v != 0:
                    raise FieldMismatch("irrational coefficient over Q")
                return u
            return QuadNum(u, v, self.m)
        if isinstance(x, QuadNum):
            if self.m is None:
                if x.v != 0:
                    raise FieldMismatch(f"{x!r} is not rational")
                return x.u
            if x.m != self.m:
                raise FieldMismatch(f"Q(sqrt {x.m}) element in Q(sqrt {self.m})")
            return x
        if isinstance(x, (int, Fraction)):
            x = as_fraction(x)
            return x if self.m is None else QuadNum(x, 0, self.m)
        raise FieldMismatch(f"cannot coerce {type(x).__name__} into {self}")

    def zero(self) -> BaseNum:
        return self.coerce(0)

    def one(self) -> BaseNum:
        return self.coerce(1)

    def gen(self) -> BaseNum:
        """sqrt m (only for real-quadratic bases)"""
        if self.m is None:
            raise FieldMismatch("Q has no generator")
        return QuadNum(0, 1, self.m)

    def parts(self, x) -> Tuple[Fraction, Fraction]:
        x = self.coerce(x)
        if isinstance(x, QuadNum):
            return x.u, x.v
        return x, Fraction(0)

    def conj(self, x) -> BaseNum:
        x = self.coerce(x)
        return x.conj() if isinstance(x, QuadNum) else x

    def norm(self, x) -> Fraction:
        x = self.coerce(x)
        return x.norm() if isinstance(x, QuadNum) else x

    def is_square(self, x) -> Optional[BaseNum]:
        """
        Exact square test in the base field

        Returns:
            a root s with s*s == x, or None when x is not a square
        """
        x = self.coerce(x)
        if self.m is None:
            return rational_sqrt(x)
        a, b = x.u, x.v
        if a == 0 and b == 0:
            return self.zero()
        if b == 0:
            r = rational_sqrt(a)
            if r is not None:
                return QuadNum(r, 0, self.m)
            # a = (s*sqrt m)^2 with s^2 = a/m
            s = rational_sqrt(a / self.m)
            if s is not None:
                return QuadNum(0, s, self.m)
            return None
        # (u + v sqrt m)^2 = a + b sqrt m  =>  u^2 - m v^2 = +-sqrt(N(x))
        s = rational_sqrt(a * a - self.m * b * b)
        if s is None:
            return None
        for t in (s, -s):
            u = rational_sqrt((a + t) / 2)
            if not u:
                continue
            v = b / (2 * u)
            root = QuadNum(u, v, self.m)
            if root * root == x:
                return root
        return None

    def sign(self, x, base_sign: int = 1) -> int:
        """Exact sign of x under the real place base_sign (sqrt m -> base_sign*sqrt m)"""
        u, v = self.parts(x)
        v = v * base_sign
        if v == 0:
            return (u > 0) - (u < 0)
        su = (u > 0) - (u < 0)
        sv = 1 if v > 0 else -1
        if su == 0 or su == sv:
            return sv
        # opposite signs: compare |u| with |v| sqrt m
        return su if u * u > self.m * v * v else sv

    def format(self, x) -> object:
        """JSON form: "p/q" over Q, ["p/q", "p/q"] over Q(sqrt m)"""
        u, v = self.parts(x)
        if self.m is None:
            return format_fraction(u)
        return [format_fraction(u), format_fraction(v)]

    def __eq__(self, other):
        return isinstance(other, BaseField) and other.m == self.m

    def __hash__(self):
        return hash(("base", self.m))

    def __repr__(self):
        return "Q" if self.m is None else f"Q(sqrt {self.m})"


def _is_squarefree(m: int) -> bool:
    return all(exp == 1 for exp in factorint(m).values())


# ============================================================================
# TOWERS
# ============================================================================

class NumberField:
    """
    Multiquadratic tower base(sqrt r_0, ..., sqrt r_{k-1})

    Basis elements e_S are indexed by subset masks S of the radicands,
    e_S = prod_{i in S} sqrt r_i, and e_S * e_T = (prod_{i in S&T} r_i) * e_{S^T}.
    """

    def __init__(self, base: BaseField, radicands: Sequence = ()):
        self.base = base
        rads = tuple(base.coerce(r) for r in radicands)
        if len(rads) > MAX_RADICANDS:
            raise InputError(f"at most {MAX_RADICANDS} radicands are supported")
        if any(r == 0 for r in rads):
            raise ZeroRadicand("radicands must be nonzero")
        self.radicands = rads
        self.k = len(rads)
        self.degree = 1 << self.k

        # r_S for every mask, then the cofactor table
        self._rad_products = []
        for mask in range(self.degree):
            prod = base.one()
            for i in range(self.k):
                if mask >> i & 1:
                    prod = prod * rads[i]
            self._rad_products.append(prod)

        for mask in range(1, self.degree):
            if base.is_square(self._rad_products[mask]) is not None:
                raise DependentRadicands(
                    f"product of radicands {self._mask_label(mask)} is a square in {base}"
                )

        self._cof = [[self._rad_products[s & t] for t in range(self.degree)] for s in range(self.degree)]
        self._zero = FieldElem(self, (base.zero(),) * self.degree)

    @classmethod
    def tower(cls, base: BaseField, candidates: Sequence) -> Tuple["NumberField", List["FieldElem"]]:
        """
        Smallest tower containing sqrt c for every candidate c

        Dependent candidates (squares, or products of earlier ones up to squares)
        are skipped, so (a, b) = (2, 2) gives Q(sqrt 2) with both roots equal.

        Returns:
            (field, [sqrt c for each candidate])
        """
        rads: List[BaseNum] = []
        for c in candidates:
            c = base.coerce(c)
            if c == 0:
                raise ZeroRadicand("cannot adjoin sqrt 0")
            if NumberField(base, rads).sqrt(c) is None:
                rads.append(c)
        field = cls(base, rads)
        return field, [field.sqrt(base.coerce(c)) for c in candidates]

    # --- elements ---

    def __call__(self, x) -> "FieldElem":
        if isinstance(x, FieldElem):
            if x.field == self:
                return x
            if x.field.is_subfield_of(self):
                return FieldElem(self, x.coeffs + (self.base.zero(),) * (self.degree - x.field.degree))
            raise FieldMismatch(f"{x.field} does not embed in {self}")
        coeffs = [self.base.zero()] * self.degree
        coeffs[0] = self.base.coerce(x)
        return FieldElem(self, tuple(coeffs))

    def element(self, coeffs: Sequence) -> "FieldElem":
        if len(coeffs) != self.degree:
            raise FieldMismatch(f"expected {self.degree} coefficients, got {len(coeffs)}")
        return FieldElem(self, tuple(self.base.coerce(c) for c in coeffs))

    def zero(self) -> "FieldElem":
        return self._zero

    def one(self) -> "FieldElem":
        return self(1)

    def basis(self, mask: int) -> "FieldElem":
        coeffs = [self.base.zero()] * self.degree
        coeffs[mask] = self.base.one()
        return FieldElem(self, tuple(coeffs))

    def gen(self, i: int) -> "FieldElem":
        """sqrt r_i"""
        return self.basis(1 << i)

    def base_gen(self) -> "FieldElem":
        return self(self.base.gen())

    def rad_product(self, mask: int) -> BaseNum:
        return self._rad_products[mask]

    def sqrt(self, x) -> Optional["FieldElem"]:
        """
        Square root of a base-field element inside the tower, or None

        sqrt x = s * e_S exactly when x / r_S = s^2 in the base for some mask S
        """
        x = self.base.coerce(x)
        if x == 0:
            return self.zero()
        for mask in range(self.degree):
            s = self.base.is_square(x / self._rad_products[mask])
            if s is not None:
                coeffs = [self.base.zero()] * self.degree
                coeffs[mask] = s
                return FieldElem(self, tuple(coeffs))
        return None

    def is_subfield_of(self, other: "NumberField") -> bool:
        return (
            self.base == other.base
            and self.k <= other.k
            and self.radicands == other.radicands[:self.k]
        )

    def _mask_label(self, mask: int) -> str:
        return "*".join(base_str(self.radicands[i]) if i < len(self.radicands) else f"r{i}"
                        for i in range(self.k) if mask >> i & 1) or "1"

    def __eq__(self, other):
        return (
            isinstance(other, NumberField)
            and self.base == other.base
            and self.radicands == other.radicands
        )

    def __hash__(self):
        return hash((self.base, self.radicands))

    def __repr__(self):
        if not self.radicands:
            return repr(self.base)
        roots = ", ".join(f"sqrt {base_str(r)}" for r in self.radicands)
        return f"{self.base!r}({roots})"


def field_new(base_m: Optional[int] = None, radicands: Sequence = ()) -> NumberField:
    """Construct a tower over Q (base_m=None) or Q(sqrt base_m)"""
    return NumberField(BaseField(base_m), radicands)


# ============================================================================
# ELEMENTS
# ============================================================================

class FieldElem:
    """Exact element of a NumberField, stored as base-field coefficients per basis mask"""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs: Tuple):
        self.field = field
        self.coeffs = coeffs

    def _pair(self, other) -> Optional[Tuple["FieldElem", "FieldElem"]]:
        if isinstance(other, FieldElem):
            if other.field == self.field:
                return self, other
            if other.field.is_subfield_of(self.field):
                return self, self.field(other)
            if self.field.is_subfield_of(other.field):
                return other.field(self), other
            raise FieldMismatch(f"{self.field} vs {other.field}")
        if isinstance(other, (int, Fraction, QuadNum)):
            return self, self.field(other)
        return None

    def __add__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return FieldElem(x.field, tuple(a + b for a, b in zip(x.coeffs, y.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.field, tuple(-c for c in self.coeffs))

    def __pos__(self):
        return self

    def __sub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return FieldElem(x.field, tuple(a - b for a, b in zip(x.coeffs, y.coeffs)))

    def __rsub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return y - x

    def __mul__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        field = x.field
        if y.is_base():
            c = y.coeffs[0]
            return FieldElem(field, tuple(a * c for a in x.coeffs))
        res = list(field.zero().coeffs)
        cof = field._cof
        for s, xs in enumerate(x.coeffs):
            if xs == 0:
                continue
            for t, yt in enumerate(y.coeffs):
                if yt == 0:
                    continue
                res[s ^ t] = res[s ^ t] + cof[s][t] * xs * yt
        return FieldElem(field, tuple(res))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        """
        Multiplicative inverse

        Multiplying by the conjugate that flips sqrt r_t clears every mask containing t;
        doing this for t = k-1 .. 0 leaves a base-field denominator.
        """
        if not self:
            raise DivisionByZero("division by zero in " + repr(self.field))
        field = self.field
        num = field.one()
        den = self
        for t in reversed(range(field.k)):
            signs = tuple(-1 if i == t else 1 for i in range(field.k))
            c = GaloisChar(signs).apply(den)
            num = num * c
            den = den * c
        d0 = den.coeffs[0]
        return num * (field.base.one() / d0)

    def __truediv__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return x * y.inverse()

    def __rtruediv__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return y * x.inverse()

    def __pow__(self, k: int):
        return _power(self, k, self.field.one())

    def is_base(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def base_value(self) -> BaseNum:
        if not self.is_base():
            raise FieldMismatch(f"{self!r} is not in the base field")
        return self.coeffs[0]

    def __bool__(self):
        return any(c != 0 for c in self.coeffs)

    def __eq__(self, other):
        try:
            pair = self._pair(other)
        except FieldMismatch:
            return False
        if pair is None:
            return NotImplemented
        x, y = pair
        return x.coeffs == y.coeffs

    def __hash__(self):
        if self.is_base():
            return hash(self.coeffs[0])
        return hash((self.field, self.coeffs))

    def __repr__(self):
        terms = []
        for mask, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if mask == 0:
                terms.append(base_str(c))
            else:
                coef = base_str(c)
                terms.append(f"{coef}*sqrt({self.field._mask_label(mask)})")
        return " + ".join(terms) if terms else "0"


def arith(x: FieldElem, y: FieldElem, op: str) -> FieldElem:
    """Dispatch one of add/sub/mul/div"""
    if isinstance(x, FieldElem) and isinstance(y, FieldElem) and x.field != y.field:
        raise FieldMismatch(f"{x.field} vs {y.field}")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise InputError(f"unknown operation {op!r}")


# ============================================================================
# GALOIS ACTION
# ============================================================================

@dataclass(frozen=True)
class GaloisChar:
    """
    Sign character of the finite Galois quotient of a tower

    signs[i] = -1 sends sqrt r_i to -sqrt r_i. base_sign = -1 also conjugates
    sqrt m, which is only a field automorphism when every radicand is rational.
    """
    signs: Tuple[int, ...]
    base_sign: int = 1

    @classmethod
    def identity(cls, k: int) -> "GaloisChar":
        return cls((1,) * k)

    @classmethod
    def all(cls, k: int) -> List["GaloisChar"]:
        """Every character of (+-1)^k, identity first"""
        return [cls(tuple(s)) for s in itertools.product((1, -1), repeat=k)]

    @classmethod
    def from_label(cls, label: str) -> "GaloisChar":
        base_sign = 1
        if label.startswith("~"):
            base_sign, label = -1, label[1:]
        return cls(tuple(1 if ch == "+" else -1 for ch in label), base_sign)

    @property
    def label(self) -> str:
        text = "".join("+" if s > 0 else "-" for s in self.signs)
        return ("~" if self.base_sign < 0 else "") + text

    @property
    def neg_mask(self) -> int:
        return sum(1 << i for i, s in enumerate(self.signs) if s < 0)

    def is_identity(self) -> bool:
        return self.base_sign == 1 and all(s == 1 for s in self.signs)

    def compose(self, other: "GaloisChar") -> "GaloisChar":
        if len(other.signs) != len(self.signs):
            raise FieldMismatch("characters of different towers")
        return GaloisChar(
            tuple(a * b for a, b in zip(self.signs, other.signs)),
            self.base_sign * other.base_sign,
        )

    __mul__ = compose

    def apply(self, x):
        if isinstance(x, QuadNum):
            return x.conj() if self.base_sign < 0 else x
        if isinstance(x, (int, Fraction)):
            return x
        if not isinstance(x, FieldElem):
            raise FieldMismatch(f"cannot act on {type(x).__name__}")
        field = x.field
        if len(self.signs) != field.k:
            raise FieldMismatch(f"character {self.label} does not act on {field}")
        base = field.base
        if self.base_sign < 0 and any(base.parts(r)[1] != 0 for r in field.radicands):
            raise UnsupportedCharacter("conjugating sqrt m requires rational radicands")
        neg = self.neg_mask
        out = []
        for mask, c in enumerate(x.coeffs):
            if self.base_sign < 0:
                c = base.conj(c)
            if bin(mask & neg).count("1") % 2:
                c = -c
            out.append(c)
        return FieldElem(field, tuple(out))

    def __call__(self, x):
        return self.apply(x)


def galois_apply(sigma: GaloisChar, x: FieldElem) -> FieldElem:
    return sigma.apply(x)


def galois_group(field: NumberField) -> List[GaloisChar]:
    return GaloisChar.all(field.k)


def norm_to_base(x: FieldElem) -> BaseNum:
    """Product of all conjugates over the base field"""
    prod = x.field.one()
    for sigma in galois_group(x.field):
        prod = prod * sigma.apply(x)
    return prod.base_value()


def trace_to_base(x: FieldElem) -> BaseNum:
    total = x.field.zero()
    for sigma in galois_group(x.field):
        total = total + sigma.apply(x)
    return total.base_value()


def is_square(x, base: Optional[BaseField] = None) -> Optional[BaseNum]:
    """Square test for a base-field element (yes with root, or None)"""
    if isinstance(x, FieldElem):
        return x.field.base.is_square(x.base_value())
    base = base or (BaseField(x.m) if isinstance(x, QuadNum) else BaseField())
    return base.is_square(x)


# ============================================================================
# REAL PLACES
# ============================================================================

@dataclass(frozen=True)
class RealPlace:
    """Real embedding: sqrt m -> base_sign*sqrt m, sqrt r_i -> signs[i]*sqrt r_i"""
    base_sign: int = 1
    signs: Tuple[int, ...] = ()

    @property
    def label(self) -> str:
        text = "inf" + {1: "", -1: "'"}[self.base_sign]
        if self.signs:
            text += "[" + "".join("+" if s > 0 else "-" for s in self.signs) + "]"
        return text

    def restrict(self) -> "RealPlace":
        """The base place below this one"""
        return RealPlace(self.base_sign)


def check_place(field: NumberField, place: RealPlace) -> None:
    if len(place.signs) != field.k:
        raise FieldMismatch(f"place {place.label} does not match {field}")
    if place.base_sign not in field.base.places():
        raise FieldMismatch(f"{field.base} has no place {place.label}")
    for r in field.radicands:
        if field.base.sign(r, place.base_sign) <= 0:
            raise ComplexPlace(f"radicand {r!r} is negative at {place.restrict().label}")


def base_places(base: BaseField) -> List[RealPlace]:
    return [RealPlace(s) for s in base.places()]


def _interval(x: FieldElem, place: RealPlace):
    field = x.field
    base = field.base
    sqrt_m = None
    if base.m is not None:
        sqrt_m = iv.sqrt(iv.mpf(base.m)) * place.base_sign

    def base_iv(c):
        u, v = base.parts(c)
        val = iv.mpf(u.numerator) / u.denominator
        if v != 0:
            val = val + (iv.mpf(v.numerator) / v.denominator) * sqrt_m
        return val

    roots = []
    for r, s in zip(field.radicands, place.signs):
        r_iv = base_iv(r)
        if not r_iv.a > 0:
            return None
        roots.append(iv.sqrt(r_iv) * s)

    total = iv.mpf(0)
    for mask, c in enumerate(x.coeffs):
        if c == 0:
            continue
        term = base_iv(c)
        for i in range(field.k):
            if mask >> i & 1:
                term = term * roots[i]
        total = total + term
    return total


def sign_at(x, place: RealPlace) -> int:
    """
    Exact sign of x at a real place: 1, -1 or 0

    Base-field elements are decided exactly; tower elements by interval
    enclosures with doubling precision until 0 is excluded.
    """
    if not isinstance(x, FieldElem):
        base = BaseField(x.m) if isinstance(x, QuadNum) else BaseField()
        return base.sign(x, place.base_sign)
    check_place(x.field, place)
    if not x:
        return 0
    if x.is_base():
        return x.field.base.sign(x.coeffs[0], place.base_sign)

    prec = settings.SIGN_START_PREC
    saved = iv.prec
    try:
        while prec <= settings.SIGN_MAX_PREC:
            iv.prec = prec
            enclosure = _interval(x, place)
            if enclosure is not None:
                if enclosure.a > 0:
                    return 1
                if enclosure.b < 0:
                    return -1
            logger.debug(f"sign of {x!r} undecided at {prec} bits, refining")
            prec *= 2
    finally:
        iv.prec = saved
    raise PrecisionExhausted(f"sign of {x!r} undecided at {settings.SIGN_MAX_PREC} bits")


def sign_selector(base: BaseField, negative_places: Sequence[int]) -> BaseNum:
    """
    Base element that is negative exactly at the given places

    Args:
        base: Q or Q(sqrt m)
        negative_places: base signs (1 = identity embedding, -1 = conjugate)

    Returns:
        lambda with sign -1 at those places and +1 elsewhere
    """
    chosen = set(negative_places)
    if not chosen <= set(base.places()):
        raise FieldMismatch(f"{base} has no places {sorted(chosen)}")
    if not chosen:
        return base.one()
    if len(chosen) == len(base.places()):
        return -base.one()
    # r < sqrt m < r + 1, so sqrt m - r is positive at +1 and negative at -1
    r = isqrt(base.m)
    lam = base.gen() - r
    return lam if chosen == {-1} else -lam


# ============================================================================
# PRIMES AND RESIDUE FIELDS
# ============================================================================

@dataclass(frozen=True)
class PrimeIdeal:
    """
    Prime of the base field above the rational prime p

    kind is one of rational / split / inert / ramified; root is the image of sqrt m
    in the residue field (an integer mod p), None over Q.
    """
    p: int
    m: Optional[int] = None
    kind: str = "rational"
    root: Optional[int] = None
    index: int = 0

    @property
    def residue_degree(self) -> int:
        return 2 if self.kind == "inert" else 1

    @property
    def ramified(self) -> bool:
        return self.kind == "ramified"

    @property
    def dyadic(self) -> bool:
        return self.p == 2

    @property
    def label(self) -> str:
        if self.kind == "split":
            return f"{self.p}{'ab'[self.index]}"
        return str(self.p)

    @property
    def norm(self) -> int:
        return self.p ** self.residue_degree

    def residue_field(self):
        return residue_field(self)


_GF_CACHE: Dict[Tuple[int, Optional[int]], object] = {}


def residue_field(prime: PrimeIdeal):
    """
    galois field class O/P

    inert primes use F_p[x]/(x^2 - m) (x^2 + x + 1 at p = 2), so sqrt m maps to x
    """
    key = (prime.p, prime.m if prime.kind == "inert" else None)
    if key not in _GF_CACHE:
        p = prime.p
        if prime.kind == "inert":
            coeffs = [1, 1, 1] if p == 2 else [1, 0, (-prime.m) % p]
            poly = galois.Poly(coeffs, field=galois.GF(p))
            _GF_CACHE[key] = galois.GF(p ** 2, irreducible_poly=poly)
        else:
            _GF_CACHE[key] = galois.GF(p)
    return _GF_CACHE[key]


def prime_split(base: BaseField, p: int) -> List[PrimeIdeal]:
    """
    Primes of the base field above p

    Over Q this is p itself. Over Q(sqrt m) the order Z[sqrt m] is used: p | m (or p = 2
    with m = 2, 3 mod 4) ramifies, a square m mod odd p splits into the primes with
    sqrt m -> r and sqrt m -> p - r (smallest r first), a non-residue stays inert.
    """
    p = int(p)
    if p < 2 or not isprime(p):
        raise NotPrime(f"{p} is not prime")
    if base.m is None:
        return [PrimeIdeal(p)]
    m = base.m
    if p == 2:
        if m % 2 == 0:
            return [PrimeIdeal(2, m, "ramified", 0)]
        if m % 4 == 3:
            return [PrimeIdeal(2, m, "ramified", 1)]
        if m % 8 == 1:
            return [PrimeIdeal(2, m, "split", 1, 0), PrimeIdeal(2, m, "split", 1, 1)]
        # residue ring of Z[sqrt m] is F_2 inside F_4 = O/2O; sqrt m -> 1
        return [PrimeIdeal(2, m, "inert", 1)]
    if m % p == 0:
        return [PrimeIdeal(p, m, "ramified", 0)]
    if legendre_symbol(m % p, p) == 1:
        r = min(sqrt_mod(m % p, p, all_roots=True))
        return [PrimeIdeal(p, m, "split", r, 0), PrimeIdeal(p, m, "split", p - r, 1)]
    return [PrimeIdeal(p, m, "inert", None)]


def _reduce_parts(u: Fraction, v: Fraction, prime: PrimeIdeal):
    gf = residue_field(prime)
    p = prime.p
    if prime.kind == "rational":
        return gf(mod_p(u, p))
    if prime.kind == "inert" and prime.root is None:
        # element c1*x + c0 of F_{p^2} is the integer c1*p + c0
        return gf(mod_p(v, p) * p + mod_p(u, p))
    return gf((mod_p(u, p) + mod_p(v, p) * prime.root) % p)


def reduce_mod(x, prime: PrimeIdeal):
    """
    Image of an integral base element in the residue field

    Raises:
        BadReduction: a denominator is divisible by p
    """
    base = BaseField(prime.m)
    u, v = base.parts(x.base_value() if isinstance(x, FieldElem) else x)
    return _reduce_parts(u, v, prime)


def valuation(x, prime: PrimeIdeal) -> int:
    """P-adic valuation of a nonzero base element"""
    base = BaseField(prime.m)
    x = base.coerce(x)
    if x == 0:
        raise ValueError("valuation of zero")
    p = prime.p
    if prime.kind == "rational":
        return _vp(x, p)
    n = base.norm(x)
    if prime.kind == "inert":
        return _vp(n, p) // 2
    if prime.kind == "ramified":
        return _vp(n, p)
    # split: pull out the largest power of p, then the rest lies in at most one of the two primes
    u, v = base.parts(x)
    k = min(_vp(c, p) for c in (u, v) if c != 0)
    rest = x / Fraction(p) ** k if k >= 0 else x * Fraction(p) ** (-k)
    if _reduce_parts(*base.parts(rest), prime) == 0:
        return k + _vp(base.norm(rest), p)
    return k


def _vp(x: Fraction, p: int) -> int:
    x = as_fraction(x)
    return int_valuation(x.numerator, p) - int_valuation(x.denominator, p)


def unit_residue(x, prime: PrimeIdeal):
    """
    Residue of a P-unit

    At a split prime the unit may still carry p in its denominators (from the
    conjugate prime); multiplying by (sqrt m + r)^2, a square and a P-unit lying in
    the conjugate prime, clears them without changing the square class.
    """
    base = BaseField(prime.m)
    x = base.coerce(x)
    if valuation(x, prime) != 0:
        raise BadReduction(f"{x!r} is not a unit at {prime.label}")
    if prime.kind == "split":
        s = base.gen() + prime.root
        s2 = s * s
        for _ in range(64):
            u, v = base.parts(x)
            if u.denominator % prime.p and v.denominator % prime.p:
                break
            x = x * s2
    u, v = base.parts(x)
    return _reduce_parts(u, v, prime)


def residue_is_square(x, prime: PrimeIdeal) -> bool:
    """Quadratic residue character of a P-unit, via the residue field"""
    return bool(unit_residue(x, prime).is_square())
