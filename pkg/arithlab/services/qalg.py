# quaternion algebras (a, b)_F over Q or Q(sqrt m)
# arithmetic, reduced norm, the standard order, the 2x2 embedding over F(sqrt a, sqrt b)
# and local Hilbert symbols with ramification sets

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np
from sympy.ntheory import legendre_symbol

from arithlab.core.errors import (
    AlgebraMismatch, DyadicAmbiguity, InputError, NotInvertible, VerificationFailed, ZeroArgument,
)
from arithlab.services.numfield import (
    BaseField, BaseNum, NumberField, PrimeIdeal, QuadNum, RealPlace,
    base_places, prime_split, residue_is_square, valuation,
)
from arithlab.utils import matrices as mx
from arithlab.utils.rational import mod_p, odd_part_mod8, prime_support

logger = logging.getLogger(__name__)

Place = Union[RealPlace, PrimeIdeal]


class QuatAlgebra:
    """(a, b)_F with basis {1, i, j, ij}, i^2 = a, j^2 = b, ij = -ji"""

    def __init__(self, base: BaseField, a, b):
        self.base = base
        self.a = base.coerce(a)
        self.b = base.coerce(b)
        if self.a == 0 or self.b == 0:
            raise ZeroArgument("quaternion parameters must be nonzero")
        self._tower = None

    def __call__(self, *coeffs) -> "QuatElem":
        if len(coeffs) == 1:
            coeffs = (coeffs[0], 0, 0, 0)
        if len(coeffs) != 4:
            raise InputError("a quaternion has four coefficients")
        return QuatElem(self, tuple(self.base.coerce(c) for c in coeffs))

    def one(self) -> "QuatElem":
        return self(1, 0, 0, 0)

    def basis(self) -> List["QuatElem"]:
        return [self(1, 0, 0, 0), self(0, 1, 0, 0), self(0, 0, 1, 0), self(0, 0, 0, 1)]

    def splitting_tower(self) -> Tuple[NumberField, object, object]:
        """F(sqrt a, sqrt b) with the chosen square roots"""
        if self._tower is None:
            field, (sa, sb) = NumberField.tower(self.base, [self.a, self.b])
            self._tower = (field, sa, sb)
        return self._tower

    def is_integral(self) -> bool:
        return all(_integral(c, self.base) for c in (self.a, self.b))

    def __eq__(self, other):
        return (
            isinstance(other, QuatAlgebra)
            and other.base == self.base
            and other.a == self.a
            and other.b == self.b
        )

    def __hash__(self):
        return hash((self.base, self.a, self.b))

    def __repr__(self):
        return f"({self.a!r}, {self.b!r})_{self.base!r}"


class QuatElem:
    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: QuatAlgebra, coeffs: Tuple):
        self.algebra = algebra
        self.coeffs = coeffs

    def _check(self, other: "QuatElem") -> None:
        if not isinstance(other, QuatElem) or other.algebra != self.algebra:
            raise AlgebraMismatch(f"{self.algebra} vs {getattr(other, 'algebra', other)}")

    def __add__(self, other):
        self._check(other)
        return QuatElem(self.algebra, tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return QuatElem(self.algebra, tuple(x - y for x, y in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return QuatElem(self.algebra, tuple(-x for x in self.coeffs))

    def __mul__(self, other):
        if not isinstance(other, QuatElem):
            c = self.algebra.base.coerce(other)
            return QuatElem(self.algebra, tuple(x * c for x in self.coeffs))
        self._check(other)
        a, b = self.algebra.a, self.algebra.b
        x0, x1, x2, x3 = self.coeffs
        y0, y1, y2, y3 = other.coeffs
        return QuatElem(self.algebra, (
            x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
            x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
            x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        ))

    def __rmul__(self, other):
        return self * other

    def conj(self) -> "QuatElem":
        x0, x1, x2, x3 = self.coeffs
        return QuatElem(self.algebra, (x0, -x1, -x2, -x3))

    def nrd(self) -> BaseNum:
        a, b = self.algebra.a, self.algebra.b
        x0, x1, x2, x3 = self.coeffs
        return x0 * x0 - a * x1 * x1 - b * x2 * x2 + a * b * x3 * x3

    def trd(self) -> BaseNum:
        return 2 * self.coeffs[0]

    def inverse(self) -> "QuatElem":
        n = self.nrd()
        if n == 0:
            raise NotInvertible(f"{self!r} has reduced norm 0")
        return self.conj() * (self.algebra.base.one() / n)

    def __bool__(self):
        return any(c != 0 for c in self.coeffs)

    def __eq__(self, other):
        return isinstance(other, QuatElem) and other.algebra == self.algebra and other.coeffs == self.coeffs

    def __hash__(self):
        return hash((self.algebra, self.coeffs))

    def __repr__(self):
        return "Quat(" + ", ".join(repr(c) for c in self.coeffs) + ")"


# --- arithmetic entry points ---

def quat_arith(x: QuatElem, y: QuatElem, op: str) -> QuatElem:
    x._check(y)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise InputError(f"unknown operation {op!r}")


def quat_conj(x: QuatElem) -> QuatElem:
    return x.conj()


def nrd(x: QuatElem) -> BaseNum:
    return x.nrd()


def quat_inverse(x: QuatElem) -> QuatElem:
    return x.inverse()


def sigma_star(x: QuatElem, y: QuatElem) -> Tuple[QuatElem, QuatElem]:
    """
    Involution of A (x) F(sqrt d) sending x (x) lambda to conj(x) (x) sigma(lambda)

    An element is stored as the pair (x, y) meaning x + y (x) sqrt d.
    """
    x._check(y)
    return x.conj(), -y.conj()


class TensorElem:
    """
    x + y (x) sqrt d in A (x) F(sqrt d), with d in F and sqrt d central

    star() is the involution x (x) lambda -> conj(x) (x) sigma(lambda).
    """

    __slots__ = ("x", "y", "d")

    def __init__(self, x: QuatElem, y: QuatElem, d):
        x._check(y)
        self.x = x
        self.y = y
        self.d = x.algebra.base.coerce(d)

    @classmethod
    def lift(cls, x: QuatElem, d) -> "TensorElem":
        return cls(x, x.algebra(0), d)

    def _check(self, other: "TensorElem") -> None:
        if not isinstance(other, TensorElem) or other.d != self.d:
            raise AlgebraMismatch("tensor elements over different F(sqrt d)")
        self.x._check(other.x)

    def __add__(self, other):
        self._check(other)
        return TensorElem(self.x + other.x, self.y + other.y, self.d)

    def __sub__(self, other):
        self._check(other)
        return TensorElem(self.x - other.x, self.y - other.y, self.d)

    def __neg__(self):
        return TensorElem(-self.x, -self.y, self.d)

    def __mul__(self, other):
        if not isinstance(other, TensorElem):
            return TensorElem(self.x * other, self.y * other, self.d)
        self._check(other)
        return TensorElem(
            self.x * other.x + self.y * other.y * self.d,
            self.x * other.y + self.y * other.x,
            self.d,
        )

    def star(self) -> "TensorElem":
        x, y = sigma_star(self.x, self.y)
        return TensorElem(x, y, self.d)

    def norm_parts(self) -> Tuple[BaseNum, BaseNum]:
        """(n0, n1) with z * conj_A(z) = n0 + n1 sqrt d, conj_A acting on the quaternion factor only"""
        n0 = self.x.nrd() + self.d * self.y.nrd()
        n1 = (self.x * self.y.conj()).trd()
        return n0, n1

    def inverse(self) -> "TensorElem":
        n0, n1 = self.norm_parts()
        den = n0 * n0 - self.d * n1 * n1
        if den == 0:
            raise NotInvertible(f"{self!r} is a zero divisor")
        bar = TensorElem(self.x.conj(), self.y.conj(), self.d)
        # times (n0 - n1 sqrt d) / den
        u, v = n0 / den, -n1 / den
        return TensorElem(bar.x * u + bar.y * (v * self.d), bar.x * v + bar.y * u, self.d)

    def __bool__(self):
        return bool(self.x) or bool(self.y)

    def __eq__(self, other):
        return isinstance(other, TensorElem) and other.d == self.d and other.x == self.x and other.y == self.y

    def __hash__(self):
        return hash((self.x, self.y, self.d))

    def __repr__(self):
        return f"Tensor({self.x!r} + {self.y!r}*sqrt{self.d!r})"


def embed_2x2(x: QuatElem) -> np.ndarray:
    """
    Splitting of (a, b) over F(sqrt a, sqrt b)

    x0 + x1 i + x2 j + x3 ij ->
        [[x0 + sqrt a x1,           sqrt b x2 + sqrt ab x3],
         [sqrt b x2 - sqrt ab x3,   x0 - sqrt a x1        ]]
    """
    field, sa, sb = x.algebra.splitting_tower()
    sab = sa * sb
    x0, x1, x2, x3 = (field(c) for c in x.coeffs)
    return mx.matrix([
        [x0 + sa * x1, sb * x2 + sab * x3],
        [sb * x2 - sab * x3, x0 - sa * x1],
    ], field)


# --- standard order ---

def _integral(c, base: BaseField) -> bool:
    u, v = base.parts(c)
    return u.denominator == 1 and v.denominator == 1


def order_contains(x: QuatElem) -> bool:
    """Membership in Z_F<1, i, j, ij> (Z_F = Z[sqrt m])"""
    if not x.algebra.is_integral():
        raise InputError("the standard order needs integral a and b")
    return all(_integral(c, x.algebra.base) for c in x.coeffs)


def is_norm_one(x: QuatElem) -> bool:
    return x.nrd() == 1


# ============================================================================
# HILBERT SYMBOLS
# ============================================================================

def _as_prime(base: BaseField, place) -> PrimeIdeal:
    if isinstance(place, PrimeIdeal):
        return place
    primes = prime_split(base, int(place))
    if len(primes) != 1:
        raise InputError(f"{place} splits in {base}; pass one of the primes above it")
    return primes[0]


def _tame_symbol(a, b, prime: PrimeIdeal) -> int:
    # alpha = (-1)^{va vb} a^vb b^-va is a unit; its residue character is the symbol
    va = valuation(a, prime)
    vb = valuation(b, prime)
    alpha = (-1) ** (va * vb) * a ** vb * b ** (-va)
    if prime.kind == "rational":
        return legendre_symbol(mod_p(alpha, prime.p), prime.p)
    return 1 if residue_is_square(alpha, prime) else -1


def _dyadic_symbol_q(a, b) -> int:
    """(a, b)_2 over Q: (-1)^{e(u)e(v) + alpha w(v) + beta w(u)} for a = 2^alpha u, b = 2^beta v"""
    prime = PrimeIdeal(2)
    alpha = valuation(a, prime)
    beta = valuation(b, prime)
    u = odd_part_mod8(a / 2 ** alpha if alpha >= 0 else a * 2 ** (-alpha))
    v = odd_part_mod8(b / 2 ** beta if beta >= 0 else b * 2 ** (-beta))

    def eps(t):
        return ((t - 1) // 2) % 2

    def omega(t):
        return ((t * t - 1) // 8) % 2

    exponent = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
    return -1 if exponent % 2 else 1


def hilbert_symbol(a, b, place, base: Optional[BaseField] = None) -> int:
    """
    Local Hilbert symbol (a, b)_v

    Args:
        a, b: nonzero base elements
        place: RealPlace, PrimeIdeal, or a rational prime (when it has one prime above it)
        base: field of definition (inferred from a/b when omitted)

    Returns:
        +1 when (a, b) splits at v, -1 otherwise
    """
    base = base or _infer_base(a, b)
    a = base.coerce(a)
    b = base.coerce(b)
    if a == 0 or b == 0:
        raise ZeroArgument("Hilbert symbol of zero")
    if isinstance(place, RealPlace):
        neg_a = base.sign(a, place.base_sign) < 0
        neg_b = base.sign(b, place.base_sign) < 0
        return -1 if neg_a and neg_b else 1
    prime = _as_prime(base, place)
    if prime.p != 2:
        return _tame_symbol(a, b, prime)
    if base.m is None:
        return _dyadic_symbol_q(a, b)
    return _dyadic_by_reciprocity(a, b, base, prime)


def _infer_base(*xs) -> BaseField:
    for x in xs:
        if isinstance(x, QuadNum):
            return BaseField(x.m)
    return BaseField()


def symbol_support(a, b, base: BaseField) -> List[PrimeIdeal]:
    """Finite primes where (a, b) can be nontrivial: above 2 and above primes in a, b"""
    rational_primes = {2}
    for x in (a, b):
        u, v = base.parts(x)
        rational_primes |= prime_support(base.norm(x))
        rational_primes |= prime_support(u.denominator) | prime_support(v.denominator)
    primes = []
    for p in sorted(rational_primes):
        primes.extend(prime_split(base, p))
    return primes


def _dyadic_by_reciprocity(a, b, base: BaseField, prime: PrimeIdeal) -> int:
    if prime.kind == "split":
        raise DyadicAmbiguity(f"2 splits in {base}; two dyadic symbols are undetermined")
    product = 1
    for place in base_places(base):
        product *= hilbert_symbol(a, b, place, base)
    for other in symbol_support(a, b, base):
        if other.p != 2:
            product *= _tame_symbol(a, b, other)
    logger.debug(f"dyadic symbol ({a!r}, {b!r}) at {prime.label} inferred by reciprocity")
    return product


@dataclass(frozen=True)
class LocalSymbol:
    place: Place
    sign: int
    inferred: bool = False


def local_symbols(a, b, base: BaseField) -> List[LocalSymbol]:
    """Symbols at every real place and every prime of the support"""
    a = base.coerce(a)
    b = base.coerce(b)
    symbols = [LocalSymbol(p, hilbert_symbol(a, b, p, base)) for p in base_places(base)]
    for prime in symbol_support(a, b, base):
        if prime.p == 2 and base.m is not None:
            symbols.append(LocalSymbol(prime, _dyadic_by_reciprocity(a, b, base, prime), True))
        else:
            symbols.append(LocalSymbol(prime, hilbert_symbol(a, b, prime, base)))
    return symbols


def ramification_set(algebra: QuatAlgebra) -> frozenset:
    """
    Places where (a, b) does not split

    Over Q every symbol is computed directly and the product formula is asserted;
    over Q(sqrt m) the single dyadic symbol is deduced from it.
    """
    symbols = local_symbols(algebra.a, algebra.b, algebra.base)
    ramified = frozenset(s.place for s in symbols if s.sign == -1)
    if any(s.inferred for s in symbols):
        logger.warning(f"dyadic symbol of {algebra} inferred by reciprocity")
    elif len(ramified) % 2:
        raise VerificationFailed(f"odd ramification set for {algebra}: reciprocity failed")
    return ramified


def ramification_labels(algebra: QuatAlgebra) -> List[str]:
    return sorted(p.label for p in ramification_set(algebra))


def is_division_at(algebra: QuatAlgebra, place) -> bool:
    return hilbert_symbol(algebra.a, algebra.b, place, algebra.base) == -1


def is_compact_at(algebra: QuatAlgebra, place: RealPlace) -> bool:
    """SU(1) of the algebra is compact at a real place exactly when it ramifies there"""
    return is_division_at(algebra, place)


def reciprocity_product(a, b, base: Optional[BaseField] = None) -> int:
    """Product of (a, b)_v over all places (real places and the support)"""
    base = base or _infer_base(a, b)
    product = 1
    for place in base_places(base):
        product *= hilbert_symbol(a, b, place, base)
    for prime in symbol_support(base.coerce(a), base.coerce(b), base):
        product *= hilbert_symbol(a, b, prime, base)
    return product
