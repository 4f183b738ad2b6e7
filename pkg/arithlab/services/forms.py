# quadratic and Hermitian forms
# diagonalization by congruence, local invariants (rank, discriminant, signatures, Hasse symbols),
# the diagonal forms J_n^{a,b}, the symplectic identities K, N, J* and the SO admissibility check

import logging
from dataclasses import dataclass, field as dc_field
from math import factorial, isqrt
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from arithlab.core.errors import (
    Degenerate, FieldMismatch, InputError, IsotropicPivotFailure, SignatureProfileMismatch,
    VerificationFailed,
)
from arithlab.services.cocycle import cocycle_tower, p_matrix
from arithlab.services.numfield import (
    BaseField, BaseNum, FieldElem, GaloisChar, NumberField, PrimeIdeal, RealPlace,
    base_places, prime_split, sign_at,
)
from arithlab.services.qalg import (
    Place, QuatAlgebra, QuatElem, TensorElem, embed_2x2, hilbert_symbol, is_compact_at, local_symbols,
)
from arithlab.services.symrep import j_form, signature_pattern
from arithlab.utils import matrices as mx
from arithlab.utils.rational import prime_support, squarefree_part

logger = logging.getLogger(__name__)

SETTINGS = ("sigma", "quaternion", "tensor")


# ============================================================================
# CONGRUENCE DIAGONALIZATION
# ============================================================================

def _identity_like(n: int, one, zero) -> np.ndarray:
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            out[i, j] = one if i == j else zero
    return out


def _add_column(a: np.ndarray, c: np.ndarray, target: int, source: int, coef, bar: Callable) -> None:
    # e_target <- e_target + e_source * coef, i.e. a <- E* a E
    n = a.shape[0]
    for r in range(n):
        a[r, target] = a[r, target] + a[r, source] * coef
    coef_bar = bar(coef)
    for col in range(n):
        a[target, col] = a[target, col] + coef_bar * a[source, col]
    for r in range(c.shape[0]):
        c[r, target] = c[r, target] + c[r, source] * coef


def _swap(a: np.ndarray, c: np.ndarray, i: int, j: int) -> None:
    a[[i, j]] = a[[j, i]]
    a[:, [i, j]] = a[:, [j, i]]
    c[:, [i, j]] = c[:, [j, i]]


def _star_product(c: np.ndarray, h: np.ndarray, bar: Callable) -> np.ndarray:
    """C* H C with C* the conjugate transpose for the involution bar"""
    n = c.shape[1]
    m = h.shape[0]
    hc = np.empty((m, n), dtype=object)
    for i in range(m):
        for j in range(n):
            acc = h[i, 0] * c[0, j]
            for k in range(1, m):
                acc = acc + h[i, k] * c[k, j]
            hc[i, j] = acc
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            acc = bar(c[0, i]) * hc[0, j]
            for k in range(1, m):
                acc = acc + bar(c[k, i]) * hc[k, j]
            out[i, j] = acc
    return out


def is_hermitian(h: np.ndarray, bar: Callable) -> bool:
    n = h.shape[0]
    return h.shape == (n, n) and all(bar(h[j, i]) == h[i, j] for i in range(n) for j in range(n))


def hermitian_diagonalize(h: np.ndarray, bar: Callable, candidates: Sequence,
                          one, zero) -> Tuple[List, np.ndarray]:
    """
    Diagonalize an involution-symmetric matrix over a division ring by congruence

    A zero pivot is replaced by a later nonzero diagonal entry, else by e_k + e_j lambda
    for the first candidate lambda giving a nonzero value.

    Returns:
        (diagonal entries, C) with C* H C diagonal

    Raises:
        Degenerate: a row vanishes
        IsotropicPivotFailure: no candidate produces an anisotropic pivot
    """
    n = h.shape[0]
    a = h.copy()
    c = _identity_like(n, one, zero)
    for k in range(n):
        if not a[k, k]:
            j = next((i for i in range(k + 1, n) if a[i, i]), None)
            if j is not None:
                _swap(a, c, k, j)
            else:
                j = next((i for i in range(k + 1, n) if a[k, i]), None)
                if j is None:
                    raise Degenerate(f"form is degenerate (row {k} vanishes)")
                lam = next(
                    (x for x in candidates if a[k, j] * x + bar(x) * a[j, k]),
                    None,
                )
                if lam is None:
                    raise IsotropicPivotFailure(f"no anisotropic pivot at index {k}")
                _add_column(a, c, k, j, lam, bar)
        pivot_inv = a[k, k].inverse()
        for i in range(k + 1, n):
            if a[k, i]:
                _add_column(a, c, i, k, -(pivot_inv * a[k, i]), bar)

    diag = [a[i, i] for i in range(n)]
    check = _star_product(c, h, bar)
    for i in range(n):
        for j in range(n):
            if (i == j and check[i, j] != diag[i]) or (i != j and check[i, j]):
                raise VerificationFailed("congruence witness does not diagonalize the form")
    return diag, c


def _identity_map(x):
    return x


def diagonalize(q: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Symmetric congruence diagonalization

    Returns:
        (D, C) with C^T Q C = D, both exact matrices over the field of Q
    """
    n = q.shape[0]
    if q.shape != (n, n) or not mx.equal(q, q.T):
        raise InputError("quadratic forms are given by square symmetric matrices")
    field = mx.field_of(q)
    diag, c = hermitian_diagonalize(q, _identity_map, [field.one()], field.one(), field.zero())
    return mx.diag(diag, field), c


# ============================================================================
# QUADRATIC FORM INVARIANTS
# ============================================================================

@dataclass
class FormInvariants:
    """Complete equivalence certificate of a quadratic form over Q or Q(sqrt m)"""
    base: BaseField
    rank: int
    det: BaseNum
    signatures: Dict[str, Tuple[int, int]]
    hasse: Dict[str, int]
    places: Dict[str, Place] = dc_field(default_factory=dict, repr=False)

    @property
    def disc_class(self):
        """squarefree representative over Q, the determinant itself over Q(sqrt m)"""
        if self.base.m is None:
            return squarefree_part(self.det)
        return self.det


def _base_entries(q: np.ndarray) -> Tuple[BaseField, List[BaseNum]]:
    field = mx.field_of(q)
    if field.k:
        raise FieldMismatch(f"quadratic forms live over the base field, not {field}")
    return field.base, [x.base_value() for x in q.flat]


def form_support(entries: Sequence, base: BaseField) -> List[PrimeIdeal]:
    """Primes above 2 and above every prime in the norms and denominators of the entries"""
    rational = {2}
    for x in entries:
        if x == 0:
            continue
        u, v = base.parts(x)
        rational |= prime_support(base.norm(x))
        rational |= prime_support(u.denominator) | prime_support(v.denominator)
    primes: List[PrimeIdeal] = []
    for p in sorted(rational):
        primes.extend(prime_split(base, p))
    return primes


def hasse_symbol(entries: Sequence, place, base: BaseField) -> int:
    """prod_{i<j} (d_i, d_j)_v for a diagonal form"""
    sign = 1
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            sign *= hilbert_symbol(entries[i], entries[j], place, base)
    return sign


def _diagonal_values(q: np.ndarray) -> Tuple[BaseField, List[BaseNum]]:
    d, _ = diagonalize(q)
    base, _ = _base_entries(q)
    return base, [d[i, i].base_value() for i in range(d.shape[0])]


def _signature(entries: Sequence, base: BaseField, place: RealPlace) -> Tuple[int, int]:
    signs = [base.sign(x, place.base_sign) for x in entries]
    return sum(1 for s in signs if s > 0), sum(1 for s in signs if s < 0)


def signature(q: np.ndarray, place: Optional[RealPlace] = None) -> Tuple[int, int]:
    """(positive, negative) counts at a real place of the base (identity place by default)"""
    base, entries = _diagonal_values(q)
    return _signature(entries, base, place or RealPlace())


def invariants(q: np.ndarray, extra_primes: Sequence[PrimeIdeal] = ()) -> FormInvariants:
    """
    Rank, determinant class, signatures at every real place, and Hasse symbols
    at every real place and every prime of the support (plus extra_primes)

    Raises:
        Degenerate: singular form
        DyadicAmbiguity: 2 splits in the base field
    """
    base, entries = _diagonal_values(q)
    det = base.one()
    for x in entries:
        det = det * x
    places: Dict[str, Place] = {}
    signatures = {}
    hasse = {}
    for place in base_places(base):
        signatures[place.label] = _signature(entries, base, place)
        hasse[place.label] = hasse_symbol(entries, place, base)
        places[place.label] = place
    primes = {p.label: p for p in form_support(entries, base)}
    primes.update({p.label: p for p in extra_primes})
    for label, prime in sorted(primes.items()):
        hasse[label] = hasse_symbol(entries, prime, base)
        places[label] = prime
    logger.debug(f"invariants of rank {len(entries)} form over {base}: {hasse}")
    return FormInvariants(base, len(entries), det, signatures, hasse, places)


def equiv_quadratic(q1: np.ndarray, q2: np.ndarray) -> bool:
    """Equivalence by equal determinant class, signatures and Hasse symbols at every place"""
    if mx.field_of(q1) != mx.field_of(q2):
        raise FieldMismatch("forms over different fields")
    if q1.shape != q2.shape:
        return False
    base, e1 = _diagonal_values(q1)
    _, e2 = _diagonal_values(q2)
    primes = {p.label: p for p in form_support(e1, base) + form_support(e2, base)}
    inv1 = invariants(q1, list(primes.values()))
    inv2 = invariants(q2, list(primes.values()))
    if base.is_square(inv1.det * inv2.det) is None:
        return False
    return inv1.signatures == inv2.signatures and inv1.hasse == inv2.hasse


def normalize(q: np.ndarray) -> np.ndarray:
    """det(Q) Q, which has square determinant for odd rank"""
    return mx.scale(q, mx.det(q))


def reciprocity_check(q: np.ndarray) -> int:
    """Product of the Hasse symbols over all places; +1 by the product formula"""
    inv = invariants(q)
    product = 1
    for sign in inv.hasse.values():
        product *= sign
    return product


# ============================================================================
# THE FORMS J_n^{a,b}
# ============================================================================

def _field(base: Optional[BaseField]) -> NumberField:
    return NumberField(base or BaseField())


def jnab_entries(n: int, a, b, base: Optional[BaseField] = None) -> List[BaseNum]:
    """Diagonal of J_n^{a,b} for odd n = 2k+1 (entries indexed from i = 1)"""
    if n < 3 or n % 2 == 0:
        raise InputError("J_n^{a,b} needs odd n >= 3")
    base = base or BaseField()
    a = base.coerce(a)
    b = base.coerce(b)
    k = (n - 1) // 2
    out = []
    for i in range(1, n + 1):
        w = factorial(n - i) * factorial(i - 1)
        if n % 4 == 1:
            if i <= k:
                out.append(-2 * a * w if i % 2 else -2 * b * w)
            elif i == k + 1:
                out.append(base.coerce(w))
            else:
                out.append(2 * a * b * w if i % 2 == 0 else base.coerce(2 * w))
        else:
            if i <= k:
                out.append(-2 * b * w if i % 2 else base.coerce(2 * w))
            elif i == k + 1:
                out.append(-a * w)
            else:
                out.append(-2 * a * w if i % 2 == 0 else 2 * a * b * w)
    return out


def jnab(n: int, a, b, base: Optional[BaseField] = None) -> np.ndarray:
    """J_n^{a,b}; J_n itself when a or b is a square in the base"""
    field = _field(base)
    if field.base.is_square(a) is not None or field.base.is_square(b) is not None:
        return j_form(n, field)
    return mx.diag(jnab_entries(n, a, b, field.base), field)


def square_product_check(n: int) -> bool:
    """
    prod_{j=1,3,...,k-1} j(n-j) for n = 1 mod 4, and 2 prod_{j=1,3,...,k} j(n-j)
    for n = 3 mod 4, is a perfect square
    """
    if n < 5 or n % 2 == 0:
        raise InputError("the square product identity needs odd n >= 5")
    k = (n - 1) // 2
    if n % 4 == 1:
        product = 1
        for j in range(1, k, 2):
            product *= j * (n - j)
    else:
        product = 2
        for j in range(1, k + 1, 2):
            product *= j * (n - j)
    return isqrt(product) ** 2 == product


def hasse_closed_form(n: int, a, b, place, base: Optional[BaseField] = None) -> int:
    """1 for n = +-1 mod 8, (a, b)_v (-1, -1)_v for n = +-3 mod 8"""
    if n % 2 == 0:
        raise InputError("closed form is stated for odd n")
    if n % 8 in (1, 7):
        return 1
    base = base or BaseField()
    return hilbert_symbol(a, b, place, base) * hilbert_symbol(-1, -1, place, base)


def disc_classes_agree(n: int, a, b, base: Optional[BaseField] = None) -> bool:
    """J_n and J_n^{a,b} share the determinant class once both are normalized"""
    field = _field(base)
    d1 = mx.det(normalize(j_form(n, field))).base_value()
    d2 = mx.det(normalize(jnab(n, a, b, field.base))).base_value()
    return field.base.is_square(d1 * d2) is not None


# ============================================================================
# SO ADMISSIBILITY
# ============================================================================

@dataclass
class FuchsianVerdict:
    indefinite_place: str
    finite_set: List[str]
    target: List[str]
    parity_even: bool
    places: List[Place] = dc_field(default_factory=list, repr=False)


def fuchsian_admissibility(q: np.ndarray) -> FuchsianVerdict:
    """
    Ramification set of the quaternion algebra whose norm-one order lands in SO(Q)

    After rescaling to square determinant, Q must be positive definite at every real
    place but one, where it has the signature of J_n. The target is
    S u (V_F minus that place) with S the finite places where eps_P(Q)(-1,-1)_P = -1.

    Raises:
        SignatureProfileMismatch: wrong rank or signature profile
        DyadicAmbiguity: 2 splits in the base
    """
    n = q.shape[0]
    if n < 3 or n % 2 == 0 or n % 8 not in (3, 5):
        raise SignatureProfileMismatch(f"rank {n}: the quaternion route needs n = 2k+1 with k = 1, 2 mod 4")
    base, entries = _diagonal_values(normalize(q))
    expected = signature_pattern(n)
    indefinite = []
    for place in base_places(base):
        sig = _signature(entries, base, place)
        if sig == expected:
            indefinite.append(place)
        elif sig != (n, 0):
            raise SignatureProfileMismatch(f"signature {sig} at {place.label}")
    if len(indefinite) != 1:
        raise SignatureProfileMismatch(f"form is indefinite at {len(indefinite)} real places, expected 1")
    sigma = indefinite[0]

    finite = [
        prime for prime in form_support(entries, base)
        if hasse_symbol(entries, prime, base) * hilbert_symbol(-1, -1, prime, base) == -1
    ]
    target = finite + [p for p in base_places(base) if p != sigma]
    if len(target) % 2:
        raise VerificationFailed(f"odd target set {[p.label for p in target]}: reciprocity failed")
    logger.info(f"admissible form: indefinite at {sigma.label}, target {[p.label for p in target]}")
    return FuchsianVerdict(
        indefinite_place=sigma.label,
        finite_set=sorted(p.label for p in finite),
        target=sorted(p.label for p in target),
        parity_even=True,
        places=target,
    )


# ============================================================================
# SYMPLECTIC IDENTITIES: K, N AND J*
# ============================================================================

def k_matrix(n: int, field: NumberField) -> np.ndarray:
    """Diag of n copies of [[0, 1], [-1, 0]]"""
    block = mx.matrix([[0, 1], [-1, 0]], field)
    return mx.block_diag([block] * n, field)


def n_matrix(n: int, a, field: NumberField, root_a: FieldElem) -> np.ndarray:
    """
    Block matrix N: upper block rows carry I at (r, r) and (r, n-1-r), lower rows
    D at (r, r) and -D at (r, n-1-r) with D = diag(1/sqrt a, -1/sqrt a); odd n has 2I in the middle
    """
    inv_root = root_a.inverse()
    d = [inv_root, -inv_root]
    out = mx.zeros(2 * n, 2 * n, field)
    for r in range(n):
        mirror = n - 1 - r
        for t in range(2):
            if n % 2 and r == mirror:
                out[2 * r + t, 2 * r + t] = field(2)
            elif r < mirror:
                out[2 * r + t, 2 * r + t] = field.one()
                out[2 * r + t, 2 * mirror + t] = field.one()
            else:
                out[2 * r + t, 2 * r + t] = d[t]
                out[2 * r + t, 2 * mirror + t] = -d[t]
    return out


def jstar(n: int, a, b, base: Optional[BaseField] = None) -> Tuple[np.ndarray, QuatAlgebra]:
    """J*_{2n} = K P^-T J_{2n} P^-1 over F(sqrt a, sqrt b), with its quaternion algebra"""
    base = base or BaseField()
    algebra = QuatAlgebra(base, a, b)
    field, (ra, _) = cocycle_tower(base, [a, b])
    p_inv = mx.inverse(p_matrix(n, a, field, ra))
    out = k_matrix(n, field) @ p_inv.T @ j_form(2 * n, field) @ p_inv
    return out, algebra


def bar_transpose(m: np.ndarray) -> np.ndarray:
    """Blockwise conjugate transpose of an embedded quaternion matrix: K M^T K^-1"""
    field = mx.field_of(m)
    k = k_matrix(m.shape[0] // 2, field)
    return k @ m.T @ mx.inverse(k)


def unembed(block: np.ndarray, algebra: QuatAlgebra) -> Optional[QuatElem]:
    """Quaternion whose 2x2 embedding is block, or None when block is not in the image"""
    field, sa, sb = algebra.splitting_tower()
    block = mx.coerce(block, field)
    half = field(1) / 2
    coords = [
        (block[0, 0] + block[1, 1]) * half,
        (block[0, 0] - block[1, 1]) * half / sa,
        (block[0, 1] + block[1, 0]) * half / sb,
        (block[0, 1] - block[1, 0]) * half / (sa * sb),
    ]
    if not all(x.is_base() for x in coords):
        return None
    x = algebra(*(c.base_value() for c in coords))
    return x if mx.equal(embed_2x2(x), block) else None


def quaternion_matrix(m: np.ndarray, algebra: QuatAlgebra) -> np.ndarray:
    """n x n quaternion matrix of an embedded 2n x 2n matrix"""
    n = m.shape[0] // 2
    out = np.empty((n, n), dtype=object)
    for r in range(n):
        for c in range(n):
            x = unembed(m[2 * r:2 * r + 2, 2 * c:2 * c + 2], algebra)
            if x is None:
                raise FieldMismatch(f"block ({r}, {c}) is not in the image of {algebra}")
            out[r, c] = x
    return out


def is_bar_hermitian(m: np.ndarray, algebra: QuatAlgebra) -> bool:
    """Blocks lie in the embedded algebra and conj(M)^T = M"""
    if not mx.equal(bar_transpose(m), m):
        return False
    try:
        quaternion_matrix(m, algebra)
    except FieldMismatch:
        return False
    return True


def jstar_expected_diagonal(n: int) -> List[int]:
    """-4 (2n-i-1)! i! for odd i and -4 (2n-i)! (i-1)! for even i (1-indexed)"""
    out = []
    for i in range(1, 2 * n + 1):
        if i % 2:
            out.append(-4 * factorial(2 * n - i - 1) * factorial(i))
        else:
            out.append(-4 * factorial(2 * n - i) * factorial(i - 1))
    return out


def n_diagonalize(n: int, a, b, base: Optional[BaseField] = None) -> List[FieldElem]:
    """
    Diagonal of conj(N)^T J* N

    Raises:
        VerificationFailed: the product is not diagonal
    """
    m, _ = jstar(n, a, b, base)
    field = mx.field_of(m)
    _, (ra, _) = cocycle_tower(field.base, [a, b])
    nm = n_matrix(n, a, field, field(ra))
    out = bar_transpose(nm) @ m @ nm
    for i in range(2 * n):
        for j in range(2 * n):
            if i != j and out[i, j]:
                raise VerificationFailed(f"N does not diagonalize J*_{2 * n} at ({i}, {j})")
    return [out[i, i] for i in range(2 * n)]


# ============================================================================
# HERMITIAN INVARIANTS
# ============================================================================

@dataclass
class HermitianInvariants:
    setting: str
    base: BaseField
    rank: int
    disc: Optional[BaseNum]
    d: Optional[BaseNum]
    signatures: Dict[str, Tuple[int, int]]


def norm_class(x, d, base: BaseField) -> bool:
    """x is a norm from F(sqrt d): (x, d)_v = +1 at every place"""
    if base.is_square(d) is not None:
        return True
    return all(s.sign == 1 for s in local_symbols(x, d, base))


def _sigma_setting(h: np.ndarray):
    field = mx.field_of(h)
    if field.k != 1:
        raise FieldMismatch(f"sigma-Hermitian forms live over F(sqrt d), not {field}")
    sigma = GaloisChar((-1,))
    return field, sigma.apply, [field.one(), field.gen(0)], field.one(), field.zero()


def _split_tensor_sign(h: TensorElem, place: RealPlace) -> int:
    # real splitting of A at a place where a > 0 (or b > 0): the 2x2 Hermitian matrix
    # attached to a definite entry has trace proportional to q - r for Y = [[p, q], [r, -p]]
    algebra = h.x.algebra
    base = algebra.base
    _, y1, y2, y3 = h.y.coeffs
    a, b = algebra.a, algebra.b
    if base.sign(a, place.base_sign) > 0:
        rad, first, second = a, (b - 1) * y2, (b + 1) * y3
    else:
        rad, first, second = b, (a - 1) * y1, -(a + 1) * y3
    field, (root,) = NumberField.tower(base, [rad])
    value = field(first) + field(second) * root
    return sign_at(value, RealPlace(place.base_sign, (1,) * field.k))


def _tensor_signature(h: TensorElem, place: RealPlace, ramified: bool) -> Tuple[int, int]:
    base = h.x.algebra.base
    nrd_l, _ = h.norm_parts()
    s = base.sign(nrd_l, place.base_sign)
    if s == 0:
        raise Degenerate("diagonal entry with zero reduced norm")
    if ramified:
        if s < 0:
            return 1, 1
        return (2, 0) if base.sign(h.x.coeffs[0], place.base_sign) > 0 else (0, 2)
    if s > 0:
        return 1, 1
    return (2, 0) if _split_tensor_sign(h, place) > 0 else (0, 2)


def hermitian_invariants(h: np.ndarray, setting: str) -> HermitianInvariants:
    """
    Invariants of an involution-Hermitian form

    setting:
        sigma       matrix over F(sqrt d), involution the nontrivial automorphism;
                    rank, discriminant (up to norms), signatures where d < 0
        quaternion  matrix of QuatElem, involution the conjugation;
                    rank and signatures where the algebra ramifies
        tensor      matrix of TensorElem over A (x) F(sqrt d), involution conj (x) sigma;
                    rank, discriminant (product of reduced norms), signatures where d < 0
    """
    if setting not in SETTINGS:
        raise InputError(f"unknown Hermitian setting {setting!r}")
    n = h.shape[0]
    if setting == "sigma":
        field, bar, cands, one, zero = _sigma_setting(h)
        base, d = field.base, field.radicands[0]
    elif setting == "quaternion":
        algebra = h[0, 0].algebra
        base, d = algebra.base, None
        bar, cands, one, zero = QuatElem.conj, algebra.basis(), algebra.one(), algebra(0)
    else:
        algebra = h[0, 0].x.algebra
        base, d = algebra.base, h[0, 0].d
        bar = TensorElem.star
        cands = [TensorElem(e, algebra(0), d) for e in algebra.basis()]
        cands += [TensorElem(algebra(0), e, d) for e in algebra.basis()]
        one, zero = TensorElem.lift(algebra.one(), d), TensorElem.lift(algebra(0), d)

    if not is_hermitian(h, bar):
        raise InputError(f"matrix is not Hermitian for the {setting} involution")
    diag, _ = hermitian_diagonalize(h, bar, cands, one, zero)

    signatures: Dict[str, Tuple[int, int]] = {}
    disc: Optional[BaseNum] = None
    if setting == "sigma":
        values = [x.base_value() for x in diag]
        disc = base.one()
        for x in values:
            disc = disc * x
        for place in base_places(base):
            if base.sign(d, place.base_sign) < 0:
                signatures[place.label] = _signature(values, base, place)
    elif setting == "quaternion":
        values = [x.coeffs[0] for x in diag]
        for place in base_places(base):
            if is_compact_at(algebra, place):
                signatures[place.label] = _signature(values, base, place)
    else:
        disc = base.one()
        for x in diag:
            disc = disc * x.norm_parts()[0]
        for place in base_places(base):
            if base.sign(d, place.base_sign) < 0:
                ramified = is_compact_at(algebra, place)
                pos = neg = 0
                for x in diag:
                    p, q = _tensor_signature(x, place, ramified)
                    pos, neg = pos + p, neg + q
                signatures[place.label] = (pos, neg)
    return HermitianInvariants(setting, base, n, disc, d, signatures)


def hermitian_equiv(h1: np.ndarray, h2: np.ndarray, setting: str) -> bool:
    """Equal rank and signatures, and discriminants in the same class modulo norms"""
    inv1 = hermitian_invariants(h1, setting)
    inv2 = hermitian_invariants(h2, setting)
    if inv1.base != inv2.base or inv1.d != inv2.d:
        raise FieldMismatch("Hermitian forms over different rings")
    if inv1.rank != inv2.rank or inv1.signatures != inv2.signatures:
        return False
    if inv1.disc is None:
        return True
    return norm_class(inv1.disc * inv2.disc, inv1.d, inv1.base)


def hermitian_identity(n: int, setting: str, ring) -> np.ndarray:
    """
    I_n in a setting; ring is the field F(sqrt d) (sigma), the algebra (quaternion)
    or an (algebra, d) pair (tensor)
    """
    if setting == "sigma":
        return mx.identity(n, ring)
    if setting == "quaternion":
        return _identity_like(n, ring.one(), ring(0))
    algebra, d = ring
    return _identity_like(n, TensorElem.lift(algebra.one(), d), TensorElem.lift(algebra(0), d))


def negate(m: np.ndarray) -> np.ndarray:
    return np.frompyfunc(lambda x: -x, 1, 1)(m).astype(object)
