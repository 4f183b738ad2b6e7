# G2 on 7-space and octonions over finite fields
# the twisted cross product x_{a,b} and its untwisted form, G2^{a,b} membership,
# and the automorphism phi_a of the split octonions over F_q with its 7-dim trace

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import galois
import numpy as np
from sympy import factorint

from arithlab.core.errors import EvenCharacteristic, InputError, VerificationFailed
from arithlab.services.cocycle import explicit_s
from arithlab.services.forms import jnab_entries
from arithlab.services.numfield import NumberField
from arithlab.services.qalg import QuatElem, embed_2x2
from arithlab.services.symrep import j_form, tau
from arithlab.utils import matrices as mx

logger = logging.getLogger(__name__)

DIM = 7

# component k (1-indexed) = sum of coef * (x_i y_j - x_j y_i); coef is (constant, power of a, power of b)
TWISTED_TERMS = {
    1: [((6, 1, 0), 7, 4), ((-4, 0, 0), 2, 3), ((-4, 1, 0), 6, 5)],
    2: [((24, 0, 1), 3, 1), ((24, 1, 1), 7, 5), ((-6, 1, 0), 6, 4)],
    3: [((60, 0, 0), 2, 1), ((60, 1, 0), 7, 6), ((-6, 1, 0), 5, 4)],
    4: [((240, 0, 1), 1, 7), ((40, 0, 0), 2, 6), ((-16, 0, 1), 3, 5)],
    5: [((60, 0, 0), 1, 6), ((-60, 0, 0), 7, 2), ((-6, 0, 0), 3, 4)],
    6: [((24, 0, 1), 3, 7), ((24, 0, 1), 1, 5), ((-6, 0, 0), 2, 4)],
    7: [((6, 0, 0), 1, 4), ((-4, 0, 0), 2, 5), ((-4, 0, 0), 6, 3)],
}

UNTWISTED_TERMS = {
    1: [((6, 0, 0), 1, 4), ((-4, 0, 0), 2, 3)],
    2: [((24, 0, 0), 1, 5), ((-6, 0, 0), 2, 4)],
    3: [((60, 0, 0), 1, 6), ((-6, 0, 0), 3, 4)],
    4: [((120, 0, 0), 1, 7), ((20, 0, 0), 2, 6), ((-8, 0, 0), 3, 5)],
    5: [((60, 0, 0), 2, 7), ((-6, 0, 0), 4, 5)],
    6: [((24, 0, 0), 3, 7), ((-6, 0, 0), 4, 6)],
    7: [((6, 0, 0), 4, 7), ((-4, 0, 0), 5, 6)],
}


# ============================================================================
# CROSS PRODUCTS
# ============================================================================

def structure_constants(terms: Dict, a=1, b=1) -> Dict[Tuple[int, int], List[Tuple[int, object]]]:
    """
    Sparse table f[(i, j)] = [(k, c), ...] with (x cross y)_k = sum c x_i y_j (0-indexed)

    Each term c (x_i y_j - x_j y_i) contributes +c at (i, j) and -c at (j, i).
    """
    table: Dict[Tuple[int, int], List[Tuple[int, object]]] = {}
    for k, entries in terms.items():
        for (const, pa, pb), i, j in entries:
            c = const * a ** pa * b ** pb
            table.setdefault((i - 1, j - 1), []).append((k - 1, c))
            table.setdefault((j - 1, i - 1), []).append((k - 1, -c))
    return table


def _apply(table: Dict, x: Sequence, y: Sequence) -> np.ndarray:
    if len(x) != DIM or len(y) != DIM:
        raise InputError("cross products act on 7-vectors")
    zero = x[0] * 0
    out = np.empty(DIM, dtype=object)
    out.fill(zero)
    for (i, j), targets in table.items():
        if not x[i] or not y[j]:
            continue
        prod = x[i] * y[j]
        for k, c in targets:
            out[k] = out[k] + prod * c
    return out


def cross(a, b, x: Sequence, y: Sequence) -> np.ndarray:
    """Twisted cross product x_{a,b} y; a and b must coerce into the field of the vectors"""
    return _apply(structure_constants(TWISTED_TERMS, a, b), x, y)


def untwisted_cross(x: Sequence, y: Sequence) -> np.ndarray:
    return _apply(structure_constants(UNTWISTED_TERMS), x, y)


def preserves_cross(m: np.ndarray, product) -> bool:
    """M(e_i x e_j) = Me_i x Me_j on the 21 basis pairs i < j"""
    field = mx.field_of(m)
    basis = [mx.identity(DIM, field)[:, i] for i in range(DIM)]
    images = [m[:, i] for i in range(DIM)]
    for i in range(DIM):
        for j in range(i + 1, DIM):
            lhs = m @ product(basis[i], basis[j])
            rhs = product(images[i], images[j])
            if not all(u == v for u, v in zip(lhs, rhs)):
                logger.debug(f"cross product not preserved on pair ({i + 1}, {j + 1})")
                return False
    return True


def in_g2(a, b, m: np.ndarray, twisted: bool = True) -> bool:
    """
    M lies in G2^{a,b}: det M = 1, M^T J7^{a,b} M = J7^{a,b}, and M preserves the cross product

    twisted=False tests the untwisted product against J_7 instead.
    """
    if m.shape != (DIM, DIM):
        return False
    field = mx.field_of(m)
    if twisted:
        # the twisted product pairs with the diagonal form even when a or b is a square
        form = mx.diag(jnab_entries(DIM, a, b, field.base), field)
        a_f, b_f = field(a), field(b)

        def product(x, y):
            return cross(a_f, b_f, x, y)
    else:
        form = j_form(DIM, field)
        product = untwisted_cross
    if mx.det(m) != 1:
        return False
    if not mx.equal(m.T @ form @ m, form):
        return False
    return preserves_cross(m, product)


def torus_element(s, t, field: NumberField) -> np.ndarray:
    """
    diag(s, t, s/t, 1, t/s, 1/t, 1/s): the maximal torus of G2 in the tau_7 weight basis

    The untwisted product sends e_i x e_j into e_{i+j-4}, and these weights are additive
    along every nonzero term. s = lam^6, t = lam^4 recovers tau_7(diag(lam, 1/lam)).
    """
    s, t = field(s), field(t)
    if not s or not t:
        raise InputError("torus parameters must be nonzero")
    return mx.diag([s, t, s / t, field.one(), t / s, t.inverse(), s.inverse()], field)


def g2_image(x: QuatElem) -> np.ndarray:
    """S tau_7(x) S^-1 for a norm-one quaternion, coerced to the base field"""
    algebra = x.algebra
    if x.nrd() != 1:
        raise InputError("G2 images are taken of norm-one quaternions")
    s = explicit_s(algebra.a, algebra.b, algebra.base)
    field = mx.field_of(s)
    m = embed_2x2(x)
    out = s @ tau(DIM, mx.coerce(m, field)) @ mx.inverse(s)
    if not all(v.is_base() for v in out.flat):
        raise VerificationFailed("S-conjugate of a fixed element is not defined over the base")
    base_field = NumberField(algebra.base)
    return mx.entrywise(lambda v: base_field(v.base_value()), out)


# ============================================================================
# OCTONIONS OVER F_q
# ============================================================================

Octonion = Tuple[np.ndarray, np.ndarray]


def octonion_field(q: int):
    """GF(q) for an odd prime power q"""
    factors = factorint(q)
    if q < 2 or len(factors) != 1:
        raise InputError(f"{q} is not a prime power")
    if 2 in factors:
        raise EvenCharacteristic("octonion traces are computed in odd characteristic")
    return galois.GF(q)


def _bar(gf, m) -> np.ndarray:
    # quaternion conjugation of M_2: transpose of the cofactor matrix
    out = gf.Zeros((2, 2))
    out[0, 0], out[1, 1] = m[1, 1], m[0, 0]
    out[0, 1], out[1, 0] = -m[0, 1], -m[1, 0]
    return out


def _det2(m):
    return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]


def octonion_mul(gf, u: Octonion, v: Octonion) -> Octonion:
    """(A1, B1)(A2, B2) = (A1 A2 - conj(B2) B1, B2 A1 + B1 conj(A2))"""
    a1, b1 = u
    a2, b2 = v
    return a1 @ a2 - _bar(gf, b2) @ b1, b2 @ a1 + b1 @ _bar(gf, a2)


def octonion_norm(u: Octonion):
    return _det2(u[0]) + _det2(u[1])


def _coords(u: Octonion) -> List[int]:
    return [int(v) for v in u[0].flatten()] + [int(v) for v in u[1].flatten()]


def _from_coords(gf, coords: Sequence) -> Octonion:
    arr = gf([int(c) for c in coords])
    return arr[:4].reshape(2, 2), arr[4:].reshape(2, 2)


def octonion_basis(gf) -> List[Octonion]:
    out = []
    for i in range(8):
        coords = [0] * 8
        coords[i] = 1
        out.append(_from_coords(gf, coords))
    return out


@dataclass
class OctonionAutomorphism:
    q: int
    a: int
    matrix: np.ndarray  # 8x8 over GF(q), columns are images of the basis
    restricted: np.ndarray  # 7x7 on the complement of the identity line
    is_automorphism: bool
    preserves_norm: bool


def phi_apply(gf, a, u: Octonion) -> Octonion:
    """phi_a(A, B) = (A, XB) with X = [[a, 1], [-1, 0]]"""
    x = gf([[int(a), 1], [0, 0]])
    x[1, 0] = -gf(1)
    return u[0], x @ u[1]


def phi_matrix(gf, a) -> np.ndarray:
    basis = octonion_basis(gf)
    cols = [_coords(phi_apply(gf, a, e)) for e in basis]
    return gf(np.array(cols, dtype=int).T)


def _complement_basis(gf) -> np.ndarray:
    # trace-zero A part and the whole B part: E01, E10, E00 - E11, then the four B units
    v = gf.Zeros((8, 7))
    v[1, 0] = 1
    v[2, 1] = 1
    v[0, 2] = 1
    v[3, 2] = -gf(1)
    for t in range(4):
        v[4 + t, 3 + t] = 1
    return v


def oct_aut_phi(q: int, a, rng: Optional[np.random.Generator] = None) -> OctonionAutomorphism:
    """
    phi_a over GF(q): multiplicativity on all 64 basis pairs, norm preservation on the
    basis and on random elements, and the restriction to the orthogonal of (I, 0)
    """
    gf = octonion_field(q)
    a = int(a) % q
    basis = octonion_basis(gf)
    is_aut = True
    for u in basis:
        for v in basis:
            lhs = phi_apply(gf, a, octonion_mul(gf, u, v))
            rhs = octonion_mul(gf, phi_apply(gf, a, u), phi_apply(gf, a, v))
            if _coords(lhs) != _coords(rhs):
                is_aut = False
    rng = rng or np.random.default_rng(0)
    samples = basis + [_from_coords(gf, rng.integers(0, q, size=8)) for _ in range(16)]
    keeps_norm = all(octonion_norm(phi_apply(gf, a, u)) == octonion_norm(u) for u in samples)

    m = phi_matrix(gf, a)
    v = _complement_basis(gf)
    image = m @ v
    # rows 1, 2, 0, 4..7 of v form the identity
    restricted = image[[1, 2, 0, 4, 5, 6, 7], :]
    if not np.array_equal(v @ restricted, image):
        raise VerificationFailed("phi_a does not preserve the complement of the identity")
    return OctonionAutomorphism(q, a, m, restricted, is_aut, keeps_norm)


def oct_trace7(record: OctonionAutomorphism) -> int:
    """Trace of phi_a on the 7-dim complement (as an integer representative of GF(q))"""
    return int(np.trace(record.restricted))


def trace_table(q: int) -> Dict[int, int]:
    """a -> trace of phi_a on the 7-dim complement, for every a in GF(q)"""
    table = {}
    for a in range(q):
        table[a] = oct_trace7(oct_aut_phi(q, a))
    logger.info(f"octonion trace table over GF({q}) computed for {q} parameters")
    return table


def trace_surjective(q: int) -> bool:
    """Every element of GF(q) is the trace of some phi_a"""
    return len(set(trace_table(q).values())) == q


def trace_affine_form(q: int) -> Tuple[int, int]:
    """(slope, constant) with trace(phi_a) = slope*a + constant, read off a = 0 and a = 1"""
    gf = octonion_field(q)
    t0 = gf(oct_trace7(oct_aut_phi(q, 0)))
    t1 = gf(oct_trace7(oct_aut_phi(q, 1)))
    return int(t1 - t0), int(t0)
