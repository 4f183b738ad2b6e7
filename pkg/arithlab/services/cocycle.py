# finite Galois 1-cocycles over multiquadratic towers
# the T^{a,b} table, the standard cocycle eta, its linear lift chi, tau_n pushforwards,
# the Hilbert 90 solver, fixed-point membership and the explicit S and P matrices

import logging
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Tuple

import numpy as np

from arithlab.core.config import settings
from arithlab.core.errors import (
    ExhaustedRetries, FieldMismatch, IncompleteTable, NotInvertible, VerificationFailed,
)
from arithlab.services.numfield import BaseField, FieldElem, GaloisChar, NumberField, galois_group
from arithlab.services.symrep import j_form, tau
from arithlab.utils import matrices as mx

logger = logging.getLogger(__name__)


# ============================================================================
# TYPES
# ============================================================================

@dataclass
class Cocycle:
    """
    Table from the Galois characters of a tower to matrices

    projective: values are compared up to scalars (PGL-valued)
    twist: eta table; when set, sigma acts on matrices by X -> eta(s) sigma(X) eta(s)^-1
    """
    field: NumberField
    table: Dict[GaloisChar, np.ndarray]
    projective: bool = False
    twist: Optional[Dict[GaloisChar, np.ndarray]] = None
    name: str = "cocycle"

    def __getitem__(self, sigma: GaloisChar) -> np.ndarray:
        return self.table[sigma]

    @property
    def dim(self) -> int:
        return next(iter(self.table.values())).shape[0]

    def act(self, sigma: GaloisChar, x: np.ndarray) -> np.ndarray:
        moved = mx.galois_map(sigma, x)
        if self.twist is None:
            return moved
        eta = self.twist[sigma]
        return eta @ moved @ mx.inverse(eta)


@dataclass
class OuterCocycle:
    """
    Cocycle into PGL_n x <omega>, omega(M) = J^-1 M^-T J

    Values are pairs (g, flag); flag is True on characters that move sqrt d.
    """
    field: NumberField
    table: Dict[GaloisChar, Tuple[np.ndarray, bool]]
    form: np.ndarray
    name: str = "outer"

    def omega(self, m: np.ndarray) -> np.ndarray:
        return mx.inverse(self.form) @ mx.inverse(m).T @ self.form

    def compose(self, x: Tuple[np.ndarray, bool], y: Tuple[np.ndarray, bool]) -> Tuple[np.ndarray, bool]:
        g1, o1 = x
        g2, o2 = y
        return g1 @ (self.omega(g2) if o1 else g2), o1 != o2


@dataclass
class Hilbert90Solution:
    cocycle: Cocycle
    s: np.ndarray
    seed: int
    attempts: int = 1
    relation_checked: bool = dc_field(default=False)


# ============================================================================
# TOWERS AND SIGNS
# ============================================================================

def cocycle_tower(base: BaseField, params: List) -> Tuple[NumberField, List[FieldElem]]:
    """Tower F(sqrt p for p in params) with the chosen roots"""
    return NumberField.tower(base, params)


def root_sign(sigma: GaloisChar, root: FieldElem) -> int:
    return 1 if sigma.apply(root) == root else -1


def _t_matrix(sa: int, sb: int, field: NumberField) -> np.ndarray:
    if sa == 1 and sb == 1:
        rows = [[1, 0], [0, 1]]
    elif sa == 1:
        rows = [[1, 0], [0, -1]]
    elif sb == 1:
        rows = [[0, 1], [1, 0]]
    else:
        rows = [[0, 1], [-1, 0]]
    return mx.matrix(rows, field)


# ============================================================================
# CONSTRUCTORS
# ============================================================================

def t_cocycle(a, b, base: Optional[BaseField] = None) -> Cocycle:
    """Four-case table T_sigma^{a,b} in PGL_2 over F(sqrt a, sqrt b)"""
    base = base or BaseField()
    field, (ra, rb) = cocycle_tower(base, [a, b])
    table = {}
    for sigma in galois_group(field):
        table[sigma] = _t_matrix(root_sign(sigma, ra), root_sign(sigma, rb), field)
    return Cocycle(field, table, projective=True, name="T")


def pushforward(zeta: Cocycle, n: int) -> Cocycle:
    """sigma -> tau_n(zeta(sigma)); linear when n is odd or zeta is linear"""
    table = {sigma: tau(n, m) for sigma, m in zeta.table.items()}
    projective = zeta.projective and n % 2 == 0
    return Cocycle(zeta.field, table, projective=projective, name=f"tau{n}({zeta.name})")


def eta_cocycle(a, b, n: int, base: Optional[BaseField] = None) -> Cocycle:
    """Standard cocycle: eta(sigma) = Diag(T_sigma, ..., T_sigma) of size 2n"""
    t = t_cocycle(a, b, base)
    table = {sigma: mx.block_diag([m] * n, t.field) for sigma, m in t.table.items()}
    return Cocycle(t.field, table, projective=True, name=f"eta{n}")


def chi_lift(a, b, n: int, base: Optional[BaseField] = None) -> Cocycle:
    """
    Linear lift for the eta-twisted action

    chi(sigma) = I when sigma fixes sqrt a, otherwise the block antidiagonal
    matrix with I_2 blocks (reversal of the n block positions)
    """
    eta = eta_cocycle(a, b, n, base)
    field = eta.field
    _, (ra, _) = cocycle_tower(eta.field.base, [a, b])
    ra = field(ra)
    flip = mx.kron(mx.reversal(n, field), mx.identity(2, field))
    table = {}
    for sigma in eta.table:
        table[sigma] = mx.identity(2 * n, field) if root_sign(sigma, ra) == 1 else flip.copy()
    return Cocycle(field, table, projective=False, twist=eta.table, name=f"chi{n}")


def compatible_cocycle(a, b, n: int, kind: str = "inner", d=None,
                       base: Optional[BaseField] = None):
    """
    tau_n-compatible cocycle sigma -> tau_n(T_sigma)

    kind="outer" adjoins sqrt d and composes omega on the characters moving sqrt d.
    """
    base = base or BaseField()
    if kind == "inner":
        return pushforward(t_cocycle(a, b, base), n)
    if kind != "outer":
        raise FieldMismatch(f"unknown cocycle kind {kind!r}")
    if d is None:
        raise FieldMismatch("outer cocycles need d")
    field, (ra, rb, rd) = cocycle_tower(base, [a, b, d])
    form = j_form(n, field)
    table = {}
    for sigma in galois_group(field):
        t = _t_matrix(root_sign(sigma, ra), root_sign(sigma, rb), field)
        table[sigma] = (tau(n, t), root_sign(sigma, rd) == -1)
    return OuterCocycle(field, table, form, name=f"outer{n}")


def trivial_cocycle(field: NumberField, n: int) -> Cocycle:
    table = {sigma: mx.identity(n, field) for sigma in galois_group(field)}
    return Cocycle(field, table, name="trivial")


# ============================================================================
# CHECKS
# ============================================================================

def _same(x: np.ndarray, y: np.ndarray, projective: bool) -> bool:
    return mx.proj_equal(x, y) if projective else mx.equal(x, y)


def _check_complete(field: NumberField, keys) -> List[GaloisChar]:
    group = galois_group(field)
    if set(keys) != set(group):
        raise IncompleteTable(f"table covers {len(set(keys))} of {len(group)} characters")
    return group


def is_cocycle(zeta) -> bool:
    """zeta(st) == zeta(s) * (s . zeta(t)) for every pair, and zeta(1) == 1"""
    if isinstance(zeta, OuterCocycle):
        return _is_outer_cocycle(zeta)
    group = _check_complete(zeta.field, zeta.table.keys())
    n = zeta.dim
    ident = mx.identity(n, zeta.field)
    if not _same(zeta.table[group[0]], ident, zeta.projective):
        return False
    for s in group:
        for t in group:
            lhs = zeta.table[s * t]
            rhs = zeta.table[s] @ zeta.act(s, zeta.table[t])
            if not _same(lhs, rhs, zeta.projective):
                logger.debug(f"{zeta.name}: axiom fails at ({s.label}, {t.label})")
                return False
    return True


def _is_outer_cocycle(zeta: OuterCocycle) -> bool:
    group = _check_complete(zeta.field, zeta.table.keys())
    for s in group:
        for t in group:
            g_t, o_t = zeta.table[t]
            moved = (mx.galois_map(s, g_t), o_t)
            g, o = zeta.compose(zeta.table[s], moved)
            g_st, o_st = zeta.table[s * t]
            if o != o_st or not mx.proj_equal(g, g_st):
                logger.debug(f"{zeta.name}: axiom fails at ({s.label}, {t.label})")
                return False
    return True


def is_coboundary_of(zeta: Cocycle, s: np.ndarray) -> bool:
    """zeta(sigma) == S^-1 (sigma . S) for every character"""
    s_inv = mx.inverse(s)
    return all(
        _same(zeta.table[sigma], s_inv @ zeta.act(sigma, s), zeta.projective)
        for sigma in zeta.table
    )


def hilbert90_solve(zeta: Cocycle, rng: Optional[np.random.Generator] = None,
                    seed: Optional[int] = None) -> Hilbert90Solution:
    """
    Constructive Hilbert 90 for a linear cocycle

    B = sum_t zeta(t) (t . C) over the Galois group for a random integral C satisfies
    sigma . B = zeta(sigma)^-1 B, so S = B^-1 gives zeta(sigma) = S^-1 (sigma . S).
    C is redrawn until B is invertible.
    """
    if zeta.projective:
        raise FieldMismatch(f"{zeta.name} is projective; lift it to a linear cocycle first")
    seed = settings.SEED if seed is None else seed
    rng = rng or np.random.default_rng(seed)
    field = zeta.field
    n = zeta.dim
    bound = settings.H90_COEFF_RANGE
    for attempt in range(1, settings.H90_MAX_RETRIES + 1):
        c = mx.matrix(rng.integers(-bound, bound + 1, size=(n, n)).tolist(), field)
        b = mx.zeros(n, n, field)
        for sigma, value in zeta.table.items():
            b = b + value @ zeta.act(sigma, c)
        try:
            s = mx.inverse(b)
        except NotInvertible:
            logger.debug(f"{zeta.name}: averaged matrix singular on attempt {attempt}")
            continue
        if not is_coboundary_of(zeta, s):
            raise VerificationFailed(f"{zeta.name} is not a cocycle; Hilbert 90 relation failed")
        logger.info(f"Hilbert 90 for {zeta.name} solved after {attempt} attempt(s)")
        return Hilbert90Solution(zeta, s, seed, attempt, relation_checked=True)
    raise ExhaustedRetries(f"{zeta.name}: no invertible average in {settings.H90_MAX_RETRIES} attempts")


def fixed_points_member(zeta, m: np.ndarray) -> bool:
    """
    M lies in the twisted group: zeta(s) (s . M) zeta(s)^-1 == M for every s

    Outer cocycles apply omega on the characters that move sqrt d.
    """
    field = zeta.field
    m = mx.coerce(m, field)
    if isinstance(zeta, OuterCocycle):
        for sigma, (g, outer) in zeta.table.items():
            moved = mx.galois_map(sigma, m)
            if outer:
                moved = zeta.omega(moved)
            if not mx.equal(g @ moved @ mx.inverse(g), m):
                return False
        return True
    for sigma, value in zeta.table.items():
        if not mx.equal(value @ zeta.act(sigma, m) @ mx.inverse(value), m):
            return False
    return True


def transported_form(s: np.ndarray, form: np.ndarray) -> np.ndarray:
    """S^-T J S^-1, the form carried along S"""
    s_inv = mx.inverse(s)
    return s_inv.T @ form @ s_inv


def is_galois_invariant(m: np.ndarray) -> bool:
    """Every entry fixed by every character, i.e. defined over the base field"""
    return all(x.is_base() for x in m.flat)


def values_preserve_form(zeta: Cocycle, form: np.ndarray) -> bool:
    """Each value g satisfies g^T J g = c J for a scalar c (c = 1 up to sign for odd n)"""
    for value in zeta.table.values():
        if mx.scalar_ratio(value.T @ form @ value, form) is None:
            return False
    return True


# ============================================================================
# EXPLICIT MATRICES
# ============================================================================

def explicit_s(a, b, base: Optional[BaseField] = None) -> np.ndarray:
    """
    7x7 matrix S with S^-1 sigma(S) = tau_7(T_sigma^{a,b}) up to the sign sigma(sqrt ab)/sqrt ab

    Rows (times 1/2) pair the monomials X^{6-i}Y^i and X^iY^{6-i}.
    """
    base = base or BaseField()
    field, (ra, rb) = cocycle_tower(base, [a, b])
    rab = ra * rb
    ia, ib, iab = ra.inverse(), rb.inverse(), rab.inverse()
    z = field.zero()
    rows = [
        [ib, z, z, z, z, z, -ib],
        [z, field(1), z, z, z, field(-1), z],
        [z, z, ib, z, -ib, z, z],
        [z, z, z, 2 * ia, z, z, z],
        [z, z, iab, z, iab, z, z],
        [z, ia, z, z, z, ia, z],
        [iab, z, z, z, z, z, iab],
    ]
    return mx.scale(mx.matrix(rows, field), field(1) / 2)


def p_matrix(n: int, a, field: NumberField, root_a: FieldElem) -> np.ndarray:
    """
    2n x 2n matrix P with chi(sigma) = P^-1 eta(sigma) sigma(P) eta(sigma)^-1

    Block rows r < n/2 carry I at (r, r) and (r, n-1-r); the mirrored rows carry
    (1/sqrt a) I at (r, n-1-r) and -(1/sqrt a) I at (r, r); for odd n the middle
    block is 2I. Everything is scaled by 1/2. P = I when a is a square.
    """
    if field.base.is_square(field.base.coerce(a)) is not None:
        return mx.identity(2 * n, field)
    inv_root = root_a.inverse()
    half = field(1) / 2
    out = mx.zeros(2 * n, 2 * n, field)

    def put(r: int, c: int, value) -> None:
        out[2 * r, 2 * c] = value * half
        out[2 * r + 1, 2 * c + 1] = value * half

    for r in range(n):
        mirror = n - 1 - r
        if n % 2 and r == mirror:
            put(r, r, field(2))
        elif r < mirror:
            put(r, r, field(1))
            put(r, mirror, field(1))
        else:
            put(r, mirror, inv_root)
            put(r, r, -inv_root)
    return out


def check_p_relation(a, b, n: int, base: Optional[BaseField] = None) -> Dict[str, bool]:
    """
    Verify the explicit P against chi (exactly) and against tau_{2n}(T) (projectively)
    """
    chi = chi_lift(a, b, n, base)
    field = chi.field
    _, (ra, _) = cocycle_tower(field.base, [a, b])
    p = p_matrix(n, a, field, field(ra))
    p_inv = mx.inverse(p)
    t = t_cocycle(a, b, base)
    lifted = exact = True
    for sigma, value in chi.table.items():
        eta = chi.twist[sigma]
        moved = p_inv @ eta @ mx.galois_map(sigma, p)
        if not mx.equal(value, moved @ mx.inverse(eta)):
            exact = False
        if not mx.proj_equal(tau(2 * n, t.table[sigma]), moved):
            lifted = False
    return {"chi_exact": exact, "tau_projective": lifted}


def check_explicit_s(a, b, base: Optional[BaseField] = None) -> Dict[str, bool]:
    """S against tau_7 o T: projective relation for S, linear relation for sqrt(ab) S"""
    zeta = pushforward(t_cocycle(a, b, base), 7)
    field = zeta.field
    s = mx.coerce(explicit_s(a, b, base), field)
    _, (ra, rb) = cocycle_tower(field.base, [a, b])
    scaled = mx.scale(s, field(ra) * field(rb))
    s_inv = mx.inverse(s)
    projective = all(
        mx.proj_equal(s_inv @ mx.galois_map(sigma, s), value) for sigma, value in zeta.table.items()
    )
    linear = is_coboundary_of(zeta, scaled)
    return {"projective": projective, "scaled_linear": linear}


def eta_commutes_with_chi(a, b, n: int, base: Optional[BaseField] = None) -> bool:
    chi = chi_lift(a, b, n, base)
    return all(
        mx.equal(chi.twist[s] @ chi.table[t], chi.table[t] @ chi.twist[s])
        for s in chi.table for t in chi.table
    )


def corrupt(zeta: Cocycle, sigma: GaloisChar, entry: Tuple[int, int] = (0, 0)) -> Cocycle:
    """Copy of zeta with one entry of one value negated (perturbation oracle)"""
    table = {k: v.copy() for k, v in zeta.table.items()}
    i, j = entry
    m = table[sigma]
    if not m[i, j]:
        m[i, j] = zeta.field.one()
    else:
        m[i, j] = -m[i, j]
    return Cocycle(zeta.field, table, zeta.projective, zeta.twist, name=zeta.name + "*")
