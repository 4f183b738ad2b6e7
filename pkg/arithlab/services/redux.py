# reduction of surface representations modulo primes
# trace sets of finite matrix groups (BFS closure with a budget, seeded word sampling past it),
# images of the trace polynomial Phi_n over F_q, trace fields and the separation experiment

import itertools
import logging
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Set, Union

import galois
import numpy as np
from sympy import factorint, primerange

from arithlab.core.config import settings
from arithlab.core.errors import InputError, IrreducibleRadicand, VerificationFailed
from arithlab.services.bend import BendingDatum, SurfaceRep, bend
from arithlab.services.numfield import (
    FieldElem,
    NumberField,
    PrimeIdeal,
    base_str,
    prime_split,
    reduce_mod,
    residue_field,
)
from arithlab.services.symrep import poly_mul, poly_pow, trace_poly
from arithlab.utils import matrices as mx

logger = logging.getLogger(__name__)

ADJOINT_TYPES = ("SL", "Sp", "SO", "G2")


# ============================================================================
# REDUCTION
# ============================================================================

@dataclass
class FiniteRep:
    """Generator matrices over a finite field (galois arrays)"""
    gf: type
    prime: str
    matrices: List[np.ndarray]

    @property
    def n(self) -> int:
        return self.matrices[0].shape[0]

    @property
    def q(self) -> int:
        return self.gf.order


def _as_prime(base, prime: Union[int, PrimeIdeal]) -> PrimeIdeal:
    if isinstance(prime, PrimeIdeal):
        return prime
    ideals = prime_split(base, int(prime))
    if len(ideals) > 1:
        logger.debug(f"{prime} splits in {base}; reducing at {ideals[0].label}")
    return ideals[0]


class TowerReduction:
    """
    Ring map from the p-integral elements of a tower onto a finite field

    sqrt r_i goes to a chosen square root of r_i mod P. When some r_i is a non-residue
    of a prime residue field, the target becomes F_{p^2}, where every element of F_p
    is a square.
    """

    def __init__(self, field: NumberField, prime: PrimeIdeal):
        self.field = field
        self.prime = prime
        gf = residue_field(prime)
        reduced = [reduce_mod(r, prime) for r in field.radicands]
        if any(x != 0 and not x.is_square() for x in reduced):
            if gf.degree > 1:
                raise IrreducibleRadicand(f"a radicand of {field} is a non-square in {gf.name}")
            if not settings.ALLOW_RESIDUE_EXTENSION:
                raise IrreducibleRadicand(f"a radicand of {field} needs F_{prime.p}^2 and extension is disabled")
            logger.info(f"reducing {field} into GF({prime.p}^2)")
            self.gf = galois.GF(prime.p ** 2)
            self._lift = lambda x: self.gf(int(x))
        else:
            self.gf = gf
            self._lift = lambda x: x
        self.roots = [np.sqrt(self._lift(x)) for x in reduced]

    def __call__(self, x) -> np.ndarray:
        x = self.field(x)
        total = self.gf(0)
        for mask, c in enumerate(x.coeffs):
            if c == 0:
                continue
            term = self._lift(reduce_mod(c, self.prime))
            for i, root in enumerate(self.roots):
                if mask >> i & 1:
                    term = term * root
            total = total + term
        return total

    def matrix(self, m: np.ndarray) -> np.ndarray:
        out = self.gf.Zeros(m.shape)
        for idx, x in np.ndenumerate(m):
            out[idx] = self(x)
        return out


def reduce_rep(rep: SurfaceRep, prime: Union[int, PrimeIdeal]) -> FiniteRep:
    """
    Generator-wise reduction modulo a prime of the base field

    Raises:
        BadReduction: an entry is not integral at the prime
        IrreducibleRadicand: the tower does not reduce into F_P or F_{P^2}
    """
    ideal = _as_prime(rep.field.base, prime)
    red = TowerReduction(rep.field, ideal)
    mats = [red.matrix(m) for m in rep.images]
    for m in mats:
        if np.linalg.det(m) != 1:
            raise VerificationFailed(f"reduced image has determinant {np.linalg.det(m)} mod {ideal.label}")
    return FiniteRep(red.gf, ideal.label, mats)


# ============================================================================
# TRACE SETS
# ============================================================================

@dataclass
class TraceSetResult:
    values: List[int]
    exhaustive: bool
    elements: int
    seed: Optional[int] = None

    @property
    def size(self) -> int:
        return len(self.values)


class _Arena:
    """Matrix products over GF(q); prime fields run on plain int64 arrays mod p"""

    def __init__(self, gf, n: int):
        self.gf = gf
        self.n = n
        self.prime = gf.degree == 1
        self.p = gf.characteristic

    def load(self, m: np.ndarray) -> np.ndarray:
        if self.prime:
            return m.view(np.ndarray).astype(np.int64)
        return m

    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        if self.prime:
            return (x @ y) % self.p
        return x @ y

    def inv(self, x: np.ndarray) -> np.ndarray:
        if self.prime:
            return np.linalg.inv(self.gf(x)).view(np.ndarray).astype(np.int64)
        return np.linalg.inv(x)

    def identity(self) -> np.ndarray:
        return self.load(self.gf.Identity(self.n))

    def key(self, x: np.ndarray) -> bytes:
        return x.view(np.ndarray).astype(np.int64).tobytes()

    def trace(self, x: np.ndarray) -> int:
        if self.prime:
            return int(np.trace(x) % self.p)
        total = self.gf(0)
        for i in range(self.n):
            total = total + x[i, i]
        return int(total)


def trace_set(fin: FiniteRep, budget: Optional[int] = None, seed: Optional[int] = None) -> TraceSetResult:
    """
    Traces of the group generated by fin.matrices

    BFS closure under right multiplication by generators and inverses; when more than
    budget elements turn up, the partial closure is kept and seeded random words add
    to it, and the result is flagged non-exhaustive.
    """
    budget = settings.TRACE_BUDGET if budget is None else budget
    if budget < 1:
        raise InputError("trace budget must be >= 1")
    arena = _Arena(fin.gf, fin.n)
    gens = [arena.load(m) for m in fin.matrices]
    steps = gens + [arena.inv(g) for g in gens]

    start = arena.identity()
    seen = {arena.key(start)}
    traces: Set[int] = {arena.trace(start)}
    frontier = [start]
    complete = True
    while frontier:
        nxt = []
        for x in frontier:
            for s in steps:
                y = arena.mul(x, s)
                k = arena.key(y)
                if k in seen:
                    continue
                if len(seen) >= budget:
                    complete = False
                    break
                seen.add(k)
                traces.add(arena.trace(y))
                nxt.append(y)
            if not complete:
                break
        if not complete:
            break
        frontier = nxt

    if complete:
        logger.debug(f"closure over GF({fin.q}) has {len(seen)} elements")
        return TraceSetResult(sorted(traces), True, len(seen))

    seed = settings.SEED if seed is None else seed
    rng = np.random.default_rng(seed)
    sampled = 0
    for _ in range(settings.SAMPLE_WORDS):
        x = start
        for letter in rng.integers(0, len(steps), size=settings.SAMPLE_WORD_LENGTH):
            x = arena.mul(x, steps[int(letter)])
            traces.add(arena.trace(x))
            sampled += 1
    logger.warning(
        f"trace set over GF({fin.q}) is a lower bound: closure passed {budget} elements, "
        f"{sampled} sampled products added (seed {seed})"
    )
    return TraceSetResult(sorted(traces), False, len(seen) + sampled, seed)


def order_mod(m: np.ndarray, bound: Optional[int] = None) -> int:
    """Multiplicative order of an invertible matrix over GF(q)"""
    gf = type(m)
    n = m.shape[0]
    bound = bound if bound is not None else gf.order ** n
    arena = _Arena(gf, n)
    one = arena.identity()
    x = arena.load(m)
    step = x
    for k in range(1, bound + 1):
        if np.array_equal(x, one):
            return k
        x = arena.mul(x, step)
    raise VerificationFailed(f"matrix order exceeds {bound}")


# ============================================================================
# TRACE POLYNOMIALS OVER F_q
# ============================================================================

def _gf(q: int):
    factors = factorint(q)
    if q < 2 or len(factors) != 1:
        raise InputError(f"{q} is not a prime power")
    return galois.GF(q)


def phi_poly(n: int, gf) -> galois.Poly:
    p = gf.characteristic
    coeffs = [c % p for c in reversed(trace_poly(n).coeffs)]
    return galois.Poly(coeffs, field=gf)


@dataclass
class PhiImage:
    n: int
    q: int
    image: List[int]
    is_surjective: bool


def phi_image(n: int, q: int) -> PhiImage:
    """Image of Phi_n on F_q by evaluation at every element"""
    gf = _gf(q)
    values = phi_poly(n, gf)(gf.elements)
    image = sorted({int(v) for v in values})
    return PhiImage(n, q, image, len(image) == q)


def phi_pushforward(n: int, gf, values: Sequence[int]) -> List[int]:
    poly = phi_poly(n, gf)
    return sorted({int(poly(gf(int(t)))) for t in values})


def phi_surjective_primes(n: int, bound: int) -> Dict[int, bool]:
    """Odd prime p <= bound -> whether Phi_n maps F_p onto itself"""
    return {p: phi_image(n, p).is_surjective for p in primerange(3, bound + 1)}


def first_nonsurjective_prime(n: int, bound: int) -> Optional[int]:
    for p, onto in phi_surjective_primes(n, bound).items():
        if not onto:
            return p
    return None


def sl2_elements(q: int) -> List[np.ndarray]:
    gf = _gf(q)
    out = []
    for a, b, c, d in itertools.product(range(q), repeat=4):
        m = gf([[a, b], [c, d]])
        if m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0] == 1:
            out.append(m)
    return out


def sl2_trace_set(q: int) -> List[int]:
    """Traces of SL(2, q) by exhaustive enumeration"""
    return sorted({int(m[0, 0] + m[1, 1]) for m in sl2_elements(q)})


def tau_mod(n: int, m: np.ndarray) -> np.ndarray:
    """tau_n over GF(q), same basis as the exact tau"""
    gf = type(m)
    one, zero = gf(1), gf(0)
    first = [m[0, 0], m[1, 0]]
    second = [m[0, 1], m[1, 1]]
    out = gf.Zeros((n, n))
    for j in range(n):
        col = poly_mul(poly_pow(first, n - 1 - j, one, zero), poly_pow(second, j, one, zero), zero)
        for i, x in enumerate(col):
            out[i, j] = x
    return out


def tau_trace_set(n: int, q: int) -> List[int]:
    """{Tr tau_n(M) : M in SL(2, q)} by enumeration"""
    gf = _gf(q)
    out = set()
    for m in sl2_elements(q):
        t = tau_mod(n, m)
        total = gf(0)
        for i in range(n):
            total = total + t[i, i]
        out.add(int(total))
    return sorted(out)


# ============================================================================
# TRACE FIELDS
# ============================================================================

def adjoint_trace(m: np.ndarray, group: str = "SL", m_inv: Optional[np.ndarray] = None):
    """
    Trace of Ad(g) on the Lie algebra of the group g lies in

    SL: Tr g Tr g^-1 - 1. Sp: Sym^2, (Tr(g)^2 + Tr(g^2)) / 2. SO: Lambda^2,
    (Tr(g)^2 - Tr(g^2)) / 2. G2: Lambda^2 minus the 7-dim part. For a principal SL2
    pass the 2x2 matrix with group SL.
    """
    t = mx.trace(m)
    if group == "SL":
        inv = m_inv if m_inv is not None else mx.inverse(m)
        return t * mx.trace(inv) - 1
    t2 = mx.trace(m @ m)
    if group == "Sp":
        return (t * t + t2) / 2
    if group == "SO":
        return (t * t - t2) / 2
    if group == "G2":
        return (t * t - t2) / 2 - t
    raise InputError(f"no adjoint trace formula for {group}")


@dataclass
class TraceField:
    """
    Subfield of the tower generated over Q by a set of elements

    masks is the span of supports, bit 0 standing for sqrt m of the base and
    bit i + 1 for the i-th radicand.
    """
    field: NumberField
    masks: List[int]
    stable_from: Optional[int] = None
    history: List[str] = dc_field(default_factory=list)

    @property
    def equals_base(self) -> bool:
        return self.masks == ([0] if self.field.base.m is None else [0, 1])

    @property
    def generators(self) -> List[int]:
        basis: List[int] = []
        for mask in self.masks:
            if mask and mask not in _xor_span(set(basis)):
                basis.append(mask)
        return basis

    def radicand(self, mask: int) -> str:
        r = self.field.rad_product(mask >> 1)
        if mask & 1:
            r = r * self.field.base.coerce(self.field.base.m)
        return base_str(r)

    @property
    def radicands(self) -> List[str]:
        return [self.radicand(mask) for mask in self.generators]

    @property
    def label(self) -> str:
        if not self.radicands:
            return "Q"
        return "Q(" + ", ".join(f"sqrt {r}" for r in self.radicands) + ")"


def _xor_span(masks: Set[int]) -> List[int]:
    span = {0}
    for m in masks:
        span |= {s ^ m for s in span}
    return sorted(span)


def _support(x: FieldElem) -> Set[int]:
    """
    Characters of Gal(tower/Q) under which the terms of x transform

    u + v sqrt m at basis mask S splits into the S-part and the (S, sqrt m)-part.
    With a radicand outside Q the base conjugation does not act termwise, and
    sqrt m is then counted as a generator of its own.
    """
    base = x.field.base
    split = all(base.parts(r)[1] == 0 for r in x.field.radicands)
    masks: Set[int] = set()
    for mask, c in enumerate(x.coeffs):
        u, v = base.parts(c)
        if u != 0 or (v != 0 and not split):
            masks.add(mask << 1)
        if v != 0:
            masks.add((mask << 1 | 1) if split else 1)
    return masks


def generated_subfield(field: NumberField, elements: Sequence) -> TraceField:
    """Subfield of the tower generated over Q by the given elements"""
    masks: Set[int] = set()
    for x in elements:
        masks |= _support(field(x))
    return TraceField(field, _xor_span(masks))


def trace_field(rep: SurfaceRep, word_length: Optional[int] = None, group: str = "SL") -> TraceField:
    """
    Field generated by adjoint traces of all reduced words up to word_length

    An element generates the subfield fixed by the characters that fix every basis
    element in its support, so the answer is the xor-span of supports.
    """
    word_length = settings.TRACE_FIELD_WORD_LENGTH if word_length is None else word_length
    if word_length < 1:
        raise InputError("word length must be >= 1")
    gens = list(rep.images)
    invs = [mx.inverse(g) for g in gens]
    letters = list(range(1, len(gens) + 1)) + [-k for k in range(1, len(gens) + 1)]

    def step(letter):
        return (gens[letter - 1], invs[letter - 1]) if letter > 0 else (invs[-letter - 1], gens[-letter - 1])

    masks: Set[int] = set()
    history: List[str] = []
    eye = mx.identity(rep.n, rep.field)
    layer = [((), eye, eye)]
    for _ in range(word_length):
        nxt = []
        for word, g, g_inv in layer:
            for letter in letters:
                if word and word[-1] == -letter:
                    continue
                x, x_inv = step(letter)
                h, h_inv = g @ x, x_inv @ g_inv
                value = adjoint_trace(h, group, h_inv)
                value = rep.field(value)
                masks |= _support(value)
                nxt.append((word + (letter,), h, h_inv))
        layer = nxt
        history.append(TraceField(rep.field, _xor_span(masks)).label)

    stable = None
    for i in range(len(history)):
        if all(h == history[-1] for h in history[i:]):
            stable = i + 1
            break
    result = TraceField(rep.field, _xor_span(masks), stable_from=stable, history=history)
    logger.info(f"trace field over words of length <= {word_length}: {result.label}")
    return result


# ============================================================================
# SEPARATION EXPERIMENT
# ============================================================================

@dataclass
class SeparationRow:
    prime: str
    l: int
    ord_b: int
    trace_set: List[int]
    pushforward: List[int]
    collapsed: bool
    exhaustive: bool
    seed: Optional[int]

    @property
    def trace_set_size(self) -> int:
        return len(self.trace_set)

    @property
    def matches_pushforward(self) -> bool:
        return self.trace_set == self.pushforward

    @property
    def exceeds_pushforward(self) -> bool:
        return set(self.pushforward) < set(self.trace_set)


@dataclass
class SeparationResult:
    n: int
    rows: List[SeparationRow]
    phi_images: Dict[str, PhiImage]

    @property
    def collapse_holds(self) -> bool:
        return all(row.matches_pushforward for row in self.rows if row.collapsed)

    @property
    def separation_witnessed(self) -> bool:
        return any(row.exceeds_pushforward for row in self.rows)


def separation_experiment(rep: SurfaceRep, datum: BendingDatum, primes: Sequence[int],
                          max_power: int, budget: Optional[int] = None,
                          seed: Optional[int] = None) -> SeparationResult:
    """
    Trace sets of rho_{B^l} mod P for l = 0..max_power at each prime

    Rows with B^l = 1 mod P must reproduce Phi_n applied to the trace set of the
    underlying SL(2) reduction; other rows are recorded as observed.
    """
    if rep.sl2 is None:
        raise InputError("the separation experiment runs on a Fuchsian lift")
    if max_power < 0:
        raise InputError("max_power must be >= 0")
    seed = settings.SEED if seed is None else seed
    n = rep.n
    rows: List[SeparationRow] = []
    images: Dict[str, PhiImage] = {}
    for p in sorted(set(int(p) for p in primes)):
        ideal = _as_prime(rep.field.base, p)
        field = datum.field if rep.field.is_subfield_of(datum.field) else rep.field
        red = TowerReduction(field, ideal)
        b_bar = red.matrix(mx.coerce(datum.matrix, field))
        ord_b = order_mod(b_bar)

        base = reduce_rep(rep.sl2, ideal)
        base_traces = trace_set(base, budget, seed)
        if not base_traces.exhaustive:
            logger.warning(f"SL(2) trace set at {ideal.label} is not exhaustive")
        push = phi_pushforward(n, red.gf, base_traces.values)
        images[ideal.label] = phi_image(n, red.gf.order)
        for l in range(max_power + 1):
            bent = bend(rep, datum.power(l))
            fin = reduce_rep(bent, ideal)
            result = trace_set(fin, budget, seed)
            row = SeparationRow(ideal.label, l, ord_b, result.values, push,
                                l % ord_b == 0, result.exhaustive, result.seed)
            rows.append(row)
            logger.debug(
                f"prime {ideal.label}, l={l}: {row.trace_set_size} traces "
                f"(pushforward {len(push)}, collapsed={row.collapsed})"
            )
    rows.sort(key=lambda r: (int(r.prime.rstrip("ab")), r.prime, r.l))
    out = SeparationResult(n, rows, images)
    if not out.collapse_holds:
        logger.warning("a collapsed row differs from the Phi_n pushforward")
    logger.info(f"separation experiment: {len(rows)} rows, witnessed={out.separation_witnessed}")
    return out
