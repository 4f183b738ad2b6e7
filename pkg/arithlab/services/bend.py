# surface-group representations and bending
# genus-g presentations with relator prod [a_i, b_i], bending along the separating curve
# gamma = prod_{i<=h} [a_i, b_i], and the Zariski-closure verdict for bent Fuchsian lifts

import logging
from dataclasses import dataclass, field as dc_field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from arithlab.core.errors import (
    CommutationViolation,
    DetNotOne,
    FieldMismatch,
    InputError,
    NonpositiveMultiplier,
    NonSplitSpectrum,
    ProductNotOne,
    RelatorViolation,
    UnsupportedBasis,
    VerificationFailed,
)
from arithlab.services.g2 import preserves_cross, untwisted_cross
from arithlab.services.numfield import MAX_RADICANDS, NumberField, RealPlace, check_place, sign_at
from arithlab.services.symrep import j_form, tau
from arithlab.utils import matrices as mx

logger = logging.getLogger(__name__)

VERDICTS = ("principal-SL2", "Sp", "SO", "G2", "SL")


# ============================================================================
# PRESENTATIONS AND WORDS
# ============================================================================

@dataclass(frozen=True)
class SurfacePresentation:
    """
    pi_1 of the closed genus-g surface, generators a_1, b_1, ..., a_g, b_g

    Words are sequences of nonzero ints: +k is the k-th generator (1-indexed in the
    order above), -k its inverse. The separating index h cuts off the C-side
    generators a_1..b_h from the D-side a_{h+1}..b_g.
    """
    genus: int
    separating_index: int = 1

    def __post_init__(self):
        if self.genus < 2:
            raise InputError("surface presentations need genus >= 2")
        if not 1 <= self.separating_index < self.genus:
            raise InputError(f"separating index must lie in [1, {self.genus - 1}]")

    @property
    def generators(self) -> List[str]:
        names = []
        for i in range(1, self.genus + 1):
            names += [f"a{i}", f"b{i}"]
        return names

    @property
    def rank(self) -> int:
        return 2 * self.genus

    def commutator_word(self, i: int) -> List[int]:
        a, b = 2 * i - 1, 2 * i
        return [a, b, -a, -b]

    @property
    def relator(self) -> List[int]:
        word = []
        for i in range(1, self.genus + 1):
            word += self.commutator_word(i)
        return word

    def gamma_word(self, h: Optional[int] = None) -> List[int]:
        h = self.separating_index if h is None else h
        word = []
        for i in range(1, h + 1):
            word += self.commutator_word(i)
        return word

    def is_c_side(self, index: int, h: Optional[int] = None) -> bool:
        """0-indexed generator position lies on the C side of gamma_h"""
        h = self.separating_index if h is None else h
        return index < 2 * h


def commutator(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return mx.commutator(x, y)


def evaluate_word(images: Sequence[np.ndarray], word: Sequence[int],
                  inverses: Optional[Sequence[np.ndarray]] = None) -> np.ndarray:
    """Product of generator images along a word; inverses may be passed precomputed"""
    if not images:
        raise InputError("no generator images")
    inverses = inverses if inverses is not None else [mx.inverse(m) for m in images]
    n = images[0].shape[0]
    out = mx.identity(n, mx.field_of(images[0]))
    for letter in word:
        if letter == 0 or abs(letter) > len(images):
            raise InputError(f"letter {letter} outside the generating set")
        out = out @ (images[letter - 1] if letter > 0 else inverses[-letter - 1])
    return out


# ============================================================================
# REPRESENTATIONS
# ============================================================================

@dataclass
class SurfaceRep:
    """Generator images of a surface group; sl2 is the 2-dim rep this one lifts (or bends) from"""
    presentation: SurfacePresentation
    field: NumberField
    n: int
    images: List[np.ndarray]
    sl2: Optional["SurfaceRep"] = None

    def evaluate(self, word: Sequence[int]) -> np.ndarray:
        return evaluate_word(self.images, word)

    def gamma(self, h: Optional[int] = None) -> np.ndarray:
        return self.evaluate(self.presentation.gamma_word(h))

    def coerce(self, field: NumberField) -> "SurfaceRep":
        if field == self.field:
            return self
        sl2 = self.sl2.coerce(field) if self.sl2 is not None else None
        return SurfaceRep(self.presentation, field, self.n, [mx.coerce(m, field) for m in self.images], sl2)

    def same_images(self, other: "SurfaceRep") -> bool:
        return len(self.images) == len(other.images) and all(
            mx.equal(x, mx.coerce(y, mx.field_of(x))) for x, y in zip(self.images, other.images)
        )


def _common_field(images: Sequence[np.ndarray]) -> NumberField:
    fields = [mx.field_of(m) for m in images]
    top = max(fields, key=lambda f: f.degree)
    for f in fields:
        if not f.is_subfield_of(top):
            raise FieldMismatch(f"generator images live in unrelated fields {f} and {top}")
    return top


def relator_holds(rep: SurfaceRep) -> bool:
    value = rep.evaluate(rep.presentation.relator)
    return mx.equal(value, mx.identity(rep.n, rep.field))


def rep_from_images(pres: SurfacePresentation, images: Sequence[np.ndarray]) -> SurfaceRep:
    """
    Validate generator images against the presentation

    Raises:
        InputError: wrong number or shape of images
        DetNotOne: an image has determinant other than 1
        RelatorViolation: prod [a_i, b_i] is not the identity
    """
    if len(images) != pres.rank:
        raise InputError(f"genus {pres.genus} needs {pres.rank} images, got {len(images)}")
    n = images[0].shape[0]
    for m in images:
        if m.shape != (n, n):
            raise InputError("generator images must be square of one size")
    field = _common_field(images)
    images = [mx.coerce(m, field) for m in images]
    for name, m in zip(pres.generators, images):
        if mx.det(m) != 1:
            raise DetNotOne(f"image of {name} has determinant {mx.det(m)!r}")
    rep = SurfaceRep(pres, field, n, images)
    if not relator_holds(rep):
        raise RelatorViolation(f"relator fails for the genus-{pres.genus} images")
    return rep


def fuchsian_lift(n: int, rep: SurfaceRep) -> SurfaceRep:
    """Compose a 2-dim rep with tau_n generator-wise"""
    if rep.n != 2:
        raise InputError("Fuchsian lifts start from a 2-dimensional representation")
    if n == 2:
        return SurfaceRep(rep.presentation, rep.field, 2, list(rep.images), rep)
    lifted = SurfaceRep(rep.presentation, rep.field, n, [tau(n, m) for m in rep.images], rep)
    if not relator_holds(lifted):
        raise VerificationFailed(f"tau_{n} lift breaks the relator")
    return lifted


# ============================================================================
# CENTRALIZERS AND EIGENBASES
# ============================================================================

def centralizer_basis(m: np.ndarray) -> List[np.ndarray]:
    """Basis of {X : XM = MX}, solved on row-major vec(X)"""
    n = m.shape[0]
    field = mx.field_of(m)
    eye = mx.identity(n, field)
    system = mx.kron(eye, m.T) - mx.kron(m, eye)
    return [mx.unvec(v, n, n) for v in mx.nullspace(system)]


@dataclass
class Eigen:
    """tau_n(g) = basis diag(values) basis^-1 with g = V2 diag(lam, 1/lam) V2^-1"""
    field: NumberField
    lam: object
    v2: np.ndarray
    values: List[object]
    basis: np.ndarray


def _eigenvector(g: np.ndarray, lam) -> List:
    a, b = g[0, 0], g[0, 1]
    c, d = g[1, 0], g[1, 1]
    if b:
        return [b, lam - a]
    if c:
        return [lam - d, c]
    return [lam.field.one(), lam.field.zero()] if lam == a else [lam.field.zero(), lam.field.one()]


def eigen_decompose(g: np.ndarray, n: int, place: Optional[RealPlace] = None) -> Eigen:
    """
    Exact eigen-decomposition of tau_n(g) for a hyperbolic g in SL(2)

    lam = (t + sqrt(t^2 - 4)) / 2 with t = Tr g; when sqrt(t^2 - 4) is missing from the
    tower one radicand slot is spent on it. Eigenvalues of tau_n(g) are lam^{n-1-2i}
    in the order of the columns of tau_n(V2).

    Raises:
        NonSplitSpectrum: g parabolic or elliptic, the trace outside the base field, or
            no radicand slot left
    """
    field = mx.field_of(g)
    t = mx.trace(g)
    if not t.is_base():
        raise NonSplitSpectrum("commutator trace is not in the base field")
    disc = t.base_value() * t.base_value() - 4
    if disc == 0:
        raise NonSplitSpectrum("commutator is parabolic, eigenvalues are not distinct")
    base_place = place.restrict() if place is not None else RealPlace(field.base.places()[0])
    if field.base.sign(disc, base_place.base_sign) < 0:
        raise NonSplitSpectrum(f"commutator is elliptic at {base_place.label}")
    root = field.sqrt(disc)
    if root is None:
        if field.k >= MAX_RADICANDS:
            raise NonSplitSpectrum("eigenvalues need a radicand slot and none is left")
        field = NumberField(field.base, field.radicands + (disc,))
        logger.info(f"adjoined sqrt({disc!r}) for the commutator eigenvalues")
        g = mx.coerce(g, field)
        root = field.sqrt(disc)
    lam = (field(t) + root) / 2
    hi, lo = _eigenvector(g, lam), _eigenvector(g, lam.inverse())
    v2 = mx.matrix([[hi[0], lo[0]], [hi[1], lo[1]]], field)
    values = [lam ** (n - 1 - 2 * i) for i in range(n)]
    if len(set(values)) != n:
        raise NonSplitSpectrum("tau-image of the commutator is not regular")
    basis = tau(n, v2)
    lifted = tau(n, mx.coerce(g, field))
    if not mx.equal(lifted @ basis, basis @ mx.diag(values, field)):
        raise VerificationFailed("eigenbasis does not diagonalize the commutator")
    return Eigen(field, lam, v2, values, basis)


# ============================================================================
# BENDING
# ============================================================================

@dataclass
class BendingDatum:
    """
    B = basis diag(multipliers) basis^-1, commuting with rho(gamma_h)

    basis is the tau-eigenbasis of rho(gamma_h); None marks a B given without one.
    """
    matrix: np.ndarray
    h: int
    multipliers: Tuple = ()
    basis: Optional[np.ndarray] = None
    place: RealPlace = dc_field(default_factory=RealPlace)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def field(self) -> NumberField:
        return mx.field_of(self.matrix)

    def power(self, k: int) -> "BendingDatum":
        mults = tuple(mu ** k for mu in self.multipliers)
        return BendingDatum(mx.power(self.matrix, k), self.h, mults, self.basis, self.place)

    def then(self, other: "BendingDatum") -> "BendingDatum":
        """Bending by self then by other, i.e. by other.matrix @ self.matrix"""
        if other.h != self.h:
            raise InputError("composed bendings must share the separating curve")
        field = other.field if self.field.is_subfield_of(other.field) else self.field
        mults = tuple(field(x) * field(y) for x, y in zip(self.multipliers, other.multipliers))
        product = mx.coerce(other.matrix, field) @ mx.coerce(self.matrix, field)
        basis = self.basis if self.basis is not None else other.basis
        return BendingDatum(product, self.h, mults, basis, self.place)


def _extend_place(place: Optional[RealPlace], field: NumberField) -> RealPlace:
    if place is None:
        place = RealPlace(field.base.places()[0])
    signs = tuple(place.signs) + (1,) * (field.k - len(place.signs))
    return RealPlace(place.base_sign, signs)


def _require_sl2(rep: SurfaceRep) -> SurfaceRep:
    if rep.n == 2 and rep.sl2 is None:
        return rep
    if rep.sl2 is None:
        raise UnsupportedBasis("bending elements are built in the tau-eigenbasis of a Fuchsian lift")
    return rep.sl2


def make_bending_element(rep: SurfaceRep, h: int, multipliers: Sequence,
                         place: Optional[RealPlace] = None) -> BendingDatum:
    """
    B with the given multipliers in the tau-eigenbasis of rho(gamma_h)

    Raises:
        NonSplitSpectrum: gamma_h is not regular hyperbolic over the tower
        ProductNotOne: the multipliers do not multiply to 1
        NonpositiveMultiplier: some multiplier is not positive at the designated place
    """
    if not 1 <= h < rep.presentation.genus:
        raise InputError(f"separating index {h} out of range")
    if len(multipliers) != rep.n:
        raise InputError(f"{rep.n} multipliers expected, got {len(multipliers)}")
    base_rep = _require_sl2(rep)
    g = base_rep.gamma(h)
    eig = eigen_decompose(g, rep.n, place)
    field = eig.field
    place = _extend_place(place, field)
    check_place(field, place)

    mults = tuple(field(mu) for mu in multipliers)
    product = field.one()
    for mu in mults:
        product = product * mu
    if product != 1:
        raise ProductNotOne(f"multipliers multiply to {product!r}")
    for i, mu in enumerate(mults):
        if sign_at(mu, place) <= 0:
            raise NonpositiveMultiplier(f"multiplier {i} is not positive at {place.label}")

    b = eig.basis @ mx.diag(mults, field) @ mx.inverse(eig.basis)
    gamma = mx.coerce(rep.gamma(h), field)
    if not mx.equal(b @ gamma, gamma @ b):
        raise VerificationFailed("bending element does not commute with rho(gamma)")
    if mx.det(b) != 1:
        raise VerificationFailed("bending element has determinant other than 1")
    logger.debug(f"bending element built for n={rep.n}, h={h} over {field}")
    return BendingDatum(b, h, mults, eig.basis, place)


def bend(rep: SurfaceRep, datum: BendingDatum) -> SurfaceRep:
    """
    rho_B: C-side images fixed, D-side images conjugated by B

    Raises:
        CommutationViolation: B does not commute with rho(gamma_h)
        DetNotOne: det B != 1
    """
    if datum.n != rep.n:
        raise InputError(f"bending element is {datum.n}x{datum.n}, rep has dimension {rep.n}")
    field = rep.field if datum.field.is_subfield_of(rep.field) else datum.field
    rep = rep.coerce(field)
    b = mx.coerce(datum.matrix, field)
    gamma = rep.gamma(datum.h)
    if not mx.equal(b @ gamma, gamma @ b):
        raise CommutationViolation(f"B does not commute with rho(gamma_{datum.h})")
    if mx.det(b) != 1:
        raise DetNotOne("bending element must have determinant 1")
    b_inv = mx.inverse(b)
    images = [
        m if rep.presentation.is_c_side(i, datum.h) else b @ m @ b_inv
        for i, m in enumerate(rep.images)
    ]
    bent = SurfaceRep(rep.presentation, field, rep.n, images, rep.sl2)
    if not relator_holds(bent):
        raise VerificationFailed("bent representation breaks the relator")
    if not mx.equal(bent.gamma(datum.h), gamma):
        raise VerificationFailed("bending moved rho(gamma)")
    return bent


def double_bend(rep: SurfaceRep, first: BendingDatum, second: BendingDatum) -> SurfaceRep:
    """Bend by first then second, checked against a single bend by second.matrix @ first.matrix"""
    twice = bend(bend(rep, first), second)
    once = bend(rep, first.then(second))
    if not twice.same_images(once):
        raise VerificationFailed("double bending does not compose")
    return twice


# ============================================================================
# ZARISKI CLOSURE
# ============================================================================

def is_geometric(mults: Sequence) -> bool:
    """mu_i mu_{i+2} = mu_{i+1}^2 throughout, the eigenvalue pattern of tau_n(diag)"""
    return all(mults[i] * mults[i + 2] == mults[i + 1] * mults[i + 1] for i in range(len(mults) - 2))


def is_paired(mults: Sequence) -> bool:
    """mu_i mu_{n+1-i} = 1, the eigenbasis form of B^T J_n B = J_n"""
    n = len(mults)
    return all(mults[i] * mults[n - 1 - i] == 1 for i in range(n))


def zariski_classify(rep_b: SurfaceRep, datum: BendingDatum, n: int) -> str:
    """
    Zariski closure of a bent Fuchsian lift

    principal-SL2 when B lies in tau_n(GL(2)), else Sp / SO when B preserves J_n
    (G2 when n = 7 and B also preserves the cross product), else SL.

    Raises:
        UnsupportedBasis: B was not built in the tau-eigenbasis
    """
    if datum.basis is None or len(datum.multipliers) != n:
        raise UnsupportedBasis("classification needs B in the tau-eigenbasis of rho(gamma)")
    if rep_b.n != n or datum.n != n:
        raise InputError(f"dimension mismatch: rep {rep_b.n}, B {datum.n}, n {n}")
    mults = datum.multipliers
    if is_geometric(mults):
        verdict = "principal-SL2"
    else:
        field = datum.field
        j = j_form(n, field)
        preserves = mx.equal(datum.matrix.T @ j @ datum.matrix, j)
        if preserves != is_paired(mults):
            raise VerificationFailed("J_n-invariance of B disagrees with the multiplier pairing")
        if not preserves:
            verdict = "SL"
        elif n % 2 == 0:
            verdict = "Sp"
        elif n == 7 and preserves_cross(datum.matrix, untwisted_cross):
            verdict = "G2"
        else:
            verdict = "SO"
    logger.info(f"Zariski closure verdict for n={n}: {verdict}")
    return verdict


@dataclass
class InvariantForms:
    dimension: int
    symmetric: int
    alternating: int
    cross_invariant: Optional[bool] = None

    @property
    def kind(self) -> str:
        if self.dimension == 0:
            return "none"
        if self.alternating == 0:
            return "symmetric"
        if self.symmetric == 0:
            return "alternating"
        return "mixed"


def _span_dim(mats: Sequence[np.ndarray]) -> int:
    nonzero = [mx.vec(m) for m in mats if not mx.is_zero(m)]
    if not nonzero:
        return 0
    return mx.rank(np.array(nonzero, dtype=object))


def invariant_form_solver(generators: Sequence[np.ndarray]) -> InvariantForms:
    """
    Bilinear forms Q with g^T Q g = Q for every generator

    On row-major vec(Q) this reads (g^T kron g^T - I) vec(Q) = 0. For 7x7 generators
    cross_invariant records whether all of them preserve the untwisted cross product.
    """
    if not generators:
        raise InputError("no generators")
    n = generators[0].shape[0]
    field = _common_field(generators)
    gens = [mx.coerce(g, field) for g in generators]
    eye = mx.identity(n * n, field)
    system = np.concatenate([mx.kron(g.T, g.T) - eye for g in gens], axis=0)
    solutions = [mx.unvec(v, n, n) for v in mx.nullspace(system)]
    sym = _span_dim([q + q.T for q in solutions])
    alt = _span_dim([q - q.T for q in solutions])
    cross_flag = None
    if n == 7:
        cross_flag = all(preserves_cross(g, untwisted_cross) for g in gens)
    forms = InvariantForms(len(solutions), sym, alt, cross_flag)
    logger.debug(f"invariant forms: dim {forms.dimension} ({forms.kind})")
    return forms


def verdict_agrees(verdict: str, forms: InvariantForms, n: int) -> bool:
    """The Zariski verdict and the invariant-form count tell the same story"""
    if verdict == "SL":
        return forms.dimension == 0
    if forms.dimension != 1:
        return False
    if verdict == "principal-SL2":
        return forms.kind == ("alternating" if n % 2 == 0 else "symmetric")
    if verdict == "Sp":
        return forms.kind == "alternating"
    if verdict == "SO":
        return forms.kind == "symmetric" and not forms.cross_invariant
    if verdict == "G2":
        return forms.kind == "symmetric" and bool(forms.cross_invariant)
    raise InputError(f"unknown verdict {verdict}")
