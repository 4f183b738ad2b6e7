# verification suites run by `arithlab verify`
# each suite takes (seed, budget) and returns SuiteItems; a VerificationFailed inside an
# identity marks that item failed, any other ArithLabError aborts the run

import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import primerange

from arithlab.core.config import settings
from arithlab.core.errors import RelatorViolation, VerificationFailed
from arithlab.models.schemas import SuiteItem
from arithlab.services import bend as bd
from arithlab.services import cocycle as cc
from arithlab.services import forms as fm
from arithlab.services import g2
from arithlab.services import redux as rx
from arithlab.services.numfield import BaseField, GaloisChar, NumberField, RealPlace, galois_group
from arithlab.services.qalg import QuatAlgebra, reciprocity_product
from arithlab.services.symrep import check_invariance, j_form, signature_pattern, tau, trace_poly
from arithlab.utils import matrices as mx
from arithlab.utils.rational import format_fraction

logger = logging.getLogger(__name__)

COCYCLE_PARAMS = [(2, 3, 5), (5, 2, 3), (2, 2, 3)]
FORM_PARAMS = [(2, 3), (3, 5)]


def _check(items: List[SuiteItem], key: str, fn: Callable[[], object], **detail) -> bool:
    """Run one identity; fn returns a bool or a (bool, detail) pair"""
    try:
        out = fn()
    except VerificationFailed as e:
        out = (False, {"error": str(e)})
    if isinstance(out, tuple):
        passed, extra = out
        detail = {**detail, **extra}
    else:
        passed = out
    passed = bool(passed)
    items.append(SuiteItem(key=key, passed=passed, detail=detail))
    logger.debug(f"{key}: {'pass' if passed else 'FAIL'}")
    return passed


# ============================================================================
# SHARED INPUTS
# ============================================================================

def random_sl2(field: NumberField, rng: np.random.Generator, factors: int = 3) -> np.ndarray:
    """Product of elementary matrices with random small entries over the tower"""
    m = mx.identity(2, field)
    for i in range(factors):
        x = field.element([int(c) for c in rng.integers(-3, 4, size=field.degree)])
        step = [[1, x], [0, 1]] if i % 2 == 0 else [[1, 0], [x, 1]]
        m = m @ mx.matrix(step, field)
    return m


def surface_images(field: NumberField) -> List[np.ndarray]:
    """Genus-2 images (A, B, B, A) with A, B unipotent; rho([a1, b1]) has eigenvalue 4"""
    a = mx.matrix([[1, 1], [0, 1]], field)
    b = mx.matrix([[1, 0], ["3/2", 1]], field)
    return [a, b, b.copy(), a.copy()]


def surface_rep(field: Optional[NumberField] = None) -> bd.SurfaceRep:
    field = field or NumberField(BaseField())
    return bd.rep_from_images(bd.SurfacePresentation(2, 1), surface_images(field))


# (expected verdict, multipliers) over Q, all in the eigenbasis of rho(gamma_1)
VERDICT_FIXTURES: List[Tuple[str, Sequence[str]]] = [
    ("principal-SL2", ["4", "1/4"]),
    ("principal-SL2", ["4", "1", "1/4"]),
    ("SL", ["76", "1/5776", "76"]),
    ("principal-SL2", ["8", "2", "1/2", "1/8"]),
    ("Sp", ["2", "3", "1/3", "1/2"]),
    ("SL", ["2", "3", "1/2", "1"]),
    ("principal-SL2", ["16", "4", "1", "1/4", "1/16"]),
    ("SO", ["2", "3", "1", "1/3", "1/2"]),
    ("SL", ["2", "3", "1", "1", "1/6"]),
    ("Sp", ["2", "3", "5", "1/5", "1/3", "1/2"]),
    ("principal-SL2", ["64", "16", "4", "1", "1/4", "1/16", "1/64"]),
    ("G2", ["6", "3", "2", "1", "1/2", "1/3", "1/6"]),
    ("SO", ["2", "3", "5", "1", "1/5", "1/3", "1/2"]),
    ("SL", ["2", "3", "1", "1", "1", "1", "1/6"]),
]

SEPARATION_MULTIPLIERS = ["76", "1/5776", "76"]

# Q(sqrt 2) parameters: a, b > 0 at one real place and < 0 at the other
ADMISSIBLE_PARAMS = [([-1, 1], [3, 3]), ([-1, 1], [1, 1]), ([1, 1], [1, 2])]


# ============================================================================
# SYMREP
# ============================================================================

def suite_symrep(seed: int, budget: int) -> List[SuiteItem]:
    items: List[SuiteItem] = []
    rng = np.random.default_rng(seed)
    field = NumberField(BaseField(), [2, 3])
    samples = [random_sl2(field, rng) for _ in range(settings.SUITE_SAMPLES)]
    q = NumberField(BaseField())

    for n in range(3, 10):
        _check(items, f"symrep/invariance/n={n}",
               lambda n=n: all(check_invariance(n, m) for m in samples),
               samples=len(samples), field="Q(sqrt 2, sqrt 3)")

    def antidiagonal(n):
        j = j_form(n, q)
        return [format_fraction(j[r, n - 1 - r].base_value()) for r in range(n)]

    _check(items, "symrep/j3", lambda: (antidiagonal(3) == ["2", "-1", "2"], {"antidiagonal": antidiagonal(3)}))
    _check(items, "symrep/j4", lambda: (antidiagonal(4) == ["6", "-2", "2", "-6"], {"antidiagonal": antidiagonal(4)}))

    for n in range(2, 10):
        def parity(n=n):
            j = j_form(n, q)
            return mx.equal(j.T, j) if n % 2 else mx.equal(j.T, -j)
        _check(items, f"symrep/parity/n={n}", parity, kind="symmetric" if n % 2 else "alternating")

    for k in range(1, 5):
        n = 2 * k + 1
        _check(items, f"symrep/signature/n={n}",
               lambda n=n: (fm.signature(j_form(n, q)) == signature_pattern(n),
                            {"signature": list(fm.signature(j_form(n, q)))}))

    for n in range(2, 8):
        poly = trace_poly(n)
        _check(items, f"symrep/trace-poly/n={n}",
               lambda n=n, poly=poly: all(mx.trace(tau(n, m)) == poly(mx.trace(m)) for m in samples[:10]),
               coeffs=list(poly.coeffs))

    def homomorphism():
        pairs = zip(samples[0::2], samples[1::2])
        return all(mx.equal(tau(5, x @ y), tau(5, x) @ tau(5, y)) for x, y in list(pairs)[:10])

    _check(items, "symrep/homomorphism/n=5", homomorphism)
    return items


# ============================================================================
# COCYCLES
# ============================================================================

def _nontrivial(field: NumberField) -> GaloisChar:
    return next(s for s in galois_group(field) if not s.is_identity())


def suite_cocycle(seed: int, budget: int) -> List[SuiteItem]:
    items: List[SuiteItem] = []
    for a, b, d in COCYCLE_PARAMS:
        tag = f"a={a},b={b}"
        t = cc.t_cocycle(a, b)
        _check(items, f"cocycle/axiom/T/{tag}", lambda t=t: cc.is_cocycle(t))
        for n in (2, 3):
            _check(items, f"cocycle/axiom/eta{n}/{tag}", lambda n=n: cc.is_cocycle(cc.eta_cocycle(a, b, n)))
            _check(items, f"cocycle/axiom/chi{n}/{tag}", lambda n=n: cc.is_cocycle(cc.chi_lift(a, b, n)))
        for n in (3, 5):
            _check(items, f"cocycle/axiom/inner{n}/{tag}",
                   lambda n=n: cc.is_cocycle(cc.compatible_cocycle(a, b, n, "inner")))
            _check(items, f"cocycle/axiom/outer{n}/{tag},d={d}",
                   lambda n=n: cc.is_cocycle(cc.compatible_cocycle(a, b, n, "outer", d)))

        for n in (3, 5, 7):
            zeta = cc.pushforward(t, n)

            def round_trip(zeta=zeta):
                sol = cc.hilbert90_solve(zeta, seed=seed)
                return cc.is_coboundary_of(zeta, sol.s), {"attempts": sol.attempts}
            _check(items, f"cocycle/hilbert90/tau{n}/{tag}", round_trip)

        def chi_round_trip():
            chi = cc.chi_lift(a, b, 2)
            sol = cc.hilbert90_solve(chi, seed=seed)
            return cc.is_coboundary_of(chi, sol.s), {"attempts": sol.attempts}
        _check(items, f"cocycle/hilbert90/chi2/{tag}", chi_round_trip)

        _check(items, f"cocycle/explicit-s/{tag}", lambda: (all(cc.check_explicit_s(a, b).values()),
                                                          cc.check_explicit_s(a, b)))
        for n in (2, 3):
            _check(items, f"cocycle/explicit-p/n={n}/{tag}",
                   lambda n=n: (all(cc.check_p_relation(a, b, n).values()), cc.check_p_relation(a, b, n)))

        zeta = cc.pushforward(t, 3)
        sigma = _nontrivial(zeta.field)
        _check(items, f"cocycle/perturbation/{tag}",
               lambda: not cc.is_cocycle(cc.corrupt(zeta, sigma)), character=sigma.label)
    return items


# ============================================================================
# QUADRATIC FORMS
# ============================================================================

def _on_base(m: np.ndarray) -> np.ndarray:
    base_field = NumberField(mx.field_of(m).base)
    return mx.entrywise(lambda v: base_field(v.base_value()), m)


def transported_jnab(n: int, a, b, seed: int) -> np.ndarray:
    """J_n carried through the Hilbert 90 solution of tau_n o T^{a,b}, on the base field"""
    zeta = cc.pushforward(cc.t_cocycle(a, b), n)
    sol = cc.hilbert90_solve(zeta, seed=seed)
    form = cc.transported_form(sol.s, j_form(n, zeta.field))
    if not cc.is_galois_invariant(form):
        raise VerificationFailed(f"transported form for n={n}, (a, b)=({a}, {b}) is not Galois invariant")
    return _on_base(form)


def suite_forms(seed: int, budget: int) -> List[SuiteItem]:
    items: List[SuiteItem] = []
    q = NumberField(BaseField())

    def diagonal_witness():
        form = mx.matrix([[0, 1], [1, 0]], q)
        d, c = fm.diagonalize(form)
        return mx.equal(c.T @ form @ c, d)
    _check(items, "forms/diagonalize/hyperbolic-plane", diagonal_witness)
    _check(items, "forms/equiv/hyperbolic-plane",
           lambda: fm.equiv_quadratic(mx.diag([1, -1], q), mx.diag([2, -2], q)))
    _check(items, "forms/equiv/distinct", lambda: not fm.equiv_quadratic(mx.diag([1, 1], q), mx.diag([1, -1], q)))

    for n in (5, 7):
        for a, b in FORM_PARAMS:
            def matches(n=n, a=a, b=b):
                lhs = fm.normalize(transported_jnab(n, a, b, seed))
                rhs = fm.normalize(fm.jnab(n, a, b))
                return fm.equiv_quadratic(lhs, rhs)
            _check(items, f"forms/transported-jnab/n={n}/a={a},b={b}", matches)

    primes = list(primerange(3, settings.HASSE_PRIME_BOUND + 1))
    for n in (5, 7, 9, 11):
        for a, b in FORM_PARAMS:
            def closed_form(n=n, a=a, b=b):
                normalized = fm.normalize(fm.jnab(n, a, b))
                entries = [normalized[i, i].base_value() for i in range(n)]
                base = BaseField()
                bad = [
                    str(p) for p in primes + [RealPlace()]
                    if fm.hasse_symbol(entries, p, base) != fm.hasse_closed_form(n, a, b, p, base)
                ]
                return not bad, {"mismatches": bad}
            _check(items, f"forms/hasse-closed-form/n={n}/a={a},b={b}", closed_form, primes=len(primes) + 1)
            _check(items, f"forms/disc-class/n={n}/a={a},b={b}", lambda n=n, a=a, b=b: fm.disc_classes_agree(n, a, b))

    _check(items, "forms/square-product",
           lambda: all(fm.square_product_check(n) for n in range(5, 102, 2)), bound=101)
    for a, b in FORM_PARAMS:
        _check(items, f"forms/reciprocity/j5/a={a},b={b}", lambda a=a, b=b: fm.reciprocity_check(fm.jnab(5, a, b)) == 1)
    return items


# ============================================================================
# SYMPLECTIC AND SL IDENTITIES
# ============================================================================

def suite_sp_identities(seed: int, budget: int) -> List[SuiteItem]:
    items: List[SuiteItem] = []
    a, b = 2, 3
    for n in (2, 3, 4):
        def hermitian(n=n):
            m, algebra = fm.jstar(n, a, b)
            return fm.is_bar_hermitian(m, algebra)
        _check(items, f"sp/jstar-hermitian/n={n}", hermitian)

        def n_diagonal(n=n):
            got = fm.n_diagonalize(n, a, b)
            expected = fm.jstar_expected_diagonal(n)
            return all(x == e for x, e in zip(got, expected)), {"expected": expected}
        _check(items, f"sp/n-diagonal/n={n}", n_diagonal)

    for pa, pb, _ in COCYCLE_PARAMS:
        for n in (2, 3):
            _check(items, f"sp/eta-chi-commute/n={n}/a={pa},b={pb}",
                   lambda n=n, pa=pa, pb=pb: cc.eta_commutes_with_chi(pa, pb, n))
    return items


def suite_sl_identities(seed: int, budget: int) -> List[SuiteItem]:
    items: List[SuiteItem] = []
    for a, b, d in COCYCLE_PARAMS:
        _check(items, f"sl/outer-axiom/n=3/a={a},b={b},d={d}",
               lambda a=a, b=b, d=d: cc.is_cocycle(cc.compatible_cocycle(a, b, 3, "outer", d)))

    def sigma_identity():
        # J_5^{2,3} over Q(sqrt 5): determinant is a square, no place with d < 0
        field = NumberField(BaseField(), [5])
        form = mx.coerce(fm.jnab(5, 2, 3), field)
        return fm.hermitian_equiv(form, fm.hermitian_identity(5, "sigma", field), "sigma")
    _check(items, "sl/sigma-hermitian/j5-vs-identity", sigma_identity, d=5)

    def quaternion_identity(n: int):
        m, algebra = fm.jstar(n, -1, -3)
        h = fm.negate(fm.quaternion_matrix(m, algebra))
        return fm.hermitian_equiv(h, fm.hermitian_identity(n, "quaternion", algebra), "quaternion")
    for n in (2, 3):
        _check(items, f"sl/quaternion-hermitian/minus-jstar/n={n}", lambda n=n: quaternion_identity(n),
               algebra="(-1, -3)")
    return items


# ============================================================================
# G2
# ============================================================================

def norm_one_quaternions() -> List:
    """Ten norm-one elements of (2, 3 / Q)"""
    algebra = QuatAlgebra(BaseField(), 2, 3)
    x = algebra(3, 2, 0, 0)
    y = algebra(2, 0, 1, 0)
    return [x, y, x * y, y * x, x * x, y * y, x.conj(), y.conj(), x * y * x, (x * y).conj()]


def suite_g2(seed: int, budget: int) -> List[SuiteItem]:
    items: List[SuiteItem] = []
    q = NumberField(BaseField())
    for name, m in (("S", [[0, -1], [1, 0]]), ("T", [[1, 1], [0, 1]])):
        _check(items, f"g2/tau7-preserves-cross/{name}",
               lambda m=m: g2.preserves_cross(tau(7, mx.matrix(m, q)), g2.untwisted_cross))

    rng = np.random.default_rng(seed)
    a_f, b_f = q(2), q(3)

    def vec():
        return mx.vector([int(c) for c in rng.integers(-5, 6, size=g2.DIM)], q)

    def product(x, y):
        return g2.cross(a_f, b_f, x, y)

    def alternating_bilinear():
        for _ in range(2 * settings.SUITE_SAMPLES):
            x, y, z = vec(), vec(), vec()
            if any(product(x, x)):
                return False
            lhs = product(x + y, z)
            rhs = product(x, z) + product(y, z)
            if not all(u == v for u, v in zip(lhs, rhs)):
                return False
        return True
    _check(items, "g2/cross/alternating-bilinear", alternating_bilinear, pairs=2 * settings.SUITE_SAMPLES)

    for s, t in (("2", "3"), ("5", "1/7"), ("-1", "4")):
        _check(items, f"g2/torus/{s},{t}",
               lambda s=s, t=t: g2.in_g2(1, 1, g2.torus_element(s, t, q), twisted=False))

    for i, x in enumerate(norm_one_quaternions()):
        _check(items, f"g2/image/{i}", lambda x=x: g2.in_g2(2, 3, g2.g2_image(x)),
               quaternion=[format_fraction(c) for c in x.coeffs])

    for qq in (3, 5, 7, 9):
        p = 3 if qq == 9 else qq
        _check(items, f"g2/phi-automorphism/q={qq}",
               lambda qq=qq: all(r.is_automorphism and r.preserves_norm
                                 for r in (g2.oct_aut_phi(qq, a) for a in range(qq))))
        _check(items, f"g2/trace-surjective/q={qq}",
               lambda qq=qq: (g2.trace_surjective(qq), {"table": {str(k): v for k, v in g2.trace_table(qq).items()}}))
        _check(items, f"g2/trace-affine/q={qq}",
               lambda qq=qq, p=p: (g2.trace_affine_form(qq) == (2 % p, 3 % p), {"form": list(g2.trace_affine_form(qq))}))
    return items


# ============================================================================
# BENDING
# ============================================================================

def bend_fixture(n: int, multipliers: Sequence[str]) -> Tuple[bd.SurfaceRep, bd.BendingDatum, bd.SurfaceRep]:
    """(Fuchsian lift, bending datum, bent rep) for the genus-2 surface rep"""
    lift = bd.fuchsian_lift(n, surface_rep())
    datum = bd.make_bending_element(lift, 1, multipliers)
    return lift, datum, bd.bend(lift, datum)


def tower_bend_fixture() -> Tuple[bd.SurfaceRep, bd.BendingDatum, bd.SurfaceRep]:
    """Genus-2 lift over Q(sqrt 2) bent by tau_3 of diag(1 + sqrt 2, sqrt 2 - 1)"""
    field = NumberField(BaseField(), [2])
    lift = bd.fuchsian_lift(3, surface_rep(field))
    mults = [field.element([3, 2]), field.one(), field.element([3, -2])]
    datum = bd.make_bending_element(lift, 1, mults)
    return lift, datum, bd.bend(lift, datum)


def suite_bend(seed: int, budget: int) -> List[SuiteItem]:
    items: List[SuiteItem] = []

    def identity_bend():
        lift, _, bent = bend_fixture(3, ["1", "1", "1"])
        return bent.same_images(lift)
    _check(items, "bend/identity", identity_bend)

    for i, (expected, mults) in enumerate(VERDICT_FIXTURES):
        n = len(mults)

        def classify(n=n, mults=mults, expected=expected):
            lift, datum, bent = bend_fixture(n, mults)
            fixed = bd.relator_holds(bent) and mx.equal(bent.gamma(1), lift.gamma(1))
            verdict = bd.zariski_classify(bent, datum, n)
            forms = bd.invariant_form_solver(bent.images)
            agrees = bd.verdict_agrees(verdict, forms, n)
            detail = {"verdict": verdict, "forms": forms.kind, "forms_dim": forms.dimension}
            return fixed and agrees and verdict == expected, detail
        _check(items, f"bend/verdict/{i:02d}/n={n}", classify, expected=expected, multipliers=list(mults))

    for n in (3, 4):
        def centralizer(n=n):
            lift = bd.fuchsian_lift(n, surface_rep())
            dim = len(bd.centralizer_basis(lift.gamma(1)))
            return dim == n, {"dimension": dim}
        _check(items, f"bend/centralizer/n={n}", centralizer)

    def composed():
        lift, datum, _ = bend_fixture(3, SEPARATION_MULTIPLIERS)
        twice = bd.double_bend(lift, datum, datum.power(2))
        return bd.relator_holds(twice)
    _check(items, "bend/double-bend", composed)

    def rational_trace_field():
        _, _, bent = bend_fixture(3, SEPARATION_MULTIPLIERS)
        tf = rx.trace_field(bent)
        return tf.equals_base and tf.stable_from == 1, {"label": tf.label, "history": tf.history}
    _check(items, "bend/trace-field/rational", rational_trace_field)

    def tower_trace_field():
        _, _, bent = tower_bend_fixture()
        tf = rx.trace_field(bent)
        ok = tf.label == "Q(sqrt 2)" and not tf.equals_base and tf.stable_from == 2
        return ok, {"label": tf.label, "history": tf.history}
    _check(items, "bend/trace-field/tower", tower_trace_field)

    def relator_rejected():
        field = NumberField(BaseField())
        a, b, _, _ = surface_images(field)
        try:
            bd.rep_from_images(bd.SurfacePresentation(2, 1), [a, b, a, b])
        except RelatorViolation:
            return True
        return False
    _check(items, "bend/relator-violation", relator_rejected)
    return items


# ============================================================================
# SEPARATION
# ============================================================================

def suite_separation(seed: int, budget: int) -> List[SuiteItem]:
    items: List[SuiteItem] = []

    def experiment():
        lift, datum, _ = bend_fixture(3, SEPARATION_MULTIPLIERS)
        result = rx.separation_experiment(lift, datum, [3, 5, 7], 2, budget, seed)
        rows = {f"{r.prime}/l={r.l}": {"size": r.trace_set_size, "collapsed": r.collapsed,
                                       "exhaustive": r.exhaustive} for r in result.rows}
        return result, rows

    result, rows = experiment()
    _check(items, "separation/collapse", lambda: (result.collapse_holds, {"rows": rows}))
    _check(items, "separation/witnessed", lambda: result.separation_witnessed)

    for q in (3, 5):
        _check(items, f"separation/phi3-not-surjective/q={q}",
               lambda q=q: (not rx.phi_image(3, q).is_surjective, {"image": rx.phi_image(3, q).image}))

    for q in (3, 5, 7):
        _check(items, f"separation/sl2-traces/q={q}", lambda q=q: rx.sl2_trace_set(q) == list(range(q)))
        for n in (2, 3, 4, 5):
            _check(items, f"separation/phi-image/n={n}/q={q}",
                   lambda n=n, q=q: rx.tau_trace_set(n, q) == rx.phi_image(n, q).image)
    return items


# ============================================================================
# RECIPROCITY
# ============================================================================

def suite_reciprocity(seed: int, budget: int) -> List[SuiteItem]:
    items: List[SuiteItem] = []
    rng = np.random.default_rng(seed)
    pairs = []
    while len(pairs) < settings.SUITE_SAMPLES:
        a, b = (int(v) for v in rng.integers(-60, 61, size=2))
        if a and b:
            pairs.append((a, b))

    def product_formula():
        bad = [[a, b] for a, b in pairs if reciprocity_product(a, b, BaseField()) != 1]
        return not bad, {"failures": bad}
    _check(items, "reciprocity/product-formula", product_formula, pairs=len(pairs))

    base = BaseField(2)
    for i, (a, b) in enumerate(ADMISSIBLE_PARAMS):
        def admissible(a=a, b=b):
            form = mx.diag(fm.jnab_entries(5, a, b, base), NumberField(base))
            verdict = fm.fuchsian_admissibility(form)
            return verdict.parity_even and len(verdict.target) % 2 == 0, {
                "indefinite_place": verdict.indefinite_place, "target": verdict.target,
            }
        _check(items, f"reciprocity/admissible/{i}", admissible, a=a, b=b)
    return items


SUITES: Dict[str, Callable[[int, int], List[SuiteItem]]] = {
    "symrep": suite_symrep,
    "cocycle": suite_cocycle,
    "forms": suite_forms,
    "sp-identities": suite_sp_identities,
    "sl-identities": suite_sl_identities,
    "g2": suite_g2,
    "bend": suite_bend,
    "separation": suite_separation,
    "reciprocity": suite_reciprocity,
}
