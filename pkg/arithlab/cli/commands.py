# command handlers
# each handler turns parsed arguments into a Report; run() converts errors into exit codes
# and only writes a report when the handler finished

import argparse
import logging
import traceback
from typing import Callable, Dict, List, Optional

from arithlab.core.errors import ArithLabError, InputError, UnknownSuite
from arithlab.core.reports import build_report, write_report
from arithlab.models.fixtures import load_form, load_surface
from arithlab.models.schemas import (
    AdmissibilityReport,
    BendReport,
    CocycleSolveReport,
    EquivalenceReport,
    FormInvariantsReport,
    InvariantFormsReport,
    JnabReport,
    PhiImageReport,
    Report,
    RunConfig,
    SeparationReport,
    SeparationRowReport,
    SuiteItem,
    TraceFieldReport,
)
from arithlab.services import bend as bd
from arithlab.services import cocycle as cc
from arithlab.services import forms as fm
from arithlab.services import redux as rx
from arithlab.services.numfield import BaseField
from arithlab.services.suites import SUITES
from arithlab.services.symrep import j_form
from arithlab.utils import matrices as mx
from arithlab.utils.serialize import decode_elem, encode_elem, encode_field, encode_matrix, encode_table

logger = logging.getLogger(__name__)


def run_config(args: argparse.Namespace, fixtures: List[str] = (), **options) -> RunConfig:
    return RunConfig(
        seed=args.seed,
        budget=args.budget,
        fixtures=list(fixtures),
        out=args.out,
        options={k: v for k, v in sorted(options.items()) if v is not None},
    )


def invariants_report(q) -> FormInvariantsReport:
    inv = fm.invariants(q)
    return FormInvariantsReport(
        base=inv.base.m,
        rank=inv.rank,
        det=encode_elem(inv.det),
        disc_class=encode_elem(inv.disc_class),
        signatures={label: list(sig) for label, sig in sorted(inv.signatures.items())},
        hasse=dict(sorted(inv.hasse.items())),
    )


# ============================================================================
# VERIFY
# ============================================================================

def cmd_verify(args: argparse.Namespace) -> Report:
    """Run one or more verification suites; "all" runs every suite"""
    names = list(SUITES) if "all" in args.suite else list(dict.fromkeys(args.suite))
    unknown = [name for name in names if name not in SUITES]
    if unknown:
        raise UnknownSuite(f"unknown suite(s) {unknown}; choose from {sorted(SUITES)}")
    items: List[SuiteItem] = []
    for name in names:
        logger.info(f"running suite {name}")
        found = SUITES[name](args.seed, args.budget)
        failed = sum(1 for item in found if not item.passed)
        logger.info(f"suite {name}: {len(found) - failed}/{len(found)} passed")
        items.extend(found)
    return build_report("verify", run_config(args, suites=sorted(names)), items)


# ============================================================================
# FORMS
# ============================================================================

def cmd_forms(args: argparse.Namespace) -> Report:
    if args.action == "invariants":
        fixture, blob = load_form(_require(args.form, "--form"))
        result = invariants_report(fixture.build())
        return build_report("forms invariants", run_config(args, [args.form]),
                            result=result.model_dump(mode="json"), blobs=[blob], passed=True)

    if args.action == "equiv":
        lhs, lhs_blob = load_form(_require(args.lhs, "--lhs"))
        rhs, rhs_blob = load_form(_require(args.rhs, "--rhs"))
        q1, q2 = lhs.build(), rhs.build()
        result = EquivalenceReport(
            equivalent=fm.equiv_quadratic(q1, q2),
            lhs=invariants_report(q1),
            rhs=invariants_report(q2),
        )
        return build_report("forms equiv", run_config(args, [args.lhs, args.rhs]),
                            result=result.model_dump(mode="json"), blobs=[lhs_blob, rhs_blob], passed=True)

    if args.action == "jnab":
        base = BaseField(args.field)
        n, a, b = _require(args.n, "--n"), _require(args.a, "--a"), _require(args.b, "--b")
        q = fm.jnab(n, a, b, base)
        result = JnabReport(
            n=n, a=a, b=b,
            entries=[encode_elem(q[i, i]) for i in range(n)],
            invariants=invariants_report(q),
        )
        return build_report("forms jnab", run_config(args, field=args.field, n=n, a=a, b=b),
                            result=result.model_dump(mode="json"), passed=True)

    if args.action == "admissible":
        fixture, blob = load_form(_require(args.form, "--form"))
        verdict = fm.fuchsian_admissibility(fixture.build())
        result = AdmissibilityReport(
            indefinite_place=verdict.indefinite_place,
            finite_set=verdict.finite_set,
            target=verdict.target,
            parity_even=verdict.parity_even,
        )
        return build_report("forms admissible", run_config(args, [args.form]),
                            result=result.model_dump(mode="json"), blobs=[blob], passed=verdict.parity_even)

    raise InputError(f"unknown forms action {args.action!r}")


# ============================================================================
# COCYCLES
# ============================================================================

def cmd_cocycle(args: argparse.Namespace) -> Report:
    """
    Solve Hilbert 90 for tau_n o T^{a,b} (odd n, kind inner) or for the chi lift (kind chi)

    Inner solutions also report J_n transported to the base field.
    """
    base = BaseField(args.field)
    n, a, b = _require(args.n, "--n"), _require(args.a, "--a"), _require(args.b, "--b")
    if args.kind == "chi":
        zeta = cc.chi_lift(a, b, n, base)
    else:
        if n % 2 == 0:
            raise InputError("tau_n o T is projective for even n; use --kind chi")
        zeta = cc.pushforward(cc.t_cocycle(a, b, base), n)
    sol = cc.hilbert90_solve(zeta, seed=args.seed)
    transported = None
    if args.kind != "chi":
        form = cc.transported_form(sol.s, j_form(n, zeta.field))
        transported = encode_matrix(form)
    result = CocycleSolveReport(
        name=zeta.name,
        field=encode_field(zeta.field),
        table=encode_table(zeta.table),
        s=encode_matrix(sol.s),
        attempts=sol.attempts,
        relation_checked=sol.relation_checked,
        transported_form=transported,
    )
    options = dict(field=args.field, n=n, a=a, b=b, kind=args.kind)
    return build_report("cocycle solve", run_config(args, **options),
                        result=result.model_dump(mode="json"), passed=sol.relation_checked)


# ============================================================================
# BENDING
# ============================================================================

def _datum(fixture, rep: bd.SurfaceRep, multipliers: Optional[List[str]]) -> bd.BendingDatum:
    field = rep.field
    if multipliers:
        mults = [decode_elem(field, x) for x in multipliers]
    else:
        mults = fixture.build_multipliers(field)
    return bd.make_bending_element(rep, fixture.separating_index, mults, fixture.place.build())


def cmd_bend(args: argparse.Namespace) -> Report:
    fixture, blob = load_surface(_require(args.fixture, "--fixture"))
    rep = fixture.build()
    datum = _datum(fixture, rep, args.multipliers)
    bent = bd.bend(rep, datum)
    h = datum.h
    result = BendReport(
        n=rep.n,
        separating_index=h,
        multipliers=[encode_elem(mu) for mu in datum.multipliers],
        bending_matrix=encode_matrix(datum.matrix),
        relator_holds=bd.relator_holds(bent),
        gamma_fixed=mx.equal(bent.gamma(h), mx.coerce(rep.gamma(h), bent.field)),
        bent_fixture={
            "genus": fixture.genus,
            "separating_index": h,
            "field": encode_field(bent.field),
            "images": [encode_matrix(m) for m in bent.images],
        },
    )
    passed = result.relator_holds and result.gamma_fixed
    if args.classify:
        verdict = bd.zariski_classify(bent, datum, rep.n)
        forms = bd.invariant_form_solver(bent.images)
        result.verdict = verdict
        result.invariant_forms = InvariantFormsReport(
            dimension=forms.dimension,
            symmetric=forms.symmetric,
            alternating=forms.alternating,
            kind=forms.kind,
            cross_invariant=forms.cross_invariant,
        )
        result.agrees = bd.verdict_agrees(verdict, forms, rep.n)
        tf = rx.trace_field(bent)
        result.trace_field = TraceFieldReport(
            label=tf.label,
            equals_base=tf.equals_base,
            word_length=len(tf.history),
            stable_from=tf.stable_from,
            history=tf.history,
        )
        passed = passed and result.agrees
    options = dict(multipliers=args.multipliers, classify=args.classify)
    return build_report("bend run", run_config(args, [args.fixture], **options),
                        result=result.model_dump(mode="json"), blobs=[blob], passed=passed)


# ============================================================================
# SEPARATION
# ============================================================================

def cmd_separate(args: argparse.Namespace) -> Report:
    fixture, blob = load_surface(_require(args.fixture, "--fixture"))
    rep = fixture.build()
    datum = _datum(fixture, rep, args.multipliers)
    primes = _parse_primes(args.primes)
    out = rx.separation_experiment(rep, datum, primes, args.max_power, args.budget, args.seed)
    result = SeparationReport(
        n=out.n,
        rows=[
            SeparationRowReport(
                prime=row.prime, l=row.l, ord_B=row.ord_b,
                trace_set_size=row.trace_set_size, collapsed=row.collapsed,
                exhaustive=row.exhaustive, seed=row.seed if not row.exhaustive else None,
                trace_set=row.trace_set, pushforward=row.pushforward,
                matches_pushforward=row.matches_pushforward,
            )
            for row in out.rows
        ],
        phi_images={
            label: PhiImageReport(n=img.n, q=img.q, image=img.image, is_surjective=img.is_surjective)
            for label, img in sorted(out.phi_images.items())
        },
        collapse_holds=out.collapse_holds,
        separation_witnessed=out.separation_witnessed,
    )
    options = dict(primes=primes, max_power=args.max_power, multipliers=args.multipliers)
    return build_report("separate", run_config(args, [args.fixture], **options),
                        result=result.model_dump(mode="json"), blobs=[blob], passed=out.collapse_holds)


# ============================================================================
# HELPERS
# ============================================================================

def _require(value, flag: str):
    if value is None:
        raise InputError(f"{flag} is required")
    return value


def _parse_primes(text: str) -> List[int]:
    try:
        primes = sorted({int(p) for p in text.split(",") if p.strip()})
    except ValueError as e:
        raise InputError(f"bad prime list {text!r}") from e
    if not primes:
        raise InputError("no primes given")
    return primes


COMMANDS: Dict[str, Callable[[argparse.Namespace], Report]] = {
    "verify": cmd_verify,
    "forms": cmd_forms,
    "cocycle": cmd_cocycle,
    "bend": cmd_bend,
    "separate": cmd_separate,
}


def run(args: argparse.Namespace) -> int:
    """
    Dispatch a parsed command line

    Returns:
        0 when the report passed, 1 on a failed verification, 2 on bad input,
        3 on an unsupported case
    """
    handler = COMMANDS[args.command]
    try:
        report = handler(args)
    except ArithLabError as e:
        logger.error(f"{type(e).__name__}: {e}")
        logger.debug(traceback.format_exc())
        return e.exit_code
    write_report(report, args.out)
    if not report.passed:
        logger.error(f"{args.command}: verification failed")
        return 1
    return 0
