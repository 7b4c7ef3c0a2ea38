"""Frobenius machinery: bracket powers, the hypersurface F-purity test,
parameter sequences, tight-closure membership evidence and the descent
harness for F-rationality along equidimensional partially-pure maps.

One-sidedness is labeled honestly throughout: a failed membership
c * z^(p^e) in I^[p^e] certifies non-membership in the tight closure only
when c is a genuine test element (unconditional for c = 1 over a regular
ring), and passing all levels up to the bound E is evidence, never a proof,
so the verdict is EvidenceInClosure(E) rather than Member.
"""

from __future__ import annotations

import itertools

from .errors import (
    BadCharacteristic,
    HypothesisFailed,
    NotEquidimensionalBase,
    NotHypersurface,
)
from .groebner import normal_form
from .ideals import IdealHandle, krull_dim, radical_membership
from .poly import Polynomial
from .schemes import (
    Algebra,
    Morphism,
    Point,
    decompose_components,
    is_module_finite,
)

DEFAULT_FROBENIUS_BOUND = 3


class FrobeniusContext:
    def __init__(self, algebra: Algebra):
        if algebra.field.char == 0:
            raise BadCharacteristic("Frobenius context needs characteristic p > 0")
        self.p = algebra.field.char
        self.algebra = algebra

    def __repr__(self):
        return f"FrobeniusContext(p={self.p}, {self.algebra.name or self.algebra.ring})"


def frobenius_poly_power(f: Polynomial, e: int, p: int) -> Polynomial:
    """f^(p^e) over F_p: Frobenius is additive and fixes the prime field, so
    exponent vectors just scale by p^e."""
    if f.ring.field.char != p:
        raise BadCharacteristic("polynomial not over F_p")
    q = p ** e
    return Polynomial(f.ring, tuple((tuple(k * q for k in exp), c) for exp, c in f.terms))


def frobenius_power(handle: IdealHandle, e: int, ctx: FrobeniusContext) -> IdealHandle:
    """The bracket power I^[p^e]: generator-wise p^e-th powers."""
    if e < 0:
        raise ValueError("negative Frobenius exponent")
    if handle.ring.field.char != ctx.p:
        raise BadCharacteristic("ideal not over the context's prime field")
    return IdealHandle(handle.ring,
                       [frobenius_poly_power(g, e, ctx.p) for g in handle.generators])


def _membership_mod(algebra: Algebra, gens, f: Polynomial) -> bool:
    """f in (gens) + relations, inside the quotient ring."""
    handle = IdealHandle(algebra.ring,
                         list(gens) + list(algebra.relations.generators))
    return handle.contains(f)


def fedder_f_pure(defining: Polynomial, m: Point, ctx: FrobeniusContext) -> bool:
    """Hypersurface F-purity at a rational maximal ideal: f^(p-1) must stay
    outside m^[p]. The criterion is the classical hypersurface test, used
    here as the package's F-purity oracle."""
    p = ctx.p
    if defining.ring.field.char != p:
        raise BadCharacteristic("defining polynomial not over the context field")
    if m.kind != "rational-closed":
        raise NotHypersurface("the F-purity test needs a rational maximal ideal")
    if defining.eval_at(m.coords) != defining.ring.field.zero:
        raise NotHypersurface("the point does not lie on the hypersurface")
    ring = defining.ring
    bracket = [
        (ring.var(i) - ring.const(c)) ** p for i, c in enumerate(m.coords)
    ]
    fpow = defining ** (p - 1)
    handle = IdealHandle(ring, bracket)
    return not handle.contains(fpow)


def is_parameter_sequence(algebra: Algebra, elems) -> bool:
    """Dimension-drop test, valid for the equidimensional catenary corpus
    rings: each cut must lower the dimension by exactly one. The base must be
    equidimensional per its component cover."""
    comps, _ = decompose_components(algebra.relations)
    dims = {krull_dim(c) for c in comps}
    if len(dims) > 1:
        raise NotEquidimensionalBase(f"component dimensions {sorted(dims)} differ")
    d0 = krull_dim(algebra.relations)
    gens = list(algebra.relations.generators)
    for i, x in enumerate(elems, start=1):
        gens = gens + [x]
        if krull_dim(IdealHandle(algebra.ring, gens)) != d0 - i:
            return False
    return True


def jacobian_test_candidates(algebra: Algebra, ctx: FrobeniusContext):
    """Multiplier candidates for tight-closure tests on a hypersurface:
    partial derivatives of the defining equation that avoid every component
    of the relation ideal, with 1 prepended when the Jacobian ideal is the
    unit ideal (smooth case) or the ring is a polynomial ring."""
    ring = algebra.ring
    if algebra.relations.is_zero():
        return [ring.one()]
    gb = algebra.relations.groebner()
    if len(gb) != 1:
        raise NotHypersurface("candidates need a principal relation ideal")
    h = gb[0]
    partials = [h.derivative(i) for i in range(ring.nvars)]
    comps, _ = decompose_components(algebra.relations)
    out = []
    jac = IdealHandle(ring, [h] + partials)
    if jac.is_unit():
        out.append(ring.one())
    for d in partials:
        if d.is_zero():
            continue
        if all(not radical_membership(d, c) for c in comps):
            out.append(d)
    return out


class TCVerdict:
    """Outcome of a bounded tight-closure membership probe."""

    MEMBER = "Member"
    NOT_IN_CLOSURE = "NotInClosure"
    EVIDENCE = "EvidenceInClosure"

    def __init__(self, algebra, z, ideal, multiplier, bound, status,
                 witness_exponent=None, levels=()):
        self.algebra = algebra
        self.z = z
        self.ideal = ideal
        self.multiplier = multiplier
        self.bound = bound
        self.status = status
        self.witness_exponent = witness_exponent
        self.levels = tuple(levels)   # (e, in_bracket_power) pairs

    def conclusive(self) -> bool:
        return self.status in (self.MEMBER, self.NOT_IN_CLOSURE)

    def recheck(self, ctx: FrobeniusContext) -> bool:
        """Re-verify the recorded memberships from scratch."""
        if self.status == self.MEMBER:
            return _membership_mod(self.algebra, self.ideal.generators, self.z)
        for e, inside in self.levels:
            bracket = frobenius_power(self.ideal, e, ctx)
            test = self.multiplier * frobenius_poly_power(self.z, e, ctx.p)
            if _membership_mod(self.algebra, bracket.generators, test) != inside:
                return False
        if self.status == self.NOT_IN_CLOSURE:
            return any(e == self.witness_exponent and not inside
                       for e, inside in self.levels)
        return all(inside for _, inside in self.levels)

    def __repr__(self):
        if self.status == self.NOT_IN_CLOSURE:
            return f"TCVerdict(NotInClosure({self.witness_exponent}))"
        if self.status == self.EVIDENCE:
            return f"TCVerdict(EvidenceInClosure({self.bound}))"
        return "TCVerdict(Member)"


def tc_member_certificate(z: Polynomial, ideal: IdealHandle, multiplier: Polynomial,
                          bound: int, ctx: FrobeniusContext) -> TCVerdict:
    """Test c * z^(p^e) in I^[p^e] for e = 1..bound inside the context ring.

    Membership of z itself short-circuits to Member. A failing level is a
    non-membership certificate conditional on the multiplier being a genuine
    test element; all levels passing is explicitly non-conclusive evidence.
    """
    if bound < 1:
        raise ValueError("Frobenius bound must be at least 1")
    if multiplier.is_zero():
        raise ValueError("multiplier must be nonzero")
    alg = ctx.algebra
    if _membership_mod(alg, ideal.generators, z):
        return TCVerdict(alg, z, ideal, multiplier, bound, TCVerdict.MEMBER)
    levels = []
    for e in range(1, bound + 1):
        bracket = frobenius_power(ideal, e, ctx)
        test = multiplier * frobenius_poly_power(z, e, ctx.p)
        inside = _membership_mod(alg, bracket.generators, test)
        levels.append((e, inside))
        if not inside:
            return TCVerdict(alg, z, ideal, multiplier, bound,
                             TCVerdict.NOT_IN_CLOSURE,
                             witness_exponent=e, levels=levels)
    return TCVerdict(alg, z, ideal, multiplier, bound, TCVerdict.EVIDENCE,
                     levels=levels)


# -- F-rationality probing -------------------------------------------------------


class FRationalReport:
    def __init__(self, algebra, verdict, details, witness=None):
        self.algebra = algebra
        self.verdict = verdict   # no-counterexample-at-level-E | NotFRational | inconclusive
        self.details = details
        self.witness = witness

    def clean(self) -> bool:
        return self.verdict.startswith("no-counterexample")

    def __repr__(self):
        return f"FRationalReport({self.verdict})"


def standard_monomials(algebra: Algebra, handle: IdealHandle, cap: int = 40):
    """Monomial basis of the quotient by (handle + relations), degree-capped."""
    from .orders import GREVLEX, exp_divides

    total = IdealHandle(algebra.ring,
                        list(handle.generators) + list(algebra.relations.generators))
    gb = total.groebner()
    if gb and gb[0].is_constant():
        return []
    leads = [g.leading(GREVLEX)[0] for g in gb]
    n = algebra.ring.nvars
    bounds = []
    for i in range(n):
        pure = [exp[i] for exp in leads if all(k == 0 for j, k in enumerate(exp) if j != i)]
        bounds.append(min(pure) if pure else cap)
    out = []
    for exps in itertools.product(*[range(min(b, cap)) for b in bounds]):
        if sum(exps) > cap:
            continue
        if any(exp_divides(lm, exps) for lm in leads):
            continue
        out.append(Polynomial(algebra.ring, ((tuple(exps), algebra.field.one),)))
    out.sort(key=lambda m: GREVLEX.key(m.terms[0][0]))
    return out


def f_rational_probe(algebra: Algebra, sops, bound: int, ctx: FrobeniusContext,
                     degree_cap: int = 40) -> FRationalReport:
    """For each supplied parameter sequence, test every standard monomial of
    the quotient against every multiplier candidate. Never claims
    F-rationality outright; a clean run is bounded evidence only."""
    candidates = jacobian_test_candidates(algebra, ctx)
    if not candidates:
        return FRationalReport(algebra, "inconclusive-no-candidates",
                               [{"reason": "no multiplier candidates survive the component filter"}])
    details = []
    witness = None
    for seq in sops:
        if not is_parameter_sequence(algebra, seq):
            raise HypothesisFailed("parameter-sequence",
                                   f"{[str(s) for s in seq]} fails the dimension-drop test")
        ideal = IdealHandle(algebra.ring, list(seq))
        for z in standard_monomials(algebra, ideal, cap=degree_cap):
            if _membership_mod(algebra, ideal.generators, z):
                continue
            z_record = {"z": str(z), "ideal": [str(s) for s in seq], "runs": []}
            certified_out = False
            evidence_in = None
            for c in candidates:
                verdict = tc_member_certificate(z, ideal, c, bound, ctx)
                z_record["runs"].append({"multiplier": str(c),
                                         "status": verdict.status,
                                         "witness_exponent": verdict.witness_exponent})
                if verdict.status == TCVerdict.NOT_IN_CLOSURE:
                    certified_out = True
                    break
                if verdict.status == TCVerdict.EVIDENCE:
                    evidence_in = verdict
            details.append(z_record)
            if not certified_out and evidence_in is not None and witness is None:
                witness = {"z": str(z), "ideal": [str(s) for s in seq],
                           "verdict": evidence_in}
    if witness is not None:
        return FRationalReport(algebra, "NotFRational", details, witness)
    return FRationalReport(algebra, f"no-counterexample-at-level-{bound}", details)


# -- persistence / contraction spot checks ----------------------------------------


def persistence_spot_check(phi: Morphism, z: Polynomial, ideal: IdealHandle,
                           multiplier: Polynomial, bound: int) -> bool:
    """Push a closure-evidence triple through phi: the image triple must show
    the same evidence at the same bound. Follows from applying phi to each
    membership identity."""
    src_ctx = FrobeniusContext(phi.source)
    tgt_ctx = FrobeniusContext(phi.target)
    up = tc_member_certificate(z, ideal, multiplier, bound, tgt_ctx)
    if up.status == TCVerdict.NOT_IN_CLOSURE:
        return True  # nothing to persist
    image_ideal = IdealHandle(phi.source.ring, [phi.apply(g) for g in ideal.generators])
    down = tc_member_certificate(phi.apply(z), image_ideal, phi.apply(multiplier),
                                 bound, src_ctx)
    return down.status in (TCVerdict.MEMBER, TCVerdict.EVIDENCE)


def contraction_spot_check(phi: Morphism, z: Polynomial, ideal: IdealHandle) -> bool:
    """For split maps: phi(z) in phi(I)*S forces z in I. Checked as exact
    memberships; vacuously true when the image membership fails."""
    image_ideal = IdealHandle(phi.source.ring, [phi.apply(g) for g in ideal.generators])
    img_in = _membership_mod(phi.source, image_ideal.generators, phi.apply(z))
    if not img_in:
        return True
    return _membership_mod(phi.target, ideal.generators, z)


# -- the descent harness -----------------------------------------------------------


class DescentReport:
    def __init__(self, morphism, verdict, source_report, target_report,
                 purity_witness, equidim_report, alarms, assumptions):
        self.morphism = morphism
        self.verdict = verdict
        self.source_report = source_report
        self.target_report = target_report
        self.purity_witness = purity_witness
        self.equidim_report = equidim_report
        self.alarms = list(alarms)
        self.assumptions = list(assumptions)

    def __repr__(self):
        return f"DescentReport({self.verdict})"


def f_rational_descent_check(morphism: Morphism, y: Point, probes, bound: int,
                      source_sops=None, target_sops=None) -> DescentReport:
    """Cross-check F-rationality descent along an equidimensional map that is
    pure at y. Refuses non-equidimensional input; flags a soundness alarm if
    the source probes clean while the target shows a counterexample with all
    hypotheses checked."""
    from .factorization import verify_equidimensional_at
    from .purity import pure_at

    if morphism.source.field.char == 0:
        raise BadCharacteristic("the descent harness runs in characteristic p > 0")
    assumptions = [
        {"status": "assumed",
         "text": "corpus algebras are taken universally catenary (finite type over a field)"},
        {"status": "assumed",
         "text": "multiplier candidates are treated as test elements; negative verdicts are conditional on that"},
    ]
    if not probes:
        raise ValueError("need at least one source probe point")
    report = verify_equidimensional_at(morphism, probes[0], probes=list(probes[1:]))
    if not report.certified():
        raise HypothesisFailed(
            "equidimensionality",
            f"verdict {report.verdict}: descent is false without the locally "
            "equidimensional hypothesis")
    if is_module_finite(morphism):
        witness_pure = pure_at(morphism, y)
        purity_witness = {"route": "module-finite splitting ideal",
                          "pure_at_y": witness_pure}
        if not witness_pure:
            raise HypothesisFailed("partial-purity", "splitting ideal contained in y")
    else:
        raise HypothesisFailed(
            "partial-purity",
            "no purity witness: the harness requires a module-finite map or an "
            "externally supplied strong-purity certificate")

    src_alg, tgt_alg = morphism.source, morphism.target
    src_ctx, tgt_ctx = FrobeniusContext(src_alg), FrobeniusContext(tgt_alg)
    source_sops = source_sops or [_default_sop(src_alg)]
    target_sops = target_sops or [_default_sop(tgt_alg)]
    src_rep = f_rational_probe(src_alg, source_sops, bound, src_ctx)
    tgt_rep = f_rational_probe(tgt_alg, target_sops, bound, tgt_ctx)

    alarms = []
    if src_rep.clean() and not tgt_rep.clean():
        alarms.append(
            "soundness alarm: source probes clean and hypotheses verified, but the "
            "target shows a counterexample")
    verdict = "consistent" if not alarms else "inconsistent"
    return DescentReport(morphism, verdict, src_rep, tgt_rep, purity_witness,
                         report, alarms, assumptions)


def _default_sop(algebra: Algebra):
    """First variable subset passing the parameter-sequence test."""
    d = krull_dim(algebra.relations)
    ring = algebra.ring
    for combo in itertools.combinations(range(ring.nvars), d):
        seq = [ring.var(i) for i in combo]
        try:
            if is_parameter_sequence(algebra, seq):
                return seq
        except NotEquidimensionalBase:
            raise
    raise HypothesisFailed("parameter-sequence", "no variable subset works; supply one")
