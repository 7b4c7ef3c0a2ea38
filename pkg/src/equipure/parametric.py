"""Groebner computations with coefficients in a quotient domain k[params]/q.

This is the engine behind two features:

  * generic fibers: the fiber of a morphism over the generic point of a
    component V(q) lives over the fraction field of k[params]/q. Rather than
    implementing fraction-field arithmetic, reductions run fraction-free over
    the domain and every leading coefficient that would have been inverted is
    logged as a denominator, each one certified nonzero modulo q;
  * quasi-finite strata: the same loop run with branching instead of
    certification. When a leading coefficient is neither zero modulo the
    branch constraints nor assumed nonzero, the computation forks on the two
    cases, Suzuki--Sato style.

Coefficients are stored as canonical normal forms modulo the constraint
ideal, so all outputs are byte-stable.
"""

from __future__ import annotations

from .groebner import normal_form
from .ideals import IdealHandle
from .orders import GREVLEX, exp_coprime, exp_div, exp_divides, exp_lcm, exp_mul
from .poly import Polynomial, PolynomialRing, poly_from_dict


class ParamBudgetError(Exception):
    pass


class BranchNeeded(Exception):
    def __init__(self, coeff):
        self.coeff = coeff


class CoeffDomain:
    """k[params]/q with normal-form representatives."""

    def __init__(self, param_ring: PolynomialRing, constraint: IdealHandle):
        self.ring = param_ring
        self.constraint = constraint
        self._gb = constraint.groebner()

    def reduce(self, f: Polynomial) -> Polynomial:
        if not self._gb:
            return f
        return normal_form(f, self._gb, GREVLEX)

    def is_zero(self, f: Polynomial) -> bool:
        return self.reduce(f).is_zero()

    def one(self) -> Polynomial:
        return self.ring.one()

    def __repr__(self):
        return f"{self.ring} mod {self.constraint}"


class ParamPoly:
    """Polynomial in the main variables with CoeffDomain coefficients."""

    __slots__ = ("main", "domain", "terms")

    def __init__(self, main: PolynomialRing, domain: CoeffDomain, terms):
        self.main = main
        self.domain = domain
        self.terms = dict(terms)

    @classmethod
    def build(cls, main, domain, raw_terms):
        acc = {}
        for exp, coeff in raw_terms:
            exp = tuple(exp)
            acc[exp] = acc[exp] + coeff if exp in acc else coeff
        out = {}
        for exp, coeff in acc.items():
            red = domain.reduce(coeff)
            if not red.is_zero():
                out[exp] = red
        return cls(main, domain, out)

    def is_zero(self):
        return not self.terms

    def renormalize(self, domain=None):
        domain = domain or self.domain
        return ParamPoly.build(self.main, domain, self.terms.items())

    def leading(self, order):
        exp = max(self.terms, key=order.key)
        return exp, self.terms[exp]

    def sub(self, other):
        acc = dict(self.terms)
        for e, c in other.terms.items():
            acc[e] = acc[e] - c if e in acc else -c
        return ParamPoly.build(self.main, self.domain, acc.items())

    def coeff_mul(self, c: Polynomial):
        return ParamPoly.build(
            self.main, self.domain, ((e, k * c) for e, k in self.terms.items())
        )

    def term_mul(self, exp, c: Polynomial):
        return ParamPoly.build(
            self.main,
            self.domain,
            ((exp_mul(e, exp), k * c) for e, k in self.terms.items()),
        )

    def sorted_terms(self, order=GREVLEX):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                f"{self.main.vars[i]}^{k}" if k > 1 else self.main.vars[i]
                for i, k in enumerate(e)
                if k
            )
            cs = str(c)
            if mono:
                bits.append(f"({cs})*{mono}" if not c.is_constant() or cs != "1" else mono)
            else:
                bits.append(f"({cs})")
        return " + ".join(bits)


def split_poly(f: Polynomial, main: PolynomialRing, domain: CoeffDomain,
               main_idx, param_idx) -> ParamPoly:
    """View f in k[all vars] as a ParamPoly: main-variable exponents carry
    param-variable sub-monomials into the coefficients."""
    raw = []
    for e, c in f.terms:
        mexp = tuple(e[i] for i in main_idx)
        pexp = tuple(e[i] for i in param_idx)
        raw.append((mexp, Polynomial(domain.ring, ((pexp, c),))))
    return ParamPoly.build(main, domain, raw)


def join_poly(pp: ParamPoly, combined: PolynomialRing, main_idx, param_idx) -> Polynomial:
    """Inverse of split_poly into the combined ring."""
    acc = {}
    n = combined.nvars
    for mexp, coeff in pp.terms.items():
        for pexp, c in coeff.terms:
            e = [0] * n
            for k, i in enumerate(main_idx):
                e[i] = mexp[k]
            for k, i in enumerate(param_idx):
                e[i] = pexp[k]
            acc[tuple(e)] = acc.get(tuple(e), combined.field.zero) + c
    return poly_from_dict(combined, acc)


class DenominatorLog:
    """Deduplicated list of inverted coefficients with nonzero certificates."""

    def __init__(self, domain: CoeffDomain):
        self.domain = domain
        self.entries = []
        self._seen = set()

    def log(self, c: Polynomial):
        red = self.domain.reduce(c)
        if red.is_zero():
            raise ValueError("attempted to invert a coefficient that is 0 mod q")
        if red.is_constant():
            return  # field units need no certificate
        key = red.terms
        if key in self._seen:
            return
        self._seen.add(key)
        self.entries.append(red)


def generic_oracle(domain: CoeffDomain, log: DenominatorLog):
    def is_invertible(c: Polynomial) -> bool:
        red = domain.reduce(c)
        if red.is_zero():
            return False
        log.log(red)
        return True

    return is_invertible


def param_normal_form(f: ParamPoly, basis, order, is_invertible):
    """Fraction-free full reduction. The remainder equals (product of logged
    leading coefficients) times the true normal form over the fraction field,
    so zero-ness and leading monomials are faithful."""
    domain = f.domain
    work = dict(f.terms)
    remainder = {}
    live = [g for g in basis if not g.is_zero()]
    leads = [g.leading(order) for g in live]
    sort_idx = sorted(
        range(len(live)), key=lambda i: (order.key(leads[i][0]), repr(leads[i][1]))
    )
    guard = 0
    while work:
        guard += 1
        if guard > 20000:
            raise ParamBudgetError("parametric reduction budget exceeded")
        exp = max(work, key=order.key)
        coeff = work.pop(exp)
        coeff = domain.reduce(coeff)
        if coeff.is_zero():
            continue
        hit = None
        for i in sort_idx:
            lexp, lcoeff = leads[i]
            if exp_divides(lexp, exp) and is_invertible(lcoeff):
                hit = (live[i], lexp, lcoeff)
                break
        if hit is None:
            remainder[exp] = remainder.get(exp, domain.ring.zero()) + coeff
            continue
        g, lexp, lcoeff = hit
        mexp = exp_div(exp, lexp)
        # work <- lcoeff*work - coeff*x^mexp*g ; scale remainder alongside
        for e in list(work):
            work[e] = work[e] * lcoeff
        for e in list(remainder):
            remainder[e] = remainder[e] * lcoeff
        for e, c in g.terms.items():
            if e == lexp:
                continue
            ne = exp_mul(e, mexp)
            delta = c * coeff
            work[ne] = work.get(ne, domain.ring.zero()) - delta
    return ParamPoly.build(f.main, domain, remainder.items())


def param_buchberger(gens, order, domain: CoeffDomain, is_invertible, budget=4000):
    """Fraction-free Buchberger over the coefficient domain. Over the fraction
    field of the domain (or over each point of a stratum where the assumed
    coefficients stay nonzero), the output monomials are those of a Groebner
    basis of the extended ideal."""
    basis = []
    for g in gens:
        g = g.renormalize(domain)
        if not g.is_zero():
            # a leading term is only a leading term where its coefficient is
            # nonzero: certify (or branch on) every basis element's lc
            is_invertible(g.leading(order)[1])
            basis.append(g)
    if not basis:
        return []
    pairs = {(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))}
    steps = 0
    while pairs:
        steps += 1
        if steps > budget:
            raise ParamBudgetError("parametric Buchberger budget exceeded")
        i, j = min(
            pairs,
            key=lambda p: (
                order.key(
                    exp_lcm(basis[p[0]].leading(order)[0], basis[p[1]].leading(order)[0])
                ),
                p,
            ),
        )
        pairs.discard((i, j))
        ei, ci = basis[i].leading(order)
        ej, cj = basis[j].leading(order)
        if exp_coprime(ei, ej):
            continue
        lcm = exp_lcm(ei, ej)
        left = basis[i].term_mul(exp_div(lcm, ei), cj)
        right = basis[j].term_mul(exp_div(lcm, ej), ci)
        s = left.sub(right)
        r = param_normal_form(s, basis, order, is_invertible)
        if r.is_zero():
            continue
        is_invertible(r.leading(order)[1])
        basis.append(r)
        new = len(basis) - 1
        pairs.update((k, new) for k in range(new))
    return _param_minimalize(basis, order)


def _param_minimalize(basis, order):
    leads = [g.leading(order)[0] for g in basis]
    keep = []
    for i in range(len(basis)):
        dominated = False
        for j in range(len(basis)):
            if i == j:
                continue
            if exp_divides(leads[j], leads[i]) and (leads[j] != leads[i] or j < i):
                dominated = True
                break
        if not dominated:
            keep.append(i)
    out = [basis[i] for i in keep]
    out.sort(key=lambda g: (order.key(g.leading(order)[0]), repr(g)))
    return out


# -- derived queries -----------------------------------------------------------


def param_is_unit(basis) -> bool:
    """True when the basis shows the extended ideal is (1): some element is a
    nonzero coefficient times the constant main-monomial."""
    for g in basis:
        if g.is_zero():
            continue
        exp, _ = g.leading(GREVLEX)
        if not any(exp):
            return True
    return False


def param_dim(basis, nmain: int) -> int:
    """Dimension over the fraction field from main-variable leading terms."""
    import itertools

    if param_is_unit(basis):
        return -1
    supports = []
    for g in basis:
        exp = g.leading(GREVLEX)[0]
        supports.append(frozenset(i for i, e in enumerate(exp) if e))
    for size in range(nmain, -1, -1):
        for combo in itertools.combinations(range(nmain), size):
            s = frozenset(combo)
            if all(not sup <= s for sup in supports):
                return size
    return 0


def param_pure_power_witness(basis, var_indices, order):
    """For each requested main variable, the basis element whose leading
    monomial is a pure power of it, if one exists."""
    out = {}
    for g in basis:
        exp = g.leading(order)[0]
        nz = [i for i, e in enumerate(exp) if e]
        if len(nz) == 1 and nz[0] in var_indices and nz[0] not in out:
            out[nz[0]] = (exp, g)
    return out


def param_front_free(basis, front) -> list:
    """Basis elements containing none of the front main variables."""
    out = []
    for g in basis:
        if all(all(e[i] == 0 for i in front) for e in g.terms):
            out.append(g)
    return out
