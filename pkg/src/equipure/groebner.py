"""Buchberger's algorithm and multivariate division.

The pair queue uses the normal selection strategy (smallest lcm in the
active order, ties broken by index), with Buchberger's two classical
criteria: the coprime leading-term criterion and the chain criterion.
Output is always the unique reduced Groebner basis, sorted by leading
monomial, so repeated runs are byte-identical.
"""

from __future__ import annotations

from .orders import exp_coprime, exp_div, exp_divides, exp_lcm, exp_mul
from .poly import Polynomial, PolynomialRing, poly_from_dict


def normal_form(f: Polynomial, basis, order, track=False):
    """Remainder of f under multivariate division by `basis`.

    Fully reduced: no remainder term is divisible by any leading term of the
    basis. With track=True also returns quotients q with
    f == sum(q_i * g_i) + r exactly.
    """
    ring = f.ring
    fld = ring.field
    if not basis:
        return (f, []) if track else f
    ordered = sorted(
        (i for i in range(len(basis)) if not basis[i].is_zero()),
        key=lambda i: (order.key(basis[i].leading(order)[0]), basis[i].terms),
    )
    if not ordered:
        return (f, [ring.zero() for _ in basis]) if track else f
    lead = {i: basis[i].leading(order) for i in ordered}
    work = dict(f.terms)
    remainder = {}
    quotients = [dict() for _ in basis] if track else None
    while work:
        exp = max(work, key=order.key)
        coeff = work.pop(exp)
        if not coeff:
            continue
        hit = None
        for i in ordered:
            lexp, lcoeff = lead[i]
            if exp_divides(lexp, exp):
                hit = (i, lexp, lcoeff)
                break
        if hit is None:
            remainder[exp] = fld.add(remainder.get(exp, fld.zero), coeff)
            continue
        i, lexp, lcoeff = hit
        mult_exp = exp_div(exp, lexp)
        mult_coeff = fld.div(coeff, lcoeff)
        if track:
            q = quotients[i]
            q[mult_exp] = fld.add(q.get(mult_exp, fld.zero), mult_coeff)
        for e, c in basis[i].terms:
            if e == lexp:
                continue
            ne = exp_mul(e, mult_exp)
            delta = fld.mul(c, mult_coeff)
            cur = work.get(ne, fld.zero)
            new = fld.sub(cur, delta)
            if new:
                work[ne] = new
            elif ne in work:
                del work[ne]
    r = poly_from_dict(ring, remainder)
    if track:
        return r, [poly_from_dict(ring, q) for q in quotients]
    return r


def s_polynomial(f: Polynomial, g: Polynomial, order) -> Polynomial:
    fe, fc = f.leading(order)
    ge, gc = g.leading(order)
    lcm = exp_lcm(fe, ge)
    fld = f.ring.field
    left = f.term_mul(exp_div(lcm, fe), fld.inv(fc))
    right = g.term_mul(exp_div(lcm, ge), fld.inv(gc))
    return left - right


def buchberger(generators, order, ring: PolynomialRing = None,
               strategy: str = "normal"):
    """The unique reduced Groebner basis of the given generators.

    `strategy` picks the next pair: "normal" takes the smallest lcm in the
    active order; "sugar" orders by the classical sugar degree first. The
    output basis is identical either way (it is the reduced basis); only the
    route differs.
    """
    if strategy not in ("normal", "sugar"):
        raise ValueError(f"unknown selection strategy {strategy!r}")
    gens = [g for g in generators if not g.is_zero()]
    if not gens:
        return []
    ring = gens[0].ring if ring is None else ring
    basis = list(gens)
    sugars = [g.total_degree() for g in basis]
    pending = set()
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            pending.add((i, j))
    leads = [g.leading(order)[0] for g in basis]

    def pair_sugar(i, j):
        lcm = exp_lcm(leads[i], leads[j])
        return max(sugars[i] + sum(lcm) - sum(leads[i]),
                   sugars[j] + sum(lcm) - sum(leads[j]))

    def pair_sort_key(pair):
        i, j = pair
        lcm_key = order.key(exp_lcm(leads[i], leads[j]))
        if strategy == "sugar":
            return (pair_sugar(i, j), lcm_key, i, j)
        return (lcm_key, i, j)

    while pending:
        i, j = min(pending, key=pair_sort_key)
        pending.discard((i, j))
        li, lj = leads[i], leads[j]
        if exp_coprime(li, lj):
            continue
        lcm_ij = exp_lcm(li, lj)
        chain = False
        for k in range(len(basis)):
            if k in (i, j):
                continue
            if not exp_divides(leads[k], lcm_ij):
                continue
            if (min(i, k), max(i, k)) in pending:
                continue
            if (min(j, k), max(j, k)) in pending:
                continue
            chain = True
            break
        if chain:
            continue
        s_sugar = pair_sugar(i, j)
        s = s_polynomial(basis[i], basis[j], order)
        r = normal_form(s, basis, order)
        if r.is_zero():
            continue
        basis.append(r)
        leads.append(r.leading(order)[0])
        sugars.append(max(s_sugar, r.total_degree()))
        new = len(basis) - 1
        for k in range(new):
            pending.add((k, new))
    return reduce_basis(basis, order)


def reduce_basis(basis, order):
    """Inter-reduce to the unique reduced (auto-reduced, monic) basis."""
    basis = [g for g in basis if not g.is_zero()]
    if not basis:
        return []
    # A nonzero constant makes it the unit ideal.
    for g in basis:
        if g.is_constant():
            return [g.ring.one()]
    leads = [g.leading(order)[0] for g in basis]
    keep = []
    for i in range(len(basis)):
        dominated = False
        for j in range(len(basis)):
            if i == j:
                continue
            if exp_divides(leads[j], leads[i]) and (
                leads[j] != leads[i] or j < i
            ):
                dominated = True
                break
        if not dominated:
            keep.append(i)
    minimal = [basis[i] for i in keep]
    reduced = []
    for i, g in enumerate(minimal):
        others = [h for j, h in enumerate(minimal) if j != i]
        r = normal_form(g, others, order) if others else g
        if not r.is_zero():
            reduced.append(r.monic(order))
    reduced.sort(key=lambda g: (order.key(g.leading(order)[0]), g.terms))
    return reduced


def is_groebner(basis, order) -> bool:
    """Direct Buchberger-criterion check: every S-polynomial reduces to 0."""
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            s = s_polynomial(basis[i], basis[j], order)
            if not normal_form(s, basis, order).is_zero():
                return False
    return True


def leading_exponents(basis, order):
    return [g.leading(order)[0] for g in basis]
