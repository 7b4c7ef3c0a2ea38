"""Ideal handles and the operations layered on Groebner bases.

An IdealHandle owns a generator list and a per-order cache of reduced
Groebner bases (write-once per order). Conventions, fixed once so nothing
downstream has to guess: the zero ideal's reduced basis is the empty list,
the unit ideal's is [1], and the unit ideal has dimension -1.
"""

from __future__ import annotations

import itertools

from .groebner import buchberger, normal_form
from .orders import GREVLEX, MonomialOrder, block_order, permuted_grevlex
from .poly import Polynomial, PolynomialRing


class IdealError(Exception):
    pass


class IdealHandle:
    def __init__(self, ring: PolynomialRing, generators):
        self.ring = ring
        gens = []
        for g in generators:
            if isinstance(g, Polynomial):
                if g.ring != ring:
                    raise IdealError("generator from a different ring")
                if not g.is_zero():
                    gens.append(g)
            else:
                raise IdealError("generators must be Polynomials")
        self.generators = tuple(gens)
        self._gb_cache = {}

    def __repr__(self):
        inner = ", ".join(map(str, self.generators)) or "0"
        return f"Ideal({inner})"

    def groebner(self, order: MonomialOrder = GREVLEX):
        basis = self._gb_cache.get(order)
        if basis is None:
            basis = tuple(buchberger(self.generators, order, self.ring))
            self._gb_cache[order] = basis
        return list(basis)

    def groebner_any(self):
        """(basis, order) for membership-style queries.

        Prefers an already-cached basis. Otherwise scans cyclic rotations of
        the grevlex variable priority for a generator set whose leading terms
        are pairwise coprime: such a set is its own Groebner basis by
        Buchberger's first criterion, which sidesteps expensive runs when the
        generators are bracket powers plus a single relation.
        """
        if self._gb_cache:
            order = sorted(self._gb_cache, key=repr)[0]
            return list(self._gb_cache[order]), order
        n = self.ring.nvars
        if len(self.generators) > 1 and n > 1:
            from .orders import exp_coprime

            for shift in range(n):
                perm = tuple((i + shift) % n for i in range(n))
                order = GREVLEX if shift == 0 else permuted_grevlex(perm)
                leads = [g.leading(order)[0] for g in self.generators]
                ok = all(
                    exp_coprime(leads[i], leads[j])
                    for i in range(len(leads))
                    for j in range(i + 1, len(leads))
                )
                if ok:
                    return self.groebner(order), order
        return self.groebner(GREVLEX), GREVLEX

    # -- predicates -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.groebner()

    def is_unit(self) -> bool:
        gb = self.groebner()
        return bool(gb) and gb[0].is_constant()

    def contains(self, f: Polynomial) -> bool:
        if f.is_zero():
            return True
        basis, order = self.groebner_any()
        if not basis:
            return False
        return normal_form(f, basis, order).is_zero()

    def same_ideal(self, other: "IdealHandle") -> bool:
        return all(self.contains(g) for g in other.generators) and all(
            other.contains(g) for g in self.generators
        )

    def with_extra(self, extra) -> "IdealHandle":
        return IdealHandle(self.ring, list(self.generators) + list(extra))


def ideal(ring, gens) -> IdealHandle:
    return IdealHandle(ring, gens)


def ideal_membership(f: Polynomial, handle: IdealHandle) -> bool:
    return handle.contains(f)


# -- elimination -------------------------------------------------------------

def eliminate(handle: IdealHandle, front_vars) -> IdealHandle:
    """Generators of I intersected with k[remaining vars].

    `front_vars` are names or indices of the variables to eliminate; the
    result lives in the subring on the remaining variables.
    """
    ring = handle.ring
    front = _var_indices(ring, front_vars)
    if not front:
        return IdealHandle(ring, handle.generators)
    keep = [i for i in range(ring.nvars) if i not in front]
    sub = PolynomialRing(ring.field, [ring.vars[i] for i in keep])
    basis = handle.groebner(block_order(front))
    out = []
    for g in basis:
        if all(all(e[i] == 0 for i in front) for e, _ in g.terms):
            out.append(
                Polynomial(sub, tuple((tuple(e[i] for i in keep), c) for e, c in g.terms))
            )
    return IdealHandle(sub, out)


def _var_indices(ring, names_or_idx):
    out = set()
    for v in names_or_idx:
        out.add(v if isinstance(v, int) else ring.vars.index(v))
    return sorted(out)


# -- quotient and saturation --------------------------------------------------

def intersect(a: IdealHandle, b: IdealHandle) -> IdealHandle:
    """I cap J via the tag trick (t*I + (1-t)*J) cap k[x]."""
    ring = a.ring
    if b.ring != ring:
        raise IdealError("intersection across rings")
    (tname,) = ring.fresh_names("t~", 1)
    ext = ring.extend([tname], front=True)
    t = ext.var(0)
    lift = lambda f: Polynomial(ext, tuple(((0,) + e, c) for e, c in f.terms))
    gens = [t * lift(g) for g in a.generators]
    one_minus_t = ext.one() - t
    gens += [one_minus_t * lift(g) for g in b.generators]
    inter = eliminate(IdealHandle(ext, gens), [0])
    back = [Polynomial(ring, f.terms) for f in inter.generators]
    return IdealHandle(ring, back)


def exact_divide(f: Polynomial, g: Polynomial) -> Polynomial:
    """f / g when g divides f exactly."""
    r, quots = normal_form(f, [g], GREVLEX, track=True)
    if not r.is_zero():
        raise IdealError("division is not exact")
    return quots[0]


def ideal_quotient(handle: IdealHandle, f: Polynomial) -> IdealHandle:
    """(I : f) computed as (I cap (f)) / f."""
    if f.is_zero():
        raise IdealError("quotient by zero")
    if f.is_constant():
        return IdealHandle(handle.ring, handle.generators)
    inter = intersect(handle, IdealHandle(handle.ring, [f]))
    return IdealHandle(handle.ring, [exact_divide(g, f) for g in inter.generators])


def saturation(handle: IdealHandle, f: Polynomial):
    """(I : f^infinity) by stable quotient iteration.

    Returns (ideal, n) where n is the exponent at which
    (I : f^n) == (I : f^(n+1)).
    """
    if f.is_zero():
        raise IdealError("saturation by zero")
    current = handle
    n = 0
    while True:
        nxt = ideal_quotient(current, f)
        if tuple(nxt.groebner()) == tuple(current.groebner()):
            return current, n
        current = nxt
        n += 1


def saturation_tag(handle: IdealHandle, f: Polynomial) -> IdealHandle:
    """(I : f^infinity) via the Rabinowitsch tag; cross-check route."""
    if f.is_zero():
        raise IdealError("saturation by zero")
    ring = handle.ring
    (wname,) = ring.fresh_names("w~", 1)
    ext = ring.extend([wname], front=True)
    w = ext.var(0)
    lift = lambda g: Polynomial(ext, tuple(((0,) + e, c) for e, c in g.terms))
    gens = [lift(g) for g in handle.generators]
    gens.append(ext.one() - w * lift(f))
    out = eliminate(IdealHandle(ext, gens), [0])
    return IdealHandle(ring, [Polynomial(ring, g.terms) for g in out.generators])


# -- radical membership -------------------------------------------------------

def radical_membership(f: Polynomial, handle: IdealHandle) -> bool:
    """f in sqrt(I), by the Rabinowitsch trick."""
    if f.is_zero():
        return True
    ring = handle.ring
    (wname,) = ring.fresh_names("w~", 1)
    ext = ring.extend([wname], front=True)
    w = ext.var(0)
    lift = lambda g: Polynomial(ext, tuple(((0,) + e, c) for e, c in g.terms))
    gens = [lift(g) for g in handle.generators]
    gens.append(ext.one() - w * lift(f))
    return IdealHandle(ext, gens).is_unit()


# -- dimension ----------------------------------------------------------------

def krull_dim(handle: IdealHandle) -> int:
    """Dimension of V(I): -1 for the unit ideal, else the maximum size of a
    variable subset independent modulo the leading ideal (grevlex)."""
    gb = handle.groebner(GREVLEX)
    if gb and gb[0].is_constant():
        return -1
    leads = [g.leading(GREVLEX)[0] for g in gb]
    supports = [frozenset(i for i, e in enumerate(exp) if e) for exp in leads]
    n = handle.ring.nvars
    for size in range(n, -1, -1):
        for combo in itertools.combinations(range(n), size):
            s = frozenset(combo)
            if all(not sup <= s for sup in supports):
                return size
    return 0


def monomial_ideal_dim_bruteforce(ring: PolynomialRing, monomials) -> int:
    """Independent-set enumeration straight off the generators; the oracle
    route for krull_dim on monomial ideals."""
    supports = []
    for m in monomials:
        if m.is_constant() and not m.is_zero():
            return -1
        (exp, _), = m.terms
        supports.append(frozenset(i for i, e in enumerate(exp) if e))
    best = 0
    n = ring.nvars
    for size in range(0, n + 1):
        for combo in itertools.combinations(range(n), size):
            s = frozenset(combo)
            if all(not sup <= s for sup in supports):
                best = max(best, size)
    return best


# -- univariate root hunting (used by the component splitter) ------------------

def linear_roots(f: Polynomial):
    """Roots in the ground field of a polynomial univariate in one variable.

    Returns (var_index, [roots]) or None when f is not univariate. Over a
    prime field all p values are tried; over Q, candidate rationals come from
    divisors of the cleared leading and constant coefficients.
    """
    sup = f.support_vars()
    if len(sup) != 1:
        return None
    i = sup[0]
    fld = f.ring.field
    coeffs = {}
    for e, c in f.terms:
        coeffs[e[i]] = c
    deg = max(coeffs)
    roots = []
    if fld.char:
        for a in range(fld.char):
            val = sum(c * pow(a, k, fld.char) for k, c in coeffs.items()) % fld.char
            if val == 0:
                roots.append(a)
    else:
        from fractions import Fraction

        denom_lcm = 1
        for c in coeffs.values():
            denom_lcm = denom_lcm * c.denominator // _gcd(denom_lcm, c.denominator)
        ints = {k: int(c * denom_lcm) for k, c in coeffs.items()}
        lead = ints[deg]
        const = ints.get(0, 0)
        if const == 0:
            roots.append(Fraction(0))
            mink = min(k for k, c in ints.items() if c)
            ints = {k - mink: c for k, c in ints.items() if c}
            const = ints.get(0, 0)
            deg -= mink
        if const:
            for pn in _divisors(abs(const)):
                for qn in _divisors(abs(lead)):
                    for sign in (1, -1):
                        cand = Fraction(sign * pn, qn)
                        if cand in roots:
                            continue
                        val = sum(c * cand ** k for k, c in ints.items())
                        if val == 0:
                            roots.append(cand)
    return i, sorted(set(roots))


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _divisors(n, cap=2000):
    out = []
    d = 1
    while d * d <= n and d <= cap:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


# -- radical envelope ----------------------------------------------------------

def radical_envelope(handle: IdealHandle) -> IdealHandle:
    """A deterministic partial radical: adds variables and linear univariate
    factors that certify into sqrt(I). Not a full radical (factorization is
    out of scope); used to present component leaves as point ideals."""
    ring = handle.ring
    current = handle
    changed = True
    while changed:
        changed = False
        extra = []
        for i in range(ring.nvars):
            v = ring.var(i)
            if not current.contains(v) and radical_membership(v, current):
                extra.append(v)
        if extra:
            current = current.with_extra(extra)
            changed = True
            continue
        for g in current.groebner():
            hit = linear_roots(g)
            if hit is None:
                continue
            i, roots = hit
            for a in roots:
                lin = ring.var(i) - ring.const(a)
                if not current.contains(lin) and radical_membership(lin, current):
                    extra.append(lin)
            if extra:
                break
        if extra:
            current = current.with_extra(extra)
            changed = True
    return IdealHandle(ring, current.groebner())
