"""Groebner machinery for submodules of free modules over a polynomial ring.

Vectors are tuples of Polynomials. A module monomial is (position, exponent
vector); a ModuleOrder turns one into a sort key. Two order families cover
everything the package needs:

  * position-over-term with a leading block of positions dominating the
    rest (kernel computation via the graph trick), and
  * orders that compare a chosen variable sub-block first across all
    positions (coefficient restriction to a subring, i.e. module
    elimination).

The product criterion is not sound for modules, so module Buchberger runs
with no pair-skipping shortcuts; all corpus modules are small.
"""

from __future__ import annotations

from .orders import GREVLEX, exp_div, exp_divides, exp_lcm, exp_mul
from .poly import PolynomialRing, poly_from_dict


class ModuleOrder:
    """Sort key on (position, exponent) pairs; bigger key = bigger monomial."""

    def __init__(self, keyfn, tag):
        self._keyfn = keyfn
        self.tag = tag

    def key(self, pos, exp):
        return self._keyfn(pos, exp)

    def __repr__(self):
        return f"ModuleOrder({self.tag})"


def pot_order(mono_order=GREVLEX) -> ModuleOrder:
    """Plain position-over-term: position 0 is the biggest."""
    return ModuleOrder(lambda pos, exp: (-pos, mono_order.key(exp)), "pot")


def graph_kernel_order(lead_positions: int, mono_order=GREVLEX) -> ModuleOrder:
    """Anything in the first `lead_positions` positions beats everything else;
    position-over-term within each class."""

    def keyfn(pos, exp):
        return (1 if pos < lead_positions else 0, -pos, mono_order.key(exp))

    return ModuleOrder(keyfn, f"graph<{lead_positions}")


def graph_kernel_elim_order(lead_positions: int, front_vars, nvars) -> ModuleOrder:
    """Graph-kernel order that additionally eliminates `front_vars` inside the
    trailing positions: leading-block monomials first, then monomials whose
    exponent touches the front variables, then position, then the rest."""
    front = tuple(sorted(front_vars))
    back = tuple(i for i in range(nvars) if i not in front)

    def keyfn(pos, exp):
        fpart = tuple(exp[i] for i in front)
        bpart = tuple(exp[i] for i in back)
        fkey = (sum(fpart), tuple(-e for e in reversed(fpart)))
        bkey = (sum(bpart), tuple(-e for e in reversed(bpart)))
        return (1 if pos < lead_positions else 0, fkey, -pos, bkey)

    return ModuleOrder(keyfn, f"graph-elim<{lead_positions}")


# -- vector helpers ------------------------------------------------------------


def vec_zero(ring: PolynomialRing, rank: int):
    z = ring.zero()
    return tuple(z for _ in range(rank))


def vec_is_zero(v) -> bool:
    return all(f.is_zero() for f in v)


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_term_mul(v, exp, coeff):
    return tuple(f.term_mul(exp, coeff) for f in v)


def vec_scale(v, c):
    return tuple(f.scale(c) for f in v)


def vec_leading(v, order: ModuleOrder):
    """((pos, exp), coeff) of the leading module term."""
    best = None
    for pos, f in enumerate(v):
        for exp, c in f.terms:
            k = order.key(pos, exp)
            if best is None or k > best[0]:
                best = (k, pos, exp, c)
    if best is None:
        raise ValueError("leading term of zero vector")
    return (best[1], best[2]), best[3]


def _canonical_vec_key(v):
    return tuple(f.terms for f in v)


def module_normal_form(v, basis, order: ModuleOrder, track=False):
    """Fully reduced normal form of vector v against module `basis`."""
    if vec_is_zero(v) or not basis:
        return (v, [None] * len(basis)) if track else v
    ring = v[0].ring
    fld = ring.field
    live = [i for i in range(len(basis)) if not vec_is_zero(basis[i])]
    leads = {i: vec_leading(basis[i], order) for i in live}
    live.sort(key=lambda i: (leads[i][0][0], order.key(*leads[i][0]))[::-1])
    live.sort(key=lambda i: (order.key(*leads[i][0]), _canonical_vec_key(basis[i])))
    rank = len(v)
    work = [dict(f.terms) for f in v]
    remainder = [dict() for _ in range(rank)]
    quotients = [dict() for _ in basis] if track else None

    def current_leading():
        best = None
        for pos in range(rank):
            for exp in work[pos]:
                k = order.key(pos, exp)
                if best is None or k > best[0]:
                    best = (k, pos, exp)
        return best

    while True:
        top = current_leading()
        if top is None:
            break
        _, pos, exp = top
        coeff = work[pos].pop(exp)
        if not coeff:
            continue
        hit = None
        for i in live:
            (lpos, lexp), lcoeff = leads[i]
            if lpos == pos and exp_divides(lexp, exp):
                hit = (i, lexp, lcoeff)
                break
        if hit is None:
            remainder[pos][exp] = fld.add(remainder[pos].get(exp, fld.zero), coeff)
            continue
        i, lexp, lcoeff = hit
        mexp = exp_div(exp, lexp)
        mcoeff = fld.div(coeff, lcoeff)
        if track:
            q = quotients[i]
            q[mexp] = fld.add(q.get(mexp, fld.zero), mcoeff)
        for bpos, bpoly in enumerate(basis[i]):
            for e, c in bpoly.terms:
                if bpos == pos and e == lexp:
                    continue
                ne = exp_mul(e, mexp)
                delta = fld.mul(c, mcoeff)
                cur = work[bpos].get(ne, fld.zero)
                new = fld.sub(cur, delta)
                if new:
                    work[bpos][ne] = new
                elif ne in work[bpos]:
                    del work[bpos][ne]
    r = tuple(poly_from_dict(ring, d) for d in remainder)
    if track:
        return r, [poly_from_dict(ring, q) for q in quotients]
    return r


def module_buchberger(vectors, order: ModuleOrder, ring: PolynomialRing):
    """Reduced module Groebner basis. No product criterion (unsound for
    modules); plain pair processing."""
    basis = [v for v in vectors if not vec_is_zero(v)]
    if not basis:
        return []
    fld = ring.field
    pairs = [(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))]
    idx = 0
    while idx < len(pairs):
        # deterministic FIFO with lcm-size preference among the unprocessed tail
        best = min(
            range(idx, len(pairs)),
            key=lambda t: _pair_key(basis, pairs[t], order),
        )
        pairs[idx], pairs[best] = pairs[best], pairs[idx]
        i, j = pairs[idx]
        idx += 1
        (pi, ei), ci = vec_leading(basis[i], order)
        (pj, ej), cj = vec_leading(basis[j], order)
        if pi != pj:
            continue
        lcm = exp_lcm(ei, ej)
        left = vec_term_mul(basis[i], exp_div(lcm, ei), fld.inv(ci))
        right = vec_term_mul(basis[j], exp_div(lcm, ej), fld.inv(cj))
        s = vec_sub(left, right)
        r = module_normal_form(s, basis, order)
        if vec_is_zero(r):
            continue
        basis.append(r)
        new = len(basis) - 1
        pairs.extend((k, new) for k in range(new))
    return reduce_module_basis(basis, order, ring)


def _pair_key(basis, pair, order):
    i, j = pair
    (pi, ei), _ = vec_leading(basis[i], order)
    (pj, ej), _ = vec_leading(basis[j], order)
    if pi != pj:
        return (1, i, j)
    return (0, order.key(pi, exp_lcm(ei, ej)), i, j)


def reduce_module_basis(basis, order: ModuleOrder, ring: PolynomialRing):
    basis = [v for v in basis if not vec_is_zero(v)]
    if not basis:
        return []
    leads = [vec_leading(v, order) for v in basis]
    keep = []
    for i in range(len(basis)):
        (pi, ei), _ = leads[i]
        dominated = False
        for j in range(len(basis)):
            if i == j:
                continue
            (pj, ej), _ = leads[j]
            if pj == pi and exp_divides(ej, ei) and (ej != ei or j < i):
                dominated = True
                break
        if not dominated:
            keep.append(i)
    minimal = [basis[i] for i in keep]
    out = []
    fld = ring.field
    for i, v in enumerate(minimal):
        others = [w for j, w in enumerate(minimal) if j != i]
        r = module_normal_form(v, others, order) if others else v
        if vec_is_zero(r):
            continue
        _, c = vec_leading(r, order)
        out.append(vec_scale(r, fld.inv(c)))
    out.sort(key=lambda v: (order.key(*vec_leading(v, order)[0]), _canonical_vec_key(v)))
    return out


# -- kernels -------------------------------------------------------------------


def syzygy_restricted(images, relations, ring: PolynomialRing, coeff_front=None):
    """Generators of { c : sum_m c_m * images_m  in  <relations> }.

    `images` and `relations` are vectors in ring^s. The returned generators
    are vectors in ring^len(images). When `coeff_front` is a set of variable
    indices, only combinations whose coefficients avoid those variables are
    returned (module elimination): that computes the kernel over the subring
    on the remaining variables.
    """
    if not images:
        return []
    s = len(images[0])
    m = len(images)
    rank = s + m

    def pad(vec_s, vec_m):
        return tuple(vec_s) + tuple(vec_m)

    zero_m = vec_zero(ring, m)
    zero_s = vec_zero(ring, s)
    gens = []
    for t, w in enumerate(images):
        unit = list(zero_m)
        unit[t] = ring.one()
        gens.append(pad(w, unit))
    for rel in relations:
        gens.append(pad(rel, zero_m))
    if coeff_front is None:
        order = graph_kernel_order(s)
    else:
        order = graph_kernel_elim_order(s, coeff_front, ring.nvars)
    gb = module_buchberger(gens, order, ring)
    out = []
    for v in gb:
        head, tail = v[:s], v[s:]
        if not vec_is_zero(head):
            continue
        if coeff_front is not None:
            touches = any(
                any(e[i] for i in coeff_front)
                for f in tail
                for e, _ in f.terms
            )
            if touches:
                continue
        if not vec_is_zero(tail):
            out.append(tail)
    return out
