"""Finitely presented algebras, morphisms of affine schemes, points, fibers.

Direction conventions, fixed once: a Morphism holds a ring map
phi: A -> B given by one image polynomial per generator of A; the induced
scheme map goes Spec(B) -> Spec(A). A is the `target` algebra (downstairs),
B the `source` (upstairs).

The graph ring of a morphism lists the source variables first, then the
target variables (renamed with a '~' suffix when names collide), so block
orders with the source block in front eliminate upstairs variables and
contractions land in the target's ambient ring.
"""

from __future__ import annotations

from .errors import (
    RecursionBudgetExceeded,
    IllDefinedError,
    UnitIdealError,
    UnsupportedPointKind,
)
from .groebner import normal_form
from .ideals import (
    IdealHandle,
    eliminate,
    intersect,
    krull_dim,
    linear_roots,
    radical_envelope,
    radical_membership,
    saturation,
)
from .orders import GREVLEX, block_order
from .parametric import (
    CoeffDomain,
    DenominatorLog,
    generic_oracle,
    param_buchberger,
    param_dim,
    param_is_unit,
    param_pure_power_witness,
    split_poly,
)
from .poly import Polynomial, PolynomialRing


class Algebra:
    """A finitely presented algebra k[vars]/J with a cached basis for J."""

    def __init__(self, ring: PolynomialRing, relations: IdealHandle, name=""):
        if relations.ring != ring:
            raise ValueError("relations live in a different ring")
        if relations.is_unit():
            raise UnitIdealError("the presented ring is the zero ring")
        self.ring = ring
        self.relations = relations
        self.name = name

    @property
    def field(self):
        return self.ring.field

    def dim(self) -> int:
        return krull_dim(self.relations)

    def contains_point(self, coords) -> bool:
        return all(g.eval_at(coords) == self.field.zero for g in self.relations.generators)

    def reduce(self, f: Polynomial) -> Polynomial:
        gb = self.relations.groebner()
        return normal_form(f, gb, GREVLEX) if gb else f

    def __repr__(self):
        rel = ", ".join(map(str, self.relations.generators)) or "0"
        return f"{self.name or 'Algebra'}({self.ring} / ({rel}))"


def make_algebra(field, variables, relation_polys, name="") -> Algebra:
    ring = PolynomialRing(field, variables)
    return Algebra(ring, IdealHandle(ring, relation_polys), name)


class Morphism:
    """Ring map A -> B by generator images; validated at construction."""

    def __init__(self, target: Algebra, source: Algebra, images, name=""):
        if len(images) != target.ring.nvars:
            raise ValueError("need one image per target generator")
        for f in images:
            if f.ring != source.ring:
                raise ValueError("images must live in the source ring")
        if target.field != source.field:
            raise ValueError("field mismatch")
        self.target = target
        self.source = source
        self.images = tuple(images)
        self.name = name
        for rel in target.relations.generators:
            img = source.reduce(rel.map_vars(source.ring, self.images))
            if not img.is_zero():
                raise IllDefinedError(rel, img)
        self._graph = None

    def apply(self, f: Polynomial) -> Polynomial:
        """phi(f) for f in the target's ambient ring, reduced mod J_B."""
        return self.source.reduce(f.map_vars(self.source.ring, self.images))

    # -- graph ring -----------------------------------------------------

    def graph(self):
        """(graph_ring, graph_ideal, src_idx, tgt_idx, tgt_names)."""
        if self._graph is None:
            src = self.source.ring
            tgt = self.target.ring
            taken = set(src.vars)
            tgt_names = []
            for v in tgt.vars:
                nv = v
                while nv in taken:
                    nv = nv + "~"
                taken.add(nv)
                tgt_names.append(nv)
            gring = PolynomialRing(src.field, src.vars + tuple(tgt_names))
            ns = src.nvars
            src_idx = list(range(ns))
            tgt_idx = list(range(ns, ns + tgt.nvars))

            def lift_src(f):
                return Polynomial(
                    gring, tuple((e + (0,) * tgt.nvars, c) for e, c in f.terms)
                )

            def lift_tgt(f):
                return Polynomial(
                    gring, tuple(((0,) * ns + e, c) for e, c in f.terms)
                )

            gens = [lift_src(g) for g in self.source.relations.generators]
            for i in range(tgt.nvars):
                gens.append(gring.var(ns + i) - lift_src(self.images[i]))
            gens += [lift_tgt(g) for g in self.target.relations.generators]
            self._graph = (gring, IdealHandle(gring, gens), src_idx, tgt_idx, tuple(tgt_names))
        return self._graph

    def image_point_coords(self, coords):
        """Coordinates of f(x) downstairs for a rational source point."""
        return tuple(img.eval_at(coords) for img in self.images)

    def compose(self, other: "Morphism") -> "Morphism":
        """self: A -> B composed with other: B -> C gives A -> C."""
        if other.target.ring != self.source.ring:
            raise ValueError("morphisms not composable")
        images = [other.apply(img) for img in self.images]
        return Morphism(self.target, other.source, images,
                        name=f"{other.name or '?'}o{self.name or '?'}")

    def __repr__(self):
        arrows = ", ".join(
            f"{v}->{img}" for v, img in zip(self.target.ring.vars, self.images)
        )
        return f"Morphism({self.name or '?'}: {arrows})"


def make_morphism(target: Algebra, source: Algebra, images, name="") -> Morphism:
    return Morphism(target, source, images, name)


# -- points ---------------------------------------------------------------


RATIONAL = "rational-closed"
GENERIC = "generic-of-component"
ASSERTED = "asserted-prime"


class Point:
    def __init__(self, algebra: Algebra, ideal: IdealHandle, kind: str,
                 coords=None, component=None, comp_dim=None, name=""):
        if kind not in (RATIONAL, GENERIC, ASSERTED):
            raise ValueError(f"bad point kind {kind}")
        self.algebra = algebra
        self.ideal = ideal
        self.kind = kind
        self.coords = tuple(coords) if coords is not None else None
        self.component = component
        self.comp_dim = comp_dim
        self.name = name
        # every point of Spec(B) must contain the relations
        for g in algebra.relations.generators:
            if not ideal.contains(g):
                raise ValueError(f"point ideal misses relation {g}")
        if ideal.is_unit():
            raise ValueError("the unit ideal is not a point")

    def __repr__(self):
        inner = ", ".join(map(str, self.ideal.generators)) or "0"
        return f"Point[{self.kind}]({inner})"


def rational_point(algebra: Algebra, coords, name="") -> Point:
    coords = tuple(algebra.field.of(c) if isinstance(c, int) else c for c in coords)
    if len(coords) != algebra.ring.nvars:
        raise ValueError("coordinate count mismatch")
    if not algebra.contains_point(coords):
        raise ValueError(f"coordinates {coords} do not satisfy the relations")
    ring = algebra.ring
    gens = [ring.var(i) - ring.const(c) for i, c in enumerate(coords)]
    return Point(algebra, IdealHandle(ring, gens), RATIONAL, coords=coords, name=name)


def generic_point_of(algebra: Algebra, component: IdealHandle, name="") -> Point:
    env = radical_envelope(component)
    return Point(
        algebra,
        env,
        GENERIC,
        component=component,
        comp_dim=krull_dim(component),
        name=name,
    )


def asserted_prime_point(algebra: Algebra, ideal: IdealHandle, name="") -> Point:
    return Point(algebra, ideal, ASSERTED, name=name)


# -- component covers -------------------------------------------------------


def decompose_components(handle: IdealHandle, budget: int = 64, supplied=None):
    """A component cover of V(I): a list of ideals whose intersection has the
    same radical as I, found by repeatedly splitting on products fg in I with
    neither factor in sqrt(I). Leaves are pseudo-prime: not splittable by the
    search strategy, with no primality certificate.

    Returns (components, all_pseudo_prime_flag).
    """
    if handle.is_unit():
        raise ValueError("cannot decompose the unit ideal")
    if supplied is not None:
        comps = list(supplied)
        if not verify_component_cover(handle, comps):
            raise ValueError("supplied decomposition fails the radical cover check")
        return comps, "user-supplied"
    work = [handle]
    leaves = []
    steps = 0
    while work:
        current = work.pop(0)
        steps += 1
        if steps > budget:
            raise RecursionBudgetExceeded(f"component splitting exceeded {budget} steps")
        split = _find_splitter(current)
        if split is None:
            leaves.append(IdealHandle(current.ring, current.groebner()))
            continue
        f, g = split
        sat, _ = saturation(current, g)
        plus = current.with_extra([g])
        work.append(sat)
        work.append(plus)
    # drop components whose variety sits inside another's
    final = []
    for i, c in enumerate(leaves):
        redundant = False
        for j, d in enumerate(leaves):
            if i == j:
                continue
            inside = all(radical_membership(g, c) for g in d.generators)
            if inside:
                back = all(radical_membership(g, d) for g in c.generators)
                if not back or j < i:
                    redundant = True
                    break
        if not redundant:
            final.append(c)
    if not verify_component_cover(handle, final):
        raise RecursionBudgetExceeded("splitter produced a cover failing verification")
    return final, "splitter"


def _find_splitter(handle: IdealHandle):
    """Deterministic search for f, g with fg in I and f, g outside sqrt(I)."""
    ring = handle.ring
    gb = handle.groebner()
    if not gb:
        return None
    in_radical = {}

    def rad(f):
        key = f.terms
        if key not in in_radical:
            in_radical[key] = radical_membership(f, handle)
        return in_radical[key]

    # variable pairs
    for i in range(ring.nvars):
        vi = ring.var(i)
        if rad(vi):
            continue
        for j in range(i + 1, ring.nvars):
            vj = ring.var(j)
            if rad(vj):
                continue
            if handle.contains(vi * vj):
                return vi, vj
    # variable times basis element
    for i in range(ring.nvars):
        vi = ring.var(i)
        if rad(vi):
            continue
        for g in gb:
            if rad(g):
                continue
            if handle.contains(vi * g):
                return vi, g
    # basis element pairs
    for i in range(len(gb)):
        if rad(gb[i]):
            continue
        for j in range(i, len(gb)):
            if rad(gb[j]):
                continue
            if handle.contains(gb[i] * gb[j]):
                return gb[i], gb[j]
    # linear factors of univariate basis elements
    for g in gb:
        hit = linear_roots(g)
        if hit is None:
            continue
        vi, roots = hit
        for a in roots:
            lin = ring.var(vi) - ring.const(a)
            if rad(lin):
                continue
            from .ideals import exact_divide

            try:
                rest = exact_divide(g, lin)
            except Exception:
                continue
            if not rest.is_constant() and not rad(rest):
                return lin, rest
    return None


def verify_component_cover(handle: IdealHandle, comps) -> bool:
    """sqrt(intersection of comps) == sqrt(I), checked on generators."""
    if not comps:
        return False
    for g in handle.generators:
        for c in comps:
            if not radical_membership(g, c):
                return False
    inter = comps[0]
    for c in comps[1:]:
        inter = intersect(inter, c)
    return all(radical_membership(g, handle) for g in inter.generators)


# -- fibers -----------------------------------------------------------------


class FiberModel:
    """The fiber algebra of a morphism over a point downstairs.

    kind 'rational': relations is an IdealHandle in the source ambient ring,
    residue field is the ground field, denominators empty.
    kind 'generic': relations is a parametric basis over the fraction field
    of target/q; denominators are logged and certified nonzero mod q.
    """

    def __init__(self, morphism, point, kind, relations, denominators=(),
                 domain=None, param_basis=None, empty=False):
        self.morphism = morphism
        self.point = point
        self.kind = kind
        self.relations = relations
        self.denominators = tuple(denominators)
        self.domain = domain
        self.param_basis = param_basis
        self.empty = empty

    def dim(self) -> int:
        if self.kind == "rational":
            return krull_dim(self.relations)
        return param_dim(self.param_basis, self.morphism.source.ring.nvars)

    def __repr__(self):
        return f"Fiber[{self.kind}](dim={self.dim()})"


def fiber(morphism: Morphism, y: Point) -> FiberModel:
    """B tensor kappa(y) presented over the source variables."""
    if y.algebra is not morphism.target and y.algebra.ring != morphism.target.ring:
        raise ValueError("point does not live on the target")
    if y.kind == RATIONAL:
        src = morphism.source.ring
        gens = list(morphism.source.relations.generators)
        for img, c in zip(morphism.images, y.coords):
            gens.append(img - src.const(c))
        handle = IdealHandle(src, gens)
        return FiberModel(morphism, y, "rational", handle,
                          empty=handle.is_unit())
    if y.kind != GENERIC:
        raise UnsupportedPointKind(
            f"fibers are supported over rational-closed and generic points, not {y.kind}"
        )
    gring, gideal, src_idx, tgt_idx, _ = morphism.graph()
    tring = morphism.target.ring
    q = y.component if y.component is not None else y.ideal
    domain = CoeffDomain(tring, q)
    log = DenominatorLog(domain)
    oracle = generic_oracle(domain, log)
    main = morphism.source.ring
    gens = [split_poly(g, main, domain, src_idx, tgt_idx) for g in gideal.generators]
    basis = param_buchberger(gens, GREVLEX, domain, oracle)
    return FiberModel(
        morphism, y, "generic", None,
        denominators=log.entries, domain=domain, param_basis=basis,
        empty=param_is_unit(basis),
    )


def fiber_dim_at(morphism: Morphism, x: Point) -> int:
    """dim_x of the fiber through x: the largest component of the fiber cover
    containing x."""
    if x.kind != RATIONAL:
        raise UnsupportedPointKind("fiber_dim_at needs a rational-closed source point")
    y_coords = morphism.image_point_coords(x.coords)
    y = rational_point(morphism.target, y_coords)
    fib = fiber(morphism, y)
    if fib.empty:
        raise ValueError("fiber through the given point is empty; point not on source?")
    comps, _ = decompose_components(fib.relations)
    best = None
    for c in comps:
        if all(g.eval_at(x.coords) == morphism.source.field.zero for g in c.generators):
            d = krull_dim(c)
            best = d if best is None else max(best, d)
    if best is None:
        raise ValueError("no fiber component contains the point; cover too coarse")
    return best


def is_quasi_finite_at(morphism: Morphism, x: Point) -> bool:
    return fiber_dim_at(morphism, x) == 0


# -- dominance ---------------------------------------------------------------


def same_radical(a: IdealHandle, b: IdealHandle) -> bool:
    return all(radical_membership(g, b) for g in a.generators) and all(
        radical_membership(g, a) for g in b.generators
    )


def dominates(component: IdealHandle, morphism: Morphism):
    """Does the source component map densely onto a target component?

    Returns (bool, witness_or_contraction): on success the witness is the
    matching component of the target's cover; on failure the contraction
    ideal is returned as evidence.
    """
    gring, gideal, src_idx, tgt_idx, tgt_names = morphism.graph()
    lifted = [
        Polynomial(gring, tuple((e + (0,) * len(tgt_idx), c) for e, c in g.terms))
        for g in component.generators
    ]
    total = gideal.with_extra(lifted)
    contraction_ext = eliminate(total, src_idx)
    tring = morphism.target.ring
    contraction = IdealHandle(
        tring, [Polynomial(tring, f.terms) for f in contraction_ext.generators]
    )
    tcomps, _ = decompose_components(morphism.target.relations)
    for tc in tcomps:
        if same_radical(contraction, tc):
            return True, tc
    return False, contraction


# -- module-finiteness ---------------------------------------------------------


def is_module_finite(morphism: Morphism) -> bool:
    """True iff every source variable has a monic equation over the image:
    read off pure-power leading terms in a block basis of the graph ideal."""
    return len(_module_finite_witness(morphism)) == morphism.source.ring.nvars


def _module_finite_witness(morphism: Morphism):
    gring, gideal, src_idx, tgt_idx, _ = morphism.graph()
    basis = gideal.groebner(block_order(src_idx))
    found = {}
    for g in basis:
        exp = g.leading(block_order(src_idx))[0]
        nz = [i for i, e in enumerate(exp) if e]
        if len(nz) == 1 and nz[0] in src_idx and nz[0] not in found:
            found[nz[0]] = g
    return found


# -- quasi-finite strata --------------------------------------------------------


class Stratum:
    """Locally closed piece of the target: V(constraints) minus the vanishing
    of the assumed-nonzero coefficients."""

    def __init__(self, constraints: IdealHandle, nonzeros, quasi_finite: bool,
                 fiber_empty: bool, witness):
        self.constraints = constraints
        self.nonzeros = tuple(nonzeros)
        self.quasi_finite = quasi_finite
        self.fiber_empty = fiber_empty
        self.witness = witness

    def contains_coords(self, coords) -> bool:
        fld = self.constraints.ring.field
        on = all(g.eval_at(coords) == fld.zero for g in self.constraints.generators)
        if not on:
            return False
        return all(nz.eval_at(coords) != fld.zero for nz in self.nonzeros)

    def describe(self):
        return {
            "vanishing": [str(g) for g in self.constraints.generators],
            "nonzero": [str(g) for g in self.nonzeros],
            "quasi_finite": self.quasi_finite,
            "fiber_empty": self.fiber_empty,
        }

    def __repr__(self):
        return (f"Stratum(V({list(map(str, self.constraints.generators))}) \\ "
                f"V({list(map(str, self.nonzeros))}), qf={self.quasi_finite})")


def finite_locus_strata(morphism: Morphism, depth_budget: int = 12):
    """Groebner-system recursion over the target: branch on vanishing versus
    non-vanishing of the parametric leading coefficients; on each leaf report
    whether every source variable shows a pure-power leading term. The strata
    partition the target."""
    gring, gideal, src_idx, tgt_idx, _ = morphism.graph()
    tring = morphism.target.ring
    main = morphism.source.ring
    base_constraints = list(morphism.target.relations.generators)
    out = []

    def run(constraint_gens, nonzeros, depth):
        if depth > depth_budget:
            raise RecursionBudgetExceeded("strata recursion depth exceeded")
        constraints = IdealHandle(tring, constraint_gens)
        if constraints.is_unit():
            return
        for nz in nonzeros:
            if radical_membership(nz, constraints):
                return  # assumed nonzero but vanishing identically: empty piece
        domain = CoeffDomain(tring, constraints)
        assumed = {domain.reduce(nz).terms for nz in nonzeros}

        def oracle(c):
            red = domain.reduce(c)
            if red.is_zero():
                return False
            if red.is_constant() or red.terms in assumed:
                return True
            raise BranchSignal(red)

        gens = [split_poly(g, main, domain, src_idx, tgt_idx)
                for g in gideal.generators]
        try:
            basis = param_buchberger(gens, GREVLEX, domain, oracle)
        except BranchSignal as b:
            run(constraint_gens + [b.coeff], nonzeros, depth + 1)
            run(constraint_gens, nonzeros + [b.coeff], depth + 1)
            return
        empty = param_is_unit(basis)
        if empty:
            out.append(Stratum(constraints, nonzeros, True, True, None))
            return
        witness = param_pure_power_witness(basis, set(src_idx), GREVLEX)
        qf = all(i in witness for i in src_idx)
        out.append(Stratum(constraints, nonzeros, qf, False,
                           {i: str(w[1]) for i, w in witness.items()}))

    run(base_constraints, [], 0)
    return out


class BranchSignal(Exception):
    def __init__(self, coeff):
        self.coeff = coeff
