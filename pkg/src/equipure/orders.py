"""Monomial orders on exponent vectors.

Orders expose a sort key: `key(exp)` returns a tuple that compares the way
the monomials do (bigger key == bigger monomial). Supported kinds:

  lex            plain lexicographic in the ring's variable order
  grevlex        graded reverse lexicographic (the default everywhere)
  block          elimination order: the `front` variable block is compared
                 first (grevlex within each block), so the order eliminates
                 exactly the front set
  grevlex-perm   grevlex after a permutation of variable priorities; used
                 internally to hunt for generator sets whose leading terms
                 are pairwise coprime

Variable priority is fixed by index at ring creation, which keeps every
computed basis byte-reproducible.
"""

from __future__ import annotations


def _grevlex_key(exp):
    return (sum(exp), tuple(-e for e in reversed(exp)))


class MonomialOrder:
    __slots__ = ("kind", "front", "perm")

    def __init__(self, kind: str = "grevlex", front=(), perm=None):
        if kind not in ("lex", "grevlex", "block", "grevlex-perm"):
            raise ValueError(f"unknown order kind {kind!r}")
        self.kind = kind
        self.front = tuple(sorted(front))
        self.perm = tuple(perm) if perm is not None else None
        if kind == "block" and not self.front:
            raise ValueError("block order needs a nonempty front set")
        if kind == "grevlex-perm" and self.perm is None:
            raise ValueError("grevlex-perm needs a permutation")

    def key(self, exp):
        if self.kind == "lex":
            return exp
        if self.kind == "grevlex":
            return _grevlex_key(exp)
        if self.kind == "grevlex-perm":
            return _grevlex_key(tuple(exp[i] for i in self.perm))
        front = self.front
        fpart = tuple(exp[i] for i in front)
        bpart = tuple(e for i, e in enumerate(exp) if i not in front)
        return (_grevlex_key(fpart), _grevlex_key(bpart))

    def __eq__(self, other):
        return (
            isinstance(other, MonomialOrder)
            and self.kind == other.kind
            and self.front == other.front
            and self.perm == other.perm
        )

    def __hash__(self):
        return hash((self.kind, self.front, self.perm))

    def __repr__(self):
        if self.kind == "block":
            return f"block{list(self.front)}"
        if self.kind == "grevlex-perm":
            return f"grevlex-perm{list(self.perm)}"
        return self.kind


LEX = MonomialOrder("lex")
GREVLEX = MonomialOrder("grevlex")


def block_order(front) -> MonomialOrder:
    return MonomialOrder("block", front=front)


def permuted_grevlex(perm) -> MonomialOrder:
    return MonomialOrder("grevlex-perm", perm=perm)


# -- exponent-vector helpers ------------------------------------------------

def exp_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def exp_divides(a, b):
    """True when monomial a divides monomial b."""
    return all(x <= y for x, y in zip(a, b))


def exp_div(a, b):
    """Exponent vector of a / b; caller guarantees divisibility."""
    return tuple(x - y for x, y in zip(a, b))


def exp_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def exp_coprime(a, b):
    return all(x == 0 or y == 0 for x, y in zip(a, b))
