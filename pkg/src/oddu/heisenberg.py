"""Anti-Hermitian spaces, their Heisenberg groups, and odd form parameters.

The Heisenberg group of an anti-Hermitian space (V0, B0) is the set V0 x R
with twisted composition (v,x) + (w,y) = (v+w, x+y+B0(v,w)), a right monoid
action (v,x) <- y = (vy, bar(y) bar(1)^-1 x y), and the trace homomorphism
tr(v,x) = x - bar(x) - B0(v,v).  An odd form parameter is a subgroup between
L_min = {(0, x + bar(x))} and L_max = ker tr that is stable under the action.
Form parameters are stored as explicit element sets; the spaces involved are
finite and tiny, which buys O(1) membership everywhere else in the package.
"""

from __future__ import annotations

import itertools
from typing import Iterable, NamedTuple

from .errors import DimensionMismatch, GeneratorNotInLmax
from .ring import Zmod


class HElem(NamedTuple):
    """Element (v, x) of the Heisenberg group; v is a coordinate tuple."""

    v: tuple
    x: int


class AHSpace:
    """Free module of finite rank with an anti-Hermitian Gram matrix."""

    def __init__(self, ring: Zmod, rank: int, gram):
        self.ring = ring
        self.rank = rank
        g = [[ring.norm(gram[i][j]) for j in range(rank)] for i in range(rank)]
        for i in range(rank):
            for j in range(rank):
                if g[i][j] != ring.neg(ring.bar(g[j][i])):
                    raise DimensionMismatch(
                        f"gram is not anti-Hermitian at ({i},{j})"
                    )
        self.gram = tuple(tuple(row) for row in g)

    # -- sesquilinear form -------------------------------------------------

    def b0(self, v, w) -> int:
        """B0(sum e_i x_i, sum e_j y_j) = sum bar(x_i) bar(1)^-1 G[i][j] y_j."""
        if len(v) != self.rank or len(w) != self.rank:
            raise DimensionMismatch("vector length does not match rank")
        r = self.ring
        total = 0
        for i in range(self.rank):
            if v[i]:
                row = self.gram[i]
                c = r.mul(r.bar(v[i]), r.bar1_inv)
                for j in range(self.rank):
                    if w[j] and row[j]:
                        total += c * row[j] * w[j]
        return total % r.m

    # -- Heisenberg group --------------------------------------------------

    def zero(self) -> HElem:
        return HElem((0,) * self.rank, 0)

    def hplus(self, a: HElem, b: HElem) -> HElem:
        if len(a.v) != self.rank or len(b.v) != self.rank:
            raise DimensionMismatch("Heisenberg elements from different spaces")
        r = self.ring
        v = tuple((p + q) % r.m for p, q in zip(a.v, b.v))
        return HElem(v, (a.x + b.x + self.b0(a.v, b.v)) % r.m)

    def hneg(self, a: HElem) -> HElem:
        r = self.ring
        v = tuple((-p) % r.m for p in a.v)
        return HElem(v, (-a.x + self.b0(a.v, a.v)) % r.m)

    def hsub(self, a: HElem, b: HElem) -> HElem:
        return self.hplus(a, self.hneg(b))

    def haction(self, a: HElem, y: int) -> HElem:
        r = self.ring
        v = tuple((p * y) % r.m for p in a.v)
        return HElem(v, (r.bar(y) * r.bar1_inv * a.x * y) % r.m)

    def trace(self, a: HElem) -> int:
        r = self.ring
        return (a.x - r.bar(a.x) - self.b0(a.v, a.v)) % r.m

    def all_vectors(self) -> Iterable[tuple]:
        return itertools.product(range(self.ring.m), repeat=self.rank)

    def all_helems(self) -> Iterable[HElem]:
        for v in self.all_vectors():
            for x in self.ring.elements():
                yield HElem(v, x)

    def min_scalars(self) -> set[int]:
        r = self.ring
        return {(x + r.bar(x)) % r.m for x in r.elements()}

    def __eq__(self, other):
        return (
            isinstance(other, AHSpace)
            and self.ring == other.ring
            and self.gram == other.gram
        )

    def __hash__(self):
        return hash((self.ring, self.gram))

    def __repr__(self):
        return f"AHSpace(rank={self.rank}, m={self.ring.m})"


def lmin(s: AHSpace) -> "FormParameter":
    zero = (0,) * s.rank
    elems = frozenset(HElem(zero, x) for x in s.min_scalars())
    return FormParameter(s, elems)


def lmax(s: AHSpace) -> "FormParameter":
    elems = frozenset(a for a in s.all_helems() if s.trace(a) == 0)
    return FormParameter(s, elems)


def close_form_parameter(s: AHSpace, gens) -> "FormParameter":
    """Smallest odd form parameter containing the given generators.

    Fixed-point closure: generators are first saturated under the monoid
    action (which distributes over the composition), then the subgroup they
    generate together with L_min is grown by breadth-first multiplication.
    """
    top = lmax(s).elements
    gens = [HElem(tuple(x % s.ring.m for x in g.v), g.x % s.ring.m) for g in gens]
    for g in gens:
        if g not in top:
            raise GeneratorNotInLmax(f"generator {g} is not in L_max")
    step = set()
    for g in gens:
        for h in (g, s.hneg(g)):
            for y in s.ring.elements():
                step.add(s.haction(h, y))
    seed = set(lmin(s).elements)
    elems = set(seed)
    frontier = list(elems)
    step |= seed
    step_list = sorted(step)
    # Cayley-graph closure: the step set is symmetric and action-stable, and
    # the action distributes over the composition, so the subgroup grown here
    # is itself action-stable.
    while frontier:
        a = frontier.pop()
        for g in step_list:
            b = s.hplus(a, g)
            if b not in elems:
                elems.add(b)
                frontier.append(b)
    return FormParameter(s, frozenset(elems))


def is_form_parameter(s: AHSpace, elems) -> bool:
    elems = set(elems)
    if not set(lmin(s).elements) <= elems:
        return False
    if not elems <= lmax(s).elements:
        return False
    for a in elems:
        if s.hneg(a) not in elems:
            return False
        for b in elems:
            if s.hplus(a, b) not in elems:
                return False
        for y in s.ring.elements():
            if s.haction(a, y) not in elems:
                return False
    return True


class FormParameter:
    """An odd form parameter as an explicit finite set of Heisenberg elements."""

    def __init__(self, space: AHSpace, elements: frozenset):
        self.space = space
        self.elements = elements
        self._sorted = None
        self._gens = None

    def __contains__(self, a: HElem) -> bool:
        return a in self.elements

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        return (
            isinstance(other, FormParameter)
            and self.space == other.space
            and self.elements == other.elements
        )

    def __hash__(self):
        return hash((self.space, self.elements))

    def sorted_elements(self) -> list[HElem]:
        if self._sorted is None:
            self._sorted = sorted(self.elements)
        return self._sorted

    def vector_parts(self) -> set[tuple]:
        return {a.v for a in self.elements}

    def group_generators(self) -> list[HElem]:
        """A small generating set of (elements, +), found greedily."""
        if self._gens is not None:
            return self._gens
        s = self.space
        zero = s.zero()
        span = {zero}
        gens: list[HElem] = []
        for cand in self.sorted_elements():
            if cand in span:
                continue
            gens.append(cand)
            step = gens + [s.hneg(g) for g in gens]
            span = {zero}
            frontier = [zero]
            while frontier:
                a = frontier.pop()
                for g in step:
                    b = s.hplus(a, g)
                    if b not in span:
                        span.add(b)
                        frontier.append(b)
            if len(span) == len(self.elements):
                break
        self._gens = gens
        return gens
