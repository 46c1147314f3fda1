"""Odd form ideals, relative form parameters, and congruence subgroups.

An odd form ideal (I, M0) pairs a bar-stable ideal of Z/m with a relative
form parameter: a subgroup of the Heisenberg group on V0 between
M_min(I) = L0 <- I + {(0, x + bar(x)) : x in I} and
M_max(I) = {(v, x) in L0 : x in I, B0(v, w) in I for all w in the even part}.
The correspondence with form ideals on the full space is realized by explicit
set computations at test scale; membership predicates for the principal,
normalized, and full congruence subgroups reduce universal quantifications to
finite generator families with the usual additivity justifications, and the
reductions are regression-tested against definition-level checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import group as grp
from .errors import NotUnitary
from .heisenberg import HElem
from .quadratic import OddQuadSpace
from .ring import Ideal, ideal_generated
from .transvections import ElemGen, Extra, Short, gen_matrix


def even_part(s: OddQuadSpace) -> list[tuple]:
    """The subgroup {v0 : (v0, x) in L0 for some x}, as a sorted list."""
    return sorted(s.l0.vector_parts())


def even_part_gens(s: OddQuadSpace) -> list[tuple]:
    """A small additive generating set of the even part."""
    m = s.ring.m
    elems = set(even_part(s))
    zero = (0,) * s.r
    span = {zero}
    gens: list[tuple] = []
    for cand in sorted(elems):
        if cand in span:
            continue
        gens.append(cand)
        frontier = [zero]
        span = {zero}
        step = gens + [tuple((-t) % m for t in g) for g in gens]
        while frontier:
            a = frontier.pop()
            for g in step:
                b = tuple((p + q) % m for p, q in zip(a, g))
                if b not in span:
                    span.add(b)
                    frontier.append(b)
        if len(span) == len(elems):
            break
    return gens


def mmin(s: OddQuadSpace, ideal: Ideal) -> frozenset:
    """Smallest relative odd form parameter of level I (closure of the two
    generator families L0 <- I and {(0, x + bar(x)) : x in I})."""
    v0 = s.v0
    r = s.ring
    gens = set()
    for a in s.l0.elements:
        for y in ideal.elements():
            gens.add(v0.haction(a, y))
    for x in ideal.elements():
        gens.add(HElem((0,) * s.r, r.add(x, r.bar(x))))
    return _hclosure(s, gens)


def mmax(s: OddQuadSpace, ideal: Ideal, corrected: bool = True) -> frozenset:
    """Largest relative odd form parameter of level I.

    The corrected definition quantifies the B0 condition over the even part;
    corrected=False quantifies over all of V0 (the uncorrected variant kept
    only to demonstrate the difference on finite examples).
    """
    v0 = s.v0
    if corrected:
        probe = even_part(s)
    else:
        probe = [tuple(v) for v in v0.all_vectors()]
    out = set()
    for a in s.l0.elements:
        if not ideal.contains(a.x):
            continue
        if all(ideal.contains(v0.b0(a.v, w)) for w in probe):
            out.add(a)
    return frozenset(out)


def _hclosure(s: OddQuadSpace, gens) -> frozenset:
    """Subgroup of the V0 Heisenberg group generated by a set (Cayley BFS)."""
    v0 = s.v0
    zero = v0.zero()
    step = set()
    for g in gens:
        step.add(g)
        step.add(v0.hneg(g))
    elems = {zero}
    frontier = [zero]
    step_list = sorted(step)
    while frontier:
        a = frontier.pop()
        for g in step_list:
            b = v0.hplus(a, g)
            if b not in elems:
                elems.add(b)
                frontier.append(b)
    return frozenset(elems)


def rel_closure(s: OddQuadSpace, ideal: Ideal, seeds) -> frozenset:
    """mmin-seeded action/composition closure of the given seeds, constrained
    to stay inside mmax(I)."""
    v0 = s.v0
    gens = set(mmin(s, ideal))
    for a in seeds:
        for y in s.ring.elements():
            gens.add(v0.haction(a, y))
            gens.add(v0.haction(v0.hneg(a), y))
    out = _hclosure(s, gens)
    top = mmax(s, ideal)
    if not out <= top:
        bad = sorted(out - top)[0]
        raise ValueError(f"relative closure escaped M_max at {bad}")
    return out


@dataclass(frozen=True)
class OddFormIdeal:
    """Pair (I, M0): bar-stable ideal plus relative odd form parameter."""

    ideal: Ideal
    m0: frozenset

    def __le__(self, other: "OddFormIdeal") -> bool:
        return self.ideal.issubset(other.ideal) and self.m0 <= other.m0


def form_ideal(s: OddQuadSpace, ideal: Ideal, mode: str = "min", gens=()) -> OddFormIdeal:
    if mode == "min":
        return OddFormIdeal(ideal, mmin(s, ideal))
    if mode == "max":
        return OddFormIdeal(ideal, mmax(s, ideal))
    if mode == "generated":
        return OddFormIdeal(ideal, rel_closure(s, ideal, gens))
    raise ValueError(f"unknown form parameter mode {mode!r}")


def is_relative_form_parameter(s: OddQuadSpace, ideal: Ideal, elems: frozenset) -> bool:
    v0 = s.v0
    if not mmin(s, ideal) <= elems or not elems <= mmax(s, ideal):
        return False
    for a in elems:
        if v0.hneg(a) not in elems:
            return False
        for b in elems:
            if v0.hplus(a, b) not in elems:
                return False
        for y in s.ring.elements():
            if v0.haction(a, y) not in elems:
                return False
    return True


def all_form_ideals(s: OddQuadSpace) -> list[OddFormIdeal]:
    """Every odd form ideal of the configuration (test scale only)."""
    out = []
    m = s.ring.m
    for d in sorted({ideal_generated(s.ring, [x]).gen for x in range(m)}):
        ideal = Ideal(s.ring, d)
        lo, hi = mmin(s, ideal), mmax(s, ideal)
        mids = _subgroups_between(s, lo, hi)
        for elems in mids:
            out.append(OddFormIdeal(ideal, elems))
    return out


def _subgroups_between(s: OddQuadSpace, lo: frozenset, hi: frozenset) -> list[frozenset]:
    """All action-stable subgroups between lo and hi (by closure of subsets
    of coset representatives; fine at the tiny sizes this is used at)."""
    found = {frozenset(_hclosure(s, lo))}
    frontier = [frozenset(_hclosure(s, lo))]
    while frontier:
        base = frontier.pop()
        for cand in sorted(hi - base):
            grown = _hclosure(s, set(base) | {cand} | {
                s.v0.haction(cand, y) for y in s.ring.elements()
            })
            if grown <= hi and grown not in found:
                found.add(grown)
                frontier.append(grown)
    return sorted(found, key=lambda f: (len(f), sorted(f)))


# -- correspondence with the full space (test scale) -------------------------


def lift_ideal(s: OddQuadSpace, j0: OddFormIdeal) -> set:
    """M = L_h <- I + M0 as an explicit subgroup of the full Heisenberg group."""
    m = s.ring.m
    gens = set()
    mins = sorted(s.v0.min_scalars())
    zeros0 = (0,) * s.r
    import itertools

    for vh in itertools.product(range(m), repeat=2 * s.n):
        v = np.array(vh + zeros0, dtype=np.int64)
        f = s.f_h(v, v)
        for t in mins:
            for y in j0.ideal.elements():
                w, x = s.haction_full((v, (f + t) % m), y)
                gens.add((tuple(int(c) for c in w), int(x)))
    for a in j0.m0:
        gens.add(((0,) * (2 * s.n) + a.v, a.x))
    # Cayley closure in the full Heisenberg group.
    zero = ((0,) * s.dim, 0)
    step = set()
    for g in gens:
        step.add(g)
        w, x = s.hneg_full((np.array(g[0]), g[1]))
        step.add((tuple(int(c) for c in w), int(x)))
    elems = {zero}
    frontier = [zero]
    step_list = sorted(step)
    while frontier:
        a = frontier.pop()
        av = np.array(a[0], dtype=np.int64)
        for g in step_list:
            w, x = s.hplus_full((av, a[1]), (np.array(g[0]), g[1]))
            b = (tuple(int(c) for c in w), int(x))
            if b not in elems:
                elems.add(b)
                frontier.append(b)
    return elems


def restrict_ideal(s: OddQuadSpace, ideal: Ideal, big_m: set) -> OddFormIdeal:
    """M0 = {Q0(v) + (0, x) : (v, x) in M}."""
    out = set()
    for v, x in big_m:
        q = s.q0(np.array(v, dtype=np.int64))
        out.add(HElem(q.v, (q.x + x) % s.ring.m))
    return OddFormIdeal(ideal, frozenset(out))


# -- membership predicates ----------------------------------------------------


def in_principal(s: OddQuadSpace, sigma: grp.UElem, j0: OddFormIdeal, validate: bool = True) -> bool:
    """Principal congruence subgroup membership, three conditions:
    (i) sigma^hh = e mod I entrywise, (ii) Q0(sigma e_i) in M0,
    (iii) Q0(sigma v0) - Q0(v0) in M0 on even-part generators."""
    return principal_failure(s, sigma, j0, validate) is None


def principal_failure(s, sigma, j0, validate: bool = True):
    """None if member, else the number of the first failing condition."""
    if validate and not grp.is_unitary(s, sigma):
        raise NotUnitary("principal congruence test requires a unitary element")
    m = s.ring.m
    h = 2 * s.n
    ideal = j0.ideal
    sm = sigma.mat
    eye = np.eye(h, dtype=np.int64)
    d = (sm[:h, :h] - eye) % m
    if not all(ideal.contains(int(t)) for t in d.flat):
        return 1
    for i in s.theta:
        if s.q0(sm[:, s.pos(i)]) not in j0.m0:
            return 2
    for v0 in even_part_gens(s):
        full = np.concatenate([np.zeros(h, dtype=np.int64), np.array(v0)])
        qa = s.q0((sm @ full) % m)
        if s.v0.hsub(qa, HElem(v0, 0)) not in j0.m0:
            return 3
    return None


def principal_definition_check(s, sigma, j0) -> bool:
    """Definition-level oracle: Q(sigma v) = Q(v) mod the lifted M for every
    v in the even part of V.  Test scale only."""
    big_m = lift_ideal(s, j0)
    vecs = {v for (v, x) in big_m}
    m = s.ring.m
    for v in vecs:
        va = np.array(v, dtype=np.int64)
        w = (sigma.mat @ va) % m
        diff = s.hplus_full((w, 0), s.hneg_full((va, 0)))
        if (tuple(int(c) for c in diff[0]), int(diff[1])) not in big_m:
            return False
    return True


def act_ideal(s: OddQuadSpace, sigma: grp.UElem, j0: OddFormIdeal, validate: bool = True) -> OddFormIdeal:
    """^sigma (I, M0) = (I, {Q0(sigma v0) + (0, x) : (v0, x) in M0})."""
    if validate and not grp.is_unitary(s, sigma):
        raise NotUnitary("form-ideal action requires a unitary element")
    m = s.ring.m
    h = 2 * s.n
    out = set()
    for v0, x in j0.m0:
        full = np.concatenate([np.zeros(h, dtype=np.int64), np.array(v0)])
        q = s.q0((sigma.mat @ full) % m)
        out.add(HElem(q.v, (q.x + x) % m))
    return OddFormIdeal(j0.ideal, frozenset(out))


def in_normalizer(s: OddQuadSpace, sigma: grp.UElem, j0: OddFormIdeal, validate: bool = True) -> bool:
    return act_ideal(s, sigma, j0, validate).m0 == j0.m0


def in_cu_max(s: OddQuadSpace, sigma: grp.UElem, ideal: Ideal, validate: bool = True) -> bool:
    return cu_max_failure(s, sigma, ideal, validate) is None


def cu_max_failure(s, sigma, ideal, validate: bool = True):
    """Full congruence subgroup at the maximal parameter, five conditions."""
    if validate and not grp.is_unitary(s, sigma):
        raise NotUnitary("congruence test requires a unitary element")
    m = s.ring.m
    h = 2 * s.n
    sm = sigma.mat
    for i in s.theta:
        for j in s.theta:
            if i != j and not ideal.contains(int(sm[s.pos(i), s.pos(j)])):
                return 1
    diag = [int(sm[s.pos(i), s.pos(i)]) for i in s.theta]
    for a in range(len(diag)):
        for b in range(len(diag)):
            if a != b and not ideal.contains(diag[a] - diag[b]):
                return 2
    gens = even_part_gens(s)
    for v0 in gens:
        full = np.concatenate([np.zeros(h, dtype=np.int64), np.array(v0)])
        img = (sm @ full) % m
        for i in s.theta:
            if not ideal.contains(int(img[s.pos(i)])):
                return 3
    for i in s.theta:
        col0 = s.v0_part(sm[:, s.pos(i)])
        for v0 in gens:
            if not ideal.contains(s.v0.b0(col0, v0)):
                return 4
    s00 = sm[h:, h:]
    for i in s.theta:
        sii = int(sm[s.pos(i), s.pos(i)])
        for v0 in gens:
            img = (s00 @ np.array(v0) - sii * np.array(v0)) % m
            for w0 in gens:
                if not ideal.contains(s.v0.b0(tuple(int(t) for t in img), w0)):
                    return 5
    return None


def lemumax_member(s: OddQuadSpace, sigma: grp.UElem, ideal: Ideal) -> bool:
    """Independent implementation of principal membership at M0 = mmax via
    the four block conditions; used to cross-check in_principal."""
    m = s.ring.m
    h = 2 * s.n
    sm = sigma.mat
    eye = np.eye(h, dtype=np.int64)
    if not all(ideal.contains(int(t)) for t in ((sm[:h, :h] - eye) % m).flat):
        return False
    gens = even_part_gens(s)
    for v0 in gens:
        full = np.concatenate([np.zeros(h, dtype=np.int64), np.array(v0)])
        img = (sm @ full) % m
        if not all(ideal.contains(int(img[s.pos(i)])) for i in s.theta):
            return False
    for i in s.theta:
        col0 = s.v0_part(sm[:, s.pos(i)])
        if not all(ideal.contains(s.v0.b0(col0, v0)) for v0 in gens):
            return False
    s00 = sm[h:, h:]
    for v0 in gens:
        img = (s00 @ np.array(v0) - np.array(v0)) % m
        if not all(
            ideal.contains(s.v0.b0(tuple(int(t) for t in img), w0)) for w0 in gens
        ):
            return False
    return True


def elementary_generator_family(s: OddQuadSpace) -> list[ElemGen]:
    """{T_ij(1)} together with {T_i(xi)} over group generators of L0;
    commutator conditions over EU reduce to this family."""
    fam: list[ElemGen] = []
    for i in s.theta:
        for j in s.theta:
            if j not in (i, -i):
                fam.append(Short(i, j, 1))
    for i in s.theta:
        for xi in s.l0.group_generators():
            fam.append(Extra(i, xi))
    return fam


def ideal_elementary_transvections(s: OddQuadSpace, j0: OddFormIdeal) -> list[ElemGen]:
    """All (I, M0)-elementary transvections of the configuration."""
    out: list[ElemGen] = []
    for i in s.theta:
        for j in s.theta:
            if j in (i, -i):
                continue
            for x in j0.ideal.elements():
                out.append(Short(i, j, x))
    for i in s.theta:
        for xi in sorted(j0.m0):
            out.append(Extra(i, xi))
    return out


def in_full_congruence(s: OddQuadSpace, sigma: grp.UElem, j0: OddFormIdeal, validate: bool = True) -> bool:
    """sigma normalizes (I, M0) and all commutators with the elementary
    generator family land in the principal congruence subgroup."""
    if validate and not grp.is_unitary(s, sigma):
        raise NotUnitary("congruence test requires a unitary element")
    if not in_normalizer(s, sigma, j0, validate=False):
        return False
    for g in elementary_generator_family(s):
        t = grp.UElem(s.ring, gen_matrix(s, g))
        c = grp.comm(sigma, t)
        if not in_principal(s, c, j0, validate=False):
            return False
    return True
