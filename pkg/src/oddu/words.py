"""Formal products of elementary sigma-conjugates with exact length bookkeeping.

A word denotes a product of factors ^eps sigma^(+-1) where eps is a product of
elementary generators.  Words are kept symbolic as an immutable expression
tree (atom, product, conjugation by an elementary word, commutator with an
elementary word, inverse, substitution of the atom); the factor count obeys
the usual bookkeeping: conjugation preserves length, commutation with an
elementary element doubles it, inversion preserves it.

Evaluation walks the tree, so a word of tens of thousands of factors costs
only as many matrix products as the tree has nodes.  The flat factor list is
materialized lazily for audit purposes.
"""

from __future__ import annotations

from typing import Iterator, NamedTuple

import numpy as np

from .transvections import ElemGen, eword_inverse, eword_matrix


class ConjFactor(NamedTuple):
    """One factor ^conjugator sigma^exponent."""

    conjugator: tuple
    exponent: int


class ConjWord:
    """Immutable word of elementary sigma-conjugates."""

    __slots__ = ("kind", "eword", "parts", "length")

    def __init__(self, kind: str, eword: tuple | None, parts: tuple, length: int):
        self.kind = kind
        self.eword = eword
        self.parts = parts
        self.length = length

    def factors(self) -> list[ConjFactor]:
        return list(self._iter_factors(+1))

    def _iter_factors(self, sign: int) -> Iterator[ConjFactor]:
        kind = self.kind
        if kind == "atom":
            yield ConjFactor((), self.parts[0] * sign)
        elif kind == "mul":
            seq = self.parts if sign == +1 else reversed(self.parts)
            for w in seq:
                yield from w._iter_factors(sign)
        elif kind == "inv":
            yield from self.parts[0]._iter_factors(-sign)
        elif kind == "conj":
            for f in self.parts[0]._iter_factors(sign):
                yield ConjFactor(self.eword + f.conjugator, f.exponent)
        elif kind == "comm":
            # [E, w] = (^E w) w^-1
            inner = self.parts[0]
            if sign == +1:
                for f in inner._iter_factors(+1):
                    yield ConjFactor(self.eword + f.conjugator, f.exponent)
                yield from inner._iter_factors(-1)
            else:
                yield from inner._iter_factors(+1)
                for f in inner._iter_factors(-1):
                    yield ConjFactor(self.eword + f.conjugator, f.exponent)
        elif kind == "subst":
            outer, repl = self.parts
            for f in outer._iter_factors(sign):
                sub = repl if f.exponent == +1 else ConjWord("inv", None, (repl,), repl.length)
                for g in sub._iter_factors(+1):
                    yield ConjFactor(f.conjugator + g.conjugator, g.exponent)
        else:
            raise AssertionError(kind)

    def __len__(self):
        return self.length

    def __repr__(self):
        return f"ConjWord(length={self.length})"


def atom(exp: int = +1) -> ConjWord:
    assert exp in (+1, -1)
    return ConjWord("atom", None, (exp,), 1)


def mul(*words: ConjWord) -> ConjWord:
    parts = []
    for w in words:
        if w.kind == "mul":
            parts.extend(w.parts)
        else:
            parts.append(w)
    return ConjWord("mul", None, tuple(parts), sum(w.length for w in parts))


def inverse(w: ConjWord) -> ConjWord:
    return ConjWord("inv", None, (w,), w.length)


def conjugate(eword, w: ConjWord) -> ConjWord:
    """^E w for an elementary word E (tuple of generators)."""
    eword = tuple(eword)
    if not eword:
        return w
    if w.kind == "conj":
        return ConjWord("conj", eword + w.eword, w.parts, w.length)
    return ConjWord("conj", eword, (w,), w.length)


def commutator(eword, w: ConjWord) -> ConjWord:
    """[E, w] = E w E^-1 w^-1; doubles the factor count."""
    return ConjWord("comm", tuple(eword), (w,), 2 * w.length)


def substitute(outer: ConjWord, replacement: ConjWord) -> ConjWord:
    """Replace the atom of `outer` by `replacement` (a word over the real atom)."""
    return ConjWord(
        "subst", None, (outer, replacement), outer.length * replacement.length
    )


def bracket(eword) -> ConjWord:
    """[E, sigma] as a 2-factor word: (^E sigma) sigma^-1."""
    return mul(conjugate(eword, atom(+1)), atom(-1))


def bracket_right(eword) -> ConjWord:
    """[sigma^-1, E] ... not needed; kept for symmetry with the proofs."""
    return mul(atom(-1), conjugate(eword, atom(+1)))


def evaluate(space, w: ConjWord, sigma) -> np.ndarray:
    """Matrix of the word at a concrete unitary element.

    `sigma` must expose .mat and .inv (a UElem works).  Inverses are computed
    structurally, never by generic matrix inversion.
    """
    m = space.ring.m
    memo: dict[tuple[int, int], np.ndarray] = {}

    def ev(node: ConjWord, sign: int) -> np.ndarray:
        key = (id(node), sign)
        got = memo.get(key)
        if got is not None:
            return got
        kind = node.kind
        if kind == "atom":
            e = node.parts[0] * sign
            out = sigma.mat if e == +1 else sigma.inv
        elif kind == "mul":
            seq = node.parts if sign == +1 else tuple(reversed(node.parts))
            out = np.eye(space.dim, dtype=np.int64)
            for p in seq:
                out = (out @ ev(p, sign)) % m
        elif kind == "inv":
            out = ev(node.parts[0], -sign)
        elif kind == "conj":
            emat = eword_matrix(space, node.eword)
            eimat = eword_matrix(space, eword_inverse(space, node.eword))
            out = (emat @ ev(node.parts[0], sign) % m @ eimat) % m
        elif kind == "comm":
            emat = eword_matrix(space, node.eword)
            eimat = eword_matrix(space, eword_inverse(space, node.eword))
            wp = ev(node.parts[0], +1)
            wm = ev(node.parts[0], -1)
            if sign == +1:
                out = (emat @ wp % m @ eimat % m @ wm) % m
            else:
                out = (wp @ emat % m @ wm % m @ eimat) % m
        elif kind == "subst":
            outer, repl = node.parts
            rp = ev(repl, +1)
            rm = ev(repl, -1)

            class _Sub:
                mat = rp
                inv = rm

            out = evaluate_with(space, outer, _Sub, sign)
        else:
            raise AssertionError(kind)
        memo[key] = out
        return out

    return ev(w, +1)


def evaluate_with(space, w: ConjWord, sigma, sign: int = +1) -> np.ndarray:
    if sign == +1:
        return evaluate(space, w, sigma)
    return evaluate(space, inverse(w), sigma)
