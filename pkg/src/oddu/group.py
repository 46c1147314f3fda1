"""Odd unitary group elements as integer matrices mod m.

Membership is decided by the six block conditions of the hyperbolic
membership criterion: the adjoint identity sigma~_ij = -eps_i bar(sigma_{-j,-i})
eps_{-j}, the three mixed-block adjoint identities evaluated on V0 basis
vectors, Q0(sigma e_i) in L0, and Q0(sigma f_k) - Q0(f_k) in L0.  The mixed
conditions are universally quantified in the source statement; checking them
on basis vectors is justified by additivity/sesquilinearity of both sides and
is regression-tested against the brute-force oracle at tiny sizes.

Inverses are computed by generic linear algebra (CRT over the prime powers of
m with Hensel lifting), not via the adjoint formula, so that the membership
test can use the inverse without circularity.
"""

from __future__ import annotations

import math
import random

import numpy as np

from .errors import NotInvertible, NotUnitary, SpaceTooLarge
from .heisenberg import HElem
from .quadratic import OddQuadSpace
from .ring import Zmod


def _factorize(m: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            k = 0
            while m % d == 0:
                m //= d
                k += 1
            out.append((d, k))
        d += 1
    if m > 1:
        out.append((m, 1))
    return out


def _inv_mod_prime(mat: np.ndarray, p: int) -> np.ndarray:
    """Gauss-Jordan inverse over the field Z/p; raises NotInvertible."""
    n = mat.shape[0]
    a = mat % p
    aug = np.concatenate([a, np.eye(n, dtype=np.int64)], axis=1)
    for col in range(n):
        piv = None
        for row in range(col, n):
            if aug[row, col] % p:
                piv = row
                break
        if piv is None:
            raise NotInvertible(f"matrix is singular mod {p}")
        if piv != col:
            aug[[col, piv]] = aug[[piv, col]]
        inv = pow(int(aug[col, col]), -1, p)
        aug[col] = (aug[col] * inv) % p
        for row in range(n):
            if row != col and aug[row, col]:
                aug[row] = (aug[row] - aug[row, col] * aug[col]) % p
    return aug[:, n:]


def mat_inv(ring: Zmod, mat: np.ndarray) -> np.ndarray:
    """Inverse of a matrix over Z/m via CRT and Hensel lifting."""
    m = ring.m
    mat = np.asarray(mat, dtype=np.int64) % m
    n = mat.shape[0]
    residues = []
    moduli = []
    for p, k in _factorize(m):
        x = _inv_mod_prime(mat, p)
        q = p
        target = p**k
        while q < target:
            q = min(q * q, target)
            # Newton step X <- X(2I - AX) doubles the precision.
            ax = (mat @ x) % q
            x = (x @ ((2 * np.eye(n, dtype=np.int64) - ax) % q)) % q
        residues.append(x % target)
        moduli.append(target)
    out = np.zeros_like(mat)
    for res, mod in zip(residues, moduli):
        rest = m // mod
        coef = rest * pow(rest, -1, mod)
        out = (out + coef * res) % m
    assert ((mat @ out) % m == np.eye(n, dtype=np.int64)).all()
    return out


class UElem:
    """Invertible matrix over Z/m in the canonical basis order.

    Invertibility is checked eagerly: construction computes and caches the
    inverse, raising NotInvertible otherwise.
    """

    __slots__ = ("ring", "mat", "inv")

    def __init__(self, ring: Zmod, mat, inv=None):
        self.ring = ring
        a = np.asarray(mat, dtype=np.int64) % ring.m
        a.flags.writeable = False
        self.mat = a
        if inv is None:
            inv = mat_inv(ring, a)
        else:
            inv = np.asarray(inv, dtype=np.int64) % ring.m
        inv.flags.writeable = False
        self.inv = inv

    def __eq__(self, other):
        return (
            isinstance(other, UElem)
            and self.ring == other.ring
            and (self.mat == other.mat).all()
        )

    def __hash__(self):
        return hash((self.ring, self.mat.tobytes()))

    def __repr__(self):
        return f"UElem(Z/{self.ring.m}, dim={self.mat.shape[0]})"


def identity(s: OddQuadSpace) -> UElem:
    e = np.eye(s.dim, dtype=np.int64)
    return UElem(s.ring, e, e.copy())


def mul(a: UElem, b: UElem) -> UElem:
    m = a.ring.m
    return UElem(a.ring, (a.mat @ b.mat) % m, (b.inv @ a.inv) % m)


def inv(a: UElem) -> UElem:
    return UElem(a.ring, a.inv, a.mat.copy())


def conj(t: UElem, a: UElem) -> UElem:
    """^t a = t a t^-1."""
    m = t.ring.m
    return UElem(
        t.ring,
        (t.mat @ a.mat % m @ t.inv) % m,
        (t.mat @ a.inv % m @ t.inv) % m,
    )


def comm(a: UElem, b: UElem) -> UElem:
    """[a, b] = a b a^-1 b^-1."""
    m = a.ring.m
    mat = (a.mat @ b.mat % m @ a.inv % m @ b.inv) % m
    invm = (b.mat @ a.mat % m @ b.inv % m @ a.inv) % m
    return UElem(a.ring, mat, invm)


def blocks(s: OddQuadSpace, sigma: UElem):
    """The four sub-blocks (hh, h0, 0h, 00) in the canonical layout."""
    h = 2 * s.n
    m = sigma.mat
    return m[:h, :h], m[h:, :h], m[:h, h:], m[h:, h:]


def sigma_entry(s: OddQuadSpace, mat: np.ndarray, i: int, j: int) -> int:
    """sigma_ij = (sigma e_j)_i for Theta indices."""
    return int(mat[s.pos(i), s.pos(j)])


def _q0_of_column(s: OddQuadSpace, mat: np.ndarray, col: int) -> HElem:
    v = mat[:, col]
    return s.q0(v)


def is_unitary(s: OddQuadSpace, sigma: UElem) -> bool:
    """Membership in the odd unitary group via the six block conditions."""
    r = s.ring
    m = r.m
    sm, si = sigma.mat, sigma.inv
    h = 2 * s.n
    # (i) adjoint identity on the hh block of the inverse
    for i in s.theta:
        ei = s.eps(i)
        for j in s.theta:
            lhs = si[s.pos(i), s.pos(j)]
            rhs = (-ei * r.bar(int(sm[s.pos(-j), s.pos(-i)])) * s.eps(-j)) % m
            if lhs != rhs:
                return False
    # (ii)-(iv) mixed-block adjoint identities on V0 basis vectors
    for k in range(s.r):
        col = h + k
        for i in s.theta:
            # (ii): (sigma~^{0h} f_k)_i = -eps_i B0(sigma^{h0} e_{-i}, f_k)
            lhs = int(si[s.pos(i), col])
            v0 = s.v0_part(sm[:, s.pos(-i)])
            fk = tuple(1 if t == k else 0 for t in range(s.r))
            rhs = (-s.eps(i) * s.v0.b0(v0, fk)) % m
            if lhs != rhs:
                return False
            # (iii): B0(f_k, sigma~^{h0} e_i) = bar((sigma f_k)_{-i}) eps_{-i}
            lhs = s.v0.b0(fk, s.v0_part(si[:, s.pos(i)]))
            rhs = (r.bar(int(sm[s.pos(-i), col])) * s.eps(-i)) % m
            if lhs != rhs:
                return False
        for l in range(s.r):
            # (iv): B0(f_k, sigma~^{00} f_l) = B0(sigma^{00} f_k, f_l)
            fk = tuple(1 if t == k else 0 for t in range(s.r))
            fl = tuple(1 if t == l else 0 for t in range(s.r))
            lhs = s.v0.b0(fk, s.v0_part(si[:, h + l]))
            rhs = s.v0.b0(s.v0_part(sm[:, col]), fl)
            if lhs != rhs:
                return False
    # (v) Q0(sigma e_i) in L0
    for i in s.theta:
        if _q0_of_column(s, sm, s.pos(i)) not in s.l0:
            return False
    # (vi) Q0(sigma f_k) - Q0(f_k) in L0 on basis vectors
    for k in range(s.r):
        qa = _q0_of_column(s, sm, h + k)
        fk = HElem(tuple(1 if t == k else 0 for t in range(s.r)), 0)
        if s.v0.hsub(qa, fk) not in s.l0:
            return False
    return True


def brute_force_is_unitary(s: OddQuadSpace, sigma: UElem, max_bits: int = 16) -> bool:
    """Definition-level membership test by full enumeration of V.

    Checks B(sigma v, sigma w) = B(v, w) on all pairs (as the equivalent exact
    matrix identity on the batched coordinate array) and Q(sigma v) = Q(v) in
    H/L for every v against a materialized form parameter.
    """
    m = s.ring.m
    if s.dim * m.bit_length() > max_bits:
        raise SpaceTooLarge(f"enumeration over {m}^{s.dim} vectors refused")
    sm = sigma.mat
    # all pairs at once: (sigma V)^T G (sigma V) vs V^T G V for V = all vectors
    vs = np.array(list(s.all_vectors()), dtype=np.int64)
    sv = (vs @ sm.T) % m
    gb = ((sv @ s.gram_full) % m @ sv.T) % m
    gv = ((vs @ s.gram_full) % m @ vs.T) % m
    if (gb != gv).any():
        return False
    big_l = s.big_l_set(max_bits=max_bits + 8)
    for v, w in zip(vs, sv):
        diff = s.hplus_full((w, 0), s.hneg_full((v, 0)))
        if (tuple(int(t) for t in diff[0]), int(diff[1])) not in big_l:
            return False
    return True


def hyperbolic_diag_unit(s: OddQuadSpace, i: int, u: int) -> UElem:
    """e_i -> e_i u, e_{-i} -> e_{-i} bar(1) bar(u)^-1, all else fixed."""
    r = s.ring
    mat = np.eye(s.dim, dtype=np.int64)
    mat[s.pos(i), s.pos(i)] = r.norm(u)
    mat[s.pos(-i), s.pos(-i)] = r.mul(r.bar(1), r.inv(r.bar(u)))
    return UElem(r, mat)


def random_unitary(s: OddQuadSpace, seed: int, length: int) -> UElem:
    """Deterministic product of random elementary transvections and diagonal units."""
    from .transvections import Extra, Short, gen_matrix

    rng = random.Random(seed)
    l0_elems = s.l0.sorted_elements()
    units = s.ring.units()
    acc = identity(s)
    for _ in range(length):
        kind = rng.randrange(3)
        if kind == 0:
            i = rng.choice(s.theta)
            j = rng.choice([t for t in s.theta if t not in (i, -i)])
            x = rng.randrange(s.ring.m)
            fac = UElem(s.ring, gen_matrix(s, Short(i, j, x)))
        elif kind == 1:
            i = rng.choice(s.theta)
            xi = rng.choice(l0_elems)
            fac = UElem(s.ring, gen_matrix(s, Extra(i, xi)))
        else:
            i = rng.choice(s.theta)
            u = rng.choice(units)
            fac = hyperbolic_diag_unit(s, i, u)
        acc = mul(acc, fac)
    return acc


def require_unitary(s: OddQuadSpace, sigma: UElem):
    if not is_unitary(s, sigma):
        raise NotUnitary("element is not in the odd unitary group")
