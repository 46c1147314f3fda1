"""Odd quadratic spaces H^n | V0 with Theta-indexed hyperbolic bases.

The hyperbolic part has basis e_1, ..., e_n, e_-n, ..., e_-1 indexed by
Theta = {1..n, -n..-1} with order 1 < ... < n < -n < ... < -1 and signs
eps_i = bar(1)^-1 for i > 0, eps_i = -1 for i < 0.  The auxiliary form
F_h(v, w) = sum_{i>0} bar(v_i) bar(1)^-1 w_{-i} recovers the anti-Hermitian
form via B_h(v, w) = F_h(v, w) - bar(F_h(w, v)), and the reduction map
Q0(v) = (v_0, -F_h(v_h, v_h)) carries all form-parameter membership questions
down to the small space V0.  The full-space form parameter is never
materialized on production paths; a brute-force materialization exists for
cross-validation at tiny sizes.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import SpaceTooLarge
from .heisenberg import AHSpace, FormParameter, HElem
from .ring import Zmod


class OddQuadSpace:
    """Hyperbolic space H^n orthogonal to V0, with an odd form parameter on V0."""

    def __init__(self, ring: Zmod, n: int, v0: AHSpace, l0: FormParameter):
        if n < 1:
            raise ValueError("hyperbolic rank must be >= 1")
        if v0.ring != ring or l0.space != v0:
            raise ValueError("ring / V0 / form parameter mismatch")
        self.ring = ring
        self.n = n
        self.v0 = v0
        self.l0 = l0
        self.r = v0.rank
        self.dim = 2 * n + self.r
        self.theta = list(range(1, n + 1)) + list(range(-n, 0))
        # Gram matrix of B on the full space in the canonical basis order.
        m = ring.m
        g = np.zeros((self.dim, self.dim), dtype=np.int64)
        for i in range(1, n + 1):
            g[self.pos(i), self.pos(-i)] = 1
            g[self.pos(-i), self.pos(i)] = (-ring.bar(1)) % m
        for a in range(self.r):
            for b in range(self.r):
                g[2 * n + a, 2 * n + b] = v0.gram[a][b]
        g.flags.writeable = False
        self.gram_full = g
        self._gen_cache: dict = {}
        self._eword_cache: dict = {}

    # -- indexing ----------------------------------------------------------

    def pos(self, i: int) -> int:
        """Position of basis vector e_i in the canonical layout."""
        return i - 1 if i > 0 else 2 * self.n + i

    def eps(self, i: int) -> int:
        r = self.ring
        return r.bar1_inv if i > 0 else (-1) % r.m

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[self.pos(i)] = 1
        return v

    def f_basis(self, k: int) -> np.ndarray:
        """Basis vector f_k of V0 inside the full space (0-based k)."""
        v = np.zeros(self.dim, dtype=np.int64)
        v[2 * self.n + k] = 1
        return v

    def vec(self, coords) -> np.ndarray:
        return np.asarray(coords, dtype=np.int64) % self.ring.m

    def v0_part(self, v) -> tuple:
        return tuple(int(c) % self.ring.m for c in v[2 * self.n :])

    def h_coord(self, v, i: int) -> int:
        return int(v[self.pos(i)]) % self.ring.m

    # -- forms ---------------------------------------------------------------

    def f_h(self, v, w) -> int:
        """F_h(v, w) = sum_{i in Theta+} bar(v_i) bar(1)^-1 w_{-i}."""
        r = self.ring
        total = 0
        for i in range(1, self.n + 1):
            total += r.bar(int(v[self.pos(i)])) * r.bar1_inv * int(w[self.pos(-i)])
        return total % r.m

    def big_b(self, v, w) -> int:
        """B(v, w) = B_h(v_h, w_h) + B0(v_0, w_0)."""
        return int(np.asarray(v) @ self.gram_full @ np.asarray(w)) % self.ring.m

    def q0(self, v) -> HElem:
        """Q0(v) = (v_0, -F_h(v_h, v_h))."""
        return HElem(self.v0_part(v), (-self.f_h(v, v)) % self.ring.m)

    # -- form parameter membership ------------------------------------------

    def in_big_l(self, a) -> bool:
        """(v, x) lies in the full form parameter iff (v0, x - F_h(v_h,v_h)) in L0."""
        v, x = a
        red = HElem(self.v0_part(v), (x - self.f_h(v, v)) % self.ring.m)
        return red in self.l0

    def q_equiv(self, v, w) -> bool:
        """Q(v) = Q(w) mod L, decided through the Q0 reduction."""
        d = self.v0.hsub(self.q0(v), self.q0(w))
        return d in self.l0

    def is_isotropic(self, v) -> bool:
        return self.in_big_l((v, 0))

    def is_hyperbolic_pair(self, v, w) -> bool:
        return (
            self.is_isotropic(v)
            and self.is_isotropic(w)
            and self.big_b(v, w) == 1 % self.ring.m
        )

    # -- full-space Heisenberg group (test-scale helpers) --------------------

    def hplus_full(self, a, b):
        va, xa = a
        vb, xb = b
        v = (np.asarray(va) + np.asarray(vb)) % self.ring.m
        return (v, (xa + xb + self.big_b(va, vb)) % self.ring.m)

    def hneg_full(self, a):
        v, x = a
        return ((-np.asarray(v)) % self.ring.m, (-x + self.big_b(v, v)) % self.ring.m)

    def haction_full(self, a, y: int):
        v, x = a
        r = self.ring
        return (
            (np.asarray(v) * y) % r.m,
            (r.bar(y) * r.bar1_inv * x * y) % r.m,
        )

    def big_l_set(self, max_bits: int = 22) -> set:
        """Materialized full form parameter, for cross-validation only.

        L = L_h + L0 with L_h = {(v_h, F_h(v_h, v_h) + x + bar(x))}.  Entries
        are (coords tuple, scalar) pairs.
        """
        m = self.ring.m
        if self.dim * m.bit_length() > max_bits:
            raise SpaceTooLarge("refusing to materialize L at this size")
        mins = sorted(self.v0.min_scalars())
        out = set()
        zeros0 = (0,) * self.r
        for vh in itertools.product(range(m), repeat=2 * self.n):
            v = np.array(vh + zeros0, dtype=np.int64)
            f = self.f_h(v, v)
            for s in mins:
                base = (v, (f + s) % m)
                for l0e in self.l0.elements:
                    full = self.hplus_full(
                        base, (np.array((0,) * 2 * self.n + l0e.v), l0e.x)
                    )
                    out.add((tuple(int(t) for t in full[0]), int(full[1])))
        return out

    def all_vectors(self):
        for c in itertools.product(range(self.ring.m), repeat=self.dim):
            yield np.array(c, dtype=np.int64)

    def __repr__(self):
        return f"OddQuadSpace(Z/{self.ring.m}, lam={self.ring.lam}, n={self.n}, r={self.r})"
