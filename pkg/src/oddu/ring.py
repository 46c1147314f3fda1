"""Finite commutative rings Z/m with pseudoinvolution, units and bar-stable ideals.

A pseudoinvolution is an additive map x -> bar(x) with bar(bar(x)) = x and
bar(x*y) = bar(y) * bar(1)^-1 * bar(x).  Over Z/m every such map fixing the
identity ring automorphism has the shape bar(x) = lam*x with lam^2 = 1 mod m,
and that is the ring family implemented here.  Ideals of Z/m are principal and
are kept in canonical gcd form, so containment tests are O(1); every ideal is
automatically bar-stable because lam is a unit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ModulusTooSmall, NotAUnit, NotPseudoinvolution


class Zmod:
    """The ring Z/m equipped with the pseudoinvolution x -> lam*x."""

    __slots__ = ("m", "lam")

    def __init__(self, m: int, lam: int):
        if m < 2:
            raise ModulusTooSmall(f"modulus must be >= 2, got {m}")
        lam = lam % m
        if (lam * lam) % m != 1:
            raise NotPseudoinvolution(f"lambda={lam} has lambda^2 != 1 mod {m}")
        self.m = m
        self.lam = lam

    def norm(self, x: int) -> int:
        return x % self.m

    def add(self, x: int, y: int) -> int:
        return (x + y) % self.m

    def sub(self, x: int, y: int) -> int:
        return (x - y) % self.m

    def neg(self, x: int) -> int:
        return (-x) % self.m

    def mul(self, x: int, y: int) -> int:
        return (x * y) % self.m

    def bar(self, x: int) -> int:
        return (self.lam * x) % self.m

    def is_unit(self, x: int) -> bool:
        return math.gcd(x % self.m, self.m) == 1

    def inv(self, x: int) -> int:
        x = x % self.m
        if math.gcd(x, self.m) != 1:
            raise NotAUnit(f"{x} is not invertible mod {self.m}")
        return pow(x, -1, self.m)

    def elements(self) -> range:
        return range(self.m)

    def units(self) -> list[int]:
        return [x for x in range(self.m) if math.gcd(x, self.m) == 1]

    # bar(1)^-1 appears in most of the sesquilinear formulas; for this ring
    # family it equals lam itself since lam^2 = 1.
    @property
    def bar1_inv(self) -> int:
        return self.lam

    def __eq__(self, other):
        return isinstance(other, Zmod) and (self.m, self.lam) == (other.m, other.lam)

    def __hash__(self):
        return hash((self.m, self.lam))

    def __repr__(self):
        return f"Zmod({self.m}, lam={self.lam})"

    def to_json(self) -> dict:
        return {"type": "zmod", "modulus": self.m, "lambda": self.lam}


def make_ring(m: int, lam: int) -> Zmod:
    """Build Z/m with bar(x) = lam*x, verifying the pseudoinvolution axioms.

    The axioms bar(bar(x)) = x and bar(x*y) = bar(y)*bar(1)^-1*bar(x) are
    re-verified by full scan; moduli are small so this is cheap insurance
    against an inconsistent (m, lam) slipping through.
    """
    r = Zmod(m, lam)
    b1i = r.inv(r.bar(1))
    for x in r.elements():
        if r.bar(r.bar(x)) != x:
            raise NotPseudoinvolution(f"bar is not an involution at x={x}")
        for y in r.elements():
            if r.bar(r.mul(x, y)) != r.mul(r.mul(r.bar(y), b1i), r.bar(x)):
                raise NotPseudoinvolution(f"product axiom fails at ({x},{y})")
    return r


@dataclass(frozen=True)
class Ideal:
    """An ideal of Z/m in canonical form: the divisor d of m generating it.

    d = 0 denotes the zero ideal.  bar(I) = I holds automatically.
    """

    ring: Zmod
    gen: int

    def contains(self, x: int) -> bool:
        x = x % self.ring.m
        if self.gen == 0:
            return x == 0
        return x % self.gen == 0

    def elements(self) -> list[int]:
        if self.gen == 0:
            return [0]
        return list(range(0, self.ring.m, self.gen))

    def issubset(self, other: "Ideal") -> bool:
        return all(other.contains(x) for x in self.elements())

    def __le__(self, other: "Ideal") -> bool:
        return self.issubset(other)

    def is_full(self) -> bool:
        return self.gen == 1


def ideal_generated(ring: Zmod, xs) -> Ideal:
    """Canonical ideal generated by the given residues (gcd with the modulus)."""
    g = ring.m
    for x in xs:
        g = math.gcd(g, x % ring.m)
    return Ideal(ring, g % ring.m)


def solve_linear_combination(ring: Zmod, target: int, coeffs) -> list[int] | None:
    """Solve sum_i x_i * coeffs[i] == target (mod m) for the x_i.

    Returns None when target is outside the ideal generated by the coeffs.
    Used by the extraction engine to split a residue along prescribed
    generators.
    """
    m = ring.m
    target = target % m
    vals = [c % m for c in coeffs]
    # Extended gcd chain starting from the modulus itself (combination 0),
    # folding in one coefficient at a time.
    g = m
    comb = [0] * len(vals)
    for idx, c in enumerate(vals):
        a, b = _xgcd_pair(g, c)
        g = math.gcd(g, c)
        comb = [a * t for t in comb]
        comb[idx] += b
    if target % g != 0:
        return None
    scale = target // g
    return [(scale * t) % m for t in comb]


def _xgcd_pair(a: int, b: int) -> tuple[int, int]:
    """Coefficients (x, y) with x*a + y*b == gcd(a, b)."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    return old_x, old_y
