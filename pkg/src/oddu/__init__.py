"""Exact arithmetic for odd unitary groups over Z/m with pseudoinvolution.

Submodules: ring, heisenberg, quadratic, group, transvections, ideals, words,
extraction, cli.
"""

from .ring import Ideal, Zmod, ideal_generated, make_ring

__all__ = ["Zmod", "Ideal", "make_ring", "ideal_generated"]
__version__ = "0.1.0"
