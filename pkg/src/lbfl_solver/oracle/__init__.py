"""
Brute-force oracles for tiny LBFL, UFL, CFL, TCSD and LBFL-with-penalty instances.
"""

from .brute import brute_cfl, brute_lbfl, brute_lbflp, brute_tcsd, brute_ufl

__all__ = ["brute_lbfl", "brute_ufl", "brute_cfl", "brute_tcsd", "brute_lbflp"]
