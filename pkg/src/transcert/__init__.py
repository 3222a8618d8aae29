"""Certified computations for the j-invariant transcendence argument.

Modules: ``qseries`` (exact q-expansions), ``modforms`` (Hecke constant),
``numerics`` (ball arithmetic), ``siegel`` (small kernel vectors), ``auxfn``
(the auxiliary function and its analytic bounds), ``heights``, ``modpoly``,
``primes``, ``chain`` (constant ledger and inequality chain) and ``cli``.
"""

__version__ = "0.1.0"
