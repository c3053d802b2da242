"""Exact-arithmetic workbench for functor calculus on free groups.

Everything is computed over Q with exact rationals at a fixed truncation
degree: truncated tensor algebras and their group-word expansions, free
Lie algebras in Lyndon coordinates with the truncated BCH element, matrix
actions of free-group morphisms, the Lie PROP and its truncations, the
tower of linearized free-group categories, and Jacobi diagrams modulo
AS/IHX.
"""

__version__ = "0.1.0"
