"""The Q-linear PROP built from the Lie operad, and its truncations.

A hom space from s to t is spanned by pairs (surjection f: {1..s} -> {1..t},
one multilinear Lyndon bracket per fiber).  Fibers inherit the order of
their global indices and brackets are stored over the local alphabet
1..|fiber|, so keys are canonical.  Composition is operadic substitution,
expanded through the tensor embedding of the free Lie algebra.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .freelie import (
    bracketing_to_tensor,
    from_tensor,
    lyndon_basis,
    standard_bracketing,
)
from .functors import MalcevFunctor, TruncTensorPower, cross_effect
from .tensoralg import tt_generator, word_to_str


@lru_cache(maxsize=None)
def multilinear_lyndon_words(m):
    """Lyndon words over {1..m} using each letter exactly once.

    A word with distinct letters is Lyndon iff it starts with its smallest
    letter, so these are the (m-1)! permutations fixing 1 in front.
    """
    if m == 0:
        return ()
    return tuple(
        (1,) + rest for rest in itertools.permutations(range(2, m + 1))
    )


@dataclass(frozen=True)
class CatLieBasisElement:
    """(surjection, one multilinear Lyndon bracket per fiber)."""

    fmap: tuple  # fmap[i-1] in 1..t for i in 1..s
    brackets: tuple  # brackets[j-1]: Lyndon word over local letters of fiber j

    @property
    def source(self):
        return len(self.fmap)

    @property
    def target(self):
        return len(self.brackets)

    def fiber(self, j):
        """Global indices mapping to j, in increasing order."""
        return tuple(i + 1 for i, v in enumerate(self.fmap) if v == j)

    def to_json_dict(self):
        return {
            "map": list(self.fmap),
            "brackets": [word_to_str(w) for w in self.brackets],
        }


@lru_cache(maxsize=None)
def catlie_basis(s, t):
    """All basis elements of the hom space from s to t."""
    out = []
    for fmap in itertools.product(range(1, t + 1), repeat=s):
        fiber_sizes = [0] * t
        for v in fmap:
            fiber_sizes[v - 1] += 1
        if any(size == 0 for size in fiber_sizes):
            continue
        for brackets in itertools.product(
            *(multilinear_lyndon_words(size) for size in fiber_sizes)
        ):
            out.append(CatLieBasisElement(fmap, brackets))
    return tuple(out)


def catlie_dim(s, t):
    """Number of (surjection, fiber-bracket) pairs; zero whenever t > s."""
    if s < 0 or t < 0:
        raise ValueError("arities must be nonnegative")
    return len(catlie_basis(s, t))


def catass_dim(s, t):
    """Hom dimension for the unital associative analogue.

    Sum over all set maps of the product of fiber factorials; equals the
    rising factorial t (t+1) ... (t+s-1).
    """
    if s < 0 or t < 0:
        raise ValueError("arities must be nonnegative")
    total = 0
    for fmap in itertools.product(range(1, t + 1), repeat=s):
        fiber_sizes = [0] * t
        for v in fmap:
            fiber_sizes[v - 1] += 1
        prod = 1
        for size in fiber_sizes:
            prod *= factorial(size)
        total += prod
    return total


def rising_factorial(t, s):
    out = 1
    for k in range(s):
        out *= t + k
    return out


class CatLieElement:
    """Rational combination of basis elements of one hom space."""

    __slots__ = ("s", "t", "coeffs")

    def __init__(self, s, t, coeffs):
        self.s = s
        self.t = t
        self.coeffs = {k: Fraction(v) for k, v in coeffs.items() if v}

    def __eq__(self, other):
        return (
            isinstance(other, CatLieElement)
            and self.s == other.s
            and self.t == other.t
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        if not self.coeffs:
            return f"0 in hom({self.s},{self.t})"
        return " + ".join(
            f"{c}*{k.to_json_dict()}" for k, c in self.coeffs.items()
        )

    def is_zero(self):
        return not self.coeffs


def catlie_from_basis(el):
    return CatLieElement(el.source, el.target, {el: Fraction(1)})


def catlie_identity(n):
    el = CatLieBasisElement(tuple(range(1, n + 1)), ((1,),) * n)
    return catlie_from_basis(el)


def catlie_add(a, b):
    if (a.s, a.t) != (b.s, b.t):
        raise ValueError("hom spaces differ")
    out = dict(a.coeffs)
    for k, v in b.coeffs.items():
        s = out.get(k, Fraction(0)) + v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return CatLieElement(a.s, a.t, out)


def catlie_scale(a, c):
    return CatLieElement(a.s, a.t, {k: v * Fraction(c) for k, v in a.coeffs.items()})


def _substituted_bracket(gamma, leaf_elements):
    """Lyndon coordinates of gamma with its leaves replaced by Lie brackets.

    gamma is a multilinear Lyndon word over {1..q}; leaf k is replaced by
    the bracket of leaf_elements[k-1], a pair (word, positions) where word
    is a Lyndon word over that fiber's local letters and positions maps
    those letters into the composite fiber's local alphabet.  Returns a
    dict Lyndon word -> coefficient over the composite alphabet.
    """
    m = sum(len(w) for w, _ in leaf_elements)
    basis = lyndon_basis(m, m)

    def leaf_tensor(k):
        word, positions = leaf_elements[k - 1]
        node = standard_bracketing(word)
        return bracketing_to_tensor(
            node, lambda a: tt_generator(positions[a], m, m), m, m
        )

    expanded = bracketing_to_tensor(standard_bracketing(gamma), leaf_tensor, m, m)
    return from_tensor(expanded, basis).coords


def _compose_basis(g_el, f_el):
    """Operadic substitution of basis elements; returns key -> coefficient."""
    u = g_el.target
    s = f_el.source
    h = tuple(g_el.fmap[f_el.fmap[x - 1] - 1] for x in range(1, s + 1))
    # Per composite fiber, the Lyndon expansion of the substituted bracket.
    fiber_choices = []
    for j in range(1, u + 1):
        h_fiber = tuple(x for x in range(1, s + 1) if h[x - 1] == j)
        pos_in_h = {x: idx + 1 for idx, x in enumerate(h_fiber)}
        leaf_elements = []
        for i in g_el.fiber(j):
            f_fiber = f_el.fiber(i)
            positions = {
                local: pos_in_h[global_letter]
                for local, global_letter in enumerate(f_fiber, start=1)
            }
            leaf_elements.append((f_el.brackets[i - 1], positions))
        coords = _substituted_bracket(g_el.brackets[j - 1], leaf_elements)
        fiber_choices.append(list(coords.items()))
    out = {}
    for combo in itertools.product(*fiber_choices):
        coeff = Fraction(1)
        words = []
        for w, c in combo:
            coeff *= c
            words.append(w)
        key = CatLieBasisElement(h, tuple(words))
        out[key] = out.get(key, Fraction(0)) + coeff
    return out


def catlie_compose(g, f):
    """Composite of g (t -> u) after f (s -> t), bilinear in both."""
    if f.t != g.s:
        raise ValueError(f"arity mismatch: {g.s} vs {f.t}")
    out = {}
    for g_el, gc in g.coeffs.items():
        for f_el, fc in f.coeffs.items():
            for key, c in _compose_basis(g_el, f_el).items():
                v = out.get(key, Fraction(0)) + gc * fc * c
                if v:
                    out[key] = v
                else:
                    del out[key]
    return CatLieElement(f.s, g.t, out)


def catlie_truncate(x, d):
    """Arity truncation: x unchanged when its source arity is <= d, else 0."""
    if x.s <= d:
        return x
    return CatLieElement(x.s, x.t, {})


def hom_via_cross_effect(s, t, d):
    """Hom dimension recovered from cross-effects of Lie-primitive powers.

    The s-th cross-effect of the t-fold tensor power of the Lie-primitive
    functor, read at its level-s truncation (the hom space is witnessed at
    level exactly s; for d >= s the level-s shadows agree for all d).
    Predicted to equal catlie_dim(s, t).
    """
    if d < s:
        warnings.warn(
            f"hom space from {s} needs level >= {s}; got degree {d}, returning 0",
            stacklevel=2,
        )
        return 0
    functor = TruncTensorPower([MalcevFunctor(d)] * t, cap=s)
    return cross_effect(functor, s).dim
