"""The tower of linearized free-group categories at a fixed level.

A hom class at level d from Free(s) to Free(t) is stored as a normal form
(an element of the s-fold tensor power of the truncated tensor algebra,
cut at total degree d, with the tuple-of-words basis) together with the
list of group-morphism representatives that project onto it.  Composition
happens on representatives and is reprojected; well-definedness is a
theorem upstream and a property test here, exercised with lower central
series perturbations, which the level-d projection cannot see at depth
d+1.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .freelie import witt_dim
from .functors import GrMorphism, compose_gr, identity_gr
from .linalg import IndexedBasis, SparseMatrix, rank
from .tensoralg import (
    expand_group_word,
    free_reduce,
    gw_commutator,
    gw_inv,
    gw_mul,
    words_upto,
)


def tuple_word_basis(s, t, d):
    """s-tuples of words over {1..t} with total length <= d, graded order."""
    keys = []
    for combo in itertools.product(list(words_upto(t, d)), repeat=s):
        total = sum(len(w) for w in combo)
        if total <= d:
            keys.append(tuple(combo))
    keys.sort(key=lambda combo: (sum(len(w) for w in combo), combo))
    return IndexedBasis(keys)


def tower_hom_dim(s, t, d):
    """Count of s-tuples of words over t letters with total length <= d."""
    return sum(comb(k + s - 1, s - 1) * t**k for k in range(d + 1))


@dataclass(frozen=True)
class TowerMorphism:
    d: int
    s: int
    t: int
    normal_form: tuple  # sorted tuple of (word-tuple, Fraction)
    reps: tuple  # tuple of (Fraction, GrMorphism)

    def nf_dict(self):
        return dict(self.normal_form)

    def __eq__(self, other):
        """Equality of hom classes is equality of normal forms."""
        return (
            isinstance(other, TowerMorphism)
            and (self.d, self.s, self.t) == (other.d, other.s, other.t)
            and self.normal_form == other.normal_form
        )


def _project_images(images, d, t):
    """Tuple-of-words expansion of one morphism, cut at total degree d."""
    out = {(): Fraction(1)}
    for w in images:
        expansion = expand_group_word(w, d, t)
        nxt = {}
        for prefix, c in out.items():
            used = sum(len(p) for p in prefix)
            for word, v in expansion.coeffs.items():
                if used + len(word) <= d:
                    key = prefix + (word,)
                    nxt[key] = nxt.get(key, Fraction(0)) + c * v
        out = nxt
    return {k: v for k, v in out.items() if v}


def project_hom(f, d):
    """Level-d class of a free-group morphism."""
    nf = _project_images(f.images, d, f.target_rank)
    return TowerMorphism(
        d,
        f.source_rank,
        f.target_rank,
        tuple(sorted(nf.items(), key=lambda kv: (sum(len(w) for w in kv[0]), kv[0]))),
        ((Fraction(1), f),),
    )


def project_combination(pairs, d, s, t):
    """Level-d class of a rational combination of morphisms."""
    acc = {}
    reps = []
    for coeff, f in pairs:
        coeff = Fraction(coeff)
        if not coeff:
            continue
        if f.source_rank != s or f.target_rank != t:
            raise ValueError("mixed ranks in combination")
        reps.append((coeff, f))
        for key, v in _project_images(f.images, d, t).items():
            nv = acc.get(key, Fraction(0)) + coeff * v
            if nv:
                acc[key] = nv
            else:
                del acc[key]
    return TowerMorphism(
        d,
        s,
        t,
        tuple(sorted(acc.items(), key=lambda kv: (sum(len(w) for w in kv[0]), kv[0]))),
        tuple(reps),
    )


def tower_identity(n, d):
    return project_hom(identity_gr(n), d)


def tower_compose(g, f):
    """Compose via representatives, then reproject.

    The result does not depend on the chosen representatives; this is
    property-tested through lower-central-series perturbations.
    """
    if g.d != f.d:
        raise ValueError(f"levels differ: {g.d} vs {f.d}")
    if g.s != f.t:
        raise ValueError(f"inner ranks differ: {g.s} vs {f.t}")
    pairs = [
        (cg * cf, compose_gr(mg, mf))
        for cg, mg in g.reps
        for cf, mf in f.reps
    ]
    return project_combination(pairs, f.d, f.s, g.t)


# --- lower central series sampling ------------------------------------------


@dataclass(frozen=True)
class GammaWord:
    """A group word built as an iterated commutator of nesting depth >= depth."""

    depth: int
    word: tuple


def gamma_sample(depth, rank, rng):
    """Seeded iterated commutator of the requested nesting depth.

    Left-normed: [[...[[g1, g2], g3] ...], g_k] with g1 != g2 when the rank
    allows, retrying letters whenever a stage would collapse to the
    identity.  At rank one and depth >= 2 the only such word is trivial.
    """
    if isinstance(rng, int):
        rng = random.Random(rng)
    if depth < 1 or rank < 1:
        raise ValueError("depth and rank must be >= 1")
    word = ((rng.randint(1, rank), rng.choice((1, -1))),)
    for _ in range(depth - 1):
        for _attempt in range(4 * rank):
            g = ((rng.randint(1, rank), rng.choice((1, -1))),)
            candidate = gw_commutator(word, g)
            if candidate:
                word = candidate
                break
        else:
            word = gw_commutator(word, ((1, 1),))  # rank 1: trivial is all there is
    return GammaWord(depth, free_reduce(word))


def perturb_morphism(f, gamma_words):
    """Multiply each image word of f on the right by the given commutators."""
    images = tuple(
        gw_mul(w, gamma.word) for w, gamma in zip(f.images, gamma_words)
    )
    return GrMorphism(f.source_rank, f.target_rank, images)


def enumerate_morphisms(s, t, max_len):
    """All morphisms Free(s) -> Free(t) with reduced image words of length <= max_len."""
    reduced_words = sorted(
        {
            free_reduce(w)
            for k in range(max_len + 1)
            for w in itertools.product(
                [(i, e) for i in range(1, t + 1) for e in (1, -1)], repeat=k
            )
        },
        key=lambda w: (len(w), w),
    )
    for images in itertools.product(reduced_words, repeat=s):
        yield GrMorphism(s, t, images)


def projection_rank(s, t, d, max_len=None):
    """Rank of the span of level-d classes of enumerated morphisms.

    Surjectivity of the projection predicts tower_hom_dim(s, t, d) once
    max_len is at least d.
    """
    if max_len is None:
        max_len = d
    basis = tuple_word_basis(s, t, d)
    entries = {}
    row = 0
    for f in enumerate_morphisms(s, t, max_len):
        for key, v in _project_images(f.images, d, t).items():
            entries[(row, basis.position(key))] = v
        row += 1
    return rank(SparseMatrix(row, len(basis), entries))


# --- graded symmetric powers (exact generating-function arithmetic) ----------


def symmetric_power_dims(t, d):
    """Graded dimensions of the symmetric powers of the graded space L
    with dim L_k = witt_dim(t, k).

    Returns a list indexed by the number n of symmetric factors; entry n is
    the list of dims of the degree-0..d parts of the n-th symmetric power.
    Computed by expanding prod_k (1 - y x^k)^{-w_k} as a truncated
    bivariate series with integer coefficients.
    """
    # table[n][j] = dim of degree-j part of S^n(L); n <= d since S^n(L) has
    # no component in degree < n.
    table = [[0] * (d + 1) for _ in range(d + 2)]
    table[0][0] = 1
    for k in range(1, d + 1):
        w = witt_dim(t, k)
        if w == 0:
            continue
        # multiply by sum_j C(w + j - 1, j) y^j x^{kj}
        new = [[0] * (d + 1) for _ in range(d + 2)]
        for n in range(d + 2):
            for deg in range(d + 1):
                c = table[n][deg]
                if not c:
                    continue
                j = 0
                while deg + k * j <= d and n + j <= d + 1:
                    new[n + j][deg + k * j] += c * comb(w + j - 1, j)
                    j += 1
        table = new
    return table


def pbw_graded_check(t, d):
    """Per-degree totals sum_n dim S^n(L)_k against the word count t^k.

    Returns (totals, expected) lists for degrees 0..d.
    """
    table = symmetric_power_dims(t, d)
    totals = [sum(table[n][k] for n in range(len(table))) for k in range(d + 1)]
    expected = [t**k for k in range(d + 1)]
    return totals, expected
