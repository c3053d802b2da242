"""The category of finitely generated free groups and functors on it.

A morphism Free(s) -> Free(t) is an s-tuple of reduced words over t
letters; composition is substitution followed by free reduction.  Functor
instances (the group-ring truncation, its Lie primitives, abelianization,
and total-degree-truncated tensor powers) evaluate to indexed bases and
act by exact sparse matrices.  Cross-effects and the polynomial degree are
computed as joint kernels of generator-killing maps.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .linalg import (
    IndexedBasis,
    SparseMatrix,
    coordinates_in_span,
    joint_kernel,
)
from .freelie import (
    bch,
    bracket,
    lie_generator,
    lie_scale,
    lie_zero,
    lyndon_basis,
    standard_bracketing,
)
from .tensoralg import (
    expand_group_word,
    free_reduce,
    gw_from_str,
    gw_inv,
    gw_to_str,
    tensor_basis,
    tt_mul,
    tt_sub,
    tt_unit,
)


@dataclass(frozen=True)
class GrMorphism:
    """Morphism Free(source_rank) -> Free(target_rank), images freely reduced."""

    source_rank: int
    target_rank: int
    images: tuple

    def __post_init__(self):
        if len(self.images) != self.source_rank:
            raise ValueError("need one image word per source generator")
        reduced = tuple(free_reduce(w) for w in self.images)
        for w in reduced:
            for letter, _ in w:
                if not 1 <= letter <= self.target_rank:
                    raise ValueError(f"image letter {letter} outside 1..{self.target_rank}")
        object.__setattr__(self, "images", reduced)

    def __repr__(self):
        gens = ", ".join(
            f"{chr(ord('a') + i)}->{gw_to_str(w)}" for i, w in enumerate(self.images)
        )
        return f"GrMorphism({self.source_rank}->{self.target_rank}: {gens})"


def identity_gr(n):
    return GrMorphism(n, n, tuple(((i, 1),) for i in range(1, n + 1)))


def compose_gr(g, f):
    """g after f: substitute g's images into the image words of f."""
    if g.source_rank != f.target_rank:
        raise ValueError(
            f"rank mismatch: composing {g.source_rank}->{g.target_rank} after "
            f"{f.source_rank}->{f.target_rank}"
        )
    images = []
    for w in f.images:
        syllables = []
        for letter, sign in w:
            piece = g.images[letter - 1]
            syllables.extend(piece if sign == 1 else gw_inv(piece))
        images.append(free_reduce(syllables))
    return GrMorphism(f.source_rank, g.target_rank, tuple(images))


def trivial_gr(n):
    """Free(n) -> Free(0), every generator to the identity."""
    return GrMorphism(n, 0, ((),) * n)


def kill_generator(n, i):
    """Free(n) -> Free(n-1): generator i to the identity, the rest renumbered."""
    if not 1 <= i <= n:
        raise ValueError(f"no generator {i} in rank {n}")
    images = []
    for j in range(1, n + 1):
        if j == i:
            images.append(())
        elif j < i:
            images.append(((j, 1),))
        else:
            images.append(((j - 1, 1),))
    return GrMorphism(n, n - 1, tuple(images))


def permutation_gr(perm):
    """Free(n) -> Free(n) sending generator i to generator perm[i-1]."""
    n = len(perm)
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f"{perm} is not a permutation of 1..{n}")
    return GrMorphism(n, n, tuple(((perm[i], 1),) for i in range(n)))


def inversion_gr():
    """Rank-one morphism x -> x^{-1}."""
    return GrMorphism(1, 1, (((1, -1),),))


def diagonal_gr():
    """Rank-one cogroup morphism x -> x_1 x_2."""
    return GrMorphism(1, 2, (((1, 1), (2, 1)),))


def parse_gr(text, target_rank=None):
    """Parse "a->ab; b->B" into a GrMorphism; clause order fixes the source."""
    clauses = [c.strip() for c in text.split(";") if c.strip()]
    images = {}
    for clause in clauses:
        if "->" not in clause:
            raise ValueError(f"bad morphism clause {clause!r}")
        lhs, rhs = (p.strip() for p in clause.split("->", 1))
        if len(lhs) != 1 or not lhs.islower():
            raise ValueError(f"bad source generator {lhs!r}")
        idx = ord(lhs) - ord("a") + 1
        if idx in images:
            raise ValueError(f"generator {lhs!r} mapped twice")
        images[idx] = gw_from_str(rhs) if rhs and rhs != "e" else ()
    source_rank = len(images)
    if sorted(images) != list(range(1, source_rank + 1)):
        raise ValueError("source generators must be a, b, c, ... without gaps")
    image_list = tuple(images[i] for i in range(1, source_rank + 1))
    if target_rank is None:
        target_rank = max(
            (letter for w in image_list for letter, _ in w), default=0
        )
    return GrMorphism(source_rank, target_rank, image_list)


# --- concrete functor actions ----------------------------------------------


def passi_action(f, d):
    """Matrix of the degree-d group-ring truncation on f.

    Source basis: words over f.source_rank letters of length <= d; target
    likewise over f.target_rank.  A basis word maps to the truncated
    product of the expansions (image of letter) - 1.
    """
    s, t = f.source_rank, f.target_rank
    src = tensor_basis(s, d)
    tgt = tensor_basis(t, d)
    eps = [
        tt_sub(expand_group_word(w, d, t), tt_unit(d, t)) for w in f.images
    ]
    entries = {}
    cache = {(): tt_unit(d, t)}

    def column(word):
        if word in cache:
            return cache[word]
        out = tt_mul(column(word[:-1]), eps[word[-1] - 1])
        cache[word] = out
        return out

    for j, word in enumerate(src.keys):
        for w, c in column(word).coeffs.items():
            entries[(tgt.position(w), j)] = c
    return SparseMatrix(len(tgt), len(src), entries)


def word_log(w, d, t):
    """Logarithm of a group word in Lie_{<=d}(Q^t), by iterated bch."""
    basis = lyndon_basis(t, d)
    out = lie_zero(basis)
    for letter, sign in w:
        if not 1 <= letter <= t:
            raise ValueError(f"letter {letter} outside alphabet 1..{t}")
        out = bch(out, lie_scale(lie_generator(basis, letter), sign))
    return out


def malcev_action(f, d):
    """Matrix of the degree-d Lie-primitive functor on f.

    Generators map to word_log of their images; longer Lyndon words map to
    the bracket of the images of their standard factors, which keeps the
    action inside Lyndon coordinates and exercises the Lie-morphism
    property on every call.
    """
    s, t = f.source_rank, f.target_rank
    src = lyndon_basis(s, d)
    tgt = lyndon_basis(t, d)
    images = {}

    def image_of(w):
        if w in images:
            return images[w]
        if len(w) == 1:
            out = word_log(f.images[w[0] - 1], d, t)
        else:
            node = standard_bracketing(w)
            u = w[: _bracket_size(node[0])]
            v = w[_bracket_size(node[0]) :]
            out = bracket(image_of(u), image_of(v))
        images[w] = out
        return out

    entries = {}
    for j, w in enumerate(src.words):
        for wt, c in image_of(w).coords.items():
            entries[(tgt.index(wt), j)] = c
    return SparseMatrix(len(tgt), len(src), entries)


def _bracket_size(node):
    if not isinstance(node, tuple):
        return 1
    return _bracket_size(node[0]) + _bracket_size(node[1])


class Functor:
    """A functor on free groups with finite-dimensional values.

    Subclasses provide value_basis(n), an action matrix for each morphism,
    and the internal degree of each basis key (used for total-degree
    truncation of tensor powers).  Value bases and action matrices are
    cached per instance; semantics do not depend on the cache.
    """

    def __init__(self):
        self._basis_cache = {}
        self._action_cache = {}

    def value_basis(self, n):
        if n not in self._basis_cache:
            self._basis_cache[n] = self._build_basis(n)
        return self._basis_cache[n]

    def action(self, f):
        key = f
        if key not in self._action_cache:
            self._action_cache[key] = self._build_action(f)
        return self._action_cache[key]

    def dim(self, n):
        return len(self.value_basis(n))

    def _build_basis(self, n):
        raise NotImplementedError

    def _build_action(self, f):
        raise NotImplementedError

    def key_degree(self, key):
        raise NotImplementedError


class PassiFunctor(Functor):
    """Free(n) -> T^{<=d}(Q^n) with the group-ring truncation action."""

    def __init__(self, d):
        super().__init__()
        self.d = d

    def __repr__(self):
        return f"Passi({self.d})"

    def _build_basis(self, n):
        return tensor_basis(n, self.d)

    def _build_action(self, f):
        return passi_action(f, self.d)

    def key_degree(self, key):
        return len(key)


class MalcevFunctor(Functor):
    """Free(n) -> Lie_{<=d}(Q^n) with the log action."""

    def __init__(self, d):
        super().__init__()
        self.d = d

    def __repr__(self):
        return f"Malcev({self.d})"

    def _build_basis(self, n):
        return IndexedBasis(lyndon_basis(n, self.d).words)

    def _build_action(self, f):
        return malcev_action(f, self.d)

    def key_degree(self, key):
        return len(key)


class AbelianizationFunctor(Functor):
    """Free(n) -> Q^n; a degree-one, reduced, additive functor."""

    def __repr__(self):
        return "Abelianization"

    def _build_basis(self, n):
        return IndexedBasis(range(1, n + 1))

    def _build_action(self, f):
        entries = {}
        for j, w in enumerate(f.images):
            for letter, sign in w:
                key = (letter - 1, j)
                entries[key] = entries.get(key, Fraction(0)) + sign
        return SparseMatrix(f.target_rank, f.source_rank, entries)

    def key_degree(self, key):
        return 1


class ConstantFunctor(Functor):
    """The constant functor Q."""

    def __repr__(self):
        return "Constant"

    def _build_basis(self, n):
        return IndexedBasis([()])

    def _build_action(self, f):
        return SparseMatrix.identity(1)

    def key_degree(self, key):
        return 0


class TruncTensorPower(Functor):
    """Tensor product of functor instances, truncated at total degree <= cap.

    Basis keys are tuples of factor keys with total internal degree at most
    the cap.  The action is the entrywise tensor product of the factor
    actions with rows and columns above the cap discarded; validity of the
    truncation rests on every factor action being degree-nondecreasing,
    which is asserted when the matrix is assembled.
    """

    def __init__(self, factors, cap):
        super().__init__()
        self.factors = tuple(factors)
        self.cap = cap

    def __repr__(self):
        inner = ", ".join(map(repr, self.factors))
        return f"TruncTensorPower([{inner}], cap={self.cap})"

    def _build_basis(self, n):
        factor_bases = [f.value_basis(n) for f in self.factors]
        keys = []
        for combo in itertools.product(*factor_bases):
            deg = sum(f.key_degree(k) for f, k in zip(self.factors, combo))
            if deg <= self.cap:
                keys.append(tuple(combo))
        keys.sort(
            key=lambda combo: (
                sum(f.key_degree(k) for f, k in zip(self.factors, combo)),
                tuple(b.position(k) for b, k in zip(factor_bases, combo)),
            )
        )
        return IndexedBasis(keys)

    def key_degree(self, key):
        return sum(f.key_degree(k) for f, k in zip(self.factors, key))

    def _build_action(self, f):
        src = self.value_basis(f.source_rank)
        tgt = self.value_basis(f.target_rank)
        factor_src = [fac.value_basis(f.source_rank) for fac in self.factors]
        factor_tgt = [fac.value_basis(f.target_rank) for fac in self.factors]
        columns = []
        for slot, fac in enumerate(self.factors):
            m = fac.action(f)
            cols = {}
            for (i, j), v in m.entries.items():
                src_key = factor_src[slot].key_at(j)
                tgt_key = factor_tgt[slot].key_at(i)
                # Truncation discards total degrees above the cap; that is
                # only functorial if no factor action lowers the degree.
                assert fac.key_degree(tgt_key) >= fac.key_degree(src_key), (
                    f"{fac!r} action lowers degree on {src_key}"
                )
                cols.setdefault(src_key, []).append((tgt_key, v))
            columns.append(cols)
        entries = {}
        for j, combo in enumerate(src.keys):
            partial = [((), Fraction(1))]
            for slot, key in enumerate(combo):
                nxt = []
                for prefix, coeff in partial:
                    for tgt_key, v in columns[slot].get(key, ()):
                        cand = prefix + (tgt_key,)
                        deg = sum(
                            self.factors[k].key_degree(ck)
                            for k, ck in enumerate(cand)
                        )
                        if deg <= self.cap:
                            nxt.append((cand, coeff * v))
                partial = nxt
                if not partial:
                    break
            acc = {}
            for key, coeff in partial:
                acc[key] = acc.get(key, Fraction(0)) + coeff
            for key, coeff in acc.items():
                if coeff and key in tgt:
                    entries[(tgt.position(key), j)] = coeff
        return SparseMatrix(len(tgt), len(src), entries)


# --- cross-effects and polynomial degree ------------------------------------


@dataclass
class CrossEffect:
    """Joint kernel of the generator-killing maps at Free(s), with its
    symmetric-group action in kernel coordinates."""

    functor: Functor
    arity: int
    ambient_basis: IndexedBasis
    vectors: tuple

    @property
    def dim(self):
        return len(self.vectors)

    def action_of(self, perm):
        """Matrix of the generator-permuting morphism in kernel coordinates."""
        if sorted(perm) != list(range(1, self.arity + 1)):
            raise ValueError(f"{perm} is not a permutation of 1..{self.arity}")
        m = self.functor.action(permutation_gr(perm))
        entries = {}
        for j, vec in enumerate(self.vectors):
            image = m.apply(vec)
            coords = coordinates_in_span(self.vectors, image)
            if coords is None:
                raise ValueError("permutation action does not preserve the cross-effect")
            for i, c in enumerate(coords):
                if c:
                    entries[(i, j)] = c
        return SparseMatrix(self.dim, self.dim, entries)


def cross_effect(functor, s):
    """The s-th cross-effect of a functor instance.

    Computed as the joint kernel of the s generator-killing projections
    Free(s) -> Free(s-1); the empty intersection convention makes the 0th
    cross-effect the full value at the trivial group.
    """
    ambient = functor.value_basis(s)
    mats = [functor.action(kill_generator(s, i)) for i in range(1, s + 1)]
    vectors = joint_kernel(mats, cols=len(ambient))
    return CrossEffect(functor, s, ambient, tuple(vectors))


ABOVE_CAP = "above-cap"


def difference_dim(functor, k, r):
    """Dimension of the k-fold difference functor at Free(r).

    Realized as the joint kernel of the k maps Free(r+k) -> Free(r+k-1)
    killing each of the last k generators.
    """
    if k == 0:
        return functor.dim(r)
    n = r + k
    mats = [functor.action(kill_generator(n, i)) for i in range(r + 1, n + 1)]
    return len(joint_kernel(mats, cols=functor.dim(n)))


def poly_degree(functor, cap):
    """Least d <= cap whose (d+1)-fold difference vanishes at ranks 0..cap.

    Vanishing is only tested at ranks 0..cap, which suffices for the
    built-in functor kinds (their degree is witnessed at rank <= degree);
    in general this is a semi-decision and the result ABOVE_CAP means the
    degree exceeded the cap at some tested rank.
    """
    if cap < 0:
        raise ValueError("cap must be nonnegative")
    for d in range(cap + 1):
        if all(difference_dim(functor, d + 1, r) == 0 for r in range(cap + 1)):
            return d
    return ABOVE_CAP


def qhat_dim(functor, k, t):
    """Dimension of the kernel of the level-k to level-(k-1) reduction at Free(t)."""
    if not isinstance(functor, PassiFunctor):
        raise TypeError("qhat_dim is defined for the group-ring truncation functors")
    if k > functor.d:
        raise ValueError(f"level {k} exceeds functor degree {functor.d}")
    if k == 0:
        return 1
    src = tensor_basis(t, k)
    tgt = tensor_basis(t, k - 1)
    entries = {}
    for j, w in enumerate(src.keys):
        if len(w) <= k - 1:
            entries[(tgt.position(w), j)] = Fraction(1)
    reduction = SparseMatrix(len(tgt), len(src), entries)
    return len(joint_kernel([reduction]))
