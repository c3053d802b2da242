"""Free Lie algebras in Lyndon coordinates, truncated at a fixed degree.

Lyndon words of length 1..d over {1..t} index a basis of Lie_{<=d}(Q^t).
Each Lyndon word carries its right standard bracketing, whose expansion in
the tensor algebra is triangular: it equals the word itself plus
lexicographically larger words of the same length.  That triangularity
drives `from_tensor`, which re-expresses Lie-subspace tensors in Lyndon
coordinates by elimination, and `bch`, the truncated
Baker-Campbell-Hausdorff element computed through the tensor embedding
as log(exp(x) exp(y)).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .tensoralg import (
    TruncTensorElement,
    tt_add,
    tt_exp,
    tt_generator,
    tt_log,
    tt_mul,
    tt_scale,
    tt_sub,
    tt_zero,
    word_key,
)


class NotLieError(ValueError):
    """Raised by from_tensor on input outside the Lie subspace.

    Carries the nonzero residual left after triangular elimination.
    """

    def __init__(self, residual):
        super().__init__(f"element is not in the free Lie subspace; residual {residual!r}")
        self.residual = residual


def lyndon_words(t, d):
    """All Lyndon words over {1..t} of length 1..d, in length-lex order."""
    if t < 0 or d < 0:
        raise ValueError("alphabet size and degree cap must be nonnegative")
    words = []
    if t >= 1 and d >= 1:
        # Duval's generation, lexicographic order: pad the current Lyndon
        # word periodically to length d, strip trailing maximal letters,
        # increment the last letter.
        w = [0]
        while w:
            w[-1] += 1
            m = len(w)
            words.append(tuple(w))
            while len(w) < d:
                w.append(w[len(w) - m])
            while w and w[-1] == t:
                w.pop()
    words.sort(key=word_key)
    return words


def is_lyndon(w):
    """True if w is strictly smaller than all of its proper rotations."""
    n = len(w)
    if n == 0:
        return False
    return all(w < w[i:] + w[:i] for i in range(1, n))


@lru_cache(maxsize=None)
def _mobius(n):
    if n == 1:
        return 1
    result = 1
    p = 2
    m = n
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    if m > 1:
        result = -result
    return result


def witt_dim(t, k):
    """(1/k) sum_{m | k} mu(k/m) t^m: dim of the degree-k part of Lie(Q^t)."""
    if k < 1:
        raise ValueError("degree must be >= 1")
    total = sum(_mobius(k // m) * t**m for m in range(1, k + 1) if k % m == 0)
    q, r = divmod(total, k)
    assert r == 0
    return q


def standard_factorization(w):
    """Right standard factorization (u, v) of a Lyndon word of length >= 2.

    v is the longest proper suffix of w that is Lyndon (equivalently the
    lexicographically least proper suffix); u is then Lyndon as well.
    """
    n = len(w)
    for start in range(1, n):
        if is_lyndon(w[start:]):
            return w[:start], w[start:]
    raise ValueError(f"{w} has no standard factorization (not Lyndon of length >= 2)")


@lru_cache(maxsize=None)
def standard_bracketing(w):
    """Nested bracketing of a Lyndon word: a letter, or a pair of bracketings."""
    if len(w) == 1:
        return w[0]
    u, v = standard_factorization(w)
    return (standard_bracketing(u), standard_bracketing(v))


def bracketing_to_tensor(node, leaf_map, d, t):
    """Expand a nested bracketing into the tensor algebra.

    leaf_map sends each leaf to a TruncTensorElement; internal nodes become
    commutators ab - ba.
    """
    if not isinstance(node, tuple):
        return leaf_map(node)
    a = bracketing_to_tensor(node[0], leaf_map, d, t)
    b = bracketing_to_tensor(node[1], leaf_map, d, t)
    return tt_sub(tt_mul(a, b), tt_mul(b, a))


class LyndonBasis:
    """The Lyndon-word basis of Lie_{<=d}(Q^t), with tensor expansions."""

    def __init__(self, t, d):
        self.alphabet_size = t
        self.degree_cap = d
        self.words = tuple(lyndon_words(t, d))
        self._index = {w: i for i, w in enumerate(self.words)}
        self.expansions = {
            w: bracketing_to_tensor(
                standard_bracketing(w), lambda a: tt_generator(a, d, t), d, t
            )
            for w in self.words
        }

    def __len__(self):
        return len(self.words)

    def __contains__(self, w):
        return w in self._index

    def index(self, w):
        return self._index[w]

    def zero(self):
        return LieElement(self, {})


@lru_cache(maxsize=None)
def lyndon_basis(t, d):
    return LyndonBasis(t, d)


class LieElement:
    """Element of Lie_{<=d}(Q^t) in Lyndon coordinates."""

    __slots__ = ("basis", "coords")

    def __init__(self, basis, coords):
        self.basis = basis
        self.coords = coords

    def __eq__(self, other):
        return (
            isinstance(other, LieElement)
            and self.basis is other.basis
            and self.coords == other.coords
        )

    def __repr__(self):
        if not self.coords:
            return "0"
        items = sorted(self.coords.items(), key=lambda kv: word_key(kv[0]))
        return " + ".join(f"{c}*[{'.'.join(map(str, w))}]" for w, c in items)

    def is_zero(self):
        return not self.coords


def lie_zero(basis):
    return LieElement(basis, {})


def lie_generator(basis, i):
    if (i,) not in basis:
        raise ValueError(f"no generator {i} in basis with t={basis.alphabet_size}, d={basis.degree_cap}")
    return LieElement(basis, {(i,): Fraction(1)})


def lie_add(u, v):
    _check_context(u, v)
    out = dict(u.coords)
    for w, c in v.coords.items():
        s = out.get(w, Fraction(0)) + c
        if s:
            out[w] = s
        else:
            out.pop(w, None)
    return LieElement(u.basis, out)


def lie_scale(u, c):
    c = Fraction(c)
    if not c:
        return lie_zero(u.basis)
    return LieElement(u.basis, {w: v * c for w, v in u.coords.items()})


def lie_sub(u, v):
    return lie_add(u, lie_scale(v, -1))


def _check_context(u, v):
    if u.basis is not v.basis and (
        u.basis.alphabet_size != v.basis.alphabet_size
        or u.basis.degree_cap != v.basis.degree_cap
    ):
        raise ValueError("Lie elements from different basis contexts")


def to_tensor(u):
    """Embedding into T^{<=d} via the standard-bracketing expansions."""
    b = u.basis
    out = tt_zero(b.degree_cap, b.alphabet_size)
    for w, c in u.coords.items():
        out = tt_add(out, tt_scale(b.expansions[w], c))
    return out


def from_tensor(x, basis):
    """Lyndon coordinates of a tensor element in the Lie subspace.

    Triangular elimination in length-lex order: the expansion of a Lyndon
    word w is w plus lex-larger words of the same length, so scanning basis
    words in order makes each coordinate final when read off.  A nonzero
    residual afterwards means x is not in the Lie subspace.
    """
    if x.degree_cap != basis.degree_cap or x.alphabet_size != basis.alphabet_size:
        raise ValueError("tensor element does not match basis context")
    residual = x
    coords = {}
    for w in basis.words:
        c = residual.coeffs.get(w)
        if c:
            coords[w] = c
            residual = tt_sub(residual, tt_scale(basis.expansions[w], c))
    if residual.coeffs:
        raise NotLieError(residual)
    return LieElement(basis, coords)


def bracket(u, v):
    """[u, v], computed as uv - vu in the tensor algebra and re-extracted."""
    _check_context(u, v)
    tu, tv = to_tensor(u), to_tensor(v)
    return from_tensor(tt_sub(tt_mul(tu, tv), tt_mul(tv, tu)), u.basis)


def bch(u, v):
    """Truncated Baker-Campbell-Hausdorff element log(exp(u) exp(v)).

    Computed through the tensor embedding, so the Lie-ness of the result is
    verified by from_tensor on every call rather than assumed.
    """
    _check_context(u, v)
    w = tt_log(tt_mul(tt_exp(to_tensor(u)), tt_exp(to_tensor(v))))
    return from_tensor(w, u.basis)


def bch_of_generators(i, j, d, t=2):
    """bch_d(x_i, x_j) inside Lie_{<=d}(Q^t)."""
    basis = lyndon_basis(t, d)
    return bch(lie_generator(basis, i), lie_generator(basis, j))
