"""Truncated tensor algebras and group-word expansions.

A word is a tuple of letters from {1..t}; the empty word is the unit.
T^{<=d}(Q^t) is modelled by finitely supported maps word -> Fraction with
all supported words of length <= d.  Free-group elements expand into this
algebra by sending a generator g to 1 + x_g and its inverse to the
truncated geometric series, making the expansion a monoid homomorphism on
reduced words.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .linalg import IndexedBasis

ZERO = Fraction(0)
ONE = Fraction(1)


def word_key(w):
    """Graded length-lexicographic sort key."""
    return (len(w), w)


def words_of_length(t, k):
    return itertools.product(range(1, t + 1), repeat=k)


def words_upto(t, d):
    for k in range(d + 1):
        yield from words_of_length(t, k)


def tensor_basis(t, d):
    """IndexedBasis of all words over {1..t} of length <= d, in graded lex order."""
    return IndexedBasis(tuple(w) for w in words_upto(t, d))


class TruncTensorElement:
    """Element of T^{<=d}(Q^t); treat as immutable after construction."""

    __slots__ = ("degree_cap", "alphabet_size", "coeffs")

    def __init__(self, degree_cap, alphabet_size, coeffs):
        self.degree_cap = degree_cap
        self.alphabet_size = alphabet_size
        self.coeffs = coeffs

    def __eq__(self, other):
        return (
            isinstance(other, TruncTensorElement)
            and self.degree_cap == other.degree_cap
            and self.alphabet_size == other.alphabet_size
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = [f"{c}*{word_to_str(w)}" for w, c in sorted(self.coeffs.items(), key=lambda kv: word_key(kv[0]))]
        return " + ".join(parts)

    def __getitem__(self, w):
        return self.coeffs.get(tuple(w), ZERO)

    def is_zero(self):
        return not self.coeffs

    def constant_term(self):
        return self.coeffs.get((), ZERO)

    def support(self):
        return sorted(self.coeffs, key=word_key)


def _make(d, t, coeffs):
    return TruncTensorElement(d, t, {w: c for w, c in coeffs.items() if c})


def tt_zero(d, t):
    return TruncTensorElement(d, t, {})


def tt_unit(d, t):
    return _make(d, t, {(): ONE})


def tt_generator(i, d, t):
    if not 1 <= i <= t:
        raise ValueError(f"letter {i} outside alphabet 1..{t}")
    if d < 1:
        return tt_zero(d, t)
    return _make(d, t, {(i,): ONE})


def tt_from_coeffs(d, t, coeffs):
    """Element from a word -> coefficient map, discarding words beyond the cap."""
    out = {}
    for w, c in coeffs.items():
        w = tuple(w)
        if any(not 1 <= a <= t for a in w):
            raise ValueError(f"word {w} has letters outside 1..{t}")
        if len(w) <= d and c:
            out[w] = Fraction(c)
    return TruncTensorElement(d, t, out)


def _check_compatible(a, b):
    if a.degree_cap != b.degree_cap or a.alphabet_size != b.alphabet_size:
        raise ValueError(
            f"incompatible contexts: cap {a.degree_cap} vs {b.degree_cap}, "
            f"alphabet {a.alphabet_size} vs {b.alphabet_size}"
        )


def tt_add(a, b):
    _check_compatible(a, b)
    out = dict(a.coeffs)
    for w, c in b.coeffs.items():
        s = out.get(w, ZERO) + c
        if s:
            out[w] = s
        else:
            out.pop(w, None)
    return TruncTensorElement(a.degree_cap, a.alphabet_size, out)


def tt_scale(a, c):
    c = Fraction(c)
    if not c:
        return tt_zero(a.degree_cap, a.alphabet_size)
    return TruncTensorElement(a.degree_cap, a.alphabet_size, {w: v * c for w, v in a.coeffs.items()})


def tt_sub(a, b):
    return tt_add(a, tt_scale(b, -1))


def tt_mul(a, b):
    """Concatenation product, discarding all words longer than the cap."""
    _check_compatible(a, b)
    d = a.degree_cap
    out = {}
    b_by_len = {}
    for w, c in b.coeffs.items():
        b_by_len.setdefault(len(w), []).append((w, c))
    for wa, ca in a.coeffs.items():
        room = d - len(wa)
        if room < 0:
            continue
        for lb, items in b_by_len.items():
            if lb > room:
                continue
            for wb, cb in items:
                w = wa + wb
                s = out.get(w, ZERO) + ca * cb
                if s:
                    out[w] = s
                else:
                    del out[w]
    return TruncTensorElement(d, a.alphabet_size, out)


def tt_pow(a, n):
    result = tt_unit(a.degree_cap, a.alphabet_size)
    for _ in range(n):
        result = tt_mul(result, a)
    return result


def tt_reduce_degree(u, d2):
    """Drop all words of length > d2 (the structure surjection between levels)."""
    if d2 > u.degree_cap:
        raise ValueError(f"cannot raise degree cap {u.degree_cap} to {d2}")
    return TruncTensorElement(
        d2, u.alphabet_size, {w: c for w, c in u.coeffs.items() if len(w) <= d2}
    )


def tt_log(u):
    """log(u) = sum_{s>=1} (-1)^{s+1} (u-1)^s / s, truncated at the cap.

    Requires constant coefficient exactly 1.
    """
    if u.constant_term() != 1:
        raise ValueError(f"tt_log needs constant coefficient 1, got {u.constant_term()}")
    d, t = u.degree_cap, u.alphabet_size
    v = tt_sub(u, tt_unit(d, t))
    out = tt_zero(d, t)
    power = tt_unit(d, t)
    for s in range(1, d + 1):
        power = tt_mul(power, v)
        if power.is_zero():
            break
        out = tt_add(out, tt_scale(power, Fraction((-1) ** (s + 1), s)))
    return out


def tt_exp(u):
    """exp(u) = sum_{s>=0} u^s / s!, truncated at the cap.

    Requires zero constant coefficient.
    """
    if u.constant_term() != 0:
        raise ValueError(f"tt_exp needs zero constant coefficient, got {u.constant_term()}")
    d, t = u.degree_cap, u.alphabet_size
    out = tt_unit(d, t)
    power = tt_unit(d, t)
    fact = 1
    for s in range(1, d + 1):
        power = tt_mul(power, u)
        if power.is_zero():
            break
        fact *= s
        out = tt_add(out, tt_scale(power, Fraction(1, fact)))
    return out


# --- group words -----------------------------------------------------------
#
# A GroupWord is a tuple of (letter, sign) syllables with sign in {+1, -1},
# kept freely reduced: no adjacent (i, e), (i, -e).

GroupWord = tuple


def free_reduce(syllables):
    out = []
    for letter, sign in syllables:
        if sign not in (1, -1):
            raise ValueError(f"bad sign {sign}")
        if out and out[-1][0] == letter and out[-1][1] == -sign:
            out.pop()
        else:
            out.append((letter, sign))
    return tuple(out)


def gw_identity():
    return ()


def gw_mul(u, v):
    return free_reduce(tuple(u) + tuple(v))


def gw_inv(u):
    return tuple((letter, -sign) for letter, sign in reversed(u))


def gw_commutator(u, v):
    return gw_mul(gw_mul(u, v), gw_mul(gw_inv(u), gw_inv(v)))


def gw_max_letter(u):
    return max((letter for letter, _ in u), default=0)


def gw_from_str(text):
    """Parse a group word from case-encoded letters, e.g. "a b A" or "abA".

    Lowercase a..z are generators 1..26, uppercase their inverses.
    """
    tokens = text.split() if " " in text.strip() else list(text.strip())
    syllables = []
    for tok in tokens:
        if len(tok) != 1 or not tok.isalpha():
            raise ValueError(f"bad group-word token {tok!r}")
        if tok.islower():
            syllables.append((ord(tok) - ord("a") + 1, 1))
        else:
            syllables.append((ord(tok.lower()) - ord("a") + 1, -1))
    return free_reduce(syllables)


def gw_to_str(u):
    parts = []
    for letter, sign in u:
        ch = chr(ord("a") + letter - 1)
        parts.append(ch if sign == 1 else ch.upper())
    return "".join(parts) if parts else "e"


def word_to_str(w):
    return " ".join(f"x{a}" for a in w) if w else "1"


def expand_group_word(w, d, t):
    """Class of the group element w in T^{<=d}(Q^t).

    A positive syllable i contributes 1 + x_i, a negative one the
    truncated geometric series 1 + sum_{s=1..d} (-1)^s x_i^s; syllables
    multiply.  The constant coefficient of the result is always 1.
    """
    out = tt_unit(d, t)
    for letter, sign in w:
        if not 1 <= letter <= t:
            raise ValueError(f"letter {letter} outside alphabet 1..{t}")
        coeffs = {(): ONE}
        if sign == 1:
            if d >= 1:
                coeffs[(letter,)] = ONE
        else:
            for s in range(1, d + 1):
                coeffs[(letter,) * s] = Fraction((-1) ** s)
        out = tt_mul(out, TruncTensorElement(d, t, coeffs))
    return out
