"""Noncommutative words over {e_0} + {root letters}, with both products.

A word is a sequence of letters over the alphabet consisting of e_0 and one
letter per N-th root of unity (stored as the exponent a, meaning zeta_N^a).
Words ending in a root letter biject with indices (k_1..k_r; a_1..a_r) via
blocks e_0^(k-1) * root(a).  The module provides the harmonic (quasi-shuffle)
and shuffle products, the cumulate/difference root rewrites, and the two
regularization decompositions used by the evaluators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

E_ZERO = -1  # the letter e_0; root letters are exponents in [0, N)


class Word:
    __slots__ = ("letters", "level", "_hash")

    def __init__(self, letters, level: int):
        letters = tuple(letters)
        if level < 1:
            raise ValueError("level must be positive")
        for a in letters:
            if a != E_ZERO and not 0 <= a < level:
                raise ValueError(f"letter {a} out of range for level {level}")
        self.letters = letters
        self.level = level
        self._hash = None

    @classmethod
    def empty(cls, level: int) -> "Word":
        return cls((), level)

    @classmethod
    def from_blocks(cls, blocks, level: int) -> "Word":
        letters = []
        for k, a in blocks:
            letters.extend([E_ZERO] * (k - 1))
            letters.append(a)
        return cls(letters, level)

    @property
    def weight(self) -> int:
        return len(self.letters)

    @property
    def depth(self) -> int:
        return sum(1 for a in self.letters if a != E_ZERO)

    @property
    def is_index_word(self) -> bool:
        """True when the word encodes an index: empty or ending in a root letter."""
        return not self.letters or self.letters[-1] != E_ZERO

    @property
    def is_admissible(self) -> bool:
        """Index word whose leading block is not the single letter root(0)."""
        if not self.is_index_word:
            return False
        return not self.letters or self.letters[0] != 0

    def blocks(self):
        """Decompose an index word into (k, a) blocks."""
        if not self.is_index_word:
            raise ValueError("word does not end in a root letter")
        out = []
        k = 1
        for a in self.letters:
            if a == E_ZERO:
                k += 1
            else:
                out.append((k, a))
                k = 1
        return tuple(out)

    def reversal(self) -> "Word":
        return Word(self.letters[::-1], self.level)

    def __eq__(self, other):
        if not isinstance(other, Word):
            return NotImplemented
        return self.level == other.level and self.letters == other.letters

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.letters, self.level))
        return self._hash

    def __len__(self):
        return len(self.letters)

    def __repr__(self):
        toks = "".join("0" if a == E_ZERO else f"[{a}]" for a in self.letters)
        return f"Word({toks or 'empty'}, N={self.level})"


@dataclass(frozen=True)
class Index:
    """An index (k_1..k_r; a_1..a_r): exponents k_j >= 1, colors zeta_N^{a_j}."""

    ks: tuple[int, ...]
    es: tuple[int, ...]
    level: int

    def __post_init__(self):
        if len(self.ks) != len(self.es):
            raise ValueError("exponent and color lists differ in length")
        if self.level < 1:
            raise ValueError("level must be positive")
        if any(k < 1 for k in self.ks):
            raise ValueError("exponents must be positive")
        object.__setattr__(self, "ks", tuple(int(k) for k in self.ks))
        object.__setattr__(self, "es", tuple(int(e) % self.level for e in self.es))

    @property
    def weight(self) -> int:
        return sum(self.ks)

    @property
    def depth(self) -> int:
        return len(self.ks)

    @property
    def is_admissible(self) -> bool:
        return not self.ks or (self.ks[0], self.es[0]) != (1, 0)

    def reversed(self) -> "Index":
        return Index(self.ks[::-1], self.es[::-1], self.level)

    def conjugate_colors(self) -> "Index":
        return Index(self.ks, tuple(-e % self.level for e in self.es), self.level)

    def __repr__(self):
        return f"Index(k={list(self.ks)}, e={list(self.es)}, N={self.level})"


def index_to_word(ix: Index) -> Word:
    return Word.from_blocks(zip(ix.ks, ix.es), ix.level)


def word_to_index(w: Word) -> Index:
    blocks = w.blocks()
    return Index(tuple(k for k, _ in blocks), tuple(a for _, a in blocks), w.level)


def format_index(ix: Index) -> str:
    return "k=%s;e=%s" % (
        ",".join(str(k) for k in ix.ks),
        ",".join(str(e) for e in ix.es),
    )


def parse_index(text: str, level: int) -> Index:
    """Parse 'k=2,1;e=0,2' into an Index at the given level."""
    parts = dict(
        chunk.split("=", 1) for chunk in text.replace(" ", "").split(";") if chunk
    )
    if set(parts) != {"k", "e"}:
        raise ValueError(f"expected 'k=...;e=...', got {text!r}")
    ks = tuple(int(t) for t in parts["k"].split(",") if t)
    es = tuple(int(t) for t in parts["e"].split(",") if t)
    return Index(ks, es, level)


def indices_of_weight(level: int, weight: int, admissible_only: bool = True):
    """All indices of the given weight, deterministically ordered."""
    out: list[Index] = []

    def rec(remaining, ks, es):
        if remaining == 0:
            ix = Index(tuple(ks), tuple(es), level)
            if not admissible_only or ix.is_admissible:
                out.append(ix)
            return
        for k in range(1, remaining + 1):
            for e in range(level):
                ks.append(k)
                es.append(e)
                rec(remaining - k, ks, es)
                ks.pop()
                es.pop()

    rec(weight, [], [])
    return out


# ---- linear combinations ---------------------------------------------------


class LinComb:
    """Finite linear combination of words; zero coefficients are dropped.

    Coefficients may be ints, Fractions, or any ring elements supporting
    +, *, and truthiness.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        data = {}
        if terms:
            for w, c in terms.items() if isinstance(terms, dict) else terms:
                if c:
                    cur = data.get(w)
                    tot = c if cur is None else cur + c
                    if tot:
                        data[w] = tot
                    elif w in data:
                        del data[w]
        self.terms = data

    @classmethod
    def single(cls, w: Word, coeff=1) -> "LinComb":
        return cls({w: coeff} if coeff else {})

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        data = dict(self.terms)
        for w, c in other.terms.items():
            cur = data.get(w)
            tot = c if cur is None else cur + c
            if tot:
                data[w] = tot
            elif w in data:
                del data[w]
        out = LinComb()
        out.terms = data
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "LinComb":
        if not c:
            return LinComb()
        out = LinComb()
        out.terms = {w: c * k for w, k in self.terms.items()}
        return out

    def map_words(self, f) -> "LinComb":
        """Apply a word->word map linearly."""
        return LinComb([(f(w), c) for w, c in self.terms.items()])

    def __eq__(self, other):
        if not isinstance(other, LinComb):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "LinComb(0)"
        bits = " + ".join(f"{c}*{w!r}" for w, c in sorted(
            self.terms.items(), key=lambda t: (t[0].weight, t[0].letters)))
        return f"LinComb({bits})"


def _madd(d: dict, key, c):
    cur = d.get(key)
    tot = c if cur is None else cur + c
    if tot:
        d[key] = tot
    elif key in d:
        del d[key]


# ---- the two products ------------------------------------------------------

_STUFFLE_CACHE: dict = {}
_SHUFFLE_CACHE: dict = {}


def _stuffle_blocks(level, bu, bv):
    """Quasi-shuffle of two block tuples; returns {block-tuple: int}."""
    if bu > bv:
        bu, bv = bv, bu
    key = (level, bu, bv)
    hit = _STUFFLE_CACHE.get(key)
    if hit is not None:
        return hit
    ru, rv = len(bu), len(bv)
    # bottom-up over suffix pairs: table[i][j] = bu[i:] * bv[j:]
    table = [[None] * (rv + 1) for _ in range(ru + 1)]
    for i in range(ru, -1, -1):
        for j in range(rv, -1, -1):
            if i == ru:
                table[i][j] = {bv[j:]: 1}
            elif j == rv:
                table[i][j] = {bu[i:]: 1}
            else:
                out: dict = {}
                head_u, head_v = bu[i], bv[j]
                for tail, c in table[i + 1][j].items():
                    _madd(out, (head_u,) + tail, c)
                for tail, c in table[i][j + 1].items():
                    _madd(out, (head_v,) + tail, c)
                merged = (head_u[0] + head_v[0], (head_u[1] + head_v[1]) % level)
                for tail, c in table[i + 1][j + 1].items():
                    _madd(out, (merged,) + tail, c)
                table[i][j] = out
    res = table[0][0]
    _STUFFLE_CACHE[key] = res
    return res


def _shuffle_letters(level, lu, lv):
    """Shuffle of two letter tuples; returns {letter-tuple: int}."""
    if lu > lv:
        lu, lv = lv, lu
    key = (level, lu, lv)
    hit = _SHUFFLE_CACHE.get(key)
    if hit is not None:
        return hit
    nu, nv = len(lu), len(lv)
    table = [[None] * (nv + 1) for _ in range(nu + 1)]
    for i in range(nu, -1, -1):
        for j in range(nv, -1, -1):
            if i == nu:
                table[i][j] = {lv[j:]: 1}
            elif j == nv:
                table[i][j] = {lu[i:]: 1}
            else:
                out: dict = {}
                for tail, c in table[i + 1][j].items():
                    _madd(out, (lu[i],) + tail, c)
                for tail, c in table[i][j + 1].items():
                    _madd(out, (lv[j],) + tail, c)
                table[i][j] = out
    res = table[0][0]
    _SHUFFLE_CACHE[key] = res
    return res


def _as_lincomb(x) -> LinComb:
    return x if isinstance(x, LinComb) else LinComb.single(x)


def harmonic_product(u, v) -> LinComb:
    """Quasi-shuffle product; accepts Words or LinCombs of index words."""
    if isinstance(u, Word) and isinstance(v, Word):
        if u.level != v.level:
            raise ValueError("level mismatch")
        if not (u.is_index_word and v.is_index_word):
            raise ValueError("harmonic product requires words ending in a root letter")
        res = _stuffle_blocks(u.level, u.blocks(), v.blocks())
        return LinComb({Word.from_blocks(b, u.level): c for b, c in res.items()})
    acc = LinComb()
    for wu, cu in _as_lincomb(u):
        for wv, cv in _as_lincomb(v):
            acc = acc + harmonic_product(wu, wv).scale(cu * cv)
    return acc


def shuffle_product(u, v) -> LinComb:
    """Shuffle product on letters; accepts Words or LinCombs."""
    if isinstance(u, Word) and isinstance(v, Word):
        if u.level != v.level:
            raise ValueError("level mismatch")
        res = _shuffle_letters(u.level, u.letters, v.letters)
        return LinComb({Word(ls, u.level): c for ls, c in res.items()})
    acc = LinComb()
    for wu, cu in _as_lincomb(u):
        for wv, cv in _as_lincomb(v):
            acc = acc + shuffle_product(wu, wv).scale(cu * cv)
    return acc


def harmonic_power(w: Word, n: int) -> LinComb:
    """n-fold harmonic product of a word with itself (n >= 0)."""
    acc = LinComb.single(Word.empty(w.level))
    for _ in range(n):
        acc = harmonic_product(acc, w)
    return acc


# ---- root rewrites and reversal --------------------------------------------


def cumulate_roots(w: Word) -> Word:
    """Replace each root exponent by the running sum of exponents so far."""
    total = 0
    out = []
    for a in w.letters:
        if a == E_ZERO:
            out.append(a)
        else:
            total = (total + a) % w.level
            out.append(total)
    return Word(out, w.level)


def difference_roots(w: Word) -> Word:
    """Inverse of cumulate_roots: consecutive differences of root exponents."""
    prev = 0
    out = []
    for a in w.letters:
        if a == E_ZERO:
            out.append(a)
        else:
            out.append((a - prev) % w.level)
            prev = a
    return Word(out, w.level)


# ---- regularization --------------------------------------------------------


def _leading_root0(w: Word) -> int:
    n = 0
    for a in w.letters:
        if a == 0:
            n += 1
        else:
            break
    return n


def _trailing_zero(w: Word) -> int:
    n = 0
    for a in reversed(w.letters):
        if a == E_ZERO:
            n += 1
        else:
            break
    return n


def harmonic_regularize(w: Word) -> list[tuple[int, LinComb]]:
    """Decompose w = sum_j c_j * root(0)^(*j) with every c_j admissible.

    Returns [(degree, LinComb)] sorted by degree; coefficients are Fractions.
    Peels leading root(0) letters: with n of them and tail u, the harmonic
    product u * root(0)^(*n) equals n! w plus words with fewer leading
    root(0) letters, so induction on that count terminates.
    """
    if not w.is_index_word:
        raise ValueError("harmonic regularization needs a word ending in a root letter")
    level = w.level
    one = Word((0,), level)
    acc: dict[int, dict[Word, Fraction]] = {}
    pending: dict[Word, Fraction] = {w: Fraction(1)}
    while pending:
        t, c = pending.popitem()
        n = _leading_root0(t)
        if n == 0:
            _madd(acc.setdefault(0, {}), t, c)
            continue
        u = Word(t.letters[n:], level)
        fact = math.factorial(n)
        _madd(acc.setdefault(n, {}), u, c / fact)
        expanded = harmonic_product(harmonic_power(one, n), LinComb.single(u))
        assert expanded.terms.get(t) == fact
        for s, k in expanded:
            if s != t:
                _madd(pending, s, Fraction(-c * k, fact))
    rows = []
    for j in sorted(acc):
        lc = LinComb(acc[j])
        if lc:
            rows.append((j, lc))
    return rows


def _strip_trailing_zeros(w: Word) -> dict[Word, Fraction]:
    """Project onto the span of words with no trailing e_0 (the rest of the
    e_0-polynomial decomposition is discarded)."""
    out: dict[Word, Fraction] = {}
    pending: dict[Word, Fraction] = {w: Fraction(1)}
    level = w.level
    while pending:
        t, c = pending.popitem()
        m = _trailing_zero(t)
        if m == 0:
            _madd(out, t, c)
            continue
        if m == len(t.letters):
            continue  # pure e_0 power: no degree-0 part
        u = t.letters[:-m]
        spread = _shuffle_letters(level, u, (E_ZERO,) * m)
        for ls, k in spread.items():
            if ls != t.letters:
                _madd(pending, Word(ls, level), -c * k)
    return out


def shuffle_regularize(w: Word) -> list[tuple[int, LinComb]]:
    """Shuffle-regularization rows against the single letter root(0).

    First removes trailing e_0 letters (degree-0 part of the e_0 adjunction),
    then decomposes what is left as sum_j c_j sh root(0)^(sh j) with c_j
    supported on admissible words.  Returns [(degree, LinComb)].
    """
    level = w.level
    acc: dict[int, dict[Word, Fraction]] = {}
    pending = _strip_trailing_zeros(w)
    while pending:
        t, c = pending.popitem()
        n = _leading_root0(t)
        if n == 0:
            _madd(acc.setdefault(0, {}), t, c)
            continue
        u = t.letters[n:]
        _madd(acc.setdefault(n, {}), Word(u, level), c / math.factorial(n))
        spread = _shuffle_letters(level, u, (0,) * n)
        assert spread.get(t.letters) == 1
        for ls, k in spread.items():
            if ls != t.letters:
                _madd(pending, Word(ls, level), -c * k)
    rows = []
    for j in sorted(acc):
        lc = LinComb(acc[j])
        if lc:
            rows.append((j, lc))
    return rows
