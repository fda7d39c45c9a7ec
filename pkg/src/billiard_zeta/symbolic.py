"""Admissible words over obstacle indices, necklaces, canonical tails and
variation estimates.

Symbols are 1-based obstacle indices; a word is admissible when
consecutive symbols differ.
"""
import itertools

import numpy as np


class Word(tuple):
    """Admissible finite word (consecutive symbols distinct)."""

    def __new__(cls, symbols=()):
        w = super().__new__(cls, (int(s) for s in symbols))
        for a, b in zip(w, w[1:]):
            if a == b:
                raise ValueError(f"inadmissible word {tuple(w)}: repeated symbol {a}")
        if any(s < 1 for s in w):
            raise ValueError("symbols are 1-based obstacle indices")
        return w

    def __repr__(self):
        return "Word(" + "".join(map(str, self)) + ")" if max(self, default=0) < 10 \
            else f"Word{tuple(self)}"

    def label(self):
        return "".join(map(str, self)) if max(self, default=0) < 10 else "-".join(map(str, self))

    def reversed(self):
        return Word(self[::-1])


def canonical_rotation(symbols):
    """Lexicographically minimal rotation."""
    s = tuple(symbols)
    if not s:
        return s
    return min(s[i:] + s[:i] for i in range(len(s)))


def is_primitive(symbols):
    s = tuple(symbols)
    n = len(s)
    return all(s != s[d:] + s[:d] for d in range(1, n) if n % d == 0)


class CyclicWord(Word):
    """Cyclically admissible word stored in its canonical rotation."""

    def __new__(cls, symbols=()):
        s = tuple(int(v) for v in symbols)
        if len(s) < 2 or s[0] == s[-1]:
            raise ValueError(f"not cyclically admissible: {s}")
        return super().__new__(cls, canonical_rotation(s))

    @property
    def primitive(self):
        return is_primitive(self)

    def reversed(self):
        return CyclicWord(self[::-1])

    def __repr__(self):
        return "CyclicWord(" + self.label() + ")"


def parse_word(text):
    """Parse '1,2,3', '1 2 3' or '123' into a tuple of ints."""
    text = text.strip()
    if any(c in text for c in ", -"):
        parts = text.replace(",", " ").replace("-", " ").split()
        return tuple(int(p) for p in parts)
    return tuple(int(c) for c in text)


def count_words(kappa0, n):
    return kappa0 * (kappa0 - 1) ** (n - 1)


def enumerate_words(kappa0, n, first=None, last=None):
    """All admissible words of length ``n`` in lexicographic order.

    ``first``/``last`` optionally pin the end symbols.
    """
    if kappa0 < 2 or n < 1:
        raise ValueError("need kappa0 >= 2 and n >= 1")
    out = []
    starts = [first] if first is not None else range(1, kappa0 + 1)

    def rec(prefix):
        if len(prefix) == n:
            if last is None or prefix[-1] == last:
                out.append(Word(prefix))
            return
        for s in range(1, kappa0 + 1):
            if s != prefix[-1]:
                rec(prefix + [s])

    for s in starts:
        rec([s])
    return out


def enumerate_primitive_cycles(kappa0, n_max, n_min=2):
    """Primitive cyclic words grouped by length, ``{n: [CyclicWord, ...]}``."""
    table = {}
    for n in range(max(2, n_min), n_max + 1):
        seen = set()
        for w in enumerate_words(kappa0, n):
            if w[0] == w[-1]:
                continue
            c = canonical_rotation(w)
            if c == tuple(w) and is_primitive(c):
                seen.add(c)
        table[n] = [CyclicWord(c) for c in sorted(seen)]
    return table


def min_other(k, kappa0=None):
    """Smallest symbol different from ``k``."""
    return 1 if k != 1 else 2


def alternation(a, b, length):
    """``a, b, a, b, ...`` of the given length."""
    return tuple(a if i % 2 == 0 else b for i in range(length))


def canonical_tail(first, depth):
    """Past tail for a sequence beginning with ``first``.

    Alternation of ``first`` and its smallest other symbol, of length
    ``depth``, whose last element differs from ``first``.
    """
    k = min_other(first)
    return tuple(k if (depth - i) % 2 == 1 else first for i in range(depth))


def future_tail(last, depth):
    """Canonical continuation after a word ending with ``last``."""
    k = min_other(last)
    return alternation(k, last, depth)


class ExtendedSeq:
    """Word with a canonical past tail prepended.

    ``symbols`` is the full truncated string and ``origin`` the position
    of the first core symbol in it.
    """

    def __init__(self, core, depth):
        self.core = Word(core)
        self.depth = int(depth)
        self.past = canonical_tail(self.core[0], self.depth) if self.core else ()
        self.symbols = Word(self.past + tuple(self.core))
        self.origin = len(self.past)

    def __repr__(self):
        return f"ExtendedSeq(past={self.past}, core={tuple(self.core)})"


def extend_e(word, depth):
    return ExtendedSeq(word, depth)


def is_admissible(symbols):
    return all(a != b for a, b in zip(symbols, symbols[1:]))


def random_word(kappa0, n, rng, first=None):
    """Uniform admissible word (each step uniform over the other symbols)."""
    w = [int(first) if first is not None else int(rng.integers(1, kappa0 + 1))]
    for _ in range(n - 1):
        k = int(rng.integers(1, kappa0))
        w.append(k if k < w[-1] else k + 1)
    return w


def var_estimate(F, kappa0, n, samples=4096, seed=0, half_length=None, exhaustive_max=12):
    """Estimate ``var_n F`` for a function of two-sided sequences.

    ``F(symbols, origin)`` is evaluated on finite windows
    ``symbols[origin-L : origin+L+1]``; pairs agree on indices
    ``|i| < n`` and are free outside.  For ``2n-1 <= exhaustive_max``
    the shared core runs over all admissible words, otherwise cores are
    sampled.  Returns the maximum observed ``|F(a) - F(b)|``.
    """
    L = half_length if half_length is not None else n + 4
    rng = np.random.default_rng(seed)
    core_len = 2 * n - 1
    if core_len <= exhaustive_max and count_words(kappa0, core_len) <= samples:
        cores = [list(w) for w in enumerate_words(kappa0, core_len)]
        reps = max(1, samples // len(cores))
    else:
        cores = [random_word(kappa0, core_len, rng) for _ in range(samples)]
        reps = 1
    best = 0.0
    for core in cores:
        for _ in range(reps):
            pair = []
            for _side in range(2):
                left = random_word(kappa0, L - n + 1, rng, first=core[0])[1:][::-1]
                right = random_word(kappa0, L - n + 2, rng, first=core[-1])[1:]
                seq = left + core + right
                pair.append(F(tuple(seq), len(left) + n - 1))
            best = max(best, abs(pair[0] - pair[1]))
    return best


def fit_geometric(ns, values, floor=0.0):
    """Least-squares fit ``values ~ C * theta**ns`` on positive entries.

    Returns ``(C, theta)``; entries at or below ``floor`` are dropped.
    """
    ns = np.asarray(ns, float)
    v = np.asarray(values, float)
    keep = v > floor
    if keep.sum() < 2:
        return 0.0, 0.0
    slope, icpt = np.polyfit(ns[keep], np.log(v[keep]), 1)
    return float(np.exp(icpt)), float(np.exp(slope))


__all__ = [
    "Word", "CyclicWord", "ExtendedSeq", "canonical_rotation", "is_primitive",
    "enumerate_words", "enumerate_primitive_cycles", "count_words", "extend_e",
    "canonical_tail", "future_tail", "alternation", "min_other", "var_estimate",
    "fit_geometric", "random_word", "is_admissible", "parse_word",
]
