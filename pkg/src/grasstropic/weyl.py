"""Symmetric group machinery: words in simple transpositions, Bruhat order,
distinguished subexpressions and R-polynomials.

Permutations are 1-based one-line tuples: p[i-1] is the image of i.
Products compose right factor first, so (u * v)(x) = u(v(x)), and a word
s_{i_1} ... s_{i_m} is evaluated left to right by successive right
multiplications (swapping *positions* i, i+1 at each step).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

__all__ = [
    'Perm', 'Word', 'Mask', 'Subexpression', 'RPolynomial',
    'identity', 'compose', 'inverse', 'length', 'descents',
    'right_mult_s', 'left_mult_s',
    'word_product', 'evaluate_word', 'is_reduced',
    'reduced_word', 'all_reduced_words',
    'bruhat_leq', 'parabolic_min_reps',
    'is_distinguished', 'subexpression', 'positive_distinguished',
    'enumerate_distinguished', 'r_polynomial',
    'word_to_str', 'word_from_str', 'mask_to_str', 'mask_from_str',
]

Perm = tuple[int, ...]
Word = tuple[int, ...]
Mask = tuple[int, ...]


def identity(n: int) -> Perm:
    return tuple(range(1, n + 1))


def compose(u: Perm, v: Perm) -> Perm:
    """(u * v)(x) = u(v(x)).

    >>> compose((2, 1, 3), (1, 3, 2))
    (2, 3, 1)
    """
    return tuple(u[v[i] - 1] for i in range(len(u)))


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x - 1] = i + 1
    return tuple(out)


def length(p: Perm) -> int:
    """Number of inversions.

    >>> length((3, 5, 1, 2, 4))
    5
    """
    n = len(p)
    return sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])


def descents(p: Perm) -> set[int]:
    """Right descent set: {i : p(i) > p(i+1)}."""
    return {i + 1 for i in range(len(p) - 1) if p[i] > p[i + 1]}


def right_mult_s(p: Perm, i: int) -> Perm:
    """p * s_i, swapping positions i and i+1 (1-based)."""
    q = list(p)
    q[i - 1], q[i] = q[i], q[i - 1]
    return tuple(q)


def left_mult_s(p: Perm, i: int) -> Perm:
    """s_i * p, swapping the values i and i+1."""
    swap = {i: i + 1, i + 1: i}
    return tuple(swap.get(x, x) for x in p)


def word_product(word: Sequence[int], n: int) -> Perm:
    """Product of the letters of ``word``, left to right.

    >>> word_product((2, 3, 4, 1, 2, 3), 5)
    (3, 4, 5, 1, 2)
    """
    p = identity(n)
    for i in word:
        if not 1 <= i < n:
            raise ValueError(f'letter {i} out of range for n={n}')
        p = right_mult_s(p, i)
    return p


def evaluate_word(word: Sequence[int], n: int) -> tuple[Perm, bool]:
    """(product, is the word reduced).

    >>> evaluate_word((1, 1), 3)
    ((1, 2, 3), False)
    """
    p = word_product(word, n)
    return p, length(p) == len(word)


def is_reduced(word: Sequence[int], n: int) -> bool:
    return length(word_product(word, n)) == len(word)


def reduced_word(p: Perm) -> Word:
    """One reduced word for p (rightmost-descent greedy, deterministic)."""
    q = p
    out: list[int] = []
    while True:
        ds = descents(q)
        if not ds:
            break
        i = max(ds)
        out.append(i)
        q = right_mult_s(q, i)
    out.reverse()
    return tuple(out)


def all_reduced_words(p: Perm) -> list[Word]:
    if not descents(p):
        return [()]
    out: list[Word] = []
    for i in sorted(descents(p)):
        for w in all_reduced_words(right_mult_s(p, i)):
            out.append(w + (i,))
    return out


def bruhat_leq(v: Perm, w: Perm) -> bool:
    """Bruhat order via the sorted-prefix (dot) criterion.

    >>> bruhat_leq((1, 3, 2), (3, 2, 1))
    True
    >>> bruhat_leq((3, 1, 2), (2, 3, 1))
    False
    """
    if len(v) != len(w):
        raise ValueError('rank mismatch')
    sv: list[int] = []
    sw: list[int] = []
    for i in range(len(v) - 1):
        sv.append(v[i])
        sv.sort()
        sw.append(w[i])
        sw.sort()
        if any(a > b for a, b in zip(sv, sw)):
            return False
    return True


def parabolic_min_reps(k: int, n: int) -> list[Perm]:
    """Minimal coset representatives for the Grassmannian parabolic: at
    most one descent, and it must sit at position n-k.

    Each is determined by the k-subset {w(n-k+1) < ... < w(n)}; there
    are C(n, k) of them. Ordered by length, then lexicographically.
    """
    from itertools import combinations

    out = []
    for sub in combinations(range(1, n + 1), k):
        rest = tuple(x for x in range(1, n + 1) if x not in sub)
        out.append(rest + sub)
    out.sort(key=lambda p: (length(p), p))
    return out


@dataclass(frozen=True)
class Subexpression:
    """A subexpression of a fixed word, with its index-set bookkeeping.

    mask[j] = 1 keeps letter j. Positions (1-based) are split into
    j_plus (kept, length went up), j_black (kept, length went down,
    forced) and j_box (omitted). A subexpression is distinguished when
    every length-decreasing letter was kept; it is positive when on top
    of that j_black is empty.
    """

    word: Word
    mask: Mask
    v: Perm
    j_plus: frozenset[int]
    j_box: frozenset[int]
    j_black: frozenset[int]

    @property
    def is_positive(self) -> bool:
        return not self.j_black


def subexpression(word: Sequence[int], mask: Sequence[int], n: int) -> Optional[Subexpression]:
    """Walk ``mask`` through ``word``; None if not distinguished."""
    if len(word) != len(mask):
        raise ValueError('mask length must match word length')
    v = identity(n)
    j_plus, j_box, j_black = [], [], []
    for j, (i, keep) in enumerate(zip(word, mask), start=1):
        down = v[i - 1] > v[i]  # multiplying by s_i decreases length
        if down and not keep:
            return None
        if keep:
            (j_black if down else j_plus).append(j)
            v = right_mult_s(v, i)
        else:
            j_box.append(j)
    return Subexpression(tuple(word), tuple(mask), v,
                         frozenset(j_plus), frozenset(j_box), frozenset(j_black))


def is_distinguished(word: Sequence[int], mask: Sequence[int], n: int) -> bool:
    """
    >>> is_distinguished((2, 3, 4, 1, 2, 3), (0, 1, 1, 1, 0, 1), 5)
    True
    """
    return subexpression(word, mask, n) is not None


def positive_distinguished(v: Perm, word: Sequence[int], n: int) -> Subexpression:
    """The unique positive distinguished subexpression for v inside ``word``.

    Greedy right-to-left: keep a letter exactly when it lowers the
    remaining target.

    >>> sub = positive_distinguished((2, 1, 5, 4, 3), (2, 3, 4, 1, 2, 3), 5)
    >>> mask_to_str(sub.mask)
    '011101'
    """
    u = v
    mask = [0] * len(word)
    for j in range(len(word) - 1, -1, -1):
        i = word[j]
        if u[i - 1] > u[i]:
            mask[j] = 1
            u = right_mult_s(u, i)
    if u != identity(n):
        raise ValueError('target is not below the word in Bruhat order')
    got = subexpression(word, mask, n)
    assert got is not None and got.v == v and got.is_positive
    return got


def enumerate_distinguished(word: Sequence[int], n: int,
                            v_target: Optional[Perm] = None) -> list[Subexpression]:
    """All distinguished subexpressions of ``word``, in mask-lex order
    (0 sorts before 1). Optionally filtered by product.

    >>> len(enumerate_distinguished((1,), 2))
    2
    """
    word = tuple(word)
    m = len(word)
    target_len = None if v_target is None else length(v_target)
    out: list[Subexpression] = []

    def walk(j: int, v: Perm, mask: list[int]) -> None:
        if j == m:
            if v_target is None or v == v_target:
                sub = subexpression(word, mask, n)
                assert sub is not None
                out.append(sub)
            return
        if target_len is not None:
            # cheap Bruhat-distance prune
            if abs(target_len - length(v)) > m - j:
                return
        i = word[j]
        down = v[i - 1] > v[i]
        if down:
            mask.append(1)
            walk(j + 1, right_mult_s(v, i), mask)
            mask.pop()
        else:
            mask.append(0)
            walk(j + 1, v, mask)
            mask.pop()
            mask.append(1)
            walk(j + 1, right_mult_s(v, i), mask)
            mask.pop()

    walk(0, identity(n), [])
    return out


@dataclass(frozen=True)
class RPolynomial:
    """Polynomial in q with integer coefficients, dense low-to-high."""

    coeffs: tuple[int, ...]

    def __call__(self, q: int) -> int:
        return sum(c * q ** d for d, c in enumerate(self.coeffs))

    def __str__(self) -> str:
        if not self.coeffs:
            return '0'
        parts = []
        for d in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[d]
            if c == 0:
                continue
            mono = 'q' if d == 1 else f'q^{d}' if d else '1'
            if d == 0:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f'{abs(c)}*{mono}'
            parts.append(('-' if c < 0 else '+', body))
        if not parts:
            return '0'
        sign, body = parts[0]
        text = ('-' if sign == '-' else '') + body
        for sign, body in parts[1:]:
            text += f' {sign} {body}'
        return text


def _poly_add(a: list[int], b: list[int]) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return out


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return out


def r_polynomial(v: Perm, word: Sequence[int]) -> RPolynomial:
    """R-polynomial of the pair (v, product(word)), as a sum over the
    distinguished subexpressions of ``word`` with product v: each
    contributes (q-1)^(#omitted) * q^(#forced). The result does not
    depend on which reduced word was supplied.

    >>> str(r_polynomial((1, 2, 3), (1,)))
    'q - 1'
    """
    n = len(v)
    w, reduced = evaluate_word(word, n)
    if not reduced:
        raise ValueError('word is not reduced')
    if not bruhat_leq(v, w):
        raise ValueError('v is not below w in Bruhat order')
    total: list[int] = []
    for sub in enumerate_distinguished(word, n, v_target=v):
        term = [1]
        for _ in sub.j_box:
            term = _poly_mul(term, [-1, 1])
        term = _poly_mul(term, _q_power(len(sub.j_black)))
        total = _poly_add(total, term)
    while total and total[-1] == 0:
        total.pop()
    return RPolynomial(tuple(total))


def _q_power(d: int) -> list[int]:
    return [0] * d + [1]


def word_to_str(word: Sequence[int]) -> str:
    return ','.join(str(i) for i in word)


def word_from_str(text: str) -> Word:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(tok) for tok in text.split(','))


def mask_to_str(mask: Sequence[int]) -> str:
    return ''.join('1' if b else '0' for b in mask)


def mask_from_str(text: str) -> Mask:
    if set(text) - {'0', '1'}:
        raise ValueError(f'bad mask {text!r}')
    return tuple(1 if ch == '1' else 0 for ch in text)


if __name__ == '__main__':
    import doctest
    doctest.testmod()
