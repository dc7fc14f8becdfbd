"""Exact symbolic linear algebra for the factorization matrices.

Everything here is exact: sparse multivariate polynomials over Fractions
for the symbolic side, plain Fractions after evaluation. No floats.

Polynomial strings use the compact grammar emitted by __str__:
terms joined by +/-, each term an optional rational coefficient times
'*'-separated variables with optional '^' powers, e.g. "-m5*p6+p2".
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Optional, Sequence, Union

from . import weyl, diagrams
from .weyl import Perm, Word
from .diagrams import (
    BLANK, WHITE, BLACK, GoDiagram, GrassmannNecklace, canonical_reading,
    w_of_shape,
)

__all__ = [
    'SparsePolynomial', 'PolyMatrix', 'PluckerVector', 'Matroid',
    'build_g', 'project', 'pluckers', 'lex_extremes', 'plucker_at_box',
    'matroid_of', 'necklace_of', 'tnn_status', 'positivity_test_set',
    'parameter_names', 'random_parameters', 'det_fraction',
    'matrix_to_json', 'matrix_from_json', 'pluckers_to_json',
    'pluckers_from_json',
]

Monomial = tuple[tuple[str, int], ...]

_TOKEN = re.compile(r'\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>[A-Za-z][A-Za-z0-9_]*)'
                    r'|(?P<pow>\^)|(?P<mul>\*)|(?P<add>\+)|(?P<sub>-))')


class SparsePolynomial:
    """Multivariate polynomial: map from monomials to nonzero Fractions."""

    __slots__ = ('terms',)

    def __init__(self, terms: Mapping[Monomial, Fraction]):
        self.terms = {m: c for m, c in terms.items() if c != 0}

    # -------------------------------------------------- constructors
    @classmethod
    def const(cls, c) -> 'SparsePolynomial':
        return cls({(): Fraction(c)})

    @classmethod
    def var(cls, name: str) -> 'SparsePolynomial':
        return cls({((name, 1),): Fraction(1)})

    @classmethod
    def from_string(cls, text: str) -> 'SparsePolynomial':
        text = text.strip()
        if not text:
            raise ValueError('empty polynomial string')
        pos = 0
        out = cls.const(0)
        sign = 1
        first = True
        while pos < len(text):
            if not first or text[pos] in '+-':
                m = _TOKEN.match(text, pos)
                if m is None or not (m.group('add') or m.group('sub')):
                    raise ValueError(f'expected +/- at {text[pos:]!r}')
                sign = 1 if m.group('add') else -1
                pos = m.end()
            coef = Fraction(sign)
            mono: dict[str, int] = {}
            saw_factor = False
            while True:
                m = _TOKEN.match(text, pos)
                if m is None:
                    if pos < len(text) and text[pos:].strip():
                        raise ValueError(f'bad token at {text[pos:]!r}')
                    break
                if m.group('num'):
                    coef *= Fraction(m.group('num'))
                elif m.group('var'):
                    name = m.group('var')
                    power = 1
                    after = _TOKEN.match(text, m.end())
                    if after and after.group('pow'):
                        num = _TOKEN.match(text, after.end())
                        if not (num and num.group('num')) or '/' in num.group('num'):
                            raise ValueError('expected integer exponent')
                        power = int(num.group('num'))
                        m = num
                    mono[name] = mono.get(name, 0) + power
                else:
                    break
                saw_factor = True
                pos = m.end()
                nxt = _TOKEN.match(text, pos)
                if nxt and nxt.group('mul'):
                    pos = nxt.end()
                    continue
                break
            if not saw_factor:
                raise ValueError(f'empty term in {text!r}')
            key = tuple(sorted(mono.items()))
            out = out + cls({key: coef})
            first = False
            sign = 1
        return out

    # -------------------------------------------------- ring ops
    def __add__(self, other: 'SparsePolynomial') -> 'SparsePolynomial':
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c
        return SparsePolynomial(terms)

    def __sub__(self, other: 'SparsePolynomial') -> 'SparsePolynomial':
        return self + (-other)

    def __neg__(self) -> 'SparsePolynomial':
        return SparsePolynomial({m: -c for m, c in self.terms.items()})

    def __mul__(self, other: 'SparsePolynomial') -> 'SparsePolynomial':
        terms: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono: dict[str, int] = dict(m1)
                for name, e in m2:
                    mono[name] = mono.get(name, 0) + e
                key = tuple(sorted(mono.items()))
                terms[key] = terms.get(key, Fraction(0)) + c1 * c2
        return SparsePolynomial(terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, SparsePolynomial) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    # -------------------------------------------------- queries
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(m == () for m in self.terms)

    def constant(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f'not a constant: {self}')
        return self.terms.get((), Fraction(0))

    def variables(self) -> set[str]:
        return {name for m in self.terms for name, _ in m}

    def evaluate(self, assignment: Mapping[str, Fraction]) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            val = c
            for name, e in m:
                if name not in assignment:
                    raise KeyError(f'no value for {name}')
                val *= Fraction(assignment[name]) ** e
            total += val
        return total

    def substitute(self, assignment: Mapping[str, Fraction]) -> 'SparsePolynomial':
        out = SparsePolynomial.const(0)
        for m, c in self.terms.items():
            term = SparsePolynomial.const(c)
            for name, e in m:
                if name in assignment:
                    term = term * SparsePolynomial.const(Fraction(assignment[name]) ** e)
                else:
                    term = term * SparsePolynomial({((name, e),): Fraction(1)})
            out = out + term
        return out

    def __str__(self) -> str:
        if not self.terms:
            return '0'
        chunks = []
        for m, c in sorted(self.terms.items()):
            body = '*'.join(name if e == 1 else f'{name}^{e}' for name, e in m)
            mag = abs(c)
            if not body:
                text = str(mag)
            elif mag == 1:
                text = body
            else:
                text = f'{mag}*{body}'
            if not chunks:
                chunks.append(('-' if c < 0 else '') + text)
            else:
                chunks.append(('-' if c < 0 else '+') + text)
        return ''.join(chunks)

    def __repr__(self) -> str:
        return f'SparsePolynomial({self})'


_ZERO = SparsePolynomial.const(0)
_ONE = SparsePolynomial.const(1)

Value = Union[SparsePolynomial, Fraction]
NumRows = tuple[tuple[Fraction, ...], ...]


def _as_poly(x) -> SparsePolynomial:
    if isinstance(x, SparsePolynomial):
        return x
    if isinstance(x, str):
        return SparsePolynomial.from_string(x)
    return SparsePolynomial.const(Fraction(x))


@dataclass(frozen=True)
class PolyMatrix:
    rows: tuple[tuple[SparsePolynomial, ...], ...]

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> 'PolyMatrix':
        return cls(tuple(tuple(_as_poly(x) for x in row) for row in rows))

    @classmethod
    def identity(cls, n: int) -> 'PolyMatrix':
        return cls(tuple(tuple(_ONE if i == j else _ZERO for j in range(n))
                         for i in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def __matmul__(self, other: 'PolyMatrix') -> 'PolyMatrix':
        n, m = self.shape
        m2, p = other.shape
        if m != m2:
            raise ValueError('shape mismatch')
        out = []
        for i in range(n):
            row = []
            for j in range(p):
                acc = _ZERO
                for t in range(m):
                    a = self.rows[i][t]
                    if a.is_zero():
                        continue
                    b = other.rows[t][j]
                    if b.is_zero():
                        continue
                    acc = acc + a * b
                row.append(acc)
            out.append(tuple(row))
        return PolyMatrix(tuple(out))

    def evaluate(self, assignment: Mapping[str, Fraction]) -> NumRows:
        return tuple(tuple(x.evaluate(assignment) for x in row)
                     for row in self.rows)

    def substitute(self, assignment: Mapping[str, Fraction]) -> 'PolyMatrix':
        return PolyMatrix(tuple(tuple(x.substitute(assignment) for x in row)
                                for row in self.rows))

    def variables(self) -> set[str]:
        return set().union(*(x.variables() for row in self.rows for x in row)) \
            if self.rows else set()


def det_fraction(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError('square matrix required')
    a = [[Fraction(x) for x in row] for row in rows]
    sign = 1
    prev = Fraction(1)
    for i in range(n - 1):
        if a[i][i] == 0:
            for r in range(i + 1, n):
                if a[r][i] != 0:
                    a[i], a[r] = a[r], a[i]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) / prev
            a[r][i] = Fraction(0)
        prev = a[i][i]
    return sign * a[n - 1][n - 1]


# ------------------------------------------------------ factorization

def build_g(w: Word, D: GoDiagram) -> PolyMatrix:
    """Product of one SL_2 block factor per box, in reading order: white
    stone -> rotation block, blank -> lower unipotent with p, black stone
    -> upper unipotent times inverse rotation, carrying m.

    Blocks act on rows/columns (n-i-1, n-i) counted 0-based from the
    top, i.e. rows are numbered from the bottom.
    """
    shape = D.shape
    if tuple(w) != w_of_shape(shape):
        raise ValueError('word does not match the diagram shape')
    n = shape.n
    g = PolyMatrix.identity(n)
    for pos, box in enumerate(canonical_reading(shape), start=1):
        i = shape.letter(box)
        a, b = n - i - 1, n - i
        block = [[_ONE if r == c else _ZERO for c in range(n)] for r in range(n)]
        ch = D.at(box)
        if ch == WHITE:
            block[a][a] = _ZERO
            block[a][b] = -_ONE
            block[b][a] = _ONE
            block[b][b] = _ZERO
        elif ch == BLANK:
            block[b][a] = SparsePolynomial.var(f'p{pos}')
        else:
            m = SparsePolynomial.var(f'm{pos}')
            block[a][a] = -m
            block[a][b] = _ONE
            block[b][a] = -_ONE
            block[b][b] = _ZERO
        g = g @ PolyMatrix(tuple(tuple(r) for r in block))
    return g


def project(g: PolyMatrix, k: int) -> PolyMatrix:
    """The k x n matrix whose row space is the span of g's leftmost k
    columns, with the index reversal that makes the examples match:
    A[a][b] = g[n+1-b][k+1-a] in 1-based indexing."""
    n, n2 = g.shape
    if n != n2:
        raise ValueError('square matrix required')
    return PolyMatrix(tuple(
        tuple(g.rows[n - 1 - b][k - 1 - a] for b in range(n))
        for a in range(k)))


def parameter_names(D: GoDiagram) -> tuple[list[str], list[str]]:
    """The p-variables (blanks) and m-variables (black stones) of D,
    keyed by canonical reading position."""
    ps, ms = [], []
    for pos, box in enumerate(canonical_reading(D.shape), start=1):
        ch = D.at(box)
        if ch == BLANK:
            ps.append(f'p{pos}')
        elif ch == BLACK:
            ms.append(f'm{pos}')
    return ps, ms


def random_parameters(D: GoDiagram, rng, positive: bool = False,
                      zero_m: bool = False) -> dict[str, Fraction]:
    """Random rational parameters: p nonzero (positive if asked), m free."""
    ps, ms = parameter_names(D)
    out = {}
    for name in ps:
        val = Fraction(rng.randint(1, 12), rng.randint(1, 12))
        if not positive and rng.random() < 0.5:
            val = -val
        out[name] = val
    for name in ms:
        if zero_m:
            out[name] = Fraction(0)
        else:
            out[name] = Fraction(rng.randint(-12, 12), rng.randint(1, 12))
    return out


# ---------------------------------------------------------- pluckers

class PluckerVector:
    """All maximal minors of a k x n matrix, symbolic or rational."""

    def __init__(self, k: int, n: int, entries: Mapping[tuple[int, ...], Value]):
        self.k = k
        self.n = n
        self.entries = dict(entries)
        if len(self.entries) != _binom(n, k):
            raise ValueError('need every k-subset')

    def __getitem__(self, index) -> Value:
        return self.entries[tuple(sorted(index))]

    def items(self):
        return sorted(self.entries.items())

    def is_numeric(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.entries.values())

    def value(self, index) -> Fraction:
        v = self[index]
        return v if isinstance(v, Fraction) else v.constant()

    def nonzero_indices(self) -> list[tuple[int, ...]]:
        return sorted(J for J, v in self.entries.items() if not _val_zero(v))

    def evaluate(self, assignment: Mapping[str, Fraction]) -> 'PluckerVector':
        return PluckerVector(self.k, self.n, {
            J: (v if isinstance(v, Fraction) else v.evaluate(assignment))
            for J, v in self.entries.items()})


def _binom(n: int, k: int) -> int:
    from math import comb
    return comb(n, k)


def _val_zero(v: Value) -> bool:
    return v == 0 if isinstance(v, Fraction) else v.is_zero()


def pluckers(A) -> PluckerVector:
    """All C(n,k) maximal minors by expansion along the last row, with
    memoization over column subsets. Raises on rank deficiency."""
    A = _as_matrix_rows(A)
    k = len(A)
    n = len(A[0]) if A else 0
    if k > n:
        raise ValueError('need k <= n')
    numeric = all(isinstance(x, Fraction) for row in A for x in row)
    zero = Fraction(0) if numeric else _ZERO
    prev: dict[tuple[int, ...], Value] = {(): Fraction(1) if numeric else _ONE}
    for r in range(1, k + 1):
        cur: dict[tuple[int, ...], Value] = {}
        for S in combinations(range(n), r):
            acc = zero
            for t, j in enumerate(S):
                a = A[r - 1][j]
                if _val_zero(a):
                    continue
                sub = prev[S[:t] + S[t + 1:]]
                if _val_zero(sub):
                    continue
                term = a * sub
                acc = acc + term if (r - 1 + t) % 2 == 0 else acc - term
            cur[S] = acc
        prev = cur
    entries = {tuple(j + 1 for j in S): v for S, v in prev.items()}
    if all(_val_zero(v) for v in entries.values()):
        raise ValueError('rank-deficient matrix')
    return PluckerVector(k, n, entries)


def _as_matrix_rows(A) -> list[list[Value]]:
    if isinstance(A, PolyMatrix):
        rows = [list(r) for r in A.rows]
    else:
        rows = [[x if isinstance(x, (SparsePolynomial, Fraction))
                 else Fraction(x) for x in row] for row in A]
    # collapse constant polynomials to Fractions when the whole matrix
    # is constant, to keep the numeric fast path
    if all(isinstance(x, Fraction) or x.is_constant() for row in rows for x in row):
        rows = [[x if isinstance(x, Fraction) else x.constant() for x in row]
                for row in rows]
    return rows


def lex_extremes(P: PluckerVector, v: Perm, w: Perm):
    """Lexicographically extreme nonzero minors with their closed forms:
    the minimum sits at w{n-k+1..n} and is a signed product of the blank
    parameters, the maximum sits at v{n-k+1..n} and equals 1. Raises if
    the computed table disagrees."""
    nonzero = P.nonzero_indices()
    lo, hi = min(nonzero), max(nonzero)
    n, k = P.n, P.k
    expect_lo = tuple(sorted(w[n - k:]))
    expect_hi = tuple(sorted(v[n - k:]))
    if lo != expect_lo or hi != expect_hi:
        raise ValueError(f'extreme index sets {lo},{hi} do not match '
                         f'{expect_lo},{expect_hi}')
    val_hi = P[hi]
    if not (val_hi == Fraction(1) if isinstance(val_hi, Fraction)
            else val_hi == _ONE):
        raise ValueError(f'maximal minor is {val_hi}, not 1')
    val_lo = P[lo]
    if isinstance(val_lo, SparsePolynomial):
        if len(val_lo.terms) != 1:
            raise ValueError(f'minimal minor {val_lo} is not a single monomial')
        (mono, coef), = val_lo.terms.items()
        names = [name for name, e in mono]
        if any(e != 1 for _, e in mono) or any(not s.startswith('p') for s in names):
            raise ValueError(f'minimal minor {val_lo} is not a plain p-product')
        # number of black stones from length bookkeeping: the kept
        # letters number l(w) - #blanks, and drops eat length in pairs
        drops2 = weyl.length(w) - len(names) - weyl.length(v)
        if drops2 % 2 or coef != (-1) ** (drops2 // 2):
            raise ValueError(f'sign of {val_lo} off for l(w)={weyl.length(w)}, '
                             f'l(v)={weyl.length(v)}')
    return lo, hi, val_lo, val_hi


def plucker_at_box(D: GoDiagram, box) -> tuple[tuple[int, ...], SparsePolynomial]:
    """Closed form of one minor per box: index set transported by the
    inner subdiagram, value read off the outer boxes."""
    shape = D.shape
    box = tuple(box)
    if box not in set(shape.boxes()):
        raise ValueError(f'{box} outside the shape')
    br, bc = box
    inner = {(r, c) for (r, c) in shape.boxes() if r >= br and c >= bc}
    v_in = weyl.identity(shape.n)
    w_in = weyl.identity(shape.n)
    sign = 1
    value = _ONE
    for pos, b in enumerate(canonical_reading(shape), start=1):
        ch = D.at(b)
        if b in inner:
            i = shape.letter(b)
            w_in = weyl.right_mult_s(w_in, i)
            if ch != BLANK:
                v_in = weyl.right_mult_s(v_in, i)
        else:
            if ch == BLANK:
                value = value * SparsePolynomial.var(f'p{pos}')
            elif ch == BLACK:
                sign = -sign
    w = weyl.word_product(w_of_shape(shape), shape.n)
    base = w[shape.n - shape.k:]
    u = weyl.compose(v_in, weyl.inverse(w_in))
    index = tuple(sorted(u[x - 1] for x in base))
    if sign < 0:
        value = -value
    return index, value


# ----------------------------------------------------------- matroids

@dataclass(frozen=True)
class Matroid:
    k: int
    n: int
    bases: frozenset[tuple[int, ...]]

    def __post_init__(self) -> None:
        if not self.bases:
            raise ValueError('a matroid needs at least one basis')
        for B in self.bases:
            if len(B) != self.k or tuple(sorted(B)) != B:
                raise ValueError(f'bad basis {B}')
            if not set(B) <= set(range(1, self.n + 1)):
                raise ValueError(f'basis {B} outside 1..{self.n}')
        for B1 in self.bases:
            for B2 in self.bases:
                for x in set(B1) - set(B2):
                    if not any(tuple(sorted((set(B1) - {x}) | {y})) in self.bases
                               for y in set(B2) - set(B1)):
                        raise ValueError(f'exchange axiom fails for {B1},{B2},{x}')

    def is_basis(self, J) -> bool:
        return tuple(sorted(J)) in self.bases


def matroid_of(A) -> Matroid:
    P = pluckers(A)
    return Matroid(P.k, P.n, frozenset(P.nonzero_indices()))


def necklace_of(A) -> GrassmannNecklace:
    """I_i = the lexicographically minimal nonzero minor index w.r.t.
    the shifted order i < i+1 < ... < n < 1 < ... < i-1."""
    P = pluckers(A)
    nonzero = P.nonzero_indices()
    n = P.n
    subsets = []
    for i in range(1, n + 1):
        key = lambda J: tuple(sorted((x - i) % n for x in J))
        subsets.append(frozenset(min(nonzero, key=key)))
    neck = GrassmannNecklace(tuple(subsets))
    diagrams.necklace_to_perm(neck)  # consistency: valid decorated perm
    return neck


def tnn_status(A) -> str:
    """'TP', 'TNN' or 'neither', after normalizing the global sign so
    the lex-minimal nonzero minor is positive."""
    P = pluckers(A)
    if not P.is_numeric():
        raise ValueError('evaluate parameters before testing positivity')
    nonzero = P.nonzero_indices()
    sign = 1 if P.value(min(nonzero)) > 0 else -1
    vals = [sign * v for v in P.entries.values()]
    if any(v < 0 for v in vals):
        return 'neither'
    return 'TP' if all(v > 0 for v in vals) else 'TNN'


def positivity_test_set(D: GoDiagram, kappa) -> frozenset[tuple[int, ...]]:
    """Dominant index sets of the limit contour plot of a stone-pattern
    diagram without black stones; checking these minors certifies full
    nonnegativity on the component."""
    if not diagrams.is_le_diagram(D):
        raise ValueError('black stones present')
    from . import soliton
    plot = soliton.contour_minus_infinity(D, kappa)
    return frozenset(tuple(r.label) for r in plot.regions)


# ------------------------------------------------------------- JSON

def matrix_to_json(M: PolyMatrix) -> list[list[str]]:
    return [[str(x) for x in row] for row in M.rows]


def matrix_from_json(data) -> PolyMatrix:
    return PolyMatrix.from_rows(data)


def pluckers_to_json(P: PluckerVector) -> dict[str, str]:
    return {','.join(str(x) for x in J): str(v) for J, v in P.items()}


def pluckers_from_json(data: Mapping[str, str]) -> PluckerVector:
    entries = {}
    for key, text in data.items():
        J = tuple(int(x) for x in key.split(','))
        entries[J] = SparsePolynomial.from_string(text)
    n = max(x for J in entries for x in J)
    k = len(next(iter(entries)))
    return PluckerVector(k, n, entries)
