"""Young-diagram fillings (Go-diagrams), Grassmann necklaces and decorated
permutations, with the bijections among them.

A shape is an upper order ideal in the box poset of the k x (n-k)
rectangle, stored as weakly decreasing row lengths. Box (r, c), 1-based
from the top-left, carries the simple generator s_{(n-k)-c+r}. The
canonical reading order walks rows bottom to top, right to left within
each row; any reading order must decrease along rows and down columns.

The border of the shape is a lattice path from the northeast corner of
the rectangle to the southwest corner; its steps are labeled 1..n, which
labels every row (vertical step) and column (horizontal step).

Fill characters: '.' blank, 'o' white stone, 'x' black stone.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Optional, Sequence

from . import weyl
from .weyl import Perm, Word, Subexpression

__all__ = [
    'BLANK', 'WHITE', 'BLACK',
    'ShapeIdeal', 'GoDiagram', 'LabeledGoDiagram',
    'GrassmannNecklace', 'DecoratedPermutation',
    'shape_of_min_rep', 'w_of_shape', 'canonical_reading', 'column_reading',
    'reading_orders', 'subexpr_of_go', 'v_of_go', 'decorated_pi_of_go',
    'labeled_go', 'is_le_diagram',
    'necklace_to_perm', 'perm_to_necklace', 'enumerate_go_diagrams',
    'enumerate_decorated_permutations',
    'go_to_text', 'go_from_text', 'go_to_json', 'go_from_json',
    'perm_to_str', 'perm_from_str', 'necklace_to_str', 'necklace_from_str',
]

BLANK, WHITE, BLACK = '.', 'o', 'x'

Box = tuple[int, int]


@dataclass(frozen=True)
class ShapeIdeal:
    """Row lengths of an upper order ideal inside the k x (n-k) rectangle."""

    k: int
    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 1 <= self.k < self.n:
            raise ValueError(f'need 1 <= k < n, got k={self.k} n={self.n}')
        if len(self.rows) != self.k:
            raise ValueError(f'need {self.k} row lengths, got {len(self.rows)}')
        limit = self.n - self.k
        for lam in self.rows:
            if not 0 <= lam <= limit:
                raise ValueError(f'row lengths must decrease weakly within {self.n - self.k}')
            limit = lam

    @property
    def size(self) -> int:
        return sum(self.rows)

    def boxes(self) -> list[Box]:
        return [(r, c) for r in range(1, self.k + 1)
                for c in range(1, self.rows[r - 1] + 1)]

    def letter(self, box: Box) -> int:
        r, c = box
        return (self.n - self.k) - c + r

    def row_label(self, r: int) -> int:
        # vertical border step at the east end of row r
        return r + (self.n - self.k) - self.rows[r - 1]

    def col_label(self, c: int) -> int:
        # horizontal border step under column c
        below = sum(1 for lam in self.rows if lam >= c)
        return below + (self.n - self.k) - c + 1

    def column_height(self, c: int) -> int:
        return sum(1 for lam in self.rows if lam >= c)


def shape_of_min_rep(w: Perm, k: int) -> ShapeIdeal:
    """Shape whose canonical word multiplies to the minimal coset rep w."""
    n = len(w)
    if sorted(w[n - k:]) != list(w[n - k:]) or sorted(w[:n - k]) != list(w[:n - k]):
        raise ValueError('not a minimal coset representative for this k')
    rows = tuple((n - k) + r - w[n - k + r - 1] for r in range(1, k + 1))
    return ShapeIdeal(k, n, rows)


def canonical_reading(shape: ShapeIdeal) -> tuple[Box, ...]:
    """Rows bottom to top, right to left within a row.

    >>> canonical_reading(ShapeIdeal(2, 5, (3, 3)))
    ((2, 3), (2, 2), (2, 1), (1, 3), (1, 2), (1, 1))
    """
    out = []
    for r in range(shape.k, 0, -1):
        for c in range(shape.rows[r - 1], 0, -1):
            out.append((r, c))
    return tuple(out)


def column_reading(shape: ShapeIdeal) -> tuple[Box, ...]:
    """Columns right to left, bottom to top within a column."""
    out = []
    width = shape.rows[0] if shape.rows else 0
    for c in range(width, 0, -1):
        for r in range(shape.column_height(c), 0, -1):
            out.append((r, c))
    return tuple(out)


def reading_orders(shape: ShapeIdeal) -> Iterator[tuple[Box, ...]]:
    """All reading orders: each box is read before its west and north
    neighbors. Emitted in lexicographic order of the box sequence."""
    boxes = set(shape.boxes())
    total = len(boxes)

    def ready(done: set[Box]) -> list[Box]:
        out = []
        for (r, c) in boxes:
            if (r, c) in done:
                continue
            if c < shape.rows[r - 1] and (r, c + 1) not in done:
                continue
            if r < shape.k and shape.rows[r] >= c and (r + 1, c) not in done:
                continue
            out.append((r, c))
        return sorted(out)

    def walk(seq: list[Box], done: set[Box]) -> Iterator[tuple[Box, ...]]:
        if len(seq) == total:
            yield tuple(seq)
            return
        for b in ready(done):
            seq.append(b)
            done.add(b)
            yield from walk(seq, done)
            done.remove(b)
            seq.pop()

    yield from walk([], set())


def w_of_shape(shape: ShapeIdeal) -> Word:
    """The reduced word read off the shape in canonical order.

    >>> w_of_shape(ShapeIdeal(2, 5, (3, 3)))
    (2, 3, 4, 1, 2, 3)
    """
    return tuple(shape.letter(b) for b in canonical_reading(shape))


@dataclass(frozen=True)
class GoDiagram:
    """A stone/blank filling whose kept letters form a distinguished
    subexpression. Validity is checked at construction."""

    shape: ShapeIdeal
    fill: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.fill) != self.shape.k:
            raise ValueError('one fill line per row required')
        for lam, line in zip(self.shape.rows, self.fill):
            if len(line) != lam:
                raise ValueError('fill line length must match the row')
            if set(line) - {BLANK, WHITE, BLACK}:
                raise ValueError(f'bad fill characters in {line!r}')
        sub = subexpr_of_go(self)
        if sub is None:
            raise ValueError('filling does not give a distinguished subexpression')
        for pos, b in enumerate(canonical_reading(self.shape), start=1):
            ch = self.fill[b[0] - 1][b[1] - 1]
            if ch == WHITE and pos not in sub.j_plus:
                raise ValueError(f'white stone at {b} sits on a length drop')
            if ch == BLACK and pos not in sub.j_black:
                raise ValueError(f'black stone at {b} does not drop the length')

    def at(self, box: Box) -> str:
        r, c = box
        return self.fill[r - 1][c - 1]

    def stones(self) -> list[Box]:
        return [b for b in self.shape.boxes() if self.at(b) != BLANK]

    def blanks(self) -> list[Box]:
        return [b for b in self.shape.boxes() if self.at(b) == BLANK]


def subexpr_of_go(D: GoDiagram, order: Optional[Sequence[Box]] = None):
    """The subexpression induced by keeping stone boxes, walked in the
    given reading order (canonical if omitted). Raises if the induced
    subexpression is not distinguished, except during construction."""
    shape = D.shape
    if order is None:
        order = canonical_reading(shape)
        building = True
    else:
        if sorted(order) != sorted(shape.boxes()):
            raise ValueError('order must cover the shape exactly')
        building = False
    word = tuple(shape.letter(b) for b in order)
    mask = tuple(0 if D.at(b) == BLANK else 1 for b in order)
    sub = weyl.subexpression(word, mask, shape.n)
    if sub is None and not building:
        raise ValueError('not distinguished in this reading order')
    return sub


def v_of_go(D: GoDiagram) -> Perm:
    sub = subexpr_of_go(D)
    assert sub is not None
    return sub.v


def labeled_go(D: GoDiagram, order: Optional[Sequence[Box]] = None) -> 'LabeledGoDiagram':
    if order is None:
        order = canonical_reading(D.shape)
    labels = {}
    for pos, b in enumerate(order, start=1):
        ch = D.at(b)
        labels[b] = '1' if ch == WHITE else '-1' if ch == BLACK else f'p{pos}'
    return LabeledGoDiagram(D, tuple(order), labels)


@dataclass(frozen=True)
class LabeledGoDiagram:
    """Go-diagram plus per-box labels: 1 on white stones, -1 on black
    stones, the parameter symbol p_i on the blank read at position i."""

    diagram: GoDiagram
    reading: tuple[Box, ...]
    labels: dict[Box, str]

    def grid(self) -> list[list[str]]:
        shape = self.diagram.shape
        return [[self.labels[(r, c)] for c in range(1, shape.rows[r - 1] + 1)]
                for r in range(1, shape.k + 1)]


@dataclass(frozen=True)
class DecoratedPermutation:
    """Permutation with fixed points colored +-1."""

    perm: Perm
    colors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        n = len(self.perm)
        if sorted(self.perm) != list(range(1, n + 1)):
            raise ValueError('not a permutation')
        fixed = {i for i in range(1, n + 1) if self.perm[i - 1] == i}
        if {i for i, _ in self.colors} != fixed:
            raise ValueError('colors must be given exactly on the fixed points')
        if any(c not in (1, -1) for _, c in self.colors):
            raise ValueError('colors are +1 or -1')
        if tuple(sorted(self.colors)) != self.colors:
            raise ValueError('colors must be sorted by position')

    def color(self, i: int) -> int:
        for j, c in self.colors:
            if j == i:
                return c
        raise KeyError(i)

    def weak_excedance_positions(self) -> tuple[int, ...]:
        out = []
        for i, img in enumerate(self.perm, start=1):
            if img > i or (img == i and self.color(i) == 1):
                out.append(i)
        return tuple(out)

    @property
    def k(self) -> int:
        return len(self.weak_excedance_positions())


def decorate(perm: Perm, colors: dict[int, int]) -> DecoratedPermutation:
    return DecoratedPermutation(tuple(perm), tuple(sorted(colors.items())))


def decorated_pi_of_go(D: GoDiagram) -> DecoratedPermutation:
    """The decorated permutation v(D) w^{-1}, fixed points colored +1 on
    blank-free rows and -1 on blank-free columns (border-path labels)."""
    shape = D.shape
    w = weyl.word_product(w_of_shape(shape), shape.n)
    v = v_of_go(D)
    pi = weyl.compose(v, weyl.inverse(w))

    blank_rows = {r for (r, c) in D.blanks()}
    blank_cols = {c for (r, c) in D.blanks()}
    colors = {}
    for r in range(1, shape.k + 1):
        h = shape.row_label(r)
        if r not in blank_rows:
            assert pi[h - 1] == h
            colors[h] = 1
    for c in range(1, shape.n - shape.k + 1):
        h = shape.col_label(c)
        if c not in blank_cols:
            assert pi[h - 1] == h
            colors[h] = -1
    fixed = {i for i in range(1, shape.n + 1) if pi[i - 1] == i}
    assert fixed == set(colors), 'fixed points must be the blank-free rows and columns'
    return decorate(pi, colors)


def is_le_diagram(D: GoDiagram) -> bool:
    """True when the diagram has no black stones. For such fills the
    0/+ translation (white -> 0, blank -> +) satisfies the no-plus-above
    -and-to-the-left rule, which we assert as a cross-check."""
    if any(D.at(b) == BLACK for b in D.shape.boxes()):
        return False
    for (r, c) in D.shape.boxes():
        if D.at((r, c)) != WHITE:
            continue
        above = any(D.at((rr, c)) == BLANK for rr in range(1, r))
        left = any(D.at((r, cc)) == BLANK for cc in range(1, c))
        assert not (above and left), f'stone pattern violation at {(r, c)}'
    return True


@dataclass(frozen=True)
class GrassmannNecklace:
    """Subsets I_1..I_n with the cyclic shift axiom: I_{i+1} is I_i when
    i is absent from I_i, and otherwise replaces i by a single element."""

    subsets: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        n = len(self.subsets)
        if n == 0:
            raise ValueError('empty necklace')
        sizes = {len(s) for s in self.subsets}
        if len(sizes) != 1:
            raise ValueError('all subsets must share one size')
        for s in self.subsets:
            if not s <= set(range(1, n + 1)):
                raise ValueError('subset entries must lie in 1..n')
        for i in range(1, n + 1):
            cur = self.subsets[i - 1]
            nxt = self.subsets[i % n]
            if i in cur:
                if not (cur - {i} <= nxt and len(nxt - (cur - {i})) == 1):
                    raise ValueError(f'shift axiom fails at position {i}')
            elif nxt != cur:
                raise ValueError(f'shift axiom fails at position {i}')

    @property
    def n(self) -> int:
        return len(self.subsets)

    @property
    def k(self) -> int:
        return len(self.subsets[0])


def necklace_to_perm(neck: GrassmannNecklace) -> DecoratedPermutation:
    """When I_{i+1} replaces i by j, the permutation sends j to i; stable
    positions become fixed points colored by membership in I_i.

    >>> neck = necklace_from_str('1257,2357,3457,4567,5678,6789,1789,1289,1259')
    >>> necklace_to_perm(neck).perm
    (6, 7, 1, 2, 8, 3, 9, 4, 5)
    """
    n = neck.n
    pi = [0] * n
    colors = {}
    for i in range(1, n + 1):
        cur = neck.subsets[i - 1]
        nxt = neck.subsets[i % n]
        if i in cur:
            (j,) = nxt - (cur - {i})
            if j == i:
                pi[i - 1] = i
                colors[i] = 1
            else:
                pi[j - 1] = i
        else:
            pi[i - 1] = i
            colors[i] = -1
    if sorted(pi) != list(range(1, n + 1)):
        raise ValueError('necklace does not define a permutation')
    dp = decorate(tuple(pi), colors)
    assert set(dp.weak_excedance_positions()) == neck.subsets[0]
    return dp


def perm_to_necklace(dp: DecoratedPermutation) -> GrassmannNecklace:
    """Inverse of necklace_to_perm: start from the weak excedance
    positions and shift."""
    n = len(dp.perm)
    inv = weyl.inverse(dp.perm)
    cur = set(dp.weak_excedance_positions())
    subsets = [frozenset(cur)]
    for i in range(1, n):
        if i in cur:
            cur = (cur - {i}) | {inv[i - 1]}
        subsets.append(frozenset(cur))
    return GrassmannNecklace(tuple(subsets))


def enumerate_go_diagrams(k: int, n: int) -> Iterator[GoDiagram]:
    """Every Go-diagram of type (k, n): one per pair (shape, distinguished
    filling), shapes in length order, fillings in mask order."""
    if not 1 <= k < n <= 9:
        raise ValueError('desk scale is 1 <= k < n <= 9')
    for w in weyl.parabolic_min_reps(k, n):
        shape = shape_of_min_rep(w, k)
        order = canonical_reading(shape)
        word = w_of_shape(shape)
        for sub in weyl.enumerate_distinguished(word, n):
            rows = [[BLANK] * lam for lam in shape.rows]
            for pos, (r, c) in enumerate(order, start=1):
                if pos in sub.j_plus:
                    rows[r - 1][c - 1] = WHITE
                elif pos in sub.j_black:
                    rows[r - 1][c - 1] = BLACK
            yield GoDiagram(shape, tuple(''.join(line) for line in rows))


def enumerate_decorated_permutations(k: int, n: int) -> Iterator[DecoratedPermutation]:
    """All decorated permutations of S_n with k weak excedance positions."""
    from itertools import permutations, product

    for p in permutations(range(1, n + 1)):
        fixed = [i for i in range(1, n + 1) if p[i - 1] == i]
        strict = sum(1 for i in range(1, n + 1) if p[i - 1] > i)
        need = k - strict
        if need < 0 or need > len(fixed):
            continue
        for ups in combinations(fixed, need):
            colors = {i: (1 if i in ups else -1) for i in fixed}
            yield decorate(p, colors)


# ------------------------------------------------------------- formats

def go_to_text(D: GoDiagram) -> str:
    head = f'k={D.shape.k} n={D.shape.n}'
    return '\n'.join([head, *D.fill]) + '\n'


def go_from_text(text: str) -> GoDiagram:
    lines = text.splitlines()
    if not lines:
        raise ValueError('empty diagram text')
    head = lines[0].split()
    try:
        k = int(head[0].removeprefix('k='))
        n = int(head[1].removeprefix('n='))
    except (IndexError, ValueError):
        raise ValueError(f'bad header line {lines[0]!r}') from None
    body = [ln.rstrip() for ln in lines[1:]]
    while len(body) < k:
        body.append('')
    body = body[:k]
    shape = ShapeIdeal(k, n, tuple(len(ln) for ln in body))
    return GoDiagram(shape, tuple(body))


def go_to_json(D: GoDiagram) -> dict:
    return {'k': D.shape.k, 'n': D.shape.n,
            'rows': list(D.shape.rows), 'fill': list(D.fill)}


def go_from_json(data: dict) -> GoDiagram:
    shape = ShapeIdeal(int(data['k']), int(data['n']),
                       tuple(int(x) for x in data['rows']))
    return GoDiagram(shape, tuple(data['fill']))


def perm_to_str(dp: DecoratedPermutation) -> str:
    """Images separated by spaces; fixed points get a +/- suffix."""
    fixed = dict(dp.colors)
    out = []
    for i, img in enumerate(dp.perm, start=1):
        if i in fixed:
            out.append(f'{img}{"+" if fixed[i] == 1 else "-"}')
        else:
            out.append(str(img))
    return ' '.join(out)


def perm_from_str(text: str) -> DecoratedPermutation:
    images = []
    colors = {}
    for pos, tok in enumerate(text.split(), start=1):
        if tok.endswith(('+', '-')):
            colors[pos] = 1 if tok[-1] == '+' else -1
            tok = tok[:-1]
        images.append(int(tok))
    return decorate(tuple(images), colors)


def necklace_to_str(neck: GrassmannNecklace) -> str:
    if neck.n > 9:
        raise ValueError('digit form only works for n <= 9')
    return ','.join(''.join(str(x) for x in sorted(s)) for s in neck.subsets)


def necklace_from_str(text: str) -> GrassmannNecklace:
    subsets = []
    for tok in text.split(','):
        tok = tok.strip()
        if not tok.isdigit():
            raise ValueError(f'bad necklace entry {tok!r}')
        subsets.append(frozenset(int(ch) for ch in tok))
    return GrassmannNecklace(tuple(subsets))


if __name__ == '__main__':
    import doctest
    doctest.testmod()
