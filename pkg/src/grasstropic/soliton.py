"""Line-soliton contour analysis over exact rationals.

A point of the Grassmannian plus an increasing vector of wave parameters
kappa gives a tau function, a sum of exponentials indexed by the matroid
bases. At a fixed time the dominance diagram of the exponents is a planar
subdivision whose 1-skeleton is the contour plot. Everything topological
here (vertices, edges, region labels) is computed with Fractions; floats
appear only in tau evaluation and the sign scans, which use mpmath and
numpy respectively.

Conventions: the exponent attached to index i is
kappa_i*x + kappa_i^2*y + kappa_i^3*t, a region is labeled by the k-subset
whose exponent sum dominates there, and the edge between labels differing
in i vs j is the [i,j] line-soliton, lying on
x + (kappa_i+kappa_j)*y + (kappa_i^2+kappa_i*kappa_j+kappa_j^2)*t = 0.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from itertools import combinations
from typing import Optional

import mpmath

from . import diagrams, grassmann, plabic
from .diagrams import DecoratedPermutation, GoDiagram

__all__ = [
    'ContourPlot', 'PlotVertex', 'PlotEdge', 'PlotRegion', 'RegionForm',
    'CrossingCheck', 'RegularityReport',
    'validate_kappa', 'default_bbox', 'dominant_subset', 'contour_plot',
    'component_matroid', 'contour_minus_infinity', 'unbounded_asymptotics',
    'perm_from_plot', 'classify_crossings', 'check_two_term',
    'singular_edges', 'tau_terms', 'tau_and_u', 'regularity_scan',
    'reverse_columns',
]

Point = tuple[Fraction, Fraction]


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10 ** 12)
    return Fraction(x)


def _kappa(kappa) -> tuple[Fraction, ...]:
    ks = tuple(_as_fraction(v) for v in kappa)
    if len(ks) < 2:
        raise ValueError('need at least two wave parameters')
    if any(a >= b for a, b in zip(ks, ks[1:])):
        raise ValueError('wave parameters must be strictly increasing')
    return ks


def validate_kappa(kappa):
    """Genericity check: equal-size subset sums must all be distinct.
    Returns (True, None) or (False, (I, J)) with a colliding index pair
    (1-based)."""
    ks = _kappa(kappa)
    n = len(ks)
    for p in range(2, n):
        seen = {}
        for I in combinations(range(1, n + 1), p):
            s = sum(ks[i - 1] for i in I)
            if s in seen:
                return False, (seen[s], I)
            seen[s] = I
    return True, None


def default_bbox(kappa, t) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    ks = _kappa(kappa)
    b = 4 * max(Fraction(1), abs(_as_fraction(t))) \
        * (1 + max(abs(k) for k in ks)) ** 2
    return (-b, b, -b, b)


def _bases_of(M, n: int) -> tuple[tuple[int, ...], ...]:
    raw = M.bases if hasattr(M, 'bases') else M
    out = sorted(set(tuple(sorted(J)) for J in raw))
    if not out:
        raise ValueError('empty basis collection')
    k = len(out[0])
    for J in out:
        if len(J) != k or len(set(J)) != k:
            raise ValueError(f'bad basis {J}')
        if J[0] < 1 or J[-1] > n:
            raise ValueError(f'basis {J} outside 1..{n}')
    return tuple(out)


class RegionForm:
    """The affine form x,y -> a*x + b*y + c*t attached to a label:
    a, b, c are the power sums of the kappas over the label."""

    __slots__ = ('label', 'a', 'b', 'c')

    def __init__(self, label, kappa):
        self.label = tuple(sorted(label))
        ks = [kappa[j - 1] for j in self.label]
        self.a = sum(ks)
        self.b = sum(k * k for k in ks)
        self.c = sum(k ** 3 for k in ks)

    def value(self, x, y, t) -> Fraction:
        return self.a * x + self.b * y + self.c * t

    def __repr__(self):
        return f'RegionForm({self.label}, a={self.a}, b={self.b}, c={self.c})'


def dominant_subset(M, kappa, x, y, t) -> tuple[int, ...]:
    """The unique basis whose exponent sum wins at the point; a tie means
    the point is on the contour and raises."""
    ks = _kappa(kappa)
    x, y, t = _as_fraction(x), _as_fraction(y), _as_fraction(t)
    best, bestv, also = None, None, None
    for J in _bases_of(M, len(ks)):
        v = RegionForm(J, ks).value(x, y, t)
        if bestv is None or v > bestv:
            best, bestv, also = J, v, None
        elif v == bestv:
            also = J
    if also is not None:
        raise ValueError(
            f'point ({x},{y}) lies on the contour: {best} ties {also}')
    return best


# ---------------------------------------------------- plot data model

class PlotVertex:
    __slots__ = ('x', 'y', 'kind', 'types')

    def __init__(self, x, y, kind, types):
        self.x, self.y = x, y
        self.kind = kind
        self.types = tuple(types)

    def __repr__(self):
        return f'PlotVertex({self.x}, {self.y}, {self.kind!r}, {self.types})'


class PlotEdge:
    __slots__ = ('v_from', 'v_to', 'type', 'regions', 'unbounded', 'singular')

    def __init__(self, v_from, v_to, type, regions, unbounded):
        self.v_from, self.v_to = v_from, v_to
        self.type = type
        self.regions = regions
        self.unbounded = unbounded
        self.singular = False

    def __repr__(self):
        return (f'PlotEdge({self.v_from}->{self.v_to}, {self.type}, '
                f'{self.regions})')


class PlotRegion:
    __slots__ = ('label', 'polygon')

    def __init__(self, label, polygon):
        self.label = tuple(label)
        self.polygon = tuple(polygon)

    def centroid(self) -> Point:
        xs = sum(p[0] for p in self.polygon)
        ys = sum(p[1] for p in self.polygon)
        return (xs / len(self.polygon), ys / len(self.polygon))

    def __repr__(self):
        return f'PlotRegion({self.label}, {len(self.polygon)} corners)'


class ContourPlot:
    """Planar subdivision of a box by the dominance pattern of the basis
    exponents. rotated=True marks the limit picture (scale |t|=1) of the
    far past, already turned half a turn into physical orientation."""

    def __init__(self, n, kappa, t, bbox, vertices, edges, regions,
                 rotated=False):
        self.n = n
        self.kappa = tuple(kappa)
        self.t = t
        self.bbox = tuple(bbox)
        self.vertices = tuple(vertices)
        self.edges = list(edges)
        self.regions = tuple(regions)
        self.rotated = rotated

    def region_labels(self) -> tuple[tuple[int, ...], ...]:
        return tuple(r.label for r in self.regions)

    def trivalent(self) -> list[int]:
        return [i for i, v in enumerate(self.vertices)
                if v.kind == 'trivalent']

    def crossings(self) -> list[int]:
        return [i for i, v in enumerate(self.vertices)
                if v.kind == 'Xcrossing']

    def higher(self) -> list[int]:
        return [i for i, v in enumerate(self.vertices) if v.kind == 'higher']

    def to_json(self) -> dict:
        return {
            't': None if self.t is None else str(self.t),
            'n': self.n,
            'kappa': [str(k) for k in self.kappa],
            'bbox': [str(v) for v in self.bbox],
            'rotated': self.rotated,
            'vertices': [
                {'x': str(v.x), 'y': str(v.y), 'kind': v.kind,
                 'types': [list(tp) for tp in v.types]}
                for v in self.vertices],
            'edges': [
                {'type': list(e.type), 'from': e.v_from, 'to': e.v_to,
                 'regions': [list(J) for J in e.regions],
                 'singular': bool(e.singular), 'unbounded': e.unbounded}
                for e in self.edges],
            'regions': [
                {'J': list(r.label),
                 'polygon': [[str(p[0]), str(p[1])] for p in r.polygon]}
                for r in self.regions],
        }

    def to_svg(self, size=640) -> str:
        xlo, xhi, ylo, yhi = (float(v) for v in self.bbox)
        pad = 0.05 * max(xhi - xlo, yhi - ylo)
        sx = size / (xhi - xlo + 2 * pad)
        sy = size / (yhi - ylo + 2 * pad)

        def P(x, y):
            # svg y grows downward
            return ((float(x) - xlo + pad) * sx,
                    (yhi + pad - float(y)) * sy)

        out = [f'<svg xmlns="http://www.w3.org/2000/svg" '
               f'width="{size}" height="{size}" '
               f'viewBox="0 0 {size} {size}">',
               f'<rect width="{size}" height="{size}" fill="white"/>']
        out.append('<style>.singular{stroke:#c22;'
                   'stroke-dasharray:7,5;}</style>')
        # one path element per edge; dashed class marks singular ones
        for e in self.edges:
            x1, y1 = P(self.vertices[e.v_from].x, self.vertices[e.v_from].y)
            x2, y2 = P(self.vertices[e.v_to].x, self.vertices[e.v_to].y)
            cls = ' class="singular"' if e.singular else ''
            out.append(f'<path d="M {x1:.2f} {y1:.2f} L {x2:.2f} '
                       f'{y2:.2f}" stroke="#222" fill="none" '
                       f'stroke-width="1.6"{cls}/>')
            mx, my = (x1 + x2) / 2, (y1 + y2) / 2
            out.append(f'<text x="{mx:.2f}" y="{my - 4:.2f}" font-size="10" '
                       f'fill="#06c">[{e.type[0]},{e.type[1]}]</text>')
        for v in self.vertices:
            x, y = P(v.x, v.y)
            if v.kind == 'trivalent':
                out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3.2" '
                           f'fill="#222"/>')
            elif v.kind == 'Xcrossing':
                out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3.2" '
                           f'fill="white" stroke="#222"/>')
            elif v.kind == 'higher':
                out.append(f'<rect x="{x - 3:.2f}" y="{y - 3:.2f}" '
                           f'width="6" height="6" fill="#c22"/>')
        for r in self.regions:
            cx, cy = r.centroid()
            x, y = P(cx, cy)
            text = ''.join(str(j) for j in r.label) if self.n < 10 \
                else ','.join(str(j) for j in r.label)
            out.append(f'<text x="{x:.2f}" y="{y:.2f}" font-size="12" '
                       f'text-anchor="middle" fill="#555">{text}</text>')
        caption = 'limit plot, rotated half turn' if self.rotated \
            else f't = {self.t}'
        out.append(f'<text x="8" y="{size - 8}" font-size="12" '
                   f'fill="#000">{caption}</text>')
        out.append('</svg>')
        return '\n'.join(out)


# ------------------------------------------------- subdivision engine

def _clip(poly, a, b, c):
    """Part of a convex polygon with a*x + b*y + c >= 0."""
    out = []
    m = len(poly)
    for i in range(m):
        p, q = poly[i], poly[(i + 1) % m]
        gp = a * p[0] + b * p[1] + c
        gq = a * q[0] + b * q[1] + c
        if gp >= 0:
            out.append(p)
        if (gp > 0 > gq) or (gp < 0 < gq):
            s = gp / (gp - gq)
            out.append((p[0] + (q[0] - p[0]) * s, p[1] + (q[1] - p[1]) * s))
    res = []
    for p in out:
        if not res or p != res[-1]:
            res.append(p)
    if len(res) > 1 and res[0] == res[-1]:
        res.pop()
    return res


def _cross(o, p, q) -> Fraction:
    return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0])


def _area2(poly) -> Fraction:
    s = Fraction(0)
    for i in range(len(poly)):
        p, q = poly[i], poly[(i + 1) % len(poly)]
        s += p[0] * q[1] - q[0] * p[1]
    return s


def _strip_collinear(poly):
    changed = True
    poly = list(poly)
    while changed and len(poly) > 2:
        changed = False
        for i in range(len(poly)):
            o = poly[(i - 1) % len(poly)]
            q = poly[(i + 1) % len(poly)]
            if _cross(o, poly[i], q) == 0:
                poly.pop(i)
                changed = True
                break
    return poly


def _between(p, q, v) -> bool:
    if _cross(p, q, v) != 0:
        return False
    dot = (v[0] - p[0]) * (q[0] - p[0]) + (v[1] - p[1]) * (q[1] - p[1])
    if dot <= 0:
        return False
    full = (q[0] - p[0]) ** 2 + (q[1] - p[1]) ** 2
    return dot < full


def _rim_side(p, bbox) -> Optional[int]:
    xlo, xhi, ylo, yhi = bbox
    if p[1] == ylo:
        return 0
    if p[0] == xhi:
        return 1
    if p[1] == yhi:
        return 2
    if p[0] == xlo:
        return 3
    return None


def _on_same_rim(p, q, bbox) -> bool:
    xlo, xhi, ylo, yhi = bbox
    return ((p[0] == q[0] == xlo) or (p[0] == q[0] == xhi)
            or (p[1] == q[1] == ylo) or (p[1] == q[1] == yhi))


def _angle_cmp(d1, d2) -> int:
    def half(d):
        return 0 if (d[1] > 0 or (d[1] == 0 and d[0] > 0)) else 1
    h1, h2 = half(d1), half(d2)
    if h1 != h2:
        return -1 if h1 < h2 else 1
    c = d1[0] * d2[1] - d1[1] * d2[0]
    return 0 if c == 0 else (-1 if c > 0 else 1)


def contour_plot(M, kappa, t, bbox=None) -> ContourPlot:
    """Exact dominance subdivision of the box at time t. Vertices where
    more than two line-solitons meet without being a plain crossing are
    kept and marked 'higher' so callers can report non-genericity."""
    ks = _kappa(kappa)
    n = len(ks)
    t = _as_fraction(t)
    bases = _bases_of(M, n)
    if bbox is None:
        bbox = default_bbox(ks, t)
    else:
        bbox = tuple(_as_fraction(v) for v in bbox)
        if bbox[0] >= bbox[1] or bbox[2] >= bbox[3]:
            raise ValueError('empty bounding box')
    forms = [RegionForm(J, ks) for J in bases]
    seen = {}
    for f in forms:
        key = (f.a, f.b, f.c * t)
        if key in seen:
            raise ValueError(
                f'labels {seen[key]} and {f.label} have identical exponents '
                f'for this kappa; no region separates them')
        seen[key] = f.label

    xlo, xhi, ylo, yhi = bbox
    box = [(xlo, ylo), (xhi, ylo), (xhi, yhi), (xlo, yhi)]
    polys = {}
    for f in forms:
        poly = box
        for g in forms:
            if g is f:
                continue
            poly = _clip(poly, f.a - g.a, f.b - g.b, (f.c - g.c) * t)
            if len(poly) < 3:
                break
        poly = _strip_collinear(poly)
        if len(poly) >= 3 and _area2(poly) != 0:
            polys[f.label] = poly

    corners = sorted({p for poly in polys.values() for p in poly})
    seg_regions: dict[frozenset, list] = {}
    for label, poly in sorted(polys.items()):
        for i in range(len(poly)):
            p, q = poly[i], poly[(i + 1) % len(poly)]
            onto = [v for v in corners if _between(p, q, v)]
            onto.sort(key=lambda v: (v[0] - p[0]) ** 2 + (v[1] - p[1]) ** 2)
            chain = [p] + onto + [q]
            for a, b in zip(chain, chain[1:]):
                if _on_same_rim(a, b, bbox):
                    continue
                seg_regions.setdefault(frozenset((a, b)), []).append(label)

    edges_raw = []
    for seg, labs in sorted(seg_regions.items(),
                            key=lambda kv: sorted(kv[0])):
        if len(labs) != 2:
            raise ValueError(
                f'segment {sorted(seg)} borders {len(labs)} region(s); '
                f'the subdivision is degenerate')
        j1, j2 = sorted(labs)
        diff = sorted(set(j1) ^ set(j2))
        if len(diff) != 2:
            raise ValueError(
                f'regions {j1} and {j2} share an edge but differ in '
                f'{len(diff) // 2} indices; kappa is too degenerate')
        a, b = sorted(seg)
        edges_raw.append((a, b, tuple(diff), (j1, j2)))

    incident: dict[Point, list] = {}
    for a, b, tp, regs in edges_raw:
        incident.setdefault(a, []).append(tp)
        incident.setdefault(b, []).append(tp)

    verts = []
    vid = {}
    for p in sorted(incident):
        types = tuple(sorted(incident[p]))
        if _rim_side(p, bbox) is not None:
            kind = 'boundary'
        elif len(types) == 3:
            kind = 'trivalent'
        elif len(types) == 4 and _is_plain_crossing(p, types, edges_raw):
            kind = 'Xcrossing'
        else:
            kind = 'higher'
            warnings.warn(
                f'non-generic vertex at {p}: {len(types)} incident '
                f'segments, types {types}', stacklevel=2)
        vid[p] = len(verts)
        verts.append(PlotVertex(p[0], p[1], kind, types))

    edges = []
    for a, b, tp, regs in edges_raw:
        unb = (verts[vid[a]].kind == 'boundary'
               or verts[vid[b]].kind == 'boundary')
        edges.append(PlotEdge(vid[a], vid[b], tp, regs, unb))

    regions = [PlotRegion(label, poly)
               for label, poly in sorted(polys.items())]
    return ContourPlot(n, ks, t, bbox, verts, edges, regions)


def _is_plain_crossing(p, types, edges_raw) -> bool:
    if len(set(types)) != 2 or types[0] == types[3]:
        return False
    by_type: dict[tuple, list] = {}
    for a, b, tp, regs in edges_raw:
        if p == a or p == b:
            other = b if p == a else a
            by_type.setdefault(tp, []).append(other)
    for tp, others in by_type.items():
        if len(others) != 2:
            return False
        if _cross(p, others[0], others[1]) != 0:
            return False
        d1 = (others[0][0] - p[0], others[0][1] - p[1])
        d2 = (others[1][0] - p[0], others[1][1] - p[1])
        if d1[0] * d2[0] + d1[1] * d2[1] >= 0:
            return False
    return True


# ------------------------------------------------------- limit plots

def component_matroid(D: GoDiagram) -> grassmann.Matroid:
    """Bases whose minor is not identically zero on the stratum of D,
    read off the symbolic projected matrix."""
    word = diagrams.w_of_shape(D.shape)
    A = grassmann.project(grassmann.build_g(word, D), D.shape.k)
    P = grassmann.pluckers(A)
    return grassmann.Matroid(P.k, P.n, frozenset(P.nonzero_indices()))


def contour_minus_infinity(D: GoDiagram, kappa, bbox=None) -> ContourPlot:
    """The limit contour plot of the stratum for large negative time,
    drawn at scale |t| = 1 in physical orientation. Cross-checked against
    the pipe graph of the diagram: trivalent vertices, their exact
    coordinates and their incident soliton types must agree."""
    ks = _kappa(kappa)
    M = component_matroid(D)
    plot = contour_plot(M, ks, Fraction(-1), bbox)
    plot.t = None
    plot.rotated = True
    _check_against_pipes(D, ks, plot)
    return plot


def _check_against_pipes(D: GoDiagram, ks, plot: ContourPlot) -> None:
    g = plabic.from_go(D)
    lab = g.label_all()
    if lab.conflicts:
        raise ValueError(f'pipe graph labels conflict on trips '
                         f'{lab.conflicts}; cannot cross-check')
    want: dict[Point, tuple] = {}
    for v in g.internal_vertices():
        pairs = sorted(tuple(sorted(lab.edge_labels[d >> 1]))
                       for d in g.rot[v])
        idx = sorted(set(i for tp in pairs for i in tp))
        if len(idx) != 3 or len(pairs) != 3:
            raise ValueError(f'pipe vertex {v} is not resonant: {pairs}')
        i, l, m = (ks[j - 1] for j in idx)
        # half-turn of the equal-exponent point of the three indices
        p = (-(i * l + i * m + l * m), i + l + m)
        if p in want:
            raise ValueError(
                f'kappa makes two trivalent vertices coincide at {p}')
        want[p] = tuple(pairs)
    xlo, xhi, ylo, yhi = plot.bbox
    want = {p: tps for p, tps in want.items()
            if xlo < p[0] < xhi and ylo < p[1] < yhi}
    got = {(v.x, v.y): tuple(sorted(v.types))
           for v in plot.vertices if v.kind == 'trivalent'}
    if want != got:
        missing = sorted(set(want) - set(got))
        extra = sorted(set(got) - set(want))
        raise ValueError(
            f'limit plot disagrees with the pipe graph: '
            f'missing {missing}, unexpected {extra}, or type mismatch at '
            f'{sorted(p for p in want if p in got and want[p] != got[p])}')


# -------------------------------------------------------- asymptotics

def unbounded_asymptotics(plot: ContourPlot):
    """Types of the rays escaping upward and downward, each ordered left
    to right (by decreasing slope sum on top, increasing at bottom)."""
    ks = plot.kappa
    top, bottom = [], []
    for e in plot.edges:
        if not e.unbounded:
            continue
        a = plot.vertices[e.v_from]
        b = plot.vertices[e.v_to]
        for end, other in ((a, b), (b, a)):
            if end.kind != 'boundary':
                continue
            if end.y == other.y:
                raise ValueError(f'horizontal ray of type {e.type}')
            s = ks[e.type[0] - 1] + ks[e.type[1] - 1]
            if end.y > other.y:
                top.append((-s, end.x, e.type))
            else:
                bottom.append((s, end.x, e.type))
    top.sort()
    bottom.sort()
    return tuple(t for _, _, t in top), tuple(t for _, _, t in bottom)


def perm_from_plot(plot: ContourPlot) -> DecoratedPermutation:
    """Rebuild the stratum's decorated permutation: upward rays give the
    rises, downward rays the falls, untouched indices are fixed points
    colored by membership in every (or no) region label."""
    top, bottom = unbounded_asymptotics(plot)
    n = plot.n
    image: dict[int, int] = {}

    def put(src, dst):
        if src in image and image[src] != dst:
            raise ValueError(f'rays disagree about position {src}')
        image[src] = dst

    for i, h in top:
        put(i, h)
    for i, h in bottom:
        put(h, i)
    colors = {}
    labels = plot.region_labels()
    for j in range(1, n + 1):
        if j in image:
            continue
        inside = sum(1 for J in labels if j in J)
        if inside == len(labels):
            colors[j] = 1
        elif inside == 0:
            colors[j] = -1
        else:
            raise ValueError(
                f'index {j} has no ray but appears in {inside} of '
                f'{len(labels)} region labels')
        image[j] = j
    perm = tuple(image[i] for i in range(1, n + 1))
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f'ray data does not give a permutation: {perm}')
    pi = diagrams.decorate(perm, colors)
    k = len(labels[0]) if labels else 0
    if labels and pi.k != k:
        raise ValueError(f'{pi.k} weak rises vs label size {k}')
    return pi


# ---------------------------------------------------------- crossings

def classify_crossings(plot: ContourPlot):
    """('black'|'white') per plain crossing: black when the two soliton
    types interleave, white when disjoint or nested."""
    out = []
    for idx, v in enumerate(plot.vertices):
        if v.kind != 'Xcrossing':
            continue
        t1, t2 = sorted(set(v.types))
        order = sorted(t1 + t2)
        interleaved = {order[0], order[2]} in (set(t1), set(t2))
        out.append((idx, 'black' if interleaved else 'white'))
    return tuple(out)


@dataclass
class CrossingCheck:
    vertex: int
    color: str
    regions: tuple
    lhs: Fraction
    rhs: Fraction
    holds: bool


def check_two_term(A, plot: ContourPlot):
    """At every plain crossing the four region minors satisfy a two-term
    relation: opposite products equal for white crossings, negated for
    black ones. Exact verdict per crossing."""
    P = grassmann.pluckers(A)
    colors = dict(classify_crossings(plot))
    out = []
    for idx in plot.crossings():
        v = plot.vertices[idx]
        inc = []
        for e in plot.edges:
            if idx in (e.v_from, e.v_to):
                o = plot.vertices[e.v_to if e.v_from == idx else e.v_from]
                inc.append(((o.x - v.x, o.y - v.y), e))
        inc.sort(key=cmp_to_key(lambda p, q: _angle_cmp(p[0], q[0])))
        cycle = []
        for (d1, e1), (d2, e2) in zip(inc, inc[1:] + inc[:1]):
            common = set(e1.regions) & set(e2.regions)
            if len(common) != 1:
                raise ValueError(f'ambiguous sector at crossing {idx}')
            cycle.append(common.pop())
        lhs = P.value(cycle[0]) * P.value(cycle[2])
        rhs = P.value(cycle[1]) * P.value(cycle[3])
        color = colors[idx]
        holds = (lhs == rhs) if color == 'white' else (lhs == -rhs)
        out.append(CrossingCheck(idx, color, tuple(cycle), lhs, rhs, holds))
    return tuple(out)


def singular_edges(A, plot: ContourPlot) -> frozenset[int]:
    """Edges whose two adjacent region minors have opposite signs; the
    wave is unbounded along them. Flags the edges in place and returns
    their indices. A zero adjacent minor means the plot does not belong
    to this matrix."""
    P = grassmann.pluckers(A)
    bad = set()
    for i, e in enumerate(plot.edges):
        v1 = P.value(e.regions[0])
        v2 = P.value(e.regions[1])
        if v1 == 0 or v2 == 0:
            z = e.regions[0] if v1 == 0 else e.regions[1]
            raise ValueError(f'region label {z} has zero minor; the plot '
                             f'is inconsistent with the matrix')
        e.singular = (v1 < 0 < v2) or (v2 < 0 < v1)
        if e.singular:
            bad.add(i)
    return frozenset(bad)


# ------------------------------------------------------ tau functions

def tau_terms(A, kappa):
    """The nonzero summands of tau: (label J, minor times the
    Vandermonde of the kappas in J), exact."""
    ks = _kappa(kappa)
    P = grassmann.pluckers(A)
    if not P.is_numeric():
        raise ValueError('evaluate parameters before building tau')
    if P.n != len(ks):
        raise ValueError(f'{P.n} columns vs {len(ks)} wave parameters')
    out = []
    for J in P.nonzero_indices():
        van = Fraction(1)
        for a, b in combinations(J, 2):
            van *= ks[b - 1] - ks[a - 1]
        out.append((J, P.value(J) * van))
    return out


def _mpf(q: Fraction):
    return mpmath.mpf(q.numerator) / mpmath.mpf(q.denominator)


def tau_and_u(A, kappa, x, y, t, dps=60):
    """tau and the wave height u = 2*(log tau)_xx at a point, in
    high-precision floating arithmetic; the x-derivatives are taken term
    by term, exactly, before evaluation."""
    ks = _kappa(kappa)
    x, y, t = _as_fraction(x), _as_fraction(y), _as_fraction(t)
    terms = tau_terms(A, kappa)
    with mpmath.workdps(dps):
        tau = mpmath.mpf(0)
        tau_x = mpmath.mpf(0)
        tau_xx = mpmath.mpf(0)
        for J, coef in terms:
            a = sum(ks[j - 1] for j in J)
            theta = sum(ks[j - 1] * x + ks[j - 1] ** 2 * y
                        + ks[j - 1] ** 3 * t for j in J)
            term = _mpf(coef) * mpmath.exp(_mpf(theta))
            tau += term
            tau_x += _mpf(a) * term
            tau_xx += _mpf(a) ** 2 * term
        if tau == 0:
            raise ValueError(f'tau vanishes at ({x},{y},{t}); '
                             f'u is singular there')
        u = 2 * (tau * tau_xx - tau_x ** 2) / tau ** 2
    return tau, u


@dataclass
class RegularityReport:
    status: str               # 'regular' | 'singular' | 'inconclusive'
    exact: bool
    tnn: str
    witnesses: dict = field(default_factory=dict)


def regularity_scan(A, kappa, t_list=(-1, -10, -100), grid=200,
                    bbox=None) -> RegularityReport:
    """Nonnegative points are certified regular exactly: every tau
    summand shares a sign. Otherwise scan sign(tau) on a grid per time;
    a sign change (confirmed in high precision) exhibits a singular wave
    front. Grid failure is reported as inconclusive, not as regularity."""
    import numpy as np

    ks = _kappa(kappa)
    status = grassmann.tnn_status(A)
    if status in ('TP', 'TNN'):
        return RegularityReport('regular', True, status)
    terms = tau_terms(A, kappa)
    sgn = np.array([1.0 if c > 0 else -1.0 for _, c in terms])
    logc = np.array([math.log(float(abs(c))) for _, c in terms])
    a = np.array([float(sum(ks[j - 1] for j in J)) for J, _ in terms])
    b = np.array([float(sum(ks[j - 1] ** 2 for j in J)) for J, _ in terms])
    c3 = np.array([float(sum(ks[j - 1] ** 3 for j in J)) for J, _ in terms])
    witnesses = {}
    for t in t_list:
        t = _as_fraction(t)
        box = default_bbox(ks, t) if bbox is None else bbox
        xs = np.linspace(float(box[0]), float(box[1]), grid)
        ys = np.linspace(float(box[2]), float(box[3]), grid)
        X, Y = np.meshgrid(xs, ys)
        phase = (X[..., None] * a + Y[..., None] * b
                 + float(t) * c3 + logc)
        phase -= phase.max(axis=-1, keepdims=True)
        s = (sgn * np.exp(phase)).sum(axis=-1)
        if (s > 0).any() and (s < 0).any():
            ip = np.unravel_index(int(np.argmax(s)), s.shape)
            im = np.unravel_index(int(np.argmin(s)), s.shape)
            pts = []
            ok = True
            for idx in (ip, im):
                px = Fraction(float(X[idx])).limit_denominator(10 ** 9)
                py = Fraction(float(Y[idx])).limit_denominator(10 ** 9)
                tau, _ = tau_and_u(A, ks, px, py, t)
                pts.append(((px, py), tau))
                ok = ok and tau != 0
            if ok and (pts[0][1] > 0) != (pts[1][1] > 0):
                witnesses[t] = (pts[0][0], pts[1][0])
    if witnesses:
        return RegularityReport('singular', False, status, witnesses)
    return RegularityReport('inconclusive', False, status)


def reverse_columns(A):
    """Column-reversed copy of a matrix, as plain rows. Time-reversed
    analysis of a point uses the reversed column order; experimental."""
    rows = A.rows if hasattr(A, 'rows') else A
    return [list(row)[::-1] for row in rows]
