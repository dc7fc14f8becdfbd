"""Generalized plabic graphs as rotation systems.

Vertices are black/white internal vertices, flagged crossing nodes
(degree 4, trips go straight through, not a real vertex), and boundary
vertices labeled 1..n in counterclockwise disk order. Each rotation
lists outgoing darts counterclockwise. Trips turn right at black
vertices (next dart ccw after the reversed incoming dart), left at
white ones.
"""

from __future__ import annotations

import math
from typing import Mapping, Optional

from . import diagrams
from .diagrams import BLANK, DecoratedPermutation, GoDiagram

BLACKV = 'black'
WHITEV = 'white'
CROSSING = 'crossing'
BOUNDARY = 'boundary'


class PlabicGraph:
    """Immutable-by-convention graph; edge e has darts 2e (u to v)
    and 2e+1 (v to u)."""

    def __init__(self, kinds, edges, rot, boundary_order, labels,
                 iso_colors=None, positions=None):
        self.kinds = dict(kinds)
        self.edges = tuple(tuple(e) for e in edges)
        self.rot = {v: tuple(ds) for v, ds in rot.items()}
        self.boundary_order = tuple(boundary_order)
        self.labels = dict(labels)
        self.iso_colors = dict(iso_colors or {})
        self.positions = dict(positions or {})
        self._validate()

    # ------------------------------------------------------- darts

    def tail(self, d: int) -> int:
        return self.edges[d >> 1][d & 1]

    def target(self, d: int) -> int:
        return self.edges[d >> 1][1 - (d & 1)]

    @staticmethod
    def twin(d: int) -> int:
        return d ^ 1

    def degree(self, v) -> int:
        return len(self.rot[v])

    @property
    def n(self) -> int:
        return len(self.boundary_order)

    def boundary_vertex(self, i: int):
        for v in self.boundary_order:
            if self.labels[v] == i:
                return v
        raise ValueError(f'no boundary vertex labeled {i}')

    def internal_vertices(self):
        return [v for v, k in self.kinds.items() if k in (BLACKV, WHITEV)]

    def _validate(self) -> None:
        seen = {}
        for v, ds in self.rot.items():
            if v not in self.kinds:
                raise ValueError(f'unknown vertex {v}')
            for d in ds:
                if d in seen:
                    raise ValueError(f'dart {d} in two rotations')
                seen[d] = v
                if self.tail(d) != v:
                    raise ValueError(f'dart {d} does not leave {v}')
        for e, (u, v) in enumerate(self.edges):
            if u == v:
                raise ValueError(f'self-loop at {u}')
            if 2 * e not in seen or 2 * e + 1 not in seen:
                raise ValueError(f'edge {e} missing from rotations')
        for v, k in self.kinds.items():
            if k == CROSSING and self.degree(v) != 4:
                raise ValueError(f'crossing {v} has degree {self.degree(v)}')
            if k == BOUNDARY and self.degree(v) > 1:
                raise ValueError(f'boundary vertex {v} has degree > 1')
        labs = sorted(self.labels[v] for v in self.boundary_order)
        if labs != list(range(1, self.n + 1)):
            raise ValueError('boundary labels must be a permutation of 1..n')
        for v in self.boundary_order:
            if self.degree(v) == 0 and v not in self.iso_colors:
                raise ValueError(f'isolated boundary vertex {v} needs a color')

    # ------------------------------------------------------- trips

    def _step(self, d: int) -> int:
        v = self.target(d)
        ds = self.rot[v]
        pos = ds.index(self.twin(d))
        k = self.kinds[v]
        if k == BLACKV:
            return ds[(pos + 1) % len(ds)]
        if k == WHITEV:
            return ds[(pos - 1) % len(ds)]
        if k == CROSSING:
            return ds[(pos + 2) % 4]
        raise ValueError(f'trip stepped into {k} vertex {v}')

    def trip(self, i: int):
        """Follow the rules of the road from boundary vertex i.
        Returns (tuple of darts, endpoint label)."""
        b = self.boundary_vertex(i)
        if self.degree(b) == 0:
            return (), i
        d = self.rot[b][0]
        path = [d]
        limit = 4 * len(self.edges) + 4
        while self.kinds[self.target(d)] != BOUNDARY:
            d = self._step(d)
            path.append(d)
            if len(path) > limit:
                raise ValueError(f'trip from {i} does not terminate')
        return tuple(path), self.labels[self.target(d)]

    def trip_permutation(self) -> DecoratedPermutation:
        perm = [0] * self.n
        colors = {}
        for i in range(1, self.n + 1):
            _, end = self.trip(i)
            perm[i - 1] = end
            if end == i:
                b = self.boundary_vertex(i)
                if self.degree(b) != 0:
                    raise ValueError(f'fixed point {i} without isolated vertex')
                colors[i] = self.iso_colors[b]
        if sorted(perm) != list(range(1, self.n + 1)):
            raise ValueError(f'trips give non-bijection {perm}')
        return diagrams.decorate(tuple(perm), colors)

    # ------------------------------------------------- planar faces

    def _embedding(self):
        """Close up the disk with boundary arcs and trace faces.
        Returns (faces, face_of dart->index, outer face index,
        arc dart count). Arc darts get ids >= 2*len(edges)."""
        base = 2 * len(self.edges)
        nb = self.n
        rot = {v: list(ds) for v, ds in self.rot.items()}
        arc_target = {}
        for j in range(nb):
            u = self.boundary_order[j]
            w = self.boundary_order[(j + 1) % nb]
            arc_target[base + 2 * j] = w
            arc_target[base + 2 * j + 1] = u
        # ccw at a rim vertex: arc to the next rim vertex, then the
        # interior edge, then the arc to the previous one
        for j in range(nb):
            u = self.boundary_order[j]
            to_next = base + 2 * j
            to_prev = base + 2 * ((j - 1) % nb) + 1
            rot[u] = [to_next] + list(self.rot[u]) + [to_prev]

        def targ(d):
            return arc_target[d] if d >= base else self.target(d)

        def tw(d):
            return (d ^ 1) if d >= base else self.twin(d)

        face_of = {}
        faces = []
        all_darts = [d for ds in rot.values() for d in ds]
        pos_in = {}
        for v, ds in rot.items():
            for idx, d in enumerate(ds):
                pos_in[d] = (v, idx)
        for d0 in all_darts:
            if d0 in face_of:
                continue
            face = []
            d = d0
            while d not in face_of:
                face_of[d] = len(faces)
                face.append(d)
                # the face left of d continues with the dart one step
                # clockwise from the reversed dart
                t = tw(d)
                v, idx = pos_in[t]
                d = rot[v][(idx - 1) % len(rot[v])]
            faces.append(tuple(face))
        # the outer face is left of the clockwise rim darts
        outer = face_of[base + 1]
        verts = len(rot)
        edge_count = len(self.edges) + nb
        if verts - edge_count + len(faces) != 2:
            raise ValueError('rotation data is not a planar disk embedding')
        return faces, face_of, outer, base

    # ------------------------------------------------------- labels

    def _trip_sides(self, path, face_of, outer, inner_adj):
        """Mark each interior face L or R of the trip, flooding across
        edges the trip does not use. None when the sides clash."""
        trip_edges = {d >> 1 for d in path}
        side = {}
        for d in path:
            for f, s in ((face_of[d], 'L'), (face_of[self.twin(d)], 'R')):
                if f == outer:
                    continue
                if side.get(f, s) != s:
                    return None
                side[f] = s
        queue = list(side)
        while queue:
            f = queue.pop()
            for e, f2 in inner_adj[f]:
                if e in trip_edges:
                    continue
                if f2 not in side:
                    side[f2] = side[f]
                    queue.append(f2)
                elif side[f2] != side[f]:
                    return None
        if len(side) < len(inner_adj):
            return None
        return side

    def label_all(self) -> 'TripLabeling':
        faces, face_of, outer, base = self._embedding()
        edge_labels = {e: set() for e in range(len(self.edges))}
        region_sets = {f: set() for f in range(len(faces)) if f != outer}
        conflicts = []
        inner_adj = {f: set() for f in region_sets}
        for e in range(len(self.edges)):
            f1, f2 = face_of[2 * e], face_of[2 * e + 1]
            if f1 != outer and f2 != outer:
                inner_adj[f1].add((e, f2))
                inner_adj[f2].add((e, f1))
        for i in range(1, self.n + 1):
            path, _ = self.trip(i)
            for d in path:
                edge_labels[d >> 1].add(i)
            if not path:
                continue
            side = self._trip_sides(path, face_of, outer, inner_adj)
            if side is None:
                conflicts.append(i)
                continue
            for f, s in side.items():
                if s == 'L':
                    region_sets[f].add(i)
        for v in self.boundary_order:
            if self.degree(v) == 0 and self.iso_colors[v] == 1:
                for f in region_sets:
                    region_sets[f].add(self.labels[v])
        regions = tuple(Region(faces[f], frozenset(s))
                        for f, s in sorted(region_sets.items()))
        labeling = TripLabeling(
            {e: frozenset(s) for e, s in edge_labels.items()},
            regions, tuple(sorted(set(conflicts))))
        if not conflicts:
            sizes = {len(r.label) for r in regions}
            if len(sizes) > 1:
                raise ValueError(f'region label sizes differ: {sorted(sizes)}')
        return labeling

    # ---------------------------------------------------- resonance

    def resonance_check(self, labeling: Optional['TripLabeling'] = None):
        """(True, None) if every internal vertex sees ccw edge labels
        [i1,i2],[i2,i3],...,[i1,im]; else (False, first bad vertex)."""
        if labeling is None:
            labeling = self.label_all()
        for v in sorted(self.internal_vertices(), key=str):
            labs = []
            for d in self.rot[v]:
                s = labeling.edge_labels[d >> 1]
                if len(s) != 2:
                    return False, v
                labs.append(tuple(sorted(s)))
            vals = sorted({x for lab in labs for x in lab})
            m = len(vals)
            if len(labs) != m:
                return False, v
            want = [(vals[j], vals[j + 1]) for j in range(m - 1)]
            want.append((vals[0], vals[m - 1]))
            try:
                start = labs.index(want[0])
            except ValueError:
                return False, v
            if [labs[(start + j) % m] for j in range(m)] != want:
                return False, v
        return True, None

    # -------------------------------------------------------- moves

    def _copy_parts(self):
        return (dict(self.kinds), [list(e) for e in self.edges],
                {v: list(ds) for v, ds in self.rot.items()},
                list(self.boundary_order), dict(self.labels),
                dict(self.iso_colors), dict(self.positions))

    def _fresh_id(self):
        nums = [v for v in self.kinds if isinstance(v, int)]
        return max(nums, default=-1) + 1

    def apply_move(self, move: str, site) -> 'PlabicGraph':
        if move == 'M1':
            return self._move_square(site)
        if move == 'M2':
            if site[0] == 'contract':
                return self._move_contract(site[1])
            if site[0] == 'uncontract':
                return self._move_uncontract(*site[1:])
        if move == 'M3':
            if site[0] == 'remove':
                return self._move_remove(site[1])
            if site[0] == 'insert':
                return self._move_insert(*site[1:])
        raise ValueError(f'unknown move {move}/{site!r}')

    def _move_square(self, cycle) -> 'PlabicGraph':
        if len(cycle) != 4:
            raise ValueError('square move needs a 4-cycle of vertices')
        for idx, v in enumerate(cycle):
            nxt = cycle[(idx + 1) % 4]
            if self.kinds.get(v) not in (BLACKV, WHITEV) or self.degree(v) != 3:
                raise ValueError(f'{v} is not an internal trivalent vertex')
            if self.kinds[v] == self.kinds[nxt]:
                raise ValueError('square colors must alternate')
            if not any(self.target(d) == nxt for d in self.rot[v]):
                raise ValueError(f'{v} and {nxt} are not adjacent')
        kinds, edges, rot, border, labels, iso, pos = self._copy_parts()
        for v in cycle:
            kinds[v] = BLACKV if kinds[v] == WHITEV else WHITEV
        return PlabicGraph(kinds, edges, rot, border, labels, iso, pos)

    def _move_contract(self, e: int) -> 'PlabicGraph':
        u, v = self.edges[e]
        if self.kinds[u] != self.kinds[v] or self.kinds[u] not in (BLACKV, WHITEV):
            raise ValueError('contraction needs a unicolored internal edge')
        if sum(1 for (a, b) in self.edges if {a, b} == {u, v}) > 1:
            raise ValueError('cannot contract a parallel edge')
        kinds, edges, rot, border, labels, iso, pos = self._copy_parts()
        du, dv = 2 * e, 2 * e + 1
        if self.tail(du) != u:
            du, dv = dv, du
        ru, rv = rot[u], rot[v]
        iu, iv = ru.index(du), rv.index(dv)
        merged = ru[iu + 1:] + ru[:iu] + rv[iv + 1:] + rv[:iv]
        rot[u] = merged
        del rot[v], kinds[v]
        pos.pop(v, None)
        for idx, (a, b) in enumerate(edges):
            edges[idx] = [u if a == v else a, u if b == v else b]
        # drop edge e by swapping in the last edge to keep dart ids dense
        return self._rebuild_without_edge(kinds, edges, rot, border, labels,
                                          iso, pos, {e})

    def _rebuild_without_edge(self, kinds, edges, rot, border, labels, iso,
                              pos, dead: set) -> 'PlabicGraph':
        keep = [i for i in range(len(edges)) if i not in dead]
        remap = {}
        new_edges = []
        for new_i, old_i in enumerate(keep):
            new_edges.append(edges[old_i])
            remap[2 * old_i] = 2 * new_i
            remap[2 * old_i + 1] = 2 * new_i + 1
        new_rot = {v: [remap[d] for d in ds if (d >> 1) not in dead]
                   for v, ds in rot.items()}
        return PlabicGraph(kinds, new_edges, new_rot, border, labels, iso, pos)

    def _move_uncontract(self, v, i: int, j: int, color=None) -> 'PlabicGraph':
        if self.kinds.get(v) not in (BLACKV, WHITEV):
            raise ValueError('can only uncontract an internal vertex')
        ds = self.rot[v]
        m = len(ds)
        if not (0 <= i < m and 0 <= j < m and i != j):
            raise ValueError('bad split positions')
        kinds, edges, rot, border, labels, iso, pos = self._copy_parts()
        v2 = self._fresh_id()
        kinds[v2] = color or kinds[v]
        if kinds[v2] != kinds[v]:
            raise ValueError('uncontraction keeps the color')
        part1 = [ds[(i + t) % m] for t in range((j - i) % m)]
        part2 = [ds[(j + t) % m] for t in range((i - j) % m)]
        e = len(edges)
        edges.append([v, v2])
        rot[v] = part1 + [2 * e]
        rot[v2] = part2 + [2 * e + 1]
        for d in part2:
            # dart d now leaves v2: its tail slot is d & 1
            edges[d >> 1][d & 1] = v2
        if v in pos:
            pos[v2] = pos[v]
        return PlabicGraph(kinds, edges, rot, border, labels, iso, pos)

    def _move_remove(self, v) -> 'PlabicGraph':
        if self.kinds.get(v) not in (BLACKV, WHITEV) or self.degree(v) != 2:
            raise ValueError('M3 removal needs an internal degree-2 vertex')
        d1, d2 = self.rot[v]
        a, b = self.target(d1), self.target(d2)
        if a == b:
            raise ValueError('removal would create a self-loop')
        kinds, edges, rot, border, labels, iso, pos = self._copy_parts()
        e_new = len(edges)
        edges.append([a, b])
        rot[a][rot[a].index(self.twin(d1))] = 2 * e_new
        rot[b][rot[b].index(self.twin(d2))] = 2 * e_new + 1
        del rot[v], kinds[v]
        pos.pop(v, None)
        return self._rebuild_without_edge(kinds, edges, rot, border, labels,
                                          iso, pos, {d1 >> 1, d2 >> 1})

    def _move_insert(self, e: int, color: str) -> 'PlabicGraph':
        if color not in (BLACKV, WHITEV):
            raise ValueError('insert needs a color')
        kinds, edges, rot, border, labels, iso, pos = self._copy_parts()
        u, v = edges[e]
        w = self._fresh_id()
        kinds[w] = color
        e2 = len(edges)
        edges[e] = [u, w]
        edges.append([w, v])
        rot[w] = [2 * e + 1, 2 * e2]
        rot[v][rot[v].index(2 * e + 1)] = 2 * e2 + 1
        if u in pos and v in pos:
            pos[w] = ((pos[u][0] + pos[v][0]) / 2, (pos[u][1] + pos[v][1]) / 2)
        return PlabicGraph(kinds, edges, rot, border, labels, iso, pos)

    def detect_R1(self):
        """A pair of opposite-colored trivalent vertices joined by two
        edges that bound a bigon, or None."""
        for v in self.internal_vertices():
            if self.degree(v) != 3:
                continue
            ds = self.rot[v]
            for idx in range(3):
                d1, d2 = ds[idx], ds[(idx + 1) % 3]
                u = self.target(d1)
                if u != self.target(d2):
                    continue
                if self.kinds.get(u) not in (BLACKV, WHITEV):
                    continue
                if self.kinds[u] == self.kinds[v] or self.degree(u) != 3:
                    continue
                ru = self.rot[u]
                iu1, iu2 = ru.index(self.twin(d1)), ru.index(self.twin(d2))
                if (iu1 - iu2) % 3 == 1:
                    return (v, u, (d1 >> 1, d2 >> 1))
        return None

    def m1_sites(self):
        """Interior quadrilateral faces with four alternating trivalent
        corners, listed as 4-cycles of vertex ids."""
        faces, face_of, outer, base = self._embedding()
        sites = []
        for f, darts in enumerate(faces):
            if f == outer or len(darts) != 4 or any(d >= base for d in darts):
                continue
            cyc = [self.tail(d) for d in darts]
            if len(set(cyc)) != 4:
                continue
            ok = all(self.kinds.get(v) in (BLACKV, WHITEV)
                     and self.degree(v) == 3 for v in cyc)
            if ok and all(self.kinds[cyc[t]] != self.kinds[cyc[(t + 1) % 4]]
                          for t in range(4)):
                sites.append(tuple(cyc))
        return sites

    # ---------------------------------------------------- canonical

    def canonical_key(self) -> str:
        """Deterministic encoding; equal iff the labeled embedded
        graphs are isomorphic respecting boundary labels."""
        order = {}
        out = []
        queue = []
        for i in range(1, self.n + 1):
            v = self.boundary_vertex(i)
            order[v] = len(order)
            queue.append(v)
            out.append(f'b{i}' + (f':{self.iso_colors[v]}'
                                  if self.degree(v) == 0 else ''))
        entry = {}
        head = 0
        while head < len(queue):
            v = queue[head]
            head += 1
            ds = self.rot[v]
            if not ds:
                continue
            if v in entry:
                k = ds.index(entry[v])
                ds = ds[k:] + ds[:k]
            spec = [self.kinds[v][0]]
            for d in ds:
                w = self.target(d)
                if w not in order:
                    order[w] = len(order)
                    entry[w] = self.twin(d)
                    queue.append(w)
                spec.append(str(order[w]))
            out.append(','.join(spec))
        if len(order) != len(self.kinds):
            raise ValueError('graph is not connected to the boundary')
        return ';'.join(out)

    # ------------------------------------------------------- export

    def to_json(self) -> dict:
        nodes = []
        for v in sorted(self.kinds, key=str):
            entry = {'id': str(v), 'kind': self.kinds[v]}
            if v in self.labels:
                entry['label'] = self.labels[v]
            if v in self.iso_colors:
                entry['color'] = self.iso_colors[v]
            nodes.append(entry)
        return {
            'nodes': nodes,
            'edges': [[str(u), str(v)] for u, v in self.edges],
            'rotations': {str(v): list(ds) for v, ds in self.rot.items()},
            'boundary': [str(v) for v in self.boundary_order],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> 'PlabicGraph':
        kinds = {n['id']: n['kind'] for n in data['nodes']}
        labels = {n['id']: n['label'] for n in data['nodes'] if 'label' in n}
        iso = {n['id']: n['color'] for n in data['nodes'] if 'color' in n}
        return cls(kinds, [tuple(e) for e in data['edges']],
                   {v: tuple(ds) for v, ds in data['rotations'].items()},
                   data['boundary'], labels, iso)

    def to_dot(self) -> str:
        lines = ['graph plabic {']
        for v, k in sorted(self.kinds.items(), key=lambda t: str(t[0])):
            if k == BOUNDARY:
                shape = f'label="{self.labels[v]}" shape=none'
            elif k == CROSSING:
                shape = 'label="" shape=point color=gray'
            else:
                fill = 'black' if k == BLACKV else 'white'
                shape = f'label="" shape=circle style=filled fillcolor={fill}'
            lines.append(f'  "{v}" [{shape}];')
        for u, v in self.edges:
            lines.append(f'  "{u}" -- "{v}";')
        lines.append('}')
        return '\n'.join(lines)

    def to_svg(self) -> str:
        pos = dict(self.positions)
        if set(pos) != set(self.kinds):
            pos = _spring_layout(self)
        xs = [p[0] for p in pos.values()]
        ys = [p[1] for p in pos.values()]
        pad = 0.6
        x0, x1 = min(xs) - pad, max(xs) + pad
        y0, y1 = min(ys) - pad, max(ys) + pad
        scale = 60.0
        w, h = (x1 - x0) * scale, (y1 - y0) * scale

        def pt(v):
            x, y = pos[v]
            return (x - x0) * scale, (y1 - y) * scale

        parts = [f'<svg xmlns="http://www.w3.org/2000/svg" '
                 f'width="{w:.0f}" height="{h:.0f}" '
                 f'viewBox="0 0 {w:.1f} {h:.1f}">']
        for u, v in self.edges:
            (ax, ay), (bx, by) = pt(u), pt(v)
            parts.append(f'<line x1="{ax:.1f}" y1="{ay:.1f}" x2="{bx:.1f}" '
                         f'y2="{by:.1f}" stroke="black"/>')
        for v, k in self.kinds.items():
            x, y = pt(v)
            if k == BOUNDARY:
                parts.append(f'<text x="{x:.1f}" y="{y:.1f}" '
                             f'font-size="12">{self.labels[v]}</text>')
            elif k == CROSSING:
                parts.append(f'<rect x="{x - 2:.1f}" y="{y - 2:.1f}" '
                             f'width="4" height="4" fill="gray"/>')
            else:
                fill = 'black' if k == BLACKV else 'white'
                parts.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="5" '
                             f'fill="{fill}" stroke="black"/>')
        parts.append('</svg>')
        return '\n'.join(parts)


class Region:
    def __init__(self, darts, label):
        self.darts = tuple(darts)
        self.label = frozenset(label)

    def __repr__(self):
        return f'Region({sorted(self.label)})'


class TripLabeling:
    def __init__(self, edge_labels, regions, conflicts=()):
        self.edge_labels = dict(edge_labels)
        self.regions = tuple(regions)
        self.conflicts = tuple(conflicts)

    def region_label_multiset(self):
        return tuple(sorted(tuple(sorted(r.label)) for r in self.regions))

    def edge_label_multiset(self):
        return tuple(sorted(tuple(sorted(s))
                            for s in self.edge_labels.values()))


def _spring_layout(g: PlabicGraph, rounds: int = 200):
    pos = {}
    nb = g.n
    for j, v in enumerate(g.boundary_order):
        a = 2 * math.pi * j / nb
        pos[v] = (math.cos(a), math.sin(a))
    inner = [v for v in g.kinds if v not in pos]
    for v in inner:
        pos[v] = (0.0, 0.0)
    adj = {v: [] for v in g.kinds}
    for u, v in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    for _ in range(rounds):
        for v in inner:
            if adj[v]:
                xs = [pos[u][0] for u in adj[v]]
                ys = [pos[u][1] for u in adj[v]]
                pos[v] = (sum(xs) / len(xs), sum(ys) / len(ys))
    return pos


# ----------------------------------------------------------- from_go

def from_go(D: GoDiagram) -> PlabicGraph:
    """Pipe construction: stones become pipe crossings, blanks become
    elbow pairs joined by a black-white bridge; straight border runs
    are erased and elbow-free pipes become isolated colored vertices."""
    shape = D.shape
    k, n = shape.k, shape.n
    width = n - k
    rows = shape.rows
    lam1 = rows[0] if rows else 0
    boxes = set(shape.boxes())

    def neighbor(box, out):
        r, c = box
        nxt = (r - 1, c) if out == 'N' else (r, c - 1)
        return (nxt, 'S' if out == 'N' else 'E') if nxt in boxes else None

    starts = {}
    for r in range(1, k + 1):
        if rows[r - 1] > 0:
            starts[shape.row_label(r)] = ((r, rows[r - 1]), 'E')
    for c in range(1, lam1 + 1):
        starts[shape.col_label(c)] = ((shape.column_height(c), c), 'S')

    pipes = {}
    for lab, (box, into) in starts.items():
        path = []
        while True:
            blank = D.at(box) == BLANK
            out = ({'E': 'N', 'S': 'W'} if blank else
                   {'E': 'W', 'S': 'N'})[into]
            path.append((box, into, out))
            nxt = neighbor(box, out)
            if nxt is None:
                r, c = box
                port = ('N', c) if out == 'N' else ('W', r)
                pipes[lab] = (tuple(path), port)
                break
            box, into = nxt

    # erase straight prefixes; fully straight pipes become isolated
    dead = set()          # (box, axis) passages removed, axis 'H' or 'V'
    isolated = {}         # port -> (label, color)
    for lab, (path, port) in pipes.items():
        axis = 'H' if path[0][1] == 'E' else 'V'
        if all(D.at(b) != BLANK for b, _, _ in path):
            for b, _, _ in path:
                dead.add((b, axis))
            isolated[port] = (lab, 1 if axis == 'H' else -1)
            continue
        for b, into, out in path:
            if D.at(b) == BLANK:
                break
            dead.add((b, axis))

    # rows and columns with no boxes at all contribute trivial pipes
    for r in range(1, k + 1):
        if rows[r - 1] == 0:
            isolated[('W', r)] = (shape.row_label(r), 1)
    for c in range(lam1 + 1, width + 1):
        lab = sum(1 for lr in rows if lr >= c) + width - c + 1
        isolated[('N', c)] = (lab, -1)

    kinds = {}
    positions = {}

    def add(node, kind, xy):
        kinds[node] = kind
        positions[node] = xy

    for (r, c) in sorted(boxes):
        if D.at((r, c)) == BLANK:
            add(('A', r, c), WHITEV, (c - 0.25, -r + 0.75))
            add(('B', r, c), BLACKV, (c - 0.75, -r + 0.25))
        elif ((r, c), 'H') not in dead and ((r, c), 'V') not in dead:
            add(('X', r, c), CROSSING, (c - 0.5, -r + 0.5))

    boundary_order = []
    labels = {}
    iso_colors = {}
    ports = [('N', c) for c in range(width, 0, -1)] + \
            [('W', r) for r in range(1, k + 1)]
    for port in ports:
        node = ('b',) + port
        s, idx = port
        add(node, BOUNDARY,
            (idx - 0.5, 0.5) if s == 'N' else (-0.5, -idx + 0.5))
        boundary_order.append(node)
        if port in isolated:
            labels[node], iso_colors[node] = isolated[port]

    def attach(box, into):
        r, c = box
        if D.at((r, c)) == BLANK:
            return ('A', r, c) if into == 'E' else ('B', r, c)
        return ('X', r, c) if ('X', r, c) in kinds else None

    side_slot = {'E': 0, 'N': 1, 'W': 2, 'S': 3}   # ccw rotation at a cross
    pending = {}
    edges = []

    def connect(a, a_side, b, b_side):
        e = len(edges)
        edges.append((a, b))
        pending.setdefault(a, []).append((a_side, 2 * e))
        pending.setdefault(b, []).append((b_side, 2 * e + 1))

    for lab, (path, port) in pipes.items():
        if port in isolated:
            continue
        chain = []
        started = False
        for b, into, out in path:
            if not started and D.at(b) != BLANK:
                continue
            started = True
            node = attach(b, into)
            if node is not None:
                chain.append((node, into, out))
        end_node = ('b',) + port
        labels[end_node] = lab
        chain.append((end_node, None, None))
        for (na, _, outa), (nb, inb, _) in zip(chain, chain[1:]):
            connect(na, outa, nb, inb)

    for (r, c) in sorted(boxes):
        if D.at((r, c)) == BLANK:
            connect(('A', r, c), 'bridge', ('B', r, c), 'bridge')

    rot = {}
    # ccw leg orders: east-north elbow (N, bridge, E), south-west elbow
    # (bridge, W, S), crossing (E, N, W, S)
    elbow_order = {'A': {'N': 0, 'bridge': 1, 'E': 2},
                   'B': {'bridge': 0, 'W': 1, 'S': 2}}
    for node, kind in kinds.items():
        items = pending.get(node, [])
        if kind == BOUNDARY:
            rot[node] = [d for _, d in items]
        elif kind == CROSSING:
            rot[node] = [d for _, d in
                         sorted(items, key=lambda t: side_slot[t[0]])]
        else:
            order = elbow_order[node[0]]
            rot[node] = [d for _, d in
                         sorted(items, key=lambda t: order[t[0]])]

    g = PlabicGraph(kinds, edges, rot, boundary_order, labels, iso_colors,
                    positions)
    while True:
        two = [v for v in g.internal_vertices() if g.degree(v) == 2]
        if not two:
            return g
        g = g._move_remove(two[0])


# ------------------------------------------------- move search

def move_neighbors(g: PlabicGraph) -> list[PlabicGraph]:
    """Every graph one move away: square moves at quadrilateral sites,
    unicolored contractions and uncontractions, middle-vertex
    insertions and removals."""
    out = []
    for site in g.m1_sites():
        out.append(g.apply_move('M1', site))
    for e, (u, v) in enumerate(g.edges):
        if (g.kinds[u] == g.kinds[v] and g.kinds[u] in (BLACKV, WHITEV)
                and sum(1 for a, b in g.edges if {a, b} == {u, v}) == 1):
            out.append(g.apply_move('M2', ('contract', e)))
        out.append(g.apply_move('M3', ('insert', e, BLACKV)))
        out.append(g.apply_move('M3', ('insert', e, WHITEV)))
    for v in g.internal_vertices():
        deg = g.degree(v)
        if deg == 2 and g.target(g.rot[v][0]) != g.target(g.rot[v][1]):
            out.append(g.apply_move('M3', ('remove', v)))
        if deg >= 4:
            # splits with both parts of size >= 2; smaller parts are
            # middle-vertex insertions, covered above
            for i in range(deg):
                for step in range(2, deg - 1):
                    out.append(g.apply_move(
                        'M2', ('uncontract', v, i, (i + step) % deg)))
    return out


def search_R1(g: PlabicGraph, depth: int):
    """Bounded BFS through moves looking for a parallel-edge pair.
    Returns (graph, site) or None; completeness is not claimed."""
    site = g.detect_R1()
    if site is not None:
        return g, site
    seen = {g.canonical_key()}
    frontier = [g]
    for _ in range(depth):
        nxt = []
        for h in frontier:
            for gg in move_neighbors(h):
                key = gg.canonical_key()
                if key in seen:
                    continue
                seen.add(key)
                site = gg.detect_R1()
                if site is not None:
                    return gg, site
                nxt.append(gg)
        frontier = nxt
    return None


# ----------------------------------------------- triangulations

def all_triangulations(n: int):
    """Every maximal set of noncrossing diagonals of the n-gon."""
    if n < 3:
        raise ValueError('need n >= 3')

    def rec(verts):
        if len(verts) < 3:
            return [frozenset()]
        a, b = verts[0], verts[-1]
        out = []
        for idx in range(1, len(verts) - 1):
            m = verts[idx]
            left = rec(verts[:idx + 1])
            right = rec(verts[idx:])
            extra = []
            if idx > 1:
                extra.append((min(a, m), max(a, m)))
            if idx < len(verts) - 2:
                extra.append((min(m, b), max(m, b)))
            for L in left:
                for R in right:
                    out.append(L | R | frozenset(extra))
        return out

    return rec(list(range(1, n + 1)))


def triangles_of(n: int, diagonals) -> list[tuple[int, int, int]]:
    diagonals = {tuple(sorted(d)) for d in diagonals}
    if len(diagonals) != n - 3:
        raise ValueError(f'a triangulation of an {n}-gon has {n - 3} diagonals')
    chords = set(diagonals)
    for i in range(1, n):
        chords.add((i, i + 1))
    chords.add((1, n))

    def has(a, b):
        return (min(a, b), max(a, b)) in chords

    def rec(verts):
        if len(verts) == 3:
            return [tuple(verts)]
        a, b = verts[0], verts[1]
        for idx in range(2, len(verts)):
            m = verts[idx]
            if has(a, m) and has(b, m):
                left = rec([b] + verts[2:idx + 1])if idx > 2 else []
                right = rec([a] + verts[idx:]) if idx < len(verts) - 1 else []
                return [tuple(sorted((a, b, m)))] + left + right
        raise ValueError('diagonals do not triangulate the polygon')

    tris = rec(list(range(1, n + 1)))
    if len(tris) != n - 2:
        raise ValueError('diagonals do not triangulate the polygon')
    return sorted(tris)


def flip_diagonal(n: int, diagonals, d):
    """Replace diagonal d by the other diagonal of its quadrilateral."""
    d = tuple(sorted(d))
    diagonals = {tuple(sorted(x)) for x in diagonals}
    if d not in diagonals:
        raise ValueError(f'{d} is not a diagonal')
    tris = [t for t in triangles_of(n, diagonals) if set(d) <= set(t)]
    others = sorted(set(tris[0]) ^ set(tris[1]))
    return frozenset((diagonals - {d}) | {tuple(others)})


def from_triangulation(n: int, diagonals) -> PlabicGraph:
    """Build the soliton graph of a triangulation: black vertices in
    triangles, white at polygon corners touching a diagonal, contract
    unicolored edges, one boundary ray per corner."""
    tris = triangles_of(n, diagonals)
    diagset = {tuple(sorted(x)) for x in diagonals}
    on_diag = {v for d in diagset for v in d}

    kinds = {}
    positions = {}
    corner = {}
    for j in range(1, n + 1):
        a = 2 * math.pi * (j - 1) / n
        corner[j] = ('v', j)
        kinds[corner[j]] = WHITEV if j in on_diag else BLACKV
        positions[corner[j]] = (math.cos(a), math.sin(a))
    cent = {}
    for t in tris:
        cent[t] = ('t',) + t
        kinds[cent[t]] = BLACKV
        positions[cent[t]] = (
            sum(positions[corner[v]][0] for v in t) / 3,
            sum(positions[corner[v]][1] for v in t) / 3)
    for j in range(1, n + 1):
        b = ('b', j)
        kinds[b] = BOUNDARY
        positions[b] = (1.35 * positions[corner[j]][0],
                        1.35 * positions[corner[j]][1])

    edges = []
    touch = {v: [] for v in kinds}

    def connect(a, b):
        e = len(edges)
        edges.append((a, b))
        touch[a].append(2 * e)
        touch[b].append(2 * e + 1)

    for t in tris:
        for v in t:
            connect(cent[t], corner[v])
    for j in range(1, n + 1):
        connect(corner[j], ('b', j))

    def angle_key(v, d):
        e = d >> 1
        a, b = edges[e]
        other = b if (d & 1) == 0 else a
        ax, ay = positions[v]
        bx, by = positions[other]
        return math.atan2(by - ay, bx - ax) % (2 * math.pi)

    rot = {v: sorted(ds, key=lambda d: angle_key(v, d))
           for v, ds in touch.items()}
    # the ray at polygon corner j carries boundary label j-1; this makes
    # each bounded face label equal its diagonal
    labels = {('b', j): (j - 2) % n + 1 for j in range(1, n + 1)}
    g = PlabicGraph(kinds, edges, rot, [('b', j) for j in range(1, n + 1)],
                    labels, {}, positions)
    return contract_unicolored(g)


def contract_unicolored(g: PlabicGraph) -> PlabicGraph:
    """M2-contract until no edge joins two same-colored vertices."""
    while True:
        for e, (u, v) in enumerate(g.edges):
            if (g.kinds[u] == g.kinds[v]
                    and g.kinds[u] in (BLACKV, WHITEV)):
                g = g._move_contract(e)
                break
        else:
            return g


def normal_form(g: PlabicGraph) -> PlabicGraph:
    """Contract unicolored edges and drop degree-2 vertices."""
    g = contract_unicolored(g)
    while True:
        two = [v for v in g.internal_vertices() if g.degree(v) == 2]
        if not two:
            return g
        g = g._move_remove(two[0])
        g = contract_unicolored(g)


# ----------------------------------------------- from contour plots

def from_contour(plot, pi: DecoratedPermutation) -> PlabicGraph:
    """Embed a generic contour plot in the disk: trivalent vertices
    colored by their unique downward (black) or upward (white) edge,
    crossings kept as crossing nodes, rays ordered by exit angle."""
    kinds = {}
    positions = {}
    for idx, v in enumerate(plot.vertices):
        if v.kind == 'higher':
            raise ValueError(
                f'plot has a degree-{len(v.types)} vertex at '
                f'({v.x},{v.y}); no plabic-graph form')
        if v.kind == 'boundary':
            continue
        kinds[idx] = CROSSING if v.kind == 'Xcrossing' else None
        positions[idx] = (float(v.x), float(v.y))

    incident = {}
    edges = []
    ray_info = []
    for e in plot.edges:
        a, b = e.v_from, e.v_to
        for end, other in ((a, b), (b, a)):
            if plot.vertices[end].kind != 'boundary':
                incident.setdefault(end, []).append((len(edges), other))
        edges.append([a, b])

    # color trivalent vertices by the unique up or down edge
    for idx in list(kinds):
        if kinds[idx] is not None:
            continue
        ups = 0
        here = plot.vertices[idx]
        for ei, other in incident[idx]:
            o = plot.vertices[other]
            if o.y > here.y:
                ups += 1
        kinds[idx] = WHITEV if ups == 1 else BLACKV

    # boundary vertices in ccw order around the box, starting low-left
    exits = []
    for ei, e in enumerate(plot.edges):
        for end, other in ((e.v_from, e.v_to), (e.v_to, e.v_from)):
            v = plot.vertices[end]
            if v.kind != 'boundary':
                continue
            i, j = e.type
            up = v.y > plot.vertices[other].y
            label = pi.perm[i - 1] if up else i
            if up and pi.perm[i - 1] != j:
                raise ValueError(f'top ray [{i},{j}] not an excedance')
            if not up and pi.perm[j - 1] != i:
                raise ValueError(f'bottom ray [{i},{j}] not a nonexcedance')
            exits.append((_perimeter_key(v, plot.bbox), end, ei, label))
    exits.sort(key=lambda t: t[0])

    boundary_order = []
    labels = {}
    iso_colors = {}
    node_of_end = {}
    for key, end, ei, label in exits:
        node = ('b', label)
        kinds[node] = BOUNDARY
        v = plot.vertices[end]
        positions[node] = (float(v.x), float(v.y))
        labels[node] = label
        boundary_order.append(node)
        node_of_end[end] = node

    npts = len(pi.perm)
    for h in range(1, npts + 1):
        if pi.perm[h - 1] != h:
            continue
        node = ('b', h)
        kinds[node] = BOUNDARY
        labels[node] = h
        iso_colors[node] = pi.color(h)
        seq = [labels[b] for b in boundary_order]
        spot = len(seq)
        for idx in range(len(seq)):
            a, b = seq[idx], seq[(idx + 1) % len(seq)]
            if (a - h) % npts > (a - b) % npts:
                spot = idx + 1
                break
        boundary_order.insert(spot, node)
        positions[node] = (0.0, 0.0)

    touch = {v: [] for v in kinds}
    final_edges = []
    for ei, (a, b) in enumerate(edges):
        na = node_of_end.get(a, a)
        nb = node_of_end.get(b, b)
        e = len(final_edges)
        final_edges.append((na, nb))
        touch[na].append(2 * e)
        touch[nb].append(2 * e + 1)

    def dir_key(v, d):
        e = d >> 1
        a, b = final_edges[e]
        other = b if (d & 1) == 0 else a
        pa, pb = positions[v], positions[other]
        return math.atan2(pb[1] - pa[1], pb[0] - pa[0]) % (2 * math.pi)

    rot = {}
    for v, ds in touch.items():
        if kinds[v] == BOUNDARY:
            rot[v] = ds
        else:
            rot[v] = sorted(ds, key=lambda d: dir_key(v, d))
    return PlabicGraph(kinds, final_edges, rot, boundary_order, labels,
                       iso_colors, positions)


def _perimeter_key(v, bbox):
    # ccw around the box starting at the bottom-left corner
    xlo, xhi, ylo, yhi = bbox
    if v.y == ylo:
        return (0, v.x - xlo)
    if v.x == xhi:
        return (1, v.y - ylo)
    if v.y == yhi:
        return (2, xhi - v.x)
    if v.x == xlo:
        return (3, yhi - v.y)
    raise ValueError(f'ray endpoint ({v.x},{v.y}) is not on the box')
