"""Tests for generalized plabic graphs.

Oracles:
  * oracle_faces counts faces from an independent Euler computation.
  * the pipe-graph trip permutations are checked against the
    algebraically computed decorated permutation of each diagram.
  * flip_via_square_move realizes a diagonal flip with M2
    normalization around the square, then one M1, then contraction;
    the result must equal the graph built from the flipped
    triangulation directly.
"""

import json
import math
from types import SimpleNamespace

import pytest

from grasstropic import diagrams as dg
from grasstropic import plabic, weyl
from grasstropic.diagrams import BLANK, WHITE, BLACK
from grasstropic.plabic import PlabicGraph


# --------------------------------------------------------- fixtures

def go(text):
    return dg.go_from_text(text)


def bigon_graph():
    # 1 -- W == B -- 2 with the doubled edge bounding a face
    kinds = {'W': 'white', 'B': 'black', 1: 'boundary', 2: 'boundary'}
    edges = [('W', 'B'), ('W', 'B'), (1, 'W'), ('B', 2)]
    rot = {'W': (0, 5, 2), 'B': (3, 6, 1), 1: (4,), 2: (7,)}
    return PlabicGraph(kinds, edges, rot, (1, 2), {1: 1, 2: 2})


def staircase_fillings():
    """All distinguished fillings of the (4,4,3,3) shape with kept
    product (1,3,4,2,5,7,6,8)."""
    shape = dg.ShapeIdeal(4, 8, (4, 4, 3, 3))
    word = dg.w_of_shape(shape)
    order = dg.canonical_reading(shape)
    out = []
    for sub in weyl.enumerate_distinguished(word, 8,
                                            v_target=(1, 3, 4, 2, 5, 7, 6, 8)):
        rows = [[BLANK] * lam for lam in shape.rows]
        for pos, (r, c) in enumerate(order, start=1):
            if pos in sub.j_plus:
                rows[r - 1][c - 1] = WHITE
            elif pos in sub.j_black:
                rows[r - 1][c - 1] = BLACK
        out.append(dg.GoDiagram(shape, tuple(''.join(line) for line in rows)))
    return out


def all_go(k, n):
    return list(dg.enumerate_go_diagrams(k, n))


def le_diagrams(k, n):
    return [D for D in all_go(k, n) if dg.is_le_diagram(D)]


def bounded_labels(g):
    lab = g.label_all()
    _, _, _, base = g._embedding()
    return sorted(tuple(sorted(r.label)) for r in lab.regions
                  if all(d < base for d in r.darts))


def unbounded_labels(g):
    lab = g.label_all()
    _, _, _, base = g._embedding()
    return sorted(tuple(sorted(r.label)) for r in lab.regions
                  if any(d >= base for d in r.darts))


# ------------------------------------------------------------ trips

def test_trip_single_edge():
    D = go('k=1 n=2\n.\n')
    g = plabic.from_go(D)
    assert len(g.edges) == 1
    assert not g.internal_vertices()
    path, end = g.trip(1)
    assert end == 2 and len(path) == 1
    assert g.trip(2)[1] == 1


def test_trip_permutation_all_isolated():
    D = go('k=1 n=2\no\n')
    g = plabic.from_go(D)
    assert not g.edges
    got = g.trip_permutation()
    assert got.perm == (1, 2)
    assert got.color(1) == 1 and got.color(2) == -1


def test_trip_nonbijection_guard():
    g = bigon_graph()
    # both trips return to their start without an isolated vertex
    with pytest.raises(ValueError):
        g.trip_permutation()


def test_staircase_trip_permutation():
    fillings = staircase_fillings()
    assert len(fillings) == 8
    for D in fillings:
        g = plabic.from_go(D)
        got = g.trip_permutation()
        assert got.perm == (5, 7, 1, 6, 8, 3, 4, 2)
        assert got == dg.decorated_pi_of_go(D)


def test_pipe_graphs_match_decorated_perm_small():
    for n in range(2, 6):
        for k in range(1, n):
            for D in all_go(k, n):
                g = plabic.from_go(D)
                assert g.trip_permutation() == dg.decorated_pi_of_go(D), \
                    dg.go_to_text(D)


# ----------------------------------------------------------- labels

def test_labels_single_edge():
    g = plabic.from_go(go('k=1 n=2\n.\n'))
    lab = g.label_all()
    assert lab.region_label_multiset() == ((1,), (2,))
    assert lab.conflicts == ()


def test_label_region_sizes_and_edge_rule():
    for D in all_go(2, 4) + le_diagrams(2, 5):
        g = plabic.from_go(D)
        lab = g.label_all()
        if lab.conflicts:
            continue
        for r in lab.regions:
            assert len(r.label) == D.shape.k
        faces, face_of, outer, base = g._embedding()
        label_of_face = {}
        for r, f in zip(lab.regions,
                        sorted(set(face_of.values()) - {outer})):
            label_of_face[f] = r.label
        for e, pair in lab.edge_labels.items():
            if len(pair) != 2:
                continue
            i, j = sorted(pair)
            f1, f2 = face_of[2 * e], face_of[2 * e + 1]
            if f1 == outer or f2 == outer:
                continue
            s1, s2 = label_of_face[f1], label_of_face[f2]
            assert s1 ^ s2 == {i, j}


def test_staircase_labels_consistent():
    g = plabic.from_go(staircase_fillings()[0])
    lab = g.label_all()
    assert lab.conflicts == ()
    assert all(len(r.label) == 4 for r in lab.regions)


def test_isolated_plus_one_in_every_region():
    # the empty second row gives a kept fixed point at 4
    D = go('k=2 n=4\n.\n\n')
    g = plabic.from_go(D)
    pi = g.trip_permutation()
    fixed = [i for i in range(1, 5) if pi.perm[i - 1] == i
             and pi.color(i) == 1]
    assert fixed == [4]
    lab = g.label_all()
    assert len(lab.regions) >= 2
    for r in lab.regions:
        assert 4 in r.label


# -------------------------------------------------------- resonance

def test_resonance_trivalent_pattern():
    # claw with ccw edge labels [1,2],[2,3],[1,3] around the center
    kinds = {'c': 'white', 1: 'boundary', 2: 'boundary', 3: 'boundary'}
    edges = [('c', 1), ('c', 2), ('c', 3)]
    rot = {'c': (0, 2, 4), 1: (1,), 2: (3,), 3: (5,)}
    g = PlabicGraph(kinds, edges, rot, (1, 2, 3), {1: 1, 2: 2, 3: 3})
    ok, bad = g.resonance_check()
    assert ok and bad is None


def test_resonance_fails_on_bigon():
    g = bigon_graph()
    lab = g.label_all()
    assert lab.conflicts
    ok, bad = g.resonance_check(lab)
    assert not ok and bad in ('W', 'B')


def test_triangulation_graphs_reduced():
    for n in range(3, 8):
        for T in plabic.all_triangulations(n):
            g = plabic.from_triangulation(n, T)
            ok, bad = g.resonance_check()
            assert ok, (n, sorted(T), bad)


def test_le_pipe_graphs_resonant():
    for D in le_diagrams(2, 4) + le_diagrams(2, 5) + le_diagrams(3, 5):
        g = plabic.from_go(D)
        ok, bad = g.resonance_check()
        assert ok, (dg.go_to_text(D), bad)


# ------------------------------------------------------------ moves

def square_graph():
    return plabic.from_go(go('k=2 n=4\n..\n..\n'))


def test_m3_insert_remove_identity():
    g = square_graph()
    g2 = g.apply_move('M3', ('insert', 0, 'white'))
    assert g2.trip_permutation() == g.trip_permutation()
    mid = [v for v in g2.internal_vertices() if g2.degree(v) == 2][0]
    g3 = g2.apply_move('M3', ('remove', mid))
    assert g3.canonical_key() == g.canonical_key()


def test_m1_square_move_flips_colors():
    g = square_graph()
    sites = g.m1_sites()
    assert len(sites) == 1
    cyc = sites[0]
    g2 = g.apply_move('M1', cyc)
    for v in cyc:
        assert g2.kinds[v] != g.kinds[v]
    assert g2.trip_permutation() == g.trip_permutation()


def test_m1_mutates_square_region_only():
    g = square_graph()
    g2 = g.apply_move('M1', g.m1_sites()[0])
    before = g.label_all().region_label_multiset()
    after = g2.label_all().region_label_multiset()
    assert set(before) - set(after) == {(1, 3)}
    assert set(after) - set(before) == {(2, 4)}


def test_m2_roundtrip_on_triangulation_graph():
    g = plabic.from_triangulation(5, {(1, 3), (1, 4)})
    fat = [v for v in g.internal_vertices() if g.degree(v) >= 4]
    assert fat
    v = fat[0]
    g2 = g.apply_move('M2', ('uncontract', v, 0, 2))
    assert g2.trip_permutation() == g.trip_permutation()
    uni = [e for e, (a, b) in enumerate(g2.edges)
           if g2.kinds[a] == g2.kinds[b] and g2.kinds[a] != 'boundary']
    assert len(uni) == 1
    g3 = g2.apply_move('M2', ('contract', uni[0]))
    assert g3.canonical_key() == g.canonical_key()


def test_moves_preserve_trip_perm_and_m23_labels():
    g = square_graph()
    want = g.trip_permutation()
    labels = g.label_all().region_label_multiset()
    for h in plabic.move_neighbors(g):
        assert h.trip_permutation() == want
    g2 = g.apply_move('M3', ('insert', 2, 'black'))
    assert g2.label_all().region_label_multiset() == labels
    uni = [e for e, (a, b) in enumerate(g2.edges)
           if g2.kinds[a] == g2.kinds[b] and g2.kinds[a] != 'boundary']
    g3 = g2.apply_move('M2', ('contract', uni[0]))
    assert g3.label_all().region_label_multiset() == labels


def test_move_pattern_mismatch_raises():
    g = square_graph()
    with pytest.raises(ValueError):
        g.apply_move('M1', tuple(g.boundary_order[:4]))
    with pytest.raises(ValueError):
        g.apply_move('M2', ('contract', 0))
    with pytest.raises(ValueError):
        g.apply_move('M3', ('remove', g.internal_vertices()[0]))


# --------------------------------------------------------------- R1

def test_detect_r1_on_bigon():
    site = bigon_graph().detect_R1()
    assert site is not None
    v, u, pair = site
    assert {v, u} == {'W', 'B'}


def test_no_r1_in_triangulation_graphs():
    for T in plabic.all_triangulations(5):
        assert plabic.from_triangulation(5, T).detect_R1() is None


def test_search_r1_behind_one_move():
    # hide the bigon by contracting one endpoint with a neighbor
    kinds = {'W': 'white', 'B': 'black', 'W2': 'white',
             1: 'boundary', 2: 'boundary', 3: 'boundary'}
    edges = [('W', 'B'), ('W', 'B'), (1, 'W'), ('B', 2), ('W', 'W2'),
             ('W2', 3)]
    rot = {'W': (0, 8, 5, 2), 'B': (3, 6, 1), 'W2': (9, 10),
           1: (4,), 2: (7,), 3: (11,)}
    g = PlabicGraph(kinds, edges, rot, (1, 2, 3), {1: 1, 2: 2, 3: 3})
    g = g.apply_move('M2', ('contract', 4))
    assert g.detect_R1() is None
    found = plabic.search_R1(g, 1)
    assert found is not None
    _, (v, u, pair) = found


# --------------------------------------------- triangulation graphs

def catalan(m):
    return math.comb(2 * m, m) // (m + 1)


def test_triangle_graph():
    g = plabic.from_triangulation(3, set())
    internal = g.internal_vertices()
    assert len(internal) == 1 and g.kinds[internal[0]] == 'black'
    assert len(g.edges) == 3
    assert g.trip_permutation().perm == (2, 3, 1)


def test_triangulation_trip_permutations():
    for n in range(3, 8):
        want = tuple((i - 3) % n + 1 for i in range(1, n + 1))
        for T in plabic.all_triangulations(n):
            g = plabic.from_triangulation(n, T)
            assert g.trip_permutation().perm == want


def test_triangulation_counts_and_distinct():
    for n in range(3, 8):
        tris = plabic.all_triangulations(n)
        assert len(tris) == catalan(n - 2)
        keys = {plabic.from_triangulation(n, T).canonical_key()
                for T in tris}
        assert len(keys) == len(tris)


def test_bounded_regions_are_diagonals():
    for n in range(4, 7):
        for T in plabic.all_triangulations(n):
            g = plabic.from_triangulation(n, T)
            assert bounded_labels(g) == sorted(
                tuple(sorted(d)) for d in T)


def test_unbounded_regions_are_polygon_sides():
    g = plabic.from_triangulation(6, {(1, 3), (3, 5), (1, 5)})
    sides = sorted([(i, i + 1) for i in range(1, 6)] + [(1, 6)])
    assert unbounded_labels(g) == sides


def test_hexagon_graph_structure():
    g = plabic.from_triangulation(6, {(1, 3), (3, 5), (1, 5)})
    assert len(bounded_labels(g)) == 3
    ok, _ = g.resonance_check()
    assert ok


def test_invalid_triangulations_rejected():
    with pytest.raises(ValueError):
        plabic.from_triangulation(5, {(1, 3)})
    with pytest.raises(ValueError):
        plabic.from_triangulation(6, {(1, 3), (2, 4), (1, 5)})


def test_tp_pipe_graph_is_fan_graph():
    for n in (4, 5, 6):
        D = go(f'k=2 n={n}\n' + ('.' * (n - 2) + '\n') * 2)
        g = plabic.contract_unicolored(plabic.from_go(D))
        fan = frozenset((1, m) for m in range(3, n))
        psi = plabic.from_triangulation(n, fan)
        assert g.canonical_key() == psi.canonical_key()


def face_of_label(g, want):
    lab = g.label_all()
    _, _, _, base = g._embedding()
    for r in lab.regions:
        if r.label == want and all(d < base for d in r.darts):
            return r.darts
    raise AssertionError(f'no bounded face labeled {sorted(want)}')


def flip_via_square_move(g, d):
    darts = face_of_label(g, frozenset(d))
    while True:
        corners = [g.tail(x) for x in darts]
        fat = [(i, v) for i, v in enumerate(corners) if g.degree(v) > 3]
        if not fat:
            break
        i, v = fat[0]
        ds = g.rot[v]
        pos = ds.index(darts[i])
        g = g.apply_move('M2', ('uncontract', v, pos, (pos + 2) % len(ds)))
        darts = face_of_label(g, frozenset(d))
    g = g.apply_move('M1', tuple(g.tail(x) for x in darts))
    return plabic.contract_unicolored(g)


def test_pentagon_flips_are_square_moves():
    tris = plabic.all_triangulations(5)
    assert len(tris) == 5
    for T in tris:
        g = plabic.from_triangulation(5, T)
        for d in sorted(T):
            g2 = flip_via_square_move(g, d)
            T2 = plabic.flip_diagonal(5, T, d)
            want = plabic.from_triangulation(5, T2)
            assert g2.canonical_key() == want.canonical_key()
            assert g2.trip_permutation() == g.trip_permutation()


def test_flip_diagonal():
    assert plabic.flip_diagonal(4, {(1, 3)}, (1, 3)) == frozenset({(2, 4)})
    with pytest.raises(ValueError):
        plabic.flip_diagonal(5, {(1, 3), (1, 4)}, (2, 5))


# ------------------------------------------------------ from_contour

def fake_plot_gr12():
    # one [1,2] line crossing the box from top to bottom
    verts = [SimpleNamespace(x=0, y=4, kind='boundary', types=((1, 2),)),
             SimpleNamespace(x=0, y=-4, kind='boundary', types=((1, 2),))]
    edges = [SimpleNamespace(v_from=0, v_to=1, type=(1, 2))]
    return SimpleNamespace(vertices=verts, edges=edges,
                           bbox=(-4, 4, -4, 4))


def test_from_contour_single_line():
    pi = dg.decorate((2, 1), {})
    g = plabic.from_contour(fake_plot_gr12(), pi)
    assert len(g.edges) == 1
    assert g.trip_permutation() == pi
    lab = g.label_all()
    assert lab.region_label_multiset() == ((1,), (2,))


def test_from_contour_rejects_higher_vertex():
    verts = [SimpleNamespace(x=0, y=0, kind='higher',
                             types=((1, 2), (3, 4), (1, 3))),
             SimpleNamespace(x=0, y=4, kind='boundary', types=((1, 2),))]
    edges = [SimpleNamespace(v_from=0, v_to=1, type=(1, 2))]
    plot = SimpleNamespace(vertices=verts, edges=edges, bbox=(-4, 4, -4, 4))
    with pytest.raises(ValueError):
        plabic.from_contour(plot, dg.decorate((2, 1), {}))


# -------------------------------------------------- graph mechanics

def test_validation_rejects_bad_rotation():
    with pytest.raises(ValueError):
        PlabicGraph({'a': 'white', 1: 'boundary'}, [('a', 1)],
                    {'a': (0, 0), 1: (1,)}, (1,), {1: 1})
    with pytest.raises(ValueError):
        PlabicGraph({1: 'boundary'}, [(1, 1)], {1: (0, 1)}, (1,), {1: 1})


def test_euler_check_rejects_nonplanar_data():
    # K4 rotations scrambled so the embedding is not a disk
    D = go('k=2 n=4\n..\n..\n')
    g = plabic.from_go(D)
    v = g.internal_vertices()[0]
    rot = {u: list(ds) for u, ds in g.rot.items()}
    rot[v] = [rot[v][1], rot[v][0], rot[v][2]]
    g2 = PlabicGraph(g.kinds, g.edges, rot, g.boundary_order, g.labels,
                     g.iso_colors)
    with pytest.raises(ValueError):
        g2.label_all()


def test_json_roundtrip():
    g = plabic.from_go(go('k=2 n=4\nx.\n.o\n'))
    data = json.loads(json.dumps(g.to_json()))
    g2 = PlabicGraph.from_json(data)
    assert g2.trip_permutation() == g.trip_permutation()
    assert g2.canonical_key() == g.canonical_key()


def test_dot_and_svg_render():
    g = plabic.from_go(go('k=2 n=4\n..\n..\n'))
    dot = g.to_dot()
    assert dot.startswith('graph') and '--' in dot
    svg = g.to_svg()
    assert svg.startswith('<svg') and '<circle' in svg
    psi = plabic.from_triangulation(5, {(1, 3), (1, 4)})
    assert '<line' in psi.to_svg()


def test_canonical_key_is_position_independent():
    g = plabic.from_go(go('k=2 n=4\n..\n..\n'))
    g2 = PlabicGraph(g.kinds, g.edges, g.rot, g.boundary_order, g.labels,
                     g.iso_colors)
    assert g.canonical_key() == g2.canonical_key()


def test_crossing_nodes_in_pipe_graphs():
    # a stone whose both pipes survive produces a degree-4 crossing
    D = go('k=2 n=4\nx.\n.o\n')
    g = plabic.from_go(D)
    crossings = [v for v, k in g.kinds.items() if k == 'crossing']
    assert crossings
    assert all(g.degree(v) == 4 for v in crossings)
    assert g.trip_permutation() == dg.decorated_pi_of_go(D)
