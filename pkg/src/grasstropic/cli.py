"""Command line tying the library together.

Subcommands: diagram (enumerate/convert stone diagrams), matrix (build
the group element and minors symbolically), contour (exact soliton
contour plots, JSON/SVG/PNG), plabic (pipe and triangulation graphs),
verify (named checking suites with TSV + figure reports).

All numeric input is parsed as exact rationals; decimal floats are
rejected so downstream sign decisions stay exact. Evaluated commands
default unset parameters to p = 1 and m = 0. GRASSTROPIC_THREADS caps
suite parallelism; results are sorted before emission either way.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import diagrams as dg
from . import grassmann as gr
from . import plabic
from . import soliton as so

__all__ = ['main']


class InputError(Exception):
    pass


def _rat(text: str) -> Fraction:
    text = text.strip()
    if any(c in text for c in '.eE'):
        raise InputError(f'{text!r} is not an exact rational; '
                         f'write fractions as a/b')
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f'cannot parse rational {text!r}')


def _rat_list(text: str) -> tuple[Fraction, ...]:
    return tuple(_rat(tok) for tok in text.split(',') if tok.strip())


def _data_dir() -> Path:
    return Path(__file__).parent / 'data'


def _resolve(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    bundled = _data_dir() / path
    if bundled.exists():
        return bundled
    raise InputError(f'no such file: {path}')


def _load_diagram(path: str) -> dg.GoDiagram:
    text = _resolve(path).read_text()
    try:
        return dg.go_from_text(text)
    except ValueError as e:
        raise InputError(f'{path}: {e}')


def _assignment(ps, ms, set_expr):
    """Full parameter assignment: defaults p=1, m=0, overridden by
    name=value tokens; wildcards p*=v, m*=v; zero p rejected."""
    out = {name: Fraction(1) for name in ps}
    out.update({name: Fraction(0) for name in ms})
    if set_expr:
        for tok in set_expr.split(','):
            tok = tok.strip()
            if not tok:
                continue
            if '=' not in tok:
                raise InputError(f'--set expects name=value, got {tok!r}')
            name, val = tok.split('=', 1)
            name = name.strip()
            value = _rat(val)
            if name == 'p*':
                out.update({q: value for q in ps})
            elif name == 'm*':
                out.update({q: value for q in ms})
            elif name in out:
                out[name] = value
            else:
                raise InputError(f'unknown parameter {name!r}; '
                                 f'this stratum has {ps + ms}')
    for name in ps:
        if out[name] == 0:
            raise InputError(f'{name} = 0 is outside the stratum '
                             f'(p parameters must be nonzero)')
    return out


def _stratum(D: dg.GoDiagram):
    word = dg.w_of_shape(D.shape)
    g = gr.build_g(word, D)
    A = gr.project(g, D.shape.k)
    return g, A


def _evaluated_matrix(D: dg.GoDiagram, set_expr):
    ps, ms = gr.parameter_names(D)
    assign = _assignment(ps, ms, set_expr)
    _, A = _stratum(D)
    return A.evaluate(assign), assign


def _default_kappa(n: int) -> tuple[Fraction, ...]:
    """Strictly increasing rationals around zero whose fractional parts
    (distinct powers of 1/2) keep all equal-size subset sums distinct."""
    return tuple(Fraction(2 * i - n, 2) + Fraction(1, 2 ** i)
                 for i in range(1, n + 1))


def _check_kappa(ks) -> None:
    ok, witness = so.validate_kappa(ks)
    if not ok:
        i, j = witness
        print(f'warning: kappa is not generic (subsets {i} and {j} share '
              f'a sum); proceeding anyway', file=sys.stderr)


def _fmt_label(J) -> str:
    return '{' + ','.join(str(x) for x in J) + '}'


def _fmt_rays(types) -> str:
    return ' '.join(f'[{i},{j}]' for i, j in types)


def _write(path: str, text: str) -> None:
    if path == '-':
        print(text)
    else:
        Path(path).write_text(text)
        print(f'wrote {path}')


# ------------------------------------------------------------ figures

def _plot_figure(plot, path: str) -> None:
    import matplotlib
    matplotlib.use('Agg')
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 7))
    for e in plot.edges:
        a = plot.vertices[e.v_from]
        b = plot.vertices[e.v_to]
        style = {'color': 'crimson', 'linestyle': '--'} if e.singular \
            else {'color': 'black'}
        ax.plot([float(a.x), float(b.x)], [float(a.y), float(b.y)],
                linewidth=1.4, **style)
        ax.annotate(f'[{e.type[0]},{e.type[1]}]',
                    ((float(a.x) + float(b.x)) / 2,
                     (float(a.y) + float(b.y)) / 2),
                    fontsize=7, color='steelblue')
    marks = {'trivalent': ('o', 'black'), 'Xcrossing': ('o', 'white'),
             'higher': ('s', 'crimson')}
    for v in plot.vertices:
        if v.kind in marks:
            m, c = marks[v.kind]
            ax.plot([float(v.x)], [float(v.y)], marker=m, color=c,
                    markeredgecolor='black', markersize=5)
    for r in plot.regions:
        cx, cy = r.centroid()
        ax.annotate(_fmt_label(r.label), (float(cx), float(cy)),
                    fontsize=8, color='dimgray', ha='center')
    xlo, xhi, ylo, yhi = (float(v) for v in plot.bbox)
    ax.set_xlim(xlo, xhi)
    ax.set_ylim(ylo, yhi)
    ax.set_aspect('equal')
    ax.set_title('limit plot (rotated)' if plot.rotated else f't = {plot.t}')
    fig.savefig(path, dpi=130, bbox_inches='tight')
    plt.close(fig)


def _bar_figure(rows, title: str, path: str) -> None:
    import matplotlib
    matplotlib.use('Agg')
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(max(4, len(rows) * 0.25 + 2), 3))
    xs = range(len(rows))
    colors = ['seagreen' if ok else 'crimson' for _, ok, _ in rows]
    ax.bar(xs, [1] * len(rows), color=colors, width=0.9)
    ax.set_yticks([])
    ax.set_xlabel(f'{len(rows)} checks (green = pass)')
    ax.set_title(title)
    fig.savefig(path, dpi=130, bbox_inches='tight')
    plt.close(fig)


# ----------------------------------------------------------- diagram

def cmd_diagram(args) -> int:
    if args.action == 'enumerate':
        if args.k is None or args.n is None:
            raise InputError('enumerate needs -k and -n')
        count = 0
        for D in dg.enumerate_go_diagrams(args.k, args.n):
            if args.le and not dg.is_le_diagram(D):
                continue
            count += 1
            if not args.count:
                print(dg.go_to_text(D))
        print(f'{count} diagrams')
        return 0
    if args.action == 'pi':
        D = _load_diagram(args.file)
        pi = dg.decorated_pi_of_go(D)
        print(' '.join(str(x) for x in pi.perm))
        for h, c in pi.colors:
            print(f'fixed point {h}: color {c:+d}')
        return 0
    if args.action == 'perm':
        if not args.necklace:
            raise InputError('perm needs --necklace')
        try:
            neck = dg.necklace_from_str(args.necklace)
            pi = dg.necklace_to_perm(neck)
        except ValueError as e:
            raise InputError(str(e))
        print(' '.join(str(x) for x in pi.perm))
        return 0
    if args.action == 'necklace':
        D = _load_diagram(args.file)
        pi = dg.decorated_pi_of_go(D)
        print(dg.necklace_to_str(dg.perm_to_necklace(pi)))
        return 0
    raise InputError(f'unknown diagram action {args.action!r}')


# ------------------------------------------------------------ matrix

def _print_matrix(name: str, M) -> None:
    print(f'{name} =')
    for row in M.rows:
        print('\t'.join(str(x) for x in row))


def cmd_matrix(args) -> int:
    D = _load_diagram(args.file)
    ps, ms = gr.parameter_names(D)
    if args.action == 'build':
        g, A = _stratum(D)
        if args.set is not None:
            assign = _assignment(ps, ms, args.set)
            g, A = g.substitute(assign), A.substitute(assign)
        _print_matrix('g', g)
        _print_matrix('A', A)
        return 0
    if args.action == 'pluckers':
        _, A = _stratum(D)
        if args.set is not None:
            A = A.substitute(_assignment(ps, ms, args.set))
        P = gr.pluckers(A)
        for J in sorted(P.entries):
            print(f'Δ_{{{",".join(str(x) for x in J)}}} = {P[J]}')
        return 0
    raise InputError(f'unknown matrix action {args.action!r}')


# ----------------------------------------------------------- contour

def cmd_contour(args) -> int:
    if bool(args.file) == bool(args.matrix):
        raise InputError('need exactly one of --file or --matrix')
    bbox = _rat_list(args.bbox) if args.bbox else None
    if bbox is not None and len(bbox) != 4:
        raise InputError('--bbox expects xlo,xhi,ylo,yhi')

    if args.minus_infinity:
        if not args.file:
            raise InputError('--minus-infinity needs a diagram --file')
        if args.t is not None:
            raise InputError('--minus-infinity fixes the time; drop --t')
        D = _load_diagram(args.file)
        ks = _rat_list(args.kappa) if args.kappa \
            else _default_kappa(D.shape.n)
        if len(ks) != D.shape.n:
            raise InputError(f'need {D.shape.n} kappa values')
        _check_kappa(ks)
        plot = so.contour_minus_infinity(D, ks, bbox)
        A, _ = _evaluated_matrix(D, args.set)
    else:
        if args.t is None:
            raise InputError('--t is required (exact rational)')
        t = _rat(args.t)
        if args.file:
            D = _load_diagram(args.file)
            A, _ = _evaluated_matrix(D, args.set)
        else:
            data = json.loads(_resolve(args.matrix).read_text())
            M = gr.matrix_from_json(data)
            names = sorted(M.variables())
            ps = [q for q in names if q.startswith('p')]
            ms = [q for q in names if not q.startswith('p')]
            A = M.evaluate(_assignment(ps, ms, args.set))
        n = len(A[0])
        ks = _rat_list(args.kappa) if args.kappa else _default_kappa(n)
        if len(ks) != n:
            raise InputError(f'need {n} kappa values')
        _check_kappa(ks)
        plot = so.contour_plot(gr.matroid_of(A), ks, t, bbox)

    singular = so.singular_edges(A, plot)
    tag = 'limit (rotated 180°)' if plot.rotated else f't = {plot.t}'
    print(f'contour plot, {tag}, n = {plot.n}')
    print(f'kappa = {",".join(str(k) for k in ks)}')
    print(f'{len(plot.regions)} regions: '
          + ' '.join(_fmt_label(r.label) for r in plot.regions))
    print(f'vertices: {len(plot.trivalent())} trivalent, '
          f'{len(plot.crossings())} crossings, '
          f'{len(plot.higher())} higher')
    print(f'singular edges: {len(singular)} of {len(plot.edges)}')
    if args.asymptotics:
        top, bottom = so.unbounded_asymptotics(plot)
        print(f'top rays, right to left: {_fmt_rays(reversed(top))}')
        print(f'bottom rays, left to right: {_fmt_rays(bottom)}')
    if args.perm:
        pi = so.perm_from_plot(plot)
        print('pi = ' + ' '.join(str(x) for x in pi.perm))
    if args.json:
        _write(args.json, json.dumps(plot.to_json(), indent=1))
    if args.svg:
        _write(args.svg, plot.to_svg())
    if args.png:
        _plot_figure(plot, args.png)
        print(f'wrote {args.png}')
    return 0


# ------------------------------------------------------------ plabic

def cmd_plabic(args) -> int:
    sources = [s for s in (args.file, args.fan, args.diagonals)
               if s not in (None, False)]
    if len(sources) != 1:
        raise InputError('need exactly one of --file, --fan, --diagonals')
    if args.file:
        g = plabic.from_go(_load_diagram(args.file))
    elif args.fan:
        n = args.fan
        g = plabic.from_triangulation(
            n, [(1, i) for i in range(3, n)])
    else:
        if not args.n:
            raise InputError('--diagonals needs -n')
        diags = []
        for tok in args.diagonals.split(','):
            a, _, b = tok.strip().partition('-')
            if not (a.isdigit() and b.isdigit()):
                raise InputError(f'bad diagonal {tok!r}; write a-b')
            diags.append((int(a), int(b)))
        g = plabic.from_triangulation(args.n, diags)
    pi = g.trip_permutation()
    print('trip permutation: ' + ' '.join(str(x) for x in pi.perm))
    for h, c in pi.colors:
        print(f'fixed point {h}: color {c:+d}')
    lab = g.label_all()
    if lab.conflicts:
        print(f'label conflicts on trips: {sorted(lab.conflicts)}')
    ok, where = g.resonance_check(lab)
    print('resonant' if ok else f'not resonant at {where}')
    if args.labels:
        for labset in sorted(lab.region_label_multiset()):
            print(_fmt_label(labset))
    if args.json:
        _write(args.json, json.dumps(g.to_json(), indent=1))
    if args.svg:
        _write(args.svg, g.to_svg())
    if args.dot:
        _write(args.dot, g.to_dot())
    return 0


# ------------------------------------------------------------ verify

def _pmap(fn, items):
    workers = int(os.environ.get('GRASSTROPIC_THREADS', '1'))
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    from concurrent.futures import ThreadPoolExecutor
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def _generic_kappa(n: int) -> tuple[Fraction, ...]:
    ks = _default_kappa(n)
    ok, _ = so.validate_kappa(ks)
    assert ok
    return ks


def _suite_thm52(n, samples, rng):
    """Lex-extreme minors match the stone-diagram prediction."""
    from grasstropic import weyl
    pool = []
    for nn in range(2, n + 1):
        for k in range(1, nn):
            pool.extend(dg.enumerate_go_diagrams(k, nn))
    picks = pool if samples >= len(pool) else rng.sample(pool, samples)

    def case(D):
        k, nn = D.shape.k, D.shape.n
        _, A = _stratum(D)
        sub = dg.subexpr_of_go(D)
        w = weyl.word_product(dg.w_of_shape(D.shape), nn)
        P = gr.pluckers(A)
        lo, hi, dlo, dhi = gr.lex_extremes(P, sub.v, w)
        draw = gr.random_parameters(D, rng)
        Pn = P.evaluate(draw)
        expect = Fraction(-1) ** len(sub.j_black)
        for name in (f'p{i}' for i in sorted(sub.j_box)):
            expect *= draw[name]
        ok = Pn.value(lo) == expect and Pn.value(hi) == 1
        return (f'lex extremes k={k} n={nn} {"".join(D.fill)}', ok,
                f'lo={lo} hi={hi}')

    return [case(D) for D in picks]


def _suite_thm81(n, samples, rng):
    """Unbounded ray types match the weak excedances of the stratum."""
    rows = []
    for _ in range(samples):
        nn = rng.randint(3, n)
        k = rng.randint(1, nn - 1)
        D = rng.choice(list(dg.enumerate_go_diagrams(k, nn)))
        ks = _generic_kappa(nn)
        A = _stratum(D)[1].evaluate(gr.random_parameters(D, rng))
        t = Fraction(-rng.randint(5, 30))
        plot = so.contour_plot(gr.matroid_of(A), ks, t)
        top, bottom = so.unbounded_asymptotics(plot)
        pi = dg.decorated_pi_of_go(D)
        want_top = sorted((i, pi.perm[i - 1]) for i in range(1, nn + 1)
                          if pi.perm[i - 1] > i)
        want_bot = sorted((pi.perm[i - 1], i) for i in range(1, nn + 1)
                          if pi.perm[i - 1] < i)
        ok = sorted(top) == want_top and sorted(bottom) == want_bot
        rows.append((f'rays k={k} n={nn} {"".join(D.fill)} t={t}', ok,
                     f'top={_fmt_rays(top)} bottom={_fmt_rays(bottom)}'))
    return rows


def _suite_thm106(n, samples, rng):
    """Pipe-graph trips realize the algebraic decorated permutation."""
    def case(D):
        pi = plabic.from_go(D).trip_permutation()
        want = dg.decorated_pi_of_go(D)
        return (f'trips k={D.shape.k} n={D.shape.n} {"".join(D.fill)}',
                pi == want, ' '.join(str(x) for x in pi.perm))

    todo = []
    for nn in range(2, n + 1):
        for k in range(1, nn):
            todo.extend(dg.enumerate_go_diagrams(k, nn))
    return _pmap(case, todo)


def _suite_thm91(n, samples, rng):
    """Nonnegative points at strongly negative time: every plain
    crossing is white and its two-term minor relation holds."""
    rows = []
    grids = [(2, 5), (3, 6)] if n >= 6 else [(2, min(5, n))]
    for _ in range(samples):
        k, nn = rng.choice(grids)
        les = [D for D in dg.enumerate_go_diagrams(k, nn)
               if dg.is_le_diagram(D)]
        D = rng.choice(les)
        A = _stratum(D)[1].evaluate(
            gr.random_parameters(D, rng, positive=True))
        plot = so.contour_plot(gr.matroid_of(A), _generic_kappa(nn), -50)
        checks = so.check_two_term(A, plot)
        ok = (gr.tnn_status(A) in ('TP', 'TNN')
              and not so.singular_edges(A, plot)
              and all(c.color == 'white' and c.holds for c in checks))
        rows.append((f'tnn k={k} n={nn} {"".join(D.fill)}', ok,
                     f'{len(checks)} crossings'))
    return rows


def _suite_thm121(n, samples, rng):
    """Wave regularity: nonnegative points certified exactly; the two
    worked sign-mixed points produce grid witnesses."""
    rows = []
    for _ in range(max(1, samples // 4)):
        les = [D for D in dg.enumerate_go_diagrams(2, 4)
               if dg.is_le_diagram(D)]
        D = rng.choice(les)
        A = _stratum(D)[1].evaluate(
            gr.random_parameters(D, rng, positive=True))
        rep = so.regularity_scan(A, _generic_kappa(4))
        rows.append((f'tnn regular {"".join(D.fill)}',
                     rep.status == 'regular' and rep.exact, rep.status))
    D = _load_diagram('gr49.go')
    A, _ = _evaluated_matrix(D, None)
    rep = so.regularity_scan(A, _rat_list('-5,-3,-2,-1,0,1,2,3,4'),
                             t_list=(-10,), grid=120)
    rows.append(('gr49 sign change at t=-10', rep.status == 'singular',
                 rep.status))
    D = _load_diagram('gr24.go')
    A, _ = _evaluated_matrix(D, 'm4=1')
    rep = so.regularity_scan(A, _rat_list('-2,-1,0,3/2'),
                             t_list=(-20,), grid=120)
    rows.append(('gr24 sign change at t=-20', rep.status == 'singular',
                 rep.status))
    return rows


def _suite_thm129(n, samples, rng):
    """Positive limit-plot minors certify nonnegativity of the whole
    component (positivity test)."""
    todo = []
    for nn in range(2, n + 1):
        for k in range(1, nn):
            todo.extend(D for D in dg.enumerate_go_diagrams(k, nn)
                        if dg.is_le_diagram(D))

    def case(D):
        nn = D.shape.n
        tset = gr.positivity_test_set(D, _generic_kappa(nn))
        _, A = _stratum(D)
        local = random.Random(rng.randint(0, 10 ** 9))
        bad = None
        for _ in range(samples):
            P = gr.pluckers(A.evaluate(
                gr.random_parameters(D, local)))
            if all(P.value(J) > 0 for J in tset):
                if not all(P.value(J) >= 0 for J in P.nonzero_indices()):
                    bad = 'positive test set but a negative minor'
                    break
        return (f'test set k={D.shape.k} n={nn} {"".join(D.fill)}',
                bad is None, bad or f'{len(tset)} test minors')

    return _pmap(case, todo)


def _suite_resonance(n, samples, rng):
    """Reduced graphs are resonant at every internal vertex."""
    rows = []
    for nn in range(3, n + 1):
        for T in plabic.all_triangulations(nn):
            g = plabic.from_triangulation(nn, T)
            ok, where = g.resonance_check()
            rows.append((f'triangulation n={nn} {sorted(T)}', ok,
                         '' if ok else f'fails at {where}'))
    for nn in range(2, min(n, 5) + 1):
        for k in range(1, nn):
            for D in dg.enumerate_go_diagrams(k, nn):
                if not dg.is_le_diagram(D):
                    continue
                g = plabic.from_go(D)
                ok, where = g.resonance_check()
                rows.append((f'pipes k={k} n={nn} {"".join(D.fill)}', ok,
                             '' if ok else f'fails at {where}'))
    return rows


def _suite_catalan(n, samples, rng):
    """Triangulation graphs are distinct and Catalan-many."""
    ts = list(plabic.all_triangulations(n))
    keys = {plabic.from_triangulation(n, T).canonical_key() for T in ts}
    want = math.comb(2 * (n - 2), n - 2) // (n - 1)
    ok = len(ts) == want and len(keys) == len(ts)
    print(f'{len(keys)} graphs = C_{n - 2}')
    return [(f'catalan n={n}', ok, f'{len(ts)} triangulations, '
             f'{len(keys)} distinct graphs, C={want}')]


SUITES = {
    'thm5.2': (_suite_thm52, 5, 40),
    'thm8.1': (_suite_thm81, 5, 25),
    'thm10.6': (_suite_thm106, 5, 0),
    'thm9.1': (_suite_thm91, 6, 25),
    'thm12.1': (_suite_thm121, 4, 20),
    'thm12.9': (_suite_thm129, 4, 40),
    'resonance': (_suite_resonance, 6, 0),
    'catalan': (_suite_catalan, 5, 0),
}


def cmd_verify(args) -> int:
    if args.suite not in SUITES and args.suite != 'all':
        raise InputError(f'unknown suite {args.suite!r}; '
                         f'choose from {sorted(SUITES)} or all')
    names = sorted(SUITES) if args.suite == 'all' else [args.suite]
    seed = args.seed if args.seed is not None else 20260814
    failures = 0
    for name in names:
        fn, def_n, def_samples = SUITES[name]
        n = args.n if args.n is not None else def_n
        samples = args.samples if args.samples is not None else def_samples
        rng = random.Random(seed)
        rows = fn(n, samples, rng)
        for case, ok, detail in rows:
            print(('ok   ' if ok else 'FAIL ') + case
                  + (f'  ({detail})' if detail else ''))
        bad = sum(1 for _, ok, _ in rows if not ok)
        failures += bad
        if rows:
            print(f'suite {name}: {len(rows) - bad}/{len(rows)} passed, '
                  f'seed={seed}')
        else:
            print(f'suite {name}: vacuous pass (0 cases), seed={seed}')
        if args.report:
            out = Path(args.report)
            out.mkdir(parents=True, exist_ok=True)
            stem = name.replace('.', '_')
            tsv = out / f'{stem}.tsv'
            with tsv.open('w') as fh:
                fh.write(f'# suite={name}\tseed={seed}\tn={n}\t'
                         f'samples={samples}\n')
                fh.write('case\tstatus\tdetail\n')
                for case, ok, detail in rows:
                    fh.write(f'{case}\t{"pass" if ok else "fail"}\t'
                             f'{detail}\n')
            js = out / f'{stem}.json'
            js.write_text(json.dumps(
                {'suite': name, 'seed': seed, 'n': n, 'samples': samples,
                 'passed': len(rows) - bad, 'failed': bad,
                 'cases': [{'case': c, 'ok': ok, 'detail': d}
                           for c, ok, d in rows]}, indent=1))
            png = out / f'{stem}.png'
            _bar_figure(rows, f'{name} ({len(rows)} checks)', str(png))
            print(f'wrote {tsv}, {js} and {png}')
    return 1 if failures else 0


# -------------------------------------------------------------- main

def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog='grasstropic',
        description='Deodhar strata, stone diagrams and exact KP '
                    'soliton contour plots')
    sub = top.add_subparsers(dest='command', required=True)

    d = sub.add_parser('diagram', help='enumerate and convert diagrams')
    d.add_argument('action',
                   choices=['enumerate', 'pi', 'perm', 'necklace'])
    d.add_argument('-k', type=int)
    d.add_argument('-n', type=int)
    d.add_argument('--le', action='store_true',
                   help='restrict to fillings without black stones')
    d.add_argument('--count', action='store_true',
                   help='print only the count')
    d.add_argument('--file', help='diagram file (bundled names work)')
    d.add_argument('--necklace', help='comma list of digit subsets')
    d.set_defaults(fn=cmd_diagram)

    m = sub.add_parser('matrix', help='group element and minors')
    m.add_argument('action', choices=['build', 'pluckers'])
    m.add_argument('--file', required=True)
    m.add_argument('--set', help='name=value list; p*=v and m*=v '
                                 'wildcards; unset default p=1, m=0')
    m.set_defaults(fn=cmd_matrix)

    c = sub.add_parser('contour', help='exact contour plots')
    c.add_argument('--file', help='diagram file')
    c.add_argument('--matrix', help='matrix JSON file')
    c.add_argument('--kappa', help='comma list of rationals')
    c.add_argument('--t', help='time (exact rational)')
    c.add_argument('--set', help='parameter overrides')
    c.add_argument('--bbox', help='xlo,xhi,ylo,yhi')
    c.add_argument('--minus-infinity', action='store_true',
                   help='limit plot from the diagram, cross-checked '
                        'against its pipe graph')
    c.add_argument('--asymptotics', action='store_true')
    c.add_argument('--perm', action='store_true',
                   help='recover the decorated permutation')
    c.add_argument('--json', metavar='PATH', help="'-' for stdout")
    c.add_argument('--svg', metavar='PATH')
    c.add_argument('--png', metavar='PATH')
    c.set_defaults(fn=cmd_contour)

    p = sub.add_parser('plabic', help='pipe and triangulation graphs')
    p.add_argument('--file', help='diagram file')
    p.add_argument('--fan', type=int, metavar='N',
                   help='fan triangulation of the N-gon')
    p.add_argument('--diagonals', help='comma list a-b')
    p.add_argument('-n', type=int)
    p.add_argument('--labels', action='store_true')
    p.add_argument('--json', metavar='PATH')
    p.add_argument('--svg', metavar='PATH')
    p.add_argument('--dot', metavar='PATH')
    p.set_defaults(fn=cmd_plabic)

    v = sub.add_parser('verify', help='named checking suites')
    v.add_argument('suite')
    v.add_argument('-n', type=int, help='size bound')
    v.add_argument('--samples', type=int)
    v.add_argument('--seed', type=int)
    v.add_argument('--report', metavar='DIR',
                   help='write TSV report and PNG figure per suite')
    v.set_defaults(fn=cmd_verify)
    return top


_DASH_VALUE_FLAGS = {'--kappa', '--t', '--bbox'}


def _glue(argv):
    """Join flags with values that may start with '-' (negative
    rationals, comma lists) so argparse does not read them as options."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _DASH_VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f'{tok}={nxt}')
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    argv = _glue(sys.argv[1:] if argv is None else list(argv))
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except InputError as e:
        print(f'error: {e}', file=sys.stderr)
        return 2
    except ValueError as e:
        print(f'error: {e}', file=sys.stderr)
        return 2


if __name__ == '__main__':
    sys.exit(main())
