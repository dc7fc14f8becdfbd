"""Tests for the command line.

Oracles:
  * frozen stdout strings come from library values that the module
    test files check against independent oracles; here we only pin
    the formatting and exit codes.
  * exit code contract: 0 pass, 1 verification failure, 2 input error.
"""

import json
import subprocess
import sys

import pytest

from grasstropic import cli

GR24 = 'k=2 n=4\nx.\n.o\n'
K49 = '-5,-3,-2,-1,0,1,2,3,4'


def run(*argv):
    return cli.main(list(argv))


# ---------------------------------------------------------- diagram

def test_diagram_perm_from_necklace(capsys):
    assert run('diagram', 'perm', '--necklace',
               '1257,2357,3457,4567,5678,6789,1789,1289,1259') == 0
    assert capsys.readouterr().out.strip() == '6 7 1 2 8 3 9 4 5'


def test_diagram_pi_bundled_file(capsys):
    assert run('diagram', 'pi', '--file', 'gr37.go') == 0
    assert capsys.readouterr().out.strip() == '4 6 7 1 3 2 5'


def test_diagram_pi_explicit_path(tmp_path, capsys):
    f = tmp_path / 'd.go'
    f.write_text(GR24)
    assert run('diagram', 'pi', '--file', str(f)) == 0
    assert capsys.readouterr().out.strip() == '3 4 1 2'


def test_diagram_pi_prints_colors(capsys):
    # all-white k=1 n=2 filling fixes both points
    assert run('diagram', 'pi', '--file', 'gr24.go') == 0
    run('diagram', 'enumerate', '-k', '1', '-n', '2')
    out = capsys.readouterr().out
    assert '3 diagrams' in out


def test_diagram_enumerate_counts(capsys):
    # one empty shape, one single box with two distinguished fillings
    assert run('diagram', 'enumerate', '-k', '1', '-n', '2',
               '--count') == 0
    assert capsys.readouterr().out.strip() == '3 diagrams'
    assert run('diagram', 'enumerate', '-k', '2', '-n', '4', '--le',
               '--count') == 0
    out = capsys.readouterr().out.strip()
    le = int(out.split()[0])
    assert run('diagram', 'enumerate', '-k', '2', '-n', '4',
               '--count') == 0
    total = int(capsys.readouterr().out.strip().split()[0])
    assert 0 < le < total


def test_diagram_necklace_roundtrip(capsys):
    assert run('diagram', 'necklace', '--file', 'gr49.go') == 0
    neck = capsys.readouterr().out.strip()
    assert run('diagram', 'perm', '--necklace', neck) == 0
    assert capsys.readouterr().out.strip() == '6 7 1 8 2 3 9 4 5'


def test_diagram_missing_file():
    assert run('diagram', 'pi', '--file', 'no-such.go') == 2


def test_diagram_bad_necklace(capsys):
    assert run('diagram', 'perm', '--necklace', '12,13,zz') == 2
    assert 'error:' in capsys.readouterr().err


# ----------------------------------------------------------- matrix

def test_matrix_pluckers_symbolic(capsys):
    assert run('matrix', 'pluckers', '--file', 'gr37.go') == 0
    out = capsys.readouterr().out
    assert 'Δ_{1,2,3} = -p2*p4*p7*p9' in out
    assert out.count('Δ_') == 35


def test_matrix_pluckers_evaluated(capsys):
    assert run('matrix', 'pluckers', '--file', 'gr37.go',
               '--set', 'p*=1') == 0
    out = capsys.readouterr().out
    assert 'Δ_{4,6,7} = 1' in out
    assert 'p' not in out.replace('Δ', '')


def test_matrix_build_ex_g(capsys):
    assert run('matrix', 'build', '--file', 'ex-g.go') == 0
    out = capsys.readouterr().out
    assert 'g =' in out and 'A =' in out
    assert '-m5*p6+p2' in out


def test_matrix_zero_p_rejected(capsys):
    assert run('matrix', 'pluckers', '--file', 'gr37.go',
               '--set', 'p2=0') == 2
    assert 'nonzero' in capsys.readouterr().err


def test_matrix_unknown_parameter(capsys):
    assert run('matrix', 'build', '--file', 'gr24.go',
               '--set', 'm5=1') == 2
    assert 'm5' in capsys.readouterr().err


# ---------------------------------------------------------- contour

def test_contour_gr49_asymptotics(capsys):
    assert run('contour', '--file', 'gr49.go', '--kappa', K49,
               '--t', '-10', '--asymptotics', '--perm') == 0
    got = capsys.readouterr()
    assert 'top rays, right to left: [1,6] [2,7] [4,8] [7,9]' in got.out
    assert ('bottom rays, left to right: '
            '[1,3] [2,5] [3,6] [4,8] [5,9]') in got.out
    assert 'pi = 6 7 1 8 2 3 9 4 5' in got.out
    assert '13 regions' in got.out
    assert 'not generic' in got.err


def test_contour_matrix_single_line(tmp_path, capsys):
    assert run('contour', '--matrix', 'one-two.json', '--t', '0',
               '--svg', str(tmp_path / 'line.svg')) == 0
    out = capsys.readouterr().out
    assert '2 regions: {1} {2}' in out
    svg = (tmp_path / 'line.svg').read_text()
    assert svg.count('<path') == 1


def test_contour_gr24_box_region(capsys):
    assert run('contour', '--file', 'gr24.go', '--set', 'm4=1',
               '--t', '20') == 0
    with_m = capsys.readouterr().out
    assert run('contour', '--file', 'gr24.go', '--set', 'm4=0',
               '--t', '20') == 0
    without = capsys.readouterr().out
    assert '{2,4}' in with_m and '{2,4}' not in without


def test_contour_minus_infinity(capsys):
    assert run('contour', '--file', 'gr24.go', '--minus-infinity') == 0
    out = capsys.readouterr().out
    assert 'limit' in out and 'rotated' in out


def test_contour_json_stdout(capsys):
    assert run('contour', '--file', 'gr24.go', '--t', '-20',
               '--json', '-') == 0
    out = capsys.readouterr().out
    payload = out[out.index('\n{') + 1:]
    data = json.loads(payload)
    assert data['t'] == '-20'
    assert {'vertices', 'edges', 'regions'} <= set(data)


def test_contour_exports(tmp_path, capsys):
    j = tmp_path / 'p.json'
    s = tmp_path / 'p.svg'
    p = tmp_path / 'p.png'
    assert run('contour', '--file', 'gr49.go', '--kappa', K49,
               '--t', '-10', '--json', str(j), '--svg', str(s),
               '--png', str(p)) == 0
    data = json.loads(j.read_text())
    assert len(data['regions']) == 13
    assert sum(e['singular'] for e in data['edges']) == 9
    assert s.read_text().count('<path') == len(data['edges'])
    assert p.read_bytes()[:4] == b'\x89PNG'


def test_contour_input_errors(capsys):
    assert run('contour', '--t', '1') == 2
    assert run('contour', '--file', 'gr24.go', '--matrix',
               'one-two.json', '--t', '1') == 2
    assert run('contour', '--file', 'gr24.go') == 2
    assert run('contour', '--file', 'gr24.go', '--t', '1.5') == 2
    assert run('contour', '--file', 'gr24.go', '--t', '-1',
               '--kappa', '1,2') == 2
    assert run('contour', '--file', 'gr24.go', '--minus-infinity',
               '--t', '-1') == 2
    assert run('contour', '--file', 'gr24.go', '--t', '-1',
               '--bbox', '1,2,3') == 2
    capsys.readouterr()


def test_contour_float_kappa_rejected(capsys):
    assert run('contour', '--file', 'gr24.go', '--t', '-1',
               '--kappa', '-1.5,0,1,2') == 2
    assert 'exact rational' in capsys.readouterr().err


# ----------------------------------------------------------- plabic

def test_plabic_fan(capsys):
    assert run('plabic', '--fan', '5') == 0
    out = capsys.readouterr().out
    assert 'trip permutation: 4 5 1 2 3' in out
    assert 'resonant' in out and 'not resonant' not in out


def test_plabic_diagonals_match_fan(capsys):
    assert run('plabic', '--fan', '5') == 0
    fan = capsys.readouterr().out
    assert run('plabic', '--diagonals', '1-3,1-4', '-n', '5') == 0
    assert capsys.readouterr().out == fan


def test_plabic_from_diagram_labels(capsys):
    assert run('plabic', '--file', 'gr49.go', '--labels') == 0
    out = capsys.readouterr().out
    assert 'trip permutation: 6 7 1 8 2 3 9 4 5' in out
    assert out.count('{') == 13
    assert '{1,2,4,7}' in out


def test_plabic_exports(tmp_path, capsys):
    j = tmp_path / 'g.json'
    d = tmp_path / 'g.dot'
    s = tmp_path / 'g.svg'
    assert run('plabic', '--fan', '4', '--json', str(j),
               '--dot', str(d), '--svg', str(s)) == 0
    assert 'nodes' in json.loads(j.read_text())
    assert d.read_text().startswith('graph')
    assert '<svg' in s.read_text()
    capsys.readouterr()


def test_plabic_source_required():
    assert run('plabic', '--fan', '4', '--file', 'gr24.go') == 2
    assert run('plabic', '--diagonals', '1-3') == 2


# ----------------------------------------------------------- verify

def test_verify_catalan(capsys):
    assert run('verify', 'catalan', '-n', '5') == 0
    out = capsys.readouterr().out
    assert '5 graphs = C_3' in out
    assert 'seed=' in out


def test_verify_vacuous(capsys):
    assert run('verify', 'thm5.2', '--samples', '0') == 0
    assert 'vacuous pass (0 cases)' in capsys.readouterr().out


def test_verify_samples_seeded(capsys):
    assert run('verify', 'thm5.2', '--samples', '5', '--seed', '3') == 0
    first = capsys.readouterr().out
    assert run('verify', 'thm5.2', '--samples', '5', '--seed', '3') == 0
    assert capsys.readouterr().out == first
    assert 'seed=3' in first and first.count('ok   ') == 5


def test_verify_unknown_suite(capsys):
    assert run('verify', 'thm99') == 2
    assert 'unknown suite' in capsys.readouterr().err


def test_verify_exhaustive_small(capsys):
    assert run('verify', 'thm10.6', '-n', '4') == 0
    out = capsys.readouterr().out
    assert 'suite thm10.6: 81/81 passed' in out


def test_verify_failure_exit(monkeypatch, capsys):
    def broken(n, samples, rng):
        return [('forced', False, 'synthetic failure')]

    monkeypatch.setitem(cli.SUITES, 'thm5.2', (broken, 3, 1))
    assert run('verify', 'thm5.2') == 1
    out = capsys.readouterr().out
    assert 'FAIL forced' in out


def test_verify_report_files(tmp_path, capsys):
    assert run('verify', 'catalan', '-n', '4', '--report',
               str(tmp_path)) == 0
    capsys.readouterr()
    tsv = (tmp_path / 'catalan.tsv').read_text()
    assert tsv.splitlines()[0].startswith('# suite=catalan\tseed=')
    assert 'case\tstatus\tdetail' in tsv
    assert '\tpass\t' in tsv
    data = json.loads((tmp_path / 'catalan.json').read_text())
    assert data['failed'] == 0 and data['cases']
    png = (tmp_path / 'catalan.png').read_bytes()
    assert png[:4] == b'\x89PNG'


def test_verify_threaded_matches_serial(monkeypatch, capsys):
    assert run('verify', 'thm10.6', '-n', '4') == 0
    serial = capsys.readouterr().out
    monkeypatch.setenv('GRASSTROPIC_THREADS', '4')
    assert run('verify', 'thm10.6', '-n', '4') == 0
    assert capsys.readouterr().out == serial


# ------------------------------------------------------ entry point

def test_subprocess_entry():
    r = subprocess.run(
        [sys.executable, '-m', 'grasstropic.cli', 'diagram', 'pi',
         '--file', 'gr24.go'], capture_output=True, text=True)
    assert r.returncode == 0
    assert r.stdout.strip() == '3 4 1 2'


def test_subprocess_bad_args():
    r = subprocess.run(
        [sys.executable, '-m', 'grasstropic.cli', 'nonsense'],
        capture_output=True, text=True)
    assert r.returncode == 2
