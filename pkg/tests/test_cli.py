import json
from fractions import Fraction as F

import pytest

from finmodels.cli import main
from finmodels.io import (ParseError, export_map_corpus, load_space, parse_isotopy, parse_map,
                          parse_map_corpus, parse_metric_sample, parse_quotient, parse_space,
                          read_metric_csv, write_metric_csv)
from finmodels.metric import CIRCLE, INTERVAL, FiniteMetricSpace, quotient
from finmodels.plmap import PLMap


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def files(tmp_path):
    (tmp_path / "x.csv").write_text("x1,x2\n0,3\n3,0\n")
    (tmp_path / "y.csv").write_text("y1,y2\n0,3\n3,0\n")
    (tmp_path / "m.csv").write_text("a,b,c\n0,1,2\n1,0,1\n2,1,0\n")
    (tmp_path / "m.space").write_text("# three points on a line\nkind = finite_metric\ncsv = m.csv\n")
    (tmp_path / "maps.txt").write_text("pl: (0,0) (1,1)\nbasepoint: 0\nconst: 1/2\n")
    (tmp_path / "v.json").write_text(json.dumps(
        {"elements": ["a", "b", "t"],
         "leq": [["a", "a"], ["a", "t"], ["b", "b"], ["b", "t"], ["t", "t"]]}))
    return tmp_path


def test_quotient_command(capsys, files):
    code, out, _ = run(capsys, "quotient", "--space", "interval", "--index", "2,2")
    assert code == 0
    assert out == "point 0\nopen 0 1/2\npoint 1/2\nopen 1/2 1\npoint 1\n"
    assert run(capsys, "quotient", "--space", "interval", "--index", "1,1")[1].count("\n") == 3
    code, out, _ = run(capsys, "quotient", "--space", str(files / "m.space"))
    assert out == "points a\npoints b\npoints c\n"


def test_project_command(capsys, files):
    code, out, _ = run(capsys, "project", "--space", "interval", "--index", "1,1",
                       "--maps", str(files / "maps.txt"))
    ident, base, half = out.split("\n\n")
    assert ident == "0: 0 | (0,1)\n(0,1): 0 | (0,1) | 1\n1: (0,1) | 1"
    assert base == "∅"
    assert half == "0: (0,1)\n(0,1): (0,1)\n1: (0,1)\n"


def test_bond_command(capsys, files):
    (files / "el.txt").write_text("0: 0\n(0,1/2): 0 | (0,1/2)\n1/2: (0,1/2)\n(1/2,1): 1\n1: 1\n")
    code, out, _ = run(capsys, "bond", "--space", "interval", "--index", "2,2", "--to", "1,1",
                       "--element", str(files / "el.txt"))
    assert out == "0: 0\n(0,1): 0 | (0,1) | 1\n1: 1\n"


def test_retract_and_enumerate(capsys, files):
    X, Y = str(files / "x.csv"), str(files / "y.csv")
    code, out, _ = run(capsys, "enumerate-w", "--space", X, "--space", Y)
    assert out.splitlines()[0] == "# W (exhaustive), 4 elements"
    (files / "s.txt").write_text("x1: y1\nx2: y2\n")
    code, out, _ = run(capsys, "retract", "--space", X, "--space", Y, "--element", str(files / "s.txt"))
    assert code == 0 and out == "x1: y1\nx2: y2\n"
    (files / "s.txt").write_text("x1: y1 | y2\nx2: y2\n")
    code, _, err = run(capsys, "retract", "--space", X, "--space", Y, "--element", str(files / "s.txt"))
    assert code == 2 and "not totally ordered" in err


def test_hasse_of_a_small_stage_has_sink_empty(capsys, files):
    X = str(files / "x.csv")
    (files / "one.csv").write_text("x\n0\n")
    code, out, _ = run(capsys, "hasse", "--space", str(files / "one.csv"), "--space", str(files / "y.csv"))
    edges = [line.strip().rstrip(";").split(" -> ") for line in out.splitlines() if "->" in line]
    sources = {a for a, _ in edges}
    sinks = {b for _, b in edges} - sources
    assert sinks == {'"∅"'}


def test_mccord_commands(capsys, files):
    (files / "k.json").write_text('{"vertices": ["a","b","c"], "simplices": [["a","b"],["b","c"],["a","c"]]}')
    code, out, _ = run(capsys, "homology", "--complex", str(files / "k.json"))
    assert "H_1 = Z\n" in out
    code, out, _ = run(capsys, "homology", "--poset", str(files / "v.json"))
    assert out == "H_0 = Z\nH_1 = 0\n"
    code, out, _ = run(capsys, "order-complex", "--poset", str(files / "v.json"))
    assert json.loads(out) == {"vertices": ["a", "b", "t"], "simplices": [["a", "t"], ["b", "t"]]}
    code, out, _ = run(capsys, "face-poset", "--complex", str(files / "k.json"))
    assert len(json.loads(out)["elements"]) == 6
    code, out, _ = run(capsys, "subdivide", "--complex", str(files / "k.json"))
    assert len(json.loads(out)["vertices"]) == 6


def test_isotopy_commands(capsys, files):
    (files / "h.txt").write_text("poset = v.json\na: a [0,1/2] b [1/2,1]\nb: b [0,1/2] a [1/2,1]\nt: t [0,1]\n")
    (files / "c.txt").write_text("poset = v.json\na: a [0,1]\nb: b [0,1]\nt: t [0,1]\n")
    assert run(capsys, "isotopy-validate", "--isotopy", str(files / "h.txt"))[:2] == (0, "valid\n")
    code, out, _ = run(capsys, "isotopy-decompose", "--isotopy", str(files / "h.txt"))
    assert "h_1 = a↦b, b↦a  (move in U_t, t=1/2)" in out
    code, out, _ = run(capsys, "isotopy-decompose", "--isotopy", str(files / "c.txt"), "--json")
    assert json.loads(out)["moves"] == []
    (files / "d.txt").write_text("poset = v.json\na: t [0,1/2] a [1/2,1]\nb: b [0,1]\nt: a [0,1/2] t [1/2,1]\n")
    code, out, _ = run(capsys, "isotopy-validate", "--isotopy", str(files / "d.txt"))
    assert code == 1 and "downward jump" in out


def test_isotopy_approximate_command(capsys, files):
    (files / "s.txt").write_text("t=0 pl: (0,0) (1,1)\nt=1 pl: (0,0) (1/2,1/4) (1,1)\n")
    code, out, _ = run(capsys, "isotopy-approximate", "--space", "interval", "--sample",
                       str(files / "s.txt"), "--eps", "1/10")
    assert code == 0 and out.startswith("cover index n = 1")
    code, out, _ = run(capsys, "isotopy-approximate", "--space", "interval", "--sample",
                       str(files / "s.txt"), "--min-n", "2", "--max-n", "2")
    assert code == 1 and "n=2: projection" in out
    (files / "bad.txt").write_text("t=0 pl: (0,0) (1,1)\nt=1 pl: (0,0) (1/2,1) (1,0)\n")
    code, _, err = run(capsys, "isotopy-approximate", "--space", "interval", "--sample",
                       str(files / "bad.txt"))
    assert code == 2 and "not a homeomorphism" in err


def test_witness_and_threads(capsys, files):
    (files / "two.txt").write_text("pl: (0,0) (1,1)\nconst: 1/2\n")
    assert run(capsys, "witness", "--space", "interval", "--maps", str(files / "two.txt"))[1] == "1,1\n"
    code, out, _ = run(capsys, "thread-check", "--space", "interval", "--maps", str(files / "two.txt"))
    assert code == 0 and out == "map 1: compatible\nmap 2: compatible\n"


def test_outputs_are_deterministic(capsys, files):
    a = run(capsys, "cover", "--space", "circle", "--index", "3,3")[1]
    b = run(capsys, "cover", "--space", "circle", "--index", "3,3")[1]
    assert a == b and a.count("\n") == len(set(a.splitlines()))
    run(capsys, "quotient", "--space", "interval", "--index", "4,4", "--out", str(files / "q1"))
    run(capsys, "quotient", "--space", "interval", "--index", "4,4", "--out", str(files / "q2"))
    assert (files / "q1").read_bytes() == (files / "q2").read_bytes()


def test_usage_errors(capsys, files):
    code, _, err = run(capsys, "project", "--space", "interval")
    assert code == 2 and "--maps" in err
    (files / "bad.txt").write_text("pl: (0,0) (1,1)\nspline: 1 2\n")
    code, _, err = run(capsys, "project", "--space", "interval", "--maps", str(files / "bad.txt"))
    assert code == 2 and "bad.txt:2:" in err


# --- file formats


def test_space_files(files):
    assert load_space("interval") is INTERVAL and load_space("circle") is CIRCLE
    X = load_space(str(files / "m.space"))
    assert X.labels == ("a", "b", "c") and X.dist("a", "c") == 2
    assert read_metric_csv(write_metric_csv(X)) == X
    with pytest.raises(ParseError, match=":2:"):
        parse_space("kind = finite_metric\nnonsense\n")
    with pytest.raises(ParseError):
        parse_space("kind = torus\n")
    with pytest.raises(ParseError, match="rational"):
        read_metric_csv("a,b\n0,x\nx,0\n")


def test_map_and_quotient_formats():
    X = FiniteMetricSpace.discrete(["a", "b"])
    f = parse_map("table: a→b b->a", X, X)
    assert f.export() == "table: a→b b→a"
    g = parse_map("basepoint", INTERVAL, INTERVAL, y0=F(0))
    assert g.basepoint and g.export() == "basepoint: 0"
    maps = [PLMap.identity(INTERVAL), PLMap.constant(INTERVAL, INTERVAL, F(1, 3)), g]
    assert parse_map_corpus(export_map_corpus(maps), INTERVAL, INTERVAL) == maps
    with pytest.raises(ParseError):
        parse_map("pl: (0,0) junk (1,1)", INTERVAL, INTERVAL)
    for space in (INTERVAL, CIRCLE, X):
        q = quotient(space, 3)
        assert parse_quotient(space, 3, q.export()).classes == q.classes


def test_isotopy_and_sample_formats(files):
    H = parse_isotopy("poset = v.json\na: a [0,1/2] b [1/2,1]\nb: b [0,1/2] a [1/2,1]\nt: t [0,1]\n",
                      base=files)
    assert H.export().splitlines()[0] == "a: a [0,1/2] b [1/2,1]"
    with pytest.raises(ParseError):
        parse_isotopy("a: a [0,1]\n")
    s = parse_metric_sample("modulus = 1/2\nt=0 pl: (0,0) (1,1)\nt=1 pl: (0,0) (1/2,1/4) (1,1)\n",
                            INTERVAL)
    assert s.modulus == F(1, 2) and s.times == (0, 1)
    assert parse_metric_sample(s.export(), INTERVAL).maps == s.maps
    with pytest.raises(ParseError, match=":1:"):
        parse_metric_sample("0 pl: (0,0) (1,1)\n", INTERVAL)


def test_suite_exit_code_and_seed_stability(capsys, tmp_path):
    from finmodels import batteries
    code, out, _ = run(capsys, "suite", "--out", str(tmp_path), "--seed", "0", "--workers", "1")
    lines = out.splitlines()[:-1]
    verdicts = [line.split(" ", 1)[0] for line in lines]
    assert len(lines) == len(batteries.CRITERIA) + len(batteries.PROPERTIES)
    assert code == (0 if all(v == "PASS" for v in verdicts) else 1)
    assert (tmp_path / "suite.txt").read_text() == out
    assert json.loads((tmp_path / "retraction_witness.json").read_text())
    other = batteries.run_all(seed=1, workers=2)
    assert [("PASS" if r.passed else "FAIL") for r in other] == verdicts
