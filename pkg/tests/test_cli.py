import csv
import io
import json
import random
from fractions import Fraction

import pytest

from holokam import __version__
from holokam.cli import main
from holokam.complex import chain_to_json, grid_disk, grid_graph, save_complex, torus_grid

from oracles import dijkstra


@pytest.fixture
def files(tmp_path):
    sq = grid_disk([0, 1, 2], [0, 1, 2])
    save_complex(sq, tmp_path / "square.json")
    c = sq.chain({(0, 3): 1, (3, 4): 1, (4, 1): 1, (1, 0): 1})
    (tmp_path / "bd.json").write_text(json.dumps(chain_to_json(sq, c)))
    (tmp_path / "zero.json").write_text('{"degree": 1, "coefficients": {}}')
    save_complex(torus_grid(3, 3), tmp_path / "torus.json")
    return tmp_path


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def report(path):
    return json.loads(path.read_text())


def test_validate_pass(files, capsys):
    code, out, _ = run(["validate", files / "torus.json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["passed"] and rep["version"] == __version__ and len(rep["config_hash"]) == 64


def test_validate_missing_face(files, capsys):
    data = json.loads((files / "square.json").read_text())
    data["cells"][0] = [e for e in data["cells"][0] if e != [0, 1]]
    (files / "broken.json").write_text(json.dumps(data))
    code, out, _ = run(["validate", files / "broken.json"], capsys)
    assert code == 2
    assert "[0, 1]" in json.loads(out)["problems"][0]


def test_fuzzed_complex_files(files, capsys):
    text = (files / "square.json").read_text()
    rng = random.Random(0)
    for k in range(60):
        chars = list(text)
        for _ in range(rng.randint(1, 4)):
            pos = rng.randrange(len(chars))
            op = rng.random()
            if op < 0.4:
                del chars[pos]
            elif op < 0.8:
                chars[pos] = rng.choice('{}[],:"0123456789x-')
            else:
                chars.insert(pos, rng.choice('{}[],"9'))
        mutated = "".join(chars)
        path = files / f"fuzz{k}.json"
        path.write_text(mutated)
        code, _, _ = run(["validate", path], capsys)
        try:
            json.loads(mutated)
        except json.JSONDecodeError:
            assert code == 4
        else:
            assert code in (0, 2, 4)


def test_missing_file_is_parse_error(files, capsys):
    assert run(["validate", files / "nope.json"], capsys)[0] == 4


def test_bad_arguments_are_parse_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 4


def test_minimize_square(files, capsys):
    out = files / "m.json"
    code, _, _ = run(["minimize", files / "square.json", "--boundary", files / "bd.json", "--out", out], capsys)
    assert code == 0
    rep = report(out)
    assert rep["value"] == 1 and rep["c0"] == "-1/2" and rep["residuals"]["pass"]
    assert rep["seed"] == 0 and rep["arithmetic"] == "rational"


def test_minimize_zero_boundary(files, capsys):
    code, out, _ = run(["minimize", files / "square.json", "--boundary", files / "zero.json"], capsys)
    assert code == 0 and json.loads(out)["value"] == 0


def test_minimize_unbounded_shows_cycle(files, capsys):
    code, out, _ = run(["minimize", files / "torus.json", "--lagrangian", "constant:-1",
                        "--boundary", files / "zero.json"], capsys)
    rep = json.loads(out)
    assert code == 3 and rep["status"] == "unbounded"
    assert Fraction(rep["negative_cycle"]["action"]) < 0
    assert rep["negative_cycle"]["chain"]["degree"] == 2


def test_minimize_not_a_boundary(files, capsys):
    (files / "loop.json").write_text('{"degree": 1, "coefficients": {"0,3": 1, "3,6": 1, "0,6": -1}}')
    code, out, _ = run(["minimize", files / "torus.json", "--boundary", files / "loop.json"], capsys)
    assert code == 3 and json.loads(out)["status"] == "not_a_boundary"


def test_minimize_float_mode(files, capsys):
    code, out, _ = run(["minimize", files / "square.json", "--boundary", files / "bd.json",
                        "--arithmetic", "float", "--tol", "1e-9"], capsys)
    assert code == 0 and json.loads(out)["value"] == pytest.approx(1.0)


def test_reports_are_byte_identical(files, capsys):
    a, b = files / "a.json", files / "b.json"
    for out in (a, b):
        run(["minimize", files / "square.json", "--boundary", files / "bd.json", "--seed", "5", "--out", out], capsys)
    assert a.read_bytes() == b.read_bytes()
    assert not [p for p in files.iterdir() if p.name.endswith(".tmp")]
    c = files / "c.json"
    run(["minimize", files / "square.json", "--boundary", files / "bd.json", "--seed", "6", "--out", c], capsys)
    assert report(c)["config_hash"] != report(a)["config_hash"]


def test_kam_three_node(tmp_path, capsys):
    (tmp_path / "k.csv").write_text("10,1,10\n10,10,2\n3,10,10\n")
    code, out, _ = run(["kam", tmp_path / "k.csv"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["c0"] == -2 and rep["residual"] == 0


def test_kam_zero_diagonal(tmp_path, capsys):
    (tmp_path / "k.csv").write_text("0,1/2,3\n2,0,1\n1,1,0\n")
    code, out, _ = run(["kam", tmp_path / "k.csv"], capsys)
    assert code == 0 and json.loads(out)["c0"] == 0


def test_kam_random_eight_with_hypotheses(tmp_path, capsys):
    rng = random.Random(8)
    pts = sorted(rng.sample(range(30), 8))
    (tmp_path / "d.csv").write_text("\n".join(",".join(str(abs(a - b)) for b in pts) for a in pts))
    (tmp_path / "k.csv").write_text("\n".join(",".join(str(abs(a - b) ** 2 + rng.randint(0, 3)) for b in pts)
                                              for a in pts))
    (tmp_path / "m.json").write_text(json.dumps({"delta": 1, "dist_file": "d.csv"}))
    code, out, _ = run(["kam", tmp_path / "k.csv", "--meta", tmp_path / "m.json", "--K0", "1", "2"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["residual"] == 0
    assert rep["hypotheses"]["lipschitz_ok"] is True
    assert set(rep["hypotheses"]["K1_table"]) == {"1", "2"}


def test_kam_malformed_csv(tmp_path, capsys):
    (tmp_path / "k.csv").write_text("1,2\n3\n")
    assert run(["kam", tmp_path / "k.csv"], capsys)[0] == 4


def test_cylinder_csv(tmp_path, capsys):
    out = tmp_path / "c.csv"
    code, _, _ = run(["cylinder", "--atoms", 32, "--time-steps", 8, "--levels", 2, "--out", out,
                      "--report", tmp_path / "c.json"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert [int(r["N"]) for r in rows] == [32, 64]
    ratio = float(rows[0]["identity_error"]) / float(rows[1]["identity_error"])
    assert ratio == pytest.approx(4, rel=0.05)
    assert report(tmp_path / "c.json")["monotone"] is True


def test_cylinder_zero_height_and_zero_radius(tmp_path, capsys):
    code, out, _ = run(["cylinder", "--T", 0, "--levels", 2], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and all(float(r["c3_residual"]) == 0 for r in rows)
    assert run(["cylinder", "--radius", 0], capsys)[0] == 2


def test_slice_kam_shortest_paths(tmp_path, capsys):
    xs, ys = [0, 1, 3], [0, 2, 5]
    cx = grid_graph(xs, ys)
    save_complex(cx, tmp_path / "g.json")
    n = cx.num_cells(0)
    (tmp_path / "s.json").write_text(json.dumps([{str(i): 1} for i in range(n)]))
    code, out, _ = run(["slice-kam", tmp_path / "g.json", "--slices", tmp_path / "s.json",
                        "--mass-mode", "le", "--anchor", 0], capsys)
    rep = json.loads(out)
    adj = {v: [] for v in range(n)}
    for a, b in cx.cells(1):
        length = cx.volume(1, cx.index_of((a, b))[0])
        adj[a].append((b, length))
        adj[b].append((a, length))
    dist = dijkstra(adj, 0)
    assert code == 0 and rep["u"] == [dist[v] for v in range(n)]
    assert rep["exactdescent"]["deviation"] == 0 and rep["exactdescent"]["passed"]


def test_slice_kam_single_slice_and_infeasible(tmp_path, capsys):
    cx = torus_grid(3, 3)
    save_complex(cx, tmp_path / "t.json")
    row0 = {"0,3": 1, "3,6": 1, "0,6": -1}
    col0 = {"0,1": 1, "1,2": 1, "0,2": -1}
    (tmp_path / "one.json").write_text(json.dumps([row0]))
    code, out, _ = run(["slice-kam", tmp_path / "t.json", "--slices", tmp_path / "one.json", "--delta", 4], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["kernel"] == [[2]] and rep["c0"] == "-1/2"
    (tmp_path / "two.json").write_text(json.dumps([row0, col0]))
    code, out, _ = run(["slice-kam", tmp_path / "t.json", "--slices", tmp_path / "two.json", "--delta", 4], capsys)
    rep = json.loads(out)
    assert [0, 1] in rep["infeasible"] and [1, 0] in rep["infeasible"]
