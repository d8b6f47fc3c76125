import json

import pytest

from pvalab.cli import main


def run(capsys, *argv):
    code = main(["-q", *argv])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


@pytest.fixture
def files(tmp_path):
    d = tmp_path
    (d / "gfz.json").write_text(json.dumps({"generators": ["u"], "weights": [1], "brackets": {"u,u": "L"}}))
    (d / "broken.json").write_text(json.dumps({
        "generators": ["u", "v"], "brackets": {"u,u": "D(v) + 2*L*v", "v,v": "D(v) + 2*L*v", "u,v": "0"}}))
    (d / "bad.json").write_text('{"generators": ["u"],\n "brackets": {"u,u": "2*u + (L"}}')
    (d / "E.json").write_text(json.dumps({"arity": 1, "values": {"u": "u"}}))
    return d


def test_check(capsys, files):
    code, rep = run(capsys, "check", str(files / "gfz.json"))
    assert code == 0 and rep["ok"]
    code, rep = run(capsys, "check", str(files / "broken.json"))
    assert code == 1
    assert rep["jacobi"]["failures"][0]["residual"] != "0"


def test_parse_error_location(capsys, files):
    code, rep = run(capsys, "check", str(files / "bad.json"))
    assert code == 2
    assert (rep["line"], rep["column"]) == (2, 31)


def test_graph_reduce(capsys):
    code, rep = run(capsys, "graph", "reduce", "[2->1]")
    assert code == 0 and rep["reduced"] == "-1 * [1->2]"
    code, rep = run(capsys, "graph", "reduce", "[3; 1->2, 2->3] + [3; 2->3, 3->1] + [3; 3->1, 1->2]")
    assert rep["reduced"] == "0"
    code, rep = run(capsys, "graph", "reduce", "[3; 1->3]")
    assert rep["coordinates"] == {"3; 1->3": "1"}
    code, _ = run(capsys, "graph", "reduce", "[7; 1->2]")
    assert code == 3
    code, _ = run(capsys, "graph", "reduce", "[2; 1=>2]")
    assert code == 2


def test_diff_twice_is_zero(capsys, files):
    code, rep = run(capsys, "diff", str(files / "E.json"), "gfz")
    assert code == 0 and rep["values"] == {"u,u": "2*L1"}
    (files / "dE.json").write_text(json.dumps(rep))
    code, rep = run(capsys, "diff", str(files / "dE.json"), "gfz")
    assert code == 0 and rep["values"] == {}


def test_diff_rejects_invalid(capsys, files):
    (files / "f.json").write_text(json.dumps({"arity": 2, "values": {"u,u": "1"}}))
    code, _ = run(capsys, "diff", str(files / "f.json"), "gfz")
    assert code == 1


def test_classical_diff_with_oracle(capsys, files):
    import random
    from pvalab.cl_complex import cochain_to_dict
    from pvalab.cohomology import TruncatedComplex, random_element
    from pvalab.pva import gfz
    spec = gfz()
    for seed in range(3):
        tc = TruncatedComplex("classical", spec, 4, 1 - spec.shift)
        Y = random_element(tc.slice(1), random.Random(seed))
        (files / "y.json").write_text(json.dumps(cochain_to_dict(Y)))
        code, rep = run(capsys, "diff", str(files / "y.json"), "gfz", "--oracle")
        assert code == 0 and rep["oracle"]["ok"]


def test_cohomology_vanish(capsys):
    code, rep = run(capsys, "cohomology", "vanish", "--s", "1", "--n", "2", "gfz")
    assert code == 0
    assert {s["status"] for s in rep["slices"]} == {"zero"}
    code, rep = run(capsys, "cohomology", "vanish", "--s", "1", "--n", "1", "gfz")
    assert code == 1 and rep["refused"]


def test_cohomology_dims(capsys):
    code, rep = run(capsys, "cohomology", "dims", "--complex", "classical", "--delta", "0", "gfz")
    assert code == 0
    assert [s["dim_H"] for s in rep["slices"]] == [1, 1, 0]
    assert rep["certificates"]["d_squared_zero"]


def test_straighten(capsys, files):
    import random
    from pvalab.cl_complex import cochain_to_dict, d_cl
    from pvalab.cohomology import TruncatedComplex, random_cocycle, random_element
    from pvalab.pv_complex import phi
    from pvalab.pva import gfz
    spec = gfz()
    rng = random.Random(1)
    tc = TruncatedComplex("classical", spec, 4, 2)
    tv = TruncatedComplex("variational", spec, 4, 2)
    Y = d_cl(random_element(tc.slice(1), rng)) + phi(random_cocycle(tv, 2, rng), 4)
    (files / "closed_Y.json").write_text(json.dumps(cochain_to_dict(Y)))
    code, rep = run(capsys, "cohomology", "straighten", str(files / "closed_Y.json"), "gfz")
    assert code == 0
    assert rep["certificates"] == {"exact": True, "edgeless": True}
    assert set(rep["Ytilde"]["shapes"]) <= {"1,1"}


def test_deterministic_output(capsys):
    a = run(capsys, "--seed", "3", "cohomology", "dims", "--delta", "0", "virasoro")
    b = run(capsys, "cohomology", "dims", "--delta", "0", "virasoro", "--seed", "3")
    assert a == b


def test_selftest_quick(capsys):
    code, rep = run(capsys, "selftest", "--quick", "--only", "1", "3", "12")
    assert code == 0
    assert [c["id"] for c in rep["criteria"]] == [1, 3, 12]
