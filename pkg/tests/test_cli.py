import json

import pytest

from hocolim import io
from hocolim.cli import main
from hocolim.errors import SchemaError
from hocolim.spectra import lim_table

CORPUS = ["cp1.json", "cp2.json", "cp3.json", "hirzebruch1.json", "p1xp1.json", "tripod.json"]


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- io ---------------------------------------------------------------------------

def test_corpus_listing():
    assert io.corpus() == sorted(CORPUS)


@pytest.mark.parametrize("name", CORPUS)
def test_tdiagram_roundtrip(tmp_path, name):
    _, TD = io.load_diagram(name)
    p = tmp_path / "d.json"
    p.write_text(json.dumps(io.tdiagram_to_json(TD)))
    _, back = io.load_diagram(p)
    assert lim_table(back) == lim_table(TD)


@pytest.mark.parametrize("payload,msg", [
    ([], "top level"),
    ({"kind": "cone"}, "unknown kind"),
    ({"foo": 1}, "cannot tell"),
    ({"elements": ["a", "a"], "covers": []}, "duplicate"),
    ({"elements": ["a"], "covers": [["a", "b"]]}, "unknown element"),
    ({"rays": [[1, 0], [0, 1.5]], "cones": []}, "integers"),
    ({"rays": [[1]], "cones": [["x"]]}, "ray indices"),
    ({"poset": {"elements": ["a"], "covers": []}, "k": 1, "rank": {}, "arrows": [], "augmentation": {}}, "rank"),
])
def test_schema_errors(tmp_path, payload, msg):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(payload))
    with pytest.raises(SchemaError, match=msg):
        io.load(p)


def test_malformed_position(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"rays": [[1]],\n,}')
    with pytest.raises(SchemaError, match="line 2, column 1"):
        io.load_json(p)


def test_plain_output():
    from fractions import Fraction

    text = io.dumps({"b": 1, "a": Fraction(1, 2), "_hidden": 3, "c": (Fraction(2), True)})
    assert json.loads(text) == {"a": "1/2", "b": 1, "c": [2, True]}


# -- commands ------------------------------------------------------------------------

def test_betti_cp2(capsys):
    code, out, _ = run(capsys, "betti", "cp2.json")
    rep = json.loads(out)
    assert code == 0 and rep["b"] == [1, 0, 1, 0, 1]
    assert rep["hypotheses"] == {"homology_manifold": True, "strongly_reduced": True,
                                 "orbit_shift": 0, "t_characteristic": True}


@pytest.mark.parametrize("method", ["refinement", "resolution"])
def test_betti_methods(capsys, method):
    code, out, _ = run(capsys, "betti", "p1xp1.json", "--method", method)
    assert code == 0 and json.loads(out)["b"] == [1, 0, 2, 0, 1]


@pytest.mark.parametrize("cmd", ["betti", "equivariant", "bigraded", "orbit-ss", "compare", "cm-check",
                                 "ef-check", "hvector", "skeleton", "certify-poset"])
@pytest.mark.parametrize("name", CORPUS)
def test_every_command_on_corpus(capsys, cmd, name):
    code, out, err = run(capsys, cmd, name)
    assert code == 0, err
    json.loads(out)


def test_markdown(capsys):
    code, out, _ = run(capsys, "--format", "markdown", "betti", "cp1.json")
    assert code == 0 and out.startswith("# betti cp1.json") and "| `b` | `[1, 0, 1]` |" in out


def test_output_file(capsys, tmp_path):
    p = tmp_path / "r.json"
    code, out, _ = run(capsys, "-o", str(p), "ef-check", "cp1.json")
    assert code == 0 and out == "" and json.loads(p.read_text())["equivariantly_formal"] is True


def test_truncation_stamp(capsys):
    code, out, _ = run(capsys, "compare", "cp2.json", "--t-max", "3")
    rep = json.loads(out)
    assert code == 0 and rep["verified_through_degree"] == 6 and rep["passed"]


def test_cm_check_tripod(capsys):
    code, out, _ = run(capsys, "cm-check", "tripod.json")
    assert code == 0 and json.loads(out)["status"] == "hypotheses not met"


def test_certify_tripod(capsys):
    code, out, _ = run(capsys, "certify-poset", "tripod.json")
    rep = json.loads(out)
    assert rep["homology_manifold"] is False
    assert rep["failures"] == [{"element": "apex", "q": 1, "dim": 2}]


def test_hvector_poset(capsys, tmp_path):
    p = tmp_path / "b2.json"
    p.write_text(json.dumps({"elements": ["0", "a", "b"], "covers": [["0", "a"], ["0", "b"]]}))
    code, out, _ = run(capsys, "hvector", str(p))
    assert code == 0 and json.loads(out)["h"] == ["1", "1"]


def test_skeleton_single_q(capsys):
    code, out, _ = run(capsys, "skeleton", "cp3.json", "--q", "1", "--bigraded")
    rep = json.loads(out)
    assert code == 0 and len(rep["skeleta"]) == 1 and rep["skeleta"][0]["bigraded"]["passed"]
    assert rep["taylor"]["agree"]


def test_cp_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "cp-verify", "--m", "4", "--qmax", "2", "--jmax", "4")
    rep = json.loads(out)
    assert code == 1 and rep["sums_agree"] and rep["all_equal_above_diagonal"] and not rep["all_equal"]
    code, _, _ = run(capsys, "cp-verify", "--m", "4", "--qmax", "2", "--jmax", "4", "--domain", "closed-form")
    assert code == 0


def test_cp_verify_out_of_range(capsys):
    code, _, err = run(capsys, "cp-verify", "--m", "4", "--qmax", "3")
    assert code == 2 and "OutOfRange" in err


def test_malformed_json_exit(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"rays": [[1]],\n,}')
    code, _, err = run(capsys, "betti", str(p))
    assert code == 2 and "line 2, column 1" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "betti", "nope.json")
    assert code == 2 and "no such file" in err


def test_bad_option(capsys):
    code, _, _ = run(capsys, "betti", "cp1.json", "--method", "magic")
    assert code == 2


def test_poset_is_not_a_diagram(capsys, tmp_path):
    p = tmp_path / "p.json"
    p.write_text(json.dumps({"elements": ["a"], "covers": []}))
    code, _, err = run(capsys, "betti", str(p))
    assert code == 2 and "expected a fan" in err


def test_workers_env(capsys, monkeypatch):
    code, one, _ = run(capsys, "skeleton", "cp2.json")
    monkeypatch.setenv("HOCOLIM_WORKERS", "2")
    code2, two, _ = run(capsys, "skeleton", "cp2.json")
    assert code == code2 == 0 and one == two
