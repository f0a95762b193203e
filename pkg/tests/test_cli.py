import json

import pytest

from quadstrata.cli import main, parse_roots, parse_signature
from quadstrata.core import G, ParseError, StratumSignature


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip().startswith("{") else out


def test_decide_reports_an_obstruction_with_exit_two(capsys):
    code, out = run(capsys, "decide", "--sig", "1:4,-4", "--roots", "0")
    assert code == 2
    assert out == {"status": "NotRealizable", "obstruction": "Origin", "citation": "Thm 1.2 i"}


def test_decide_realizable_names_the_recipe(capsys):
    code, out = run(capsys, "decide", "--sig", "0:1,1,-2,-2,-2", "--roots", "1,2,4")
    assert code == 0 and out["status"] == "Realizable" and out["witness"]


def test_decide_with_a_component(capsys):
    code, out = run(capsys, "decide", "--sig", "1:6,-6", "--roots", "0", "--component", "1")
    assert code == 2
    code, out = run(capsys, "decide", "--sig", "1:6,-6", "--roots", "0", "--component", "3")
    assert code == 0


def test_decide_reads_a_request_file(capsys, tmp_path):
    req = tmp_path / "req.json"
    req.write_text(json.dumps({"signature": {"genus": 0, "orders": [1, 1, -2, -2, -2]},
                               "roots": ["1", "2", "3"], "component": "whole"}))
    code, out = run(capsys, "decide", str(req))
    assert code == 2 and out["obstruction"] == "Triangular"


def test_construct_verify_and_draw(capsys, tmp_path):
    svg = tmp_path / "w.svg"
    code, out = run(capsys, "construct", "--sig", "0:1,1,-2,-2,-2", "--roots", "1,i,2+3i",
                    "--verify", "--svg", str(svg))
    assert code == 0
    assert out["verified"] == out["claimed"]
    assert svg.read_text().startswith("<svg")


def test_construct_obstructed_exits_two(capsys):
    code, out = run(capsys, "construct", "--sig", "0:1,1,-2,-2,-2", "--roots", "1,1,2")
    assert code == 2 and out["error"] == "ObstructedConfiguration"


def test_witness_file_round_trips_through_verify(capsys, tmp_path):
    code, out = run(capsys, "construct", "--catalog", "g1_residue_rho3")
    assert code == 0
    path = tmp_path / "w.json"
    path.write_text(json.dumps(out))
    code, out = run(capsys, "verify", str(path))
    assert code == 0 and out["matches_claim"] and out["degree_identity"]


def test_tampered_surface_is_rejected(capsys, tmp_path):
    code, out = run(capsys, "construct", "--catalog", "cc_three_poles")
    out["surface"]["pieces"][0]["vectors"][1] = {"re": "7/1", "im": "0/1"}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(out))
    code, out = run(capsys, "verify", str(path))
    assert code == 1 and out["error"] == "VectorMismatch"


def test_search_reports_witnesses(capsys):
    code, out = run(capsys, "search", "--sig", "0:1,1,-2,-2,-2", "--roots", "1,2,4", "--budget", "3")
    assert code == 0 and out["witness_count"] >= 1
    code, out = run(capsys, "search", "--sig", "0:1,1,-2,-2,-2", "--roots", "1,1,2", "--budget", "3")
    assert out["witness_count"] == 0 and "first_witness" not in out


def test_search_rejects_non_integer_roots(capsys):
    code, out = run(capsys, "search", "--sig", "0:1,1,-2,-2,-2", "--roots", "1,i,2")
    assert code == 1 and out["error"] == "ParseError"


def test_holomorphic_questions(capsys):
    assert run(capsys, "cylinders", "--sig", "2:1,1,2") == (0, {"max": 3})
    code, out = run(capsys, "nonempty", "--sig", "2:4")
    assert out["nonempty"] is False
    code, out = run(capsys, "nonempty", "--sig", "2:2,2")
    assert out["nonempty"] is True


def test_catalog_listing(capsys):
    code, out = run(capsys, "catalog")
    assert code == 0 and len(out["entries"]) == 33


def test_text_output(capsys):
    code, out = run(capsys, "decide", "--sig", "1:4,-4", "--roots", "0", "--format", "text")
    assert "status: NotRealizable" in out and "citation: Thm 1.2 i" in out


@pytest.mark.parametrize("argv,code", [
    (["decide", "--sig", "1:4,-5", "--roots", "0"], "DegreeMismatch"),
    (["decide", "--sig", "oops"], "ParseError"),
    (["decide", "--sig", "0:1,1,-2,-2,-2", "--roots", "1,2"], "ConfigMismatch"),
    (["decide", "--sig", "1:6,-6", "--roots", "0", "--component", "2"], "InvalidComponent"),
    (["decide", "--sig", "2:5,1,-2", "--roots", "1", "--component", "1"], "ComponentUnknownForGenusGe2"),
    (["decide", "--sig", "0:2,-6", "--roots", "0"], "NonPrimitiveStratum"),
    (["verify", "/nonexistent/file.json"], "IOError"),
    (["construct", "--catalog", "nope"], "ParseError"),
])
def test_errors_are_json_with_exit_one(capsys, argv, code):
    got, out = run(capsys, *argv)
    assert got == 1 and out["error"] == code


def test_parsers():
    s = parse_signature("0:5,-4,-3,-2")
    assert s == StratumSignature.from_orders(0, [5, -4, -3, -2])
    cfg = parse_roots("1+i,3", s)
    assert cfg.even_pole_roots == (G(1, 1),) and cfg.double_pole_roots == (G(3),)
    with pytest.raises(ParseError):
        parse_signature("x:1")
