import io
import json

import pytest

from openclosed.cli import run


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), stdout=buf)
    return code, buf.getvalue()


def test_build_report():
    code, out = call("build", "c3_f1")
    doc = json.loads(out)
    assert code == 0
    assert doc["closed"]["extra_cones"][1]["I_prime"] == [1, 3, 4, 5]
    assert doc["neighbor_framings"][1]["framing"] == "-2"


def test_disk_report_uses_exact_strings():
    code, out = call("disk", "c3_f1", "--order", "3")
    doc = json.loads(out)
    assert [t["coefficient"] for t in doc["W"]] == ["-1", "3/4", "-10/9"]


def test_winding_bound():
    _, out = call("disk", "c3_f1", "--order", "8", "--winding", "2")
    assert len(json.loads(out)["W"]) == 2


def test_reports_are_deterministic():
    assert call("batyrev", "c3_f1")[1] == call("batyrev", "c3_f1")[1]


@pytest.mark.parametrize("argv", [
    ["charges", "kp2_f1"],
    ["pf", "c3_f1"],
    ["hypercorr", "c3_f1_2", "--order", "3"],
    ["ifun", "c3_f1", "--order", "3"],
    ["verify", "--criterion", "1"],
])
def test_passing_commands_exit_zero(argv):
    assert call(*argv)[0] == 0


def test_failed_assertion_exits_one():
    code, out = call("numeric", "c3_f1", "--order", "12")
    assert code == 1
    assert json.loads(out)["assertions"] == {"matching_root": False}


def test_malformed_json_exits_two(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{points")
    assert call("build", str(path))[0] == 2


def test_schema_violation_exits_two(tmp_path):
    path = tmp_path / "geom.json"
    path.write_text(json.dumps({"points": [[1, 0], [0, 1], [0, 0]], "rays": 3,
                                "triangulation": [[1, 2, 3]],
                                "brane": {"edge": [1, 2], "framing": "x"}}))
    assert call("build", str(path))[0] == 2


@pytest.mark.parametrize("x", ["0/1", "1/0", "abc"])
def test_bad_open_parameter_exits_two(x):
    assert call("batyrev", "c3_f1", "--x", x)[0] == 2


def test_wrong_number_of_kahler_parameters_exits_two():
    assert call("batyrev", "kp2_f1", "--q", "1/64,1/32")[0] == 2


def test_output_file(tmp_path):
    out = tmp_path / "r.json"
    assert call("build", "c3_f1", "--out", str(out))[0] == 0
    assert json.loads(out.read_text())["passed"] is True
