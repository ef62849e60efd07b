"""One check per acceptance criterion; each prints a PASS/FAIL line."""
import pytest

from openclosed import suite


def report(capsys, check):
    with capsys.disabled():
        print("\n" + check.line())


def test_criterion_1_c3_geometry(capsys):
    c = suite.run(1)
    report(capsys, c)
    v = c.values
    assert v["volumes"] == [1, 3, 2]
    assert v["S"] == 2 and v["I_prime"] == [[2, 3, 4, 5], [1, 3, 4, 5]]
    assert v["neighbor_framing_2"] == "-2"
    assert v["kernel"] in ([[1, 1, -2, 1, -1]], [[-1, -1, 2, -1, 1]])
    assert c.seconds < 1.0
    assert c.passed


def test_criterion_2_kp2_geometry(capsys):
    c = suite.run(2)
    report(capsys, c)
    assert c.values["membership"] == [True, True]
    assert c.values["volumes"] == [3, 8, 5]
    assert c.seconds < 1.0
    assert c.passed


def test_criterion_3_c3_i_function(capsys):
    c = suite.run(3)
    report(capsys, c)
    assert c.values["z^-1"] == "1·log(q1)^1"
    assert c.values["z^-2_coefficients"] == [
        "-2", "3/2", "-20/9", "35/8", "-252/25", "77/3", "-3432/49", "6435/32"]
    assert c.seconds < 5.0
    assert c.passed


def test_criterion_4_disk_function(capsys):
    c = suite.run(4)
    report(capsys, c)
    W = ["-1", "3/4", "-10/9", "35/16", "-126/25", "77/6", "-1716/49", "6435/64"]
    assert c.values["W"] == W
    assert c.values["W_neighbor"] == [w[1:] if w.startswith("-") else "-" + w for w in W]
    assert c.seconds < 5.0
    assert c.passed


def test_criterion_5_hypergeometric_correspondence(capsys):
    c = suite.run(5)
    report(capsys, c)
    assert c.values == {"c3_f1": True, "c3_f1_2": {"0": True, "1": True}}
    assert c.seconds < 30.0
    assert c.passed


def test_criterion_6_picard_fuchs(capsys):
    c = suite.run(6)
    report(capsys, c)
    a, b = c.values["c3_f1"], c.values["kp2_f1"]
    assert a["annihilated"] and (a["rank"], a["volume"]) == (3, 3)
    assert b["annihilated"] and (b["rank"], b["volume"]) == (8, 8)
    assert c.seconds < 30.0
    assert c.passed


def test_criterion_7_c3_rings(capsys):
    c = suite.run(7)
    report(capsys, c)
    v = c.values
    assert v["dims"] == [1, 3, 2]
    assert v["bases"] == [["1"], ["1", "X0Z", "X0^2Z"], ["1", "X0"]]
    assert v["I_ranks"] == [[0, 0, 0, 0, 1], [0, 1, 1, 1, 2, 3], [0, 1, 1, 2]]
    assert v["iota"] == [["0", "1", "0"], ["0", "0", "1"]]
    assert v["pi"] == [["1"], ["0"], ["0"]]
    assert all(v["checks"].values())
    assert c.seconds < 10.0
    assert c.passed


def test_criterion_8_kp2_rings(capsys):
    c = suite.run(8)
    report(capsys, c)
    assert c.values["dims"] == [3, 8, 5]
    assert c.values["certificates"] == [True, True, True]
    assert all(c.values["checks"].values())
    assert c.seconds < 60.0
    assert c.passed


def test_criterion_9_numeric_open_mirror(capsys):
    c = suite.run(9)
    report(capsys, c)
    assert float(c.values["residual"]) <= 1e-8
    assert c.seconds < 1.0
    assert c.passed


def test_criterion_10_properties(capsys):
    c = suite.run(10)
    report(capsys, c)
    assert c.values == {"theta_derivation": True, "gamma_telescoping": True,
                        "snf_reconstruction": True, "box_equals_group": True,
                        "box_ages": True}
    assert c.passed
