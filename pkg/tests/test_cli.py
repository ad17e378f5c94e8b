import json

import pytest

from skeintorus import cli
from skeintorus.diagram import fixture_diagram, valuation
from skeintorus.lattice import vector_to_dict


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    assert code == 0, err
    return json.loads(out)


def flatten(prefix, value, rows):
    if isinstance(value, dict) and value:
        for k, v in value.items():
            flatten(f"{prefix}.{k}" if prefix else str(k), v, rows)
    else:
        rows[prefix] = value
    return rows


def parse_table(text):
    rows = {}
    for line in text.splitlines():
        key, _, value = line.partition("  ")
        rows[key.strip()] = json.loads(value.strip())
    return rows


# ----------------------------------------------------------------------
# examples

def test_torus_rank_triangle(capsys):
    code, out, _ = run(capsys, "torus", "rank", "--surface", "triangle.tri", "--N", "3", "--json")
    assert code == 0
    assert out.strip() == '{"R":"3^2"}'


def test_valuation_delegates(capsys):
    got = run_json(capsys, "valuation", "--surface", "annulus.tri", "--diagram", "spiral_annulus")
    d = fixture_diagram("spiral_annulus")
    assert got == vector_to_dict(d.t, valuation(d))


def test_files_on_disk(tmp_path, capsys):
    d = fixture_diagram("theta_square")
    tri = tmp_path / "s.tri"
    dia = tmp_path / "d.dia"
    tri.write_text(d.t.serialize())
    dia.write_text(d.serialize())
    got = run_json(capsys, "valuation", "--surface", str(tri), "--diagram", str(dia))
    assert got == vector_to_dict(d.t, valuation(d))


def test_surface_check(capsys):
    got = run_json(capsys, "surface", "check", "--surface", "holed_torus")
    assert got["valid"] and got["faces"] == 3 and got["edges"] == 5
    assert got["genus"] == 1 and got["eulerCharacteristic"] == -1


def test_lattice_info(capsys):
    got = run_json(capsys, "lattice", "info", "--surface", "annulus", "--N", "5")
    assert got["rank"] == 4 and got["kernelIndex"] == "5^2"


def test_torus_irrep(capsys):
    got = run_json(capsys, "torus", "irrep", "--surface", "triangle", "--N", "3")
    assert got["dimension"] == 3 and got["spanRank"] == 9
    assert got["relationResidual"] < 1e-9 and got["centerResidual"] < 1e-9


def test_trace_and_leading_only(capsys):
    full = run_json(capsys, "trace", "--surface", "square", "--diagram", "theta_square")
    lead = run_json(capsys, "trace", "--surface", "square", "--diagram", "theta_square",
                    "--leading-only")
    d = fixture_diagram("theta_square")
    assert lead["exponent"] == vector_to_dict(d.t, valuation(d))
    assert lead["exponent"] in [term["exponent"] for term in full["terms"]]


def test_theta_cut(capsys):
    got = run_json(capsys, "theta-cut", "--surface", "square", "--diagram", "theta_square",
                   "--edge", "x")
    assert got["moves"] == 3 and got["exponent"] == 5
    assert got["blocks"] == {"x.a": [1, 2, 2], "x.b": [2, 2, 1]}


def test_center_certify_random(capsys):
    got = run_json(capsys, "center", "certify", "--surface", "punctured_disc", "--N", "3",
                   "--samples", "4", "--threads", "2")
    assert got["samples"] == 4 and got["residualZero"] is True
    assert len(got["steps"]) == 4


def test_center_certify_diagram(capsys):
    got = run_json(capsys, "center", "certify", "--surface", "annulus",
                   "--diagram", "spiral_annulus", "--N", "3")
    assert got["residualZero"] is True and got["steps"] >= 1


def test_rank_audit(capsys):
    got = run_json(capsys, "rank", "audit", "--surface", "annulus", "--N", "3")
    assert got["R"] == "3^2" and got["classes"] == 9 and got["verdict"] == "PASS"


def test_selftest_targets_acceptance_suite(capsys, monkeypatch):
    import pytest as pt
    seen = []
    monkeypatch.setattr(pt, "main", lambda args: seen.append(args) or 0)
    got = run_json(capsys, "selftest", "--level", "quick")
    assert got == {"level": "quick", "passed": True}
    assert seen[0][0].endswith("test_acceptance.py")
    monkeypatch.setattr(pt, "main", lambda args: 1)
    code, _, err = run(capsys, "selftest")
    assert code == cli.EXIT_VALIDATION and "selftest failed" in err


# ----------------------------------------------------------------------
# output modes and determinism

TABLE_CASES = [
    ("torus", "rank", "--surface", "triangle", "--N", "3"),
    ("lattice", "info", "--surface", "square", "--N", "3"),
    ("surface", "check", "--surface", "pentagon"),
    ("valuation", "--surface", "square", "--diagram", "theta_square"),
    ("theta-cut", "--surface", "square", "--diagram", "theta_square", "--edge", "x"),
    ("rank", "audit", "--surface", "triangle", "--N", "3"),
    ("center", "certify", "--surface", "annulus", "--N", "3", "--samples", "3"),
]


@pytest.mark.parametrize("argv", TABLE_CASES)
def test_table_and_json_carry_same_data(capsys, argv):
    data = run_json(capsys, *argv)
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert parse_table(out) == flatten("", data, {})


@pytest.mark.parametrize("argv", TABLE_CASES)
def test_report_deterministic(capsys, argv):
    outs = [run(capsys, *argv, "--json", "--report", "--seed", "7")[1] for _ in range(2)]
    assert outs[0] == outs[1]
    rep = json.loads(outs[0])
    assert set(rep) == {"command", "N", "fixtureHash", "seed", "results"}
    assert rep["seed"] == 7 and len(rep["fixtureHash"]) == 16


def test_thread_count_does_not_change_output(capsys):
    base = ("center", "certify", "--surface", "holed_torus", "--N", "3", "--samples", "6",
            "--json")
    a = run(capsys, *base, "--seed", "1")[1]
    assert a == run(capsys, *base, "--seed", "1", "--threads", "1")[1]


def test_timing_only_with_flag(capsys):
    rep = run_json(capsys, "torus", "rank", "--surface", "triangle", "--N", "3", "--report",
                   "--timing")
    assert rep["timing"] >= 0 and rep["results"] == {"R": "3^2"}


# ----------------------------------------------------------------------
# errors

def test_missing_file_exit_1(capsys):
    code, _, err = run(capsys, "torus", "rank", "--surface", "nope.tri", "--N", "3")
    assert code == cli.EXIT_INPUT and "nope.tri" in err


def test_missing_diagram_exit_1(capsys):
    code, _, _ = run(capsys, "valuation", "--surface", "square")
    assert code == cli.EXIT_INPUT


@pytest.mark.parametrize("argv", [
    ("torus", "rank", "--surface", "triangle", "--N", "4"),
    ("torus", "rank", "--surface", "triangle"),
    ("trace", "--surface", "square", "--diagram", "theta_square", "--indexing", "a,b"),
    ("theta-cut", "--surface", "square", "--diagram", "theta_square"),
    ("theta-cut", "--surface", "square", "--diagram", "theta_square", "--edge", "a"),
])
def test_validation_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == cli.EXIT_VALIDATION and out == "" and err


def test_bad_triangulation_file_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.tri"
    bad.write_text("edge a\nface F a a a\n")
    code, _, _ = run(capsys, "surface", "check", "--surface", str(bad))
    assert code == cli.EXIT_VALIDATION


def test_overflow_exit_3(capsys):
    code, _, err = run(capsys, "trace", "--surface", "square", "--diagram", "theta_square",
                       "--budget", "2")
    assert code == cli.EXIT_OVERFLOW and "overflow" in err


def test_unknown_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["torus", "rank", "--surface", "triangle", "--frobnicate"])
    assert exc.value.code == 2


def test_fixture_hash_tracks_input(capsys):
    a = run_json(capsys, "surface", "check", "--surface", "square", "--report")
    b = run_json(capsys, "surface", "check", "--surface", "pentagon", "--report")
    assert a["fixtureHash"] != b["fixtureHash"]
