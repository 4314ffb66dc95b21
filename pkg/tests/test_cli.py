"""CLI behavior: subcommands, scenario files, output formats, exit codes."""

import json

import pytest

from toridyn.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_scenario(tmp_path, doc, name="scenario.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


DOUBLING = {
    "torus": {"J": [["0", "-1"], ["1", "0"]]},
    "endomorphism": {"M": [["2", "0"], ["0", "2"]]},
}


# -- classify

def test_classify_example_json(capsys):
    code, out, _ = run(capsys, "classify", "--example", "mult_2_3", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["amplified"] == "yes" and doc["polarized"] == "no"
    assert doc["unity_free"] is True


def test_classify_text_output(capsys):
    code, out, _ = run(capsys, "classify", "--example", "gtz_diag")
    assert code == 0
    assert "polarized" in out


def test_classify_scenario_file(capsys, tmp_path):
    path = write_scenario(tmp_path, DOUBLING)
    code, out, _ = run(capsys, "classify", path, "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["polarized"] == "yes" and doc["polarized_q"] == 4


def test_json_output_byte_stable(capsys):
    _, a, _ = run(capsys, "classify", "--example", "salem_surface", "--format", "json")
    _, b, _ = run(capsys, "classify", "--example", "salem_surface", "--format", "json")
    assert a == b


# -- degrees

def test_degrees_json(capsys):
    code, out, _ = run(capsys, "degrees", "--example", "mult_2_3", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["dynamical_degrees"]) == 3
    assert doc["dynamical_degrees"][0] == ["1", "1"]
    assert doc["dynamical_degrees"][2] == ["36", "36"]


def test_degrees_precision_flag(capsys):
    code, out, _ = run(capsys, "degrees", "--example", "salem_surface",
                       "--format", "json", "--precision", "1/1000000000000")
    assert code == 0
    doc = json.loads(out)
    from fractions import Fraction
    lo, hi = (Fraction(x) for x in doc["dynamical_degrees"][1])
    # products of per-root enclosures widen somewhat, but the requested
    # precision must still dominate the default
    assert hi - lo <= Fraction(1, 10**10)


# -- fixed points

def test_fixed_points_finite(capsys, tmp_path):
    path = write_scenario(tmp_path, {
        "torus": DOUBLING["torus"],
        "endomorphism": {"M": [["3", "0"], ["0", "3"]]},
    })
    code, out, _ = run(capsys, "fixed-points", path, "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "finite" and doc["count"] == 4


def test_fixed_points_iterate(capsys, tmp_path):
    path = write_scenario(tmp_path, DOUBLING)
    code, out, _ = run(capsys, "fixed-points", path, "--iterate", "2", "--format", "json")
    assert code == 0
    assert json.loads(out)["count"] == 9


def test_fixed_points_coset_family(capsys):
    code, out, _ = run(capsys, "fixed-points", "--example", "mult_2_1", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "coset-family" and doc["subtorus_rank"] == 2


# -- torsion

def test_torsion_graph(capsys, tmp_path):
    path = write_scenario(tmp_path, DOUBLING)
    code, out, _ = run(capsys, "torsion", path, "--level", "3", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["node_count"] == 9
    assert doc["cycle_histogram"] == {"1": 1, "2": 4}


def test_torsion_budget_exhausted(capsys):
    code, _, err = run(capsys, "torsion", "--example", "mult_2_3",
                       "--level", "11", "--budget", "100")
    assert code == 4
    assert "error[resource]" in err


# -- quotient and orbit

def test_quotient_first_factor(capsys):
    code, out, _ = run(capsys, "quotient", "--example", "shear",
                       "--sublattice", "first_factor", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["product_identity"] == "verified"
    assert doc["restriction"] == [["-1", "0"], ["1", "0"]]


def test_quotient_unknown_sublattice(capsys):
    code, _, err = run(capsys, "quotient", "--example", "shear",
                       "--sublattice", "nope")
    assert code == 3
    assert "known:" in err


def test_orbit_invariant(capsys):
    code, out, _ = run(capsys, "orbit", "--example", "mult_2_1",
                       "--sublattice", "first_factor", "--format", "json")
    assert code == 0
    assert json.loads(out)["verdict"] == "invariant"


def test_orbit_diagonal_gtz(capsys):
    code, out, _ = run(capsys, "orbit", "--example", "gtz_diag",
                       "--sublattice", "diagonal", "--format", "json")
    assert code == 0
    assert json.loads(out)["verdict"] in ("escaping", "invariant") or \
        json.loads(out)["verdict"].startswith("periodic")


# -- sweep and examples

def test_sweep_small(capsys):
    code, out, _ = run(capsys, "sweep", "--count", "5", "--dim", "1",
                       "--seed", "7", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["violations"] == [] and sum(doc["cells"].values()) == 5


def test_examples_listing(capsys):
    code, out, _ = run(capsys, "examples", "--format", "json")
    assert code == 0
    assert "gtz_diag" in json.loads(out)


# -- error paths

def test_parse_error_bad_json(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, _, err = run(capsys, "classify", str(path))
    assert code == 2
    assert "error[parse]" in err


def test_parse_error_bad_rational(capsys, tmp_path):
    doc = {"torus": {"J": [["0", "-1"], ["1", "x"]]},
           "endomorphism": {"M": [["2", "0"], ["0", "2"]]}}
    code, _, err = run(capsys, "classify", write_scenario(tmp_path, doc))
    assert code == 2
    assert "torus.J[1][1]" in err


def test_parse_error_missing_sections(capsys, tmp_path):
    code, _, err = run(capsys, "classify", write_scenario(tmp_path, {"torus": {}}))
    assert code == 2


def test_parse_error_no_scenario(capsys):
    code, _, err = run(capsys, "classify")
    assert code == 2
    assert "--example" in err


def test_domain_error_bad_structure(capsys, tmp_path):
    doc = {"torus": {"J": [["1", "0"], ["0", "1"]]},
           "endomorphism": {"M": [["2", "0"], ["0", "2"]]}}
    code, _, err = run(capsys, "classify", write_scenario(tmp_path, doc))
    assert code == 3
    assert "error[domain]" in err


def test_domain_error_not_holomorphic(capsys, tmp_path):
    doc = {"torus": {"J": [["0", "-1"], ["1", "0"]]},
           "endomorphism": {"M": [["1", "1"], ["0", "1"]]}}
    code, _, err = run(capsys, "classify", write_scenario(tmp_path, doc))
    assert code == 3


def test_unknown_example(capsys):
    code, _, err = run(capsys, "classify", "--example", "missing")
    assert code == 3


def test_ragged_matrix_rejected(capsys, tmp_path):
    doc = {"torus": {"J": [["0", "-1"], ["1"]]},
           "endomorphism": {"M": [["2", "0"], ["0", "2"]]}}
    code, _, err = run(capsys, "classify", write_scenario(tmp_path, doc))
    assert code == 2
    assert "row 1" in err
