import json

import pytest

from padicde.cli import main

AS3 = json.dumps({"field": {"p": 2, "kind": "Q"}, "rank": 1, "operator": "d/dt",
                  "matrix": [[{"coeffs": {"-4": "6"}}]], "window": ["1/1024", "1"]})
QUADRATIC = json.dumps({"field": {"p": 2, "kind": "Q"},
                        "P": [{"coeffs": {"-1": "2"}}, {"coeffs": {"0": "-1"}}, {"coeffs": {"0": "1"}}],
                        "window": ["1/4", "3/4"]})
UNIPOTENT_PULLBACK = json.dumps({
    "field": {"p": 2, "kind": "Q"}, "rank": 2, "operator": "t d/dt",
    "matrix": [[{"coeffs": {"0": "2"}}, {"coeffs": {"0": "2"}}], [{"coeffs": {}}, {"coeffs": {"0": "2"}}]],
    "window": ["1/8", "1/2"], "antecedent_window": ["1/8", "1/2"]})


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_break_csv(capsys):
    code, out, _ = run(capsys, "break", "-i", AS3, "-S", "128", "-f", "csv")
    assert code == 0
    assert out.splitlines() == ["s,r,beta", "1/16,1/4,3", "1/32,1/8,3"]


def test_radius_json_has_exact_strings(capsys):
    code, out, _ = run(capsys, "radius", "-i", AS3, "--samples", "1/4,1/2", "-S", "64")
    assert code == 0
    data = json.loads(out)
    assert all(isinstance(v, str) for smp in data["samples"] for v in smp.values()
               if not isinstance(v, int))


def test_polygon_csv(capsys):
    code, out, _ = run(capsys, "polygon", "-i", '{"breaks": [[1, 1], [3, 2]]}', "-f", "csv")
    assert code == 0
    assert out.splitlines() == ["x,y", "0,0", "1,1", "2,4", "3,7"]


def test_herbrand_as_and_compose_with_identity(capsys):
    code, out, _ = run(capsys, "herbrand", "as", "-i", '{"d": 3, "p": 2}')
    assert code == 0
    phi = json.loads(out)
    assert phi == {"vertices": [["0", "0"], ["3", "3"]], "final_slope": "1/2"}
    ident = {"vertices": [["0", "0"]], "final_slope": "1"}
    code, out, _ = run(capsys, "herbrand", "compose", "-i",
                       json.dumps({"outer": phi, "inner": ident}))
    assert code == 0 and json.loads(out) == phi


def test_bound(capsys):
    code, out, _ = run(capsys, "bound", "-i", '{"kind": "abelian-image", "p": 2, "n": 1, "ell": 3}')
    assert code == 0 and json.loads(out)["value"] == "8"


def test_solve_residuals_grow(capsys):
    code, out, _ = run(capsys, "solve", "-i", QUADRATIC, "--order", "16")
    assert code == 0
    data = json.loads(out)
    assert data["root"]["coeffs"]["0"] == "1" and data["root"]["coeffs"]["-1"] == "-2"
    assert len(data["residuals"]) >= 3


def test_antecedent_reports_certificate(capsys):
    code, out, _ = run(capsys, "antecedent", "-i", UNIPOTENT_PULLBACK, "--order", "24")
    assert code == 0
    data = json.loads(out)
    assert set(data["residual"].values()) == {"+inf"}
    assert data["radius_relation"]["holds"] is True


def test_reduce(capsys):
    doc = {"field": {"p": 2, "kind": "Q"}, "window": ["1/2", "1"],
           "matrix": [[{"coeffs": {"1": "1"}}, {"coeffs": {}}], [{"coeffs": {}}, {"coeffs": {"-1": "1"}}]]}
    code, out, _ = run(capsys, "reduce", "-i", json.dumps(doc), "-f", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "s,lambda" and len(lines) == 8


def test_output_is_deterministic(capsys):
    outs = {run(capsys, "break", "-i", AS3, "-S", "64")[1] for _ in range(3)}
    assert len(outs) == 1


def test_out_flag_writes_file(capsys, tmp_path):
    target = tmp_path / "poly.csv"
    code, out, _ = run(capsys, "polygon", "-i", '[[2, 1]]', "-f", "csv", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text() == "x,y\n0,0\n1,2\n"


def test_input_from_file(capsys, tmp_path):
    path = tmp_path / "as3.json"
    path.write_text(AS3)
    code, out, _ = run(capsys, "break", "-i", str(path), "-S", "128", "-f", "csv")
    assert code == 0 and out.endswith("1/32,1/8,3\n")


@pytest.mark.parametrize("argv, code", [
    (["radius", "-i", "{oops"], 2),
    (["radius", "-i", "/nonexistent/file.json"], 2),
    (["radius", "-i", AS3, "--samples", "-1"], 3),
    (["bound", "-i", '{"kind": "nonsense"}'], 3),
    (["solve", "-i", QUADRATIC.replace('"-1": "2"', '"-1": "1"')], 3),
    (["herbrand", "psi", "-i", '{"vertices": [["0", "0"]], "final_slope": "0"}'], 3),
])
def test_exit_codes(capsys, argv, code):
    got, out, err = run(capsys, *argv)
    assert got == code and out == "" and err.startswith("error:")


def test_precision_error_exit_code(capsys):
    # θv = t·v: the low-order averages leave a t^9 term that is not a p-th power
    doc = {"field": {"p": 2, "kind": "Q"}, "rank": 1, "operator": "t d/dt",
           "matrix": [[{"coeffs": {"1": "1"}}]], "window": ["1/8", "1/2"]}
    code, out, err = run(capsys, "antecedent", "-i", json.dumps(doc), "--order", "8")
    assert code == 4 and out == "" and "raise the order" in err


def test_check_exit_status(capsys):
    code, out, _ = run(capsys, "check", "herbrand", "hasse-arf")
    assert code == 0 and json.loads(out)["failed"] == 0
    code, _, err = run(capsys, "check", "no-such-check")
    assert code == 3 and "no-such-check" in err
