"""Command-line interface: exit codes, file formats, round trips."""

import json
import math

import numpy as np
import pytest

from qdiv import HermitianOperator, SystemLayout
from qdiv.cli import main, operator_from_json, operator_to_json

LOG2 = math.log(2.0)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def write_operator(path, matrix, labels_dims=None):
    layout = SystemLayout(tuple(labels_dims)) if labels_dims else None
    op = HermitianOperator(np.asarray(matrix, dtype=complex), layout)
    path.write_text(json.dumps(operator_to_json(op)))
    return path


# ---- gen and round trip ----


def test_gen_state_round_trip(tmp_path, capsys):
    out = tmp_path / "state.json"
    code, _ = run(capsys, "gen", "state", "--dim", "3", "--seed", "7", "--out", str(out))
    assert code == 0
    obj = json.loads(out.read_text())
    op = operator_from_json(obj)
    assert op.dim == 3
    assert np.trace(op.matrix).real == pytest.approx(1.0, abs=1e-9)
    # parse -> serialize -> parse is the identity
    again = operator_from_json(operator_to_json(op))
    assert np.array_equal(op.matrix, again.matrix)
    assert op.layout.factors == again.layout.factors


def test_gen_channel(tmp_path, capsys):
    out = tmp_path / "ch.json"
    code, _ = run(capsys, "gen", "channel", "--din", "2", "--dout", "3", "--seed", "5", "--out", str(out))
    assert code == 0
    obj = json.loads(out.read_text())
    assert obj["din"] == 2 and obj["dout"] == 3


def test_gen_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "gen", "state", "--dim", "2", "--seed", "9", "--out", str(a))
    run(capsys, "gen", "state", "--dim", "2", "--seed", "9", "--out", str(b))
    assert a.read_text() == b.read_text()


# ---- div ----


def test_div_renyi2_two_point(tmp_path, capsys):
    x = write_operator(tmp_path / "x.json", np.diag([1.0, 0.0]))
    y = write_operator(tmp_path / "y.json", np.diag([0.5, 0.5]))
    code, out = run(capsys, "div", "--f", "renyi:2", "--x", str(x), "--y", str(y))
    assert code == 0
    obj = json.loads(out)
    assert obj["value"] == pytest.approx(LOG2, abs=1e-9)
    assert obj["unit"] == "nats"


def test_div_bits_flag(tmp_path, capsys):
    x = write_operator(tmp_path / "x.json", np.diag([1.0, 0.0]))
    y = write_operator(tmp_path / "y.json", np.diag([0.5, 0.5]))
    code, out = run(capsys, "div", "--f", "renyi:2", "--x", str(x), "--y", str(y), "--bits")
    assert code == 0
    obj = json.loads(out)
    assert obj["value"] == pytest.approx(1.0, abs=1e-9)
    assert obj["unit"] == "bits"


def test_div_infinite_value_serializes_as_string(tmp_path, capsys):
    x = write_operator(tmp_path / "x.json", np.diag([0.5, 0.5]))
    y = write_operator(tmp_path / "y.json", np.diag([1.0, 0.0]))
    code, out = run(capsys, "div", "--f", "neg_log", "--x", str(x), "--y", str(y))
    assert code == 0
    assert json.loads(out)["value"] == "inf"


def test_div_numeric_reports_diagnostics(tmp_path, capsys):
    x = write_operator(tmp_path / "x.json", [[0.6, 0.2], [0.2, 0.4]])
    y = write_operator(tmp_path / "y.json", [[0.5, -0.1], [-0.1, 0.5]])
    code, out = run(
        capsys, "div", "--f", "neg_log", "--x", str(x), "--y", str(y),
        "--method", "numeric", "--multistarts", "2", "--tau-star",
    )
    assert code == 0
    obj = json.loads(out)
    diag = obj["diagnostics"]
    assert diag["method"] == "numeric"
    assert diag["converged"] is True
    assert diag["backend"] in ("compiled", "pure")
    assert "tau_star" in obj
    closed_code, closed_out = run(capsys, "div", "--f", "neg_log", "--x", str(x), "--y", str(y))
    assert obj["value"] == pytest.approx(json.loads(closed_out)["value"], abs=1e-6)


def test_div_pure_flag_reports_pure_backend(tmp_path, capsys):
    x = write_operator(tmp_path / "x.json", [[0.6, 0.2], [0.2, 0.4]])
    y = write_operator(tmp_path / "y.json", [[0.5, -0.1], [-0.1, 0.5]])
    code, out = run(
        capsys, "div", "--f", "neg_log", "--x", str(x), "--y", str(y),
        "--method", "numeric", "--multistarts", "2", "--pure",
    )
    assert code == 0
    assert json.loads(out)["diagnostics"]["backend"] == "pure"


def test_div_petz_renyi(tmp_path, capsys):
    x = write_operator(tmp_path / "x.json", np.diag([1.0, 0.0]))
    y = write_operator(tmp_path / "y.json", np.diag([0.5, 0.5]))
    code, out = run(capsys, "div", "--f", "petz_renyi:2", "--x", str(x), "--y", str(y))
    assert code == 0
    assert json.loads(out)["value"] == pytest.approx(LOG2, abs=1e-9)


# ---- measure ----


def test_measure_bell_mutual_info(tmp_path, capsys):
    v = np.zeros(4)
    v[0] = v[3] = 1.0 / math.sqrt(2.0)
    rho = tmp_path / "bell.json"
    write_operator(rho, np.outer(v, v), labels_dims=[("A", 2), ("B", 2)])
    code, out = run(capsys, "measure", "--kind", "mutual_info", "--f", "neg_log", "--rho", str(rho))
    assert code == 0
    assert json.loads(out)["value"] == pytest.approx(2 * LOG2, abs=1e-4)


def test_measure_entropy_bits(tmp_path, capsys):
    rho = write_operator(tmp_path / "rho.json", np.eye(2) / 2)
    code, out = run(capsys, "measure", "--kind", "entropy", "--f", "neg_log", "--rho", str(rho), "--bits")
    assert code == 0
    assert json.loads(out)["value"] == pytest.approx(1.0, abs=1e-6)


# ---- verify ----


def test_verify_small_campaign_passes(tmp_path, capsys):
    out = tmp_path / "report.jsonl"
    code, _ = run(
        capsys, "verify", "--check", "dpi_channel", "--trials", "3", "--seed", "0",
        "--out", str(out),
    )
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert json.loads(lines[-1])["kind"] == "summary"


def test_verify_reruns_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    args = ["verify", "--check", "sandwich_petz", "--trials", "4", "--seed", "3"]
    assert run(capsys, *args, "--out", str(a))[0] == 0
    assert run(capsys, *args, "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_detects_violations_with_exit_one(tmp_path, capsys):
    code, _ = run(
        capsys, "verify", "--check", "partial_trace", "--f", "renyi:0.3",
        "--dims", "2x2", "--trials", "30", "--seed", "0", "--out", str(tmp_path / "r.jsonl"),
    )
    assert code == 1


def test_verify_unknown_check_is_parse_error(capsys):
    assert run(capsys, "verify", "--check", "bogus")[0] == 3


# ---- exit codes ----


def test_domain_error_exits_two(tmp_path, capsys):
    x = write_operator(tmp_path / "x.json", np.zeros((2, 2)))
    y = write_operator(tmp_path / "y.json", np.diag([0.5, 0.5]))
    assert run(capsys, "div", "--f", "neg_log", "--x", str(x), "--y", str(y))[0] == 2


def test_dim_mismatch_exits_two(tmp_path, capsys):
    x = write_operator(tmp_path / "x.json", np.diag([1.0, 0.0]))
    y = write_operator(tmp_path / "y.json", np.eye(3) / 3)
    assert run(capsys, "div", "--f", "neg_log", "--x", str(x), "--y", str(y))[0] == 2


def test_missing_file_exits_three(tmp_path, capsys):
    y = write_operator(tmp_path / "y.json", np.diag([0.5, 0.5]))
    assert run(capsys, "div", "--f", "neg_log", "--x", str(tmp_path / "no.json"), "--y", str(y))[0] == 3


def test_malformed_json_exits_three(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    y = write_operator(tmp_path / "y.json", np.diag([0.5, 0.5]))
    assert run(capsys, "div", "--f", "neg_log", "--x", str(bad), "--y", str(y))[0] == 3


def test_bad_f_spec_exits_three(tmp_path, capsys):
    x = write_operator(tmp_path / "x.json", np.diag([1.0, 0.0]))
    y = write_operator(tmp_path / "y.json", np.diag([0.5, 0.5]))
    assert run(capsys, "div", "--f", "frobnicate:9", "--x", str(x), "--y", str(y))[0] == 3


def test_unknown_flag_exits_three(capsys):
    assert main(["div", "--nonsense"]) == 3
    capsys.readouterr()


def test_non_hermitian_file_exits_three(tmp_path, capsys):
    obj = {
        "dims": [2],
        "labels": ["s"],
        "matrix": [[[0.0, 0.0], [1.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]],
    }
    bad = tmp_path / "nh.json"
    bad.write_text(json.dumps(obj))
    y = write_operator(tmp_path / "y.json", np.diag([0.5, 0.5]))
    assert run(capsys, "div", "--f", "neg_log", "--x", str(bad), "--y", str(y))[0] == 3


# ---- backend subcommand ----


def test_backend_reports_choice(capsys):
    code, out = run(capsys, "backend")
    assert code == 0
    obj = json.loads(out)
    assert "compiled_available" in obj
    assert obj["default_backend"] in ("compiled", "pure")
    assert isinstance(obj["compiled_available"], bool)
