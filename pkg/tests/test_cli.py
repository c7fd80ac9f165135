import json
import subprocess
import sys

import numpy as np
import pytest

from beyondq import jsonio
from beyondq.cli import main
from beyondq.cones import phi_plus, rho_max


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if code == 0 and out else None), err


@pytest.fixture
def rho_max_file(tmp_path, capsys):
    path = tmp_path / "rho_max.json"
    assert main(["gen", "rho-max", "-o", str(path)]) == 0
    return path


def write_state(path, x, dims=(2, 2)):
    path.write_text(jsonio.dumps(jsonio.state_to_json(x, dims)))
    return path


def test_gen_rho_max_matches_definition(rho_max_file):
    x, dims = jsonio.state_from_json(json.loads(rho_max_file.read_text()))
    assert dims == (2, 2)
    assert np.array_equal(x, rho_max())


@pytest.mark.parametrize("kind", ["rho-max", "phi", "random-bq-pure"])
def test_gen_classify_round_trip(tmp_path, capsys, kind):
    path = tmp_path / f"{kind}.json"
    assert main(["gen", kind, "--seed", "3", "-o", str(path)]) == 0
    code, out, _ = run(capsys, "classify", "-i", str(path))
    assert code == 0
    expected = {"rho-max": "BeyondQuantum", "phi": "EntangledQuantum", "random-bq-pure": "BeyondQuantum"}
    assert out["class"] == expected[kind]
    # re-serializing gives bit-identical matrices
    x, dims = jsonio.state_from_json(json.loads(path.read_text()))
    y, _ = jsonio.state_from_json(json.loads(jsonio.dumps(jsonio.state_to_json(x, dims))))
    assert np.array_equal(x, y)


def test_gen_depolarize(tmp_path, capsys, rho_max_file):
    path = tmp_path / "dep.json"
    assert main(["gen", "depolarize", "-i", str(rho_max_file), "--visibility", "0.5", "-o", str(path)]) == 0
    code, out, _ = run(capsys, "classify", "-i", str(path))
    assert code == 0 and out["class"] == "BeyondQuantum"
    with pytest.raises(SystemExit) as exc:
        main(["gen", "depolarize"])
    assert exc.value.code == 2


def test_classify_rho_max(capsys, rho_max_file):
    code, out, _ = run(capsys, "classify", "-i", str(rho_max_file))
    assert code == 0
    assert out["class"] == "BeyondQuantum"
    assert abs(out["lambda_min"] + 0.5) < 1e-12


def test_pauli_scan(capsys, rho_max_file):
    for method in ("closed-form", "search"):
        code, out, _ = run(capsys, "pauli-scan", "-i", str(rho_max_file), "--method", method)
        assert code == 0
        assert abs(out["max_value"] - 3) < 1e-9
        assert abs(out["a_prime"] - 3) < 1e-12
        assert np.allclose(out["T"], np.eye(3))


def test_witness_build_and_eval(tmp_path, capsys, rho_max_file):
    wpath = tmp_path / "w.json"
    assert main(["witness", "build", "-i", str(rho_max_file), "-o", str(wpath)]) == 0
    w = json.loads(wpath.read_text())
    assert abs(w["alpha"] - 0.5) < 1e-12 and abs(w["target_value"] - 1) < 1e-12
    assert len(w["terms"]) == 4
    code, out, _ = run(capsys, "witness", "eval", "-i", str(rho_max_file), "--witness", str(wpath))
    assert code == 0 and abs(out["value"] - 1) < 1e-12 and out["exceeds_alpha"]
    mixed = write_state(tmp_path / "mixed.json", np.eye(4) / 4)
    code, out, _ = run(capsys, "witness", "eval", "-i", str(mixed), "--witness", str(wpath))
    assert abs(out["value"] - 0.25) < 1e-12 and not out["exceeds_alpha"]


def test_witness_build_psd_is_domain_error(tmp_path, capsys):
    path = write_state(tmp_path / "phi.json", phi_plus())
    code, _, err = run(capsys, "witness", "build", "-i", str(path))
    assert code == 1 and "PSD" in err


def test_di_simulate(tmp_path, capsys, rho_max_file):
    code, out, _ = run(capsys, "di-simulate", "-i", str(rho_max_file))
    assert code == 0 and out["max_deviation"] <= 1e-12
    sigma, dims = jsonio.state_from_json(out["sigma"])
    assert np.allclose(sigma, phi_plus())
    povms = tmp_path / "povms.json"
    povms.write_text(json.dumps([[jsonio.matrix_to_json(np.diag([1.0, 0])), jsonio.matrix_to_json(np.diag([0, 1.0]))]]))
    code, out, _ = run(capsys, "di-simulate", "-i", str(rho_max_file), "--povms-a", str(povms), "--povms-b", str(povms))
    assert code == 0 and len(out["bob_povms"]) == 1


def test_protocol_run(tmp_path, capsys, rho_max_file):
    code, out, _ = run(capsys, "protocol", "run", "--state", str(rho_max_file), "--n", "500")
    assert code == 0
    assert out["empirical_mean"] == 3 and out["std_error"] == 0 and out["decision"]
    assert out["seed"] == 0
    code, out, _ = run(
        capsys, "protocol", "run", "-i", str(rho_max_file), "--n", "1000", "--trials", "20", "--visibility", "0.25"
    )
    assert code == 0 and out["detection_power"] == 0 and not out["decision"]
    wpath = tmp_path / "w.json"
    assert main(["witness", "build", "-i", str(rho_max_file), "-o", str(wpath)]) == 0
    code, out, _ = run(capsys, "protocol", "run", "-i", str(rho_max_file), "--witness", str(wpath), "--n", "100")
    assert code == 0 and out["m"] == 4 and abs(out["empirical_mean"] - 1) < 1e-12


def test_protocol_is_deterministic(capsys, rho_max_file):
    args = ["protocol", "run", "-i", str(rho_max_file), "--visibility", "0.4", "--seed", "7"]
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_exit_codes(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["classify", "-i", str(tmp_path / "missing.json")])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2

    bad = tmp_path / "bad.json"
    bad.write_text('{"dim": 4, "re": [[1, 0]')
    code, _, err = run(capsys, "classify", "-i", str(bad))
    assert code == 1 and "line" in err

    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"dim": 2, "re": [[1, 0], [0, "x"]], "im": [[0, 0], [0, 0]]}))
    code, _, err = run(capsys, "classify", "-i", str(wrong))
    assert code == 1 and "re[1][1]" in err

    trace = write_state(tmp_path / "trace.json", np.eye(4))
    code, _, err = run(capsys, "classify", "-i", str(trace))
    assert code == 1 and "trace" in err


def test_stdin_pipe():
    gen = subprocess.run(
        [sys.executable, "-m", "beyondq", "gen", "random-bq-pure", "--seed", "11"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(gen.stdout)["seed"] == 11
    cls = subprocess.run(
        [sys.executable, "-m", "beyondq", "classify", "-i", "-"],
        input=gen.stdout, capture_output=True, text=True,
    )
    assert cls.returncode == 0
    assert json.loads(cls.stdout)["class"] == "BeyondQuantum"
