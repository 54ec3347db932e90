import json
import subprocess
import sys

from dgmorse.cli import main, run_command
from dgmorse.corpus import fixture_text


def test_validate_clean():
    code, out = run_command(["validate", "circle"])
    assert code == 0 and out.rstrip().endswith("circle: valid")
    code, out = run_command(["validate", "--expectations", "hopf"])
    assert code == 0 and "FAIL" not in out


def test_homology_hopf_fiber():
    code, out = run_command(["homology", "hopf", "--coeff", "fiber"])
    assert code == 0
    assert "H_0 = Z" in out and "H_3 = Z" in out and "H_1 = 0" in out


def test_unsupported_ring_exit_code():
    code, out = run_command(["homology", "torus2", "--coeff", "group-ring"])
    assert code == 4 and "unsupported ring ℤ[ℤ²]" in out


def test_usage_errors():
    for argv in ([], ["bogus"], ["homology", "circle"], ["homology", "circle", "--coeff", "nowhere"],
                 ["validate", "no-such-example"], ["ss", "hopf", "--coeff", "fiber", "--field", "x"]):
        code, out = run_command(argv)
        assert code == 1 and out.startswith("error:"), argv


def test_parse_and_validation_exit_codes(tmp_path):
    bad = tmp_path / "bad.bundle"
    bad.write_text("[bundle x\n")
    code, out = run_command(["validate", str(bad)])
    assert code == 2 and "line 1" in out

    broken = tmp_path / "broken.bundle"
    broken.write_text(fixture_text("circle").replace("entry min min = 1\n", "entry min min = 2\n"))
    code, out = run_command(["validate", str(broken)])
    assert code == 3 and "INVALID" in out


def test_structured_output():
    code, out = run_command(["--format", "structured", "homology", "rp2", "--coeff", "Z-trivial"])
    assert code == 0
    assert json.loads(out)["homology"] == {"0": "Z", "1": "Z/2", "2": "0"}
    code, out = run_command(["--format", "structured", "validate", "klein"])
    assert json.loads(out)["ok"] is True
    code, out = run_command(["--format", "structured", "examples"])
    assert [e["name"] for e in json.loads(out)["examples"]][0] == "circle"


def test_other_commands():
    code, out = run_command(["ss", "hopf", "--coeff", "fiber"])
    assert code == 0 and "E3: (0,0):1, (2,1):1  [stable]" in out
    code, out = run_command(["map-check", "circle", "--kind", "homotopy"])
    assert code == 0
    code, out = run_command(["duality", "klein-pd-pair"])
    assert code == 0 and "isomorphism on homology: true" in out
    code, out = run_command(["examples", "circle"])
    assert out == fixture_text("circle")


def test_output_is_byte_deterministic():
    argv = ["--format", "structured", "ss", "klein", "--coeff", "Z-orientation"]
    assert run_command(argv) == run_command(argv)
    runs = [subprocess.run([sys.executable, "-m", "dgmorse.cli", "homology", "klein", "--coeff", "Z-trivial"],
                           capture_output=True) for _ in range(2)]
    assert runs[0].returncode == 0 and runs[0].stdout == runs[1].stdout != b""


def test_main_routes_errors_to_stderr(capsys):
    assert main(["homology", "torus2", "--coeff", "group-ring"]) == 4
    cap = capsys.readouterr()
    assert cap.out == "" and "unsupported ring" in cap.err
    assert main(["validate", "circle"]) == 0
    cap = capsys.readouterr()
    assert "valid" in cap.out and cap.err == ""
