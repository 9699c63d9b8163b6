import json

import pytest

from nqcalc import __version__
from nqcalc.cli import main
from nqcalc.config import SEED_VARIABLE


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    monkeypatch.delenv(SEED_VARIABLE, raising=False)
    monkeypatch.delenv("NQCALC_LOG_LEVEL", raising=False)


@pytest.fixture
def fixture(fixtures_dir):
    return lambda name: str(fixtures_dir / name)


def test_verify_passing_manifest(capsys, fixture):
    path = fixture("poisson_r2.nq")
    assert main(["verify", path]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == f"nqcalc report for {path}"
    assert "[pass] poisson = poisson P" in out
    assert out.endswith("summary: 1 passed, 0 failed, 0 errors\n")


def test_verify_failing_manifest(capsys, fixture):
    assert main(["verify", fixture("poisson_r3.nq")]) == 1
    assert "[fail] bad = poisson Q" in capsys.readouterr().out


def test_json_output(capsys, fixture):
    assert main(["verify", fixture("poisson_r3.nq"), "--format", "json", "--only", "good"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["passed"]
    assert [command["name"] for command in data["commands"]] == ["good"]


def test_timings(capsys, fixture):
    assert main(["verify", fixture("so3.nq"), "--timings"]) == 0
    assert "[pass] lie = homological so3 (" in capsys.readouterr().out


@pytest.mark.parametrize(
    "mode, name",
    [
        pytest.param("roundtrip", "spencer_line.nq", id="roundtrip"),
        pytest.param("classify", "so3.nq", id="classify"),
        pytest.param("classify", "dirac_plane.nq", id="classify-dirac"),
    ],
)
def test_generated_commands(capsys, fixture, mode, name):
    assert main([mode, fixture(name)]) == 0
    assert "0 failed, 0 errors" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv_tail, message",
    [
        pytest.param(["broken_expression.nq"], "line 5, column 10", id="syntax"),
        pytest.param(["unresolved.nq"], "unresolved reference 'R'", id="reference"),
        pytest.param(["poisson_r2.nq", "--only", "nope"], "unresolved reference 'nope'", id="only"),
        pytest.param(["does_not_exist.nq"], "does_not_exist.nq", id="missing-file"),
    ],
)
def test_unreadable_manifests(capsys, fixture, argv_tail, message):
    argv = ["verify", fixture(argv_tail[0])] + argv_tail[1:]
    assert main(argv) == 2
    captured = capsys.readouterr()
    assert captured.out == ""
    assert message in captured.err


def test_invalid_environment(capsys, monkeypatch, fixture):
    monkeypatch.setenv(SEED_VARIABLE, "many")
    assert main(["verify", fixture("so3.nq")]) == 2
    assert SEED_VARIABLE in capsys.readouterr().err


def test_version(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["--version"])
    assert excinfo.value.code == 0
    assert capsys.readouterr().out.strip() == f"nqcalc {__version__}"


def test_errors_inside_commands_are_reported(capsys, tmp_path):
    path = tmp_path / "dual.nq"
    path.write_text(
        "[context]\nbase = x, y\n\n[lcs dual]\nphi x = 1\n\n[commands]\nmissing-omega = lcs dual\n"
    )
    assert main(["verify", str(path)]) == 1
    captured = capsys.readouterr()
    assert captured.err == ""
    lines = captured.out.splitlines()
    assert lines[1] == "[error] missing-omega = lcs dual"
    assert lines[2].startswith("    error: ManifestError: ")
    assert lines[2].endswith("[lcs dual] has no omega entries")
    assert lines[-1] == "summary: 0 passed, 0 failed, 1 errors"
