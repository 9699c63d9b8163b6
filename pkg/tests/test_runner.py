import pathlib

import pytest

from nqcalc.errors import UnresolvedReference
from nqcalc.manifest import load_manifest, parse_manifest
from nqcalc.report import ERROR, FAIL, PASS, render
from nqcalc.runner import classify_commands, roundtrip_commands, run

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture
def tangent_line(fixtures_dir):
    return load_manifest(str(fixtures_dir / "tangent_line.nq"))


def statuses(report):
    return {result.name: result.status for result in report.results}


def test_declared_commands_run_in_order(tangent_line):
    report = run(tangent_line, "tangent_line.nq")
    assert [result.name for result in report.results] == ["exact-compat", "tilted-compat", "exact-potential"]
    assert statuses(report) == {"exact-compat": PASS, "tilted-compat": FAIL, "exact-potential": PASS}
    assert report.results[2].extras["potential"] == "v_x"
    assert report.exit_code == 1


def test_only_selects_one_command(tangent_line):
    report = run(tangent_line, only="exact-compat")
    assert [result.name for result in report.results] == ["exact-compat"]
    assert report.passed
    with pytest.raises(UnresolvedReference):
        run(tangent_line, only="missing")


@pytest.mark.parametrize(
    "fixture",
    ["poisson_r2.nq", "so3.nq", "spencer_line.nq", "lcs_plane.nq", "contact_r3.nq", "dirac_plane.nq"],
)
def test_passing_fixtures(fixtures_dir, fixture):
    report = run(load_manifest(str(fixtures_dir / fixture)), fixture)
    assert report.results
    assert report.passed, [str(check) for result in report.results for check in result.checks]


def test_poisson_verdicts(fixtures_dir):
    report = run(load_manifest(str(fixtures_dir / "poisson_r3.nq")))
    assert statuses(report) == {"good": PASS, "bad": FAIL}


def test_spencer_extras(fixtures_dir):
    report = run(load_manifest(str(fixtures_dir / "spencer_line.nq")), only="extract")
    [result] = report.results
    assert ["ell(del(a))", "d(x)"] in [list(line) for line in result.extras["spencer"]]


def test_precondition_failures_become_errors():
    manifest = parse_manifest(
        """
[context]
base = x, y

[lcs flat]
phi x = 1
omega x y = 0

[lcs dual]
phi x = 1

[commands]
degenerate = lcs flat
missing-omega = lcs dual
"""
    )
    report = run(manifest)
    assert statuses(report) == {"degenerate": ERROR, "missing-omega": ERROR}
    assert report.results[0].error.startswith("NotNondegenerate")
    assert report.results[1].error.startswith("ManifestError")
    assert report.exit_code == 1


def test_roundtrip_commands(fixtures_dir):
    manifest = load_manifest(str(fixtures_dir / "spencer_line.nq"))
    commands = roundtrip_commands(manifest)
    assert [command.name for command in commands] == ["extract:omega", "roundtrip:omega", "roundtrip:s"]
    assert run(manifest, commands=commands).passed


def test_classify_commands(fixtures_dir):
    manifest = load_manifest(str(fixtures_dir / "dirac_plane.nq"))
    commands = classify_commands(manifest)
    assert [command.name for command in commands] == [
        "homological:tangent",
        "presymplectic:area",
        "foliation:leaves",
    ]
    assert run(manifest, commands=commands).passed


def test_classify_checks_forms_against_every_algebroid(tangent_line):
    commands = classify_commands(tangent_line)
    assert [command.name for command in commands] == [
        "homological:tangent",
        "compat:tangent:exact",
        "compat:tangent:tilted",
    ]


READABLE = sorted(
    path.name
    for path in FIXTURES.glob("*.nq")
    if path.name not in ("broken_expression.nq", "unresolved.nq")
)


@pytest.mark.parametrize("name", READABLE)
@pytest.mark.parametrize("fmt, suffix", [("text", ".txt"), ("json", ".json")])
def test_reports_match_golden_files(name, fmt, suffix):
    path = FIXTURES / name
    golden = path.with_suffix(suffix).read_text(encoding="utf-8")
    assert render(run(load_manifest(str(path)), name), fmt) == golden
