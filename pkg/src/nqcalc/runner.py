"""Execution of manifest commands.

Each operation maps resolved blocks to a report whose checks become one
:class:`~nqcalc.report.CommandResult`.  A precondition violation raised by
one command is recorded as an ``error`` entry and the run continues.
"""
import logging
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from nqcalc.algebroid import (
    AlgebroidData,
    algebroid_axioms,
    build_homological_derivation,
    build_homological_vf,
    check_homological,
)
from nqcalc.cartan import Derivation, VectorValuedForm, de_rham, potential
from nqcalc.checks import CheckResult, CheckSuite, check_zero
from nqcalc.classifiers.compat import check_compat
from nqcalc.classifiers.contact import check_contact_nq
from nqcalc.classifiers.dirac import check_presymplectic_nq
from nqcalc.classifiers.foliation import check_im_foliation
from nqcalc.classifiers.higher import LITERATURE_NOTE, check_im_kplectic, check_spencer_operator
from nqcalc.classifiers.lcs import check_lcs, check_lcs_nq
from nqcalc.classifiers.poisson import check_poisson_nq
from nqcalc.errors import ManifestError, NQCalcError, UnresolvedReference
from nqcalc.manifest import Command, Manifest, Structure
from nqcalc.report import ERROR, FAIL, PASS, CommandResult, Report
from nqcalc.spencer import (
    SpencerData,
    extract_spencer,
    negative_basis,
    reconstruct_form,
    validate_spencer,
)

__all__ = ["Checks", "homological_of", "run", "run_command", "roundtrip_commands", "classify_commands"]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Checks(CheckSuite):
    """An ad hoc list of checks with extra report lines."""

    checks: Tuple[CheckResult, ...]
    extras: Dict[str, Any] = field(default_factory=dict)

    def all_checks(self) -> Sequence[CheckResult]:
        return self.checks

    def to_dict(self) -> Dict[str, Any]:
        result = super().to_dict()
        result.update(self.extras)
        return result


def homological_of(algebroid: AlgebroidData) -> Derivation:
    """ℚ of an algebroid, a derivation of E when it carries a representation."""
    if algebroid.has_representation:
        return build_homological_derivation(algebroid)
    return build_homological_vf(algebroid)


def _spencer_lines(data: SpencerData) -> List[Tuple[str, str]]:
    lines = []
    for label, d_value, ell_value in data.tabulate():
        lines.append((f"D({label})", str(d_value)))
        lines.append((f"ell({label})", str(ell_value)))
    return lines


def _as_spencer(structure: Structure) -> SpencerData:
    if structure.kind == "form":
        return extract_spencer(structure.value)
    return structure.value


def _homological(algebroid: AlgebroidData) -> CheckSuite:
    report = check_homological(homological_of(algebroid))
    axioms = algebroid_axioms(algebroid)
    if report.passed == axioms.passed:
        agreement = CheckResult.ok("agreement")
    else:
        agreement = CheckResult.failure(
            "agreement", f"[Q,Q]=0 is {report.passed}, axioms hold is {axioms.passed}"
        )
    return Checks((report.check_result,) + tuple(axioms.all_checks()) + (agreement,))


def _extract(form: VectorValuedForm) -> CheckSuite:
    data = extract_spencer(form)
    report = validate_spencer(data)
    return Checks(tuple(report.all_checks()), {"spencer": _spencer_lines(data)})


def _spencer(structure: Structure) -> CheckSuite:
    data = _as_spencer(structure)
    report = validate_spencer(data)
    checks = tuple(report.all_checks())
    if report.passed:
        rebuilt = extract_spencer(reconstruct_form(data), data.order, data.degree)
        if rebuilt == data:
            checks += (CheckResult.ok("reconstruct"),)
        else:
            checks += (CheckResult.failure("reconstruct", "extract(reconstruct(s)) differs from s"),)
    return Checks(checks, {"note": LITERATURE_NOTE})


def _roundtrip(structure: Structure) -> CheckSuite:
    if structure.kind == "form":
        form = structure.value
        rebuilt = reconstruct_form(extract_spencer(form))
        check = check_zero("roundtrip", "reconstruct(extract(omega)) - omega", rebuilt - form)
    else:
        data = structure.value
        rebuilt_data = extract_spencer(reconstruct_form(data), data.order, data.degree)
        if rebuilt_data == data:
            check = CheckResult.ok("roundtrip")
        else:
            check = CheckResult.failure("roundtrip", "extract(reconstruct(s)) differs from s")
    return Checks((check,))


def _potential(form: VectorValuedForm) -> CheckSuite:
    closed = check_zero("closed", "d(omega)", de_rham(form))
    if not closed.passed or form.is_zero():
        return Checks((closed,))
    primitive = potential(form, form.homogeneous_bidegree().internal_degree)
    exact = check_zero("primitive", "d(theta) - omega", de_rham(primitive) - form)
    return Checks((closed, exact), {"potential": str(primitive)})


def _frame_values(algebroid: AlgebroidData, data: SpencerData) -> Tuple[Dict[str, VectorValuedForm], Dict[str, VectorValuedForm]]:
    basis = negative_basis(data.context)
    D = {}
    ell = {}
    for a in algebroid.frame:
        label = basis.coordinate_field(a).label
        D[a] = data.D(label)
        ell[a] = data.ell(label)
    return D, ell


def _spencer_operator(algebroid: AlgebroidData, structure: Structure) -> CheckSuite:
    data = _as_spencer(structure)
    D, ell = _frame_values(algebroid, data)
    return check_spencer_operator(algebroid, D, ell, data.order)


def _kplectic(algebroid: AlgebroidData, structure: Structure) -> CheckSuite:
    data = _as_spencer(structure)
    _, ell = _frame_values(algebroid, data)
    return check_im_kplectic(algebroid, {a: value.as_scalar() for a, value in ell.items()}, data.order - 1)


def _lcs(structure: Structure) -> CheckSuite:
    lcs = structure.value
    if lcs.omega is None:
        raise ManifestError(f"[lcs {structure.name}] has no omega entries", structure.line)
    return check_lcs(lcs.phi, lcs.omega)


def _lcs_nq(structure: Structure) -> CheckSuite:
    lcs = structure.value
    if lcs.bivector is None:
        raise ManifestError(f"[lcs {structure.name}] has no bivector entries", structure.line)
    return check_lcs_nq(lcs.phi, lcs.bivector)


Operation = Callable[..., CheckSuite]

_OPERATIONS: Dict[str, Operation] = {
    "homological": lambda s: _homological(s.value),
    "extract": lambda s: _extract(s.value),
    "spencer": _spencer,
    "roundtrip": _roundtrip,
    "potential": lambda s: _potential(s.value),
    "compat": lambda a, f: check_compat(homological_of(a.value), f.value, require_homological=False),
    "poisson": lambda s: check_poisson_nq(s.value),
    "presymplectic": lambda s: check_presymplectic_nq(s.value.algebroid, s.value.ell, s.value.tangent),
    "contact": lambda s: check_contact_nq(s.value.bivector, s.value.reeb),
    "lcs": _lcs,
    "lcs-nq": _lcs_nq,
    "foliation": lambda s: check_im_foliation(s.value.algebroid, s.value),
    "spencer-operator": lambda a, s: _spencer_operator(a.value, s),
    "kplectic": lambda a, s: _kplectic(a.value, s),
}


def run_command(manifest: Manifest, command: Command) -> CommandResult:
    structures = [manifest.structures[name] for name in command.blocks]
    started = time.perf_counter()
    try:
        suite = _OPERATIONS[command.operation](*structures)
    except NQCalcError as error:
        elapsed = time.perf_counter() - started
        logger.info("%s: error %s", command.name, error)
        return CommandResult(
            command.name,
            command.operation,
            command.blocks,
            ERROR,
            error=f"{type(error).__name__}: {error}",
            elapsed=elapsed,
        )
    elapsed = time.perf_counter() - started
    extras = {key: value for key, value in suite.to_dict().items() if key not in ("passed", "checks")}
    status = PASS if suite.passed else FAIL
    logger.info("%s: %s in %.3fs", command.name, status, elapsed)
    return CommandResult(
        command.name,
        command.operation,
        command.blocks,
        status,
        tuple(suite.all_checks()),
        extras,
        elapsed=elapsed,
    )


def roundtrip_commands(manifest: Manifest) -> List[Command]:
    """``extract``/``roundtrip`` for every form and spencer block, ``homological`` for algebroids."""
    commands = []
    for structure in manifest.structures.values():
        if structure.kind == "form":
            commands.append(Command(f"extract:{structure.name}", "extract", (structure.name,), structure.line))
            commands.append(Command(f"roundtrip:{structure.name}", "roundtrip", (structure.name,), structure.line))
        elif structure.kind == "spencer":
            commands.append(Command(f"roundtrip:{structure.name}", "roundtrip", (structure.name,), structure.line))
        elif structure.kind == "algebroid":
            commands.append(Command(f"homological:{structure.name}", "homological", (structure.name,), structure.line))
    return commands


_CLASSIFIERS = {
    "algebroid": "homological",
    "bivector": "poisson",
    "dirac-map": "presymplectic",
    "jacobi": "contact",
    "foliation": "foliation",
    "spencer": "spencer",
}


def classify_commands(manifest: Manifest) -> List[Command]:
    """The classifier of every structure block; forms are checked against every algebroid."""
    algebroids = manifest.of_kind("algebroid")
    commands = []
    for structure in manifest.structures.values():
        name = structure.name
        if structure.kind in _CLASSIFIERS:
            operation = _CLASSIFIERS[structure.kind]
            commands.append(Command(f"{operation}:{name}", operation, (name,), structure.line))
        elif structure.kind == "lcs":
            if structure.value.omega is not None:
                commands.append(Command(f"lcs:{name}", "lcs", (name,), structure.line))
            if structure.value.bivector is not None:
                commands.append(Command(f"lcs-nq:{name}", "lcs-nq", (name,), structure.line))
        elif structure.kind == "form":
            for algebroid in algebroids:
                commands.append(
                    Command(
                        f"compat:{algebroid.name}:{name}",
                        "compat",
                        (algebroid.name, name),
                        structure.line,
                    )
                )
    return commands


def run(
    manifest: Manifest,
    source: str = "<manifest>",
    only: Optional[str] = None,
    commands: Optional[Sequence[Command]] = None,
) -> Report:
    """Run the declared commands (or ``commands``) in order.

    ``only`` restricts the run to one command and raises UnresolvedReference
    when no command has that name.
    """
    selected = list(manifest.commands if commands is None else commands)
    if only is not None:
        selected = [command for command in selected if command.name == only]
        if not selected:
            raise UnresolvedReference(only)
    report = Report(source)
    for command in selected:
        logger.debug("Running %s = %s %s", command.name, command.operation, " ".join(command.blocks))
        report.results.append(run_command(manifest, command))
    logger.info(
        "%s: %d passed, %d failed, %d errors",
        source,
        report.count(PASS),
        report.count(FAIL),
        report.count(ERROR),
    )
    return report
