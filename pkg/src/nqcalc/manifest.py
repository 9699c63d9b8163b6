"""Declarative manifests of graded charts, structures and commands.

A manifest is a sequence of ``[kind name]`` blocks of ``key = value`` lines::

    # comment
    [context]
    base = x, y
    fiber = p_x:1, p_y:1

    [algebroid cotangent]
    anchor p_x y = x
    bracket p_x p_y p_y = 1

    [commands]
    check = homological cotangent

Keys are whitespace separated words, values are expressions in the chart of
the ``[context]`` block.  Blocks are resolved after the whole text is read,
so the order of blocks does not matter.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from nqcalc.algebroid import AlgebroidData
from nqcalc.cartan import VectorValuedForm
from nqcalc.classifiers.foliation import FoliationData
from nqcalc.errors import (
    ExpressionSyntaxError,
    ManifestError,
    NQCalcError,
    UnknownGenerator,
    UnresolvedReference,
)
from nqcalc.expressions import parse_expression
from nqcalc.graded import GradedContext, GradedPoly
from nqcalc.models import one_form, two_form
from nqcalc.multivector import MultivectorField
from nqcalc.spencer import SpencerData, negative_basis

__all__ = [
    "OPERATIONS",
    "Entry",
    "Block",
    "Command",
    "JacobiPair",
    "LcsData",
    "DiracMap",
    "Structure",
    "Manifest",
    "parse_blocks",
    "parse_manifest",
    "load_manifest",
]

logger = logging.getLogger(__name__)

CONTEXT = "context"
COMMANDS = "commands"

# Operation name -> block kinds it takes, in order.
OPERATIONS: Dict[str, Tuple[Tuple[str, ...], ...]] = {
    "homological": (("algebroid",),),
    "extract": (("form",),),
    "spencer": (("spencer", "form"),),
    "roundtrip": (("form", "spencer"),),
    "potential": (("form",),),
    "compat": (("algebroid",), ("form",)),
    "poisson": (("bivector",),),
    "presymplectic": (("dirac-map",),),
    "contact": (("jacobi",),),
    "lcs": (("lcs",),),
    "lcs-nq": (("lcs",),),
    "foliation": (("foliation",),),
    "spencer-operator": (("algebroid",), ("form", "spencer")),
    "kplectic": (("algebroid",), ("form", "spencer")),
}


@dataclass(frozen=True)
class Entry:
    key: Tuple[str, ...]
    value: str
    line: int
    column: int


@dataclass
class Block:
    kind: str
    name: str
    line: int
    entries: List[Entry] = field(default_factory=list)

    def single(self, word: str) -> Optional[Entry]:
        found = [entry for entry in self.entries if entry.key == (word,)]
        return found[0] if found else None

    def require(self, word: str) -> Entry:
        entry = self.single(word)
        if entry is None:
            raise ManifestError(f"[{self.kind} {self.name}] needs a {word!r} entry", self.line)
        return entry

    def keyed(self, word: str, arity: int) -> List[Tuple[Tuple[str, ...], Entry]]:
        """Entries ``word k₁ … k_arity = value`` with their keys."""
        result = []
        for entry in self.entries:
            if entry.key[0] != word:
                continue
            if len(entry.key) != arity + 1:
                raise ManifestError(
                    f"{word!r} takes {arity} key word(s), got {len(entry.key) - 1}",
                    entry.line,
                )
            result.append((entry.key[1:], entry))
        return result


@dataclass(frozen=True)
class Command:
    name: str
    operation: str
    blocks: Tuple[str, ...]
    line: int


@dataclass(frozen=True)
class JacobiPair:
    bivector: MultivectorField
    reeb: MultivectorField


@dataclass(frozen=True)
class LcsData:
    phi: GradedPoly
    omega: Optional[GradedPoly]
    bivector: Optional[MultivectorField]


@dataclass(frozen=True)
class DiracMap:
    algebroid: AlgebroidData
    ell: Mapping[str, Mapping[str, GradedPoly]]
    tangent: Optional[Mapping[str, Mapping[str, GradedPoly]]]


@dataclass(frozen=True)
class Structure:
    kind: str
    name: str
    value: Any
    line: int


@dataclass
class Manifest:
    context: Optional[GradedContext]
    structures: Dict[str, Structure]
    commands: List[Command]

    def get(self, name: str, kinds: Iterable[str], line: int = 0) -> Structure:
        kinds = tuple(kinds)
        structure = self.structures.get(name)
        if structure is None or structure.kind not in kinds:
            raise UnresolvedReference(name, line)
        return structure

    def of_kind(self, *kinds: str) -> List[Structure]:
        return [s for s in self.structures.values() if s.kind in kinds]


def _split_header(text: str, line: int) -> Tuple[str, str]:
    words = text.strip()[1:-1].split()
    if not words:
        raise ManifestError("empty block header", line, 1)
    if words[0] in (CONTEXT, COMMANDS):
        if len(words) != 1:
            raise ManifestError(f"[{words[0]}] takes no name", line, 1)
        return words[0], ""
    if len(words) != 2:
        raise ManifestError("block header must be '[kind name]'", line, 1)
    return words[0], words[1]


def parse_blocks(text: str) -> List[Block]:
    """Split manifest text into blocks of raw entries."""
    blocks: List[Block] = []
    current: Optional[Block] = None
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].rstrip()
        if not content.strip():
            continue
        if content.lstrip().startswith("["):
            if not content.strip().endswith("]"):
                raise ManifestError("unterminated block header", number, len(content) + 1)
            kind, name = _split_header(content, number)
            current = Block(kind, name, number)
            blocks.append(current)
            continue
        if current is None:
            raise ManifestError("entry outside of a block", number, 1)
        if "=" not in content:
            raise ManifestError("expected 'key = value'", number, 1)
        left, right = content.split("=", 1)
        key = tuple(left.split())
        if not key:
            raise ManifestError("missing key", number, 1)
        offset = len(content) - len(right) + (len(right) - len(right.lstrip()))
        current.entries.append(Entry(key, right.strip(), number, offset + 1))
    return blocks


def _names(entry: Entry) -> List[str]:
    return [name.strip() for name in entry.value.split(",") if name.strip()]


class _Resolver:
    __slots__ = "context", "base", "structures"

    def __init__(self, context: Optional[GradedContext]) -> None:
        self.context = context
        self.base = GradedContext(context.base_coords) if context is not None else None
        self.structures: Dict[str, Structure] = {}

    def expression(self, entry: Entry, context: Optional[GradedContext] = None) -> GradedPoly:
        context = context or self.context
        if context is None:
            raise ManifestError("expressions need a [context] block", entry.line, entry.column)
        try:
            return parse_expression(entry.value, context, entry.line, entry.column)
        except UnknownGenerator as error:
            raise UnresolvedReference(error.name, entry.line, entry.column) from None

    def base_expression(self, entry: Entry) -> GradedPoly:
        return self.expression(entry, self.base)

    def require_base(self, name: str, entry: Entry) -> None:
        if self.context is None or name not in self.context.base_coords:
            raise UnresolvedReference(name, entry.line, entry.column)

    def structure(self, name: str, kind: str, entry: Entry) -> Any:
        found = self.structures.get(name)
        if found is None or found.kind != kind:
            raise UnresolvedReference(name, entry.line, entry.column)
        return found.value

    # Block builders ----------------------------------------------------------

    def algebroid(self, block: Block) -> AlgebroidData:
        return AlgebroidData(
            self.context,
            {key: self.expression(entry) for key, entry in block.keyed("anchor", 2)},
            {key: self.expression(entry) for key, entry in block.keyed("bracket", 3)},
            {key: self.expression(entry) for key, entry in block.keyed("rep", 3)},
        )

    def form(self, block: Block) -> VectorValuedForm:
        context = self.context
        components = {}
        for entry in block.entries:
            if len(entry.key) != 1 or entry.key[0] not in context.components:
                raise UnresolvedReference(" ".join(entry.key), entry.line, 1)
            components[entry.key[0]] = self.expression(entry)
        return VectorValuedForm(context, components)

    def spencer(self, block: Block) -> SpencerData:
        context = self.context
        basis = negative_basis(context)
        order = _integer(block.require("order"))
        degree = _integer(block.require("degree"))
        tables: Dict[str, Dict[str, Dict[str, GradedPoly]]] = {"D": {}, "ell": {}}
        for entry in block.entries:
            word = entry.key[0]
            if word in ("order", "degree"):
                continue
            if word not in tables or len(entry.key) not in (2, 3):
                raise ManifestError(f"unexpected entry {' '.join(entry.key)!r}", entry.line, 1)
            label = entry.key[1]
            if label not in basis:
                raise UnresolvedReference(label, entry.line, 1)
            component = entry.key[2] if len(entry.key) == 3 else context.components[0]
            if component not in context.components:
                raise UnresolvedReference(component, entry.line, 1)
            tables[word].setdefault(label, {})[component] = self.expression(entry)
        return SpencerData(
            context,
            order,
            degree,
            {label: VectorValuedForm(context, row) for label, row in tables["D"].items()},
            {label: VectorValuedForm(context, row) for label, row in tables["ell"].items()},
        )

    def _multivector(self, items: Sequence[Tuple[Tuple[str, ...], Entry]], degree: int) -> MultivectorField:
        components = {}
        for key, entry in items:
            for x in key:
                self.require_base(x, entry)
            components[key] = self.base_expression(entry)
        return MultivectorField.from_components(self.context.base_coords, components, degree)

    def bivector(self, block: Block) -> MultivectorField:
        return self._multivector([(entry.key, entry) for entry in block.entries if _arity(entry, 2)], 2)

    def vector(self, block: Block) -> MultivectorField:
        return self._multivector([(entry.key, entry) for entry in block.entries if _arity(entry, 1)], 1)

    def jacobi(self, block: Block) -> JacobiPair:
        return JacobiPair(
            self._multivector(block.keyed("lambda", 2), 2),
            self._multivector(block.keyed("reeb", 1), 1),
        )

    def lcs(self, block: Block) -> LcsData:
        phi = {}
        for (x,), entry in block.keyed("phi", 1):
            self.require_base(x, entry)
            phi[x] = self.base_expression(entry)
        omega = {}
        for (x, y), entry in block.keyed("omega", 2):
            self.require_base(x, entry)
            self.require_base(y, entry)
            omega[(x, y)] = self.base_expression(entry)
        bivector = block.keyed("bivector", 2)
        return LcsData(
            one_form(self.base, phi),
            two_form(self.base, omega) if omega else None,
            self._multivector(bivector, 2) if bivector else None,
        )

    def _frame_table(self, items: Sequence[Tuple[Tuple[str, ...], Entry]]) -> Dict[str, Dict[str, GradedPoly]]:
        table: Dict[str, Dict[str, GradedPoly]] = {}
        for (a, x), entry in items:
            self.require_base(x, entry)
            table.setdefault(a, {})[x] = self.expression(entry)
        return table

    def dirac_map(self, block: Block) -> DiracMap:
        target = block.require("algebroid")
        algebroid = self.structure(target.value, "algebroid", target)
        tangent = block.keyed("tangent", 2)
        return DiracMap(
            algebroid,
            self._frame_table(block.keyed("ell", 2)),
            self._frame_table(tangent) if tangent else None,
        )

    def foliation(self, block: Block) -> FoliationData:
        target = block.require("algebroid")
        algebroid = self.structure(target.value, "algebroid", target)
        sub = block.single("sub")
        connection = {}
        for (x, a, b), entry in block.keyed("connection", 3):
            self.require_base(x, entry)
            connection[(x, a, b)] = self.expression(entry)
        induced_entries = block.keyed("induced", 3)
        induced = {key: self.expression(entry) for key, entry in induced_entries}
        return FoliationData(
            algebroid,
            _names(sub) if sub is not None else (),
            connection,
            induced if induced_entries else None,
        )


def _arity(entry: Entry, arity: int) -> bool:
    if len(entry.key) != arity:
        raise ManifestError(f"expected {arity} coordinate name(s) as key", entry.line, 1)
    return True


def _integer(entry: Entry) -> int:
    try:
        return int(entry.value)
    except ValueError:
        raise ManifestError(f"expected an integer, got {entry.value!r}", entry.line, entry.column) from None


def _context(block: Block) -> GradedContext:
    base = block.single("base")
    fibers = []
    fiber = block.single("fiber")
    for item in _names(fiber) if fiber is not None else []:
        name, _, degree = item.partition(":")
        try:
            fibers.append((name.strip(), int(degree) if degree else 1))
        except ValueError:
            raise ManifestError(f"bad fiber degree in {item!r}", fiber.line, fiber.column) from None
    frame = block.single("frame")
    plain = GradedContext(_names(base) if base is not None else (), fibers)
    rows: Dict[Tuple[str, str], Dict[str, GradedPoly]] = {}
    for entry in block.entries:
        if entry.key[0] in ("base", "fiber", "frame"):
            continue
        if entry.key[0] != "connection" or len(entry.key) != 4:
            raise ManifestError(f"unexpected entry {' '.join(entry.key)!r}", entry.line, 1)
        _, x, alpha, beta = entry.key
        try:
            value = parse_expression(entry.value, plain, entry.line, entry.column)
        except UnknownGenerator as error:
            raise UnresolvedReference(error.name, entry.line, entry.column) from None
        rows.setdefault((x, alpha), {})[beta] = value
    return GradedContext(plain.base_coords, fibers, _names(frame) if frame is not None else (), rows)


_ORDER = ("algebroid", "form", "spencer", "bivector", "vector", "jacobi", "lcs", "dirac-map", "foliation")


def parse_manifest(text: str) -> Manifest:
    """Resolve every block and command of a manifest.

    Raises ExpressionSyntaxError, UnresolvedReference or ManifestError with
    the location of the offending entry.
    """
    blocks = parse_blocks(text)
    context_blocks = [block for block in blocks if block.kind == CONTEXT]
    if len(context_blocks) > 1:
        raise ManifestError("more than one [context] block", context_blocks[1].line, 1)
    resolver = _Resolver(_wrap(context_blocks[0], _context) if context_blocks else None)

    builders: Dict[str, Callable[[Block], Any]] = {
        "algebroid": resolver.algebroid,
        "form": resolver.form,
        "spencer": resolver.spencer,
        "bivector": resolver.bivector,
        "vector": resolver.vector,
        "jacobi": resolver.jacobi,
        "lcs": resolver.lcs,
        "dirac-map": resolver.dirac_map,
        "foliation": resolver.foliation,
    }
    for block in blocks:
        if block.kind not in builders and block.kind not in (CONTEXT, COMMANDS):
            raise ManifestError(f"unknown block kind {block.kind!r}", block.line, 2)
        if block.kind in builders:
            if resolver.context is None:
                raise ManifestError(f"[{block.kind} {block.name}] needs a [context] block", block.line, 1)
            if block.name in resolver.structures:
                raise ManifestError(f"duplicate block name {block.name!r}", block.line, 1)
            resolver.structures[block.name] = Structure(block.kind, block.name, None, block.line)

    for kind in _ORDER:
        for block in blocks:
            if block.kind == kind:
                value = _wrap(block, builders[kind])
                resolver.structures[block.name] = Structure(kind, block.name, value, block.line)
                logger.debug("Resolved [%s %s]", kind, block.name)

    commands = []
    for block in blocks:
        if block.kind == COMMANDS:
            commands.extend(_command(entry, resolver.structures) for entry in block.entries)
    names = [command.name for command in commands]
    for command in commands:
        if names.count(command.name) > 1:
            raise ManifestError(f"duplicate command {command.name!r}", command.line, 1)
    return Manifest(resolver.context, resolver.structures, commands)


def _wrap(block: Block, builder: Callable[[Block], Any]) -> Any:
    try:
        return builder(block)
    except (ManifestError, ExpressionSyntaxError):
        raise
    except NQCalcError as error:
        label = f"[{block.kind} {block.name}]" if block.name else f"[{block.kind}]"
        raise ManifestError(f"{label} {error}", block.line, 1) from error


def _command(entry: Entry, structures: Mapping[str, Structure]) -> Command:
    if len(entry.key) != 1:
        raise ManifestError("command names are single words", entry.line, 1)
    words = entry.value.split()
    if not words:
        raise ManifestError("empty command", entry.line, entry.column)
    operation, names = words[0], tuple(words[1:])
    if operation not in OPERATIONS:
        raise UnresolvedReference(operation, entry.line, entry.column)
    kinds = OPERATIONS[operation]
    if len(names) != len(kinds):
        raise ManifestError(
            f"{operation!r} takes {len(kinds)} block(s), got {len(names)}", entry.line, entry.column
        )
    for name, allowed in zip(names, kinds):
        found = structures.get(name)
        if found is None or found.kind not in allowed:
            raise UnresolvedReference(name, entry.line, entry.value.find(name) + entry.column)
    return Command(entry.key[0], operation, names, entry.line)


def load_manifest(path: str) -> Manifest:
    with open(path, encoding="utf-8") as handle:
        text = handle.read()
    logger.debug("Loaded %s (%d bytes)", path, len(text))
    return parse_manifest(text)
