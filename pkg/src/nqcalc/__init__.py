__version_info__ = 0, 1, 0
__version__ = ".".join(map(str, __version_info__))

from nqcalc.algebroid import AlgebroidData, build_homological_derivation, build_homological_vf, check_homological
from nqcalc.cartan import Derivation, VectorValuedForm, commutator, de_rham, insert, lie_derive
from nqcalc.errors import NQCalcError
from nqcalc.expressions import parse_expression
from nqcalc.graded import GradedContext, GradedPoly
from nqcalc.manifest import parse_manifest
from nqcalc.multivector import MultivectorField, schouten_bracket
from nqcalc.runner import run
from nqcalc.spencer import SpencerData, extract_spencer, reconstruct_form

__all__ = [
    "AlgebroidData",
    "build_homological_derivation",
    "build_homological_vf",
    "check_homological",
    "Derivation",
    "VectorValuedForm",
    "commutator",
    "de_rham",
    "insert",
    "lie_derive",
    "NQCalcError",
    "parse_expression",
    "GradedContext",
    "GradedPoly",
    "parse_manifest",
    "MultivectorField",
    "schouten_bracket",
    "run",
    "SpencerData",
    "extract_spencer",
    "reconstruct_form",
]
