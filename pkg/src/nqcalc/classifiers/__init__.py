from nqcalc.classifiers.compat import CompatReport, check_compat, closed_form_from_ell, closed_spencer_data
from nqcalc.classifiers.contact import ContactReport, check_contact_nq
from nqcalc.classifiers.dirac import DiracMorphism, PresymplecticReport, check_presymplectic_nq
from nqcalc.classifiers.foliation import FoliationData, FoliationReport, check_im_foliation
from nqcalc.classifiers.higher import (
    KplecticReport,
    SpencerOperatorReport,
    check_im_kplectic,
    check_spencer_operator,
)
from nqcalc.classifiers.lcs import LcsNqReport, LcsReport, check_lcs, check_lcs_nq, lcs_to_jacobi
from nqcalc.classifiers.poisson import PoissonReport, check_poisson_nq, nq_to_poisson, poisson_to_nq

__all__ = [
    "CompatReport",
    "check_compat",
    "closed_form_from_ell",
    "closed_spencer_data",
    "ContactReport",
    "check_contact_nq",
    "DiracMorphism",
    "PresymplecticReport",
    "check_presymplectic_nq",
    "FoliationData",
    "FoliationReport",
    "check_im_foliation",
    "KplecticReport",
    "SpencerOperatorReport",
    "check_im_kplectic",
    "check_spencer_operator",
    "LcsNqReport",
    "LcsReport",
    "check_lcs",
    "check_lcs_nq",
    "lcs_to_jacobi",
    "PoissonReport",
    "check_poisson_nq",
    "nq_to_poisson",
    "poisson_to_nq",
]
