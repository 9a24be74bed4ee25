"""Congruences for Hilbert class polynomials under the U(p) operator.

Submodules: ``arith`` (finite fields, big fixed point), ``qseries`` (j and
Hecke operators), ``classfield`` (forms, class numbers), ``hilbert``
(H_D), ``supersingular`` (S_p), ``congruence`` (certificates and surveys),
``koike`` (delta_p), ``quaternion`` (maximal orders and theta series) and
``cli``.
"""

from .classfield import class_number, hurwitz_h
from .congruence import certify_congruence, multiplicity_report, up_reduction
from .hilbert import hilbert_class_poly
from .qseries import QSeries, j_series
from .supersingular import ss_polynomials

__all__ = [
    "QSeries",
    "j_series",
    "class_number",
    "hurwitz_h",
    "hilbert_class_poly",
    "ss_polynomials",
    "multiplicity_report",
    "up_reduction",
    "certify_congruence",
]

__version__ = "0.1.0"
