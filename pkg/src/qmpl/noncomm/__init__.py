"""q-commuting variables, ordered q-MPL series and the zeta_q word algebra."""
from .closure import OrderedQMPL, candidate_basis, solve_exact, verify_ordered_closure
from .ordering import NormalMonomial, concat_exponent, inversion_count, normalize_monomial
from .ratfunc import Q, RatFunc
from .series import FormalSeries, multiply_series, ordered_qmpl_series
from .zeta_words import ZetaWord, exchange_exponent, zeta_word_normal_form, zeta_word_product

__all__ = [
    "FormalSeries",
    "NormalMonomial",
    "OrderedQMPL",
    "Q",
    "RatFunc",
    "ZetaWord",
    "candidate_basis",
    "concat_exponent",
    "exchange_exponent",
    "inversion_count",
    "multiply_series",
    "normalize_monomial",
    "ordered_qmpl_series",
    "solve_exact",
    "verify_ordered_closure",
    "zeta_word_normal_form",
    "zeta_word_product",
]
