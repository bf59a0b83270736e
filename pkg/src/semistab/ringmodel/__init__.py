"""Ring-side models: relative binomial ideals, binomial factorization and
truncated quotient series rings with the lemma verifiers."""
from .binomial import (
    Binomial,
    BinomialFactorization,
    Pure,
    RelativeBinomialIdeal,
    decompose_binomial,
    relative_binomial_ideal,
    semistable_ring_test,
)
from .series import DEFAULT_TRUNCATION, QuotientSeriesRing, SeriesElement, invert_unit

__all__ = [
    "Binomial",
    "BinomialFactorization",
    "DEFAULT_TRUNCATION",
    "Pure",
    "QuotientSeriesRing",
    "RelativeBinomialIdeal",
    "SeriesElement",
    "decompose_binomial",
    "invert_unit",
    "relative_binomial_ideal",
    "semistable_ring_test",
]
