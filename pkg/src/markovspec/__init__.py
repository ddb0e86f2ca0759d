"""Exact and rigorous tools for approximation spectra of real numbers."""
from .box import BoxEigenvalue, PUEnergy, eigenvalues, pu_spectrum, singular_scan
from .cantor import CantorSpec, extrema, hausdorff_bounds, ifs_cover, sumset_interval
from .contfrac import ContinuedFraction, Convergent, compare_alternate, convergents, expand, parse_cf
from .exact import Interval, IntMatrix2, QuadraticSurd, enclose, to_decimal
from .spectrum import (
    approx_sequence,
    euler_cf,
    legendre_filter,
    markov_constant,
    quad_accumulation_set,
    secondary_convergent_terms,
)
from .words import WordGenerator, WordKind, occurrence_check, target_hit_scan, word_to_alpha

__all__ = [
    "BoxEigenvalue", "CantorSpec", "ContinuedFraction", "Convergent", "IntMatrix2", "Interval",
    "PUEnergy", "QuadraticSurd", "WordGenerator", "WordKind", "approx_sequence", "compare_alternate",
    "convergents", "eigenvalues", "enclose", "euler_cf", "expand", "extrema", "hausdorff_bounds",
    "ifs_cover", "legendre_filter", "markov_constant", "occurrence_check", "parse_cf", "pu_spectrum",
    "quad_accumulation_set", "secondary_convergent_terms", "singular_scan", "sumset_interval",
    "target_hit_scan", "to_decimal", "word_to_alpha",
]
