"""Abelian power search and exponent certificates for fixed points of uniform cyclic morphisms."""

__version__ = "0.1.0"

from .words import Alphabet, ParikhVector, Word, equivalent, is_anagram, parikh, shift  # noqa: E402
from .morphism import (  # noqa: E402
    ParsedFactor,
    UniformCyclicMorphism,
    apply,
    fixed_point_prefix,
    fixed_point_prefix_of_seed,
    parse_factor,
    validate,
)
from .scanner import (  # noqa: E402
    AbelianWitness,
    ScanConfig,
    oracle_scan,
    scan,
    scan_max,
    scan_violations,
    witness_check,
)

__all__ = [
    "AbelianWitness", "Alphabet", "ParikhVector", "ParsedFactor", "ScanConfig",
    "UniformCyclicMorphism", "Word", "apply", "equivalent", "fixed_point_prefix",
    "fixed_point_prefix_of_seed", "is_anagram", "oracle_scan", "parikh", "parse_factor",
    "scan", "scan_max", "scan_violations", "shift", "validate", "witness_check",
]
