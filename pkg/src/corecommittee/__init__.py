"""Core-stable committees for restricted preference domains."""

__version__ = "0.1.0"

from .core import (BlockingWitness, CoreVerdict, check_core, check_core_max, check_fractional_deviation,
                   check_local_stability, find_empty_core_evidence, validate_witness)
from .domains import (CandidateOrder, Domain, MixedOrder, VoterOrder, equivalence_check, lc_from_interval,
                      recognize, verify)
from .election import (Election, ElectionError, Lex, expand_election, indicator, lex_compare,
                       lex_compare_fractional, position_of, quota_ratio)
from .fileio import import_preflib, parse_election, serialize_election
from .fixtures import fixture, tm_empty_core_family
from .generators import GeneratorSpec, generate
from .rules import (InvariantViolation, best_representative, committee_core, equal_shares, median_rule, monroe,
                    pav, stv)

__all__ = [
    "BlockingWitness", "CoreVerdict", "check_core", "check_core_max", "check_fractional_deviation",
    "check_local_stability", "find_empty_core_evidence", "validate_witness",
    "CandidateOrder", "Domain", "MixedOrder", "VoterOrder", "equivalence_check", "lc_from_interval",
    "recognize", "verify",
    "Election", "ElectionError", "Lex", "expand_election", "indicator", "lex_compare",
    "lex_compare_fractional", "position_of", "quota_ratio",
    "import_preflib", "parse_election", "serialize_election",
    "fixture", "tm_empty_core_family", "GeneratorSpec", "generate",
    "InvariantViolation", "best_representative", "committee_core", "equal_shares", "median_rule", "monroe",
    "pav", "stv",
]
