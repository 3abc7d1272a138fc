"""Preference domains: certificate verification, recognition and order constructions."""

from .certificates import CandidateOrder, Certificate, Domain, Embedding, MixedOrder, VoterOrder, lift_order
from .constructions import EquivalenceReport, equivalence_check, lc_from_interval, stp_order_from_stc
from .search import DEFAULT_BUDGET, RecognitionResult, recognize
from .verify import VerifyResult, verify

__all__ = [
    "CandidateOrder", "Certificate", "Domain", "Embedding", "MixedOrder", "VoterOrder", "lift_order",
    "EquivalenceReport", "equivalence_check", "lc_from_interval", "stp_order_from_stc",
    "DEFAULT_BUDGET", "RecognitionResult", "recognize", "VerifyResult", "verify",
]
