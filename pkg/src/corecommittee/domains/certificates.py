from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from ..election import Election, ElectionError


class Domain(str, enum.Enum):
    SP = "SP"
    SC = "SC"
    EUCLID1D = "EUCLID1D"
    VI = "VI"
    CI = "CI"
    LC = "LC"
    SSC = "SSC"
    STP = "STP"
    STC = "STC"
    RSTC = "RSTC"
    TM = "TM"
    WELL_ORDERED = "WELL_ORDERED"

    @classmethod
    def parse(cls, value) -> "Domain":
        if isinstance(value, Domain):
            return value
        key = str(value).upper().replace("-", "_")
        aliases = {"R_STC": "RSTC", "EUCLID": "EUCLID1D", "WO": "WELL_ORDERED"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise ElectionError(f"unknown domain {value!r}") from None


@dataclass(frozen=True)
class VoterOrder:
    """Voters listed from the top of the order down (voter indices)."""

    voters: tuple

    def check(self, election: Election) -> None:
        if sorted(self.voters) != list(range(election.n)):
            raise ElectionError("voter order must list every voter exactly once")


@dataclass(frozen=True)
class CandidateOrder:
    candidates: tuple

    def check(self, election: Election) -> None:
        if sorted(self.candidates, key=str) != sorted(election.candidates, key=str) or \
                len(set(self.candidates)) != len(self.candidates):
            raise ElectionError("candidate order must list every candidate exactly once")

    def indices(self, election: Election) -> tuple:
        return tuple(election.cidx(c) for c in self.candidates)


@dataclass(frozen=True)
class MixedOrder:
    """Order over voters and candidates; items are ``("v", index)`` or ``("c", name)``."""

    items: tuple

    @classmethod
    def join(cls, voters: VoterOrder, candidates: CandidateOrder) -> "MixedOrder":
        return cls(tuple(("v", i) for i in voters.voters) + tuple(("c", c) for c in candidates.candidates))

    @property
    def voter_order(self) -> VoterOrder:
        return VoterOrder(tuple(x for t, x in self.items if t == "v"))

    @property
    def candidate_order(self) -> CandidateOrder:
        return CandidateOrder(tuple(x for t, x in self.items if t == "c"))

    def check(self, election: Election) -> None:
        if any(t not in ("v", "c") for t, _ in self.items):
            raise ElectionError("mixed order items must be tagged 'v' or 'c'")
        self.voter_order.check(election)
        self.candidate_order.check(election)


@dataclass(frozen=True)
class Embedding:
    voter_pos: tuple
    candidate_pos: Mapping[str, Fraction]

    def check(self, election: Election) -> None:
        if len(self.voter_pos) != election.n or set(self.candidate_pos) != set(election.candidates):
            raise ElectionError("embedding must place every voter and every candidate")


Certificate = VoterOrder | CandidateOrder | MixedOrder | Embedding


def lift_order(cert, factor: int):
    """Map a certificate of ``E`` onto ``expand_election(E, factor)`` (copies adjacent)."""
    if factor == 1:
        return cert
    if isinstance(cert, VoterOrder):
        return VoterOrder(tuple(i * factor + c for i in cert.voters for c in range(factor)))
    if isinstance(cert, MixedOrder):
        items = []
        for t, x in cert.items:
            if t == "v":
                items.extend(("v", x * factor + c) for c in range(factor))
            else:
                items.append((t, x))
        return MixedOrder(tuple(items))
    if isinstance(cert, Embedding):
        return Embedding(tuple(p for p in cert.voter_pos for _ in range(factor)), cert.candidate_pos)
    return cert
