"""Order transformations between domains, and recognizer cross-checks."""

from __future__ import annotations

from dataclasses import dataclass

from ..election import Election, ElectionError
from .certificates import CandidateOrder, Domain, MixedOrder, VoterOrder
from .search import DEFAULT_BUDGET, _topo, recognize
from .verify import Profile, verify


def lc_from_interval(election: Election, domain, certificate) -> MixedOrder:
    """Turn a VI voter order or a CI candidate order into an LC mixed order.

    VI: each candidate is placed just before the first voter approving it.
    CI: each voter is placed just before the first candidate it approves.
    Unapproved candidates (VI) go to the end.
    """
    domain = Domain.parse(domain)
    if domain not in (Domain.VI, Domain.CI):
        raise ElectionError("lc_from_interval takes VI or CI")
    check = verify(domain, election, certificate)
    if not check:
        raise ElectionError(f"certificate does not witness {domain.value}: {check.violation}")
    prof = Profile(election)
    items: list = []
    if domain is Domain.VI:
        voters = certificate.voters
        first: dict = {}
        for c in range(election.m):
            for pos, i in enumerate(voters):
                if prof.top[i] >> c & 1:
                    first[c] = pos
                    break
        for pos, i in enumerate(voters):
            items.extend(("c", election.candidates[c]) for c in range(election.m) if first.get(c) == pos)
            items.append(("v", i))
        items.extend(("c", election.candidates[c]) for c in range(election.m) if c not in first)
    else:
        cands = certificate.indices(election)
        cpos = {c: p for p, c in enumerate(cands)}
        lead = {i: min(cpos[c] for c in prof.top_list[i]) for i in range(election.n)}
        for pos, c in enumerate(cands):
            items.extend(("v", i) for i in range(election.n) if lead[i] == pos)
            items.append(("c", election.candidates[c]))
    order = MixedOrder(tuple(items))
    assert verify(Domain.LC, election, order), "interval certificate did not yield an LC order"
    return order


def stp_order_from_stc(election: Election, voter_order: VoterOrder) -> CandidateOrder:
    """Candidate order for single-top-peakedness from a single-top-crossing voter order.

    For a top candidate ``a`` and another candidate ``b``, the voters preferring
    ``b`` to ``a`` lie on one side of the voters topping ``a``; ``b`` is put on
    that same side of ``a``.  Remaining pairs are completed canonically.
    """
    if not election.is_strict:
        raise ElectionError("stp_order_from_stc needs strict preferences")
    check = verify(Domain.STC, election, voter_order)
    if not check:
        raise ElectionError(f"voter order does not witness STC: {check.violation}")
    pos = {i: p for p, i in enumerate(voter_order.voters)}
    rank = election.rank
    edges = set()
    for a in range(election.m):
        block = [pos[i] for i in range(election.n) if rank[i][a] == 0]
        if not block:
            continue
        lo, hi = min(block), max(block)
        for b in range(election.m):
            if b == a:
                continue
            fans = [pos[i] for i in range(election.n) if rank[i][b] < rank[i][a]]
            if not fans:
                continue
            if max(fans) < lo:
                edges.add((b, a))
            elif min(fans) > hi:
                edges.add((a, b))
            else:
                raise ElectionError("voters preferring a candidate straddle a top block")
    order = _topo(election.m, edges)
    if order is None:
        raise ElectionError("constraints derived from the voter order are cyclic")
    return CandidateOrder(tuple(election.candidates[c] for c in order))


@dataclass(frozen=True)
class EquivalenceReport:
    verdict: str  # "agree", "disagree" or "inconclusive"
    outcomes: dict
    witness: object = None


PAIRS = {"STP-TM": (Domain.STP, Domain.TM), "STP-STC": (Domain.STP, Domain.STC)}


def equivalence_check(election: Election, pair: str, budget: int | None = DEFAULT_BUDGET) -> EquivalenceReport:
    """Run both recognizers of a pair and compare their verdicts."""
    key = pair.upper().replace("<->", "-").replace("↔", "-")
    if key not in PAIRS:
        raise ElectionError(f"unknown pair {pair!r}; expected one of {sorted(PAIRS)}")
    if not election.is_strict:
        raise ElectionError("equivalence checks apply to strict preferences")
    results = {d.value: recognize(d, election, budget) for d in PAIRS[key]}
    outcomes = {d: r.outcome for d, r in results.items()}
    if "unknown" in outcomes.values():
        return EquivalenceReport("inconclusive", outcomes)
    values = set(outcomes.values())
    if len(values) == 1:
        return EquivalenceReport("agree", outcomes)
    witness = {d: r.certificate for d, r in results.items() if r.certified}
    return EquivalenceReport("disagree", outcomes, witness)
