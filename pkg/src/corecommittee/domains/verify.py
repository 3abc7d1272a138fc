"""Certificate verifiers for the preference domains.

Triple-based domains are checked through a predicate on three elements taken
in certificate order; the same predicates drive the backtracking recognizers,
which place elements one at a time and test only triples ending at the
newly placed element.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from ..election import Election, ElectionError
from .certificates import CandidateOrder, Domain, Embedding, MixedOrder, VoterOrder


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    violation: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


class Profile:
    """Bitmask views of an election used by the predicates."""

    def __init__(self, election: Election):
        self.e = election
        self.n, self.m = election.n, election.m
        rank = election.rank
        self.rank = rank
        self.top = election.top_masks
        # better[i][a]: candidates strictly preferred to a; worse[i][a]: strictly below a
        self.better = tuple(
            tuple(sum(1 << b for b in range(self.m) if r[b] < r[a]) for a in range(self.m)) for r in rank)
        self.worse = tuple(
            tuple(sum(1 << b for b in range(self.m) if r[b] > r[a]) for a in range(self.m)) for r in rank)
        self.bottom = tuple(max(r) if r else 0 for r in rank)
        self.all_tops = 0
        for t in self.top:
            self.all_tops |= t
        self.top_list = tuple(tuple(c for c in range(self.m) if t >> c & 1) for t in self.top)

    @cached_property
    def voters_by_top(self) -> dict:
        out: dict = {}
        for i, t in enumerate(self.top_list):
            for c in t:
                out.setdefault(c, []).append(i)
        return out

    # candidate-order triples: (a, b, c) appear in this order, b in the middle

    def sp(self, a, b, c):
        for i in range(self.n):
            r = self.rank[i]
            if self.top[i] >> a & 1 and not r[b] < r[c]:
                return (i, a, b, c)
            if self.top[i] >> c & 1 and not r[b] < r[a]:
                return (i, c, b, a)
        return None

    def stp(self, a, b, c):
        if not self.all_tops >> b & 1:
            return None
        return self.sp(a, b, c)

    def ci(self, a, b, c):
        for i in range(self.n):
            t = self.top[i]
            if t >> a & 1 and t >> c & 1 and not t >> b & 1:
                return (i, a, b, c)
        return None

    def _tm_consequent(self, i, j, b, c) -> bool:
        r = self.rank[i]
        if (self.top[i] | self.top[j]) >> c & 1:
            return r[b] <= r[c]
        return r[b] < r[c]

    def tm(self, x, b, z):
        for a, c in ((x, z), (z, x)):
            for i in self.voters_by_top.get(a, ()):
                for j in self.voters_by_top.get(b, ()):
                    if not self._tm_consequent(i, j, b, c):
                        return ("first", i, j, a, b, c)
            tops = self.all_tops
            if tops >> a & 1 and tops >> b & 1 and tops >> c & 1:
                for i in range(self.n):
                    ri = self.rank[i]
                    if not (ri[a] <= ri[b] and ri[a] <= ri[c]):
                        continue
                    for j in range(self.n):
                        rj = self.rank[j]
                        if rj[b] <= rj[a] and rj[b] <= rj[c] and not self._tm_consequent(i, j, b, c):
                            return ("second", i, j, a, b, c)
        return None

    # voter-order triples: x before y before z

    def sc(self, x, y, z):
        for a in range(self.m):
            bad = self.worse[y][a] & self.better[x][a] & ~self.worse[z][a]
            if bad:
                return (x, y, z, a, (bad & -bad).bit_length() - 1)
        return None

    def stc(self, x, y, z):
        for t in self.top_list[y]:
            bad = self.better[x][t] & ~self.worse[z][t]
            if bad:
                return (x, y, z, t, (bad & -bad).bit_length() - 1)
        return None

    def vi(self, x, y, z):
        bad = self.top[x] & self.top[z] & ~self.top[y]
        if bad:
            return (x, y, z, (bad & -bad).bit_length() - 1)
        return None

    def ssc(self, x, y, z):
        tx, ty, tz = self.top[x], self.top[y], self.top[z]
        a = tx & tz & ~ty
        b = ty & ~(tx | tz)
        if a and b:
            return (x, y, z, (a & -a).bit_length() - 1, (b & -b).bit_length() - 1)
        return None

    # quadruple conditions for mixed orders: voter i before j, candidate a before b

    def lc(self, i, j, a, b) -> bool:
        return bool(self.top[j] >> a & 1) and self.rank[i][b] < self.rank[i][a]

    def well_ordered(self, i, j, a, b) -> bool:
        rj = self.rank[j]
        return (rj[a] == rj[b] and rj[a] != self.bottom[j]
                and self.rank[i][b] < self.rank[i][a])


CANDIDATE_TRIPLES = {Domain.SP: "sp", Domain.STP: "stp", Domain.CI: "ci", Domain.TM: "tm"}
VOTER_TRIPLES = {Domain.SC: "sc", Domain.STC: "stc", Domain.VI: "vi", Domain.SSC: "ssc"}
MIXED_QUADS = {Domain.LC: "lc", Domain.WELL_ORDERED: "well_ordered"}


def _first_triple(pred, seq):
    for p in range(len(seq)):
        for q in range(p + 1, len(seq)):
            for r in range(q + 1, len(seq)):
                bad = pred(seq[p], seq[q], seq[r])
                if bad is not None:
                    return bad
    return None


def first_quad(prof: Profile, name: str, voters, cands):
    cond = getattr(prof, name)
    for p in range(len(voters)):
        for q in range(p + 1, len(voters)):
            for s in range(len(cands)):
                for t in range(s + 1, len(cands)):
                    if cond(voters[p], voters[q], cands[s], cands[t]):
                        return (voters[p], voters[q], cands[s], cands[t])
    return None


def _labels(election: Election, domain: Domain, bad: tuple) -> tuple:
    v = election.voter_ids
    c = election.candidates
    if domain in CANDIDATE_TRIPLES:
        if domain is Domain.TM:
            kind, i, j, a, b, cc = bad
            return (kind, v[i], v[j], c[a], c[b], c[cc])
        i, a, b, cc = bad
        return (v[i], c[a], c[b], c[cc])
    if domain in VOTER_TRIPLES:
        head = tuple(v[x] for x in bad[:3])
        return head + tuple(c[x] for x in bad[3:])
    i, j, a, b = bad
    return (v[i], v[j], c[a], c[b])


def _verify_embedding(election: Election, emb: Embedding) -> VerifyResult:
    cpos = [emb.candidate_pos[name] for name in election.candidates]
    for i, x in enumerate(emb.voter_pos):
        dist = [abs(x - p) for p in cpos]
        r = election.rank[i]
        for a in range(election.m):
            for b in range(election.m):
                if (r[a] < r[b]) != (dist[a] < dist[b]):
                    return VerifyResult(False, (election.voter_ids[i], election.candidates[a],
                                                election.candidates[b]))
    return VerifyResult(True)


def verify(domain, election: Election, certificate, profile: Profile | None = None) -> VerifyResult:
    """Check that ``certificate`` witnesses membership of ``election`` in ``domain``.

    On failure the result carries the first violating tuple (voter ids and
    candidate names) in certificate order.
    """
    domain = Domain.parse(domain)
    prof = profile or Profile(election)
    if domain is Domain.EUCLID1D:
        if not isinstance(certificate, Embedding):
            raise ElectionError("EUCLID1D needs an Embedding certificate")
        certificate.check(election)
        return _verify_embedding(election, certificate)
    if domain in CANDIDATE_TRIPLES:
        if not isinstance(certificate, CandidateOrder):
            raise ElectionError(f"{domain.value} needs a CandidateOrder certificate")
        certificate.check(election)
        bad = _first_triple(getattr(prof, CANDIDATE_TRIPLES[domain]), certificate.indices(election))
    elif domain in VOTER_TRIPLES:
        if not isinstance(certificate, VoterOrder):
            raise ElectionError(f"{domain.value} needs a VoterOrder certificate")
        certificate.check(election)
        bad = _first_triple(getattr(prof, VOTER_TRIPLES[domain]), certificate.voters)
    elif domain in MIXED_QUADS:
        if not isinstance(certificate, MixedOrder):
            raise ElectionError(f"{domain.value} needs a MixedOrder certificate")
        certificate.check(election)
        bad = first_quad(prof, MIXED_QUADS[domain], certificate.voter_order.voters,
                         certificate.candidate_order.indices(election))
    else:
        raise ElectionError(f"{domain.value} is not verified by a single certificate; use recognize")
    if bad is None:
        return VerifyResult(True)
    return VerifyResult(False, _labels(election, domain, bad))
