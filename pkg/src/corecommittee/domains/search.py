"""Recognizers: search for a certificate of domain membership."""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass

from ..election import Election
from .c1p import Undecided, consecutive_ones_order
from .certificates import CandidateOrder, Domain, MixedOrder, VoterOrder
from .verify import CANDIDATE_TRIPLES, MIXED_QUADS, VOTER_TRIPLES, Profile, verify

DEFAULT_BUDGET = 1_000_000
RSTC_MAX_M = 15


@dataclass(frozen=True)
class RecognitionResult:
    domain: Domain
    outcome: str  # "certified", "refuted" or "unknown"
    certificate: object = None
    nodes: int = 0
    witness: object = None
    orders_covered: int | None = None
    note: str = ""

    @property
    def certified(self) -> bool:
        return self.outcome == "certified"

    @property
    def refuted(self) -> bool:
        return self.outcome == "refuted"


class _OutOfBudget(Exception):
    pass


class _Counter:
    def __init__(self, limit):
        self.limit = limit
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.limit is not None and self.nodes > self.limit:
            raise _OutOfBudget


def _triple_search(size: int, pred, counter: _Counter):
    order: list = []
    used = [False] * size

    def fits(z):
        for q in range(1, len(order)):
            y = order[q]
            for p in range(q):
                if pred(order[p], y, z) is not None:
                    return False
        return True

    def dfs():
        if len(order) == size:
            return True
        for z in range(size):
            if used[z]:
                continue
            counter.tick()
            if fits(z):
                used[z] = True
                order.append(z)
                if dfs():
                    return True
                order.pop()
                used[z] = False
        return False

    return list(order) if dfs() else None


def _has_cycle(size: int, edges: set) -> bool:
    return _topo(size, edges) is None


def _topo(size: int, edges: set):
    """Topological order preferring smaller indices; None on a cycle."""
    succ = [[] for _ in range(size)]
    indeg = [0] * size
    for u, v in edges:
        succ[u].append(v)
        indeg[v] += 1
    ready = [x for x in range(size) if indeg[x] == 0]
    heapq.heapify(ready)
    out = []
    while ready:
        u = heapq.heappop(ready)
        out.append(u)
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(ready, v)
    return out if len(out) == size else None


def _quad_search(prof: Profile, name: str, counter: _Counter):
    """Voter order and candidate order avoiding the forbidden quadruple pattern.

    The smaller side is permuted explicitly; each fixed pair on that side turns
    the pattern into precedence constraints on the other side, which must stay
    acyclic.
    """
    cond = getattr(prof, name)
    n, m = prof.n, prof.m
    search_candidates = m <= n
    size, other = (m, n) if search_candidates else (n, m)

    def forced(u, x):
        # u placed before x on the searched side; returns edges on the other side
        out = set()
        for p in range(other):
            for q in range(other):
                if p == q:
                    continue
                # forbidden: p before q (other side) together with u before x
                bad = cond(p, q, u, x) if search_candidates else cond(u, x, p, q)
                if bad:
                    out.add((q, p))
        return out

    order: list = []
    used = [False] * size
    edges: set = set()
    cache: dict = {}

    def dfs():
        if len(order) == size:
            return True
        for x in range(size):
            if used[x]:
                continue
            counter.tick()
            added = set()
            for u in order:
                key = (u, x)
                if key not in cache:
                    cache[key] = forced(u, x)
                added |= cache[key] - edges
            if added and _has_cycle(other, edges | added):
                continue
            edges.update(added)
            used[x] = True
            order.append(x)
            if dfs():
                return True
            order.pop()
            used[x] = False
            edges.difference_update(added)
        return False

    if not dfs():
        return None
    rest = _topo(other, edges)
    if search_candidates:
        return rest, order
    return order, rest


def _sp_axis_strict(e: Election):
    """Axis on which every top-j prefix of every ballot is contiguous.

    For strict ballots that is equivalent to single-peakedness.  Returns
    False if the consecutive-ones layout could not decide.
    """
    prefixes = set()
    for ranking in e.rankings:
        seen = set()
        for cls in ranking[:-1]:
            seen |= cls
            prefixes.add(frozenset(seen))
    order, decided = _c1p(e.m, list(prefixes))
    if not decided:
        return False
    if order is None:
        return None
    return min(order, order[::-1])


def _sc_order_strict(prof: Profile):
    n, m = prof.n, prof.m

    def disagreement(u, v):
        return sum((prof.better[u][a] & prof.worse[v][a]).bit_count() for a in range(m))

    far = max(range(n), key=lambda v: (disagreement(0, v), -v))
    order = sorted(range(n), key=lambda v: (disagreement(far, v), v))
    return min(order, order[::-1])


def _c1p(size, sets):
    try:
        return consecutive_ones_order(size, sets), True
    except Undecided:
        return None, False


def recognize(domain, election: Election, budget: int | None = DEFAULT_BUDGET,
              exhaustive_rstc: bool = False) -> RecognitionResult:
    """Search for a certificate; ``budget`` bounds the number of search nodes.

    ``certified`` results always pass ``verify``; ``refuted`` means the search
    space was exhausted; ``unknown`` means the budget ran out.
    """
    domain = Domain.parse(domain)
    prof = Profile(election)
    counter = _Counter(budget)
    if domain is Domain.RSTC:
        return _recognize_rstc(election, budget, exhaustive_rstc)
    if domain is Domain.EUCLID1D:
        return RecognitionResult(domain, "unknown", note="1D-Euclidean recognition is not provided")
    try:
        cert, note = _recognize(domain, election, prof, counter)
    except _OutOfBudget:
        return RecognitionResult(domain, "unknown", nodes=counter.nodes, note="search budget exhausted")
    if cert is None:
        covered = None
        if domain in MIXED_QUADS:
            covered = math.factorial(election.n + election.m)
        return RecognitionResult(domain, "refuted", nodes=counter.nodes, orders_covered=covered, note=note)
    check = verify(domain, election, cert, prof)
    if not check:
        raise AssertionError(f"recognizer produced an invalid {domain.value} certificate: {check.violation}")
    return RecognitionResult(domain, "certified", cert, nodes=counter.nodes, note=note)


def _recognize(domain, e: Election, prof: Profile, counter: _Counter):
    names = e.candidates
    if domain is Domain.SP and e.is_strict:
        axis = _sp_axis_strict(e)
        if axis is None:
            return None, "consecutive-ones on ballot prefixes"
        if axis is not False:
            return CandidateOrder(tuple(names[c] for c in axis)), "consecutive-ones on ballot prefixes"
    if domain is Domain.SC and e.is_strict:
        order = _sc_order_strict(prof)
        if verify(domain, e, VoterOrder(tuple(order)), prof):
            return VoterOrder(tuple(order)), "disagreement-sort algorithm"
        return None, "disagreement-sort algorithm"
    if domain is Domain.VI:
        approvers = [frozenset(i for i in range(e.n) if prof.top[i] >> c & 1) for c in range(e.m)]
        order, decided = _c1p(e.n, approvers)
        if decided:
            return (VoterOrder(tuple(order)) if order is not None else None), "consecutive-ones"
    if domain is Domain.CI:
        sets = [frozenset(prof.top_list[i]) for i in range(e.n)]
        order, decided = _c1p(e.m, sets)
        if decided:
            return (CandidateOrder(tuple(names[c] for c in order)) if order is not None else None), \
                "consecutive-ones"
    if domain in CANDIDATE_TRIPLES:
        order = _triple_search(e.m, getattr(prof, CANDIDATE_TRIPLES[domain]), counter)
        return (CandidateOrder(tuple(names[c] for c in order)) if order is not None else None), "backtracking"
    if domain in VOTER_TRIPLES:
        order = _triple_search(e.n, getattr(prof, VOTER_TRIPLES[domain]), counter)
        return (VoterOrder(tuple(order)) if order is not None else None), "backtracking"
    if domain in MIXED_QUADS:
        found = _quad_search(prof, MIXED_QUADS[domain], counter)
        if found is None:
            return None, "backtracking over voter/candidate order pairs"
        voters, cands = found
        return MixedOrder.join(VoterOrder(tuple(voters)), CandidateOrder(tuple(names[c] for c in cands))), \
            "backtracking over voter/candidate order pairs"
    raise AssertionError(domain)


def _recognize_rstc(e: Election, budget, exhaustive: bool) -> RecognitionResult:
    if not exhaustive:
        for via in (Domain.SP, Domain.SC):
            if not e.is_strict:
                break
            res = recognize(via, e, budget)
            if res.certified:
                return RecognitionResult(Domain.RSTC, "certified", res.certificate, nodes=res.nodes,
                                         note=f"{via.value} certificate implies r-STC")
    if e.m > RSTC_MAX_M:
        return RecognitionResult(Domain.RSTC, "unknown",
                                 note=f"exhaustive subset check is limited to m <= {RSTC_MAX_M}")
    nodes = 0
    unknown = False
    full_cert = None
    for size in range(e.m, 0, -1):
        for subset in itertools.combinations(e.candidates, size):
            sub = e.restrict(candidates=subset, k=min(e.k, size))
            res = recognize(Domain.STC, sub, budget)
            nodes += res.nodes
            if res.refuted:
                return RecognitionResult(Domain.RSTC, "refuted", nodes=nodes, witness=subset,
                                         note="candidate subset whose subinstance is not STC")
            if res.outcome == "unknown":
                unknown = True
            elif size == e.m:
                full_cert = res.certificate
    if unknown:
        return RecognitionResult(Domain.RSTC, "unknown", nodes=nodes, note="search budget exhausted")
    return RecognitionResult(Domain.RSTC, "certified", full_cert, nodes=nodes,
                             note="every candidate subset is STC")
