"""Committee rules: Monroe, STV, PAV, equal shares (Rule X) and the two-phase core rule."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import linear_sum_assignment

from .domains import CandidateOrder, Domain, MixedOrder, VoterOrder, lc_from_interval, lift_order, recognize, verify
from .election import Election, ElectionError, expand_election, quota_ratio

MAX_EXACT_M = 20
MAX_EXACT_K = 10


class InvariantViolation(RuntimeError):
    """The two-phase rule did not produce k candidates; the order did not certify the domain."""


def _gate(election: Election, rule: str, force: bool) -> None:
    if not force and (election.m > MAX_EXACT_M or election.k > MAX_EXACT_K):
        raise ElectionError(f"{rule} is exact and limited to m <= {MAX_EXACT_M}, k <= {MAX_EXACT_K}"
                            f" (got m={election.m}, k={election.k}); pass force=True to override")


def _require_strict(election: Election, rule: str) -> None:
    if not election.is_strict:
        raise ElectionError(f"{rule} needs strict preferences")


def _require_approval(election: Election, rule: str) -> None:
    if not election.is_approval:
        raise ElectionError(f"{rule} needs approval preferences (at most two classes per voter)")


def _names(election: Election, indices) -> tuple:
    return tuple(election.candidates[c] for c in sorted(indices))


# Monroe

@dataclass(frozen=True)
class MonroeResult:
    committee: tuple
    value: int
    assignment: dict  # voter index -> candidate name


def _balanced_assignment(election: Election, members: tuple, per: int):
    cols = [c for c in members for _ in range(per)]
    cost = np.array([[election.rank[i][c] + 1 for c in cols] for i in range(election.n)], dtype=np.int64)
    rows, picked = linear_sum_assignment(cost)
    value = int(cost[rows, picked].sum())
    return value, {int(i): cols[j] for i, j in zip(rows, picked)}


def monroe(election: Election, force: bool = False) -> MonroeResult:
    """Committee minimising the total position under a balanced voter assignment.

    Each member represents exactly n/k voters.  Committees are tried in
    lexicographic order and only a strictly better value replaces the incumbent.
    """
    _require_strict(election, "Monroe")
    per = quota_ratio(election)
    _gate(election, "Monroe", force)
    best = None
    for members in itertools.combinations(range(election.m), election.k):
        floor = sum(min(election.rank[i][c] for c in members) + 1 for i in range(election.n))
        if best is not None and floor >= best[0]:
            continue
        value, assign = _balanced_assignment(election, members, per)
        if best is None or value < best[0]:
            best = (value, members, assign)
    value, members, assign = best
    return MonroeResult(_names(election, members), value,
                        {i: election.candidates[c] for i, c in sorted(assign.items())})


# STV

@dataclass(frozen=True)
class StvResult:
    committee: tuple
    quota: int
    events: tuple  # ("elected" | "eliminated", candidate, votes)
    rounds: tuple  # per round: {candidate: current first-preference count}


def stv(election: Election) -> StvResult:
    """Single transferable vote with quota floor(n/(k+1)) + 1.

    An elected candidate takes exactly ``quota`` of its current supporters out
    of the count (lowest voter indices first).  Ties go to the candidate
    declared first.
    """
    _require_strict(election, "STV")
    n, m, k = election.n, election.m, election.k
    quota = n // (k + 1) + 1
    orders = [[next(iter(cls)) for cls in r] for r in election.rankings]
    removed: set = set()
    active = [True] * n
    elected: list = []
    events: list = []
    rounds: list = []
    while len(elected) < k and len(removed) < m:
        support: dict = {c: [] for c in range(m) if c not in removed}
        for i in range(n):
            if active[i]:
                top = next(c for c in orders[i] if c not in removed)
                support[top].append(i)
        rounds.append({election.candidates[c]: len(v) for c, v in support.items()})
        winner = next((c for c in sorted(support) if len(support[c]) >= quota), None)
        if winner is not None:
            for i in support[winner][:quota]:
                active[i] = False
            elected.append(winner)
            removed.add(winner)
            events.append(("elected", election.candidates[winner], len(support[winner])))
        else:
            loser = min(sorted(support), key=lambda c: len(support[c]))
            removed.add(loser)
            events.append(("eliminated", election.candidates[loser], len(support[loser])))
    return StvResult(_names(election, elected), quota, tuple(events), tuple(rounds))


# PAV

def harmonic(j: int) -> Fraction:
    return sum((Fraction(1, x) for x in range(1, j + 1)), Fraction(0))


@dataclass(frozen=True)
class PavResult:
    committee: tuple
    score: Fraction


def pav_score(election: Election, committee) -> Fraction:
    w = election.mask_of(committee)
    return sum((harmonic((w & t).bit_count()) for t in election.top_masks), Fraction(0))


def pav(election: Election, force: bool = False) -> PavResult:
    """Exact proportional approval voting by branch and bound.

    Candidates are added in canonical order; a branch is cut when the current
    score plus the best marginal gains still available cannot beat the
    incumbent, so the lexicographically first optimum is returned.
    """
    _require_approval(election, "PAV")
    _gate(election, "PAV", force)
    m, k = election.m, election.k
    scale = math.lcm(*range(1, k + 1))
    gain = [0] + [scale // j for j in range(1, k + 1)]  # gain[j]: value of a j-th approved member
    groups: dict = {}
    for approved in election.top_masks:
        groups[approved] = groups.get(approved, 0) + 1
    types = list(groups.items())
    approvers = [[t for t, (mask, _) in enumerate(types) if mask >> c & 1] for c in range(m)]
    weight = [w for _, w in types]
    counts = [0] * len(types)
    chosen: list = []
    best = [None, -1]

    def marginal(c):
        return sum(weight[t] * gain[counts[t] + 1] for t in approvers[c] if counts[t] < k)

    def dfs(start, score):
        slots = k - len(chosen)
        if slots == 0:
            if score > best[1]:
                best[0], best[1] = tuple(chosen), score
            return
        if best[0] is not None:
            gains = sorted((marginal(c) for c in range(start, m)), reverse=True)
            if score + sum(gains[:slots]) <= best[1]:
                return
        for c in range(start, m - slots + 1):
            g = marginal(c)
            for t in approvers[c]:
                counts[t] += 1
            chosen.append(c)
            dfs(c + 1, score + g)
            chosen.pop()
            for t in approvers[c]:
                counts[t] -= 1

    dfs(0, 0)
    return PavResult(_names(election, best[0]), Fraction(best[1], scale))


# Rule X / method of equal shares

@dataclass(frozen=True)
class EqualSharesResult:
    committee: tuple  # in order of election
    complete: bool  # True when k members were elected
    trace: tuple  # (candidate, rho) per round
    budgets: tuple  # final budget per voter
    price: Fraction


def _rho(budgets: list, price: Fraction):
    """Least rho with sum(min(b, rho)) == price, or None if the budgets fall short."""
    if sum(budgets, Fraction(0)) < price:
        return None
    spent = Fraction(0)
    ordered = sorted(budgets)
    for j, b in enumerate(ordered):
        rho = (price - spent) / (len(ordered) - j)
        if rho <= b:
            return rho
        spent += b
    return None


def equal_shares(election: Election) -> EqualSharesResult:
    """Rule X without completion: may stop with fewer than k members.

    Every voter starts with one unit, a candidate costs n/k, and each round
    elects the candidate whose approvers can pay it with the lowest
    per-voter cap rho; ties go to the candidate declared first.
    """
    _require_approval(election, "equal shares")
    n, m = election.n, election.m
    price = Fraction(n, election.k)
    budgets = [Fraction(1)] * n
    supporters = [[i for i in range(n) if election.rank[i][c] == 0] for c in range(m)]
    elected: list = []
    trace: list = []
    while True:
        best = None
        for c in range(m):
            if c in elected:
                continue
            rho = _rho([budgets[i] for i in supporters[c]], price)
            if rho is not None and (best is None or rho < best[1]):
                best = (c, rho)
        if best is None:
            break
        c, rho = best
        for i in supporters[c]:
            budgets[i] -= min(budgets[i], rho)
        elected.append(c)
        trace.append((election.candidates[c], rho))
    return EqualSharesResult(tuple(election.candidates[c] for c in elected), len(elected) == election.k,
                             tuple(trace), tuple(budgets), price)


# BestRepresentative, MedianRule, CommitteeCore

@dataclass(frozen=True)
class RepresentativeAssignment:
    rep: dict  # voter index -> candidate name
    fractional: dict  # candidate name -> mass
    order: tuple  # voters in processing order
    candidate_order: tuple  # tie-break order over candidates


def _split_order(election: Election, order):
    if isinstance(order, MixedOrder):
        order.check(election)
        return order.voter_order.voters, order.candidate_order.candidates
    if isinstance(order, VoterOrder):
        order.check(election)
        return order.voters, election.candidates
    raise ElectionError("order must be a VoterOrder or a MixedOrder")


def best_representative(election: Election, order) -> RepresentativeAssignment:
    """Each voter in turn takes k/n of her favourite candidate that is not yet full.

    Ties within a class go to the candidate placed first in the candidate
    order (the candidate part of a mixed order, else declaration order).
    """
    per = quota_ratio(election)
    voters, cand_order = _split_order(election, order)
    tiebreak = {election.cidx(c): p for p, c in enumerate(cand_order)}
    share = Fraction(1, per)
    mass = [Fraction(0)] * election.m
    rep = {}
    for i in voters:
        rank = election.rank[i]
        c = min((c for c in range(election.m) if mass[c] < 1), key=lambda c: (rank[c], tiebreak[c]))
        mass[c] += share
        rep[i] = election.candidates[c]
    return RepresentativeAssignment(rep, {election.candidates[c]: mass[c] for c in range(election.m)},
                                    tuple(voters), tuple(cand_order))


@dataclass(frozen=True)
class MedianResult:
    committee: tuple
    median_voters: tuple
    distinct: bool  # all k median voters chose different candidates


def median_rule(election: Election, order: VoterOrder) -> MedianResult:
    """Elect the top candidate of voters 1, n/k + 1, 2n/k + 1, ... of the order."""
    per = quota_ratio(election)
    voters, _ = _split_order(election, order)
    medians = tuple(voters[q * per] for q in range(election.k))
    picks = {min(election.tops[i]) for i in medians}
    return MedianResult(_names(election, picks), medians, len(picks) == election.k)


@dataclass(frozen=True)
class CommitteeCoreResult:
    committee: tuple
    first_phase: tuple  # candidates that received full mass
    second_phase: tuple
    assignment: RepresentativeAssignment
    reduced_voters: tuple  # voters left after the first phase, in second-phase order
    median_voters: tuple
    election: Election  # the election actually used (after any expansion)
    expansion: int
    order: object  # certificate driving the first phase
    notes: tuple = field(default=())


def _voters_by_axis(election: Election, axis: CandidateOrder, voters) -> tuple:
    pos = {c: p for p, c in enumerate(axis.indices(election))}
    return tuple(sorted(voters, key=lambda i: (min(pos[c] for c in election.tops[i]), i)))


def committee_core(election: Election, order, auto_expand: bool = False) -> CommitteeCoreResult:
    """Two-phase committee from the core for LC approval or r-STC strict elections.

    ``order`` may be a MixedOrder (LC), a VoterOrder (SC/STC, or VI for
    approval) or a CandidateOrder (an SP axis, or a CI order for approval).
    """
    notes = []
    factor = 1
    if election.n % election.k:
        if not auto_expand:
            quota_ratio(election)
        factor = election.k // math.gcd(election.n, election.k)
        election = expand_election(election, factor)
        order = lift_order(order, factor)
        notes.append(f"voters replicated {factor} times")
    axis = None
    if election.is_approval and isinstance(order, VoterOrder) and verify(Domain.VI, election, order):
        order = lc_from_interval(election, Domain.VI, order)
        notes.append("VI voter order turned into an LC order")
    elif election.is_approval and isinstance(order, CandidateOrder):
        order = lc_from_interval(election, Domain.CI, order)
        notes.append("CI candidate order turned into an LC order")
    elif isinstance(order, CandidateOrder):
        order.check(election)
        axis = order
        order = VoterOrder(_voters_by_axis(election, axis, range(election.n)))
        notes.append("voters sorted by peak along the axis")

    per = quota_ratio(election)
    phase1 = best_representative(election, order)
    full = [c for c in election.candidates if phase1.fractional[c] == 1]
    full_set = set(full)
    survivors = tuple(i for i in phase1.order if phase1.rep[i] not in full_set)
    k2 = election.k - len(full)

    if axis is not None and survivors:
        rest = [c for c in election.candidates if c not in full_set]
        ordered = sorted(survivors)
        sub = election.restrict(voters=ordered, candidates=rest, k=max(k2, 1))
        sub_axis = CandidateOrder(tuple(c for c in axis.candidates if c not in full_set))
        survivors = tuple(ordered[j] for j in _voters_by_axis(sub, sub_axis, range(len(ordered))))
    elif isinstance(order, VoterOrder) and survivors and k2 > 0:
        rest = [c for c in election.candidates if c not in full_set]
        sub = election.restrict(voters=survivors, candidates=rest, k=k2)
        induced = VoterOrder(tuple(range(len(survivors))))
        if not verify(Domain.STC, sub, induced):
            found = recognize(Domain.STC, sub)
            if found.certified:
                survivors = tuple(survivors[j] for j in found.certificate.voters)
                notes.append("second-phase voter order found by STC search")
            else:
                notes.append("induced second-phase order is not STC")

    medians = tuple(survivors[q * per] for q in range(k2)) if k2 > 0 else ()
    second = {phase1.rep[i] for i in medians}
    committee = set(full) | second
    if len(committee) != election.k or len(survivors) != k2 * per:
        raise InvariantViolation(
            f"two-phase rule produced {len(committee)} candidates for k={election.k};"
            " the order does not certify a supported domain")
    return CommitteeCoreResult(
        tuple(election.sort_names(committee)), tuple(election.sort_names(full)),
        tuple(election.sort_names(second)), phase1, survivors, medians, election, factor, order, tuple(notes))
