"""Core membership checks.

A committee ``W`` is blocked by a voter group ``S`` and a candidate set ``T``
when every voter in ``S`` strictly prefers ``T`` to ``W`` and ``T`` is small
relative to ``S``.  Two size bounds are offered:

* ``exact``: ``|T| * n <= k * |S|``
* ``ceil``:  ``(|T| - 1) * n < k * |S|``

Candidate sets are enumerated by size, then in lexicographic order of
canonical indices, with a per-voter bound pruning prefixes that cannot gather
enough supporters.  Voters with identical rankings are handled together.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .election import Election, ElectionError, Lex, _lex_masks, validate_fractional

MODES = ("exact", "ceil")
EXTENSIONS = ("lex", "max")


@dataclass(frozen=True)
class BlockingWitness:
    voters: tuple  # voter indices, ascending
    S: tuple  # the same voters by id
    T: tuple  # candidate names in canonical order
    mode: str
    extension: str = "lex"


@dataclass(frozen=True)
class CoreVerdict:
    in_core: bool
    witness: BlockingWitness | None
    max_t: int
    mode: str
    extension: str = "lex"

    @property
    def violated(self) -> bool:
        return not self.in_core


@dataclass(frozen=True)
class LocalStabilityVerdict:
    stable: bool
    quota: Fraction
    candidate: str | None = None
    S: tuple = ()
    voters: tuple = ()


def required_support(n: int, k: int, size: int, mode: str) -> int:
    """Smallest |S| that lets a set of ``size`` candidates block."""
    if mode == "exact":
        return -(-size * n // k)
    if mode == "ceil":
        return (size - 1) * n // k + 1
    raise ElectionError(f"unknown mode {mode!r}; expected exact or ceil")


def threshold_holds(n: int, k: int, s: int, t: int, mode: str) -> bool:
    if mode == "exact":
        return t * n <= k * s
    if mode == "ceil":
        return (t - 1) * n < k * s
    raise ElectionError(f"unknown mode {mode!r}; expected exact or ceil")


def _voter_types(election: Election):
    groups: dict = {}
    for i, r in enumerate(election.class_masks):
        groups.setdefault(r, []).append(i)
    return list(groups.items())


def _lex_can_win(classes, values, chosen, allowed, slots) -> bool:
    """Can ``chosen`` plus ``slots`` more candidates from ``allowed`` beat the class values?

    ``values[j]`` is the incumbent's weight in class ``j`` (a count or a mass).
    Beating it lexicographically means matching it on a prefix of classes and
    exceeding it on the next one; adding candidates never hurts.
    """
    for cls, w in zip(classes, values):
        have = (chosen & cls).bit_count()
        extra = min((allowed & cls).bit_count(), slots)
        if have + extra > w:
            return True
        if have + extra < w:
            return False
        slots -= extra
    return False


class _Search:
    """Depth-first search over candidate sets of one size."""

    def __init__(self, m, types, can_win, need):
        self.m = m
        self.types = types  # list of (state, voters, weight)
        self.can_win = can_win
        self.need = need

    def first(self, size):
        full = (1 << self.m) - 1
        return self._dfs(0, 0, size, full, list(range(len(self.types))))

    def _dfs(self, chosen, start, slots, full, alive):
        allowed = full & ~((1 << start) - 1)
        keep = []
        support = 0
        for t in alive:
            state, _, weight = self.types[t]
            if self.can_win(state, chosen, allowed, slots):
                keep.append(t)
                support += weight
        if support < self.need:
            return None
        if slots == 0:
            return chosen, keep
        for c in range(start, self.m - slots + 1):
            found = self._dfs(chosen | 1 << c, c + 1, slots - 1, full, keep)
            if found is not None:
                return found
        return None


def _run(election: Election, types, can_win, mode: str, max_t, extension: str) -> CoreVerdict:
    n, k, m = election.n, election.k, election.m
    if mode not in MODES:
        raise ElectionError(f"unknown mode {mode!r}; expected exact or ceil")
    limit = k if max_t is None else min(k, max_t)
    for size in range(1, limit + 1):
        need = required_support(n, k, size, mode)
        if need > n:
            break
        found = _Search(m, types, can_win, need).first(size)
        if found is None:
            continue
        mask, keep = found
        voters = tuple(sorted(i for t in keep for i in types[t][1]))
        witness = BlockingWitness(voters, tuple(election.voter_ids[i] for i in voters),
                                  tuple(election.candidates[c] for c in range(m) if mask >> c & 1),
                                  mode, extension)
        return CoreVerdict(False, witness, limit, mode, extension)
    return CoreVerdict(True, None, limit, mode, extension)


def check_core(election: Election, committee: Iterable[str], mode: str = "exact",
               max_t: int | None = None, extension: str = "lex") -> CoreVerdict:
    """Search for a blocking (S, T) with 1 <= |T| <= min(k, max_t).

    The reported witness has the smallest |T|, then the lexicographically
    first T, and S is the set of all voters strictly preferring T.  An
    ``in_core`` verdict is conclusive only when ``max_t`` is None or >= k.
    """
    if extension == "max":
        return check_core_max(election, committee, mode, max_t)
    if extension != "lex":
        raise ElectionError(f"unknown extension {extension!r}; expected lex or max")
    w = election.mask_of(committee)
    types = [((classes, tuple((w & c).bit_count() for c in classes)), voters, len(voters))
             for classes, voters in _voter_types(election)]

    def can_win(state, chosen, allowed, slots):
        return _lex_can_win(state[0], state[1], chosen, allowed, slots)

    return _run(election, types, can_win, mode, max_t, "lex")


def check_core_max(election: Election, committee: Iterable[str], mode: str = "exact",
                   max_t: int | None = None) -> CoreVerdict:
    """Core check where a voter compares only the best-ranked member of each set."""
    w = election.mask_of(committee)
    types = []
    for classes, voters in _voter_types(election):
        best = next((j for j, c in enumerate(classes) if c & w), len(classes))
        # a set wins when it reaches a class strictly above the incumbent's best
        better = 0
        for c in classes[:best]:
            better |= c
        types.append(((better,), voters, len(voters)))

    def can_win(state, chosen, allowed, slots):
        reach = chosen | (allowed if slots else 0)
        return bool(reach & state[0])

    return _run(election, types, can_win, mode, max_t, "max")


def check_fractional_deviation(election: Election, p: Mapping[str, Fraction], mode: str = "exact",
                               max_t: int | None = None) -> CoreVerdict:
    """Look for a discrete set T that a large enough group strictly prefers to ``p``.

    Finding one refutes fractional core membership; finding none only shows
    that no integral deviation exists.
    """
    p = validate_fractional(election, p)
    mass = [p[c] for c in election.candidates]
    types = []
    for classes, voters in _voter_types(election):
        values = tuple(sum((mass[c] for c in range(election.m) if cls >> c & 1), Fraction(0))
                       for cls in classes)
        types.append(((classes, values), voters, len(voters)))

    def can_win(state, chosen, allowed, slots):
        return _lex_can_win(state[0], state[1], chosen, allowed, slots)

    return _run(election, types, can_win, mode, max_t, "lex")


def validate_witness(election: Election, committee: Iterable[str], witness: BlockingWitness) -> bool:
    """Re-check a witness from scratch: size bound and every member's strict preference."""
    if not witness.voters or not witness.T:
        return False
    if not threshold_holds(election.n, election.k, len(witness.voters), len(witness.T), witness.mode):
        return False
    committee = list(committee)
    t_mask = election.mask_of(witness.T)
    w_mask = election.mask_of(committee)
    for i in witness.voters:
        if witness.extension == "max":
            rank = election.rank[i]
            best_t = min(rank[c] for c in range(election.m) if t_mask >> c & 1)
            best_w = min((rank[c] for c in range(election.m) if w_mask >> c & 1), default=len(election.rankings[i]))
            if not best_t < best_w:
                return False
        elif _lex_masks(election, i, t_mask, w_mask) is not Lex.FIRST:
            return False
    return True


def check_local_stability(election: Election, committee: Iterable[str], quota=None) -> LocalStabilityVerdict:
    """Is there c outside W and at least ``quota`` voters ranking c above every member of W?

    ``quota`` defaults to ceil(n/k).  Candidates are tried in canonical order.
    """
    n, k = election.n, election.k
    quota = Fraction(-(-n // k)) if quota is None else Fraction(quota)
    w = election.mask_of(committee)
    best = [min((r[c] for c in range(election.m) if w >> c & 1), default=len(election.rankings[i]))
            for i, r in enumerate(election.rank)]
    for c in range(election.m):
        if w >> c & 1:
            continue
        voters = tuple(i for i, r in enumerate(election.rank) if r[c] < best[i])
        if len(voters) >= quota and voters:
            return LocalStabilityVerdict(False, quota, election.candidates[c],
                                         tuple(election.voter_ids[i] for i in voters), voters)
    return LocalStabilityVerdict(True, quota)


def find_empty_core_evidence(election: Election, committees: Iterable[Iterable[str]], max_t: int = 2,
                             mode: str = "exact") -> list:
    """Run a bounded core check on each committee and collect the blocking witnesses.

    Committees the bounded search cannot block are returned with a None witness.
    """
    out = []
    for committee in committees:
        committee = tuple(election.sort_names(committee))
        verdict = check_core(election, committee, mode, max_t)
        out.append((committee, verdict.witness))
    return out
