"""Elections over weak rankings, committees and the lexicographic extension."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

NAME_RE = re.compile(r"^[A-Za-z0-9_]+$")


class ElectionError(ValueError):
    """Invalid input: malformed election, unknown candidate, wrong domain, ..."""


class Lex(enum.Enum):
    FIRST = "first-strictly-preferred"
    SECOND = "second-strictly-preferred"
    EQUIVALENT = "equivalent"

    def flipped(self) -> "Lex":
        if self is Lex.FIRST:
            return Lex.SECOND
        if self is Lex.SECOND:
            return Lex.FIRST
        return self


Ranking = tuple  # tuple[frozenset[int], ...]; class j holds candidate indices


@dataclass(frozen=True)
class Election:
    """An election ``(N, C, k)``.

    ``rankings[i]`` is voter ``i``'s weak ranking: a tuple of disjoint, nonempty
    frozensets of candidate indices, best class first, covering all candidates.
    Candidates are referred to by name in the public API; the position of a
    name in ``candidates`` is its canonical index.
    """

    candidates: tuple
    rankings: tuple
    k: int
    voter_ids: tuple = field(default=())

    def __post_init__(self):
        cands = tuple(self.candidates)
        object.__setattr__(self, "candidates", cands)
        m = len(cands)
        if m == 0:
            raise ElectionError("election needs at least one candidate")
        if len(set(cands)) != m:
            raise ElectionError("duplicate candidate name")
        for name in cands:
            if not isinstance(name, str) or not NAME_RE.match(name):
                raise ElectionError(f"invalid candidate name {name!r}")
        rankings = tuple(tuple(frozenset(cls) for cls in r) for r in self.rankings)
        object.__setattr__(self, "rankings", rankings)
        if not rankings:
            raise ElectionError("election needs at least one voter")
        if not isinstance(self.k, int) or not 1 <= self.k <= m:
            raise ElectionError(f"committee size k={self.k} must satisfy 1 <= k <= m={m}")
        full = frozenset(range(m))
        for i, r in enumerate(rankings):
            seen: set = set()
            for cls in r:
                if not cls:
                    raise ElectionError(f"voter {i}: empty indifference class")
                if cls & seen:
                    raise ElectionError(f"voter {i}: candidate ranked twice")
                seen |= cls
            if seen != full:
                raise ElectionError(f"voter {i}: ranking does not cover all candidates")
        ids = tuple(self.voter_ids) or tuple(str(i + 1) for i in range(len(rankings)))
        if len(ids) != len(rankings):
            raise ElectionError("voter_ids length differs from number of voters")
        if len(set(ids)) != len(ids):
            raise ElectionError("duplicate voter id")
        object.__setattr__(self, "voter_ids", ids)

    @classmethod
    def from_lists(
        cls,
        candidates: Sequence[str],
        voters: Iterable[Sequence[Iterable[str]] | Sequence[str]],
        k: int,
        voter_ids: Sequence[str] = (),
    ) -> "Election":
        """Build from candidate names.

        Each voter is a sequence of classes; a class is a name or an iterable
        of names.  Candidates left out form one implicit bottom class.
        """
        index = {c: j for j, c in enumerate(candidates)}
        rankings = []
        for v, groups in enumerate(voters):
            classes = []
            listed: set = set()
            for g in groups:
                names = [g] if isinstance(g, str) else list(g)
                try:
                    ids = frozenset(index[x] for x in names)
                except KeyError as e:
                    raise ElectionError(f"voter {v}: unknown candidate {e.args[0]!r}") from None
                if len(ids) != len(names) or ids & listed:
                    raise ElectionError(f"voter {v}: duplicate candidate")
                listed |= ids
                classes.append(ids)
            rest = frozenset(range(len(candidates))) - listed
            if rest:
                classes.append(rest)
            rankings.append(tuple(classes))
        return cls(tuple(candidates), tuple(rankings), k, tuple(voter_ids))

    @classmethod
    def approval(cls, candidates, approval_sets, k, voter_ids=()) -> "Election":
        return cls.from_lists(candidates, [[list(a)] if a else [] for a in approval_sets], k, voter_ids)

    # basic shape

    @property
    def n(self) -> int:
        return len(self.rankings)

    @property
    def m(self) -> int:
        return len(self.candidates)

    @cached_property
    def index(self) -> dict:
        return {c: j for j, c in enumerate(self.candidates)}

    @cached_property
    def rank(self) -> tuple:
        """``rank[i][c]``: 0-based class index of candidate index ``c`` for voter ``i``."""
        out = []
        for r in self.rankings:
            row = [0] * self.m
            for j, cls in enumerate(r):
                for c in cls:
                    row[c] = j
            out.append(tuple(row))
        return tuple(out)

    @cached_property
    def class_masks(self) -> tuple:
        return tuple(tuple(_mask(cls) for cls in r) for r in self.rankings)

    @cached_property
    def top_masks(self) -> tuple:
        return tuple(r[0] for r in self.class_masks)

    @cached_property
    def tops(self) -> tuple:
        return tuple(r[0] for r in self.rankings)

    @property
    def is_strict(self) -> bool:
        return all(len(r) == self.m for r in self.rankings)

    @property
    def is_approval(self) -> bool:
        return all(len(r) <= 2 for r in self.rankings)

    def approves(self, voter: int, c: int) -> bool:
        return self.rank[voter][c] == 0

    def prefers(self, voter: int, a: int, b: int) -> bool:
        """``a ≻_voter b`` on candidate indices."""
        return self.rank[voter][a] < self.rank[voter][b]

    def weakly_prefers(self, voter: int, a: int, b: int) -> bool:
        return self.rank[voter][a] <= self.rank[voter][b]

    # name <-> index conversion

    def cidx(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise ElectionError(f"unknown candidate {name!r}") from None

    def mask_of(self, committee: Iterable[str]) -> int:
        mask = 0
        for name in committee:
            mask |= 1 << self.cidx(name)
        return mask

    def names_of(self, mask_or_indices) -> frozenset:
        if isinstance(mask_or_indices, int):
            return frozenset(self.candidates[j] for j in range(self.m) if mask_or_indices >> j & 1)
        return frozenset(self.candidates[j] for j in mask_or_indices)

    def sort_names(self, names: Iterable[str]) -> list:
        return sorted(names, key=self.cidx)

    def voter_index(self, voter) -> int:
        if isinstance(voter, int) and 0 <= voter < self.n:
            return voter
        if isinstance(voter, str) and voter in self.voter_ids:
            return self.voter_ids.index(voter)
        raise ElectionError(f"unknown voter {voter!r}")

    # derived elections

    def restrict(self, voters: Sequence[int] | None = None, candidates: Iterable[str] | None = None,
                 k: int | None = None) -> "Election":
        """Sub-election on a subset of voters (kept in the given order) and candidates."""
        voters = list(range(self.n)) if voters is None else list(voters)
        keep = list(range(self.m)) if candidates is None else sorted(self.cidx(c) for c in candidates)
        remap = {c: j for j, c in enumerate(keep)}
        rankings = []
        for i in voters:
            classes = []
            for cls in self.rankings[i]:
                sub = frozenset(remap[c] for c in cls if c in remap)
                if sub:
                    classes.append(sub)
            rankings.append(tuple(classes))
        names = tuple(self.candidates[c] for c in keep)
        return Election(names, tuple(rankings), self.k if k is None else k,
                        tuple(self.voter_ids[i] for i in voters))

    def ranking_names(self, voter: int) -> list:
        return [self.sort_names(self.names_of(cls)) for cls in self.rankings[voter]]


def _mask(indices: Iterable[int]) -> int:
    mask = 0
    for j in indices:
        mask |= 1 << j
    return mask


def position_of(election: Election, voter, candidate: str) -> int:
    """1-based index of the indifference class holding ``candidate``."""
    i = election.voter_index(voter)
    return election.rank[i][election.cidx(candidate)] + 1


def _lex_masks(election: Election, i: int, a: int, b: int) -> Lex:
    for cls in election.class_masks[i]:
        ca = (cls & a).bit_count()
        cb = (cls & b).bit_count()
        if ca != cb:
            return Lex.FIRST if ca > cb else Lex.SECOND
    return Lex.EQUIVALENT


def lex_compare(election: Election, voter, first: Iterable[str], second: Iterable[str]) -> Lex:
    """Compare two candidate sets for one voter under the lexicographic extension."""
    i = election.voter_index(voter)
    return _lex_masks(election, i, election.mask_of(first), election.mask_of(second))


def lex_compare_fractional(election: Election, voter, p: Mapping[str, Fraction],
                           q: Mapping[str, Fraction]) -> Lex:
    """Lexicographic comparison of class masses of two fractional committees."""
    i = election.voter_index(voter)
    for name in list(p) + list(q):
        election.cidx(name)
    for cls in election.rankings[i]:
        names = [election.candidates[c] for c in cls]
        pa = sum((Fraction(p.get(x, 0)) for x in names), Fraction(0))
        qa = sum((Fraction(q.get(x, 0)) for x in names), Fraction(0))
        if pa != qa:
            return Lex.FIRST if pa > qa else Lex.SECOND
    return Lex.EQUIVALENT


def indicator(election: Election, committee: Iterable[str]) -> dict:
    members = set(committee)
    return {c: Fraction(1 if c in members else 0) for c in election.candidates}


def validate_fractional(election: Election, p: Mapping[str, Fraction]) -> dict:
    out = {c: Fraction(0) for c in election.candidates}
    for name, value in p.items():
        election.cidx(name)
        value = Fraction(value)
        if not 0 <= value <= 1:
            raise ElectionError(f"mass of {name} must lie in [0, 1], got {value}")
        out[name] = value
    return out


def expand_election(election: Election, factor: int | None = None) -> Election:
    """Replicate every voter ``factor`` times (default ``k``); copies are adjacent."""
    factor = election.k if factor is None else factor
    if factor < 1:
        raise ElectionError("expansion factor must be positive")
    if factor == 1:
        return election
    rankings = []
    ids = []
    for vid, r in zip(election.voter_ids, election.rankings):
        for copy in range(factor):
            rankings.append(r)
            ids.append(f"{vid}_{copy + 1}")
    return Election(election.candidates, tuple(rankings), election.k, tuple(ids))


def quota_ratio(election: Election) -> int:
    """n/k, raising when it is not integral."""
    if election.n % election.k:
        raise ElectionError(
            f"n/k = {election.n}/{election.k} is not integral; apply expand_election first")
    return election.n // election.k
