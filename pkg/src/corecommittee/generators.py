"""Seeded instance generators for restricted domains.

Randomness comes from SplitMix64 so that output is identical on every
platform and in every language that implements the same recurrence::

    state = (state + 0x9E3779B97F4A7C15) mod 2**64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2**64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) mod 2**64
    output z ^ (z >> 31)

Bounded integers use rejection sampling (``x mod bound`` after discarding the
top ``2**64 mod bound`` values); shuffles are Fisher-Yates from the last index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .domains import CandidateOrder, Embedding, VoterOrder
from .election import Election, ElectionError

MASK64 = (1 << 64) - 1
MODELS = ("euclid1d", "vi-intervals", "ci-intervals", "impartial-strict")


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            x = self.next()
            if x < limit:
                return x % bound

    def shuffle(self, items: list) -> list:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
        return items

    def permutation(self, size: int) -> list:
        return self.shuffle(list(range(size)))


@dataclass(frozen=True)
class GeneratorSpec:
    model: str
    n: int
    m: int
    k: int
    seed: int


@dataclass(frozen=True)
class Generated:
    election: Election
    certificates: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)


def _names(m: int) -> tuple:
    return tuple(f"c{j + 1}" for j in range(m))


def rank_by_distance(voter_pos: Fraction, candidate_pos: list) -> list:
    """Candidate indices, nearest first; equal distances go to the smaller coordinate."""
    return sorted(range(len(candidate_pos)),
                  key=lambda c: (abs(voter_pos - candidate_pos[c]), candidate_pos[c], c))


def _euclid1d(spec: GeneratorSpec, rng: SplitMix64) -> Generated:
    n, m = spec.n, spec.m
    # candidates on even integers, voters on half-integers: no voter is equidistant
    slots = rng.permutation(4 * m)[:m]
    cpos = [Fraction(2 * u) for u in slots]
    vpos = [Fraction(2 * rng.below(8 * m) + 1, 2) for _ in range(n)]
    ties = 0
    rankings = []
    for x in vpos:
        order = rank_by_distance(x, cpos)
        dists = [abs(x - cpos[c]) for c in order]
        ties += sum(1 for a, b in zip(dists, dists[1:]) if a == b)
        rankings.append(tuple(frozenset([c]) for c in order))
    names = _names(m)
    election = Election(names, tuple(rankings), spec.k)
    axis = sorted(range(m), key=lambda c: cpos[c])
    voters = sorted(range(n), key=lambda i: (vpos[i], i))
    certs = {
        "SP": CandidateOrder(tuple(names[c] for c in axis)),
        "SC": VoterOrder(tuple(voters)),
        "EUCLID1D": Embedding(tuple(vpos), {names[c]: cpos[c] for c in range(m)}),
    }
    return Generated(election, certs, {"distance_ties_broken": ties})


def _vi(spec: GeneratorSpec, rng: SplitMix64) -> Generated:
    n, m = spec.n, spec.m
    perm = rng.permutation(n)
    spans = []
    for _ in range(m):
        lo = rng.below(n)
        hi = lo + rng.below(n - lo)
        spans.append([lo, hi])
    for p in range(n):
        if not any(lo <= p <= hi for lo, hi in spans):
            c = rng.below(m)
            spans[c] = [min(spans[c][0], p), max(spans[c][1], p)]
    names = _names(m)
    approvals = [[] for _ in range(n)]
    for c, (lo, hi) in enumerate(spans):
        for p in range(lo, hi + 1):
            approvals[perm[p]].append(names[c])
    election = Election.approval(names, approvals, spec.k)
    return Generated(election, {"VI": VoterOrder(tuple(perm))})


def _ci(spec: GeneratorSpec, rng: SplitMix64) -> Generated:
    n, m = spec.n, spec.m
    perm = rng.permutation(m)
    names = _names(m)
    approvals = []
    for _ in range(n):
        lo = rng.below(m)
        hi = lo + rng.below(m - lo)
        approvals.append([names[perm[p]] for p in range(lo, hi + 1)])
    election = Election.approval(names, approvals, spec.k)
    return Generated(election, {"CI": CandidateOrder(tuple(names[c] for c in perm))})


def _impartial(spec: GeneratorSpec, rng: SplitMix64) -> Generated:
    rankings = tuple(tuple(frozenset([c]) for c in rng.permutation(spec.m)) for _ in range(spec.n))
    return Generated(Election(_names(spec.m), rankings, spec.k))


_BUILDERS = {
    "euclid1d": _euclid1d,
    "vi-intervals": _vi,
    "ci-intervals": _ci,
    "impartial-strict": _impartial,
}


def generate(spec: GeneratorSpec) -> Generated:
    """Draw an election (and its domain certificates) from ``spec``."""
    if spec.model not in _BUILDERS:
        raise ElectionError(f"unknown model {spec.model!r}; expected one of {', '.join(MODELS)}")
    if spec.n < 1 or spec.m < 1 or not 1 <= spec.k <= spec.m:
        raise ElectionError(f"invalid sizes n={spec.n}, m={spec.m}, k={spec.k}")
    return _BUILDERS[spec.model](spec, SplitMix64(spec.seed))
