"""Worked example instances with their certificates and known outcomes."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .domains import CandidateOrder, Embedding, VoterOrder
from .election import Election, ElectionError


@dataclass(frozen=True)
class Fixture:
    name: str
    election: Election
    certificates: dict = field(default_factory=dict)
    expected: dict = field(default_factory=dict)
    groups: tuple = ()  # (label, size) in voter order, when voters come in blocks


def _grouped(groups):
    """Expand ``[(label, size, ballot), ...]`` into one ballot per voter."""
    voters = []
    for _, size, ballot in groups:
        voters.extend([ballot] * size)
    return voters


def monroe_ex1() -> Fixture:
    cands = ("a", "b", "c", "d", "e")
    voters = [
        ["b", "a", "c", "d", "e"],
        ["c", "b", "d", "a", "e"],
        ["c", "d", "b", "e", "a"],
        ["d", "e", "c", "b", "a"],
    ]
    e = Election.from_lists(cands, [[[x] for x in v] for v in voters], 2)
    emb = Embedding(tuple(Fraction(x) for x in (2, 5, 7, 10)),
                    {"a": Fraction(0), "b": Fraction(3), "c": Fraction(6), "d": Fraction(9), "e": Fraction(12)})
    return Fixture("monroe-ex1", e, {
        "EUCLID1D": emb,
        "SP": CandidateOrder(cands),
        "SC": VoterOrder((0, 1, 2, 3)),
    }, {
        "monroe": {"committee": ("b", "d"), "value": 6},
        "core_witness": {"S": ("2", "3"), "T": ("c",)},
        "committee_core": ("b", "c"),
    })


def stv_ex2() -> Fixture:
    cands = ("a", "b", "c", "d", "e")
    groups = [
        ("G1", 18, "abcde"),
        ("G2", 7, "bcdea"),
        ("G3", 5, "cdeba"),
        ("G4", 16, "decba"),
        ("G5", 14, "edcba"),
    ]
    ballots = _grouped(groups)
    e = Election.from_lists(cands, [[[x] for x in b] for b in ballots], 2)
    where = {"a": 0, "b": 8, "c": 12, "d": 14, "e": 15}
    emb = Embedding(tuple(Fraction(where[b[0]]) for b in ballots), {c: Fraction(x) for c, x in where.items()})
    return Fixture("stv-ex2", e, {
        "EUCLID1D": emb,
        "SP": CandidateOrder(cands),
        "SC": VoterOrder(tuple(range(e.n))),
    }, {
        "stv": {"committee": ("d", "e"),
                "events": (("eliminated", "c", 5), ("elected", "d", 21), ("eliminated", "b", 7), ("elected", "e", 21))},
        "core_witness": {"S_size": 30, "T": ("c",)},
        "median": ("a", "d"),
    }, tuple((g, s) for g, s, _ in groups))


def pav_ex3() -> Fixture:
    bs = [f"b{j}" for j in range(1, 5)]
    ds = [f"d{j}" for j in range(1, 5)]
    cands = ("a", *bs, "c", *ds)
    e = Election.approval(cands, [[*bs, "a"], [*bs, "c"], ds], 8)
    return Fixture("pav-ex3", e, {
        "VI": VoterOrder((0, 1, 2)),
        "CI": CandidateOrder(cands),
    }, {
        "pav": {"committee": (*bs, *ds), "score": Fraction(25, 4)},
        "core_witness_ceil": {"S": ("1", "2"), "T": ("a", *bs, "c")},
    })


def rulex_ex4() -> Fixture:
    a = [f"a{j}" for j in range(1, 5)]
    b = [f"b{j}" for j in range(1, 5)]
    c = ["c1", "c2", "c3"]
    d = ["d1", "d2", "d3"]
    e_ = ["e1", "e2"]
    x = ["x1", "x2"]
    y = ["y1", "y2"]
    # x and y are declared before c and d so that ties in the price go their way
    cands = (*x, *y, *c, *a, *b, *d, *e_)
    groups = [
        ("G1", 1, [*c, *x]),
        ("G2", 8, [*c, *x, *a]),
        ("G3", 12, [*c, *a, *b, *e_]),
        ("G4", 12, [*d, *b, *a, *e_]),
        ("G5", 8, [*d, *y, *b]),
        ("G6", 1, [*d, *y]),
    ]
    e = Election.approval(cands, _grouped(groups), 14)
    axis = (*x, *c, *a, *e_, *b, *d, *y)
    return Fixture("rulex-ex4", e, {
        "VI": VoterOrder(tuple(range(e.n))),
        "CI": CandidateOrder(axis),
    }, {
        "equal_shares": {"committee": (*a, *b, *e_, *x, *y),
                         "prices": {**{m: Fraction(3, 32) for m in a + b},
                                    "e1": Fraction(1, 8), "e2": Fraction(1, 8)}},
        "pareto_better": (*a, *b, *c, *d),
    }, tuple((g, s) for g, s, _ in groups))


def ssc_not_lc() -> Fixture:
    e = Election.approval(("a", "b", "c"), [["a", "c"], ["a", "b"], ["b", "c"]], 1)
    return Fixture("ssc-not-lc", e, {"SSC": VoterOrder((0, 1, 2))},
                   {"LC": "refuted", "SSC": "certified", "mixed_orders": 720})


def tm_empty_core_family(r: int) -> Election:
    """Six clone blocks of an r-cycle plus g and h; strict, top-monotonic, k=7.

    Block orders per voter group::

        g A B C D E F h        h D E F A B C g
        g B C A E F D h        h E F D B C A g
        g C A B F D E h        h F D E C A B g

    The t-th voter of a group starts every block at its (t+1)-th clone.
    """
    if r < 2:
        raise ElectionError("r must be at least 2")
    letters = "abcdef"
    blocks = {L: [f"{L}{j}" for j in range(1, r + 1)] for L in letters}
    cands = ("g", *(x for L in letters for x in blocks[L]), "h")
    patterns = ["gabcdefh", "gbcaefdh", "gcabfdeh", "hdefabcg", "hefdbcag", "hfdecabg"]
    voters = []
    for pattern in patterns:
        for t in range(r):
            ballot = []
            for L in pattern:
                if L in blocks:
                    ballot.extend(blocks[L][t:] + blocks[L][:t])
                else:
                    ballot.append(L)
            voters.append(ballot)
    return Election.from_lists(cands, [[[x] for x in v] for v in voters], 7)


def tm_empty_core(r: int = 7) -> Fixture:
    e = tm_empty_core_family(r)
    return Fixture("tm-empty-core", e, {"STC": VoterOrder(tuple(range(e.n)))},
                   {"r": r}, tuple((f"G{g + 1}", r) for g in range(6)))


FIXTURES = {
    "monroe-ex1": monroe_ex1,
    "stv-ex2": stv_ex2,
    "pav-ex3": pav_ex3,
    "rulex-ex4": rulex_ex4,
    "ssc-not-lc": ssc_not_lc,
    "tm-empty-core": tm_empty_core,
}


def fixture(name: str) -> Fixture:
    if name not in FIXTURES:
        raise ElectionError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}")
    return FIXTURES[name]()
