import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corecommittee import Election, ElectionError
from corecommittee.domains import CandidateOrder, Domain, MixedOrder, VoterOrder
from corecommittee.fileio import (ParseError, certificate_from_json, certificate_to_json, digest, dumps,
                                  import_preflib, parse_election, rational, result_document, serialize_election)
from corecommittee.fixtures import FIXTURES, fixture

from instances import weak_elections


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixture_round_trip(name):
    e = fixture(name).election
    assert parse_election(serialize_election(e)) == e


def test_implicit_bottom_class():
    e = parse_election("election 1 3 1\ncandidates a b c\nvoter 1: a\n")
    assert e.rankings[0] == (frozenset({0}), frozenset({1, 2}))
    assert e.is_approval


def test_comments_and_blank_lines_are_ignored():
    text = "# header\n\nelection 2 2 1   # sizes\ncandidates x y\nvoter a: y > x\n\n# done\nvoter b: x, y\n"
    e = parse_election(text)
    assert e.voter_ids == ("a", "b")
    assert e.rankings[1] == (frozenset({0, 1}),)


def test_serialization_shape():
    e = parse_election("election 2 3 1\ncandidates a b c\nvoter 1: c > a > b\nvoter 2: b, a\n")
    assert serialize_election(e) == "election 2 3 1\ncandidates a b c\nvoter 1: c > a\nvoter 2: a, b\n"


@pytest.mark.parametrize("text,line,fragment", [
    ("election 1 3 1\ncandidates a b c\nvoter 1: a > a\n", 3, "duplicate candidate"),
    ("election 1 3 1\ncandidates a b c\nvoter 1: a > z\n", 3, "unknown candidate"),
    ("election 2 3 1\ncandidates a b c\nvoter 1: a\nvoter 1: b\n", 4, "duplicate voter id"),
    ("election 1 3 4\ncandidates a b c\nvoter 1: a\n", 1, "k=4"),
    ("election 1 3 1\ncandidates a b\nvoter 1: a\n", 2, "m=3"),
    ("election 1 2 1\ncandidates a a\nvoter 1: a\n", 2, "duplicate candidate"),
    ("elect 1 2 1\n", 1, "election"),
    ("election x 2 1\n", 1, "n"),
    ("election 1 2 1\ncandidates a b\nvoter 1 a\n", 3, "voter"),
    ("election 1 2 1\ncandidates a b\nvoter 1: a, > b\n", 3, "empty candidate"),
    ("election 1 2 1\ncandidates a b-c\n", 2, "invalid candidate name"),
])
def test_malformed_input_reports_line(text, line, fragment):
    with pytest.raises(ParseError) as info:
        parse_election(text)
    assert info.value.line == line
    assert fragment in str(info.value)


def test_voter_count_mismatch():
    with pytest.raises(ParseError, match="n=2"):
        parse_election("election 2 2 1\ncandidates a b\nvoter 1: a\n")
    with pytest.raises(ParseError):
        parse_election("")


@settings(max_examples=200, deadline=None)
@given(weak_elections(max_n=6, max_m=6))
def test_round_trip_property(e):
    text = serialize_election(e)
    assert parse_election(text) == e
    assert serialize_election(parse_election(text)) == text


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet="election candidates voter 0123:ab,>#\n", max_size=80))
def test_garbage_only_raises_election_errors(text):
    try:
        parse_election(text)
    except ElectionError:
        pass


# PrefLib

SOC = """# FILE NAME: demo.soc
# DATA TYPE: soc
# NUMBER ALTERNATIVES: 3
# NUMBER VOTERS: 4
# NUMBER UNIQUE ORDERS: 2
# ALTERNATIVE NAME 1: x
# ALTERNATIVE NAME 2: y
# ALTERNATIVE NAME 3: z
3: 1,2,3
1: 3,1,2
"""

TOC = """# NUMBER ALTERNATIVES: 4
# NUMBER VOTERS: 2
# NUMBER UNIQUE ORDERS: 2
1: 2,{1,3},4
1: {1,2},3
"""

CAT = """# NUMBER ALTERNATIVES: 3
# NUMBER VOTERS: 2
1: {1,3},{2}
1: 2
"""

LEGACY = """3
1,x
2,y
3,z
4,4,2
3,1,2,3
1,3,1,2
"""


def test_preflib_soc_expands_multiplicities():
    e = import_preflib(SOC, "soc", 1)
    assert (e.n, e.m) == (4, 3)
    assert e.candidates == ("x", "y", "z")
    assert e.ranking_names(3) == [["z"], ["x"], ["y"]]


def test_preflib_toc_keeps_tie_groups():
    e = import_preflib(TOC, "toc", 2)
    assert e.candidates == ("c1", "c2", "c3", "c4")
    assert e.ranking_names(0) == [["c2"], ["c1", "c3"], ["c4"]]
    assert e.ranking_names(1) == [["c1", "c2"], ["c3"], ["c4"]]


def test_preflib_cat_is_approval():
    e = import_preflib(CAT, "cat", 1)
    assert e.is_approval
    assert e.ranking_names(0) == [["c1", "c3"], ["c2"]]
    assert e.ranking_names(1) == [["c2"], ["c1", "c3"]]


def test_preflib_legacy_header():
    assert import_preflib(LEGACY, "soc", 1) == import_preflib(SOC, "soc", 1)


@pytest.mark.parametrize("text,kind,fragment", [
    (SOC, "tog", "unsupported"),
    (SOC.replace("VOTERS: 4", "VOTERS: 5"), "soc", "NUMBER VOTERS"),
    (SOC.replace("ORDERS: 2", "ORDERS: 3"), "soc", "NUMBER UNIQUE ORDERS"),
    (SOC.replace("1: 3,1,2", "1: 3,1"), "soc", "complete"),
    (SOC.replace("1: 3,1,2", "1: 3,1,9"), "soc", "unknown alternative"),
    ("# DATA TYPE: soc\n1: 1\n", "soc", "NUMBER ALTERNATIVES"),
    ("3\n1,x\n", "soc", "legacy"),
])
def test_preflib_errors(text, kind, fragment):
    with pytest.raises(ParseError, match=fragment):
        import_preflib(text, kind, 1)


# JSON

def test_rationals_and_digest():
    assert rational(Fraction(6, 4)) == "3/2"
    assert rational(2) == "2/1"
    assert digest("abc").startswith("sha256:ba7816bf")


@pytest.mark.parametrize("name,dom", [("monroe-ex1", "EUCLID1D"), ("monroe-ex1", "SP"), ("monroe-ex1", "SC")])
def test_certificate_json_round_trip(name, dom):
    fx = fixture(name)
    doc = certificate_to_json(fx.election, Domain(dom), fx.certificates[dom])
    doc = json.loads(json.dumps(doc))
    assert certificate_from_json(fx.election, doc) == fx.certificates[dom]


def test_mixed_certificate_json_round_trip():
    e = fixture("ssc-not-lc").election
    cert = MixedOrder.join(VoterOrder((2, 0, 1)), CandidateOrder(("b", "a", "c")))
    doc = certificate_to_json(e, Domain.LC, cert)
    assert doc["order"][0] == {"voter": "3"}
    assert certificate_from_json(e, doc) == cert


def test_bad_certificate_json():
    e = fixture("ssc-not-lc").election
    with pytest.raises(ElectionError):
        certificate_from_json(e, {"kind": "voter-order", "order": ["9"]})
    with pytest.raises(ElectionError):
        certificate_from_json(e, {"kind": "tree"})


def test_result_document_schema():
    doc = result_document("check-core", "election 1 1 1\n", {"value": Fraction(1, 3), "set": {"b", "a"}})
    text = dumps(doc)
    back = json.loads(text)
    assert set(back) == {"schema", "command", "input-digest", "outcome", "witnesses", "certificates", "trace",
                         "timings"}
    assert back["outcome"] == {"value": "1/3", "set": ["a", "b"]}
    assert text == dumps(json.loads(text))


def test_election_equality_is_structural():
    a = Election.approval(("a", "b"), [["a"]], 1)
    assert parse_election(serialize_election(a)) == a
