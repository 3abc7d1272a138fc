import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corecommittee import Election, ElectionError
from corecommittee.domains import (CandidateOrder, Domain, Embedding, MixedOrder, VoterOrder, equivalence_check,
                                   lc_from_interval, recognize, stp_order_from_stc, verify)
from corecommittee.domains.c1p import Undecided, consecutive_ones_order
from corecommittee.fixtures import fixture, tm_empty_core_family
from corecommittee.generators import GeneratorSpec, SplitMix64, generate

import oracles
from instances import lc_instance, sc_instance, sp_instance


def strict(cands, orders, k=1):
    return Election.from_lists(cands, [[[x] for x in o] for o in orders], k)


def random_strict(rng, n, m):
    names = tuple(f"c{j}" for j in range(m))
    return Election(names, tuple(tuple(frozenset([c]) for c in rng.permutation(m)) for _ in range(n)), 1)


def random_approval(rng, n, m):
    names = tuple(f"c{j}" for j in range(m))
    sets = []
    for _ in range(n):
        s = [names[c] for c in range(m) if rng.below(2)]
        sets.append(s or [names[rng.below(m)]])
    return Election.approval(names, sets, 1)


# verify

def test_fig1_embedding_verifies():
    fx = fixture("monroe-ex1")
    assert verify(Domain.EUCLID1D, fx.election, fx.certificates["EUCLID1D"])
    moved = Embedding((0, 5, 7, 10), fx.certificates["EUCLID1D"].candidate_pos)
    assert not verify(Domain.EUCLID1D, fx.election, moved)


def test_single_voter_sp_axes_match_oracle():
    e = strict("abcd", ["cadb"])
    for axis in itertools.permutations("abcd"):
        idx = [e.cidx(x) for x in axis]
        assert bool(verify(Domain.SP, e, CandidateOrder(axis))) == oracles.is_single_peaked(e, idx)
    assert verify(Domain.SP, e, CandidateOrder(("b", "d", "c", "a")))


def test_ssc_not_lc_natural_mixed_order_fails_lc_with_first_quadruple():
    e = fixture("ssc-not-lc").election
    order = MixedOrder.join(VoterOrder((0, 1, 2)), CandidateOrder(("a", "b", "c")))
    res = verify(Domain.LC, e, order)
    assert not res
    # voters 1 before 2, candidates b before c: 2 approves b, 1 prefers c to b
    assert res.violation == ("1", "2", "b", "c")


def test_ssc_not_lc_every_mixed_order_fails_lc():
    e = fixture("ssc-not-lc").election
    items = [("v", 0), ("v", 1), ("v", 2), ("c", "a"), ("c", "b"), ("c", "c")]
    perms = list(itertools.permutations(items))
    assert len(perms) == 720
    assert not any(verify(Domain.LC, e, MixedOrder(p)) for p in perms)


def test_certificate_domain_mismatch_is_an_input_error():
    e = fixture("monroe-ex1").election
    with pytest.raises(ElectionError):
        verify(Domain.SP, e, VoterOrder((0, 1, 2, 3)))
    with pytest.raises(ElectionError):
        verify(Domain.SC, e, CandidateOrder(tuple("abcde")))
    with pytest.raises(ElectionError):
        verify(Domain.RSTC, e, VoterOrder((0, 1, 2, 3)))
    with pytest.raises(ElectionError):
        verify(Domain.SC, e, VoterOrder((0, 1, 2)))


def test_violation_is_reported_by_name():
    e = strict("abc", ["abc", "cab", "bca"])
    res = verify(Domain.SP, e, CandidateOrder(("a", "b", "c")))
    assert not res
    voter, peak = res.violation[:2]
    assert voter in e.voter_ids and peak in e.candidates


# recognize

def test_ssc_not_lc_recognition():
    e = fixture("ssc-not-lc").election
    lc = recognize(Domain.LC, e)
    assert lc.refuted and lc.orders_covered == 720
    ssc = recognize(Domain.SSC, e)
    assert ssc.certified and verify(Domain.SSC, e, ssc.certificate)


def test_monroe_ex1_sp_axis():
    res = recognize(Domain.SP, fixture("monroe-ex1").election)
    assert res.certified
    assert res.certificate.candidates in (tuple("abcde"), tuple("edcba"))


def test_euclid_recognition_is_not_offered():
    assert recognize(Domain.EUCLID1D, fixture("monroe-ex1").election).outcome == "unknown"


def test_budget_exhaustion_is_unknown():
    e = tm_empty_core_family(3)
    res = recognize(Domain.TM, e, budget=5)
    assert res.outcome == "unknown"


@pytest.mark.parametrize("seed", range(40))
def test_strict_recognizers_match_brute_force(seed):
    rng = SplitMix64(seed)
    e = random_strict(rng, 1 + rng.below(4), 1 + rng.below(4))
    sp = recognize(Domain.SP, e, None)
    assert sp.certified == oracles.exists_order(e.m, lambda o: oracles.is_single_peaked(e, o))
    if sp.certified:
        assert oracles.is_single_peaked(e, sp.certificate.indices(e))
    sc = recognize(Domain.SC, e, None)
    assert sc.certified == oracles.exists_order(e.n, lambda o: oracles.is_single_crossing(e, o))
    if sc.certified:
        assert oracles.is_single_crossing(e, sc.certificate.voters)


@pytest.mark.parametrize("seed", range(40))
def test_interval_recognizers_match_brute_force(seed):
    rng = SplitMix64(1000 + seed)
    e = random_approval(rng, 1 + rng.below(5), 1 + rng.below(5))
    vi = recognize(Domain.VI, e, None)
    assert vi.certified == oracles.exists_order(e.n, lambda o: oracles.is_voter_interval(e, o))
    ci = recognize(Domain.CI, e, None)
    assert ci.certified == oracles.exists_order(e.m, lambda o: oracles.is_candidate_interval(e, o))
    if ci.certified:
        assert oracles.is_candidate_interval(e, ci.certificate.indices(e))


@pytest.mark.parametrize("seed", range(25))
def test_lc_recognizer_matches_brute_force(seed):
    rng = SplitMix64(2000 + seed)
    e = random_approval(rng, 1 + rng.below(3), 1 + rng.below(3))
    res = recognize(Domain.LC, e, None)
    items = [("v", i) for i in range(e.n)] + [("c", c) for c in range(e.m)]
    truth = any(oracles.is_lc_mixed(e, p) for p in itertools.permutations(items))
    assert res.certified == truth


@pytest.mark.parametrize("seed", range(30))
def test_verified_certificate_implies_recognition(seed):
    for make, dom in ((sp_instance, Domain.SP), (sc_instance, Domain.SC), (lc_instance, Domain.LC)):
        e, cert = make(seed)
        if e.n + e.m > 12 and dom is Domain.LC:
            continue
        assert verify(dom, e, cert)
        assert recognize(dom, e, None).certified


def test_c1p_against_brute_force():
    rng = SplitMix64(77)
    for _ in range(300):
        size = 1 + rng.below(6)
        sets = [frozenset(x for x in range(size) if rng.below(3) == 0) for _ in range(rng.below(5))]
        truth = next((o for o in itertools.permutations(range(size))
                      if all(oracles.contiguous([o.index(x) for x in s]) for s in sets)), None)
        try:
            order = consecutive_ones_order(size, sets)
        except Undecided:
            continue
        assert (order is None) == (truth is None)
        if order is not None:
            assert all(oracles.contiguous([order.index(x) for x in s]) for s in sets)


def test_rstc_shortcut_agrees_with_subset_check():
    for seed in range(15):
        for make in (sp_instance, sc_instance):
            e, _ = make(seed)
            if e.m > 6:
                continue
            quick = recognize(Domain.RSTC, e, None)
            full = recognize(Domain.RSTC, e, None, exhaustive_rstc=True)
            assert quick.certified and full.certified


def test_rstc_refutation_names_a_subset():
    e = tm_empty_core_family(2)
    sub = e.restrict(candidates=["a1", "a2", "b1", "b2", "g", "h"], k=1)
    res = recognize(Domain.RSTC, sub, None)
    assert res.refuted
    witness = sub.restrict(candidates=res.witness, k=1)
    assert recognize(Domain.STC, witness, None).refuted


# constructions

def test_lc_from_interval_pav_ex3():
    fx = fixture("pav-ex3")
    for dom in (Domain.VI, Domain.CI):
        order = lc_from_interval(fx.election, dom, fx.certificates[dom.value])
        assert verify(Domain.LC, fx.election, order)


def test_lc_from_interval_single_candidate():
    e = Election.approval(("a",), [["a"], ["a"]], 1)
    order = lc_from_interval(e, Domain.VI, VoterOrder((1, 0)))
    assert verify(Domain.LC, e, order)
    for p in itertools.permutations([("v", 0), ("v", 1), ("c", "a")]):
        assert verify(Domain.LC, e, MixedOrder(p))


def test_lc_from_interval_rejects_bad_certificate():
    e = fixture("ssc-not-lc").election
    with pytest.raises(ElectionError):
        lc_from_interval(e, Domain.CI, CandidateOrder(("a", "b", "c")))


@pytest.mark.parametrize("model,dom", [("vi-intervals", Domain.VI), ("ci-intervals", Domain.CI)])
def test_lc_from_interval_random(model, dom):
    for seed in range(100):
        g = generate(GeneratorSpec(model, 2 + seed % 9, 1 + seed % 7, 1, seed))
        order = lc_from_interval(g.election, dom, g.certificates[dom.value])
        assert verify(Domain.LC, g.election, order)


def test_stp_order_from_stc_examples():
    e = fixture("monroe-ex1").election
    assert verify(Domain.STP, e, stp_order_from_stc(e, VoterOrder((0, 1, 2, 3))))
    t = tm_empty_core_family(3)
    order = stp_order_from_stc(t, VoterOrder(tuple(range(t.n))))
    assert verify(Domain.STP, t, order)


def test_stp_order_two_candidates_shared_top():
    e = strict("ab", ["ab", "ab"])
    order = stp_order_from_stc(e, VoterOrder((0, 1)))
    assert verify(Domain.STP, e, order)


def test_stp_order_needs_strict():
    e = Election.approval(("a", "b", "c"), [["a"], ["b"]], 1)
    with pytest.raises(ElectionError):
        stp_order_from_stc(e, VoterOrder((0, 1)))


def test_equivalence_examples():
    assert equivalence_check(fixture("monroe-ex1").election, "STP-TM").verdict == "agree"
    single = strict("abc", ["bca"])
    for pair in ("STP-TM", "STP-STC"):
        report = equivalence_check(single, pair)
        assert report.verdict == "agree" and set(report.outcomes.values()) == {"certified"}


def test_equivalence_all_strict_3x3():
    orders = list(itertools.permutations("abc"))
    for profile in itertools.product(orders, repeat=3):
        e = strict("abc", ["".join(o) for o in profile])
        for pair in ("STP-TM", "STP-STC"):
            assert equivalence_check(e, pair, None).verdict == "agree", profile


# closure properties

@pytest.mark.parametrize("seed", range(40))
def test_lc_implies_ssc_and_well_ordered(seed):
    e, order = lc_instance(seed)
    assert verify(Domain.LC, e, order)
    assert verify(Domain.SSC, e, order.voter_order)
    assert verify(Domain.WELL_ORDERED, e, order)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32))
def test_strict_profiles_are_well_ordered_for_any_order(seed):
    rng = SplitMix64(seed)
    e = random_strict(rng, 1 + rng.below(4), 1 + rng.below(4))
    items = [("v", i) for i in range(e.n)] + [("c", c) for c in e.candidates]
    rng.shuffle(items)
    assert verify(Domain.WELL_ORDERED, e, MixedOrder(tuple(items)))


@pytest.mark.parametrize("seed", range(30))
def test_stc_survives_voter_deletion(seed):
    e, order = sc_instance(seed)
    assert verify(Domain.STC, e, order)
    rng = SplitMix64(seed)
    keep = sorted(i for i in range(e.n) if rng.below(2)) or [0]
    sub = e.restrict(voters=keep)
    assert verify(Domain.STC, sub, VoterOrder(tuple(range(len(keep)))))


def test_empty_core_family_is_stc_but_has_a_non_stc_subinstance():
    e = tm_empty_core_family(7)
    assert verify(Domain.STC, e, VoterOrder(tuple(range(e.n))))
    sub = e.restrict(voters=[0, 1, 2], candidates=["a1", "a2", "a3"], k=1)
    assert recognize(Domain.STC, sub, None).refuted
