"""Seeded instance families for the property suites."""

from __future__ import annotations

from hypothesis import strategies as st

from corecommittee.domains import CandidateOrder, MixedOrder, VoterOrder
from corecommittee.election import Election
from corecommittee.generators import GeneratorSpec, SplitMix64, generate


def _sizes(rng: SplitMix64, max_n=12, max_m=8):
    """Random (n, m, k) with k dividing n and k <= m."""
    while True:
        n = 1 + rng.below(max_n)
        m = 1 + rng.below(max_m)
        ks = [k for k in range(1, min(n, m) + 1) if n % k == 0]
        if ks:
            return n, m, ks[rng.below(len(ks))]


def vi_instance(seed: int):
    rng = SplitMix64(seed)
    n, m, k = _sizes(rng)
    g = generate(GeneratorSpec("vi-intervals", n, m, k, seed))
    return g.election, g.certificates["VI"]


def ci_instance(seed: int):
    rng = SplitMix64(seed)
    n, m, k = _sizes(rng)
    g = generate(GeneratorSpec("ci-intervals", n, m, k, seed))
    return g.election, g.certificates["CI"]


def lc_instance(seed: int):
    """Random approvals closed under the linear-consistency rule for a random mixed order."""
    rng = SplitMix64(seed)
    n, m, k = _sizes(rng)
    items = [("v", i) for i in range(n)] + [("c", c) for c in range(m)]
    rng.shuffle(items)
    vpos = [p for p, (t, _) in enumerate(items) if t == "v"]
    vorder = [x for t, x in items if t == "v"]
    corder = [x for t, x in items if t == "c"]
    approve = [[rng.below(3) == 0 for _ in range(m)] for _ in range(n)]
    for i in range(n):
        if not any(approve[i]):
            approve[i][rng.below(m)] = True
    changed = True
    while changed:
        changed = False
        for p, i in enumerate(vorder):
            for j in vorder[p + 1:]:
                for q, a in enumerate(corder):
                    if not approve[j][a]:
                        continue
                    if not approve[i][a] and any(approve[i][b] for b in corder[q + 1:]):
                        approve[i][a] = True
                        changed = True
    names = tuple(f"c{j + 1}" for j in range(m))
    e = Election.approval(names, [[names[c] for c in range(m) if approve[i][c]] for i in range(n)], k)
    order = MixedOrder(tuple(("v", x) if t == "v" else ("c", names[x]) for t, x in items))
    del vpos
    return e, order


def sp_instance(seed: int):
    """Strict single-peaked profile on a random axis; voters grow rankings outwards from a peak."""
    rng = SplitMix64(seed)
    n, m, k = _sizes(rng)
    axis = rng.permutation(m)
    rankings = []
    for _ in range(n):
        lo = hi = rng.below(m)
        ranking = [axis[lo]]
        while len(ranking) < m:
            if lo > 0 and (hi == m - 1 or rng.below(2) == 0):
                lo -= 1
                ranking.append(axis[lo])
            else:
                hi += 1
                ranking.append(axis[hi])
        rankings.append(tuple(frozenset([c]) for c in ranking))
    names = tuple(f"c{j + 1}" for j in range(m))
    return Election(names, tuple(rankings), k), CandidateOrder(tuple(names[c] for c in axis))


def sc_instance(seed: int):
    """Strict single-crossing profile: voters along a random bubble-sort path between two rankings."""
    rng = SplitMix64(seed)
    n, m, k = _sizes(rng)
    current = rng.permutation(m)
    target = {c: p for p, c in enumerate(rng.permutation(m))}
    profile = []
    for _ in range(n):
        steps = rng.below(3)
        for _ in range(steps):
            inversions = [p for p in range(m - 1) if target[current[p]] > target[current[p + 1]]]
            if not inversions:
                break
            p = inversions[rng.below(len(inversions))]
            current[p], current[p + 1] = current[p + 1], current[p]
        profile.append(tuple(frozenset([c]) for c in current))
    names = tuple(f"c{j + 1}" for j in range(m))
    return Election(names, tuple(profile), k), VoterOrder(tuple(range(n)))


FAMILIES = {"VI": vi_instance, "CI": ci_instance, "LC": lc_instance, "SP": sp_instance, "SC": sc_instance}


@st.composite
def weak_elections(draw, max_n=5, max_m=5):
    m = draw(st.integers(1, max_m))
    n = draw(st.integers(1, max_n))
    k = draw(st.integers(1, m))
    rankings = []
    for _ in range(n):
        perm = draw(st.permutations(range(m)))
        cuts = draw(st.lists(st.booleans(), min_size=m - 1, max_size=m - 1))
        classes, cur = [], [perm[0]]
        for c, cut in zip(perm[1:], cuts):
            if cut:
                classes.append(frozenset(cur))
                cur = []
            cur.append(c)
        classes.append(frozenset(cur))
        rankings.append(tuple(classes))
    return Election(tuple(f"c{j}" for j in range(m)), tuple(rankings), k)
