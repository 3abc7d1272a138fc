"""Consecutive-ones ordering by overlap components and block refinement.

Given a family of subsets of ``range(size)``, find a linear order of the
ground set in which every subset is contiguous.  Sets that overlap (meet
without containment) pin each other down up to reversal, so each overlap
component is laid out incrementally as a sequence of blocks; components are
then nested into one another by decreasing union size.
"""

from __future__ import annotations

from collections import deque


class Undecided(Exception):
    """The layout hit a case it does not handle; caller should search instead."""


def _overlap(s: frozenset, t: frozenset) -> bool:
    return bool(s & t) and not s <= t and not t <= s


def _components(sets: list) -> list:
    parent = list(range(len(sets)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in range(len(sets)):
        for b in range(a + 1, len(sets)):
            if _overlap(sets[a], sets[b]):
                parent[find(a)] = find(b)
    groups: dict = {}
    for a in range(len(sets)):
        groups.setdefault(find(a), []).append(sets[a])
    return list(groups.values())


def _place(blocks: list, placed: set, t: frozenset):
    hit = [j for j, b in enumerate(blocks) if b & t]
    new = frozenset(t - placed)
    if not hit:
        raise Undecided
    s, e = hit[0], hit[-1]
    if hit != list(range(s, e + 1)):
        return None
    if any(not blocks[j] <= t for j in range(s + 1, e)):
        return None
    bs, be = blocks[s], blocks[e]
    if new:
        right_ok = e == len(blocks) - 1 and (s == e or be <= t)
        left_ok = s == 0 and (s == e or bs <= t)
        if right_ok:
            parts = [bs - t, bs & t] + blocks[s + 1:e + 1]
            return blocks[:s] + [p for p in parts if p] + [new]
        if left_ok:
            parts = blocks[s:e] + [be & t, be - t] if s < e else [bs & t, bs - t]
            return [new] + [p for p in parts if p] + blocks[e + 1:]
        return None
    if s == e:
        raise Undecided
    parts = [bs - t, bs & t] + blocks[s + 1:e] + [be & t, be - t]
    return blocks[:s] + [p for p in parts if p] + blocks[e + 1:]


def _layout(component: list):
    """Block sequence for one overlap component, or None if impossible."""
    todo = sorted(component, key=lambda s: (-len(s), sorted(s)))
    first = todo[0]
    blocks = [frozenset(first)]
    placed = set(first)
    done = [first]
    pending = deque(todo[1:])
    stall = 0
    while pending:
        t = pending.popleft()
        if not any(_overlap(t, d) for d in done):
            pending.append(t)
            stall += 1
            if stall > len(pending):
                raise Undecided
            continue
        stall = 0
        blocks = _place(blocks, placed, t)
        if blocks is None:
            return None
        placed |= t
        done.append(t)
    return blocks


def consecutive_ones_order(size: int, sets) -> list | None:
    """Order of ``range(size)`` making every set contiguous.

    Returns None when no such order exists.  Raises ``Undecided`` if the
    nesting step meets an unexpected configuration.
    """
    family = sorted({frozenset(s) for s in sets if 1 < len(s) < size}, key=lambda s: (-len(s), sorted(s)))
    layouts = []
    for comp in _components(family):
        blocks = _layout(comp)
        if blocks is None:
            return None
        union = frozenset().union(*comp)
        layouts.append((union, blocks, len(comp)))
    layouts.sort(key=lambda x: (-len(x[0]), min(x[0])))

    seq = [frozenset(range(size))]
    for union, blocks, count in layouts:
        host = next((j for j, b in enumerate(seq) if union <= b), None)
        if host is not None:
            rest = seq[host] - union
            seq = seq[:host] + ([rest] if rest else []) + blocks + seq[host + 1:]
            continue
        hit = [j for j, b in enumerate(seq) if b & union]
        run = frozenset().union(*(seq[j] for j in hit))
        if count == 1 and run == union and hit == list(range(hit[0], hit[-1] + 1)):
            continue
        raise Undecided

    order = [x for b in seq for x in sorted(b)]
    pos = {x: p for p, x in enumerate(order)}
    for s in family:
        ps = sorted(pos[x] for x in s)
        if ps[-1] - ps[0] + 1 != len(ps):
            raise Undecided
    return order
