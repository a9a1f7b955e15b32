"""Subtree and common-chain reductions, iterated to a kernel.

Both rules act on a pair of trees with the same number of leaves and remove
structure the two trees share, leaving a smaller pair with the same rotation
distance.

A common chain here is a run of spine nodes p_1..p_m, each spanning the same
leaf interval in both trees, where p_j has a pendant child t_j that is
identical (same leaf interval, same shape) in both trees and p_{j+1} is the
other child of p_j. In polygon terms the spine nodes are adjacent shared
diagonals. Reducing a chain keeps its bottom three spine nodes, with their
pendants collapsed to single leaves, and drops the rest.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator

from .tree import Layout, Tree

Interval = tuple[int, int]

MIN_CHAIN = 4


class ReductionError(ValueError):
    pass


class SizeMismatch(ValueError):
    pass


class Side(enum.Enum):
    LEFT = "L"
    RIGHT = "R"


class ChainMode(enum.Enum):
    # pendant on opposite sides in the two trees, exactly as the definition reads
    LITERAL = "literal"
    # additionally accept pendants on the same side in both trees
    SAME_SIDE = "same-side"


DEFAULT_CHAIN_MODE = ChainMode.SAME_SIDE


class ReductionKind(enum.Enum):
    SUBTREE = "subtree"
    CHAIN = "chain"


@dataclass(frozen=True)
class CommonSubtree:
    lo: int
    hi: int
    shape: Tree

    @property
    def interval(self) -> Interval:
        return self.lo, self.hi

    @property
    def width(self) -> int:
        return self.hi - self.lo + 1


@dataclass(frozen=True)
class CommonChain:
    pendants: tuple[CommonSubtree, ...]
    sides_t1: tuple[Side, ...]
    sides_t2: tuple[Side, ...]
    spine: tuple[Interval, ...]

    @property
    def m(self) -> int:
        return len(self.pendants)


@dataclass(frozen=True)
class ReductionEvent:
    """One applied reduction, enough to replay it or to undo it on any tree
    that still carries the shared structure it left behind."""

    kind: ReductionKind
    before_intervals: tuple[Interval, ...]
    replacement: tuple[int, ...]
    leaves_before: int
    leaves_after: int
    shapes: tuple[Tree, ...]
    sides_t1: tuple[Side, ...] = ()
    sides_t2: tuple[Side, ...] = ()
    spine: tuple[Interval, ...] = ()
    anchor_after: Interval | None = None
    _segments: tuple = field(default=(), repr=False, compare=False)

    def remap(self, label: int) -> int | None:
        """New label of an old leaf; None if the leaf was deleted."""
        if not 0 <= label < self.leaves_before:
            raise IndexError(label)
        shift = 0
        for lo, hi, deleted in self._segments:
            if label > hi:
                shift += (hi - lo + 1) if deleted else (hi - lo)
            elif label >= lo:
                return None if deleted else lo - shift
            else:
                break
        return label - shift

    @property
    def label_remap(self) -> tuple[int | None, ...]:
        return tuple(self.remap(x) for x in range(self.leaves_before))


@dataclass(frozen=True)
class KernelPair:
    t1p: Tree
    t2p: Tree
    events: tuple[ReductionEvent, ...]
    t1: Tree
    t2: Tree
    chain_mode: ChainMode = DEFAULT_CHAIN_MODE

    @property
    def leaf_count(self) -> int:
        return self.t1p.leaf_count

    def swapped(self) -> "KernelPair":
        return KernelPair(self.t2p, self.t1p, tuple(_swap_event(e) for e in self.events),
                          self.t2, self.t1, self.chain_mode)


def _swap_event(e: ReductionEvent) -> ReductionEvent:
    return ReductionEvent(e.kind, e.before_intervals, e.replacement, e.leaves_before,
                          e.leaves_after, e.shapes, e.sides_t2, e.sides_t1, e.spine,
                          e.anchor_after, e._segments)


def _check_sizes(t1: Tree, t2: Tree) -> None:
    if t1.n != t2.n:
        raise SizeMismatch(f"trees have {t1.leaf_count} and {t2.leaf_count} leaves")


# -- subtree rule --------------------------------------------------------------

def find_common_subtrees(t1: Tree, t2: Tree) -> list[CommonSubtree]:
    """Maximal proper subtrees with at least two leaves shared by both trees,
    ordered by leaf interval."""
    _check_sizes(t1, t2)
    lay1, lay2 = t1.layout, t2.layout
    where2 = lay2.by_interval()
    found = []
    p = 1
    bits = t1.bits
    while p < len(bits):
        if bits[p] == "1":
            iv = lay1.interval(p)
            q = where2.get(iv)
            if q is not None and lay1.subtree(p) == lay2.subtree(q):
                found.append(CommonSubtree(iv[0], iv[1], Tree._trusted(lay1.subtree(p))))
                p = lay1.ends[p]
                continue
        p += 1
    return found


def _collapse(t: Tree, lo: int, hi: int, shape: Tree | None = None) -> Tree:
    lay = t.layout
    p = lay.by_interval().get((lo, hi))
    if p is None or (shape is not None and lay.subtree(p) != shape.bits):
        raise ReductionError(f"tree {t.bits} has no subtree {shape.bits if shape else ''} on leaves {lo}..{hi}")
    return Tree._trusted(t.bits[:p] + "0" + t.bits[lay.ends[p]:])


def _subtree_event(s: CommonSubtree, leaves: int) -> ReductionEvent:
    return ReductionEvent(
        kind=ReductionKind.SUBTREE,
        before_intervals=(s.interval,),
        replacement=(s.lo,),
        leaves_before=leaves,
        leaves_after=leaves - s.width + 1,
        shapes=(s.shape,),
        _segments=((s.lo, s.hi, False),),
    )


def apply_subtree_reduction(t1: Tree, t2: Tree, s: CommonSubtree) -> tuple[Tree, Tree, ReductionEvent]:
    _check_sizes(t1, t2)
    if s.hi <= s.lo:
        raise ReductionError("a common subtree needs at least two leaves")
    r1 = _collapse(t1, s.lo, s.hi, s.shape)
    r2 = _collapse(t2, s.lo, s.hi, s.shape)
    return r1, r2, _subtree_event(s, t1.leaf_count)


# -- chain rule ----------------------------------------------------------------

def _pendant_child(lay1: Layout, p1: int, lay2: Layout, p2: int, mode: ChainMode):
    """The unique child of p1 matching a child of p2 as a pendant, or None."""
    kids1 = ((Side.LEFT, p1 + 1), (Side.RIGHT, lay1.ends[p1 + 1]))
    kids2 = ((Side.LEFT, p2 + 1), (Side.RIGHT, lay2.ends[p2 + 1]))
    hits = []
    for s1, c1 in kids1:
        for s2, c2 in kids2:
            if mode is ChainMode.LITERAL and s1 is s2:
                continue
            if lay1.interval(c1) == lay2.interval(c2) and lay1.subtree(c1) == lay2.subtree(c2):
                hits.append((s1, c1, s2, c2))
    if len(hits) != 1:
        return None
    return hits[0]


def find_common_chains(t1: Tree, t2: Tree, mode: ChainMode = DEFAULT_CHAIN_MODE,
                       min_length: int = MIN_CHAIN) -> list[CommonChain]:
    """Maximal common chains with at least ``min_length`` pendants, ordered by
    the leaf interval of their top spine node."""
    _check_sizes(t1, t2)
    lay1, lay2 = t1.layout, t2.layout
    where2 = lay2.by_interval()
    links = {}
    for p in lay1.internal_positions:
        q = where2.get(lay1.interval(p))
        if q is None or t2.bits[q] != "1":
            continue
        hit = _pendant_child(lay1, p, lay2, q, mode)
        if hit is None:
            continue
        s1, c1, s2, _ = hit
        nxt = lay1.ends[p + 1] if s1 is Side.LEFT else p + 1
        links[p] = (s1, c1, s2, nxt)
    heads = set(links) - {v[3] for v in links.values()}
    chains = []
    for head in sorted(heads):
        pend, sides1, sides2, spine = [], [], [], []
        p = head
        while p in links:
            s1, c1, s2, nxt = links[p]
            lo, hi = lay1.interval(c1)
            pend.append(CommonSubtree(lo, hi, Tree._trusted(lay1.subtree(c1))))
            sides1.append(s1)
            sides2.append(s2)
            spine.append(lay1.interval(p))
            p = nxt
        if len(pend) >= min_length:
            chains.append(CommonChain(tuple(pend), tuple(sides1), tuple(sides2), tuple(spine)))
    chains.sort(key=lambda c: (c.spine[0][0], -c.spine[0][1]))
    return chains


def _reduce_chain_in(t: Tree, c: CommonChain, sides: tuple[Side, ...]) -> tuple[Tree, Interval]:
    lay = t.layout
    where = lay.by_interval()
    positions = []
    for j, iv in enumerate(c.spine):
        p = where.get(iv)
        if p is None or t.bits[p] != "1":
            raise ReductionError(f"spine node on leaves {iv[0]}..{iv[1]} missing from {t.bits}")
        left, right = p + 1, lay.ends[p + 1]
        pend, other = (left, right) if sides[j] is Side.LEFT else (right, left)
        pc = c.pendants[j]
        if lay.interval(pend) != pc.interval or lay.subtree(pend) != pc.shape.bits:
            raise ReductionError(f"pendant {pc.lo}..{pc.hi} not found under spine node {iv}")
        if j + 1 < c.m and lay.interval(other) != c.spine[j + 1]:
            raise ReductionError("spine is not contiguous")
        positions.append((p, other))
    top = positions[0][0]
    cur = lay.subtree(positions[-1][1])
    for j in range(c.m - 1, c.m - 4, -1):
        cur = "1" + "0" + cur if sides[j] is Side.LEFT else "1" + cur + "0"
    bits = t.bits[:top] + cur + t.bits[lay.ends[top]:]
    zeros_before = lay.zeros[top]
    anchor = (zeros_before, zeros_before + cur.count("0") - 1)
    return Tree._trusted(bits), anchor


def apply_chain_reduction(t1: Tree, t2: Tree, c: CommonChain) -> tuple[Tree, Tree, ReductionEvent]:
    _check_sizes(t1, t2)
    if c.m < 3:
        raise ReductionError("a chain shorter than three pendants cannot be reduced to three")
    r1, anchor = _reduce_chain_in(t1, c, c.sides_t1)
    r2, anchor2 = _reduce_chain_in(t2, c, c.sides_t2)
    assert anchor == anchor2
    segments = sorted([(pc.lo, pc.hi, True) for pc in c.pendants[:c.m - 3]]
                      + [(pc.lo, pc.hi, False) for pc in c.pendants[c.m - 3:]])
    event = ReductionEvent(
        kind=ReductionKind.CHAIN,
        before_intervals=tuple(pc.interval for pc in c.pendants),
        replacement=(),
        leaves_before=t1.leaf_count,
        leaves_after=r1.leaf_count,
        shapes=tuple(pc.shape for pc in c.pendants),
        sides_t1=c.sides_t1,
        sides_t2=c.sides_t2,
        spine=c.spine,
        anchor_after=anchor,
        _segments=tuple(segments),
    )
    kept = tuple(event.remap(pc.lo) for pc in c.pendants[c.m - 3:])
    event = _with_replacement(event, kept)
    return r1, r2, event


def _with_replacement(e: ReductionEvent, replacement: tuple[int, ...]) -> ReductionEvent:
    return ReductionEvent(e.kind, e.before_intervals, replacement, e.leaves_before,
                          e.leaves_after, e.shapes, e.sides_t1, e.sides_t2, e.spine,
                          e.anchor_after, e._segments)


# -- exhaustive application ------------------------------------------------------

def _whole_tree_event(t: Tree) -> ReductionEvent:
    return _subtree_event(CommonSubtree(0, t.n, t), t.leaf_count)


def kernelize(t1: Tree, t2: Tree, chain_mode: ChainMode = DEFAULT_CHAIN_MODE) -> KernelPair:
    """Apply both rules until neither applies.

    Each round collapses every maximal common subtree (left to right), then
    reduces common chains one at a time, outermost-leftmost first. A pair of
    identical trees collapses all the way to the single-leaf pair.
    """
    _check_sizes(t1, t2)
    a, b = t1, t2
    events: list[ReductionEvent] = []
    while True:
        if a == b:
            if not a.is_leaf:
                events.append(_whole_tree_event(a))
                a = b = Tree.leaf()
            break
        changed = False
        shift = 0
        for s in find_common_subtrees(a, b):
            moved = CommonSubtree(s.lo - shift, s.hi - shift, s.shape)
            a, b, ev = apply_subtree_reduction(a, b, moved)
            events.append(ev)
            shift += s.width - 1
            changed = True
        if a == b:
            continue
        while True:
            chains = find_common_chains(a, b, chain_mode)
            if not chains:
                break
            a, b, ev = apply_chain_reduction(a, b, chains[0])
            events.append(ev)
            changed = True
        if not changed:
            break
    return KernelPair(a, b, tuple(events), t1, t2, chain_mode)


def apply_event(t: Tree, event: ReductionEvent, first: bool = True) -> Tree:
    """Replay one event on a single tree (``first`` picks which side's
    pendant orientation to use for chains)."""
    if t.leaf_count != event.leaves_before:
        raise ReductionError("event does not apply to a tree of this size")
    if event.kind is ReductionKind.SUBTREE:
        (lo, hi), = event.before_intervals
        return _collapse(t, lo, hi, event.shapes[0])
    chain = CommonChain(
        tuple(CommonSubtree(lo, hi, s) for (lo, hi), s in zip(event.before_intervals, event.shapes)),
        event.sides_t1, event.sides_t2, event.spine)
    out, _ = _reduce_chain_in(t, chain, event.sides_t1 if first else event.sides_t2)
    return out


def replay(t1: Tree, t2: Tree, events) -> tuple[Tree, Tree]:
    for ev in events:
        t1, t2 = apply_event(t1, ev, True), apply_event(t2, ev, False)
    return t1, t2


def undo_event(t: Tree, event: ReductionEvent) -> Tree:
    """Re-insert what ``event`` removed into a tree that kept its trace.

    For a subtree event the trace is the placeholder leaf; for a chain event
    it is the three-node placeholder chain. Raises if the trace is gone.
    """
    if t.leaf_count != event.leaves_after:
        raise ReductionError("event result size does not match this tree")
    lay = t.layout
    if event.kind is ReductionKind.SUBTREE:
        p = lay.leaf_position(event.replacement[0])
        return Tree._trusted(t.bits[:p] + event.shapes[0].bits + t.bits[p + 1:])
    if event.sides_t1 != event.sides_t2:
        raise ReductionError("cannot undo a chain whose pendants sit on different sides")
    sides = event.sides_t1
    top = lay.by_interval().get(event.anchor_after)
    if top is None or t.bits[top] != "1":
        raise ReductionError(f"placeholder chain on {event.anchor_after} is gone from {t.bits}")
    p = top
    m = len(sides)
    for j in range(m - 3, m):
        if t.bits[p] != "1":
            raise ReductionError("placeholder chain is broken")
        left, right = p + 1, lay.ends[p + 1]
        pend, other = (left, right) if sides[j] is Side.LEFT else (right, left)
        if t.bits[pend] != "0":
            raise ReductionError("placeholder chain lost a pendant leaf")
        p = other
    cur = lay.subtree(p)
    for j in range(m - 1, -1, -1):
        pend = event.shapes[j].bits
        cur = "1" + pend + cur if sides[j] is Side.LEFT else "1" + cur + pend
    return Tree._trusted(t.bits[:top] + cur + t.bits[lay.ends[top]:])


def expand(t: Tree, events) -> Tree:
    """Undo a whole event list, last event first."""
    for ev in reversed(tuple(events)):
        t = undo_event(t, ev)
    return t


def common_intervals(t1: Tree, t2: Tree) -> frozenset[Interval]:
    """Leaf intervals of non-root internal nodes present in both trees,
    i.e. the shared diagonals of the dual triangulations."""
    theirs = set(t2.intervals()[1:])
    return frozenset(iv for iv in t1.intervals()[1:] if iv in theirs)


# -- reporting -----------------------------------------------------------------

def _fmt_interval(iv: Interval) -> str:
    return f"{iv[0]}-{iv[1]}"


def report_lines(kp: KernelPair) -> Iterator[str]:
    yield f"input.t1 = {kp.t1.bits}"
    yield f"input.t2 = {kp.t2.bits}"
    yield f"input.leaves = {kp.t1.leaf_count}"
    yield f"chain_mode = {kp.chain_mode.value}"
    yield f"events = {len(kp.events)}"
    for i, ev in enumerate(kp.events, 1):
        yield f"event.{i}.kind = {ev.kind.value}"
        yield f"event.{i}.before = {' '.join(_fmt_interval(iv) for iv in ev.before_intervals)}"
        if ev.kind is ReductionKind.CHAIN:
            yield f"event.{i}.sides_t1 = {''.join(s.value for s in ev.sides_t1)}"
            yield f"event.{i}.sides_t2 = {''.join(s.value for s in ev.sides_t2)}"
        yield f"event.{i}.replacement = {' '.join(str(x) for x in ev.replacement)}"
        yield f"event.{i}.leaves = {ev.leaves_before} -> {ev.leaves_after}"
        remap = ["-" if x is None else str(x) for x in ev.label_remap]
        yield f"event.{i}.label_remap = {' '.join(remap)}"
    yield f"output.t1 = {kp.t1p.bits}"
    yield f"output.t2 = {kp.t2p.bits}"
    yield f"output.leaves = {kp.leaf_count}"
