"""Ordered rooted full binary trees and rotations.

A tree is stored as its preorder bitstring: ``1`` for an internal node,
``0`` for a leaf. Leaves are numbered 0..n left to right and internal nodes
are addressed by in-order rank 1..n, so node ``i`` is the lowest common
ancestor of leaves ``i - 1`` and ``i``.
"""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, Iterator, Sequence

ENUMERATION_CAP = 14


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class InvalidRotation(ValueError):
    pass


class CapacityError(RuntimeError):
    pass


class Direction(enum.Enum):
    LEFT = "L"
    RIGHT = "R"


@dataclass(frozen=True)
class RotationStep:
    node: int
    direction: Direction

    def __str__(self) -> str:
        return f"{self.node} {self.direction.value}"

    @classmethod
    def from_text(cls, line: str) -> "RotationStep":
        parts = line.split()
        if len(parts) != 2 or parts[1] not in ("L", "R"):
            raise ValueError(f"bad rotation step {line!r}")
        return cls(int(parts[0]), Direction(parts[1]))


def subtree_ends(bits: str) -> list[int]:
    """ends[p] is the exclusive end of the subtree whose preorder starts at p."""
    size = len(bits)
    ends = [0] * (size + 1)
    for p in range(size - 1, -1, -1):
        if bits[p] == "0":
            ends[p] = p + 1
        else:
            ends[p] = ends[ends[p + 1]]
    return ends


def zero_prefix(bits: str) -> list[int]:
    """zeros[p] is the number of leaves strictly before position p."""
    zeros = [0] * (len(bits) + 1)
    count = 0
    for p, ch in enumerate(bits):
        zeros[p] = count
        if ch == "0":
            count += 1
    zeros[len(bits)] = count
    return zeros


class Tree:
    """Immutable full binary tree; equality and hashing follow the encoding."""

    __slots__ = ("bits", "_layout")

    def __init__(self, bits: str):
        _validate(bits)
        self.bits = bits
        self._layout = None

    @classmethod
    def _trusted(cls, bits: str) -> "Tree":
        t = object.__new__(cls)
        t.bits = bits
        t._layout = None
        return t

    @classmethod
    def leaf(cls) -> "Tree":
        return cls._trusted("0")

    @classmethod
    def node(cls, left: "Tree", right: "Tree") -> "Tree":
        return cls._trusted("1" + left.bits + right.bits)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Tree) and self.bits == other.bits

    def __hash__(self) -> int:
        return hash(self.bits)

    def __lt__(self, other: "Tree") -> bool:
        return self.bits < other.bits

    def __repr__(self) -> str:
        return f"Tree({self.bits!r})"

    def __str__(self) -> str:
        return self.bits

    def __reduce__(self):
        return (Tree, (self.bits,))

    @property
    def n(self) -> int:
        return len(self.bits) // 2

    @property
    def leaf_count(self) -> int:
        return self.n + 1

    @property
    def is_leaf(self) -> bool:
        return self.bits == "0"

    @property
    def layout(self) -> "Layout":
        if self._layout is None:
            self._layout = Layout(self.bits)
        return self._layout

    @property
    def left(self) -> "Tree":
        if self.is_leaf:
            raise ValueError("a leaf has no children")
        return Tree._trusted(self.bits[1:self.layout.ends[1]])

    @property
    def right(self) -> "Tree":
        if self.is_leaf:
            raise ValueError("a leaf has no children")
        return Tree._trusted(self.bits[self.layout.ends[1]:])

    def intervals(self) -> list[tuple[int, int]]:
        """Leaf intervals of all internal nodes, in preorder."""
        lay = self.layout
        return [lay.interval(p) for p in lay.internal_positions]


class Layout:
    """Positional indexes over a preorder bitstring."""

    __slots__ = ("bits", "ends", "zeros", "internal_positions", "_rank_pos", "_by_interval")

    def __init__(self, bits: str):
        self.bits = bits
        self.ends = subtree_ends(bits)
        self.zeros = zero_prefix(bits)
        self.internal_positions = [p for p, ch in enumerate(bits) if ch == "1"]
        self._rank_pos = None
        self._by_interval = None

    def interval(self, p: int) -> tuple[int, int]:
        return self.zeros[p], self.zeros[self.ends[p]] - 1

    def rank(self, p: int) -> int:
        return self.zeros[self.ends[p + 1]]

    def position_of_rank(self, i: int) -> int:
        if self._rank_pos is None:
            self._rank_pos = {self.rank(p): p for p in self.internal_positions}
        return self._rank_pos[i]

    def children(self, p: int) -> tuple[int, int]:
        return p + 1, self.ends[p + 1]

    def by_interval(self) -> dict[tuple[int, int], int]:
        """Map every node's leaf interval (leaves included) to its position."""
        if self._by_interval is None:
            self._by_interval = {self.interval(p): p for p in range(len(self.bits))}
        return self._by_interval

    def subtree(self, p: int) -> str:
        return self.bits[p:self.ends[p]]

    def leaf_position(self, label: int) -> int:
        return _nth_zero(self.bits, label)


def _nth_zero(bits: str, label: int) -> int:
    pos = -1
    for _ in range(label + 1):
        pos = bits.index("0", pos + 1)
    return pos


def _validate(s: str) -> None:
    if not isinstance(s, str):
        raise TypeError("tree encoding must be a string")
    if not s:
        raise ParseError("empty encoding", 0)
    need = 1
    for i, ch in enumerate(s):
        if need == 0:
            raise ParseError("trailing symbols", i)
        if ch == "1":
            need += 1
        elif ch == "0":
            need -= 1
        else:
            raise ParseError(f"unexpected symbol {ch!r}", i)
    if need:
        raise ParseError("encoding ends before the tree is complete", len(s))


def parse(encoding: str) -> Tree:
    return Tree(encoding.strip())


def serialize(t: Tree) -> str:
    return t.bits


def left_comb(n: int) -> Tree:
    return Tree._trusted("1" * n + "0" * (n + 1))


def right_comb(n: int) -> Tree:
    return Tree._trusted("10" * n + "0")


# -- rotations on raw bitstrings ------------------------------------------------

def rotate_right_at(bits: str, ends: Sequence[int], p: int) -> str:
    """Right rotation with the pivot at preorder position p (left child internal)."""
    a_end = ends[p + 2]
    return bits[:p + 1] + bits[p + 2:a_end] + "1" + bits[a_end:]


def rotate_left_at(bits: str, ends: Sequence[int], p: int) -> str:
    """Left rotation with the pivot at preorder position p (right child internal)."""
    r = ends[p + 1]
    return bits[:p + 1] + "1" + bits[p + 1:r] + bits[r + 1:]


def neighbor_bits(bits: str, frozen: frozenset | None = None) -> Iterator[str]:
    """Yield every tree one rotation away.

    A rotation deletes the leaf interval of the child it promotes; with
    ``frozen`` given, rotations deleting one of those intervals are skipped.
    """
    ends = subtree_ends(bits)
    zeros = zero_prefix(bits) if frozen else None
    for p, ch in enumerate(bits):
        if ch != "1":
            continue
        c = p + 1
        if bits[c] == "1" and not (frozen and (zeros[c], zeros[ends[c]] - 1) in frozen):
            yield rotate_right_at(bits, ends, p)
        c = ends[p + 1]
        if bits[c] == "1" and not (frozen and (zeros[c], zeros[ends[c]] - 1) in frozen):
            yield rotate_left_at(bits, ends, p)


def rotate(t: Tree, step: RotationStep) -> Tree:
    """Rotate at the internal node with in-order rank ``step.node``.

    The node itself moves down: a right rotation promotes its left child,
    a left rotation promotes its right child. The pivot keeps its rank.
    """
    if not 1 <= step.node <= t.n:
        raise IndexError(f"node {step.node} out of range 1..{t.n}")
    lay = t.layout
    p = lay.position_of_rank(step.node)
    if step.direction is Direction.RIGHT:
        if t.bits[p + 1] != "1":
            raise InvalidRotation(f"left child of node {step.node} is a leaf")
        return Tree._trusted(rotate_right_at(t.bits, lay.ends, p))
    if t.bits[lay.ends[p + 1]] != "1":
        raise InvalidRotation(f"right child of node {step.node} is a leaf")
    return Tree._trusted(rotate_left_at(t.bits, lay.ends, p))


def inverse_step(t: Tree, step: RotationStep) -> RotationStep:
    """The step undoing ``step`` when applied to ``rotate(t, step)``.

    The promoted child becomes the pivot's parent, so the inverse acts at
    the child's rank in the opposite direction.
    """
    lay = t.layout
    p = lay.position_of_rank(step.node)
    if step.direction is Direction.RIGHT:
        return RotationStep(lay.rank(p + 1), Direction.LEFT)
    return RotationStep(lay.rank(lay.ends[p + 1]), Direction.RIGHT)


def valid_steps(t: Tree) -> list[RotationStep]:
    lay = t.layout
    steps = []
    for p in lay.internal_positions:
        i = lay.rank(p)
        if t.bits[p + 1] == "1":
            steps.append(RotationStep(i, Direction.RIGHT))
        if t.bits[lay.ends[p + 1]] == "1":
            steps.append(RotationStep(i, Direction.LEFT))
    return steps


def neighbors(t: Tree) -> set[Tree]:
    return {Tree._trusted(b) for b in neighbor_bits(t.bits)}


def replay(start: Tree, steps: Iterable[RotationStep]) -> Tree:
    t = start
    for s in steps:
        t = rotate(t, s)
    return t


def step_between(a: Tree, b: Tree) -> RotationStep:
    """Recover the single rotation taking ``a`` to ``b``.

    A rotation removes exactly one node interval and adds one; the removed
    interval identifies the promoted child and hence the pivot.
    """
    if a.n != b.n:
        raise ValueError("trees differ in size")
    lay = a.layout
    theirs = set(b.intervals())
    gone = [p for p in lay.internal_positions if lay.interval(p) not in theirs]
    if len(gone) != 1 or gone[0] == 0:
        raise ValueError(f"{a.bits} and {b.bits} are not one rotation apart")
    c = gone[0]
    # parent of c: the closest internal position before c whose subtree contains c
    parent = max(p for p in lay.internal_positions if p < c and lay.ends[p] > c)
    direction = Direction.RIGHT if c == parent + 1 else Direction.LEFT
    step = RotationStep(lay.rank(parent), direction)
    if rotate(a, step) != b:
        raise ValueError(f"{a.bits} and {b.bits} are not one rotation apart")
    return step


# -- counting, enumeration, sampling -------------------------------------------

def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


@lru_cache(maxsize=None)
def _shapes(n: int) -> tuple[str, ...]:
    if n == 0:
        return ("0",)
    out = []
    for k in range(n):
        for left in _shapes(k):
            for right in _shapes(n - 1 - k):
                out.append("1" + left + right)
    return tuple(out)


def enumerate_trees(n: int, cap: int = ENUMERATION_CAP) -> list[Tree]:
    """All trees with n internal nodes; refuses n above ``cap``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > cap:
        raise CapacityError(f"n={n} exceeds enumeration cap {cap} ({catalan(n)} trees)")
    return [Tree._trusted(b) for b in _shapes(n)]


def random_tree(n: int, seed: int | None = None, rng: random.Random | None = None) -> Tree:
    """Uniform random tree with n internal nodes.

    Shuffles n ones and n+1 zeros, then takes the unique cyclic shift that is
    a valid preorder encoding (cycle lemma); each tree arises from exactly
    2n+1 arrangements, so the result is uniform.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if rng is None:
        rng = random.Random(seed)
    seq = ["1"] * n + ["0"] * (n + 1)
    rng.shuffle(seq)
    height, low, cut = 0, 1, 0
    for i, ch in enumerate(seq):
        height += 1 if ch == "1" else -1
        if height < low:
            low, cut = height, i + 1
    bits = "".join(seq[cut:] + seq[:cut])
    return Tree._trusted(bits)


def to_dot(t: Tree, name: str = "tree") -> str:
    """Graphviz drawing: internal nodes as circles, leaves labelled 0..n."""
    lay = t.layout
    lines = [f"digraph {name} {{", "  node [fontname=Helvetica];"]
    for p, ch in enumerate(t.bits):
        if ch == "1":
            lines.append(f'  v{p} [shape=circle, label="{lay.rank(p)}"];')
            left, right = lay.children(p)
            lines.append(f"  v{p} -> v{left};")
            lines.append(f"  v{p} -> v{right};")
        else:
            lines.append(f'  v{p} [shape=plaintext, label="{lay.zeros[p]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
