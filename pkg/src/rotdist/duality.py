"""Trees as triangulations of a convex polygon.

Convention: a tree with n internal nodes maps to the (n+2)-gon with vertices
0..n+1. Leaf i is the side (i, i+1), the root is the side (0, n+1), and a
node spanning leaves lo..hi is the edge (lo, hi+1). Every non-root internal
node therefore gives one diagonal, and a rotation flips the diagonal of the
child it promotes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .tree import Direction, RotationStep, Tree

Diagonal = tuple[int, int]


class InvalidTriangulation(ValueError):
    pass


class DegenerateInput(ValueError):
    pass


class MissingDiagonal(KeyError):
    pass


class SizeMismatch(ValueError):
    pass


def _is_side(m: int, a: int, b: int) -> bool:
    return b - a == 1 or (a == 0 and b == m - 1)


def crosses(d: Diagonal, e: Diagonal) -> bool:
    """Strict interior crossing of two chords of a convex polygon."""
    (a, b), (c, d2) = d, e
    return a < c < b < d2 or c < a < d2 < b


@dataclass(frozen=True)
class Triangulation:
    m: int
    diagonals: frozenset[Diagonal]

    @classmethod
    def of(cls, m: int, diagonals) -> "Triangulation":
        return cls(m, frozenset((min(a, b), max(a, b)) for a, b in diagonals))

    def validate(self) -> None:
        if self.m < 3:
            raise InvalidTriangulation(f"polygon needs at least 3 vertices, got {self.m}")
        if len(self.diagonals) != self.m - 3:
            raise InvalidTriangulation(
                f"{self.m}-gon needs {self.m - 3} diagonals, got {len(self.diagonals)}")
        for a, b in self.diagonals:
            if not 0 <= a < b <= self.m - 1 or _is_side(self.m, a, b):
                raise InvalidTriangulation(f"{a}-{b} is not a diagonal of the {self.m}-gon")
        ds = sorted(self.diagonals)
        for i, d in enumerate(ds):
            for e in ds[i + 1:]:
                if crosses(d, e):
                    raise InvalidTriangulation(f"diagonals {d[0]}-{d[1]} and {e[0]}-{e[1]} cross")

    def edges(self) -> set[Diagonal]:
        sides = {(i, i + 1) for i in range(self.m - 1)} | {(0, self.m - 1)}
        return sides | set(self.diagonals)

    def to_text(self) -> str:
        body = ", ".join(f"{a}-{b}" for a, b in sorted(self.diagonals))
        return f"{self.m}; {body}" if body else f"{self.m};"

    @classmethod
    def from_text(cls, text: str) -> "Triangulation":
        head, _, body = text.partition(";")
        try:
            m = int(head)
            pairs = []
            for item in body.split(","):
                item = item.strip()
                if item:
                    a, b = item.split("-")
                    pairs.append((int(a), int(b)))
        except ValueError as exc:
            raise InvalidTriangulation(f"cannot read triangulation {text!r}") from exc
        p = cls.of(m, pairs)
        p.validate()
        return p


def tree_to_triangulation(t: Tree) -> Triangulation:
    if t.n == 0:
        raise DegenerateInput("a single leaf corresponds to a 2-gon, which has no triangulation")
    lay = t.layout
    diagonals = set()
    for p in lay.internal_positions[1:]:
        lo, hi = lay.interval(p)
        diagonals.add((lo, hi + 1))
    return Triangulation(t.n + 2, frozenset(diagonals))


def _apexes(edges: set[Diagonal], m: int, a: int, b: int) -> list[int]:
    return [c for c in range(m) if c != a and c != b
            and (min(a, c), max(a, c)) in edges and (min(b, c), max(b, c)) in edges]


def triangulation_to_tree(p: Triangulation) -> Tree:
    p.validate()
    edges = p.edges()
    out = []
    stack = [(0, p.m - 1)]
    while stack:
        a, b = stack.pop()
        if b == a + 1:
            out.append("0")
            continue
        inner = [c for c in _apexes(edges, p.m, a, b) if a < c < b]
        if len(inner) != 1:
            raise InvalidTriangulation(f"edge {a}-{b} has no unique inner triangle")
        c = inner[0]
        out.append("1")
        stack.append((c, b))
        stack.append((a, c))
    return Tree._trusted("".join(out))


def flip(p: Triangulation, d: Diagonal) -> Triangulation:
    """Replace ``d`` by the other diagonal of the quadrilateral around it."""
    d = (min(d), max(d))
    if d not in p.diagonals:
        raise MissingDiagonal(f"{d[0]}-{d[1]} is not a diagonal of this triangulation")
    a, b = d
    apex = _apexes(p.edges(), p.m, a, b)
    if len(apex) != 2:
        raise InvalidTriangulation(f"diagonal {a}-{b} does not border two triangles")
    new = (min(apex), max(apex))
    return Triangulation(p.m, (p.diagonals - {d}) | {new})


def flips(p: Triangulation) -> list[Triangulation]:
    return [flip(p, d) for d in sorted(p.diagonals)]


def common_diagonals(p1: Triangulation, p2: Triangulation) -> frozenset[Diagonal]:
    if p1.m != p2.m:
        raise SizeMismatch(f"polygon sizes differ: {p1.m} vs {p2.m}")
    return p1.diagonals & p2.diagonals


def flipped_diagonal(t: Tree, step: RotationStep) -> Diagonal:
    """The diagonal of ``tree_to_triangulation(t)`` that ``step`` flips."""
    lay = t.layout
    p = lay.position_of_rank(step.node)
    child = p + 1 if step.direction is Direction.RIGHT else lay.ends[p + 1]
    lo, hi = lay.interval(child)
    return lo, hi + 1


def polygon_dot(p: Triangulation, name: str = "polygon") -> str:
    """Graphviz sketch of the polygon with vertices on a circle."""
    lines = [f"graph {name} {{", "  layout=neato;", "  node [shape=point];"]
    for v in range(p.m):
        ang = math.pi / 2 - 2 * math.pi * v / p.m
        lines.append(f'  p{v} [pos="{2 * math.cos(ang):.3f},{2 * math.sin(ang):.3f}!", xlabel="{v}"];')
    for a, b in sorted(p.edges()):
        style = "" if (a, b) in p.diagonals else " [penwidth=2]"
        lines.append(f"  p{a} -- p{b}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"
