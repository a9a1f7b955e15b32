from itertools import combinations

import pytest

from rotdist.duality import (
    DegenerateInput,
    InvalidTriangulation,
    MissingDiagonal,
    SizeMismatch,
    Triangulation,
    common_diagonals,
    crosses,
    flip,
    flipped_diagonal,
    flips,
    polygon_dot,
    triangulation_to_tree,
    tree_to_triangulation,
)
from rotdist.reductions import find_common_subtrees
from rotdist.tree import enumerate_trees, neighbors, parse, rotate, valid_steps


def brute_triangulations(m):
    """All maximal non-crossing diagonal sets of the convex m-gon."""
    diags = [(a, b) for a in range(m) for b in range(a + 2, m) if not (a == 0 and b == m - 1)]
    out = []
    for subset in combinations(diags, m - 3):
        if not any(crosses(d, e) for d, e in combinations(subset, 2)):
            out.append(Triangulation.of(m, subset))
    return out


def test_triangle():
    p = tree_to_triangulation(parse("100"))
    assert p == Triangulation.of(3, [])
    assert triangulation_to_tree(p) == parse("100")


def test_square():
    assert tree_to_triangulation(parse("11000")).diagonals == {(0, 2)}
    assert tree_to_triangulation(parse("10100")).diagonals == {(1, 3)}
    assert triangulation_to_tree(Triangulation.of(4, [(1, 3)])) == parse("10100")


def test_single_leaf_rejected():
    with pytest.raises(DegenerateInput):
        tree_to_triangulation(parse("0"))


@pytest.mark.parametrize("n", range(1, 9))
def test_bijection(n):
    trees = enumerate_trees(n)
    images = [tree_to_triangulation(t) for t in trees]
    for t, p in zip(trees, images):
        p.validate()
        assert triangulation_to_tree(p) == t
    assert len(set(images)) == len(trees)
    if n <= 5:
        assert set(images) == set(brute_triangulations(n + 2))


def test_hexagon_count():
    assert len(brute_triangulations(6)) == 14
    assert {tree_to_triangulation(t) for t in enumerate_trees(4)} == set(brute_triangulations(6))


def test_invalid_triangulations():
    with pytest.raises(InvalidTriangulation):
        triangulation_to_tree(Triangulation.of(5, [(0, 2)]))
    with pytest.raises(InvalidTriangulation):
        triangulation_to_tree(Triangulation.of(5, [(0, 2), (1, 3)]))
    with pytest.raises(InvalidTriangulation):
        Triangulation.of(4, [(0, 1)]).validate()
    with pytest.raises(InvalidTriangulation):
        Triangulation.of(2, []).validate()


def test_flip_square():
    p = Triangulation.of(4, [(0, 2)])
    q = flip(p, (0, 2))
    assert q.diagonals == {(1, 3)}
    assert flip(q, (1, 3)) == p
    with pytest.raises(MissingDiagonal):
        flip(p, (1, 3))


def test_pentagon_flips():
    for p in brute_triangulations(5):
        assert len(set(flips(p))) == 2


@pytest.mark.parametrize("n", range(1, 8))
def test_flip_rotation_commutation(n):
    for t in enumerate_trees(n):
        p = tree_to_triangulation(t)
        flipped = set(flips(p))
        rotated = set()
        for step in valid_steps(t):
            u = rotate(t, step)
            image = tree_to_triangulation(u)
            assert image == flip(p, flipped_diagonal(t, step))
            rotated.add(image)
        assert rotated == flipped
        for q in flipped:
            new = next(iter(q.diagonals - p.diagonals))
            assert flip(q, new) == p


def test_text_format():
    p = tree_to_triangulation(parse("1110000"))
    assert p.to_text() == "5; 0-2, 0-3"
    assert Triangulation.from_text("5; 0-2, 0-3") == p
    assert Triangulation.from_text("3;") == Triangulation.of(3, [])
    with pytest.raises(InvalidTriangulation):
        Triangulation.from_text("5; 0-2, 1-3")
    with pytest.raises(InvalidTriangulation):
        Triangulation.from_text("five; 0-2")


def test_common_diagonals_basic():
    p = tree_to_triangulation(parse("1101000"))
    assert common_diagonals(p, p) == p.diagonals
    a, b = (tree_to_triangulation(parse(e)) for e in ("11000", "10100"))
    assert common_diagonals(a, b) == set()
    with pytest.raises(SizeMismatch):
        common_diagonals(a, p)


@pytest.mark.parametrize("n", range(2, 7))
def test_adjacent_pairs_share_all_but_one(n):
    m = n + 2
    for t in enumerate_trees(n):
        for u in neighbors(t):
            shared = common_diagonals(tree_to_triangulation(t), tree_to_triangulation(u))
            assert len(shared) == m - 4


@pytest.mark.parametrize("n", range(1, 7))
def test_shared_diagonal_is_shared_leaf_interval(n):
    trees = enumerate_trees(n)
    for a in trees:
        for b in trees:
            ia, ib = set(a.intervals()[1:]), set(b.intervals()[1:])
            shared = {(lo, hi + 1) for lo, hi in ia & ib}
            pa, pb = tree_to_triangulation(a), tree_to_triangulation(b)
            assert common_diagonals(pa, pb) == shared
            for s in find_common_subtrees(a, b):
                # a common subtree is a shared diagonal whose whole sub-polygon is shared
                inside = {d for d in pa.diagonals if s.lo <= d[0] and d[1] <= s.hi + 1}
                assert (s.lo, s.hi + 1) in shared
                assert inside <= pb.diagonals


def test_polygon_dot():
    dot = polygon_dot(tree_to_triangulation(parse("1110000")))
    assert dot.count(" -- ") == 5 + 2
