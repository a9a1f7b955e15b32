"""Acceptance criteria, each checked at zero tolerance against the BFS oracle.

Run with ``pytest tests/test_acceptance.py`` (or ``python tests/test_acceptance.py``);
one PASS/FAIL line per criterion is printed in the terminal summary.
"""
import random
import sys
from collections import Counter
from math import comb

import pytest
from scipy.stats import chisquare

from conftest import ACCEPTANCE, distance_table
from rotdist.duality import flip, flipped_diagonal, flips, triangulation_to_tree, tree_to_triangulation
from rotdist.reductions import ChainMode, kernelize, report_lines
from rotdist.search import comb_upper_bound, decide_within_k
from rotdist.tree import enumerate_trees, neighbor_bits, random_tree, replay, rotate, valid_steps

EXHAUSTIVE_N = 6
RANDOM_PAIRS = 10_000
RANDOM_MAX_N = 9


def record(key, failures, detail):
    ACCEPTANCE[key] = (not failures, detail if not failures else f"{detail}; first failure: {failures[0]}")
    assert not failures, failures[:5]


def oracle(a, b):
    _, index, d = distance_table(a.n)
    return int(d[index[a.bits], index[b.bits]])


def all_pairs(n):
    trees = enumerate_trees(n)
    return [(a, b) for a in trees for b in trees]


def random_pairs():
    rng = random.Random(20240601)
    out = []
    for _ in range(RANDOM_PAIRS):
        n = rng.randint(1, RANDOM_MAX_N)
        out.append((random_tree(n, rng=rng), random_tree(n, rng=rng)))
    return out


@pytest.fixture(scope="module")
def decide_sweep():
    """Every decision of criterion 1: (a, b, k, oracle distance, Decision)."""
    rows = []
    for n in range(EXHAUSTIVE_N + 1):
        for a, b in all_pairs(n):
            d = oracle(a, b)
            for k in range(max(2 * n - 2, 0) + 1):
                rows.append((a, b, k, d, decide_within_k(a, b, k)))
    return rows


@pytest.fixture(scope="module")
def kernel_pairs():
    """Pairs of criteria 2 and 3 with their kernels."""
    pairs = [p for n in range(EXHAUSTIVE_N + 1) for p in all_pairs(n)] + random_pairs()
    return [(a, b, kernelize(a, b)) for a, b in pairs]


def test_criterion_1_decide_matches_oracle(decide_sweep):
    failures = [(a.bits, b.bits, k, d, dec.answer.value)
                for a, b, k, d, dec in decide_sweep if bool(dec) != (d <= k)]
    record(1, failures, f"{len(decide_sweep)} decisions over all pairs with n <= {EXHAUSTIVE_N}")


def test_criterion_2_kernel_preserves_distance(kernel_pairs):
    failures = []
    for a, b, kp in kernel_pairs:
        if oracle(kp.t1p, kp.t2p) != oracle(a, b):
            failures.append("\n".join(report_lines(kp)))
    # the literal chain reading must preserve distance too
    literal = 0
    for n in range(EXHAUSTIVE_N + 1):
        for a, b in all_pairs(n):
            kp = kernelize(a, b, ChainMode.LITERAL)
            literal += 1
            if oracle(kp.t1p, kp.t2p) != oracle(a, b):
                failures.append("\n".join(report_lines(kp)))
    record(2, failures, f"{len(kernel_pairs)} pairs (default chains) + {literal} pairs (literal chains)")


def test_criterion_3_kernel_size_bound(kernel_pairs):
    failures = []
    for a, b, kp in kernel_pairs:
        d = oracle(a, b)
        if d == 0:
            ok = kp.t1p.bits == kp.t2p.bits == "0"
        else:
            ok = kp.leaf_count <= 7 * d
        if not ok:
            failures.append((a.bits, b.bits, d, kp.leaf_count))
    record(3, failures, f"{len(kernel_pairs)} pairs, kernel leaves <= 7d")


def test_criterion_4_distance_one_kernels():
    failures, count, largest = [], 0, 0
    for n in range(1, RANDOM_MAX_N + 1):
        for a in enumerate_trees(n):
            for bits in neighbor_bits(a.bits):
                kp = kernelize(a, type(a)(bits))
                count += 1
                largest = max(largest, kp.leaf_count)
                if kp.leaf_count > 7:
                    failures.append((a.bits, bits, kp.leaf_count))
    record(4, failures, f"{count} ordered distance-1 pairs, largest kernel {largest} leaves")


def test_criterion_5_duality():
    failures, checked = [], 0
    for n in range(1, 8):
        trees = enumerate_trees(n)
        images = set()
        for t in trees:
            p = tree_to_triangulation(t)
            images.add(p)
            if triangulation_to_tree(p) != t:
                failures.append(("round trip", t.bits))
            rotated = set()
            for step in valid_steps(t):
                u = tree_to_triangulation(rotate(t, step))
                checked += 1
                rotated.add(u)
                if u != flip(p, flipped_diagonal(t, step)):
                    failures.append(("commutation", t.bits, str(step)))
            if rotated != set(flips(p)):
                failures.append(("flip set", t.bits))
        if len(images) != len(trees):
            failures.append(("not injective", n))
    record(5, failures, f"{checked} rotations on all trees with n <= 7")


def test_criterion_6_bounds():
    failures, pairs = [], 0
    for n in range(1, EXHAUSTIVE_N + 1):
        for a, b in all_pairs(n):
            pairs += 1
            bound, path = comb_upper_bound(a, b)
            if not oracle(a, b) <= bound <= 2 * n - 2 or replay(a, path.steps) != b:
                failures.append((a.bits, b.bits, bound))
    diameters = {n: int(distance_table(n)[2].max()) for n in range(1, RANDOM_MAX_N + 1)}
    # the check applies only where 2n - 6 reaches the observed maximum
    applicable = [n for n, m in diameters.items() if 2 * n - 6 >= m]
    if not applicable:
        failures.append(("no n in range where 2n-6 covers the diameter", diameters))
    failures += [("diameter", n) for n in applicable if diameters[n] > 2 * n - 6]
    record(6, failures, f"sandwich on {pairs} pairs; diameters {diameters}; 2n-6 check at n in {applicable}")


def test_criterion_7_catalan_and_uniformity():
    failures = []
    for n in range(11):
        got = len(enumerate_trees(n))
        if got != comb(2 * n, n) // (n + 1):
            failures.append((n, got))
    rng = random.Random(7)
    counts = Counter(random_tree(4, rng=rng).bits for _ in range(100_000))
    shapes = [t.bits for t in enumerate_trees(4)]
    p = chisquare([counts[s] for s in shapes]).pvalue
    if set(counts) != set(shapes) or p <= 0.01:
        failures.append(("chi-square", p))
    record(7, failures, f"counts match for n <= 10; chi-square p = {p:.3f} over 14 shapes")


def test_criterion_8_witness_replay(decide_sweep):
    failures, yes = [], 0
    for a, b, k, _, dec in decide_sweep:
        if not dec:
            continue
        yes += 1
        w = dec.witness
        if w.start != a or len(w) > k or replay(a, w.steps) != b:
            failures.append((a.bits, b.bits, k, w.to_text()))
    record(8, failures, f"{yes} witnesses replayed")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
