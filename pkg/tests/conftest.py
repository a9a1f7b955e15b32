import functools

import pytest

from rotdist.search import all_pairs_distances

# Results of tests/test_acceptance.py, echoed in the terminal summary.
ACCEPTANCE = {}


@functools.lru_cache(maxsize=None)
def distance_table(n):
    return all_pairs_distances(n)


def oracle_distance(a, b):
    _, index, table = distance_table(a.n)
    return int(table[index[a.bits], index[b.bits]])


@pytest.fixture(scope="session")
def table():
    return distance_table


# -- independent reference model: leaf = None, node = (left, right) -------------

def ref_all(n):
    if n == 0:
        return [None]
    out = []
    for k in range(n):
        for left in ref_all(k):
            for right in ref_all(n - 1 - k):
                out.append((left, right))
    return out


def ref_bits(t):
    return "0" if t is None else "1" + ref_bits(t[0]) + ref_bits(t[1])


def ref_rotations(t):
    """Every tree one rotation away, straight from the picture:
    ((A, B), C) <-> (A, (B, C)) at any node."""
    out = []
    if t is None:
        return out
    left, right = t
    if left is not None:
        a, b = left
        out.append((a, (b, right)))
    if right is not None:
        b, c = right
        out.append(((left, b), c))
    out += [(x, right) for x in ref_rotations(left)]
    out += [(left, x) for x in ref_rotations(right)]
    return out


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
