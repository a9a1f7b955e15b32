"""Exact rotation distance and the bounded decision procedure."""
from __future__ import annotations

import enum
import os
import threading
from collections import deque
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .reductions import (
    DEFAULT_CHAIN_MODE,
    ChainMode,
    KernelPair,
    common_intervals,
    expand,
    kernelize,
)
from .tree import (
    CapacityError,
    Direction,
    RotationStep,
    Tree,
    catalan,
    enumerate_trees,
    inverse_step,
    neighbor_bits,
    rotate,
    step_between,
    subtree_ends,
    valid_steps,
)

DEFAULT_ORACLE_CAP = 12
KERNEL_FACTOR = 7


class SizeMismatch(ValueError):
    pass


class Answer(enum.Enum):
    YES = "yes"
    NO = "no"


class Gate(enum.Enum):
    SIZE_GATE = "SizeGate"
    SEARCH_EXHAUSTED = "SearchExhausted"
    WITNESS_FOUND = "WitnessFound"


@dataclass(frozen=True)
class RotationPath:
    start: Tree
    steps: tuple[RotationStep, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)

    def trees(self) -> list[Tree]:
        out = [self.start]
        for s in self.steps:
            out.append(rotate(out[-1], s))
        return out

    @property
    def end(self) -> Tree:
        return self.trees()[-1]

    def to_text(self) -> str:
        return "".join(f"{s}\n" for s in self.steps)

    @classmethod
    def from_text(cls, start: Tree, text: str) -> "RotationPath":
        steps = tuple(RotationStep.from_text(line) for line in text.splitlines() if line.strip())
        return cls(start, steps)

    @classmethod
    def from_trees(cls, trees: list[Tree]) -> "RotationPath":
        steps = tuple(step_between(a, b) for a, b in zip(trees, trees[1:]))
        return cls(trees[0], steps)


@dataclass(frozen=True)
class Decision:
    answer: Answer
    gate: Gate
    k: int
    witness: RotationPath | None = None
    kernel: KernelPair | None = None

    def __bool__(self) -> bool:
        return self.answer is Answer.YES


def _check_sizes(t1: Tree, t2: Tree) -> None:
    if t1.n != t2.n:
        raise SizeMismatch(f"trees have {t1.leaf_count} and {t2.leaf_count} leaves")


# -- oracle --------------------------------------------------------------------

def exact_distance(t1: Tree, t2: Tree, cap: int = DEFAULT_ORACLE_CAP) -> int:
    """Breadth-first search over the whole rotation graph."""
    _check_sizes(t1, t2)
    if t1.n > cap:
        raise CapacityError(
            f"n={t1.n} is above the oracle cap {cap} ({catalan(t1.n)} trees); "
            "use decide_within_k for larger trees")
    if t1 == t2:
        return 0
    target = t2.bits
    dist = {t1.bits: 0}
    queue = deque([t1.bits])
    while queue:
        cur = queue.popleft()
        d = dist[cur] + 1
        for nb in neighbor_bits(cur):
            if nb not in dist:
                if nb == target:
                    return d
                dist[nb] = d
                queue.append(nb)
    raise AssertionError("rotation graph is disconnected")


def all_pairs_distances(n: int, chunk: int = 512) -> tuple[list[Tree], dict[str, int], np.ndarray]:
    """Distance matrix over all trees with n internal nodes.

    Rows and columns follow ``enumerate_trees(n)``; the lookup dict maps an
    encoding to its index.
    """
    trees = enumerate_trees(n)
    index = {t.bits: i for i, t in enumerate(trees)}
    rows, cols = [], []
    for i, t in enumerate(trees):
        for nb in neighbor_bits(t.bits):
            rows.append(i)
            cols.append(index[nb])
    size = len(trees)
    graph = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(size, size))
    out = np.empty((size, size), dtype=np.int16)
    for start in range(0, size, chunk):
        idx = np.arange(start, min(size, start + chunk))
        block = shortest_path(graph, directed=False, unweighted=True, indices=idx)
        out[idx] = block.astype(np.int16)
    return trees, index, out


# -- bounded search ------------------------------------------------------------

def _walk(parent: dict, node: str) -> list[str]:
    out = []
    while node is not None:
        out.append(node)
        node = parent[node]
    return out


def _bidirectional(a: str, b: str, k: int, frozen: frozenset | None) -> list[str] | None:
    if a == b:
        return [a]
    fwd, bwd = {a: None}, {b: None}
    fwd_front, bwd_front = [a], [b]
    df = db = 0
    while df + db < k and fwd_front and bwd_front:
        forward = len(fwd_front) <= len(bwd_front)
        front, seen, other = (fwd_front, fwd, bwd) if forward else (bwd_front, bwd, fwd)
        nxt = []
        for cur in front:
            for nb in neighbor_bits(cur, frozen):
                if nb in seen:
                    continue
                seen[nb] = cur
                if nb in other:
                    return _walk(fwd, nb)[::-1] + _walk(bwd, nb)[1:]
                nxt.append(nb)
        if forward:
            fwd_front, df = nxt, df + 1
        else:
            bwd_front, db = nxt, db + 1
    return None


def bounded_path_search(t1: Tree, t2: Tree, k: int, freeze_common: bool = True) -> RotationPath | None:
    """A shortest rotation path of length at most k, or None.

    Bidirectional breadth-first search. With ``freeze_common`` the search
    never flips a diagonal the two trees share; a shortest path avoiding
    them always exists because the distance splits across shared diagonals.
    """
    _check_sizes(t1, t2)
    if k < 0:
        raise ValueError("k must be non-negative")
    frozen = common_intervals(t1, t2) if freeze_common else None
    found = _bidirectional(t1.bits, t2.bits, k, frozen or None)
    if found is None:
        return None
    return RotationPath.from_trees([Tree._trusted(b) for b in found])


def enumerate_path_search(t1: Tree, t2: Tree, k: int) -> RotationPath | None:
    """Try every sequence of at most k valid rotations, shortest first.

    Exponential; only for cross-checking the bounded search on tiny inputs.
    """
    _check_sizes(t1, t2)
    for length in range(k + 1):
        found = _sequences(t1, t2, length, ())
        if found is not None:
            return RotationPath(t1, found)
    return None


def _sequences(cur: Tree, target: Tree, left: int, prefix: tuple) -> tuple | None:
    if left == 0:
        return prefix if cur == target else None
    for s in valid_steps(cur):
        found = _sequences(rotate(cur, s), target, left - 1, prefix + (s,))
        if found is not None:
            return found
    return None


# -- upper bound ---------------------------------------------------------------

def steps_to_right_comb(t: Tree) -> list[RotationStep]:
    """Right rotations along the right arm until every left child is a leaf."""
    steps = []
    bits = t.bits
    while True:
        ends = subtree_ends(bits)
        p = 0
        while bits[p] == "1" and bits[p + 1] == "0":
            p = ends[p + 1]
        if bits[p] == "0":
            return steps
        cur = Tree._trusted(bits)
        step = RotationStep(cur.layout.rank(p), Direction.RIGHT)
        steps.append(step)
        bits = rotate(cur, step).bits


def comb_upper_bound(t1: Tree, t2: Tree) -> tuple[int, RotationPath]:
    """Route through the right comb: at most (n-1) + (n-1) rotations."""
    _check_sizes(t1, t2)
    down = steps_to_right_comb(t1)
    up = []
    cur = t2
    for s in steps_to_right_comb(t2):
        up.append(inverse_step(cur, s))
        cur = rotate(cur, s)
    path = RotationPath(t1, tuple(down) + tuple(reversed(up)))
    return len(path), path


# -- decision procedure ----------------------------------------------------------

class DistanceCache:
    """Plain-text memo of resolved kernel distances.

    One record per line: ``<encoding> <encoding> <distance>`` with the pair
    sorted. Writes are serialized and appended.
    """

    def __init__(self, path: str | os.PathLike):
        self.path = os.fspath(path)
        self._lock = threading.Lock()
        self._table: dict[tuple[str, str], int] = {}
        if os.path.exists(self.path):
            with open(self.path) as fh:
                for line in fh:
                    parts = line.split()
                    if len(parts) == 3:
                        self._table[(parts[0], parts[1])] = int(parts[2])

    @staticmethod
    def _key(a: Tree, b: Tree) -> tuple[str, str]:
        return tuple(sorted((a.bits, b.bits)))

    def get(self, a: Tree, b: Tree) -> int | None:
        return self._table.get(self._key(a, b))

    def put(self, a: Tree, b: Tree, distance: int) -> None:
        key = self._key(a, b)
        with self._lock:
            if self._table.get(key) == distance:
                return
            self._table[key] = distance
            with open(self.path, "a") as fh:
                fh.write(f"{key[0]} {key[1]} {distance}\n")

    def __len__(self) -> int:
        return len(self._table)


def lift_path(kernel_path: RotationPath, kp: KernelPair) -> RotationPath:
    """Carry a path between the kernel trees back to the original pair."""
    trees = [expand(t, kp.events) for t in kernel_path.trees()]
    if trees[0] != kp.t1 or trees[-1] != kp.t2:
        raise AssertionError("lifted path does not connect the original trees")
    return RotationPath.from_trees(trees)


def decide_within_k(t1: Tree, t2: Tree, k: int,
                    chain_mode: ChainMode = DEFAULT_CHAIN_MODE,
                    cache: DistanceCache | None = None,
                    gate_factor: int | None = KERNEL_FACTOR) -> Decision:
    """Is the rotation distance at most k?

    Kernelize, reject kernels with more than ``gate_factor * k`` leaves, then
    search the kernel for a path of at most k rotations and lift it to the
    originals.

    The default factor 7 is exact for every pair up to 12 internal nodes but
    rejects some yes-instances on larger trees (an irreducible kernel of 15
    leaves can sit at distance 2). Pass ``gate_factor=None`` to skip the gate
    and always search, which is exact at the cost of time.
    """
    _check_sizes(t1, t2)
    if k < 0:
        raise ValueError("k must be non-negative")
    kp = kernelize(t1, t2, chain_mode)
    if kp.t1p == kp.t2p:
        return Decision(Answer.YES, Gate.WITNESS_FOUND, k, RotationPath(t1), kp)
    if gate_factor is not None and kp.leaf_count > gate_factor * k:
        return Decision(Answer.NO, Gate.SIZE_GATE, k, None, kp)
    budget = k
    if cache is not None:
        known = cache.get(kp.t1p, kp.t2p)
        if known is not None:
            if known > k:
                return Decision(Answer.NO, Gate.SEARCH_EXHAUSTED, k, None, kp)
            budget = known
    path = bounded_path_search(kp.t1p, kp.t2p, budget)
    if path is None:
        return Decision(Answer.NO, Gate.SEARCH_EXHAUSTED, k, None, kp)
    if cache is not None:
        cache.put(kp.t1p, kp.t2p, len(path))
    return Decision(Answer.YES, Gate.WITNESS_FOUND, k, lift_path(path, kp), kp)


def fpt_distance(t1: Tree, t2: Tree, chain_mode: ChainMode = DEFAULT_CHAIN_MODE,
                 limit: int | None = None,
                 gate_factor: int | None = KERNEL_FACTOR) -> tuple[int, RotationPath] | None:
    """Smallest k accepted by ``decide_within_k``, trying k = 0, 1, 2, ...

    Stops at ``limit`` (default: the 2n-2 upper bound) and returns None if
    nothing was accepted by then.
    """
    _check_sizes(t1, t2)
    top = max(0, 2 * t1.n - 2) if limit is None else limit
    for k in range(top + 1):
        dec = decide_within_k(t1, t2, k, chain_mode, gate_factor=gate_factor)
        if dec:
            return len(dec.witness), dec.witness
    return None

