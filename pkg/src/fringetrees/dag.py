"""Minimal DAG compression and fringe-subtree profiles.

Both DAGs come out of one post-order pass of the scan kernel, which interns
``(left_id, right_id)`` pairs for the ordered DAG and sorted child-code pairs
for the unordered one.  Node ids are dense, assigned in first-seen post-order,
with the leaf as id 0.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .models import ModelKind, fringe_bst_bits, make_rng, sample
from .tree import LEAF, Tree, symmetric_mask


class DagMode(str, enum.Enum):
    ORDERED = "ordered"
    UNORDERED = "unordered"


@dataclass(frozen=True)
class MinimalDag:
    left: np.ndarray
    right: np.ndarray
    root: int
    mode: DagMode
    size: np.ndarray = field(repr=False)  # leaves below each dag node

    @property
    def n_nodes(self) -> int:
        return len(self.left)

    def __len__(self):
        return self.n_nodes

    def expand(self) -> Tree:
        """Unfold the DAG back into a tree (exponential for deep sharing)."""
        memo = {}
        for v in range(self.n_nodes):  # children always have smaller ids
            lv = int(self.left[v])
            memo[v] = () if lv < 0 else (memo[lv], memo[int(self.right[v])])
        return Tree.from_nested(memo[self.root])

    def to_json(self) -> dict:
        nodes = []
        for v in range(self.n_nodes):
            lv, rv = int(self.left[v]), int(self.right[v])
            if lv < 0:
                nodes.append({"id": v, "kind": "leaf", "left": None, "right": None})
            else:
                nodes.append({"id": v, "kind": "internal", "left": lv, "right": rv})
        return {"mode": self.mode.value, "root": int(self.root), "nodes": nodes}


def _first_occurrence(ids: np.ndarray, count: int) -> np.ndarray:
    first = np.empty(count, dtype=np.int64)
    order = np.arange(len(ids) - 1, -1, -1)
    first[ids[order]] = order
    return first


def _build(t: Tree, ids: np.ndarray, count: int, mode: DagMode) -> MinimalDag:
    first = _first_occurrence(ids, count)
    lt = t.left[first]
    inner = lt >= 0
    left = np.full(count, LEAF, dtype=np.int64)
    right = np.full(count, LEAF, dtype=np.int64)
    a = ids[lt[inner]]
    b = ids[t.right[first][inner]]
    if mode is DagMode.UNORDERED:
        a, b = np.minimum(a, b), np.maximum(a, b)
    left[inner] = a
    right[inner] = b
    return MinimalDag(left, right, int(ids[t.root]), mode, t.sizes[first])


def minimal_dag(t: Tree) -> MinimalDag:
    """Merge roots of identical fringe subtrees."""
    sc = t.scan
    return _build(t, sc.oid, sc.n_ordered, DagMode.ORDERED)


def unordered_minimal_dag(t: Tree) -> MinimalDag:
    """Merge roots of isomorphic fringe subtrees."""
    sc = t.scan
    return _build(t, sc.ucode, sc.n_unordered, DagMode.UNORDERED)


def dag_sizes(t: Tree) -> tuple[int, int]:
    """(distinct fringe subtrees, non-isomorphic fringe subtrees)."""
    sc = t.scan
    return sc.n_ordered, sc.n_unordered


# fringe profiles


class FringeStats(NamedTuple):
    """Per-node statistics of the fringe subtree rooted there."""
    size: np.ndarray
    sym: np.ndarray
    bits: np.ndarray


def fringe_stats(t: Tree) -> FringeStats:
    sym = t.subtree_sums(symmetric_mask(t).astype(np.int64))
    return FringeStats(t.sizes, sym, fringe_bst_bits(t))


@dataclass(frozen=True)
class ClassFilter:
    """A class S_k of trees, decided from fringe statistics.

    ``member`` maps a :class:`FringeStats` to a boolean mask; ``k`` restricts
    the class to one size (``None`` means every size).
    """
    name: str
    member: Callable[[FringeStats], np.ndarray]
    k: int | None = None

    def mask(self, stats: FringeStats) -> np.ndarray:
        m = np.asarray(self.member(stats), dtype=bool)
        if self.k is not None:
            m &= stats.size == self.k
        return m

    def contains(self, t: Tree) -> bool:
        return bool(self.mask(fringe_stats(t))[t.root])

    def weight(self, k: int, model, trials: int = 20000, seed: int = 0):
        """``s_k`` (uniform) or ``p_k`` (BST) of the size-``k`` slice.

        Exact by enumeration for ``k <= 12``; otherwise a Monte Carlo estimate
        (for the uniform model scaled to a count, ``C_{k-1} * fraction``).
        """
        from .exact import MAX_BRUTE_FORCE, catalan, filter_weight

        model = ModelKind(model)
        if k <= MAX_BRUTE_FORCE:
            return filter_weight(k, model, self.contains)
        hits = sum(self.contains(sample(model, k, make_rng(seed, i))) for i in range(trials))
        frac = hits / trials
        return catalan(k - 1) * frac if model is ModelKind.UNIFORM else frac


def all_trees(k: int | None = None) -> ClassFilter:
    return ClassFilter("all", lambda s: np.ones(len(s.size), dtype=bool), k)


def empty_class(k: int | None = None) -> ClassFilter:
    return ClassFilter("empty", lambda s: np.zeros(len(s.size), dtype=bool), k)


def low_bst_probability(mu: float, k: int | None = None) -> ClassFilter:
    """Trees with ``P_bst(t) <= 2**(-mu*|t| + |t|**(3/4))``."""
    def member(s):
        return s.bits >= mu * s.size - s.size ** 0.75
    return ClassFilter("low_bst_probability", member, k)


def large_automorphism_group(rate: float, k: int | None = None) -> ClassFilter:
    """Trees with ``|Aut(t)| > 2**(rate*|t| - |t|**(3/4))``."""
    def member(s):
        return s.sym > rate * s.size - s.size ** 0.75
    return ClassFilter("large_automorphism_group", member, k)


@dataclass
class FringeProfile:
    """Counts of fringe subtrees by size ``k`` (index ``k`` of each array)."""
    n: int
    total: np.ndarray
    distinct_ordered: np.ndarray
    distinct_unordered: np.ndarray
    filtered: dict
    tail_threshold: float | None
    tail_count: int | None

    @staticmethod
    def _nonzero(arr) -> dict:
        return {int(k): int(arr[k]) for k in np.nonzero(arr)[0]}

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "total": self._nonzero(self.total),
            "distinct_ordered": self._nonzero(self.distinct_ordered),
            "distinct_unordered": self._nonzero(self.distinct_unordered),
            "filtered": {name: self._nonzero(a) for name, a in self.filtered.items()},
            "tail_threshold": self.tail_threshold,
            "tail_count": self.tail_count,
        }


def fringe_profile(t: Tree, tail_threshold: float | None = None,
                   filters=()) -> FringeProfile:
    sc = t.scan
    n = t.n_leaves
    size = sc.size
    total = np.bincount(size, minlength=n + 1)
    d_ord = np.bincount(size[_first_occurrence(sc.oid, sc.n_ordered)], minlength=n + 1)
    d_un = np.bincount(size[_first_occurrence(sc.ucode, sc.n_unordered)], minlength=n + 1)
    filtered = {}
    if filters:
        stats = fringe_stats(t)
        for f in filters:
            filtered[f.name] = np.bincount(size[f.mask(stats)], minlength=n + 1)
    tail = None if tail_threshold is None else int(np.count_nonzero(size > tail_threshold))
    return FringeProfile(n, total, d_ord, d_un, filtered, tail_threshold, tail)
