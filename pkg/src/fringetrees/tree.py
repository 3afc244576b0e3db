"""Ordered binary trees stored as a post-order arena.

A tree with ``n`` leaves has ``2n - 1`` nodes.  Node ``i`` is a leaf when
``left[i] == -1``; otherwise it has children ``left[i]`` and ``right[i]``.
Nodes are kept in post-order, so the fringe subtree of node ``v`` with ``s``
leaves occupies the contiguous slots ``v - 2s + 2 .. v`` and the root is the
last node.  Every bottom-up statistic is therefore a single forward loop.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from . import _backend

LEAF = -1


class Scan(NamedTuple):
    size: np.ndarray
    oid: np.ndarray
    ucode: np.ndarray
    n_ordered: int
    n_unordered: int


class Tree:
    """Immutable ordered binary tree (post-order arena)."""

    def __init__(self, left, right, *, _trusted=False):
        left = np.array(left, dtype=np.int64)
        right = np.array(right, dtype=np.int64)
        left.setflags(write=False)
        right.setflags(write=False)
        self.left = left
        self.right = right
        if not _trusted:
            self._validate()

    def _validate(self):
        left, right = self.left, self.right
        m = len(left)
        if m == 0 or m % 2 == 0 or len(right) != m:
            raise ValueError(f"a binary tree needs an odd, positive node count; got {m}")
        inner = left >= 0
        if np.any((right >= 0) != inner):
            raise ValueError("every node must have zero or two children")
        idx = np.nonzero(inner)[0]
        if np.count_nonzero(~inner) != (m + 1) // 2:
            raise ValueError("leaf count must equal internal count + 1")
        if np.any(right[idx] != idx - 1) or np.any(left[idx] >= idx - 1):
            raise ValueError("nodes are not in post-order")
        refs = np.bincount(np.concatenate([left[idx], right[idx]]), minlength=m)
        expect = np.ones(m, dtype=np.int64)
        expect[-1] = 0
        if not np.array_equal(refs, expect):
            raise ValueError("node ids do not form a single rooted tree")
        size = self.sizes
        if np.any(left[idx] != idx - 2 * size[idx - 1]):
            raise ValueError("fringe subtrees are not contiguous in post-order")

    # construction helpers

    @classmethod
    def leaf(cls) -> "Tree":
        return cls([LEAF], [LEAF], _trusted=True)

    @classmethod
    def from_nested(cls, obj) -> "Tree":
        """Build from nested pairs; a leaf is ``()`` or ``"L"``."""
        left, right = [], []
        # iterative post-order emit
        stack = [(obj, False)]
        out = []
        while stack:
            node, done = stack.pop()
            if node == () or node == "L":
                left.append(LEAF)
                right.append(LEAF)
                out.append(len(left) - 1)
            elif not done:
                a, b = node
                stack.append((node, True))
                stack.append((b, False))
                stack.append((a, False))
            else:
                r = out.pop()
                lch = out.pop()
                left.append(lch)
                right.append(r)
                out.append(len(left) - 1)
        return cls(left, right, _trusted=True)

    def to_nested(self):
        built = []
        for i in range(len(self.left)):
            lv = int(self.left[i])
            built.append(() if lv < 0 else (built[lv], built[int(self.right[i])]))
        return built[-1]

    @classmethod
    def from_arena(cls, left, right, root) -> "Tree":
        """Accept any arena (children by id, arbitrary order) and normalize."""
        lft, rgt = _backend.kernels.postorder_relabel(
            np.asarray(left, dtype=np.int64), np.asarray(right, dtype=np.int64), int(root))
        return cls(lft, rgt)

    # basic queries

    @property
    def n_nodes(self) -> int:
        return len(self.left)

    @property
    def n_leaves(self) -> int:
        return (len(self.left) + 1) // 2

    @property
    def root(self) -> int:
        return len(self.left) - 1

    def is_leaf(self, v: int) -> bool:
        return self.left[v] < 0

    @cached_property
    def scan(self) -> Scan:
        return Scan(*_backend.kernels.scan(self.left, self.right))

    @property
    def sizes(self) -> np.ndarray:
        return self.scan.size

    @cached_property
    def internal(self) -> np.ndarray:
        return np.nonzero(self.left >= 0)[0]

    def subtree(self, v: int) -> "Tree":
        s = int(self.sizes[v])
        lo = v - 2 * s + 2
        left = self.left[lo:v + 1].copy()
        right = self.right[lo:v + 1].copy()
        inner = left >= 0
        left[inner] -= lo
        right[inner] -= lo
        return Tree(left, right, _trusted=True)

    def mirror(self) -> "Tree":
        return Tree.from_arena(self.right, self.left, self.root)

    def subtree_sums(self, values) -> np.ndarray:
        """Sum ``values`` (one per node) over each node's fringe subtree."""
        values = np.asarray(values)
        csum = np.concatenate([[0], np.cumsum(values)])
        idx = np.arange(self.n_nodes)
        return csum[idx + 1] - csum[idx - 2 * self.sizes + 2]

    def __eq__(self, other):
        if not isinstance(other, Tree):
            return NotImplemented
        return np.array_equal(self.left, other.left) and np.array_equal(self.right, other.right)

    def __hash__(self):
        return hash(self.left.tobytes())

    def __len__(self):
        return self.n_leaves

    def __str__(self):
        from .textio import format_tree
        return format_tree(self)

    def __repr__(self):
        text = str(self) if self.n_nodes <= 41 else f"<{self.n_leaves} leaves>"
        return f"Tree({text})"


def left_comb(n: int) -> Tree:
    """``(((LL)L)...L)`` with ``n`` leaves."""
    left, right = [LEAF], [LEAF]
    for _ in range(n - 1):
        left += [LEAF, len(left) - 1]
        right += [LEAF, len(right)]
    return Tree(left, right, _trusted=True)


def complete_tree(height: int) -> Tree:
    """Perfect binary tree with ``2**height`` leaves."""
    t = ()
    for _ in range(height):
        t = (t, t)
    return Tree.from_nested(t)


# statistics


def leaf_count(t: Tree) -> int:
    return t.n_leaves


def symmetric_mask(t: Tree) -> np.ndarray:
    """Boolean per node: internal and both child subtrees isomorphic."""
    uc = t.scan.ucode
    mask = np.zeros(t.n_nodes, dtype=bool)
    idx = t.internal
    mask[idx] = uc[t.left[idx]] == uc[t.right[idx]]
    return mask


def sym_count(t: Tree) -> int:
    """Number of symmetrical nodes; ``|Aut(t)| = 2 ** sym_count(t)``."""
    return int(np.count_nonzero(symmetric_mask(t)))


def iso_class_size_log2(t: Tree) -> int:
    """log2 of the number of ordered trees isomorphic to ``t``."""
    return t.n_leaves - 1 - sym_count(t)


@dataclass(frozen=True)
class TreeStats:
    leaves: int
    sym: int

    @property
    def aut_log2(self) -> int:
        return self.sym

    @property
    def class_size_log2(self) -> int:
        return self.leaves - 1 - self.sym


def tree_stats(t: Tree) -> TreeStats:
    return TreeStats(leaves=t.n_leaves, sym=sym_count(t))


class CanonTable:
    """Interning table from unordered child-code pairs to dense codes.

    The leaf has code 0.  Codes are only meaningful within one table.
    """

    def __init__(self):
        self._codes = {}
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._codes) + 1

    def intern(self, a: int, b: int) -> int:
        key = (a, b) if a <= b else (b, a)
        code = self._codes.get(key)
        if code is None:
            with self._lock:
                code = self._codes.setdefault(key, len(self._codes) + 1)
        return code

    def codes(self, t: Tree) -> np.ndarray:
        """Table codes of every node of ``t``."""
        sc = t.scan
        # local codes are assigned bottom-up in first-seen order, so visiting
        # them in increasing order is a valid bottom-up order
        local = sc.ucode
        first = np.full(sc.n_unordered, -1, dtype=np.int64)
        order = np.arange(t.n_nodes)[::-1]
        first[local[order]] = order
        trans = np.zeros(sc.n_unordered, dtype=np.int64)
        for c in range(1, sc.n_unordered):
            v = first[c]
            trans[c] = self.intern(int(trans[local[t.left[v]]]), int(trans[local[t.right[v]]]))
        return trans[local]


_default_table = CanonTable()


def canonical_code(t: Tree, table: CanonTable | None = None) -> int:
    """Code of ``t``'s unordered isomorphism class in ``table``.

    Uses a process-wide table when none is given, so codes from separate calls
    are comparable within one run.
    """
    table = _default_table if table is None else table
    return int(table.codes(t)[-1])
