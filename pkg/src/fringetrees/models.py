"""Samplers for the uniform and binary-search-tree models on ordered trees.

Every sampler is a pure function of its parameters and a seed.  Seeds go
through :class:`numpy.random.SeedSequence`, and trial ``i`` of an experiment
draws from the spawned child stream ``(seed, i)`` so trials are independent
and reproducible in any execution order.

The BST sampler uses the size-splitting description of the model: a subtree
with ``m > 1`` leaves puts ``j`` leaves on the left with probability
``1/(m-1)`` for each ``j`` in ``1..m-1``.  This is the same distribution as
inserting a uniformly random permutation of ``n - 1`` keys into a binary
search tree and reading off the extended tree with ``n`` leaves.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction

import numpy as np

from . import _backend
from .tree import Tree


class ModelKind(str, enum.Enum):
    UNIFORM = "uniform"
    BST = "bst"


def make_rng(seed, trial: int | None = None) -> np.random.Generator:
    """Generator for ``seed`` or, with ``trial``, for its derived stream."""
    if isinstance(seed, np.random.Generator):
        if trial is not None:
            raise ValueError("cannot derive a trial stream from a Generator")
        return seed
    if seed is None or int(seed) < 0 or int(seed) >= 2**64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    if trial is None:
        ss = np.random.SeedSequence(int(seed))
    else:
        ss = np.random.SeedSequence(int(seed), spawn_key=(int(trial),))
    return np.random.Generator(np.random.PCG64(ss))


def _check_n(n):
    if int(n) != n or n < 1:
        raise ValueError(f"tree size must be a positive integer, got {n!r}")
    if n > 2**31:
        raise ValueError(f"tree size {n} exceeds the supported 2**31 leaves")


def sample_uniform(n: int, seed=0) -> Tree:
    """Uniformly random ordered binary tree with ``n`` leaves (Remy growth)."""
    _check_n(n)
    rng = make_rng(seed)
    highs = 2 * (2 * np.arange(1, n, dtype=np.int64) - 1)
    choices = rng.integers(0, highs) if n > 1 else np.zeros(0, dtype=np.int64)
    left, right = _backend.kernels.remy_tree(choices.astype(np.int64))
    return Tree(left, right, _trusted=True)


def sample_bst(n: int, seed=0) -> Tree:
    """Random binary search tree with ``n`` leaves."""
    _check_n(n)
    rng = make_rng(seed)
    left, right = _backend.kernels.bst_tree(int(n), rng.random(n - 1))
    return Tree(left, right, _trusted=True)


def sample(model, n: int, seed=0) -> Tree:
    model = ModelKind(model)
    return sample_uniform(n, seed) if model is ModelKind.UNIFORM else sample_bst(n, seed)


def sample_uniform_recursive(n: int, seed=0) -> Tree:
    """Uniform sampler by Catalan-weighted root splits.

    Independent of the Remy kernel and exact in big-integer arithmetic; meant
    as a cross-check for small ``n``.
    """
    _check_n(n)
    if n > 12:
        raise ValueError("the recursive sampler is an oracle for n <= 12")
    from .exact import catalan

    rng = make_rng(seed)

    def grow(m):
        if m == 1:
            return ()
        r = int(rng.integers(0, catalan(m - 1)))
        for a in range(1, m):
            w = catalan(a - 1) * catalan(m - a - 1)
            if r < w:
                break
            r -= w
        return (grow(a), grow(m - a))

    return Tree.from_nested(grow(n))


def pbst_neg_log2(t: Tree) -> float:
    """``-log2 P_bst(t)``: sum of ``log2(|t(v)| - 1)`` over internal nodes."""
    s = t.sizes[t.internal]
    return float(np.log2(s - 1).sum())


def fringe_bst_bits(t: Tree) -> np.ndarray:
    """``-log2 P_bst`` of every fringe subtree of ``t``."""
    per_node = np.zeros(t.n_nodes)
    idx = t.internal
    per_node[idx] = np.log2(t.sizes[idx] - 1)
    return t.subtree_sums(per_node)


def pbst_exact(t: Tree) -> Fraction:
    """Exact BST probability of ``t`` as a rational."""
    denom = math.prod(int(s) - 1 for s in t.sizes[t.internal])
    return Fraction(1, denom)
