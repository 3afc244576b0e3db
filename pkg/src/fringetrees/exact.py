"""Exact counting sequences, enumeration of T_n and closed-form expectations.

Everything here uses Python integers and :class:`fractions.Fraction`; the
functions act as tolerance-free oracles for the samplers and the DAG code.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator

import numpy as np

from .models import ModelKind, pbst_exact
from .tree import CanonTable, Tree

MAX_ENUMERATE = 14
MAX_BRUTE_FORCE = 12


def catalan(k: int) -> int:
    if k < 0:
        raise ValueError("catalan index must be non-negative")
    return math.comb(2 * k, k) // (k + 1)


_we = [0, 1]


def wedderburn_etherington(k: int) -> int:
    """Number of unordered binary trees with ``k`` leaves."""
    if k < 1:
        raise ValueError("Wedderburn-Etherington index must be >= 1")
    while len(_we) <= k:
        m = len(_we)
        half = m // 2
        total = sum(_we[i] * _we[m - i] for i in range(1, (m + 1) // 2))
        if m % 2 == 0:
            total += _we[half] * (_we[half] + 1) // 2
        _we.append(total)
    return _we[k]


@lru_cache(maxsize=None)
def _shapes(n: int) -> tuple:
    if n == 1:
        return ((),)
    return tuple((a, b) for k in range(1, n)
                 for a in _shapes(k) for b in _shapes(n - k))


def enumerate_trees(n: int) -> Iterator[Tree]:
    """Every ordered binary tree with ``n`` leaves, ordered by left size."""
    if not 1 <= n <= MAX_ENUMERATE:
        raise ValueError(f"enumeration is limited to 1 <= n <= {MAX_ENUMERATE}, got {n}")
    for shape in _shapes(n):
        yield Tree.from_nested(shape)


def catalan_ratio(a: int, b: int) -> Fraction:
    """``C_a / C_b`` exactly, via ``C_{j+1} / C_j = 2(2j+1)/(j+2)``.

    Avoids materializing huge binomials when ``a`` and ``b`` are close.
    """
    if a < 0 or b < 0:
        raise ValueError("catalan index must be non-negative")
    lo, hi = min(a, b), max(a, b)
    num = den = 1
    for j in range(lo, hi):
        num *= 2 * (2 * j + 1)
        den *= j + 2
    r = Fraction(num, den)  # C_hi / C_lo
    return 1 / r if a < b else r


def _check_nk(n, k):
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")


def expected_occurrences_uniform(n: int, k: int, s_k: int) -> Fraction:
    """E(X_{n,k}) under the uniform model for a class of ``s_k`` trees of size ``k``.

    Occurrences are counted by grafting one of the ``s_k`` trees onto a leaf of
    a tree with ``n - k + 1`` leaves, which gives ``binom(2n-2k, n-k) * s_k``
    in total over ``T_n``.
    """
    _check_nk(n, k)
    if not 0 <= s_k <= catalan(k - 1):
        raise ValueError(f"s_k must lie in [0, C_{k-1}], got {s_k}")
    # binom(2n-2k, n-k) / binom(2n-2, n-1) = (n-k+1) C_{n-k} / (n C_{n-1})
    return s_k * (n - k + 1) * catalan_ratio(n - k, n - 1)


def expected_pairs_uniform(n: int, k: int, s_k: int) -> Fraction:
    """E(binom(X_{n,k}, 2)): unordered pairs of occurrences, uniform model."""
    _check_nk(n, k)
    if 2 * k > n:
        return Fraction(0)
    m = n - 2 * k + 2
    return catalan_ratio(m - 1, n - 1) * math.comb(m, 2) * s_k * s_k


def variance_occurrences_uniform(n: int, k: int, s_k: int) -> Fraction:
    """Exact V(X_{n,k}) under the uniform model."""
    mean = expected_occurrences_uniform(n, k, s_k)
    return 2 * expected_pairs_uniform(n, k, s_k) + mean - mean * mean


def expected_identical_pairs_uniform(n: int, k: int) -> Fraction:
    """Expected number of pairs of identical size-``k`` fringe subtrees."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if 2 * k > n:
        return Fraction(0)
    m = n - 2 * k + 2
    return catalan_ratio(m - 1, n - 1) * math.comb(m, 2) * catalan(k - 1)


def expected_z_bst(n: int, k: int) -> Fraction:
    """Expected number of size-``k`` fringe subtrees of a random BST."""
    _check_nk(n, k)
    if k == n:
        return Fraction(1)
    return Fraction(2 * n, k * (k + 1))


def variance_z_bst_asymptotic(n: int, k: int) -> float:
    """Linear-in-``n`` variance of the size-``k`` fringe count, random BST.

    Only a large-``n`` reference: at ``n = 4, k = 2`` the exact variance is
    ``2/9`` while this gives ``8/45``.
    """
    if not 2 <= k <= n:
        raise ValueError(f"need 2 <= k <= n, got n={n}, k={k}")
    num = 2 * (k - 1) * (4 * k * k - 3 * k - 4) * n
    den = (k + 1) ** 2 * k * (2 * k - 1) * (2 * k + 1)
    return num / den


def variance_x_bst_asymptotic(n: int, k: int, p_k: float) -> float:
    """Variance of the filtered size-``k`` count for class probability ``p_k``."""
    vz = variance_z_bst_asymptotic(n, k)
    return vz * p_k * p_k + 2 * n * p_k * (1 - p_k) / (k * (k + 1))


def model_weight(t: Tree, model) -> Fraction:
    model = ModelKind(model)
    if model is ModelKind.UNIFORM:
        return Fraction(1, catalan(t.n_leaves - 1))
    return pbst_exact(t)


def brute_force_expectation(n: int, model, functional: Callable[[Tree], object]):
    """Exact expectation of ``functional`` over T_n by full enumeration.

    Integer or rational values give a ``Fraction``; anything else a ``float``.
    """
    if not 1 <= n <= MAX_BRUTE_FORCE:
        raise ValueError(f"brute force is limited to 1 <= n <= {MAX_BRUTE_FORCE}, got {n}")
    total = Fraction(0)
    exact = True
    ftotal = 0.0
    for t in enumerate_trees(n):
        w = model_weight(t, model)
        val = functional(t)
        if isinstance(val, np.integer):
            val = int(val)
        if exact and isinstance(val, (int, Fraction)):
            total += w * val
        else:
            if exact:
                ftotal = float(total)
                exact = False
            ftotal += float(w) * float(val)
    return total if exact else ftotal


def class_probabilities(k: int, model) -> dict:
    """Probability of each unordered class in T_k, keyed by canonical code."""
    table = CanonTable()
    out: dict = {}
    for t in enumerate_trees(k):
        code = table.codes(t)[-1]
        out[int(code)] = out.get(int(code), Fraction(0)) + model_weight(t, model)
    return out


def filter_weight(k: int, model, predicate: Callable[[Tree], bool]) -> Fraction:
    """``s_k`` (uniform: a count) or ``p_k`` (BST: a probability) of a class."""
    model = ModelKind(model)
    members = [t for t in enumerate_trees(k) if predicate(t)]
    if model is ModelKind.UNIFORM:
        return Fraction(len(members))
    return sum((pbst_exact(t) for t in members), Fraction(0))
