import numpy as np
import pytest
from hypothesis import given, strategies as st

from fringetrees import _backend, _pykernels
from fringetrees.models import make_rng, sample
from fringetrees.tree import Tree

compiled = _backend.BACKENDS.get("compiled")
needs_compiled = pytest.mark.skipif(compiled is None, reason="extension not built")


def test_set_backend_round_trip():
    prev = _backend.set_backend("python")
    assert _backend.current() == "python"
    _backend.set_backend(prev)
    assert _backend.current() == prev
    with pytest.raises(ValueError):
        _backend.set_backend("fortran")


@needs_compiled
@given(st.integers(1, 3000), st.integers(0, 2**32))
def test_remy_parity(n, seed):
    rng = make_rng(seed)
    choices = rng.integers(0, 2 * (2 * np.arange(1, n, dtype=np.int64) - 1)) if n > 1 \
        else np.zeros(0, dtype=np.int64)
    choices = choices.astype(np.int64)
    for a, b in zip(compiled.remy_tree(choices), _pykernels.remy_tree(choices)):
        assert np.array_equal(a, b)


@needs_compiled
@given(st.integers(1, 3000), st.integers(0, 2**32))
def test_bst_and_scan_parity(n, seed):
    u = make_rng(seed).random(n - 1)
    left, right = compiled.bst_tree(n, u)
    l2, r2 = _pykernels.bst_tree(n, u)
    assert np.array_equal(left, l2) and np.array_equal(right, r2)
    for a, b in zip(compiled.scan(left, right), _pykernels.scan(left, right)):
        assert np.array_equal(a, b)


@needs_compiled
@given(st.integers(1, 500), st.integers(0, 2**32))
def test_relabel_parity(n, seed):
    t = sample("uniform", n, seed)
    perm = make_rng(seed).permutation(t.n_nodes)
    inv = np.argsort(perm)
    left = np.where(t.left >= 0, inv[np.maximum(t.left, 0)], -1)[perm]
    right = np.where(t.right >= 0, inv[np.maximum(t.right, 0)], -1)[perm]
    root = int(inv[t.root])
    for a, b in zip(compiled.postorder_relabel(left, right, root),
                    _pykernels.postorder_relabel(left, right, root)):
        assert np.array_equal(a, b)
    assert Tree.from_arena(left, right, root) == t


def test_samplers_agree_across_backends(backend):
    t = sample("uniform", 777, 3)
    b = sample("bst", 777, 3)
    assert t.scan.n_ordered >= t.scan.n_unordered
    ref = _backend.BACKENDS["python"]
    assert np.array_equal(t.left, Tree(*ref.remy_tree(
        make_rng(3).integers(0, 2 * (2 * np.arange(1, 777, dtype=np.int64) - 1)))).left)
    assert b.n_leaves == 777
