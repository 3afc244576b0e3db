import json

import numpy as np
import pytest
from hypothesis import given

from fringetrees.dag import (ClassFilter, all_trees, dag_sizes, empty_class, fringe_profile,
                             fringe_stats, large_automorphism_group, low_bst_probability,
                             minimal_dag, unordered_minimal_dag)
from fringetrees.exact import catalan, enumerate_trees
from fringetrees.models import pbst_neg_log2, sample
from fringetrees.textio import format_tree
from fringetrees.tree import complete_tree, left_comb, sym_count

from conftest import canon_string, trees


def _fringe_strings(t):
    return [format_tree(t.subtree(v)) for v in range(t.n_nodes)]


def test_small_cases():
    assert dag_sizes(left_comb(1)) == (1, 1)
    assert dag_sizes(left_comb(5)) == (5, 5)
    assert dag_sizes(complete_tree(4)) == (5, 5)
    t = sample("uniform", 1, 0)
    assert minimal_dag(t).n_nodes == 1


@given(trees)
def test_dag_sizes_match_string_oracles(t):
    h, f = dag_sizes(t)
    assert h == len(set(_fringe_strings(t)))
    assert f == len({canon_string(t.subtree(v)) for v in range(t.n_nodes)})
    assert f <= h


@given(trees)
def test_expand_round_trip(t):
    assert minimal_dag(t).expand() == t
    back = unordered_minimal_dag(t).expand()
    assert canon_string(back) == canon_string(t)


@given(trees)
def test_dag_structure(t):
    for dag in (minimal_dag(t), unordered_minimal_dag(t)):
        assert dag.root == dag.n_nodes - 1
        inner = dag.left >= 0
        ids = np.arange(dag.n_nodes)
        assert np.all(dag.left[inner] < ids[inner]) and np.all(dag.right[inner] < ids[inner])
        assert np.array_equal(dag.size[inner], dag.size[dag.left[inner]] + dag.size[dag.right[inner]])
    u = unordered_minimal_dag(t)
    assert np.all(u.left[u.left >= 0] <= u.right[u.left >= 0])


def test_json_shape():
    doc = minimal_dag(complete_tree(2)).to_json()
    json.dumps(doc)
    assert doc["mode"] == "ordered" and doc["root"] == 2
    assert doc["nodes"][0] == {"id": 0, "kind": "leaf", "left": None, "right": None}
    assert doc["nodes"][2] == {"id": 2, "kind": "internal", "left": 1, "right": 1}


def test_profile_counts():
    t = sample("bst", 3000, 4)
    prof = fringe_profile(t, tail_threshold=10)
    assert prof.total.sum() == t.n_nodes
    assert prof.distinct_ordered.sum() == dag_sizes(t)[0]
    assert prof.distinct_unordered.sum() == dag_sizes(t)[1]
    assert prof.tail_count == int(np.count_nonzero(t.sizes > 10))
    assert np.all(prof.distinct_unordered <= prof.distinct_ordered)
    assert np.all(prof.distinct_ordered <= prof.total)
    d = prof.as_dict()
    assert d["total"][1] == 3000


def test_distinct_per_size_bounded_by_catalan():
    t = sample("uniform", 5000, 2)
    prof = fringe_profile(t)
    for k in range(1, 12):
        assert prof.distinct_ordered[k] <= catalan(k - 1)


def test_filters():
    t = sample("bst", 2000, 9)
    st = fringe_stats(t)
    assert st.sym[t.root] == sym_count(t)
    assert st.bits[t.root] == pytest.approx(pbst_neg_log2(t))
    prof = fringe_profile(t, filters=[all_trees(5), empty_class(), low_bst_probability(1.7)])
    assert prof.filtered["all"][5] == prof.total[5]
    assert prof.filtered["all"].sum() == prof.total[5]
    assert prof.filtered["empty"].sum() == 0
    assert prof.filtered["low_bst_probability"].sum() <= prof.total.sum()


def test_filter_weights_exact_and_sampled():
    f = large_automorphism_group(0.5)
    exact = f.weight(6, "uniform")
    direct = sum(1 for t in enumerate_trees(6) if f.contains(t))
    assert exact == direct
    assert all_trees().weight(8, "bst") == 1
    assert empty_class().weight(20, "uniform", trials=50) == 0
    assert all_trees().weight(20, "bst", trials=50) == 1.0


def test_custom_filter_restricts_size():
    f = ClassFilter("cherries", lambda s: s.size == 2, k=2)
    t = complete_tree(3)
    mask = f.mask(fringe_stats(t))
    assert mask.sum() == 4
