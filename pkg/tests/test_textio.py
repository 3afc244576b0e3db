import pytest
from hypothesis import given, strategies as st

from fringetrees.exact import enumerate_trees
from fringetrees.models import sample
from fringetrees.textio import (TreeParseError, decode_binary, encode_binary, format_tree,
                                parse_tree)
from fringetrees.tree import Tree

from conftest import trees


def test_leaf_and_cherry():
    assert format_tree(Tree.leaf()) == "L"
    assert format_tree(parse_tree("(LL)")) == "(LL)"
    assert parse_tree("((LL)L)").n_leaves == 3


def test_whitespace_ignored():
    assert format_tree(parse_tree(" ( (L L)\n L ) ")) == "((LL)L)"


@pytest.mark.parametrize("text,pos,fragment", [
    ("((LL)", 5, "unbalanced"),
    ("", 0, "empty"),
    ("(LL))", 4, "trailing"),
    ("LL", 1, "trailing"),
    ("(L)", 2, "exactly 2 children"),
    ("(LLL)", 4, "exactly 2 children"),
    ("(LX)", 2, "unexpected character"),
    (")", 0, "unmatched"),
])
def test_parse_errors_carry_position(text, pos, fragment):
    with pytest.raises(TreeParseError) as info:
        parse_tree(text)
    assert info.value.pos == pos
    assert fragment in str(info.value)
    assert str(info.value).endswith(f"at position {pos}")


def test_round_trip_exhaustive():
    for n in range(1, 11):
        for t in enumerate_trees(n) if n <= 10 else ():
            text = format_tree(t)
            assert format_tree(parse_tree(text)) == text
            assert parse_tree(text) == t


@given(st.sampled_from(["uniform", "bst"]), st.integers(1, 100_000), st.integers(0, 2**32))
def test_round_trip_sampled(model, n, seed):
    t = sample(model, n, seed)
    assert parse_tree(format_tree(t)) == t


@given(trees)
def test_binary_round_trip(t):
    data = encode_binary(t)
    back, used = decode_binary(data + b"extra")
    assert back == t
    assert used == len(data)


def test_binary_truncation():
    data = encode_binary(parse_tree("((LL)(LL))"))
    with pytest.raises(ValueError):
        decode_binary(data[:4])
    with pytest.raises(ValueError):
        decode_binary(data[:-1])
