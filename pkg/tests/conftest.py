import pytest
from hypothesis import settings, strategies as st

from fringetrees import _backend
from fringetrees.tree import Tree

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

nested_trees = st.recursive(st.just(()), lambda sub: st.tuples(sub, sub), max_leaves=40)
trees = nested_trees.map(Tree.from_nested)


def canon_string(t: Tree) -> str:
    """Order-free serialization built from sorted child strings."""
    memo = []
    for v in range(t.n_nodes):
        lv = int(t.left[v])
        if lv < 0:
            memo.append("L")
        else:
            a, b = sorted((memo[lv], memo[int(t.right[v])]))
            memo.append(f"({a}{b})")
    return memo[-1]


@pytest.fixture(params=_backend.available())
def backend(request):
    prev = _backend.set_backend(request.param)
    yield request.param
    _backend.set_backend(prev)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
