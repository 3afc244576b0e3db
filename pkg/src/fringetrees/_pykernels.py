"""Pure-Python implementations of the hot kernels.

These mirror ``_kernels.pyx`` exactly (same inputs, same outputs, same id
assignment order) and are used when the compiled extension is unavailable.
All trees are exchanged as a pair of ``int64`` arrays ``left``/``right`` laid
out in post-order, with ``-1`` marking a leaf.
"""

import numpy as np

NAME = "python"


def postorder_relabel(left, right, root):
    """Relabel an arbitrary arena so that nodes appear in post-order."""
    m = len(left)
    new_left = [-1] * m
    new_right = [-1] * m
    newid = [0] * m
    nxt = 0
    # (node, state): state 0 = children pending, 1 = emit
    stack = [(root, 0)]
    while stack:
        v, state = stack.pop()
        lv = left[v]
        if lv < 0:
            newid[v] = nxt
            nxt += 1
        elif state == 0:
            stack.append((v, 1))
            stack.append((right[v], 0))
            stack.append((lv, 0))
        else:
            i = nxt
            nxt += 1
            newid[v] = i
            new_left[i] = newid[lv]
            new_right[i] = newid[right[v]]
    return (np.asarray(new_left, dtype=np.int64),
            np.asarray(new_right, dtype=np.int64))


def remy_tree(choices):
    """Grow a tree by Remy leaf insertion.

    ``choices[i-1]`` (step i = 1..n-1) lies in ``[0, 2*(2i-1))``; its high part
    picks one of the ``2i-1`` existing nodes, its low bit the side on which
    that node hangs below the new internal node.
    """
    steps = len(choices)
    m = 2 * steps + 1
    left = [-1] * m
    right = [-1] * m
    parent = [-1] * m
    root = 0
    for i in range(1, steps + 1):
        c = int(choices[i - 1])
        x = c >> 1
        u = 2 * i - 1
        leaf = 2 * i
        p = parent[x]
        if p < 0:
            root = u
        elif left[p] == x:
            left[p] = u
        else:
            right[p] = u
        parent[u] = p
        if c & 1:
            left[u] = leaf
            right[u] = x
        else:
            left[u] = x
            right[u] = leaf
        parent[x] = u
        parent[leaf] = u
    return postorder_relabel(left, right, root)


def bst_tree(n, uniforms):
    """Random binary search tree by recursive size splitting.

    A subtree with ``m > 1`` leaves takes its left size as
    ``1 + floor(u * (m - 1))`` for the next unused uniform ``u``.  Positions are
    written directly in post-order: a subtree of ``m`` leaves spans ``2m - 1``
    consecutive slots with its root in the last one.
    """
    m_total = 2 * n - 1
    left = [-1] * m_total
    right = [-1] * m_total
    j = 0
    stack = [(0, n)]
    while stack:
        off, m = stack.pop()
        if m == 1:
            continue
        a = 1 + int(uniforms[j] * (m - 1))
        j += 1
        r = off + 2 * m - 2
        left[r] = off + 2 * a - 2
        right[r] = off + 2 * m - 3
        stack.append((off + 2 * a - 1, m - a))
        stack.append((off, a))
    return (np.asarray(left, dtype=np.int64),
            np.asarray(right, dtype=np.int64))


def scan(left, right):
    """One post-order pass computing sizes plus ordered and unordered ids.

    Returns ``(size, oid, ucode, n_ordered, n_unordered)``.  Ids are dense and
    assigned in first-seen post-order; the leaf gets id 0 in both tables.
    """
    m = len(left)
    left = left.tolist() if hasattr(left, "tolist") else list(left)
    right = right.tolist() if hasattr(right, "tolist") else list(right)
    size = [0] * m
    oid = [0] * m
    ucode = [0] * m
    otab = {}
    utab = {}
    for i in range(m):
        lv = left[i]
        if lv < 0:
            size[i] = 1
            continue
        rv = right[i]
        size[i] = size[lv] + size[rv]
        key = (oid[lv], oid[rv])
        o = otab.get(key)
        if o is None:
            o = otab[key] = len(otab) + 1
        oid[i] = o
        a, b = ucode[lv], ucode[rv]
        if a > b:
            a, b = b, a
        key = (a, b)
        u = utab.get(key)
        if u is None:
            u = utab[key] = len(utab) + 1
        ucode[i] = u
    return (np.asarray(size, dtype=np.int64), np.asarray(oid, dtype=np.int64),
            np.asarray(ucode, dtype=np.int64), len(otab) + 1, len(utab) + 1)
