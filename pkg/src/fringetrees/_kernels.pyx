# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled hot kernels; see ``_pykernels`` for the reference semantics."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector
from cython.operator cimport dereference as deref

cnp.import_array()

NAME = "compiled"


cdef inline uint64_t _pack(int64_t a, int64_t b) nogil:
    return (<uint64_t>a << 32) | <uint64_t>b


def postorder_relabel(const int64_t[:] left, const int64_t[:] right, int64_t root):
    cdef Py_ssize_t m = left.shape[0]
    new_left_a = np.full(m, -1, dtype=np.int64)
    new_right_a = np.full(m, -1, dtype=np.int64)
    cdef int64_t[:] new_left = new_left_a
    cdef int64_t[:] new_right = new_right_a
    cdef vector[int64_t] newid
    cdef vector[int64_t] stack
    cdef int64_t nxt = 0, v, state, lv, i
    newid.resize(m)
    with nogil:
        stack.push_back(root)
        stack.push_back(0)
        while stack.size():
            state = stack.back()
            stack.pop_back()
            v = stack.back()
            stack.pop_back()
            lv = left[v]
            if lv < 0:
                newid[v] = nxt
                nxt += 1
            elif state == 0:
                stack.push_back(v)
                stack.push_back(1)
                stack.push_back(right[v])
                stack.push_back(0)
                stack.push_back(lv)
                stack.push_back(0)
            else:
                i = nxt
                nxt += 1
                newid[v] = i
                new_left[i] = newid[lv]
                new_right[i] = newid[right[v]]
    return new_left_a, new_right_a


def remy_tree(const int64_t[:] choices):
    cdef Py_ssize_t steps = choices.shape[0]
    cdef Py_ssize_t m = 2 * steps + 1
    left_a = np.full(m, -1, dtype=np.int64)
    right_a = np.full(m, -1, dtype=np.int64)
    parent_a = np.full(m, -1, dtype=np.int64)
    cdef int64_t[:] left = left_a
    cdef int64_t[:] right = right_a
    cdef int64_t[:] parent = parent_a
    cdef int64_t root = 0, c, x, u, leaf, p
    cdef Py_ssize_t i
    with nogil:
        for i in range(1, steps + 1):
            c = choices[i - 1]
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
    return postorder_relabel(left_a, right_a, root)


def bst_tree(int64_t n, const double[:] uniforms):
    cdef Py_ssize_t m_total = 2 * n - 1
    left_a = np.full(m_total, -1, dtype=np.int64)
    right_a = np.full(m_total, -1, dtype=np.int64)
    cdef int64_t[:] left = left_a
    cdef int64_t[:] right = right_a
    cdef vector[int64_t] stack
    cdef int64_t off, m, a, r
    cdef Py_ssize_t j = 0
    with nogil:
        stack.push_back(0)
        stack.push_back(n)
        while stack.size():
            m = stack.back()
            stack.pop_back()
            off = stack.back()
            stack.pop_back()
            if m == 1:
                continue
            a = 1 + <int64_t>(uniforms[j] * (m - 1))
            j += 1
            r = off + 2 * m - 2
            left[r] = off + 2 * a - 2
            right[r] = off + 2 * m - 3
            stack.push_back(off + 2 * a - 1)
            stack.push_back(m - a)
            stack.push_back(off)
            stack.push_back(a)
    return left_a, right_a


def scan(const int64_t[:] left, const int64_t[:] right):
    cdef Py_ssize_t m = left.shape[0]
    size_a = np.empty(m, dtype=np.int64)
    oid_a = np.zeros(m, dtype=np.int64)
    ucode_a = np.zeros(m, dtype=np.int64)
    cdef int64_t[:] size = size_a
    cdef int64_t[:] oid = oid_a
    cdef int64_t[:] ucode = ucode_a
    cdef unordered_map[uint64_t, int64_t] otab
    cdef unordered_map[uint64_t, int64_t] utab
    cdef unordered_map[uint64_t, int64_t].iterator it
    cdef Py_ssize_t i
    cdef int64_t lv, rv, a, b, o
    cdef uint64_t key
    otab.reserve(m // 2 + 1)
    utab.reserve(m // 2 + 1)
    with nogil:
        for i in range(m):
            lv = left[i]
            if lv < 0:
                size[i] = 1
                continue
            rv = right[i]
            size[i] = size[lv] + size[rv]
            key = _pack(oid[lv], oid[rv])
            it = otab.find(key)
            if it == otab.end():
                o = <int64_t>otab.size() + 1
                otab[key] = o
            else:
                o = deref(it).second
            oid[i] = o
            a = ucode[lv]
            b = ucode[rv]
            if a > b:
                a, b = b, a
            key = _pack(a, b)
            it = utab.find(key)
            if it == utab.end():
                o = <int64_t>utab.size() + 1
                utab[key] = o
            else:
                o = deref(it).second
            ucode[i] = o
    return size_a, oid_a, ucode_a, <Py_ssize_t>otab.size() + 1, <Py_ssize_t>utab.size() + 1
