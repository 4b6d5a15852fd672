# cython: boundscheck=False, wraparound=False
"""Compiled permutation kernel; behavioural twin of hcov._pure."""

from cpython.tuple cimport PyTuple_GET_ITEM, PyTuple_GET_SIZE

BACKEND = "cython"


def perm_id(n):
    """Identity permutation on 0..n-1."""
    return tuple(range(n))


def perm_mul(tuple p, tuple q):
    """Product p*q acting right-to-left: (p*q)(i) = p(q(i))."""
    cdef Py_ssize_t n = PyTuple_GET_SIZE(q)
    cdef Py_ssize_t i, qi
    cdef list out = [0] * n
    for i in range(n):
        qi = <object>PyTuple_GET_ITEM(q, i)
        out[i] = <object>PyTuple_GET_ITEM(p, qi)
    return tuple(out)


def perm_inv(tuple p):
    """Inverse permutation."""
    cdef Py_ssize_t n = PyTuple_GET_SIZE(p)
    cdef Py_ssize_t i, pi
    cdef list out = [0] * n
    for i in range(n):
        pi = <object>PyTuple_GET_ITEM(p, i)
        out[pi] = i
    return tuple(out)


def perm_pow(tuple p, k):
    """k-th power of p, k may be negative."""
    cdef Py_ssize_t n = PyTuple_GET_SIZE(p)
    if k < 0:
        p = perm_inv(p)
        k = -k
    out = perm_id(n)
    while k:
        if k & 1:
            out = perm_mul(out, p)
        p = perm_mul(p, p)
        k >>= 1
    return out


def perm_order(tuple p):
    """Least k >= 1 with p^k = identity (lcm of cycle lengths)."""
    cdef Py_ssize_t n = PyTuple_GET_SIZE(p)
    cdef Py_ssize_t i, j, length
    cdef list seen = [False] * n
    order = 1
    for i in range(n):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = <object>PyTuple_GET_ITEM(p, j)
            length += 1
        g = _gcd(order, length)
        order = order * length // g
    return order


cdef _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def mulclose(gens, limit=None):
    """Closure of gens under multiplication; returns a set of tuples.

    Raises ValueError when the closure exceeds `limit` elements.
    """
    cdef list gen_list = [tuple(g) for g in gens]
    if not gen_list:
        return set()
    cdef set els = set(gen_list)
    els.add(perm_id(len(gen_list[0])))
    cdef list frontier = list(els)
    cdef list new
    while frontier:
        new = []
        for a in gen_list:
            for b in frontier:
                c = perm_mul(a, b)
                if c not in els:
                    els.add(c)
                    new.append(c)
                    if limit is not None and len(els) > limit:
                        raise ValueError(f"closure exceeds limit {limit}")
        frontier = new
    return els
