# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled sparse rank modulo a prime (< 2**31).

Same algorithm as ``_modrank_py``: left-looking elimination with a dense
accumulator and a min-heap of touched columns.
"""

from libcpp.vector cimport vector
from libcpp.queue cimport priority_queue
from libc.stdint cimport int64_t


cdef inline int64_t _inv(int64_t a, int64_t p):
    cdef int64_t result = 1
    cdef int64_t e = p - 2
    a %= p
    while e > 0:
        if e & 1:
            result = result * a % p
        a = a * a % p
        e >>= 1
    return result


def rank_mod_p(const int64_t[:] indptr, const int64_t[:] indices, const int64_t[:] data,
               Py_ssize_t nrows, Py_ssize_t ncols, int64_t p):
    cdef vector[int64_t] acc = vector[int64_t](ncols, 0)
    cdef vector[char] queued = vector[char](ncols, 0)
    cdef vector[int64_t] piv_start = vector[int64_t](ncols, -1)
    cdef vector[int64_t] piv_len = vector[int64_t](ncols, 0)
    cdef vector[int64_t] store_cols
    cdef vector[int64_t] store_vals
    # priority_queue is a max-heap; push negated column indices
    cdef priority_queue[int64_t] heap
    cdef vector[int64_t] leftover
    cdef Py_ssize_t r, k, start, stop, base, length, j
    cdef int64_t c, cc, f, v, inv, rank = 0
    for r in range(nrows):
        start = indptr[r]
        stop = indptr[r + 1]
        if start == stop:
            continue
        for k in range(start, stop):
            c = indices[k]
            v = data[k] % p
            if v:
                acc[c] = (acc[c] + v) % p
                if not queued[c]:
                    queued[c] = 1
                    heap.push(-c)
        while not heap.empty():
            c = -heap.top()
            heap.pop()
            queued[c] = 0
            f = acc[c]
            acc[c] = 0
            if f == 0:
                continue
            if piv_start[c] >= 0:
                base = piv_start[c]
                length = piv_len[c]
                for j in range(1, length):
                    cc = store_cols[base + j]
                    acc[cc] = (acc[cc] + (p - f) * store_vals[base + j]) % p
                    if not queued[cc]:
                        queued[cc] = 1
                        heap.push(-cc)
                continue
            # new pivot row: c followed by every remaining nonzero entry
            inv = _inv(f, p)
            leftover.clear()
            while not heap.empty():
                cc = -heap.top()
                heap.pop()
                queued[cc] = 0
                if acc[cc]:
                    leftover.push_back(cc)
            piv_start[c] = store_cols.size()
            piv_len[c] = leftover.size() + 1
            store_cols.push_back(c)
            store_vals.push_back(1)
            for j in range(<Py_ssize_t>leftover.size()):
                cc = leftover[j]
                store_cols.push_back(cc)
                store_vals.push_back(acc[cc] * inv % p)
                acc[cc] = 0
            rank += 1
            break
    return rank
