# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the bitmask kernels in ``_kernels_py``."""

from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef inline int _popcount(uint64_t x) nogil:
    return __builtin_popcountll(x)


def count_minor_bases(bases, unsigned long long contract, unsigned long long delete):
    """Number of bases containing ``contract`` and avoiding ``delete``."""
    cdef Py_ssize_t i, m = len(bases)
    cdef uint64_t *arr = <uint64_t *> malloc(m * sizeof(uint64_t))
    cdef uint64_t b
    cdef long count = 0
    if arr == NULL:
        raise MemoryError()
    try:
        for i in range(m):
            arr[i] = bases[i]
        with nogil:
            for i in range(m):
                b = arr[i]
                if (b & contract) == contract and (b & delete) == 0:
                    count += 1
    finally:
        free(arr)
    return count


def subset_ranks(int n, independent):
    """Rank of every subset of ``range(n)`` from the independent sets."""
    cdef Py_ssize_t size = (<Py_ssize_t> 1) << n
    cdef unsigned char *flag = <unsigned char *> malloc(size)
    cdef unsigned char *rank = <unsigned char *> malloc(size)
    cdef Py_ssize_t X, low
    cdef int best, e, r
    if flag == NULL or rank == NULL:
        free(flag)
        free(rank)
        raise MemoryError()
    try:
        for X in range(size):
            flag[X] = 0
        for X in independent:
            flag[X] = 1
        with nogil:
            rank[0] = 0
            for X in range(1, size):
                if flag[X]:
                    rank[X] = _popcount(X)
                    continue
                best = 0
                for e in range(n):
                    if (X >> e) & 1:
                        r = rank[X & ~((<Py_ssize_t> 1) << e)]
                        if r > best:
                            best = r
                rank[X] = best
        return [rank[X] for X in range(size)]
    finally:
        free(flag)
        free(rank)
