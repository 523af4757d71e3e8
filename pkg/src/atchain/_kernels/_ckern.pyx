# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled permutation-table kernels.

Same contract as ``_pykern``: complete lexicographic tables, Lehmer
codes/ranks and adjacent-swap neighbor indices, bit-identical outputs.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef long long _fact(int k):
    cdef long long f = 1
    cdef int i
    for i in range(2, k + 1):
        f *= i
    return f


def perm_table(int n):
    """All permutations of 1..n in lexicographic order, one int8 row each."""
    if n < 1 or n > 12:
        raise ValueError("n out of range")
    cdef long long m = _fact(n)
    out = np.empty((m, n), dtype=np.int8)
    cdef signed char[:, ::1] o = out
    cdef int cur[16]
    cdef long long row
    cdef int i, j, t, piv
    for j in range(n):
        cur[j] = j + 1
    for row in range(m):
        for j in range(n):
            o[row, j] = <signed char> cur[j]
        # advance to the next permutation (classic pivot/successor step)
        piv = -1
        for j in range(n - 2, -1, -1):
            if cur[j] < cur[j + 1]:
                piv = j
                break
        if piv < 0:
            break
        for j in range(n - 1, piv, -1):
            if cur[j] > cur[piv]:
                t = cur[j]
                cur[j] = cur[piv]
                cur[piv] = t
                break
        i = piv + 1
        j = n - 1
        while i < j:
            t = cur[i]
            cur[i] = cur[j]
            cur[j] = t
            i += 1
            j -= 1
    return out


def lehmer_codes(cnp.ndarray perms_in):
    """Per-row Lehmer codes: codes[:, i] = #{j > i : row[j] < row[i]}."""
    perms = np.ascontiguousarray(perms_in, dtype=np.int8)
    cdef signed char[:, ::1] p = perms
    cdef long long m = p.shape[0]
    cdef int n = p.shape[1]
    out = np.zeros((m, n), dtype=np.int8)
    cdef signed char[:, ::1] o = out
    cdef long long row
    cdef int i, j, cnt
    for row in range(m):
        for i in range(n - 1):
            cnt = 0
            for j in range(i + 1, n):
                if p[row, j] < p[row, i]:
                    cnt += 1
            o[row, i] = <signed char> cnt
    return out


def rank_perms(cnp.ndarray perms_in):
    """Lexicographic rank of each row, in [0, n!)."""
    perms = np.ascontiguousarray(perms_in, dtype=np.int8)
    cdef signed char[:, ::1] p = perms
    cdef long long m = p.shape[0]
    cdef int n = p.shape[1]
    out = np.empty(m, dtype=np.int64)
    cdef long long[::1] o = out
    cdef long long fact[16]
    cdef long long row, acc
    cdef int i, j, cnt
    for i in range(n):
        fact[i] = _fact(i)
    for row in range(m):
        acc = 0
        for i in range(n - 1):
            cnt = 0
            for j in range(i + 1, n):
                if p[row, j] < p[row, i]:
                    cnt += 1
            acc += cnt * fact[n - 1 - i]
        o[row] = acc
    return out


def build_tau_tables(cnp.ndarray perms_in):
    """Adjacent-swap neighbor indices for the complete table.

    T[r-1, idx] = rank of row idx after its 0-based columns r-1, r are
    swapped; the swap changes only two Lehmer digits, so the neighbor
    rank is the row index plus an O(1) correction.
    """
    perms = np.ascontiguousarray(perms_in, dtype=np.int8)
    cdef signed char[:, ::1] p = perms
    cdef long long m = p.shape[0]
    cdef int n = p.shape[1]
    if m != _fact(n):
        raise ValueError("perms must be the complete lexicographic table")
    out = np.empty((n - 1, m), dtype=np.int32)
    cdef int[:, ::1] o = out
    cdef long long fact[16]
    cdef long long row, delta
    cdef int i, j, q, cnt, ncq, ncq1
    cdef int c[16]
    for i in range(n):
        fact[i] = _fact(i)
    for row in range(m):
        for i in range(n):
            cnt = 0
            for j in range(i + 1, n):
                if p[row, j] < p[row, i]:
                    cnt += 1
            c[i] = cnt
        for q in range(n - 1):
            if p[row, q] < p[row, q + 1]:
                ncq = c[q + 1] + 1
                ncq1 = c[q]
            else:
                ncq = c[q + 1]
                ncq1 = c[q] - 1
            delta = (ncq - c[q]) * fact[n - 1 - q]
            delta += (ncq1 - c[q + 1]) * fact[n - 2 - q]
            o[q, row] = <int> (row + delta)
    return out
