"""Pure NumPy permutation-table kernels.

Drop-in twin of the compiled backend (``_ckern``); selected by
``atchain._kernels`` when the extension is unavailable or when
``ATCHAIN_PURE_PY=1`` is set.  All functions are vectorized over rows and
produce bit-identical outputs to the compiled versions.
"""

import numpy as np

_FACT = np.array(
    [1, 1, 2, 6, 24, 120, 720, 5040, 40320, 362880, 3628800],
    dtype=np.int64,
)


def perm_table(n: int) -> np.ndarray:
    """All permutations of 1..n in lexicographic order, one int8 row each.

    Built recursively: the block of rows starting with the f-th smallest
    label is the table for n-1 relabelled onto the remaining labels.
    """
    table = np.ones((1, 1), dtype=np.int8)
    for k in range(2, n + 1):
        block = int(_FACT[k - 1])
        out = np.empty((int(_FACT[k]), k), dtype=np.int8)
        labels = np.arange(1, k + 1, dtype=np.int8)
        for pos in range(k):
            rest = np.delete(labels, pos)
            rows = slice(pos * block, (pos + 1) * block)
            out[rows, 0] = labels[pos]
            out[rows, 1:] = rest[table - 1]
        table = out
    return table


def lehmer_codes(perms: np.ndarray) -> np.ndarray:
    """Per-row Lehmer codes: codes[:, i] = #{j > i : row[j] < row[i]}."""
    m, n = perms.shape
    codes = np.zeros((m, n), dtype=np.int8)
    for i in range(n - 1):
        col = perms[:, i]
        acc = np.zeros(m, dtype=np.int8)
        for j in range(i + 1, n):
            acc += perms[:, j] < col
        codes[:, i] = acc
    return codes


def rank_perms(perms: np.ndarray) -> np.ndarray:
    """Lexicographic rank of each row, in [0, n!)."""
    _, n = perms.shape
    codes = lehmer_codes(perms).astype(np.int64)
    weights = _FACT[n - 1 :: -1]
    return codes @ weights


def build_tau_tables(perms: np.ndarray) -> np.ndarray:
    """Adjacent-swap neighbor indices for the complete table.

    ``perms`` must be the full lexicographic table for its n.  Returns an
    (n-1, n!) int32 array T with T[r-1, idx] = rank of row idx after its
    entries at 0-based columns r-1 and r are swapped.

    Swapping adjacent entries changes only two Lehmer digits, so each
    neighbor rank is the row index plus an O(1) correction.
    """
    m, n = perms.shape
    if m != _FACT[n]:
        raise ValueError("perms must be the complete lexicographic table")
    codes = lehmer_codes(perms)
    base = np.arange(m, dtype=np.int64)
    out = np.empty((n - 1, m), dtype=np.int32)
    for q in range(n - 1):
        asc = perms[:, q] < perms[:, q + 1]
        cq = codes[:, q].astype(np.int64)
        cq1 = codes[:, q + 1].astype(np.int64)
        new_cq = np.where(asc, cq1 + 1, cq1)
        new_cq1 = np.where(asc, cq, cq - 1)
        delta = (new_cq - cq) * _FACT[n - 1 - q]
        delta += (new_cq1 - cq1) * _FACT[n - 2 - q]
        out[q] = base + delta
    return out
