"""Permutations of {1..n}: ranking, adjacent swaps and swap-pair orbits.

Positions and labels are both 1-based, matching one-line notation
x = (x_1, ..., x_n).  Ranks are lexicographic, in [0, n!), and every
vector over the state space is a plain array indexed by rank.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import ArgumentError, CapacityError

MAX_N = 10  # 10! = 3,628,800 states; hard cap for every public constructor

_FACT = [1, 1, 2, 6, 24, 120, 720, 5040, 40320, 362880, 3628800]


def check_n(n) -> int:
    """Validate a deck size and return it as a plain int."""
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise ArgumentError(f"n must be an integer, got {n!r}")
    n = int(n)
    if n < 2:
        raise ArgumentError(f"n must be at least 2, got {n}")
    if n > MAX_N:
        raise CapacityError(f"n = {n} exceeds the supported cap of {MAX_N} (n! states)")
    return n


@dataclass(frozen=True)
class Permutation:
    """A permutation of {1..n} in one-line notation.

    >>> Permutation((2, 1, 3)).rank()
    2
    >>> Permutation.unrank(2, 3).entries
    (2, 1, 3)
    """

    entries: tuple[int, ...]

    def __post_init__(self):
        n = check_n(len(self.entries))
        if sorted(self.entries) != list(range(1, n + 1)):
            raise ArgumentError(f"not a permutation of 1..{n}: {self.entries!r}")

    @property
    def n(self) -> int:
        return len(self.entries)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, check_n(n) + 1)))

    @classmethod
    def unrank(cls, idx: int, n: int) -> "Permutation":
        """The permutation of 1..n with lexicographic rank idx."""
        n = check_n(n)
        if not 0 <= idx < _FACT[n]:
            raise ArgumentError(f"rank {idx} out of range [0, {n}!)")
        avail = list(range(1, n + 1))
        out = []
        for i in range(n):
            d, idx = divmod(idx, _FACT[n - 1 - i])
            out.append(avail.pop(d))
        return cls(tuple(out))

    def rank(self) -> int:
        """Lexicographic rank in [0, n!)."""
        e = self.entries
        n = self.n
        acc = 0
        for i in range(n - 1):
            smaller = sum(1 for j in range(i + 1, n) if e[j] < e[i])
            acc += smaller * _FACT[n - 1 - i]
        return acc

    def apply_tau(self, r: int) -> "Permutation":
        """Swap the entries at positions r and r+1 (1-based)."""
        if not 1 <= r <= self.n - 1:
            raise ArgumentError(f"swap position r must be in 1..{self.n - 1}, got {r}")
        e = list(self.entries)
        e[r - 1], e[r] = e[r], e[r - 1]
        return Permutation(tuple(e))

    def pos(self, label: int) -> int:
        """1-based position of a label."""
        try:
            return self.entries.index(label) + 1
        except ValueError:
            raise ArgumentError(f"label {label} not in 1..{self.n}") from None

    def to_json(self) -> list[int]:
        return list(self.entries)

    @classmethod
    def from_json(cls, data) -> "Permutation":
        return cls(tuple(int(v) for v in data))


@dataclass(frozen=True)
class StateSpace:
    """Shared lexicographic tables for all of S_n.

    perms holds the one-line rows (row index = rank); tau[r-1, idx] is the
    rank of state idx after swapping positions r, r+1.  Both arrays are
    marked read-only and cached per n.
    """

    n: int
    size: int
    perms: np.ndarray
    tau: np.ndarray


@lru_cache(maxsize=4)
def state_space(n: int) -> StateSpace:
    n = check_n(n)
    perms = _kernels.perm_table(n)
    tau = _kernels.build_tau_tables(perms)
    perms.setflags(write=False)
    tau.setflags(write=False)
    return StateSpace(n=n, size=perms.shape[0], perms=perms, tau=tau)


# The six arrangements a label triple (i, j, k) takes inside its window,
# in the fixed member order used everywhere downstream.
def _window_arrangements(i, j, k):
    return ((i, j, k), (j, i, k), (i, k, j), (j, k, i), (k, i, j), (k, j, i))


@dataclass(frozen=True)
class OrbitHandle:
    """One six-element orbit of the swaps at positions r and r+1.

    Positions outside the window r..r+2 are frozen; the window carries the
    sorted label triple (i, j, k) through all six arrangements
    (i,j,k), (j,i,k), (i,k,j), (j,k,i), (k,i,j), (k,j,i), in that order.
    """

    r: int
    labels: tuple[int, int, int]
    members: tuple[Permutation, ...]

    @property
    def n(self) -> int:
        return self.members[0].n

    def member_ranks(self) -> tuple[int, ...]:
        return tuple(m.rank() for m in self.members)


def g_orbit(x: Permutation, r: int) -> OrbitHandle:
    """The orbit of x under the swaps at positions r and r+1.

    Any member of an orbit yields the same handle.
    """
    n = x.n
    if n < 3:
        raise ArgumentError("orbits need n >= 3")
    if not 1 <= r <= n - 2:
        raise ArgumentError(f"r must be in 1..{n - 2}, got {r}")
    base = list(x.entries)
    i, j, k = sorted(base[r - 1 : r + 2])
    members = []
    for arrangement in _window_arrangements(i, j, k):
        m = list(base)
        m[r - 1 : r + 2] = arrangement
        members.append(Permutation(tuple(m)))
    return OrbitHandle(r=r, labels=(i, j, k), members=tuple(members))


def orbit_partition(n: int, r: int) -> list[OrbitHandle]:
    """All n!/6 orbits of the swaps at positions r, r+1, in rank order."""
    n = check_n(n)
    if n < 3:
        raise ArgumentError("orbits need n >= 3")
    if not 1 <= r <= n - 2:
        raise ArgumentError(f"r must be in 1..{n - 2}, got {r}")
    sp = state_space(n)
    reps = np.nonzero(_ascending_window(sp.perms, r))[0]
    return [
        g_orbit(Permutation(tuple(int(v) for v in sp.perms[idx])), r) for idx in reps
    ]


def _ascending_window(perms, r):
    q = r - 1
    return (perms[:, q] < perms[:, q + 1]) & (perms[:, q + 1] < perms[:, q + 2])


def orbit_index_matrix(n: int, r: int) -> np.ndarray:
    """Member ranks of every orbit as an (n!/6, 6) array, member order fixed.

    Row order follows the rank of the representative (the member whose
    window is increasing).  Fast-path equivalent of orbit_partition used
    by the vectorized eigenvector checks.
    """
    n = check_n(n)
    if n < 3:
        raise ArgumentError("orbits need n >= 3")
    if not 1 <= r <= n - 2:
        raise ArgumentError(f"r must be in 1..{n - 2}, got {r}")
    sp = state_space(n)
    t1 = sp.tau[r - 1]
    t2 = sp.tau[r]
    reps = np.nonzero(_ascending_window(sp.perms, r))[0]
    cols = (
        reps,
        t1[reps],
        t2[reps],
        t2[t1[reps]],
        t1[t2[reps]],
        t2[t1[t2[reps]]],
    )
    return np.column_stack(cols).astype(np.int64)
