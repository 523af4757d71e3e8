"""The biased adjacent-transposition chain: stationary law and operators.

One step picks a position r uniformly from 1..n-1 and leaves the adjacent
pair there in place with probability p_{x_r, x_{r+1}}, otherwise swaps it.
K is the transition operator, E_r the per-position two-point averaging
operator, F_r = I - E_r, and L = I - K = mean of the F_r.

All operators act on vectors indexed by lexicographic rank and are
self-adjoint in the stationary inner product <f, g> = sum f g mu.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import logsumexp

from .errors import ArgumentError, CapacityError
from .params import ParamVector
from .permcore import state_space

DENSE_MAX_N = 7  # 7! = 5040; dense matrices are (n!)^2
RATIONAL_MAX_N = 6  # exact products over n!*(n choose 2) Fractions


@dataclass(frozen=True)
class StationaryDist:
    """Stationary law over ranks; mu is exact Fractions in rational mode."""

    n: int
    mode: str
    mu: np.ndarray | tuple[Fraction, ...]
    logZ: float

    def as_array(self) -> np.ndarray:
        if self.mode == "float64":
            return self.mu
        return np.array([float(v) for v in self.mu])


def stationary(pv: ParamVector) -> StationaryDist:
    """mu(x) proportional to the product of p_{x_i, x_j} over positions i < j.

    Float mode accumulates in log space; rational mode (n <= 6) returns
    exact Fractions that sum to 1 exactly.
    """
    sp = state_space(pv.n)
    if pv.mode == "rational":
        if pv.n > RATIONAL_MAX_N:
            raise CapacityError(
                f"rational stationary law is capped at n <= {RATIONAL_MAX_N}"
            )
        weights = []
        for row in sp.perms:
            w = Fraction(1)
            for a in range(pv.n - 1):
                for b in range(a + 1, pv.n):
                    w *= pv.get(int(row[a]), int(row[b]))
            weights.append(w)
        Z = sum(weights)
        mu = tuple(w / Z for w in weights)
        return StationaryDist(n=pv.n, mode="rational", mu=mu, logZ=math.log(float(Z)))
    logp = pv.as_matrix()
    np.fill_diagonal(logp, 1.0)
    logp = np.log(logp)
    acc = np.zeros(sp.size)
    cols = [sp.perms[:, a].astype(np.intp) - 1 for a in range(pv.n)]
    for a in range(pv.n - 1):
        for b in range(a + 1, pv.n):
            acc += logp[cols[a], cols[b]]
    logZ = float(logsumexp(acc))
    return StationaryDist(n=pv.n, mode="float64", mu=np.exp(acc - logZ), logZ=logZ)


class ChainOperator:
    """Matrix-free application of E_r, F_r, K, L and the symmetrized form.

    Precomputes per position r the swap-neighbor index table and the stay
    probability of every state: O(n * n!) memory, O(n * n!) per K apply.
    The symmetrized operator S = D^{1/2} K D^{-1/2} (D = diag mu) couples
    x and its swap image with weight sqrt(p_stay * p_swap), so applying it
    never touches mu ratios.
    """

    def __init__(self, pv: ParamVector):
        sp = state_space(pv.n)
        self.pv = pv
        self.n = pv.n
        self.size = sp.size
        self._tau = sp.tau
        pmat = pv.as_matrix()
        perms = sp.perms
        self._stay = np.empty((pv.n - 1, sp.size))
        for q in range(pv.n - 1):
            self._stay[q] = pmat[perms[:, q].astype(np.intp) - 1,
                                 perms[:, q + 1].astype(np.intp) - 1]
        self._coup = np.sqrt(self._stay * (1.0 - self._stay))
        self.mu = stationary(pv.to_float()).mu
        self.sqrt_mu = np.sqrt(self.mu)

    def _check_f(self, f):
        f = np.asarray(f, dtype=float)
        if f.shape != (self.size,):
            raise ArgumentError(f"vector must have shape ({self.size},)")
        return f

    def _check_r(self, r):
        if not 1 <= r <= self.n - 1:
            raise ArgumentError(f"r must be in 1..{self.n - 1}, got {r}")
        return r - 1

    def apply_E(self, r: int, f: np.ndarray) -> np.ndarray:
        """(E_r f)(x) = p_stay(x) f(x) + p_swap(x) f(x^swap)."""
        q = self._check_r(r)
        f = self._check_f(f)
        return self._stay[q] * f + (1.0 - self._stay[q]) * f[self._tau[q]]

    def apply_F(self, r: int, f: np.ndarray) -> np.ndarray:
        return self._check_f(f) - self.apply_E(r, f)

    def apply_K(self, f: np.ndarray) -> np.ndarray:
        f = self._check_f(f)
        acc = self._stay[0] * f + (1.0 - self._stay[0]) * f[self._tau[0]]
        for q in range(1, self.n - 1):
            acc += self._stay[q] * f + (1.0 - self._stay[q]) * f[self._tau[q]]
        return acc / (self.n - 1)

    def apply_L(self, f: np.ndarray) -> np.ndarray:
        f = self._check_f(f)
        return f - self.apply_K(f)

    def apply_S(self, f: np.ndarray) -> np.ndarray:
        """Symmetrized transition operator; same spectrum as K."""
        f = self._check_f(f)
        acc = self._stay.sum(axis=0) * f
        for q in range(self.n - 1):
            acc += self._coup[q] * f[self._tau[q]]
        return acc / (self.n - 1)

    def inner(self, f, g) -> float:
        """Stationary inner product <f, g> = sum f g mu."""
        f = self._check_f(f)
        g = self._check_f(g)
        return float(np.dot(f * g, self.mu))

    def norm(self, f) -> float:
        return math.sqrt(max(self.inner(f, f), 0.0))

    def _check_dense(self):
        if self.n > DENSE_MAX_N:
            raise CapacityError(
                f"dense matrices are capped at n <= {DENSE_MAX_N}; "
                "use the matrix-free or iterative paths"
            )

    def dense_E(self, r: int) -> np.ndarray:
        self._check_dense()
        q = self._check_r(r)
        mat = np.zeros((self.size, self.size))
        idx = np.arange(self.size)
        mat[idx, idx] = self._stay[q]
        mat[idx, self._tau[q]] = 1.0 - self._stay[q]
        return mat

    def dense_F(self, r: int) -> np.ndarray:
        return np.eye(self.size) - self.dense_E(r)

    def dense_K(self) -> np.ndarray:
        self._check_dense()
        mat = np.zeros((self.size, self.size))
        idx = np.arange(self.size)
        for q in range(self.n - 1):
            mat[idx, idx] += self._stay[q]
            mat[idx, self._tau[q]] += 1.0 - self._stay[q]
        return mat / (self.n - 1)

    def dense_L(self) -> np.ndarray:
        return np.eye(self.size) - self.dense_K()

    def dense_S(self) -> np.ndarray:
        self._check_dense()
        mat = np.zeros((self.size, self.size))
        idx = np.arange(self.size)
        mat[idx, idx] = self._stay.sum(axis=0)
        for q in range(self.n - 1):
            mat[idx, self._tau[q]] += self._coup[q]
        return mat / (self.n - 1)


@lru_cache(maxsize=2)
def operator_for(pv: ParamVector) -> ChainOperator:
    """Cached operator tables for a parameter vector."""
    return ChainOperator(pv)


def apply_E(pv, r, f):
    return operator_for(pv).apply_E(r, f)


def apply_F(pv, r, f):
    return operator_for(pv).apply_F(r, f)


def apply_K(pv, f):
    return operator_for(pv).apply_K(f)


def apply_L(pv, f):
    return operator_for(pv).apply_L(f)


def inner(pv, f, g):
    return operator_for(pv).inner(f, g)


def commutation_check(pv, r: int, s: int, f) -> float:
    """Stationary norm of (F_r F_s - F_s F_r) f; tiny when |r - s| > 1."""
    if abs(r - s) <= 1:
        raise ArgumentError("commutation check needs non-adjacent positions")
    op = operator_for(pv)
    fwd = op.apply_F(r, op.apply_F(s, f))
    bwd = op.apply_F(s, op.apply_F(r, f))
    return op.norm(fwd - bwd)


def save_matrix_csv(mat: np.ndarray, path) -> None:
    """Write a dense operator matrix as plain CSV for external cross-checks."""
    np.savetxt(path, mat, delimiter=",")
