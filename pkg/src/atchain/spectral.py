"""Spectra of the chain: dense and iterative paths, orbit blocks, bounds.

The headline quantity is the spectral gap of K, compared against
lambda_star(n) = (1 - cos(pi/n)) / (n - 1), and the multiplicity of the
eigenvalue 1 - lambda_star.  Restricting E_r + E_{r+1} to a single orbit
gives an explicit 6x6 block whose characteristic polynomial factors
through the orbit weight s; those blocks, and the tridiagonal comparison
spectrum, are the building bricks of the gap bounds.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.linalg

from .chain import DENSE_MAX_N, operator_for
from .errors import (
    ArgumentError,
    CapacityError,
    ConvergenceError,
    ModeError,
)
from .params import ParamVector, s_orbit
from .permcore import check_n

ITERATIVE_MAX_N = 10
CLUSTER_TOL_DENSE = 1e-9
CLUSTER_TOL_ITERATIVE = 1e-7


def lambda_star(n: int) -> float:
    """The conjectured-sharp gap value (1 - cos(pi/n)) / (n - 1)."""
    n = check_n(n)
    return (1.0 - math.cos(math.pi / n)) / (n - 1)


@dataclass(frozen=True)
class SpectrumReport:
    """Eigenvalue report for K (top of the spectrum is 1).

    eigenvalues are ascending; the iterative method reports only the top
    k it was asked for.  residuals, when present, align with eigenvalues
    and hold ||S v - theta v||_2 for the computed pairs.
    """

    n: int
    method: str
    eigenvalues: np.ndarray
    gap: float
    lambda_star: float
    multiplicity_at_target: int
    cluster_tol: float
    residuals: np.ndarray | None = field(default=None, repr=False)

    @property
    def margin(self) -> float:
        """gap - lambda_star; zero iff the gap attains the benchmark."""
        return self.gap - self.lambda_star

    def clusters(self, tol: float | None = None) -> list[tuple[float, int]]:
        """Group eigenvalues within tol into (representative, count) pairs."""
        tol = self.cluster_tol if tol is None else tol
        out: list[tuple[float, int]] = []
        run: list[float] = []
        for v in self.eigenvalues:
            if run and abs(v - run[0]) > tol:
                out.append((float(np.mean(run)), len(run)))
                run = []
            run.append(float(v))
        if run:
            out.append((float(np.mean(run)), len(run)))
        return out

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "method": self.method,
                "eigenvalues": [float(v) for v in self.eigenvalues],
                "gap": self.gap,
                "lambda_star": self.lambda_star,
                "margin": self.margin,
                "multiplicity_at_target": self.multiplicity_at_target,
                "cluster_tol": self.cluster_tol,
                "residuals": None
                if self.residuals is None
                else [float(v) for v in self.residuals],
            }
        )


def _report(n, method, eigs, cluster_tol, residuals=None):
    eigs = np.sort(np.asarray(eigs, dtype=float))
    target = 1.0 - lambda_star(n)
    mult = int(np.count_nonzero(np.abs(eigs - target) <= cluster_tol))
    gap = float(1.0 - eigs[-2]) if len(eigs) >= 2 else float("nan")
    return SpectrumReport(
        n=n,
        method=method,
        eigenvalues=eigs,
        gap=gap,
        lambda_star=lambda_star(n),
        multiplicity_at_target=mult,
        cluster_tol=cluster_tol,
        residuals=residuals,
    )


def spectrum_dense(pv: ParamVector, cluster_tol: float = CLUSTER_TOL_DENSE) -> SpectrumReport:
    """Full spectrum of K by dense symmetric eigendecomposition (n <= 7)."""
    op = operator_for(pv.to_float())
    if op.n > DENSE_MAX_N:
        raise CapacityError(
            f"dense spectra are capped at n <= {DENSE_MAX_N}; use spectrum_iterative"
        )
    eigs = np.linalg.eigvalsh(op.dense_S())
    return _report(op.n, "dense", eigs, cluster_tol)


def dense_eigensystem(pv: ParamVector) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues of K (ascending) and eigenvector columns of K.

    The columns are orthonormal in the stationary inner product; they are
    the symmetrized eigenvectors divided by sqrt(mu).
    """
    op = operator_for(pv.to_float())
    if op.n > DENSE_MAX_N:
        raise CapacityError(f"dense eigensystems are capped at n <= {DENSE_MAX_N}")
    eigs, vecs = np.linalg.eigh(op.dense_S())
    return eigs, vecs / op.sqrt_mu[:, None]


def spectrum_iterative(
    pv: ParamVector,
    k: int | None = None,
    tol: float = 1e-10,
    cluster_tol: float = CLUSTER_TOL_ITERATIVE,
    seed: int = 0,
    m: int | None = None,
    max_restarts: int | None = None,
) -> SpectrumReport:
    """Top-k eigenvalues of K, matrix-free (n <= 10).

    Restarted Lanczos with full reorthogonalization: converged Ritz pairs
    are locked and deflated, and each restart begins from a fresh random
    vector orthogonal to the locked ones, so repeated eigenvalues are
    recovered copy by copy.  Raises ConvergenceError (with the partial
    report attached) if the restart budget runs out.
    """
    op = operator_for(pv.to_float())
    if op.n > ITERATIVE_MAX_N:
        raise CapacityError(f"iterative spectra are capped at n <= {ITERATIVE_MAX_N}")
    if k is None:
        k = op.n + 2
    if k < op.n:
        raise ArgumentError(f"k must be at least n = {op.n} to resolve the top cluster")
    k = min(k, op.size)
    vals, resids = _lanczos_topk(
        op.apply_S, op.size, k, tol=tol, seed=seed, m=m, max_restarts=max_restarts
    )
    order = np.argsort(vals)
    return _report(
        op.n, "iterative", np.asarray(vals)[order], cluster_tol,
        residuals=np.asarray(resids)[order],
    )


def _lanczos_topk(matvec, size, k, tol=1e-10, seed=0, m=None, max_restarts=None):
    """Largest k eigenvalues, with multiplicity, of a symmetric operator.

    Returns (values, residuals), unsorted beyond discovery order.  A
    single Krylov run converges at most one copy per eigenvalue, so
    converged pairs are locked (hard deflation) and each restart begins
    from a fresh random vector orthogonal to the locked set, which
    exposes the remaining copies.  The loop stops once a restart's top
    converged value cannot displace the current k-th best: everything
    still unlocked sits at or below it, so the locked top-k is final.
    """
    rng = np.random.default_rng(np.random.PCG64(seed))
    mem_cap = max(40, int(2.5e8 / max(size, 1)))
    if m is None:
        m = max(2 * k + 20, 120)
    m = min(m, size, mem_cap)
    if max_restarts is None:
        max_restarts = 3 * k + 12
    tie_slack = max(10.0 * tol, 1e-9)
    locked = np.zeros((size, 0))
    vals: list[float] = []
    resids: list[float] = []

    def kth_best():
        return sorted(vals)[-k] if len(vals) >= k else -math.inf

    for _ in range(max_restarts):
        steps_budget = min(m, size - locked.shape[1])
        if steps_budget <= 0:
            break
        Q = np.empty((size, steps_budget))
        alpha = np.empty(steps_budget)
        beta = np.empty(steps_budget)
        q = rng.standard_normal(size)
        if locked.shape[1]:
            q -= locked @ (locked.T @ q)
        q /= np.linalg.norm(q)
        steps = steps_budget
        for j in range(steps_budget):
            Q[:, j] = q
            w = matvec(q)
            alpha[j] = q @ w
            w -= alpha[j] * q
            if j:
                w -= beta[j - 1] * Q[:, j - 1]
            for _ in range(2):  # full reorthogonalization, twice is enough
                if locked.shape[1]:
                    w -= locked @ (locked.T @ w)
                w -= Q[:, : j + 1] @ (Q[:, : j + 1].T @ w)
            b = float(np.linalg.norm(w))
            beta[j] = b
            if b < 1e-13:  # invariant subspace exhausted
                steps = j + 1
                break
            q = w / b
        # stev: the default stemr driver can fail on graded post-breakdown
        # tridiagonals, and these blocks are tiny anyway
        theta, U = scipy.linalg.eigh_tridiagonal(
            alpha[:steps], beta[: steps - 1], lapack_driver="stev"
        )
        newly = 0
        top_conv = None  # top converged value of the operator as deflated so far
        for idx in np.argsort(theta)[::-1]:
            y = Q[:, :steps] @ U[:, idx]
            if locked.shape[1]:
                y -= locked @ (locked.T @ y)
            ny = float(np.linalg.norm(y))
            if ny < 0.5:  # collapsed onto locked directions; not a new pair
                continue
            y /= ny
            res = float(np.linalg.norm(matvec(y) - theta[idx] * y))
            if res > tol:
                # Values below an unconverged Ritz pair are untrustworthy.
                break
            if top_conv is None:
                top_conv = float(theta[idx])
            if len(vals) < k or theta[idx] > kth_best() + tie_slack:
                locked = np.column_stack([locked, y])
                vals.append(float(theta[idx]))
                resids.append(res)
                newly += 1
            else:
                break  # a converged tie or lower cannot change the top-k
        if top_conv is not None and len(vals) >= k and top_conv <= kth_best() + tie_slack:
            break  # nothing left above the k-th best: the locked top-k is final
        if newly == 0 and steps == steps_budget:
            m = min(size, mem_cap, int(m * 1.5) + 10)
    if len(vals) < k:
        partial = (np.array(vals), np.array(resids))
        raise ConvergenceError(
            f"found {len(vals)} of {k} eigenpairs within the restart budget",
            partial=partial,
        )
    order = np.argsort(vals)[::-1][:k]
    return [vals[i] for i in order], [resids[i] for i in order]


# ---------------------------------------------------------------------------
# Orbit blocks


def _block_matrix(pij, pjk, pik, pji, pkj, pki, zero):
    return [
        [pij + pjk, pji, pkj, zero, zero, zero],
        [pij, pji + pik, zero, pki, zero, zero],
        [pjk, zero, pik + pkj, zero, pki, zero],
        [zero, pik, zero, pjk + pki, zero, pkj],
        [zero, zero, pik, zero, pki + pij, pji],
        [zero, zero, zero, pjk, pij, pkj + pji],
    ]


@dataclass(frozen=True)
class OrbitBlock:
    """Restriction of E_r + E_{r+1} to one orbit, in the fixed member order.

    Row sums are exactly 2; the eigenvalues are 0 and 2 (simple) and
    1 +- sqrt(s) (double each), where s is the orbit weight.  weights are
    the stationary member weights up to the factor shared by the orbit.
    """

    labels: tuple[int, int, int]
    matrix: list[list]
    s: float | Fraction
    mode: str
    weights: tuple

    def matrix_array(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.matrix])

    def eigenvalues(self) -> np.ndarray:
        """Computed eigenvalues, ascending.

        The block is self-adjoint under the orbit's stationary weights, so
        it is symmetrized with them and solved as a symmetric problem.
        """
        mat = self.matrix_array()
        d = np.sqrt(np.array([float(v) for v in self.weights]))
        sym = mat * (d[:, None] / d[None, :])
        sym = (sym + sym.T) / 2.0
        return np.linalg.eigvalsh(sym)

    def eigenvalues_predicted(self) -> np.ndarray:
        """[0, 1-sqrt(s), 1-sqrt(s), 1+sqrt(s), 1+sqrt(s), 2]."""
        root = math.sqrt(float(self.s))
        return np.array([0.0, 1 - root, 1 - root, 1 + root, 1 + root, 2.0])


def orbit_block(pv: ParamVector, i: int, j: int, k: int) -> OrbitBlock:
    """Explicit 6x6 block of E_r + E_{r+1} on the orbit of labels i<j<k.

    The block depends only on the labels, not on r or the frozen suffix.
    """
    if not i < j < k:
        raise ArgumentError(f"need i < j < k, got ({i}, {j}, {k})")
    if i < 1 or k > pv.n:
        raise ArgumentError(f"labels must lie in 1..{pv.n}")
    zero = Fraction(0) if pv.mode == "rational" else 0.0
    mat = _block_matrix(
        pv.get(i, j), pv.get(j, k), pv.get(i, k),
        pv.get(j, i), pv.get(k, j), pv.get(k, i),
        zero,
    )
    weights = tuple(
        pv.get(a, b) * pv.get(a, c) * pv.get(b, c)
        for (a, b, c) in _member_windows(i, j, k)
    )
    return OrbitBlock(
        labels=(i, j, k),
        matrix=mat,
        s=s_orbit(pv, i, j, k),
        mode=pv.mode,
        weights=weights,
    )


def _member_windows(i, j, k):
    return ((i, j, k), (j, i, k), (i, k, j), (j, k, i), (k, i, j), (k, j, i))


@dataclass(frozen=True)
class CharpolyCheck:
    """Exact characteristic-polynomial comparison for one orbit block."""

    labels: tuple[int, int, int]
    s: Fraction
    computed: tuple[Fraction, ...]
    predicted: tuple[Fraction, ...]

    @property
    def match(self) -> bool:
        return self.computed == self.predicted


def orbit_charpoly_check(pv: ParamVector, i: int, j: int, k: int) -> CharpolyCheck:
    """Verify char(E_r + E_{r+1}|orbit) = a(a-2)(a^2 - 2a + 1 - s)^2 exactly.

    Requires a rational-mode vector; every coefficient is compared as an
    exact Fraction.
    """
    if pv.mode != "rational":
        raise ModeError("exact charpoly comparison needs a rational-mode vector")
    block = orbit_block(pv, i, j, k)
    computed = _charpoly(block.matrix)
    s = block.s
    # alpha (alpha - 2) ((alpha - 1)^2 - s)^2, expanded
    quad = [Fraction(1), Fraction(-2), Fraction(1) - s]
    poly = _polymul([Fraction(1), Fraction(0)], [Fraction(1), Fraction(-2)])
    poly = _polymul(poly, _polymul(quad, quad))
    return CharpolyCheck(
        labels=(i, j, k), s=s, computed=tuple(computed), predicted=tuple(poly)
    )


def _polymul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for x, av in enumerate(a):
        for y, bv in enumerate(b):
            out[x + y] += av * bv
    return out


def _charpoly(mat):
    """Monic characteristic polynomial of a square Fraction matrix.

    Faddeev-LeVerrier recurrence: exact over the rationals, no pivoting.
    """
    size = len(mat)
    coeffs = [Fraction(1)]
    work = [[Fraction(0)] * size for _ in range(size)]
    for step in range(1, size + 1):
        # work <- mat @ (work + c_{step-1} I)
        shifted = [row[:] for row in work]
        for d in range(size):
            shifted[d][d] += coeffs[-1]
        work = [
            [
                sum(mat[a][t] * shifted[t][b] for t in range(size))
                for b in range(size)
            ]
            for a in range(size)
        ]
        trace = sum(work[d][d] for d in range(size))
        coeffs.append(-trace / step)
    return coeffs


# ---------------------------------------------------------------------------
# Tridiagonal comparison spectrum


def tridiag_eigs(m: float, n: int) -> np.ndarray:
    """Eigenvalues 1 - 2 m cos(k pi / n), k = 1..n-1, ascending.

    These belong to the (n-1)-point tridiagonal matrix with unit diagonal
    and off-diagonal -m; the closed form is cross-checked against a direct
    eigendecomposition on every call (the matrix is tiny).
    """
    n = check_n(n)
    if m < 0:
        raise ArgumentError(f"m must be nonnegative, got {m}")
    ks = np.arange(1, n)
    closed = 1.0 - 2.0 * m * np.cos(ks * math.pi / n)
    if n >= 3:
        direct = scipy.linalg.eigh_tridiagonal(
            np.ones(n - 1), -m * np.ones(n - 2), eigvals_only=True
        )
    else:
        direct = np.array([1.0])
    if np.abs(np.sort(closed) - np.sort(direct)).max() > 1e-12:
        raise AssertionError("closed-form tridiagonal spectrum drifted from direct")
    return np.sort(closed)


def quadratic_form_floor(pv: ParamVector) -> float:
    """The proven lower-bound ratio <f, L^2 f> / <f, L f>.

    Equals (1 - 2 m_p cos(pi/n)) / (n - 1); for regular vectors it is at
    least lambda_star(n).
    """
    from .params import m_p

    return (1.0 - 2.0 * m_p(pv) * math.cos(math.pi / pv.n)) / (pv.n - 1)
