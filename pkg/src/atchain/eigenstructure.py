"""Eigenfunctions at the gap eigenvalue and their rigidity structure.

For a regular vector whose gap attains lambda_star, every eigenvector g
of L = I - K at lambda_star is rigid: its first-position difference
field u_1 = F_1 g depends only on the two leading labels, collapsing to
a table U_{a,b}; U collapses further to the adjacent diagonal
D_r = U_{r,r+1}; and D reconstructs all of U through the neutral
interval.  This module builds the explicit eigenfunctions (one per
neutral label, plus the end-to-end function when the neutral interval is
2..n-1) and implements each collapse and each equality-case check.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .chain import operator_for
from .errors import ArgumentError, PreconditionError, StructureError
from .params import NeutralSummary, ParamVector, neutral_labels
from .permcore import check_n, orbit_index_matrix, state_space
from .spectral import dense_eigensystem, lambda_star

TOL_EIG = 1e-10
TOL_WELLDEF = 1e-10
TOL_SUPP_REL = 1e-8
TOL_REL = 1e-9


def h_profile(n: int) -> np.ndarray:
    """Position profile h(r) = cos((r - 1/2) pi / n), r = 1..n.

    Extending with h(0) = h(1) and h(n+1) = h(n) makes
    h(r-1) + h(r+1) = 2 cos(pi/n) h(r) hold at every position, which is
    what places the profile at eigenvalue lambda_star.
    """
    n = check_n(n)
    return np.cos((np.arange(1, n + 1) - 0.5) * math.pi / n)


def a0(n: int) -> float:
    """Half the first profile drop, (h(1) - h(2)) / 2 > 0."""
    h = h_profile(n)
    return float(h[0] - h[1]) / 2.0


@dataclass(frozen=True)
class EigData:
    """An eigenvector g of L with eigenvalue lam.

    residual is ||L g - lam g|| / ||g|| in the stationary norm; vr[r-1]
    is ||F_r g||.
    """

    g: np.ndarray = field(repr=False)
    lam: float
    vr: np.ndarray
    residual: float


def _eigdata(pv, g, lam):
    op = operator_for(pv.to_float())
    gnorm = op.norm(g)
    if gnorm == 0.0:
        raise ArgumentError("eigenvector must be nonzero")
    residual = op.norm(op.apply_L(g) - lam * g) / gnorm
    vr = np.array([op.norm(op.apply_F(r, g)) for r in range(1, pv.n)])
    return EigData(g=g, lam=lam, vr=vr, residual=residual)


def wilson_f(pv: ParamVector, c: int, eps: float | None = None) -> EigData:
    """The single-label eigenfunction f_c(x) = h(position of c in x).

    Defined for any neutral label c; L f_c = lambda_star f_c.
    """
    ns = neutral_labels(pv, eps)
    if c not in ns.labels:
        raise PreconditionError(f"label {c} is not neutral (neutral set: {ns.labels})")
    sp = state_space(pv.n)
    pos_c = (sp.perms == c).argmax(axis=1)  # 0-based positions
    g = h_profile(pv.n)[pos_c]
    return _eigdata(pv, g, lambda_star(pv.n))


def psi(pv: ParamVector, eps: float | None = None) -> EigData:
    """The end-to-end eigenfunction, defined when the neutral set is 2..n-1.

    psi(x) = h(pos of 1) - h(pos of n), scaled by p_{1,n} / p_{n,1} on
    states where label n precedes label 1; L psi = lambda_star psi, and
    its D-vector (a0, 0, ..., 0, rho a0) has nonzero sum, which is what
    makes psi independent of the f_c family.
    """
    n = pv.n
    ns = neutral_labels(pv, eps)
    if ns.labels != tuple(range(2, n)):
        raise PreconditionError(
            f"psi needs the neutral set to be exactly 2..{n - 1}, got {ns.labels}"
        )
    sp = state_space(n)
    pos1 = (sp.perms == 1).argmax(axis=1)
    posn = (sp.perms == n).argmax(axis=1)
    h = h_profile(n)
    base = h[pos1] - h[posn]
    rho = float(pv.get(1, n)) / float(pv.get(n, 1))
    g = np.where(pos1 < posn, base, rho * base)
    return _eigdata(pv, g, lambda_star(n))


def lambda_star_eigenbasis(pv: ParamVector, cluster_tol: float = 1e-9) -> list[EigData]:
    """Orthonormal basis of the eigenspace of L at lambda_star (dense path).

    Returns [] when lambda_star is not an eigenvalue.  Basis vectors are
    normalized in the stationary norm.
    """
    eigs, vecs = dense_eigensystem(pv)
    target = 1.0 - lambda_star(pv.n)
    sel = np.nonzero(np.abs(eigs - target) <= cluster_tol)[0]
    return [_eigdata(pv, vecs[:, idx], 1.0 - float(eigs[idx])) for idx in sel]


# ---------------------------------------------------------------------------
# The U table and the D diagonal


@dataclass(frozen=True)
class UTable:
    """Two-label collapse of u_1 = F_1 g.

    U[(a, b)] (a < b) is the common value of u_1 on states starting
    (a, b, ...); D[r-1] = U[(r, r+1)]; support is the set of pairs whose
    entry is nonzero at the working threshold; welldef_residual is the
    largest spread of u_1 within any leading-pair class.
    """

    n: int
    U: dict[tuple[int, int], float]
    D: np.ndarray
    support: frozenset[tuple[int, int]]
    welldef_residual: float

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "U": [[a, b, v] for (a, b), v in sorted(self.U.items())],
                "D": [float(v) for v in self.D],
                "support": sorted(self.support),
                "welldef_residual": self.welldef_residual,
            }
        )


def extract_U(
    pv: ParamVector,
    e: EigData,
    tol_welldef: float = TOL_WELLDEF,
    tol_supp_rel: float = TOL_SUPP_REL,
) -> UTable:
    """Collapse u_1 = F_1 g to its two-label table.

    Checks on the way that u_1 really is constant on every class of
    states sharing the two leading labels (raises StructureError when the
    spread exceeds tol_welldef at the vector's own scale) and that the
    values for (b, a) are the (a, b) values scaled by -p_{a,b}/p_{b,a}.
    """
    op = operator_for(pv.to_float())
    sp = state_space(pv.n)
    u1 = op.apply_F(1, e.g)
    first = sp.perms[:, 0].astype(int)
    second = sp.perms[:, 1].astype(int)
    u_inf = float(np.abs(u1).max())
    scale = max(1.0, u_inf)
    table: dict[tuple[int, int], float] = {}
    worst = 0.0
    for a in range(1, pv.n + 1):
        for b in range(1, pv.n + 1):
            if a == b:
                continue
            vals = u1[(first == a) & (second == b)]
            worst = max(worst, float(vals.max() - vals.min()))
            if a < b:
                table[(a, b)] = float(vals.mean())
            else:
                # u_1 on (b, a, ...) must mirror the (a, b) value.
                predicted = -float(pv.get(b, a)) / float(pv.get(a, b)) * table[(b, a)]
                worst = max(worst, abs(float(vals.mean()) - predicted))
    if worst > tol_welldef * scale:
        raise StructureError(
            f"u_1 is not a function of the two leading labels "
            f"(spread {worst:.3e} at scale {scale:.3e}); "
            "is e really an eigenvector at lambda_star?"
        )
    tol_supp = tol_supp_rel * u_inf
    support = frozenset(pair for pair, v in table.items() if abs(v) > tol_supp)
    D = np.array([table[(r, r + 1)] for r in range(1, pv.n)])
    return UTable(
        n=pv.n, U=table, D=D, support=support, welldef_residual=worst
    )


@dataclass(frozen=True)
class OrbitalRelationReport:
    """Per-triple consistency of a U table.

    On every label triple i<j<k where U is nonzero, the two inner pairs
    must sit at 1/2 and U_{i,k} = 2 p_{k,i} (U_{i,j} + U_{j,k}).
    Violations are (triple, kind, magnitude) with kind one of
    "p_ij", "p_jk", "relation".
    """

    ok: bool
    checked: int
    violations: tuple


def check_orbital_relation(
    pv: ParamVector,
    u: UTable,
    eps: float = 1e-9,
    tol_rel: float = TOL_REL,
) -> OrbitalRelationReport:
    scale = max(1.0, max((abs(v) for v in u.U.values()), default=0.0))
    bad = []
    checked = 0
    for i in range(1, pv.n - 1):
        for j in range(i + 1, pv.n):
            for k in range(j + 1, pv.n + 1):
                pairs = ((i, j), (j, k), (i, k))
                if not any(p in u.support for p in pairs):
                    continue
                checked += 1
                if abs(float(pv.get(i, j)) - 0.5) > eps:
                    bad.append(((i, j, k), "p_ij", float(pv.get(i, j))))
                if abs(float(pv.get(j, k)) - 0.5) > eps:
                    bad.append(((i, j, k), "p_jk", float(pv.get(j, k))))
                gap = u.U[(i, k)] - 2.0 * float(pv.get(k, i)) * (
                    u.U[(i, j)] + u.U[(j, k)]
                )
                if abs(gap) > tol_rel * scale:
                    bad.append(((i, j, k), "relation", abs(gap)))
    return OrbitalRelationReport(ok=not bad, checked=checked, violations=tuple(bad))


@dataclass(frozen=True)
class SupportBoundaryReport:
    """Whether the support of U touches both extreme labels correctly.

    A_star = min{a : (a, n) in support}, B_star = max{b : (1, b) in
    support}; a nonzero table must have both and satisfy A_star <= B_star.
    """

    ok: bool
    A_star: int | None
    B_star: int | None


def check_support_boundary(u: UTable) -> SupportBoundaryReport:
    if not u.support:
        raise ArgumentError("support is empty; nothing to check")
    right = [a for (a, b) in u.support if b == u.n]
    left = [b for (a, b) in u.support if a == 1]
    A_star = min(right) if right else None
    B_star = max(left) if left else None
    ok = A_star is not None and B_star is not None and A_star <= B_star
    return SupportBoundaryReport(ok=ok, A_star=A_star, B_star=B_star)


def predicted_U_from_D(
    pv: ParamVector,
    D: np.ndarray,
    neutral: NeutralSummary,
    tol_supp_rel: float = TOL_SUPP_REL,
) -> UTable:
    """Rebuild the full U table from its adjacent diagonal.

    Entries of D outside positions A-1..B are zeroed (they must vanish
    for a gap eigenvector); a pair straddling the neutral interval
    (i < A, j > B) picks up the factor 2 p_{j,i}, every other pair is the
    plain partial sum of D.  The uniform vector is the all-plain case.
    """
    n = pv.n
    D = np.asarray(D, dtype=float)
    if D.shape != (n - 1,):
        raise ArgumentError(f"D must have shape ({n - 1},)")
    if neutral.count == 0:
        raise PreconditionError("reconstruction needs at least one neutral label")
    uniform = neutral.count == n
    lo = 1 if uniform else neutral.A - 1
    hi = n - 1 if uniform else min(neutral.B, n - 1)
    D2 = np.where(
        (np.arange(1, n) >= lo) & (np.arange(1, n) <= hi), D, 0.0
    )
    csum = np.concatenate([[0.0], np.cumsum(D2)])  # csum[t] = sum of D2[1..t]
    table = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            base = float(csum[j - 1] - csum[i - 1])
            crossing = (not uniform) and i < neutral.A and j > neutral.B
            table[(i, j)] = 2.0 * float(pv.get(j, i)) * base if crossing else base
    u_inf = max((abs(v) for v in table.values()), default=0.0)
    tol_supp = tol_supp_rel * u_inf
    support = frozenset(pair for pair, v in table.items() if abs(v) > tol_supp)
    Dout = np.array([table[(r, r + 1)] for r in range(1, n)])
    return UTable(n=n, U=table, D=Dout, support=support, welldef_residual=0.0)


# ---------------------------------------------------------------------------
# Equality-case rigidity checks


@dataclass(frozen=True)
class EqCaseReport:
    """Residuals of the four rigidity properties of a gap eigenvector.

    far_product:    max ||F_r F_s g|| over |r - s| > 1 (must vanish)
    profile_cosine: cosine similarity of (||F_r g||)_r to (sin(r pi/n))_r
    inner_offset:   max |<u_r, u_r+1> + 1/2 ||u_r|| ||u_r+1|||
    orbit_defect:   max ||(F_1 F_2 F_1 - 1/4 F_1) g|| over active orbits,
                    relative to the orbit's ||F_1 g||
    All four on the stationary-norm normalized copy of g.
    """

    ok: bool
    far_product: float
    profile_cosine: float
    inner_offset: float
    orbit_defect: float
    active_orbits: int


def eqcase_checks(
    pv: ParamVector,
    e: EigData,
    tol_far: float = TOL_EIG,
    tol_profile: float = TOL_EIG,
    tol_inner: float = TOL_EIG,
    tol_orbit: float = TOL_EIG,
    tol_supp_rel: float = TOL_SUPP_REL,
) -> EqCaseReport:
    op = operator_for(pv.to_float())
    n = pv.n
    g = e.g / op.norm(e.g)

    far = 0.0  # stays 0 below n = 4: no positions with |r - s| > 1 exist
    Fg = {r: op.apply_F(r, g) for r in range(1, n)}
    for r in range(1, n):
        for s in range(r + 2, n):
            far = max(far, op.norm(op.apply_F(r, Fg[s])))

    v = np.array([op.norm(Fg[r]) for r in range(1, n)])
    target = np.sin(np.arange(1, n) * math.pi / n)
    denom = float(np.linalg.norm(v) * np.linalg.norm(target))
    cosine = float(v @ target) / denom if denom > 0 else 0.0

    inner_off = 0.0
    for r in range(1, n - 1):
        off = op.inner(Fg[r], Fg[r + 1]) + 0.5 * v[r - 1] * v[r]
        inner_off = max(inner_off, abs(off))

    # Orbit-by-orbit contraction of F_1 F_2 F_1 on the window of F_1 g.
    members = orbit_index_matrix(n, 1)
    u = Fg[1]
    w = op.apply_F(1, op.apply_F(2, u)) - 0.25 * u
    mu = op.mu
    unorm = np.sqrt(((u * u) * mu)[members].sum(axis=1))
    wnorm = np.sqrt(((w * w) * mu)[members].sum(axis=1))
    active = unorm > tol_supp_rel * float(unorm.max())
    defect = float((wnorm[active] / unorm[active]).max()) if active.any() else 0.0

    ok = (
        far <= tol_far
        and cosine >= 1.0 - tol_profile
        and inner_off <= tol_inner
        and defect <= tol_orbit
    )
    return EqCaseReport(
        ok=ok,
        far_product=far,
        profile_cosine=cosine,
        inner_offset=inner_off,
        orbit_defect=defect,
        active_orbits=int(active.sum()),
    )


def dmap_rank(
    pv: ParamVector,
    basis: list[EigData],
    eps: float | None = None,
    sv_rtol: float = 1e-6,
) -> int:
    """Rank of the map g -> (D_r(g)) over a basis of gap eigenvectors.

    The D-vectors are restricted to positions A-1..B (the whole range for
    the uniform vector); a full-rank answer equal to len(basis) certifies
    that D determines the eigenspace.
    """
    if not basis:
        return 0
    ns = neutral_labels(pv, eps)
    if ns.count == 0:
        raise PreconditionError("the D map is defined for gap-attaining vectors only")
    n = pv.n
    if ns.count == n:
        lo, hi = 1, n - 1
    else:
        lo, hi = ns.A - 1, min(ns.B, n - 1)
    rows = [extract_U(pv, e).D[lo - 1 : hi] for e in basis]
    sv = np.linalg.svd(np.array(rows), compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.count_nonzero(sv > sv_rtol * sv[0]))
