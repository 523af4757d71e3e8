"""Pairwise stay-probability vectors p = (p_{i,j})_{1<=i<j<=n}.

p_{i,j} is the probability that adjacent labels i, j end up in order
(i, j) after a comparison; p_{j,i} = 1 - p_{i,j} is implied and never
stored.  Entries are float64 or exact Fractions ("rational" mode).

Regularity is the monotone structure under which the spectral-gap law
holds: adjacent pairs favour sorting, and p_{i,j} is nonincreasing in i
and nondecreasing in j.  A label c with p_{c,i} = 1/2 for every other i
is called neutral; for regular vectors the neutral set is an interval.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ArgumentError, ModeError
from .permcore import check_n

HALF = Fraction(1, 2)

# Default tolerance for calling an entry "1/2" in float mode.
NEUTRAL_EPS = 1e-12


class ParamVector:
    """Immutable upper-triangular table of pairwise stay probabilities.

    >>> pv = gen_uniform(3)
    >>> pv.get(2, 1)
    0.5
    """

    __slots__ = ("n", "mode", "_p", "_key")

    def __init__(self, n, p, mode="float64"):
        n = check_n(n)
        if mode not in ("float64", "rational"):
            raise ModeError(f"mode must be 'float64' or 'rational', got {mode!r}")
        items = p.items() if hasattr(p, "items") else p
        table = {}
        for (i, j), value in items:
            i, j = int(i), int(j)
            if not (1 <= i < j <= n):
                raise ArgumentError(f"pair ({i}, {j}) is not 1 <= i < j <= {n}")
            if (i, j) in table:
                raise ArgumentError(f"duplicate pair ({i}, {j})")
            if mode == "rational":
                if isinstance(value, float):
                    raise ModeError(
                        f"rational mode got a float for ({i}, {j}); pass Fraction"
                    )
                value = Fraction(value)
            else:
                value = float(value)
            if not 0 < value < 1:
                raise ArgumentError(f"p_({i},{j}) = {value} is not in (0, 1)")
            table[(i, j)] = value
        expected = n * (n - 1) // 2
        if len(table) != expected:
            missing = [
                (i, j)
                for i in range(1, n + 1)
                for j in range(i + 1, n + 1)
                if (i, j) not in table
            ]
            raise ArgumentError(f"missing pairs: {missing[:6]}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "_p", table)
        object.__setattr__(
            self, "_key", (n, mode, tuple(sorted(table.items())))
        )

    def __setattr__(self, name, value):
        raise AttributeError("ParamVector is immutable")

    def __eq__(self, other):
        return isinstance(other, ParamVector) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"ParamVector(n={self.n}, mode={self.mode!r})"

    def get(self, i: int, j: int):
        """p_{i,j} for any ordered pair of distinct labels."""
        if i == j or not (1 <= i <= self.n and 1 <= j <= self.n):
            raise ArgumentError(f"need distinct labels in 1..{self.n}, got ({i}, {j})")
        if i < j:
            return self._p[(i, j)]
        value = self._p[(j, i)]
        return (1 - value) if self.mode == "rational" else 1.0 - value

    def items(self):
        """Upper-triangle entries as ((i, j), p_{i,j}) in sorted order."""
        return iter(sorted(self._p.items()))

    def as_matrix(self) -> np.ndarray:
        """Full float matrix with [i-1, j-1] = p_{i,j}; diagonal is 0."""
        mat = np.zeros((self.n, self.n))
        for (i, j), value in self._p.items():
            mat[i - 1, j - 1] = float(value)
            mat[j - 1, i - 1] = 1.0 - float(value)
        return mat

    def to_float(self) -> "ParamVector":
        if self.mode == "float64":
            return self
        return ParamVector(
            self.n, {pair: float(v) for pair, v in self._p.items()}, mode="float64"
        )

    def is_uniform(self, eps: float | None = None) -> bool:
        """True when every entry equals 1/2 (within eps in float mode)."""
        if self.mode == "rational":
            return all(v == HALF for v in self._p.values())
        eps = NEUTRAL_EPS if eps is None else eps
        return all(abs(v - 0.5) <= eps for v in self._p.values())

    def to_json(self) -> str:
        entries = [
            [i, j, str(v) if self.mode == "rational" else v]
            for (i, j), v in sorted(self._p.items())
        ]
        return json.dumps({"n": self.n, "mode": self.mode, "entries": entries})

    @classmethod
    def from_json(cls, text: str) -> "ParamVector":
        try:
            data = json.loads(text)
            n = data["n"]
            mode = data.get("mode", "float64")
            if mode == "rational":
                p = {(i, j): Fraction(v) for i, j, v in data["entries"]}
            else:
                p = {(i, j): float(v) for i, j, v in data["entries"]}
        except (KeyError, TypeError, ValueError) as exc:
            raise ArgumentError(f"malformed parameter JSON: {exc}") from exc
        return cls(n, p, mode=mode)


@dataclass(frozen=True)
class RegularityReport:
    """Outcome of the three monotonicity checks.

    Violations are (family, indices) pairs: family 1 is p_{i-1,i} >= 1/2
    with indices (i,); family 2 is p_{i-1,j} >= p_{i,j} and family 3 is
    p_{i,j+1} >= p_{i,j}, both with indices (i, j).
    """

    ok: bool
    violations: tuple[tuple[int, tuple[int, ...]], ...]

    def __bool__(self):
        return self.ok


def is_regular(pv: ParamVector) -> RegularityReport:
    """Check the monotone structure that the spectral results assume."""
    n = pv.n
    bad = []
    half = HALF if pv.mode == "rational" else 0.5
    for i in range(2, n + 1):
        if pv.get(i - 1, i) < half:
            bad.append((1, (i,)))
    for j in range(2, n + 1):
        for i in range(2, j):
            if pv.get(i - 1, j) < pv.get(i, j):
                bad.append((2, (i, j)))
    for i in range(1, n):
        for j in range(i + 1, n):
            if pv.get(i, j + 1) < pv.get(i, j):
                bad.append((3, (i, j)))
    return RegularityReport(ok=not bad, violations=tuple(bad))


@dataclass(frozen=True)
class NeutralSummary:
    """The neutral labels of a vector; A/B are their min/max (None if none)."""

    labels: tuple[int, ...]
    count: int
    A: int | None
    B: int | None


def neutral_labels(pv: ParamVector, eps: float | None = None) -> NeutralSummary:
    """Labels c with p_{c,i} = 1/2 for all i != c, within eps in float mode.

    Rational mode compares exactly (eps is ignored).
    """
    if pv.mode == "rational":
        def is_half(v):
            return v == HALF
    else:
        e = NEUTRAL_EPS if eps is None else float(eps)
        def is_half(v):
            return abs(v - 0.5) <= e
    labels = tuple(
        c
        for c in range(1, pv.n + 1)
        if all(is_half(pv.get(c, i)) for i in range(1, pv.n + 1) if i != c)
    )
    return NeutralSummary(
        labels=labels,
        count=len(labels),
        A=labels[0] if labels else None,
        B=labels[-1] if labels else None,
    )


def s_orbit(pv: ParamVector, i: int, j: int, k: int):
    """Orbit weight p_ij p_jk p_ki + p_kj p_ji p_ik of a label triple i<j<k."""
    if not i < j < k:
        raise ArgumentError(f"need i < j < k, got ({i}, {j}, {k})")
    return pv.get(i, j) * pv.get(j, k) * pv.get(k, i) + pv.get(k, j) * pv.get(
        j, i
    ) * pv.get(i, k)


def m_p(pv: ParamVector) -> float:
    """max over label triples of sqrt(s_orbit); at most 1/2 for regular pv."""
    if pv.n < 3:
        raise ArgumentError("m_p needs n >= 3")
    best = max(
        float(s_orbit(pv, i, j, k))
        for i in range(1, pv.n - 1)
        for j in range(i + 1, pv.n)
        for k in range(j + 1, pv.n + 1)
    )
    return math.sqrt(best)


def _rng(seed):
    return np.random.default_rng(np.random.PCG64(seed))


def gen_uniform(n: int, mode: str = "float64") -> ParamVector:
    """The uniform vector: every pair at exactly 1/2."""
    value = HALF if mode == "rational" else 0.5
    return ParamVector(
        n,
        {(i, j): value for i in range(1, n + 1) for j in range(i + 1, n + 1)},
        mode=mode,
    )


def gen_neutral_interval(n: int, A: int, B: int, seed: int) -> ParamVector:
    """Random regular vector whose neutral labels are exactly A..B.

    Requires 2 <= A <= B <= n-1.  Pairs that do not straddle [A, B] sit at
    1/2; straddling pairs (i < A, j > B) get 1/2 + q_i r_j with q positive
    nonincreasing and r positive nondecreasing, which keeps the vector
    regular and pushes every label outside A..B strictly off neutral.
    """
    n = check_n(n)
    if n < 3:
        raise ArgumentError("neutral-interval families need n >= 3")
    if not 2 <= A <= B <= n - 1:
        raise ArgumentError(f"need 2 <= A <= B <= n-1, got A={A}, B={B} at n={n}")
    rng = _rng(seed)
    q = np.sort(rng.uniform(0.2, 1.0, size=A - 1))[::-1]
    r = np.sort(rng.uniform(0.2, 1.0, size=n - B))
    scale = rng.uniform(0.25, 0.45) / (q[0] * r[-1])
    p = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if i < A and j > B:
                p[(i, j)] = 0.5 + scale * q[i - 1] * r[j - B - 1]
            else:
                p[(i, j)] = 0.5
    pv = ParamVector(n, p)
    assert is_regular(pv).ok
    return pv


def gen_regular_random(n: int, seed: int) -> ParamVector:
    """Random regular vector via cumulative monotone sampling.

    Draws a sparse nonnegative weight grid and takes suffix-in-i,
    prefix-in-j partial sums, which is monotone in both coordinates; the
    result usually has no neutral label but sparse weights leave some
    instances with a neutral interval.
    """
    n = check_n(n)
    rng = _rng(seed)
    w = rng.exponential(1.0, size=(n, n)) * (rng.random((n, n)) < 0.5)
    bump = w[::-1].cumsum(axis=0)[::-1].cumsum(axis=1)
    top = max(bump[i - 1, j - 1] for i in range(1, n) for j in range(i + 1, n + 1))
    scale = rng.uniform(0.2, 0.45) / top if top > 0 else 0.0
    p = {
        (i, j): 0.5 + scale * bump[i - 1, j - 1]
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
    }
    pv = ParamVector(n, p)
    assert is_regular(pv).ok
    return pv


def gen_no_neutral(n: int, seed: int) -> ParamVector:
    """Random regular vector with every pair strictly above 1/2."""
    n = check_n(n)
    rng = _rng(seed)
    a = np.sort(rng.uniform(0.5, 1.0, size=n))[::-1]
    b = np.sort(rng.uniform(0.5, 1.0, size=n))
    base = rng.uniform(0.02, 0.1)
    amp = (0.45 - base) / (a[0] * b[-1])
    p = {
        (i, j): 0.5 + base + amp * a[i - 1] * b[j - 1]
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
    }
    pv = ParamVector(n, p)
    assert is_regular(pv).ok
    assert neutral_labels(pv).count == 0
    return pv
