"""Seeded simulation of the chain: single steps, trajectories, TV checks.

All randomness comes from numpy's PCG64 generator; every public entry
point takes a seed (or a Generator) and identical seeds give identical
trajectories, byte for byte in the serialized output.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .chain import stationary
from .errors import ArgumentError
from .params import ParamVector
from .permcore import Permutation, state_space

RNG_ALGORITHM = "numpy-pcg64"


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.PCG64(seed))


def step(pv: ParamVector, x: Permutation, rng: np.random.Generator) -> Permutation:
    """One transition: draw a position r, then sort or unsort the pair there.

    Draws r uniformly from 1..n-1, then a uniform u; the pair stays put
    when u < p_{x_r, x_{r+1}}.
    """
    if x.n != pv.n:
        raise ArgumentError(f"state has n = {x.n}, parameters have n = {pv.n}")
    r = int(rng.integers(1, pv.n))
    u = float(rng.random())
    a, b = x.entries[r - 1], x.entries[r]
    if u < float(pv.get(a, b)):
        return x
    return x.apply_tau(r)


@dataclass(frozen=True)
class ChainRun:
    """A finished trajectory: seeded draws, visit counts by rank, final state.

    visits counts the states after each step (the start state is not
    counted), so the counts sum to steps.
    """

    n: int
    start: tuple[int, ...]
    steps: int
    seed: int
    algorithm: str
    visits: dict[int, int]
    final: tuple[int, ...]

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "start": list(self.start),
                "steps": self.steps,
                "seed": self.seed,
                "algorithm": self.algorithm,
                "visits": {str(k): self.visits[k] for k in sorted(self.visits)},
                "final": list(self.final),
            }
        )


def _trajectory_counts(pv, start, steps, seed, keep_from):
    """Tuple-keyed visit counts over states keep_from..steps, plus the final.

    Draws the position array first and the uniform array second (one
    PCG64 stream per run); the loop itself is deterministic given those.
    """
    if steps < 0:
        raise ArgumentError("steps must be nonnegative")
    n = pv.n
    rng = make_rng(seed)
    rs = rng.integers(1, n, size=steps) if steps else np.empty(0, dtype=int)
    us = rng.random(steps) if steps else np.empty(0)
    pmat = pv.as_matrix()
    state = list(start.entries)
    counts: Counter = Counter()
    if keep_from == 0:
        counts[tuple(state)] += 1
    for t in range(steps):
        q = rs[t] - 1
        a = state[q]
        b = state[q + 1]
        if us[t] >= pmat[a - 1, b - 1]:
            state[q] = b
            state[q + 1] = a
        if t + 1 >= keep_from:
            counts[tuple(state)] += 1
    return counts, tuple(state)


def run_chain(
    pv: ParamVector, start: Permutation | None, steps: int, seed: int
) -> ChainRun:
    """Run a seeded trajectory and tally visits after each step."""
    if start is None:
        start = Permutation.identity(pv.n)
    if start.n != pv.n:
        raise ArgumentError(f"start has n = {start.n}, parameters have n = {pv.n}")
    counts, final = _trajectory_counts(pv, start, steps, seed, keep_from=1)
    visits = {Permutation(key).rank(): c for key, c in counts.items()}
    return ChainRun(
        n=pv.n,
        start=start.entries,
        steps=steps,
        seed=seed,
        algorithm=RNG_ALGORITHM,
        visits=visits,
        final=final,
    )


def run_tv(
    pv: ParamVector,
    steps: int,
    burnin: int = 0,
    seed: int = 0,
    start: Permutation | None = None,
) -> float:
    """Total-variation distance between the empirical law and mu.

    The empirical law is over the states at times burnin..steps (time 0
    is the start state, so steps = 0 with burnin 0 measures the point
    mass at the start).
    """
    if not 0 <= burnin <= steps:
        raise ArgumentError("need 0 <= burnin <= steps")
    if start is None:
        start = Permutation.identity(pv.n)
    counts, _ = _trajectory_counts(pv, start, steps, seed, keep_from=burnin)
    sp = state_space(pv.n)
    emp = np.zeros(sp.size)
    for key, c in counts.items():
        emp[Permutation(key).rank()] = c
    emp /= emp.sum()
    mu = stationary(pv.to_float()).mu
    return 0.5 * float(np.abs(emp - mu).sum())
