"""Instance- and sweep-level verification of the gap/multiplicity law.

For a regular vector with N neutral labels, the spectral gap of K equals
lambda_star(n) exactly when N >= 1, and the multiplicity of the gap
eigenvalue is then N, except that it jumps to n-1 when N is n-2 or n.
verify_instance computes both sides of that statement for one vector;
verify_sweep maps it over generated families and aggregates verdict rows.
"""

from __future__ import annotations

import concurrent.futures
import json
import os
import time
from dataclasses import dataclass

from .errors import ArgumentError, AtchainError, PreconditionError
from .params import (
    ParamVector,
    gen_neutral_interval,
    gen_no_neutral,
    gen_regular_random,
    gen_uniform,
    is_regular,
    neutral_labels,
)
from .permcore import MAX_N
from .spectral import (
    CLUSTER_TOL_DENSE,
    CLUSTER_TOL_ITERATIVE,
    spectrum_dense,
    spectrum_iterative,
)

TOL_GAP = 1e-8


def predicted_multiplicity(n: int, N: int) -> int:
    """Multiplicity of the gap eigenvalue predicted from the neutral count."""
    if not 0 <= N <= n:
        raise ArgumentError(f"N must be in 0..{n}, got {N}")
    return (n - 1) if N in (n - 2, n) else N


@dataclass(frozen=True)
class VerdictRow:
    """One verified instance.

    passed means: the gap matches lambda_star exactly when N >= 1, and in
    the matching case the computed multiplicity equals the predicted one.
    For N = 0 the margin gap - lambda_star is reported, not asserted.
    """

    n: int
    family: str
    seed: int | None
    N: int | None = None
    A: int | None = None
    B: int | None = None
    gap: float | None = None
    lambda_star: float | None = None
    gap_matches: bool | None = None
    M_computed: int | None = None
    M_predicted: int | None = None
    passed: bool = False
    runtime_ms: float = 0.0
    message: str = ""

    @property
    def margin(self) -> float | None:
        if self.gap is None or self.lambda_star is None:
            return None
        return self.gap - self.lambda_star

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "family": self.family,
            "seed": self.seed,
            "N": self.N,
            "A": self.A,
            "B": self.B,
            "gap": self.gap,
            "lambda_star": self.lambda_star,
            "margin": self.margin,
            "gap_matches": self.gap_matches,
            "M_computed": self.M_computed,
            "M_predicted": self.M_predicted,
            "passed": self.passed,
            "runtime_ms": self.runtime_ms,
            "message": self.message,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def verify_instance(
    pv: ParamVector,
    family: str = "",
    seed: int | None = None,
    tol_gap: float = TOL_GAP,
    cluster_tol: float | None = None,
    method: str = "auto",
) -> VerdictRow:
    """Check the gap/multiplicity law on one regular vector (n >= 3)."""
    t0 = time.perf_counter()
    if pv.n < 3:
        raise ArgumentError(
            "theorem checks need n >= 3; at n = 2 the gap equals lambda_star "
            "for every admissible vector, so there is nothing to distinguish"
        )
    reg = is_regular(pv)
    if not reg.ok:
        raise PreconditionError(
            f"parameter vector is not regular; first violations: {reg.violations[:3]}"
        )
    ns = neutral_labels(pv)
    if method == "auto":
        method = "dense" if pv.n <= 7 else "iterative"
    if method == "dense":
        rep = spectrum_dense(
            pv, cluster_tol=CLUSTER_TOL_DENSE if cluster_tol is None else cluster_tol
        )
    elif method == "iterative":
        rep = spectrum_iterative(
            pv,
            cluster_tol=CLUSTER_TOL_ITERATIVE if cluster_tol is None else cluster_tol,
            seed=0 if seed is None else seed,
        )
    else:
        raise ArgumentError(f"unknown method {method!r}")
    gap_matches = abs(rep.gap - rep.lambda_star) <= tol_gap
    m_pred = predicted_multiplicity(pv.n, ns.count)
    passed = (gap_matches == (ns.count >= 1)) and (
        ns.count == 0 or rep.multiplicity_at_target == m_pred
    )
    return VerdictRow(
        n=pv.n,
        family=family,
        seed=seed,
        N=ns.count,
        A=ns.A,
        B=ns.B,
        gap=rep.gap,
        lambda_star=rep.lambda_star,
        gap_matches=gap_matches,
        M_computed=rep.multiplicity_at_target,
        M_predicted=m_pred,
        passed=passed,
        runtime_ms=(time.perf_counter() - t0) * 1e3,
    )


# ---------------------------------------------------------------------------
# Sweeps

FAMILY_NAMES = ("uniform", "neutral_interval", "regular_random", "no_neutral")


def _expand_families(n, families):
    """Yield (label, builder) pairs; builder maps a seed to a ParamVector."""
    for fam in families:
        if isinstance(fam, str):
            fam = {"name": fam}
        name = fam.get("name")
        if name == "uniform":
            yield "uniform", lambda seed, n=n: gen_uniform(n)
        elif name == "neutral_interval":
            if "A" in fam or "B" in fam:
                pairs = [(int(fam["A"]), int(fam["B"]))]
            else:
                pairs = [
                    (A, B)
                    for A in range(2, n)
                    for B in range(A, n)
                ]
            for A, B in pairs:
                yield (
                    f"neutral_interval[A={A},B={B}]",
                    lambda seed, n=n, A=A, B=B: gen_neutral_interval(n, A, B, seed),
                )
        elif name == "regular_random":
            yield "regular_random", lambda seed, n=n: gen_regular_random(n, seed)
        elif name == "no_neutral":
            yield "no_neutral", lambda seed, n=n: gen_no_neutral(n, seed)
        elif name == "explicit":
            pv = ParamVector.from_json(json.dumps(fam["params"]))
            if pv.n != n:
                continue
            label = fam.get("label", "explicit")
            yield label, lambda seed, pv=pv: pv
        else:
            raise ArgumentError(f"unknown family {name!r}")


def _worker_count():
    env = os.environ.get("ATCHAIN_THREADS", "").strip()
    if env:
        return max(1, int(env))
    return min(4, os.cpu_count() or 1)


def verify_sweep(
    n_values,
    families=FAMILY_NAMES,
    seeds=20,
    tol_gap: float = TOL_GAP,
    threads: int | None = None,
) -> list[VerdictRow]:
    """Verdict rows for every (n, family instance, seed) combination.

    seeds may be a count or an explicit list.  Instances run independently
    (thread count from ATCHAIN_THREADS, default up to 4) and the rows come
    back in input order; any per-instance error becomes a failed row
    carrying the message rather than aborting the sweep.
    """
    n_values = list(n_values)
    for n in n_values:
        if n < 3:
            raise ArgumentError(
                "sweeps need n >= 3; at n = 2 the gap equals lambda_star for "
                "every admissible vector"
            )
        if n > MAX_N:
            raise ArgumentError(f"n = {n} exceeds the cap {MAX_N}")
    seed_list = list(range(seeds)) if isinstance(seeds, int) else [int(s) for s in seeds]

    tasks = []
    for n in n_values:
        for label, builder in _expand_families(n, families):
            run_seeds = [None] if label == "uniform" else seed_list
            for seed in run_seeds:
                tasks.append((n, label, seed, builder))

    def run_one(task):
        n, label, seed, builder = task
        try:
            pv = builder(0 if seed is None else seed)
            return verify_instance(pv, family=label, seed=seed, tol_gap=tol_gap)
        except AtchainError as exc:
            return VerdictRow(
                n=n, family=label, seed=seed, passed=False,
                message=f"{type(exc).__name__}: {exc}",
            )

    workers = _worker_count() if threads is None else max(1, threads)
    if workers == 1 or len(tasks) <= 1:
        return [run_one(t) for t in tasks]
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_one, tasks))


def sweep_from_config(config: dict) -> list[VerdictRow]:
    """Run a sweep described by a JSON-style config dict.

    Keys: "n" (list), "families" (list of names or dicts), "seeds"
    (count or list), "tol_gap", "threads".
    """
    try:
        n_values = config["n"]
    except (KeyError, TypeError) as exc:
        raise ArgumentError("sweep config must contain an 'n' list") from exc
    return verify_sweep(
        n_values,
        families=config.get("families", FAMILY_NAMES),
        seeds=config.get("seeds", 20),
        tol_gap=float(config.get("tol_gap", TOL_GAP)),
        threads=config.get("threads"),
    )
