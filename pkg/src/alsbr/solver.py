"""Rate-balancing threshold for adaptive link selection.

The relay queue is stable at maximum throughput when the two hops carry
equal average rates.  ``g(rho) = E[(1-d) C_s] - E[d C_r]`` is increasing in
rho (a larger threshold hands more slots to the source hop), so bisection
on log2(rho) finds the root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

from .errors import DomainError, NonConvergenceError, NoSignChangeError, SolverError
from .rates import DEFAULT_POLICY, BranchPolicy, HopPair, rate_relay_hop, rate_source_hop

_MAX_LOG2_RHO = 40.0


@dataclass(frozen=True)
class SolverSpec:
    """rate_tolerance in bits/slot; bracket as (lo, hi) in log2(rho)."""

    rate_tolerance: float = 1e-9
    bracket: Tuple[float, float] = (-20.0, 20.0)
    max_iterations: int = 200

    def __post_init__(self):
        if not self.rate_tolerance > 0:
            raise DomainError("rate_tolerance must be > 0")
        lo, hi = self.bracket
        if not lo < hi:
            raise DomainError("bracket lower bound must be below the upper bound")
        if self.max_iterations < 1:
            raise DomainError("max_iterations must be >= 1")


DEFAULT_SOLVER = SolverSpec()


@dataclass(frozen=True)
class AlsbrSolution:
    rho: float
    rate: float
    residual: float
    iterations: int
    rate_source: float
    rate_relay: float

    @property
    def log2_rho(self) -> float:
        return math.log2(self.rho)


def _imbalance(hops, log2_rho, policy):
    rho = 2.0 ** log2_rho
    src = rate_source_hop(hops, rho, policy)
    rel = rate_relay_hop(hops, rho, policy)
    g = src - rel
    if not math.isfinite(g):
        raise SolverError(f"rate imbalance is not finite at log2(rho)={log2_rho!r}: {src!r} - {rel!r}")
    return g, src, rel


def _solution(log2_rho, evaluated, iterations):
    g, src, rel = evaluated
    # the ALSBR rate is the common hop rate; report the smaller at a finite residual
    return AlsbrSolution(2.0 ** log2_rho, min(src, rel), g, iterations, src, rel)


def solve_rho(hops: HopPair, spec: SolverSpec = DEFAULT_SOLVER, policy: BranchPolicy = DEFAULT_POLICY) -> AlsbrSolution:
    """Find rho with |E[(1-d)C_s] - E[dC_r]| <= spec.rate_tolerance.

    The bracket is widened (doubling its half-width, up to |log2 rho| = 40)
    when the imbalance does not change sign across it.
    """
    lo, hi = spec.bracket
    g_lo = _imbalance(hops, lo, policy)
    g_hi = _imbalance(hops, hi, policy)
    while g_lo[0] > 0 or g_hi[0] < 0:
        stuck_lo = g_lo[0] > 0 and lo <= -_MAX_LOG2_RHO
        stuck_hi = g_hi[0] < 0 and hi >= _MAX_LOG2_RHO
        if stuck_lo or stuck_hi:
            raise NoSignChangeError(
                f"rate imbalance keeps one sign over log2(rho) in [{lo}, {hi}]: "
                f"g(lo)={g_lo[0]!r}, g(hi)={g_hi[0]!r}"
            )
        if g_lo[0] > 0:
            lo = max(-_MAX_LOG2_RHO, lo - (hi - lo))
            g_lo = _imbalance(hops, lo, policy)
        if g_hi[0] < 0:
            hi = min(_MAX_LOG2_RHO, hi + (hi - lo))
            g_hi = _imbalance(hops, hi, policy)

    for end, g in ((lo, g_lo), (hi, g_hi)):
        if abs(g[0]) <= spec.rate_tolerance:
            return _solution(end, g, 0)

    for it in range(1, spec.max_iterations + 1):
        mid = 0.5 * (lo + hi)
        g_mid = _imbalance(hops, mid, policy)
        if abs(g_mid[0]) <= spec.rate_tolerance:
            return _solution(mid, g_mid, it)
        if g_mid[0] < 0:
            lo, g_lo = mid, g_mid
        else:
            hi, g_hi = mid, g_mid
        if hi - lo < 1e-15 * max(1.0, abs(mid)):
            break
    raise NonConvergenceError(
        f"bisection stopped after {it} iterations with residual {g_mid[0]!r} "
        f"(tolerance {spec.rate_tolerance!r}) at log2(rho)={mid!r}"
    )


def alsbr_rate(hops: HopPair, spec: SolverSpec = DEFAULT_SOLVER, policy: BranchPolicy = DEFAULT_POLICY) -> float:
    """Throughput of adaptive link selection at the rate-balancing threshold."""
    return solve_rho(hops, spec, policy).rate
