"""Closed-form CCDFs and average rates of ALSBR, CUBR and CBR.

Notation follows the hop statistics of :mod:`alsbr.channel`: the source hop
is (ls, ms, ps) and the relay hop is (lr, mr, pr).  With the selection rule
``d = 1  iff  gamma_r / gamma_s >= rho``,

* ``ccdf_source_selected(x) = Pr{d = 0, gamma_s > x}``
* ``ccdf_relay_selected(x)  = Pr{d = 1, gamma_r > x}``
* ``rate_source_hop = E[(1 - d) C_s]`` and ``rate_relay_hop = E[d C_r]``

in bits per slot.  Two harmonic means appear throughout::

    1/lambda_rho = 1/(rho ls) + 1/lr        1/lambda_e = 1/ls + 1/lr

Each expression splits on whether ``mr == rho * ms``; the unequal form has
``(mr - rho ms)`` denominators, so a :class:`BranchPolicy` switches to the
equal form on (near) equality and interpolates across a small window where
the unequal form would cancel catastrophically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Callable

from .channel import LinkStatistics, snr_ccdf
from .errors import DomainError
from .special import LOG2E, dilog, integral_i, integral_i_rate, integral_j


@dataclass(frozen=True)
class HopPair:
    source: LinkStatistics
    relay: LinkStatistics

    def exchanged(self) -> "HopPair":
        """Swap the roles of the two hops (pair with ``rho -> 1/rho``)."""
        return HopPair(self.relay, self.source)


@dataclass(frozen=True)
class BranchPolicy:
    """When to use the ``mr == rho*ms`` forms.

    equality_tolerance: use the equal-branch form when
        ``|mr - rho ms| <= equality_tolerance * max(mr, rho ms)``.
    blend_window: for relative separations below this, interpolate over
        nodes at 0, +-blend_window and +-2*blend_window instead of trusting
        the cancelling unequal form.
    """

    equality_tolerance: float = 1e-6
    blend_window: float = 1e-2

    def __post_init__(self):
        if not 0 < self.equality_tolerance < 1e-2:
            raise DomainError("equality_tolerance must lie in (0, 1e-2)")
        if not self.equality_tolerance <= self.blend_window < 0.1:
            raise DomainError("blend_window must lie in [equality_tolerance, 0.1)")


DEFAULT_POLICY = BranchPolicy()


@dataclass(frozen=True)
class AppendixTerms:
    """The six integrals whose combination gives Pr{d = 1, gamma_s > x}."""

    t1: float
    t2: float
    t3: float
    t4: float
    t5: float
    t6: float

    def selected_relay_mass(self, ps: float, pr: float) -> float:
        """``T1 - ps (T2 - T3) - pr T4 + ps pr ((T2 - T3) - T5)``."""
        t23 = self.t2 - self.t3
        return self.t1 - ps * t23 - pr * self.t4 + ps * pr * (t23 - self.t5)

    def as_tuple(self):
        return tuple(getattr(self, f.name) for f in fields(self))


# ---------------------------------------------------------------------------
# helpers


def lambda_rho(hops: HopPair, rho: float) -> float:
    """Harmonic mean of ``rho * ls`` and ``lr``."""
    _check_rho(rho)
    return 1.0 / (1.0 / (rho * hops.source.lam) + 1.0 / hops.relay.lam)


def lambda_e(hops: HopPair) -> float:
    """End-to-end mean SNR of the non-cognitive link (harmonic mean of ls, lr)."""
    return 1.0 / (1.0 / hops.source.lam + 1.0 / hops.relay.lam)


def _check_rho(rho):
    if not (rho > 0) or math.isinf(rho):
        raise DomainError(f"rho must be finite and > 0, got {rho!r}")


def _i1(mu, lam):
    return integral_i_rate(1, mu, lam)


def _i2(mu, lam):
    return integral_i_rate(2, mu, lam)


_UNIT_WINDOW = 2e-3
_NODES = (-2.0, -1.0, 0.0, 1.0, 2.0)


def _lagrange(nodes, values, u):
    total = 0.0
    for i, (ui, vi) in enumerate(zip(nodes, values)):
        w = 1.0
        for j, uj in enumerate(nodes):
            if j != i:
                w *= (u - uj) / (ui - uj)
        total += w * vi
    return total


def _removable_at_one(direct, limit, mu, window=_UNIT_WINDOW):
    t = mu - 1.0
    if t == 0.0:
        return limit()
    if abs(t) >= window:
        return direct(mu)
    values = [limit() if k == 0 else direct(1.0 + k * window) for k in _NODES]
    return _lagrange(_NODES, values, t / window)


def _pf(mu: float, lam: float) -> float:
    """``mu/(mu-1) [I1(1,lam) - I1(mu,lam)]``, i.e. int mu e^{-x/lam}/((1+x)(x+mu)) / ln2."""
    return _removable_at_one(
        lambda m: m / (m - 1.0) * (_i1(1.0, lam) - _i1(m, lam)),
        lambda: _i2(1.0, lam),
        mu,
    )


def _pf2(mu: float, lam: float) -> float:
    """``k^2 [I1(1,lam) - I1(mu,lam)] - k I2(mu,lam)`` with k = mu/(mu-1)."""

    def direct(m):
        k = m / (m - 1.0)
        return k * k * (_i1(1.0, lam) - _i1(m, lam)) - k * _i2(m, lam)

    return _removable_at_one(direct, lambda: integral_i_rate(3, 1.0, lam), mu)


def _split(policy: BranchPolicy, unequal, equal, current: float, target: float):
    """Evaluate a formula family split on ``current == target``.

    ``unequal(v)`` / ``equal()`` evaluate the family with the moving
    parameter set to ``v`` / to ``target``.
    """
    if abs(current - target) <= policy.equality_tolerance * max(current, target):
        return equal()
    u = (current / target - 1.0) / policy.blend_window
    if abs(u) >= 1.0:
        return unequal(current)
    values = [equal() if k == 0 else unequal(target * (1.0 + k * policy.blend_window)) for k in _NODES]
    return _lagrange(_NODES, values, u)


# ---------------------------------------------------------------------------
# joint CCDF of the selection variable and the selected SNR


def _ccdf_unequal(s: LinkStatistics, r: LinkStatistics, rho: float, x: float) -> float:
    ls, ms, ps = s.lam, s.mu, s.p
    lr, mr, pr = r.lam, r.mu, r.p
    lrho = 1.0 / (1.0 / (rho * ls) + 1.0 / lr)
    big_e = math.exp(-rho * x / lrho)
    e_s = math.exp(-x / ls)
    dd = mr - rho * ms
    out = (1 - ps) * (e_s - (1 - pr) * lrho / (rho * ls) * big_e)
    out += ps * ms / (x + ms) * (e_s - (1 - pr + mr * pr / dd) * big_e)
    out += (
        ps * (1 - pr + mr * pr / dd + lr * mr * pr / dd ** 2) * rho * ms / lr
        * integral_i(1, rho * ms, lrho, rho * x)
    )
    out -= (
        pr * (1 - ps - rho * ms * ps / dd + rho * ls * rho * ms * ps / dd ** 2) * mr / (rho * ls)
        * integral_i(1, mr, lrho, rho * x)
    )
    return out


def _ccdf_equal(s: LinkStatistics, r: LinkStatistics, rho: float, x: float) -> float:
    ls, ms, ps = s.lam, s.mu, s.p
    lr, mr, pr = r.lam, r.mu, r.p
    lrho = 1.0 / (1.0 / (rho * ls) + 1.0 / lr)
    big_e = math.exp(-rho * x / lrho)
    e_s = math.exp(-x / ls)
    u = ms / (x + ms)
    out = (1 - ps) * (e_s - (1 - pr) * lrho / (rho * ls) * big_e) - ps * pr / 2 * big_e * u * u
    out += ps * u * (e_s - (1 - pr) * big_e + pr / 2 * (mr / lr - ms / ls) * big_e)
    coeff = ps * (1 - pr) * mr / lr - pr * (1 - ps) * ms / ls + ps * pr / 2 * (ms ** 2 / ls ** 2 - mr ** 2 / lr ** 2)
    out += coeff * integral_i(1, mr, lrho, rho * x)
    return out


def ccdf_source_selected(hops: HopPair, rho: float, x: float, policy: BranchPolicy = DEFAULT_POLICY) -> float:
    """Pr{d = 0, gamma_s > x}: source hop selected and its SNR exceeds x."""
    _check_rho(rho)
    x = float(x)
    if not x >= 0:
        raise DomainError(f"x must be >= 0, got {x!r}")
    if math.isinf(x):
        return 0.0
    s, r = hops.source, hops.relay
    return _split(
        policy,
        lambda mr: _ccdf_unequal(s, r.replace(mu=mr), rho, x),
        lambda: _ccdf_equal(s, r.replace(mu=rho * s.mu), rho, x),
        r.mu,
        rho * s.mu,
    )


def ccdf_relay_selected(hops: HopPair, rho: float, x: float, policy: BranchPolicy = DEFAULT_POLICY) -> float:
    """Pr{d = 1, gamma_r > x}, by exchanging the hops and inverting rho."""
    _check_rho(rho)
    return ccdf_source_selected(hops.exchanged(), 1.0 / rho, x, policy)


# ---------------------------------------------------------------------------
# ALSBR per-hop rates


def _rate_source_unequal(s: LinkStatistics, r: LinkStatistics, rho: float) -> float:
    ls, ms, ps = s.lam, s.mu, s.p
    lr, mr, pr = r.lam, r.mu, r.p
    lrho = 1.0 / (1.0 / (rho * ls) + 1.0 / lr)
    lq = lrho / rho
    dd = mr - rho * ms
    out = (1 - ps) * (_i1(1.0, ls) - (1 - pr) * lrho / (rho * ls) * _i1(1.0, lq))
    # ps * ms/(ms-1) * [...], with ms/(ms-1) folded into each difference
    out += ps * (_pf(ms, ls) - (1 - pr + mr * pr / dd) * _pf(ms, lq))
    out += rho * ms * ps / lr * integral_j(ms, lq) * (1 - pr + mr * pr / dd + lr * mr * pr / dd ** 2)
    out -= (
        mr * pr / (rho * ls) * integral_j(mr / rho, lq)
        * (1 - ps - rho * ms * ps / dd + rho * ls * rho * ms * ps / dd ** 2)
    )
    return out


def _rate_source_equal(s: LinkStatistics, r: LinkStatistics, rho: float) -> float:
    ls, ms, ps = s.lam, s.mu, s.p
    lr, mr, pr = r.lam, r.mu, r.p
    lrho = 1.0 / (1.0 / (rho * ls) + 1.0 / lr)
    lq = lrho / rho
    out = (1 - ps) * (_i1(1.0, ls) - (1 - pr) * lrho / (rho * ls) * _i1(1.0, lq))
    out += ps * _pf(ms, ls)
    out -= (ps * (1 - pr) - ps * pr / 2 * (mr / lr - ms / ls)) * _pf(ms, lq)
    out -= ps * pr / 2 * _pf2(ms, lq)
    coeff = ps * (1 - pr) * mr / lr - pr * (1 - ps) * ms / ls + ps * pr / 2 * (ms ** 2 / ls ** 2 - mr ** 2 / lr ** 2)
    out += coeff * integral_j(ms, lq)
    return out


def _rate_relay_unequal(s: LinkStatistics, r: LinkStatistics, rho: float) -> float:
    ls, ms, ps = s.lam, s.mu, s.p
    lr, mr, pr = r.lam, r.mu, r.p
    lrho = 1.0 / (1.0 / (rho * ls) + 1.0 / lr)
    dd = mr - rho * ms
    out = (1 - pr) * (_i1(1.0, lr) - (1 - ps) * lrho / lr * _i1(1.0, lrho))
    out += pr * (_pf(mr, lr) - (1 - ps - rho * ms * ps / dd) * _pf(mr, lrho))
    # J arguments follow from exchanging the hops in the source-hop form
    out += (
        mr * pr / (rho * ls) * integral_j(mr, lrho)
        * (1 - ps - rho * ms * ps / dd + rho * ls * rho * ms * ps / dd ** 2)
    )
    out -= rho * ms * ps / lr * integral_j(rho * ms, lrho) * (1 - pr + mr * pr / dd + lr * mr * pr / dd ** 2)
    return out


def _rate_relay_equal(s: LinkStatistics, r: LinkStatistics, rho: float) -> float:
    ls, ms, ps = s.lam, s.mu, s.p
    lr, mr, pr = r.lam, r.mu, r.p
    lrho = 1.0 / (1.0 / (rho * ls) + 1.0 / lr)
    out = (1 - pr) * (_i1(1.0, lr) - (1 - ps) * lrho / lr * _i1(1.0, lrho))
    out += pr * _pf(mr, lr)
    out -= (pr * (1 - ps) - ps * pr / 2 * (ms / ls - mr / lr)) * _pf(mr, lrho)
    out -= ps * pr / 2 * _pf2(mr, lrho)
    coeff = pr * (1 - ps) * ms / ls - ps * (1 - pr) * mr / lr + ps * pr / 2 * (mr ** 2 / lr ** 2 - ms ** 2 / ls ** 2)
    out += coeff * integral_j(mr, lrho)
    return out


def rate_source_hop(hops: HopPair, rho: float, policy: BranchPolicy = DEFAULT_POLICY) -> float:
    """E[(1 - d) C_s] in bits/slot."""
    _check_rho(rho)
    s, r = hops.source, hops.relay
    return _split(
        policy,
        lambda mr: _rate_source_unequal(s, r.replace(mu=mr), rho),
        lambda: _rate_source_equal(s, r.replace(mu=rho * s.mu), rho),
        r.mu,
        rho * s.mu,
    )


def rate_relay_hop(hops: HopPair, rho: float, policy: BranchPolicy = DEFAULT_POLICY) -> float:
    """E[d C_r] in bits/slot, from the relay-hop closed forms.

    Near the branch point the source-hop mean is the moving parameter so
    that the ``mr = 1`` singularity of these forms is never crossed by the
    interpolation nodes.
    """
    _check_rho(rho)
    s, r = hops.source, hops.relay
    return _split(
        policy,
        lambda ms: _rate_relay_unequal(s.replace(mu=ms), r, rho),
        lambda: _rate_relay_equal(s.replace(mu=r.mu / rho), r, rho),
        s.mu,
        r.mu / rho,
    )


def rate_relay_hop_exchanged(hops: HopPair, rho: float, policy: BranchPolicy = DEFAULT_POLICY) -> float:
    """E[d C_r] computed as the source-hop rate of the exchanged pair at 1/rho."""
    _check_rho(rho)
    return rate_source_hop(hops.exchanged(), 1.0 / rho, policy)


# ---------------------------------------------------------------------------
# conventional schemes


def _cubr_unequal(s: LinkStatistics, r: LinkStatistics, le: float) -> float:
    ms, ps = s.mu, s.p
    mr, pr = r.mu, r.p
    out = (1 - ps) * (1 - pr) * _i1(1.0, le)
    out += ps * (1 - pr + pr * mr / (mr - ms)) * _pf(ms, le)
    out += pr * (1 - ps - ps * ms / (mr - ms)) * _pf(mr, le)
    return 0.5 * out


def _cubr_equal(s: LinkStatistics, r: LinkStatistics, le: float) -> float:
    ms, ps, pr = s.mu, s.p, r.p
    out = (1 - ps) * (1 - pr) * _i1(1.0, le)
    out += (ps * (1 - pr) + pr * (1 - ps)) * _pf(ms, le)
    out += ps * pr * _pf2(ms, le)
    return 0.5 * out


def rate_cubr(hops: HopPair, policy: BranchPolicy = DEFAULT_POLICY) -> float:
    """Unbuffered relaying: (1/2) E[min(C_s, C_r)] in bits/slot.

    The branch compares ``mr`` with ``ms`` (no selection threshold enters).
    """
    s, r = hops.source, hops.relay
    le = lambda_e(hops)
    return _split(
        policy,
        lambda mr: _cubr_unequal(s, r.replace(mu=mr), le),
        lambda: _cubr_equal(s, r.replace(mu=s.mu), le),
        r.mu,
        s.mu,
    )


def hop_mean_rate(link: LinkStatistics) -> float:
    """E[log2(1 + gamma)] of a single hop."""
    return (1 - link.p) * _i1(1.0, link.lam) + link.p * _pf(link.mu, link.lam)


def rate_cbr(hops: HopPair) -> float:
    """Conventional buffered relaying: (1/2) min(E[C_s], E[C_r])."""
    return 0.5 * min(hop_mean_rate(hops.source), hop_mean_rate(hops.relay))


# ---------------------------------------------------------------------------
# interference-limited (high SNR) asymptotes


def _mu_log(mu: float) -> float:
    """mu ln(mu) / (mu - 1), continuous at mu = 1."""
    t = mu - 1.0
    return 1.0 if t == 0.0 else mu * math.log1p(t) / t


def _log_over(mu: float) -> float:
    """ln(mu) / (mu - 1), continuous at mu = 1."""
    t = mu - 1.0
    return 1.0 if t == 0.0 else math.log1p(t) / t


def _asym_source_unequal(ms: float, mr: float, rho: float) -> float:
    dd = mr - rho * ms
    out = -rho * ms / dd * _mu_log(ms) * LOG2E
    out += rho * ms * mr / dd ** 2 * LOG2E * (dilog(ms) - dilog(mr / rho))
    return out


def _asym_source_equal(ms: float) -> float:
    def direct(m):
        return 0.5 * m / (m - 1.0) * (LOG2E + (m - 2.0) / (m - 1.0) * math.log2(m))

    return _removable_at_one(direct, lambda: 0.75 * LOG2E, ms)


def asym_rate_source_hop(hops: HopPair, rho: float, policy: BranchPolicy = DEFAULT_POLICY) -> float:
    """High-SNR limit of E[(1 - d) C_s]; depends only on ms, mr and rho."""
    _check_rho(rho)
    ms, mr = hops.source.mu, hops.relay.mu
    return _split(
        policy,
        lambda m: _asym_source_unequal(ms, m, rho),
        lambda: _asym_source_equal(ms),
        mr,
        rho * ms,
    )


def asym_rate_relay_hop(hops: HopPair, rho: float, policy: BranchPolicy = DEFAULT_POLICY) -> float:
    _check_rho(rho)
    return asym_rate_source_hop(hops.exchanged(), 1.0 / rho, policy)


def _asym_cubr_equal(mu: float) -> float:
    def direct(m):
        k = m / (m - 1.0)
        return 0.5 * LOG2E * (-k + k * k * math.log(m))

    return _removable_at_one(direct, lambda: 0.25 * LOG2E, mu)


def asym_rate_cubr(hops: HopPair, policy: BranchPolicy = DEFAULT_POLICY) -> float:
    """High-SNR CUBR rate: (1/2) ms mr/(mr - ms) [log2(ms)/(ms-1) - log2(mr)/(mr-1)]."""
    ms, mr = hops.source.mu, hops.relay.mu
    return _split(
        policy,
        lambda m: 0.5 * ms * m / (m - ms) * LOG2E * (_log_over(ms) - _log_over(m)),
        lambda: _asym_cubr_equal(ms),
        mr,
        ms,
    )


def asym_rate_cbr(hops: HopPair) -> float:
    """High-SNR CBR rate: (1/2) min over hops of mu log2(mu)/(mu - 1)."""
    return 0.5 * LOG2E * min(_mu_log(hops.source.mu), _mu_log(hops.relay.mu))


# ---------------------------------------------------------------------------
# term decomposition of Pr{d = 1, gamma_s > x}


def appendix_terms(hops: HopPair, rho: float, x: float, policy: BranchPolicy = DEFAULT_POLICY) -> AppendixTerms:
    """T1..T6 at threshold x.

    With a = rho/lambda_rho, each term is an integral over s in [x, inf) of
    e^{-a s} times a rational factor; see :func:`appendix_integrands`.
    """
    _check_rho(rho)
    x = float(x)
    if not x >= 0:
        raise DomainError(f"x must be >= 0, got {x!r}")
    s, r = hops.source, hops.relay
    ls, ms = s.lam, s.mu
    lr, mr = r.lam, r.mu
    lrho = lambda_rho(hops, rho)
    lq = lrho / rho
    big_e = math.exp(-rho * x / lrho)
    b = mr / rho
    k_b = integral_i(1, b, lq, x)
    k_m = integral_i(1, ms, lq, x)
    t1 = lrho / (rho * ls) * big_e
    t2 = x * big_e / (x + ms)
    t3 = lrho / lr * (big_e - rho * ms / lrho * k_m)
    t4 = lrho / (rho * ls) * (big_e - mr / lrho * k_b)

    def equal():
        kb = integral_i(1, ms, lq, x)
        u = ms / (x + ms)
        t5 = ms / ls * kb - 0.5 * (big_e * u * u - (rho * ms / lr - ms / ls) * (big_e * u - rho * ms / lrho * kb))
        return t5, integral_i(2, ms, lq, x)

    def unequal(m):
        bm = m / rho
        gap = bm - ms
        kb = integral_i(1, bm, lq, x)
        k_2m = integral_i(2, ms, lq, x) / ms
        t6 = rho * ms / (m - rho * ms) * (k_m - kb)
        t5 = bm / ls * (kb - ms / gap * (k_m - kb) - ls * ms * ((kb - k_m) / gap ** 2 + k_2m / gap))
        return t5, t6

    # only mu_r moves inside the blend: lambda_rho and lambda_r stay fixed
    t5 = _split(policy, lambda m: unequal(m)[0], lambda: equal()[0], mr, rho * ms)
    t6 = _split(policy, lambda m: unequal(m)[1], lambda: equal()[1], mr, rho * ms)
    return AppendixTerms(t1, t2, t3, t4, t5, t6)


def appendix_integrands(hops: HopPair, rho: float) -> dict:
    """Defining integrands of T1..T6 as functions of the integration variable."""
    s, r = hops.source, hops.relay
    ls, ms = s.lam, s.mu
    lr, mr = r.lam, r.mu
    lrho = lambda_rho(hops, rho)
    a = rho / lrho

    def bracket(v):
        return 1 - ms / (v + ms) - ls * ms / (v + ms) ** 2

    return {
        "t1": lambda v: math.exp(-a * v) / ls,
        "t2": lambda v: a * (1 - ms / (v + ms) - ms / (a * (v + ms) ** 2)) * math.exp(-a * v),
        "t3": lambda v: rho / lr * (1 - ms / (v + ms)) * math.exp(-a * v),
        "t4": lambda v: (1 - mr / (rho * v + mr)) * math.exp(-a * v) / ls,
        "t5": lambda v: math.exp(-a * v) * bracket(v) * mr / (rho * v + mr) / ls,
        "t6": lambda v: rho * ms / ((v + ms) * (rho * v + mr)) * math.exp(-a * v),
    }


def ccdf_from_terms(hops: HopPair, rho: float, x: float, policy: BranchPolicy = DEFAULT_POLICY) -> float:
    """Pr{d = 0, gamma_s > x} assembled as F^c_s(x) minus the T-term combination."""
    terms = appendix_terms(hops, rho, x, policy)
    return snr_ccdf(hops.source, x) - terms.selected_relay_mass(hops.source.p, hops.relay.p)


Rate = Callable[[HopPair, float], float]
