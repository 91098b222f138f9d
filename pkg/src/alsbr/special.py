"""Exponential integrals, the dilogarithm and the I_n / J integral family.

Every rate expression in the package is assembled from a handful of
one-dimensional integrals over a Rayleigh-type SNR density:

    I_n(mu, lam; x) = int_x^inf mu^(n-1) / (s + mu)^n * exp(-s / lam) ds
    J(mu, lam)      = int_0^inf log2(1 + s) / (s + mu) * exp(-s / lam) ds

``I_n`` has a closed form in the generalized exponential integral E_n; ``J``
does not and is evaluated either by a convergent double series or by
adaptive quadrature.  Products ``exp(z) * E_n(z)`` are always computed in
scaled form so that large arguments neither overflow nor underflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Optional

from scipy import integrate
from scipy import special as _sp

from .errors import DomainError, QuadratureError

EULER_GAMMA = 0.57721566490153286060651209008240243
LN2 = math.log(2.0)
LOG2E = 1.0 / LN2

_CF_EPS = 1e-16
_CF_MAXIT = 10_000
_FPMIN = 1e-300


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances for :func:`quadrature`."""

    rel_tol: float = 1e-12
    abs_tol: float = 0.0
    max_subdivisions: int = 200

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be positive")
        if not self.abs_tol >= 0:
            raise DomainError("abs_tol must be non-negative")
        if int(self.max_subdivisions) < 1:
            raise DomainError("max_subdivisions must be at least 1")


DEFAULT_QUADRATURE = QuadratureSpec()

# ier codes of QUADPACK that signal a genuine failure (roundoff, code 2, is
# tolerated: the result is then at the noise floor of the integrand).
_QUAD_FAILURES = (
    "The maximum number of subdivisions",
    "Extremely bad integrand behavior",
    "The algorithm does not converge",
    "The integral is probably divergent",
    "The input is invalid",
)


def _quad_piece(f, a, b, spec: QuadratureSpec, epsabs: float) -> float:
    out = integrate.quad(
        f, a, b, epsabs=epsabs, epsrel=spec.rel_tol,
        limit=int(spec.max_subdivisions), full_output=1,
    )
    if len(out) > 3:
        message = out[3]
        if any(message.startswith(m) for m in _QUAD_FAILURES):
            raise QuadratureError(f"quadrature on [{a}, {b}] failed: {message.splitlines()[0]}")
    return out[0]


def quadrature(
    integrand: Callable[[float], float],
    lower: float,
    upper: float = math.inf,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    points: Iterable[float] = (),
) -> float:
    """Integrate ``integrand`` over ``[lower, upper]``; ``upper`` may be ``inf``.

    A semi-infinite range is split at ``lower + 10**k`` for k = -6..14 (and
    at any extra ``points``) before each piece goes to QUADPACK's adaptive
    Gauss-Kronrod driver.  Integrands here mix length scales from 1e-3 to
    1e7, and a single mapped interval routinely misses the tail mass.

    Raises :class:`QuadratureError` when a piece does not converge within
    ``spec.max_subdivisions`` bisections.
    """
    lower = float(lower)
    upper = float(upper)
    if math.isnan(lower) or math.isnan(upper) or math.isinf(lower):
        raise DomainError("integration limits must be finite (upper may be +inf)")
    if upper < lower:
        return -quadrature(integrand, upper, lower, spec, points)
    if upper == lower:
        return 0.0
    extra = sorted(float(p) for p in points if lower < p < upper)
    if math.isinf(upper):
        edges = sorted({lower, *extra, *(lower + 10.0 ** k for k in range(-6, 15))})
        edges = [e for e in edges if e >= lower]
    else:
        edges = [lower, *extra, upper]
    n_pieces = len(edges) - 1 + (1 if math.isinf(upper) else 0)
    epsabs = spec.abs_tol / n_pieces
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        if b > a:
            total += _quad_piece(integrand, a, b, spec, epsabs)
    if math.isinf(upper):
        total += _quad_piece(integrand, edges[-1], math.inf, spec, epsabs)
    return total


# ---------------------------------------------------------------------------
# Exponential integrals


def _check_order(n) -> int:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"order n must be an integer >= 1, got {n!r}")
    return int(n)


def _e1_series(x: float) -> float:
    # -gamma - ln x - sum_{k>=1} (-x)^k / (k k!), accurate for 0 < x <= 1
    total = 0.0
    term = 1.0
    for k in range(1, 200):
        term *= -x / k
        contrib = term / k
        total += contrib
        if abs(contrib) < 1e-17 * abs(total):
            break
    return -EULER_GAMMA - math.log(x) - total


def _en_small(n: int, x: float) -> float:
    """E_n(x) for 0 <= x <= 1: series for E_1, then upward recurrence."""
    if x == 0.0:
        return 1.0 / (n - 1)
    e = _e1_series(x)
    ex = math.exp(-x)
    for k in range(1, n):
        e = (ex - x * e) / k
    return e


def _scaled_en_cf(n: int, x: float) -> float:
    """exp(x) E_n(x) for x > 1 by modified Lentz on the continued fraction."""
    if x > 1e8 * n:
        # the continued fraction stalls in floating point; three asymptotic terms are exact here
        return (1.0 - n / x + n * (n + 1) / (x * x)) / x
    b = x + n
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, _CF_MAXIT):
        a = -i * (n - 1 + i)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise ArithmeticError(f"continued fraction for E_{n}({x}) did not converge")


def _check_arg(n: int, x) -> float:
    x = float(x)
    if math.isnan(x) or math.isinf(x) or x < 0 or (x == 0 and n == 1):
        raise DomainError(f"E_{n} is undefined at x = {x!r}")
    return x


def exp_integral_en(n: int, x: float) -> float:
    """Generalized exponential integral ``E_n(x) = int_1^inf e^{-xt} / t^n dt``.

    ``x = 0`` is admitted for ``n >= 2`` where ``E_n(0) = 1/(n-1)``.  For
    x beyond ~745 the result underflows to 0.0; use :func:`scaled_en`.
    """
    n = _check_order(n)
    x = _check_arg(n, x)
    if x <= 1.0:
        return _en_small(n, x)
    return math.exp(-x) * _scaled_en_cf(n, x)


def scaled_en(n: int, x: float) -> float:
    """``exp(x) * E_n(x)``, finite for every admissible x."""
    n = _check_order(n)
    x = _check_arg(n, x)
    if x <= 1.0:
        return math.exp(x) * _en_small(n, x)
    return _scaled_en_cf(n, x)


def scaled_e1(x: float) -> float:
    """``exp(x) * E_1(x)`` for x > 0; tends to 1/x for large x."""
    return scaled_en(1, x)


def dilog(x: float) -> float:
    """Dilogarithm in the Abramowitz & Stegun 27.7 convention.

    ``Di2(x) = -int_1^x ln(t) / (t - 1) dt = Li2(1 - x)`` for x >= 0, so
    ``Di2(1) = 0`` and ``Di2(0) = pi^2 / 6``.  This is the convention under
    which ``J(mu, lam)`` approaches ``[(EuM - ln lam)^2 / 2 + pi^2/12 +
    Di2(mu)] / ln 2`` as lam grows.
    """
    x = float(x)
    if math.isnan(x) or x < 0 or math.isinf(x):
        raise DomainError(f"dilog is defined for finite x >= 0, got {x!r}")
    return float(_sp.spence(x))


def _check_positive(name: str, v) -> float:
    v = float(v)
    if not (v > 0) or math.isinf(v):
        raise DomainError(f"{name} must be finite and positive, got {v!r}")
    return v


def integral_i(n: int, mu: float, lam: float, x: float = 0.0) -> float:
    """``I_n(mu, lam; x) = (mu/(x+mu))^(n-1) exp(mu/lam) E_n((x+mu)/lam)``."""
    n = _check_order(n)
    mu = _check_positive("mu", mu)
    lam = _check_positive("lambda", lam)
    x = float(x)
    if math.isinf(x):
        return 0.0
    if not x >= 0:
        raise DomainError(f"x must be >= 0, got {x!r}")
    return (mu / (x + mu)) ** (n - 1) * math.exp(-x / lam) * scaled_en(n, (x + mu) / lam)


def integral_i_rate(n: int, mu: float, lam: float) -> float:
    """``I_n(mu, lam; 0) / ln 2`` -- the rate-scale version of :func:`integral_i`."""
    n = _check_order(n)
    mu = _check_positive("mu", mu)
    lam = _check_positive("lambda", lam)
    return LOG2E * scaled_en(n, mu / lam)


# ---------------------------------------------------------------------------
# The J integral


def integral_j_series(
    mu: float,
    lam: float,
    term_tol: float = 1e-14,
    max_terms: int = 10_000,
    max_ratio: float = 1.0,
) -> Optional[float]:
    """Double-series evaluation of J, or ``None`` where it is not trustworthy.

    With z = mu/lam,

        J ln2 = e^z [ (EuM + ln z)^2 / 2 + pi^2/12 + sum_k (-z)^k / (k^2 k!)
                      + ln(mu) E_1(z) ]
                - sum_k (1 - 1/mu)^k / k * e^z E_{k+1}(z).

    The second sum needs |1 - 1/mu| < 1, i.e. mu > 1/2.  For z above
    ``max_ratio`` the bracketed terms cancel against each other before the
    e^z factor restores their scale, so the series is refused there too.
    """
    mu = _check_positive("mu", mu)
    lam = _check_positive("lambda", lam)
    z = mu / lam
    if mu <= 0.5 or z > max_ratio:
        return None

    s1 = 0.0
    term = 1.0
    for k in range(1, max_terms + 1):
        term *= -z / k
        contrib = term / (k * k)
        s1 += contrib
        if abs(contrib) <= term_tol * abs(s1):
            break
    else:
        return None

    r = 1.0 - 1.0 / mu
    s2 = 0.0
    if r != 0.0:
        en = scaled_e1(z)  # e^z E_k(z), advanced upward (stable for z <= 1)
        rk = 1.0
        for k in range(1, max_terms + 1):
            en = (1.0 - z * en) / k
            rk *= r
            contrib = rk * en / k
            s2 += contrib
            if abs(contrib) <= term_tol * abs(s2):
                break
        else:
            return None

    head = math.exp(z) * (0.5 * (EULER_GAMMA + math.log(z)) ** 2 + math.pi ** 2 / 12 + s1)
    head += math.log(mu) * scaled_e1(z)
    return (head - s2) * LOG2E


_J_QUADRATURE = QuadratureSpec(rel_tol=1e-13, abs_tol=0.0, max_subdivisions=400)


def integral_j_quadrature(mu: float, lam: float, spec: QuadratureSpec = _J_QUADRATURE) -> float:
    """J by direct adaptive quadrature of its defining integrand."""
    mu = _check_positive("mu", mu)
    lam = _check_positive("lambda", lam)

    def f(s):
        return math.log1p(s) / (s + mu) * math.exp(-s / lam)

    return LOG2E * quadrature(f, 0.0, math.inf, spec, points=(mu, lam, 40.0 * lam))


@lru_cache(maxsize=4096)
def _integral_j_cached(mu: float, lam: float) -> float:
    value = integral_j_series(mu, lam)
    if value is None:
        value = integral_j_quadrature(mu, lam)
    return value


def integral_j(mu: float, lam: float) -> float:
    """``J(mu, lam) = int_0^inf log2(1+s)/(s+mu) exp(-s/lam) ds``.

    Series where it converges (mu > 1/2, mu/lam <= 1), quadrature otherwise.
    """
    return _integral_j_cached(_check_positive("mu", mu), _check_positive("lambda", lam))


def integral_j_asymptotic(mu: float, lam: float) -> float:
    """Large-``lam`` form of J: ``[(EuM - ln lam)^2/2 + pi^2/12 + Di2(mu)] / ln 2``."""
    mu = _check_positive("mu", mu)
    lam = _check_positive("lambda", lam)
    return LOG2E * (0.5 * (EULER_GAMMA - math.log(lam)) ** 2 + math.pi ** 2 / 12 + dilog(mu))
