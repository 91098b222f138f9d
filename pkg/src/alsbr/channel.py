"""Underlay two-hop geometry, per-hop SNR statistics and fading samplers.

A secondary node i in {s, r} transmits with power ``min(P_max, I_p/|g_i|^2)``
so that its peak interference at the primary receiver stays below the
limit.  Its SNR on the forward link is

    gamma_i = min(gamma_max, gamma_p / |g_i|^2) * |h_i|^2

with |h_i|^2, |g_i|^2 exponential.  The distribution of gamma_i depends only
on the triple (lambda_i, mu_i, p_i) held in :class:`LinkStatistics`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import DomainError


def db_to_linear(db: float) -> float:
    return 10.0 ** (float(db) / 10.0)


def linear_to_db(value: float) -> float:
    return 10.0 * math.log10(value)


def _positive(name, value):
    value = float(value)
    if not value > 0 or math.isinf(value):
        raise DomainError(f"{name} must be finite and > 0, got {value!r}")
    return value


@dataclass(frozen=True)
class SystemParams:
    """Linear SNR budget plus the path-loss exponent.

    ``gamma_max`` is P_max/N_o and ``gamma_p`` is I_p/N_o, both linear.  Use
    :meth:`from_db` at configuration boundaries.
    """

    gamma_max: float
    gamma_p: float
    alpha: float = 3.0

    def __post_init__(self):
        _positive("gamma_max", self.gamma_max)
        _positive("gamma_p", self.gamma_p)
        if not self.alpha >= 2:
            raise DomainError(f"path-loss exponent must be >= 2, got {self.alpha!r}")

    @classmethod
    def from_db(cls, gamma_max_db: float, gamma_p_db: float, alpha: float = 3.0) -> "SystemParams":
        return cls(db_to_linear(gamma_max_db), db_to_linear(gamma_p_db), alpha)


@dataclass(frozen=True)
class NetworkGeometry:
    """Node distances, with optional direct overrides of the mean gains."""

    d_sr: float = 1.0
    d_rd: float = 1.0
    d_sp: float = 1.0
    d_rp: float = 1.0
    omega_hs: Optional[float] = None
    omega_hr: Optional[float] = None
    omega_gs: Optional[float] = None
    omega_gr: Optional[float] = None

    def __post_init__(self):
        for name in ("d_sr", "d_rd", "d_sp", "d_rp"):
            _positive(name, getattr(self, name))
        for name in ("omega_hs", "omega_hr", "omega_gs", "omega_gr"):
            if getattr(self, name) is not None:
                _positive(name, getattr(self, name))

    def gains(self, alpha: float) -> Tuple[float, float, float, float]:
        """(Omega_hs, Omega_hr, Omega_gs, Omega_gr); d^-alpha unless overridden."""

        def pick(override, d):
            return float(override) if override is not None else float(d) ** (-alpha)

        return (
            pick(self.omega_hs, self.d_sr),
            pick(self.omega_hr, self.d_rd),
            pick(self.omega_gs, self.d_sp),
            pick(self.omega_gr, self.d_rp),
        )


@dataclass(frozen=True)
class LinkStatistics:
    """Sufficient statistics of one hop's SNR.

    lam: mean SNR at peak power, ``gamma_max * Omega_h``.
    mu:  mean SNR at the interference-limited power, ``gamma_p * Omega_h / Omega_g``.
    p:   probability that peak power would violate the interference limit,
         ``exp(-mu / lam)``.

    :meth:`from_means` enforces ``p = exp(-mu/lam)``.  Building the class
    directly admits any p in [0, 1]; the CCDF below is a valid distribution
    for every such p, which is how the PTPR (p = 0) and PIPR (p = 1) limits
    are studied in isolation.
    """

    lam: float
    mu: float
    p: float

    def __post_init__(self):
        _positive("lambda", self.lam)
        _positive("mu", self.mu)
        if not 0.0 <= self.p <= 1.0:
            raise DomainError(f"p must lie in [0, 1], got {self.p!r}")

    @classmethod
    def from_means(cls, lam: float, mu: float) -> "LinkStatistics":
        lam = _positive("lambda", lam)
        mu = _positive("mu", mu)
        return cls(lam, mu, math.exp(-mu / lam))

    @property
    def is_consistent(self) -> bool:
        return self.p == math.exp(-self.mu / self.lam)

    def replace(self, **changes) -> "LinkStatistics":
        fields = {"lam": self.lam, "mu": self.mu, "p": self.p}
        fields.update(changes)
        return LinkStatistics(**fields)


@dataclass(frozen=True)
class FadingSample:
    """Channel power gains of one draw: |h|^2 (forward) and |g|^2 (to PD)."""

    h_sq: np.ndarray
    g_sq: np.ndarray


def derive_link_statistics(
    sys: SystemParams, geo: NetworkGeometry
) -> Tuple[LinkStatistics, LinkStatistics]:
    """Per-hop (lambda, mu, p) for the source (SS->SR) and relay (SR->SD) hops."""
    ohs, ohr, ogs, ogr = geo.gains(sys.alpha)
    source = LinkStatistics.from_means(sys.gamma_max * ohs, sys.gamma_p * ohs / ogs)
    relay = LinkStatistics.from_means(sys.gamma_max * ohr, sys.gamma_p * ohr / ogr)
    return source, relay


def _snr_arg(s):
    s = np.asarray(s, dtype=float)
    if np.any(s < 0) or np.any(np.isnan(s)):
        raise DomainError("SNR argument must be >= 0")
    return s


def _scalar_or_array(v):
    return float(v) if np.ndim(v) == 0 else v


def snr_ccdf(link: LinkStatistics, s):
    """Pr{gamma > s} = exp(-s/lam) [1 - p (1 - mu/(s + mu))]."""
    s = _snr_arg(s)
    out = np.exp(-s / link.lam) * (1.0 - link.p * (1.0 - link.mu / (s + link.mu)))
    return _scalar_or_array(out)


def snr_cdf(link: LinkStatistics, s):
    """Pr{gamma <= s}; the complement of :func:`snr_ccdf`."""
    s = _snr_arg(s)
    out = 1.0 - np.exp(-s / link.lam) * (1.0 - link.p * (1.0 - link.mu / (s + link.mu)))
    return _scalar_or_array(out)


def snr_pdf(link: LinkStatistics, s):
    s = _snr_arg(s)
    lam, mu, p = link.lam, link.mu, link.p
    u = mu / (s + mu)
    out = np.exp(-s / lam) / lam * (1.0 - p * (1.0 - u - lam * mu / (s + mu) ** 2))
    return _scalar_or_array(out)


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """PCG64 generator for stream ``stream`` of base seed ``seed``.

    Streams are split with ``SeedSequence(seed, spawn_key=(stream,))``, so a
    given (seed, stream) pair always yields the same sequence and distinct
    streams are statistically independent.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=(int(stream),))))


def _exponential(rng: np.random.Generator, mean: float, size):
    # inverse CDF on U in [0, 1): -mean * ln(1 - U)
    return -mean * np.log1p(-rng.random(size))


def sample_fading(omega_h: float, omega_g: float, rng: np.random.Generator, size=None) -> FadingSample:
    """Independent |h|^2 then |g|^2 draws, exponential with the given means."""
    _positive("omega_h", omega_h)
    _positive("omega_g", omega_g)
    h_sq = _exponential(rng, omega_h, size)
    g_sq = _exponential(rng, omega_g, size)
    return FadingSample(h_sq, g_sq)


def snr_from_fading(fading: FadingSample, sys: SystemParams):
    with np.errstate(divide="ignore"):
        cap = np.minimum(sys.gamma_max, sys.gamma_p / np.asarray(fading.g_sq))
    return cap * fading.h_sq


def sample_snr(omega_h: float, omega_g: float, sys: SystemParams, rng: np.random.Generator, size=None):
    """Draw gamma = min(gamma_max, gamma_p/|g|^2) |h|^2; scalar when ``size`` is None."""
    out = snr_from_fading(sample_fading(omega_h, omega_g, rng, size), sys)
    return _scalar_or_array(out)
