"""Slot-level simulation of ALSBR, CUBR and CBR.

Fading is drawn with :func:`alsbr.channel.sample_fading`; the source hop
uses RNG stream ``2*run + 0`` and the relay hop stream ``2*run + 1`` of
``cfg.seed``, so separate runs never share a generator.

The relay buffer is a fluid queue of bits.  In a relay slot the relay sends
``min(C_r, queue)``, so with ``X_n = C_s`` (source slot) or ``-C_r`` (relay
slot) the queue follows the Lindley recursion ``q_n = max(0, q_{n-1} + X_n)``,
which is evaluated in vectorised form chunk by chunk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .channel import NetworkGeometry, SystemParams, make_rng, sample_fading, snr_from_fading
from .errors import DomainError

_CHUNK = 1 << 18


@dataclass(frozen=True)
class SimulationConfig:
    """slots: simulated slots (frames for CUBR are ``slots // 2``).

    warmup_slots defaults to max(1% of slots, 1000), capped below ``slots``.
    Rates are averaged after the warm-up; the queue runs from empty at slot 0.
    """

    slots: int = 1_000_000
    seed: int = 2017
    warmup_slots: Optional[int] = None
    ccdf_grid: Optional[Sequence[float]] = None
    batches: int = 100
    run: int = 0

    def __post_init__(self):
        if int(self.slots) < 1:
            raise DomainError("slots must be >= 1")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise DomainError("seed must be a 64-bit unsigned integer")
        if self.warmup_slots is not None and not 0 <= self.warmup_slots < self.slots:
            raise DomainError("warmup_slots must lie in [0, slots)")
        if self.batches < 2:
            raise DomainError("batches must be >= 2")
        if self.run < 0:
            raise DomainError("run index must be >= 0")

    @property
    def warmup(self) -> int:
        if self.warmup_slots is not None:
            return int(self.warmup_slots)
        return min(max(self.slots // 100, 1000), self.slots - 1)


@dataclass
class BufferState:
    queued_bits: float = 0.0

    def __post_init__(self):
        if not self.queued_bits >= 0:
            raise DomainError("queue cannot be negative")


@dataclass(frozen=True)
class SimulationResult:
    """Time averages in bits/slot with batch-means standard errors.

    For CUBR and CBR only the rate fields are meaningful; queue fields are 0.
    queue_drift is the mean queue increment per slot after warm-up.
    """

    source_side_rate: float
    delivered_rate: float
    relay_side_rate: float
    mean_queue: float
    final_queue: float
    selection_fraction: float
    source_side_stderr: float
    delivered_stderr: float
    relay_side_stderr: float
    selection_stderr: float
    queue_drift: float
    queue_drift_stderr: float
    slots: int

    @property
    def rate(self) -> float:
        """The scheme's throughput estimate (the source-side rate for ALSBR)."""
        return self.source_side_rate

    @property
    def stderr(self) -> float:
        return self.source_side_stderr


def _capacities(omega_h, omega_g, sys, rng, size):
    return np.log2(1.0 + snr_from_fading(sample_fading(omega_h, omega_g, rng, size), sys))


def _hop_rngs(cfg):
    return make_rng(cfg.seed, 2 * cfg.run), make_rng(cfg.seed, 2 * cfg.run + 1)


class _BatchMeans:
    """Accumulate per-slot samples into equal-count batches."""

    def __init__(self, total, batches):
        self.total = total
        self.batches = min(batches, total)
        self.sums = None
        self.seen = 0

    def add(self, columns):
        n = columns.shape[1]
        idx = (np.arange(self.seen, self.seen + n) * self.batches) // self.total
        sums = np.stack([np.bincount(idx, weights=c, minlength=self.batches) for c in columns])
        self.sums = sums if self.sums is None else self.sums + sums
        self.seen += n

    def result(self):
        counts = np.bincount((np.arange(self.total) * self.batches) // self.total, minlength=self.batches)
        means = self.sums / counts
        overall = self.sums.sum(axis=1) / self.total
        if self.batches < 2:
            return overall, np.zeros_like(overall)
        err = means.std(axis=1, ddof=1) / math.sqrt(self.batches)
        return overall, err


def simulate_alsbr(geo: NetworkGeometry, sys: SystemParams, rho: float, cfg: SimulationConfig,
                   buffer: Optional[BufferState] = None) -> SimulationResult:
    """Run adaptive link selection with threshold rho for ``cfg.slots`` slots.

    The relay transmits when ``gamma_r / gamma_s >= rho``.  ``buffer`` (if
    given) supplies the initial queue and receives the final one.
    """
    if not (rho > 0) or math.isinf(rho):
        raise DomainError(f"rho must be finite and > 0, got {rho!r}")
    ohs, ohr, ogs, ogr = geo.gains(sys.alpha)
    rng_s, rng_r = _hop_rngs(cfg)
    warm = cfg.warmup
    post = cfg.slots - warm
    acc = _BatchMeans(post, cfg.batches)
    boundaries = (np.arange(acc.batches + 1) * post) // acc.batches + warm
    q_at = np.empty(acc.batches + 1)
    q = 0.0 if buffer is None else float(buffer.queued_bits)
    queue_sum = 0.0
    start = 0
    while start < cfg.slots:
        n = min(_CHUNK, cfg.slots - start)
        gs = snr_from_fading(sample_fading(ohs, ogs, rng_s, n), sys)
        gr = snr_from_fading(sample_fading(ohr, ogr, rng_r, n), sys)
        relay = gr >= rho * gs
        cs = np.log2(1.0 + gs)
        cr = np.log2(1.0 + gr)
        step = np.where(relay, -cr, cs)
        walk = np.cumsum(step)
        queue = walk - np.minimum(np.minimum.accumulate(walk), -q)
        prev = np.concatenate(([q], queue[:-1]))
        sent = np.where(relay, prev - queue, 0.0)

        # queue value after slot k is queue[k - start]; record batch boundaries
        for b, at in enumerate(boundaries):
            if start <= at - 1 < start + n:
                q_at[b] = queue[at - 1 - start]
            elif at == 0 and start == 0:
                q_at[b] = q

        lo = max(warm - start, 0)
        if lo < n:
            arrivals = np.where(relay, 0.0, cs)[lo:]
            acc.add(np.stack([arrivals, sent[lo:], np.where(relay, cr, 0.0)[lo:], relay[lo:].astype(float)]))
            queue_sum += float(queue[lo:].sum())
        q = float(queue[-1])
        start += n

    (src, dlv, rel, sel), (src_e, dlv_e, rel_e, sel_e) = acc.result()
    inc = np.diff(q_at) / np.diff(boundaries)
    drift = float((q_at[-1] - q_at[0]) / post)
    drift_e = float(inc.std(ddof=1) / math.sqrt(len(inc))) if len(inc) > 1 else 0.0
    if buffer is not None:
        buffer.queued_bits = q
    return SimulationResult(
        float(src), float(dlv), float(rel), queue_sum / post, q, float(sel),
        float(src_e), float(dlv_e), float(rel_e), float(sel_e), drift, drift_e, cfg.slots,
    )


def _rate_only(mean, err, slots):
    return SimulationResult(mean, mean, mean, 0.0, 0.0, 0.0, err, err, err, 0.0, 0.0, 0.0, slots)


def simulate_cubr(geo: NetworkGeometry, sys: SystemParams, cfg: SimulationConfig) -> SimulationResult:
    """Two-slot frames without buffering: the frame carries min(C_s, C_r) bits.

    ``cfg.slots // 2`` frames are drawn so that CUBR spends the same number of
    slots as the other schemes; the rate per slot is half the mean minimum.
    """
    frames = max(cfg.slots // 2, 2)
    ohs, ohr, ogs, ogr = geo.gains(sys.alpha)
    rng_s, rng_r = _hop_rngs(cfg)
    acc = _BatchMeans(frames, cfg.batches)
    start = 0
    while start < frames:
        n = min(_CHUNK, frames - start)
        cs = _capacities(ohs, ogs, sys, rng_s, n)
        cr = _capacities(ohr, ogr, sys, rng_r, n)
        acc.add((0.5 * np.minimum(cs, cr))[None, :])
        start += n
    (mean,), (err,) = acc.result()
    return _rate_only(float(mean), float(err), 2 * frames)


def simulate_cbr(geo: NetworkGeometry, sys: SystemParams, cfg: SimulationConfig) -> SimulationResult:
    """Half the smaller of the two empirical hop means over ``cfg.slots`` draws each.

    The standard error is that of the bottleneck hop's empirical mean.
    """
    ohs, ohr, ogs, ogr = geo.gains(sys.alpha)
    rng_s, rng_r = _hop_rngs(cfg)
    acc = _BatchMeans(cfg.slots, cfg.batches)
    start = 0
    while start < cfg.slots:
        n = min(_CHUNK, cfg.slots - start)
        cs = _capacities(ohs, ogs, sys, rng_s, n)
        cr = _capacities(ohr, ogr, sys, rng_r, n)
        acc.add(np.stack([cs, cr]))
        start += n
    (ms, mr), (es, er) = acc.result()
    if ms <= mr:
        return _rate_only(0.5 * float(ms), 0.5 * float(es), cfg.slots)
    return _rate_only(0.5 * float(mr), 0.5 * float(er), cfg.slots)


@dataclass(frozen=True)
class JointCcdfRow:
    x: float
    source_selected: float
    relay_selected: float
    source_stderr: float
    relay_stderr: float


def empirical_joint_ccdf(geo: NetworkGeometry, sys: SystemParams, rho: float, grid: Sequence[float],
                         cfg: SimulationConfig):
    """Frequencies of {d=0, gamma_s > x} and {d=1, gamma_r > x} over ``cfg.slots`` draws."""
    if not (rho > 0):
        raise DomainError("rho must be > 0")
    grid = np.asarray(grid if grid is not None else cfg.ccdf_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0 or np.any(grid < 0):
        raise DomainError("grid must be a nonempty list of x >= 0")
    ohs, ohr, ogs, ogr = geo.gains(sys.alpha)
    rng_s, rng_r = _hop_rngs(cfg)
    src = np.zeros(grid.size)
    rel = np.zeros(grid.size)
    start = 0
    while start < cfg.slots:
        n = min(_CHUNK, cfg.slots - start)
        gs = snr_from_fading(sample_fading(ohs, ogs, rng_s, n), sys)
        gr = snr_from_fading(sample_fading(ohr, ogr, rng_r, n), sys)
        relay = gr >= rho * gs
        gs0 = np.sort(gs[~relay])
        gr1 = np.sort(gr[relay])
        src += gs0.size - np.searchsorted(gs0, grid, side="right")
        rel += gr1.size - np.searchsorted(gr1, grid, side="right")
        start += n
    n = cfg.slots
    ps, pr = src / n, rel / n
    es, er = np.sqrt(ps * (1 - ps) / n), np.sqrt(pr * (1 - pr) / n)
    return [JointCcdfRow(float(x), float(a), float(b), float(c), float(d))
            for x, a, b, c, d in zip(grid, ps, pr, es, er)]
