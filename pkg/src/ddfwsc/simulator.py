"""Monte Carlo harness: paired per-block scheme evaluation with early stopping.

Every block is generated from its own (seed, block_index) stream, so
results are bit-exact for a fixed configuration regardless of how many
workers are used; workers only split the block range.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import analysis
from .analysis import ClosedFormContext
from .combiners import SchemeId, lar_bits, wsc_bits
from .fading import derive_stream
from .link import SystemParams, simulate_block

__all__ = ["SimConfig", "BerEstimate", "SweepRecord", "run_simulation", "sweep", "wilson_interval"]

_CHUNK = 512
_SWEEP_SEED_STRIDE = 10 ** 9


@dataclass(frozen=True)
class SimConfig:
    params: SystemParams
    schemes: tuple[SchemeId, ...] = (SchemeId.SC, SchemeId.WSC2)
    beta_wsc1: float = 1.0
    max_blocks: int = 100_000
    min_errors: int = 200
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.max_blocks < 1:
            raise ValueError("max_blocks must be >= 1")
        if self.min_errors < 0:
            raise ValueError("min_errors must be >= 0")
        if self.beta_wsc1 <= 0:
            raise ValueError("beta_wsc1 must be > 0")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if not self.schemes:
            raise ValueError("at least one scheme is required")


@dataclass(frozen=True)
class BerEstimate:
    scheme: SchemeId
    bit_errors: int
    bits: int
    ber: float
    ci95_low: float
    ci95_high: float


@dataclass(frozen=True)
class SweepRecord:
    axis_value: float
    estimates: tuple[BerEstimate, ...]
    analytic: dict
    asymptotic: float | None = None


def wilson_interval(errors: int, n: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """95% Wilson score interval for an error proportion."""
    if n == 0:
        return 0.0, 1.0
    p = errors / n
    denom = 1.0 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    half = (z / denom) * math.sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n))
    return max(0.0, center - half), min(1.0, center + half)


def _block_errors(params: SystemParams, schemes, beta_wsc1: float, seed: int, block_index: int) -> np.ndarray:
    obs = simulate_block(params, derive_stream(seed, block_index))
    gbar2 = params.gamma_bars[2]
    gamma1 = obs.gamma1_exact if params.snr_mode == "exact" else obs.gamma1_est
    out = np.empty(len(schemes), dtype=np.int64)
    for j, scheme in enumerate(schemes):
        if scheme is SchemeId.SC:
            bits = wsc_bits(obs.xi0, obs.xi2, 1.0)
        elif scheme is SchemeId.WSC1:
            bits = wsc_bits(obs.xi0, obs.xi2, beta_wsc1)
        elif scheme is SchemeId.WSC2:
            # A dead relay link (gbar2 = 0) degenerates to direct-only selection.
            beta = min(1.0, gamma1 / gbar2) if gbar2 > 0 else 0.0
            bits = wsc_bits(obs.xi0, obs.xi2, beta)
        elif scheme is SchemeId.LAR:
            bits = lar_bits(obs.xi0, obs.xiL)
        else:  # pragma: no cover
            raise ValueError(f"unknown scheme {scheme}")
        out[j] = int(np.count_nonzero(bits != obs.tx_bits))
    return out


def _chunk_errors(params: SystemParams, schemes, beta_wsc1: float, seed: int,
                  start: int, count: int) -> np.ndarray:
    """Per-block error counts for blocks [start, start+count), shape (count, n_schemes)."""
    out = np.empty((count, len(schemes)), dtype=np.int64)
    for i in range(count):
        out[i] = _block_errors(params, schemes, beta_wsc1, seed, start + i)
    return out


def run_simulation(cfg: SimConfig) -> list[BerEstimate]:
    """Simulate until every scheme has min_errors errors or max_blocks is hit.

    All schemes are evaluated on the same block realizations.  Early
    stopping is applied at block granularity on the deterministic
    block-index ordering, so the result never depends on chunking or
    worker count.
    """
    schemes = tuple(cfg.schemes)
    L = cfg.params.block_len
    totals = np.zeros(len(schemes), dtype=np.int64)
    per_block: list[np.ndarray] = []
    blocks_used = 0

    executor = ProcessPoolExecutor(cfg.workers) if cfg.workers > 1 else None
    try:
        start = 0
        while start < cfg.max_blocks:
            n = min(_CHUNK * cfg.workers, cfg.max_blocks - start)
            if executor is None:
                chunk = _chunk_errors(cfg.params, schemes, cfg.beta_wsc1, cfg.seed, start, n)
            else:
                bounds = np.linspace(0, n, cfg.workers + 1, dtype=int)
                futures = [
                    executor.submit(_chunk_errors, cfg.params, schemes, cfg.beta_wsc1,
                                    cfg.seed, start + int(a), int(b - a))
                    for a, b in zip(bounds[:-1], bounds[1:]) if b > a
                ]
                chunk = np.concatenate([f.result() for f in futures], axis=0)
            cum = totals + np.cumsum(chunk, axis=0)
            done = np.all(cum >= cfg.min_errors, axis=1)
            if cfg.min_errors > 0 and done.any():
                stop_at = int(np.argmax(done)) + 1
                totals = cum[stop_at - 1]
                blocks_used = start + stop_at
                break
            totals = cum[-1]
            start += n
            blocks_used = start
    finally:
        if executor is not None:
            executor.shutdown()

    bits = blocks_used * L
    results = []
    for j, scheme in enumerate(schemes):
        errs = int(totals[j])
        lo, hi = wilson_interval(errs, bits)
        results.append(BerEstimate(scheme=scheme, bit_errors=errs, bits=bits,
                                   ber=errs / bits, ci95_low=lo, ci95_high=hi))
    return results


def _analytic_bers(params: SystemParams, schemes, beta_wsc1: float) -> dict:
    """Closed-form ABER per scheme where one exists (SC, WSC1, WSC2)."""
    g0, g1, g2 = params.gamma_bars
    ctx = ClosedFormContext(g0, g1, g2)
    out = {}
    for scheme in schemes:
        try:
            if scheme is SchemeId.SC:
                out[scheme] = analysis.aber_wsc1(1.0, ctx)
            elif scheme is SchemeId.WSC1:
                out[scheme] = analysis.aber_wsc1(beta_wsc1, ctx)
            elif scheme is SchemeId.WSC2:
                out[scheme] = analysis.aber_wsc2(ctx)
        except ValueError:
            pass
    return out


def sweep(cfg: SimConfig, axis: str, values) -> list[SweepRecord]:
    """One run_simulation per axis value (snr_db or beta), with analytic columns.

    Seeds are offset per axis index so points are independent yet each
    point stays individually reproducible.
    """
    values = list(values)
    if not values:
        raise ValueError("values must be nonempty")
    if any(b >= a for a, b in zip(values[1:], values[:-1])):
        raise ValueError("values must be strictly increasing")
    if axis not in ("snr_db", "beta"):
        raise ValueError(f"axis must be 'snr_db' or 'beta', got {axis!r}")

    records = []
    symmetric = len(set(cfg.params.sigma_sq)) == 1 and cfg.params.sigma_sq[0] == 1.0
    for idx, value in enumerate(values):
        if axis == "snr_db":
            params = replace(cfg.params, p0_over_n0_db=value)
            point_cfg = replace(cfg, params=params, seed=cfg.seed + _SWEEP_SEED_STRIDE * idx)
            beta1 = cfg.beta_wsc1
        else:
            if value <= 0:
                raise ValueError("beta values must be > 0")
            params = cfg.params
            point_cfg = replace(cfg, beta_wsc1=value, seed=cfg.seed + _SWEEP_SEED_STRIDE * idx)
            beta1 = value
        estimates = tuple(run_simulation(point_cfg))
        analytic = _analytic_bers(params, cfg.schemes, beta1)
        asym = None
        if symmetric and SchemeId.WSC2 in cfg.schemes:
            asym = analysis.aber_asymptotic_wsc2(params.p0)
        records.append(SweepRecord(axis_value=value, estimates=estimates,
                                   analytic=analytic, asymptotic=asym))
    return records
