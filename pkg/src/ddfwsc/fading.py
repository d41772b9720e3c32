"""Seeded Rayleigh block-fading gains and complex Gaussian noise.

Streams are built on numpy's SeedSequence/Philox machinery: a (seed,
stream_id) pair always yields the same sample sequence, and distinct
stream ids give statistically independent streams.  One stream per
fading block keeps parallel simulation bit-exact regardless of how
blocks are scheduled across workers.
"""

from __future__ import annotations

import numpy as np

__all__ = ["derive_stream", "sample_complex_gaussian", "sample_fading_block"]


def derive_stream(seed: int, stream_id: int) -> np.random.Generator:
    """Return an independent generator for (seed, stream_id).

    The pair is fed to SeedSequence, so the mapping is deterministic and
    independent of the order in which streams are created.
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((seed, stream_id))))


def sample_complex_gaussian(rng: np.random.Generator, variance: float, size=None) -> np.ndarray | complex:
    """Draw circularly-symmetric complex Gaussians with the given total variance.

    Each of the real and imaginary parts carries variance/2.
    """
    if variance < 0:
        raise ValueError(f"variance must be >= 0, got {variance}")
    if variance == 0:
        return 0j if size is None else np.zeros(size, dtype=complex)
    scale = np.sqrt(variance / 2.0)
    z = rng.normal(0.0, scale, size=size) + 1j * rng.normal(0.0, scale, size=size)
    return z


def sample_fading_block(rng: np.random.Generator, sigma_sq) -> tuple[complex, complex, complex]:
    """Draw one (h0, h1, h2) fading triple; each gain is constant over the block."""
    s0, s1, s2 = sigma_sq
    h0 = sample_complex_gaussian(rng, s0)
    h1 = sample_complex_gaussian(rng, s1)
    h2 = sample_complex_gaussian(rng, s2)
    return h0, h1, h2
