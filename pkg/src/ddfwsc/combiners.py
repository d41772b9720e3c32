"""Destination-side decision rules: SC, the two weighted SC variants, and LAR."""

from __future__ import annotations

from enum import Enum

import numpy as np

__all__ = [
    "SchemeId",
    "combine_wsc",
    "combine_sc",
    "combine_lar",
    "beta_wsc2",
    "lar_power_factor",
    "wsc_bits",
    "lar_bits",
]


class SchemeId(str, Enum):
    SC = "sc"
    WSC1 = "wsc1"
    WSC2 = "wsc2"
    LAR = "lar"


def _sign(x):
    return np.where(np.asarray(x) >= 0, 1, -1)


def combine_wsc(xi0: float, xi2: float, beta: float) -> tuple[float, int]:
    """Weighted selection: keep the direct branch unless beta*|xi2| beats |xi0|.

    Ties go to the direct link (it carries no error propagation).
    """
    if beta <= 0:
        raise ValueError(f"beta must be > 0, got {beta}")
    selected = xi0 if abs(xi0) >= beta * abs(xi2) else xi2
    return selected, (1 if selected >= 0 else -1)


def combine_sc(xi0: float, xi2: float) -> tuple[float, int]:
    """Conventional selection combining: pick the larger-magnitude branch."""
    return combine_wsc(xi0, xi2, 1.0)


def combine_lar(xi0: float, xiL: float) -> int:
    """Linear fusion of the direct and LAR relay decision variables."""
    return 1 if xi0 + xiL >= 0 else -1


def beta_wsc2(gamma1: float, gamma_bar2: float) -> float:
    """Adaptive selection weight from the instantaneous source-relay SNR.

    gamma1 = 0 legitimately yields beta = 0, which deterministically
    selects the direct link.
    """
    if gamma_bar2 <= 0:
        raise ValueError(f"gamma_bar2 must be > 0, got {gamma_bar2}")
    if gamma1 < 0:
        raise ValueError(f"gamma1 must be >= 0, got {gamma1}")
    return min(1.0, gamma1 / gamma_bar2)


def lar_power_factor(gamma1: float, gamma_bar2: float) -> float:
    """Relay power scale used by link-adaptive relaying; same scalar as beta_wsc2."""
    return beta_wsc2(gamma1, gamma_bar2)


def wsc_bits(xi0: np.ndarray, xi2: np.ndarray, beta: float) -> np.ndarray:
    """Vectorized weighted-selection decisions for a whole block; beta = 0 allowed."""
    if beta < 0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    use_direct = np.abs(xi0) >= beta * np.abs(xi2)
    return _sign(np.where(use_direct, xi0, xi2))


def lar_bits(xi0: np.ndarray, xiL: np.ndarray) -> np.ndarray:
    """Vectorized LAR decisions for a whole block."""
    return _sign(xi0 + xiL)
