"""AWGN/BPSK channel simulation with a counter-based, seekable RNG.

All-zero codewords are assumed throughout (linear code + symmetric channel),
so the transmitted word is all +1 under unit-energy BPSK and a received block
is y = 1 + sigma * g with g standard normal.

Reproducibility contract: sample (lane, position) is a pure function of
(seed, lane, position).  Lanes are independent Philox streams carved out of
the 256-bit counter space (key = seed, counter = lane * 2^64 + word/4, one
uint64 word per sample), and normals come from the inverse CDF, which
consumes exactly one word per sample.  Any block of any lane can therefore be
regenerated in isolation: adding lanes, splitting work across processes, or
re-running a single batch never changes the values drawn elsewhere.  The
generator choice (Philox4x64 + inverse CDF) is part of the package contract
and must not change between releases.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np
from scipy.special import ndtri

__all__ = ["ChannelConfig", "ebn0_to_sigma", "simulate_block", "lane_normals"]


@dataclasses.dataclass(frozen=True)
class ChannelConfig:
    """AWGN channel operating point.

    rate is the code rate used for the Eb/N0 -> sigma conversion; gamma is
    the number of lanes drawn per block.
    """

    ebn0_db: float
    rate: float
    seed: int
    gamma: int = 32

    def __post_init__(self):
        if not 0.0 < self.rate <= 1.0:
            raise ValueError(f"rate must be in (0, 1], got {self.rate}")
        if self.gamma < 1:
            raise ValueError("gamma must be positive")

    @property
    def sigma(self) -> float:
        return ebn0_to_sigma(self.ebn0_db, self.rate)


def ebn0_to_sigma(ebn0_db: float, rate: float) -> float:
    """Noise standard deviation for unit-energy BPSK at a given Eb/N0.

    E_s = 1 and E_b = E_s / rate, so sigma^2 = 1 / (2 * rate * 10^(dB/10)).
    """
    return math.sqrt(1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0)))


def lane_normals(seed: int, lane: int, start: int, count: int) -> np.ndarray:
    """Standard normal samples at positions start..start+count-1 of a lane.

    Pure function of (seed, lane, position): position k of lane l maps to
    64-bit word k of the Philox stream keyed by seed at counter offset
    l * 2^64, and the word maps to a normal via the inverse CDF.
    """
    if lane < 0 or start < 0:
        raise ValueError("lane and start must be non-negative")
    first_counter, offset = divmod(start, 4)  # Philox emits 4 words per counter
    bg = np.random.Philox(key=seed, counter=(lane << 64) + first_counter)
    words = np.random.Generator(bg).integers(
        0, 2**64, dtype=np.uint64, size=offset + count, endpoint=False
    )[offset:]
    # strictly inside (0, 1): top 53 bits, centered on the representable grid
    u = ((words >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53
    return ndtri(u)


def simulate_block(cfg: ChannelConfig, n: int, *, lane_offset: int = 0,
                   start: int = 0) -> np.ndarray:
    """Received values for gamma all-zero codewords of length n.

    Parameters
    ----------
    cfg : ChannelConfig
    n : int
        Symbols per lane.
    lane_offset : int
        First lane index; a campaign gives every batch/stream its own lane
        range so workers can draw independently.
    start : int
        First sample position within each lane (streaming decoders hand out
        successive frames of the same lanes).

    Returns
    -------
    ndarray, shape (gamma, n)
        y = 1 + sigma * g.
    """
    sigma = cfg.sigma
    out = np.empty((cfg.gamma, n))
    for g in range(cfg.gamma):
        out[g] = 1.0 + sigma * lane_normals(cfg.seed, lane_offset + g, start, n)
    return out
