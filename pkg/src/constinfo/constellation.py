"""Scalar constellation geometry, input distributions, and tail functions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

__all__ = [
    "Constellation",
    "InputDistribution",
    "mpam",
    "uniform_distribution",
    "avg_energy",
    "normalize_energy",
    "med",
    "med_pairs",
    "a_constant",
    "b_constant",
    "entropy",
    "q_function",
    "log_q_function",
    "g_function",
    "awgn_capacity",
    "db_to_snr",
    "snr_to_db",
]

# relative slack when deciding whether a gap attains the minimum distance
MED_RTOL = 1e-9


@dataclass(frozen=True)
class Constellation:
    """One-dimensional constellation with strictly increasing points.

    The number of points must be a power of two (not less than 2) so that
    every point can carry a binary label of ``bits`` digits.
    """

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 1:
            raise ValueError("constellation points must form a 1-D array")
        n = pts.size
        if n < 2 or n & (n - 1):
            raise ValueError("number of points must be a power of two, at least 2")
        if not np.all(np.isfinite(pts)):
            raise ValueError("constellation points must be finite")
        if np.any(np.diff(pts) <= 0.0):
            raise ValueError("constellation points must be strictly increasing")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    @property
    def size(self) -> int:
        return self.points.size

    @property
    def bits(self) -> int:
        return self.points.size.bit_length() - 1


@dataclass(frozen=True)
class InputDistribution:
    """Probability masses over constellation points, all strictly positive."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.array(self.probs, dtype=float)
        if p.ndim != 1:
            raise ValueError("probabilities must form a 1-D array")
        if not np.all(np.isfinite(p)) or np.any(p <= 0.0):
            raise ValueError("probabilities must be finite and strictly positive")
        if abs(float(p.sum()) - 1.0) > 1e-9:
            raise ValueError("probabilities must sum to 1 within 1e-9")
        p.flags.writeable = False
        object.__setattr__(self, "probs", p)

    @property
    def size(self) -> int:
        return self.probs.size


def mpam(m: int, delta: float = 1.0) -> Constellation:
    """Equally spaced 2^m-point amplitude constellation.

    Points run from -(M-1)*delta to (M-1)*delta in steps of 2*delta, so the
    minimum distance is 2*delta.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    if not delta > 0.0:
        raise ValueError("delta must be positive")
    count = 1 << m
    return Constellation((2.0 * np.arange(count) - (count - 1)) * float(delta))


def uniform_distribution(size: int) -> InputDistribution:
    return InputDistribution(np.full(size, 1.0 / size))


def avg_energy(c: Constellation, p: InputDistribution) -> float:
    """Average symbol energy sum_i p_i x_i^2."""
    return float(np.dot(p.probs, c.points * c.points))


def normalize_energy(c: Constellation, p: InputDistribution) -> Constellation:
    """Rescale the constellation to unit average energy under p."""
    return Constellation(c.points / math.sqrt(avg_energy(c, p)))


def med(c: Constellation) -> float:
    """Minimum Euclidean distance between constellation points."""
    return float(np.diff(c.points).min())


def med_pairs(c: Constellation) -> list[tuple[int, int]]:
    """Adjacent index pairs (i, i+1) whose gap attains the minimum distance.

    On a sorted axis only adjacent points can be at minimum distance; a gap
    counts when it is within relative tolerance 1e-9 of the smallest gap.
    """
    gaps = np.diff(c.points)
    d = float(gaps.min())
    hit = np.nonzero(gaps <= d * (1.0 + MED_RTOL))[0]
    return [(int(i), int(i) + 1) for i in hit]


def a_constant(c: Constellation) -> int:
    """Number of ordered point pairs at minimum distance."""
    return 2 * len(med_pairs(c))


def b_constant(c: Constellation, p: InputDistribution) -> float:
    """Distribution-weighted minimum-distance pair count.

    Sums sqrt(p_i p_j) over ordered minimum-distance pairs; equals
    a_constant(c) / M under the uniform distribution.
    """
    pr = p.probs
    return float(sum(2.0 * math.sqrt(pr[i] * pr[j]) for i, j in med_pairs(c)))


def entropy(p: InputDistribution) -> float:
    """Shannon entropy of p in nats."""
    return float(-np.dot(p.probs, np.log(p.probs)))


def q_function(x):
    """Gaussian tail probability Q(x) = P(Z > x) for standard normal Z."""
    out = 0.5 * special.erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))
    return float(out) if out.ndim == 0 else out


def log_q_function(x):
    """log Q(x), accurate far into the tail where Q itself underflows."""
    out = special.log_ndtr(-np.asarray(x, dtype=float))
    return float(out) if out.ndim == 0 else out


def g_function(x):
    """Gaussian tail surrogate exp(-x^2/2) / (x sqrt(2 pi)), defined for x > 0.

    Upper-bounds Q(x) and matches it asymptotically as x grows.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0):
        raise ValueError("g_function requires x > 0")
    out = np.exp(-0.5 * x * x) / (x * math.sqrt(2.0 * math.pi))
    return float(out) if out.ndim == 0 else out


def awgn_capacity(gamma) -> float:
    """Capacity 0.5 * log(1 + gamma) of the scalar Gaussian channel, in nats."""
    gamma = np.asarray(gamma, dtype=float)
    if np.any(gamma < 0.0):
        raise ValueError("snr must be non-negative")
    out = 0.5 * np.log1p(gamma)
    return float(out) if out.ndim == 0 else out


def db_to_snr(db):
    out = 10.0 ** (np.asarray(db, dtype=float) / 10.0)
    return float(out) if out.ndim == 0 else out


def snr_to_db(rho):
    rho = np.asarray(rho, dtype=float)
    if np.any(rho <= 0.0):
        raise ValueError("snr must be positive to express in dB")
    out = 10.0 * np.log10(rho)
    return float(out) if out.ndim == 0 else out
