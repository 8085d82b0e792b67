"""Monte Carlo estimators used to cross-validate the analytic paths.

The decision rule here compares posterior scores sample by sample and never
touches the interval-based machinery in exact.py, so agreement between the
two is a meaningful check. Streams are chunked with a counter-keyed Philox
generator: results depend only on (seed, samples), not on chunk scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .constellation import Constellation, InputDistribution
from .labeling import Labeling, _POPCOUNT

__all__ = [
    "SimConfig",
    "EstimateWithError",
    "simulate_sep",
    "simulate_bep",
    "simulate_mi",
    "simulate_mmse",
]

_CHUNK = 1 << 16


@dataclass(frozen=True)
class SimConfig:
    """Sample budget, seed, and snr of one simulation run."""

    samples: int
    seed: int
    rho: float

    def __post_init__(self):
        if self.samples < 2:
            raise ValueError("need at least 2 samples")
        if not (math.isfinite(self.rho) and self.rho >= 0.0):
            raise ValueError("rho must be a finite non-negative snr")


@dataclass(frozen=True)
class EstimateWithError:
    estimate: float
    standard_error: float
    samples: int


def _run(c: Constellation, p: InputDistribution, cfg: SimConfig, per_sample):
    """Drive the chunked simulation; per_sample maps draws to sample values."""
    if p.size != c.size:
        raise ValueError("distribution size must match the constellation size")
    x = c.points
    lp = np.log(p.probs)
    cum = np.cumsum(p.probs)
    root = math.sqrt(cfg.rho)
    total = 0.0
    total_sq = 0.0
    done = 0
    chunk = 0
    while done < cfg.samples:
        take = min(_CHUNK, cfg.samples - done)
        rng = np.random.Generator(np.random.Philox(key=[cfg.seed, chunk]))
        u = rng.random(take)
        z = rng.standard_normal(take)
        sym = np.minimum(np.searchsorted(cum, u, side="right"), c.size - 1)
        y = root * x[sym] + z
        score = lp[None, :] - 0.5 * (y[:, None] - root * x[None, :]) ** 2
        vals = per_sample(sym, y, score)
        total += float(vals.sum())
        total_sq += float(np.dot(vals, vals))
        done += take
        chunk += 1
    n = cfg.samples
    mean = total / n
    var = max(total_sq - n * mean * mean, 0.0) / (n - 1)
    return EstimateWithError(mean, math.sqrt(var / n), n)


def simulate_sep(
    c: Constellation, p: InputDistribution, cfg: SimConfig
) -> EstimateWithError:
    """Symbol error rate of MAP decisions (argmax posterior, lowest index wins ties)."""

    def per_sample(sym, y, score):
        return (np.argmax(score, axis=1) != sym).astype(float)

    return _run(c, p, cfg, per_sample)


def simulate_bep(
    c: Constellation, p: InputDistribution, lab: Labeling, cfg: SimConfig
) -> EstimateWithError:
    """Average fraction of label bits flipped by MAP symbol decisions."""
    if lab.size != c.size:
        raise ValueError("labeling size must match the constellation size")
    codes = lab.codes
    bits = lab.bits

    def per_sample(sym, y, score):
        dec = np.argmax(score, axis=1)
        return _POPCOUNT[codes[sym] ^ codes[dec]].astype(float) / bits

    return _run(c, p, cfg, per_sample)


def simulate_mi(
    c: Constellation, p: InputDistribution, cfg: SimConfig
) -> EstimateWithError:
    """Mutual information in nats via the information-density sample mean."""
    lp = np.log(p.probs)

    def per_sample(sym, y, score):
        dens = special.logsumexp(score, axis=1)
        return score[np.arange(sym.size), sym] - lp[sym] - dens

    return _run(c, p, cfg, per_sample)


def simulate_mmse(
    c: Constellation, p: InputDistribution, cfg: SimConfig
) -> EstimateWithError:
    """Mean square error of the posterior-mean estimator."""
    x = c.points

    def per_sample(sym, y, score):
        w = np.exp(score - special.logsumexp(score, axis=1, keepdims=True))
        xhat = w @ x
        err = x[sym] - xhat
        return err * err

    return _run(c, p, cfg, per_sample)
