"""Exact information metrics and error rates on the scalar Gaussian channel.

Quadrature-based quantities (mutual information, conditional entropy, MMSE,
generalized mutual information and its bit-level MMSE companion) share one
Gauss-Hermite kernel. Each vanishing quantity also has a log-domain variant
that stays finite long after the linear value underflows; the closed-form
error rates (symbol and bit) are evaluated from MAP decision intervals and
are accurate at any depth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special

from .constellation import Constellation, InputDistribution, entropy
from .labeling import Labeling, BitProbabilities, induced_distribution, subconstellation

__all__ = [
    "DEFAULT_NODES",
    "QuadratureSpec",
    "DecisionRegions",
    "decision_regions",
    "adjacent_thresholds",
    "conditional_mean",
    "mi_exact",
    "conditional_entropy_exact",
    "log_conditional_entropy_exact",
    "mmse_exact",
    "log_mmse_exact",
    "sep_exact",
    "log_sep_exact",
    "bep_exact",
    "log_bep_exact",
    "gmi_exact",
    "bicm_gmi",
    "gmi_gap_exact",
    "log_gmi_gap_exact",
    "bicm_mmse_exact",
    "bicm_mmse",
    "log_bicm_mmse_exact",
    "k_mi",
    "k_mmse",
    "llr",
]

DEFAULT_NODES = 300


def _log_hermite_weights(t: np.ndarray, n: int) -> np.ndarray:
    # Christoffel numbers: w_i = 1 / sum_{k<n} p_k(t_i)^2 with p_k orthonormal
    # against exp(-t^2). Evaluated with running rescaling so the log weight
    # stays finite where the linear weight underflows (|t| beyond ~27).
    q_prev = np.zeros_like(t)
    q_cur = np.full_like(t, math.pi ** -0.25)
    scale = np.zeros_like(t)
    acc = q_cur**2
    for k in range(1, n):
        q_next = t * math.sqrt(2.0 / k) * q_cur - math.sqrt((k - 1.0) / k) * q_prev
        q_prev, q_cur = q_cur, q_next
        mag = np.maximum(np.abs(q_cur), np.abs(q_prev))
        big = mag > 1e100
        if np.any(big):
            f = mag[big]
            q_cur[big] /= f
            q_prev[big] /= f
            acc[big] /= f * f
            scale[big] += np.log(f)
        acc += q_cur**2
    return -(np.log(acc) + 2.0 * scale)


@lru_cache(maxsize=16)
def _hermite_rule(n: int):
    t, w = special.roots_hermite(n)
    lw = _log_hermite_weights(t, n)
    for arr in (t, w, lw):
        arr.flags.writeable = False
    return t, w, lw


@dataclass(frozen=True)
class QuadratureSpec:
    """Gauss-Hermite rule (weight exp(-t^2)) with cached nodes and weights."""

    nodes: int = DEFAULT_NODES

    def __post_init__(self):
        if self.nodes < 2:
            raise ValueError("quadrature needs at least 2 nodes")

    @property
    def abscissae(self) -> np.ndarray:
        return _hermite_rule(self.nodes)[0]

    @property
    def weights(self) -> np.ndarray:
        return _hermite_rule(self.nodes)[1]

    @property
    def log_weights(self) -> np.ndarray:
        return _hermite_rule(self.nodes)[2]


def _check_inputs(c: Constellation, p: InputDistribution, rho, allow_zero=True):
    if p.size != c.size:
        raise ValueError("distribution size must match the constellation size")
    rho = float(rho)
    if math.isnan(rho) or rho < 0.0 or (rho == 0.0 and not allow_zero):
        raise ValueError("rho must be a positive snr")
    return rho


def _atilde(c: Constellation, p: InputDistribution, rho: float, t: np.ndarray):
    # (M, M, T) log-domain kernel: entry (i, j, t) is
    # log p_j - sqrt(2 rho) t delta_ij - rho delta_ij^2 / 2, delta_ij = x_i - x_j
    delta = c.points[:, None] - c.points[None, :]
    lp = np.log(p.probs)
    drift = lp[None, :, None] - 0.5 * rho * (delta * delta)[:, :, None]
    return drift - math.sqrt(2.0 * rho) * delta[:, :, None] * t[None, None, :]


def _quad(quad: QuadratureSpec | None) -> QuadratureSpec:
    return quad if quad is not None else QuadratureSpec()


def mi_exact(
    c: Constellation,
    p: InputDistribution,
    rho,
    quad: QuadratureSpec | None = None,
) -> float:
    """Mutual information I(X; Y) in nats at snr rho."""
    rho = _check_inputs(c, p, rho)
    quad = _quad(quad)
    a = _atilde(c, p, rho, quad.abscissae)
    dens = special.logsumexp(a, axis=1)  # (M, T)
    per_symbol = -(dens @ quad.weights) / math.sqrt(math.pi)
    return float(np.dot(p.probs, per_symbol))


def _log_softplus(s: np.ndarray) -> np.ndarray:
    # log(log(1 + e^s)) without overflow on either side
    out = np.empty_like(s)
    hi = s > 36.0
    lo = s < -36.0
    mid = ~(hi | lo)
    out[hi] = np.log(s[hi])
    out[lo] = s[lo]
    out[mid] = np.log(np.log1p(np.exp(s[mid])))
    return out


def log_conditional_entropy_exact(
    c: Constellation,
    p: InputDistribution,
    rho,
    quad: QuadratureSpec | None = None,
) -> float:
    """log H(X | Y), in a cancellation-free form.

    The integrand log(1 + sum_{j != i} ...) is kept in log domain throughout,
    so the result stays meaningful when H(X|Y) is far below the smallest
    normal float; the entropy-minus-MI route dies around 1e-17.
    """
    rho = _check_inputs(c, p, rho)
    quad = _quad(quad)
    t, lw = quad.abscissae, quad.log_weights
    lp = np.log(p.probs)
    a = _atilde(c, p, rho, t)
    m = c.size
    a[np.arange(m), np.arange(m), :] = -np.inf
    s = special.logsumexp(a, axis=1) - lp[:, None]
    combined = lp[:, None] + lw[None, :] + _log_softplus(s)
    return float(special.logsumexp(combined) - 0.5 * math.log(math.pi))


def conditional_entropy_exact(
    c: Constellation,
    p: InputDistribution,
    rho,
    quad: QuadratureSpec | None = None,
) -> float:
    """Conditional entropy H(X | Y) in nats."""
    return math.exp(log_conditional_entropy_exact(c, p, rho, quad))


def log_mmse_exact(
    c: Constellation,
    p: InputDistribution,
    rho,
    quad: QuadratureSpec | None = None,
) -> float:
    """log of the minimum mean square error of estimating X from Y."""
    rho = _check_inputs(c, p, rho)
    quad = _quad(quad)
    t, lw = quad.abscissae, quad.log_weights
    lp = np.log(p.probs)
    a = _atilde(c, p, rho, t)
    delta = c.points[:, None] - c.points[None, :]
    den = special.logsumexp(a, axis=1)
    num, _ = special.logsumexp(a, axis=1, b=delta[:, :, None], return_sign=True)
    combined = lp[:, None] + lw[None, :] + 2.0 * (num - den)
    return float(special.logsumexp(combined) - 0.5 * math.log(math.pi))


def mmse_exact(
    c: Constellation,
    p: InputDistribution,
    rho,
    quad: QuadratureSpec | None = None,
) -> float:
    """Minimum mean square error E[(X - E[X|Y])^2] at snr rho."""
    return math.exp(log_mmse_exact(c, p, rho, quad))


def conditional_mean(c: Constellation, p: InputDistribution, rho, y):
    """Posterior mean E[X | Y = y] for scalar or array y."""
    rho = _check_inputs(c, p, rho)
    y = np.asarray(y, dtype=float)
    sc = np.log(p.probs) - 0.5 * (y[..., None] - math.sqrt(rho) * c.points) ** 2
    w = np.exp(sc - special.logsumexp(sc, axis=-1, keepdims=True))
    out = w @ c.points
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class DecisionRegions:
    """MAP decision intervals [lower_i, upper_i) per symbol.

    ``empty[i]`` marks symbols that are never decided. ``degenerate`` is set
    at rho = 0, where the observation carries no information and the most
    probable symbol (lowest index on ties) takes the whole line. Non-empty
    intervals tile the real line in symbol order and share endpoints exactly.
    """

    lower: np.ndarray
    upper: np.ndarray
    empty: np.ndarray
    degenerate: bool = False


def decision_regions(c: Constellation, p: InputDistribution, rho) -> DecisionRegions:
    """MAP decision intervals for observing Y = sqrt(rho) X + Z."""
    rho = _check_inputs(c, p, rho)
    m = c.size
    lower = np.zeros(m)
    upper = np.zeros(m)
    empty = np.ones(m, dtype=bool)
    if rho == 0.0:
        win = int(np.argmax(p.probs))
        lower[win], upper[win] = -math.inf, math.inf
        empty[win] = False
        return DecisionRegions(lower, upper, empty, degenerate=True)

    # upper envelope of the per-symbol affine scores
    #   score_i(y) = sqrt(rho) x_i y + (log p_i - rho x_i^2 / 2);
    # slopes increase strictly with i, so the surviving symbols and their
    # pairwise crossings give the regions directly, with shared endpoints.
    slope = math.sqrt(rho) * c.points
    icept = np.log(p.probs) - 0.5 * rho * c.points * c.points
    idx: list[int] = []
    start: list[float] = []
    for j in range(m):
        cross = -math.inf
        while idx:
            i = idx[-1]
            cross = (icept[i] - icept[j]) / (slope[j] - slope[i])
            if cross <= start[-1]:
                idx.pop()
                start.pop()
            else:
                break
        idx.append(j)
        start.append(cross if idx[:-1] else -math.inf)
    for pos, i in enumerate(idx):
        lower[i] = start[pos]
        upper[i] = start[pos + 1] if pos + 1 < len(idx) else math.inf
        empty[i] = False
    return DecisionRegions(lower, upper, empty)


def adjacent_thresholds(c: Constellation, p: InputDistribution, rho) -> np.ndarray:
    """Pairwise MAP thresholds between consecutive symbols (M-1 values)."""
    rho = _check_inputs(c, p, rho, allow_zero=False)
    x = c.points
    lp = np.log(p.probs)
    num = lp[:-1] - lp[1:]
    return num / (math.sqrt(rho) * (x[1:] - x[:-1])) + math.sqrt(rho) * (
        x[1:] + x[:-1]
    ) / 2.0


def _log1mexp(u: float) -> float:
    # log(1 - e^u) for u <= 0
    if u >= 0.0:
        return -math.inf
    if u > -math.log(2.0):
        return math.log(-math.expm1(u))
    return math.log1p(-math.exp(u))


def _log_gauss_interval(a: float, b: float) -> float:
    # log P(a <= Z < b), stable in both tails; requires a < b
    if a >= 0.0:
        la, lb = special.log_ndtr(-a), special.log_ndtr(-b)
        return float(la + _log1mexp(lb - la))
    if b <= 0.0:
        la, lb = special.log_ndtr(a), special.log_ndtr(b)
        return float(lb + _log1mexp(la - lb))
    return float(math.log(special.ndtr(b) - special.ndtr(a)))


def log_sep_exact(c: Constellation, p: InputDistribution, rho) -> float:
    """log of the symbol error probability under MAP decisions."""
    rho = _check_inputs(c, p, rho)
    reg = decision_regions(c, p, rho)
    mu = math.sqrt(rho) * c.points
    lp = np.log(p.probs)
    terms = []
    for i in range(c.size):
        if reg.empty[i]:
            terms.append(lp[i])  # never decided: errs with probability 1
            continue
        left = special.log_ndtr(reg.lower[i] - mu[i])
        right = special.log_ndtr(mu[i] - reg.upper[i])
        terms.append(lp[i] + np.logaddexp(left, right))
    return float(special.logsumexp(terms))


def sep_exact(c: Constellation, p: InputDistribution, rho) -> float:
    """Symbol error probability of the MAP decision rule."""
    return math.exp(log_sep_exact(c, p, rho))


def log_bep_exact(
    c: Constellation, p: InputDistribution, lab: Labeling, rho
) -> float:
    """log of the average bit error probability under MAP symbol decisions."""
    rho = _check_inputs(c, p, rho)
    if lab.size != c.size:
        raise ValueError("labeling size must match the constellation size")
    reg = decision_regions(c, p, rho)
    mu = math.sqrt(rho) * c.points
    lp = np.log(p.probs)
    codes = lab.codes
    terms = []
    for i in range(c.size):
        for j in range(c.size):
            if reg.empty[j]:
                continue
            wrong = int(bin(int(codes[i]) ^ int(codes[j])).count("1"))
            if wrong == 0:
                continue
            li = _log_gauss_interval(reg.lower[j] - mu[i], reg.upper[j] - mu[i])
            terms.append(lp[i] + math.log(wrong) + li)
    if not terms:
        return -math.inf
    return float(special.logsumexp(terms) - math.log(lab.bits))


def bep_exact(c: Constellation, p: InputDistribution, lab: Labeling, rho) -> float:
    """Average bit error probability of MAP symbol decisions."""
    return math.exp(log_bep_exact(c, p, lab, rho))


def _sub_parts(c: Constellation, p: InputDistribution, lab: Labeling):
    # (mass, sub-constellation, sub-distribution) per bit position and value
    for k in range(1, lab.bits + 1):
        for b in (0, 1):
            idx = [i - 1 for i in subconstellation(lab, k, b).indices]
            mass = float(p.probs[idx].sum())
            if len(idx) == 1:
                yield k, b, mass, None, None
            else:
                sub_c = Constellation(c.points[idx])
                sub_p = InputDistribution(p.probs[idx] / mass)
                yield k, b, mass, sub_c, sub_p


def gmi_exact(
    c: Constellation,
    p: InputDistribution,
    lab: Labeling,
    rho,
    quad: QuadratureSpec | None = None,
) -> float:
    """Sum of per-bit mutual informations against the channel output, in nats.

    This is the rate of a bit-metric decoder that treats the label bits as
    independent; it never exceeds mi_exact for the same symbol distribution.
    """
    rho = _check_inputs(c, p, rho)
    if lab.size != c.size:
        raise ValueError("labeling size must match the constellation size")
    quad = _quad(quad)
    total = lab.bits * mi_exact(c, p, rho, quad)
    for _k, _b, mass, sub_c, sub_p in _sub_parts(c, p, lab):
        if sub_c is not None:
            total -= mass * mi_exact(sub_c, sub_p, rho, quad)
    return total


def bicm_gmi(
    c: Constellation,
    lab: Labeling,
    bp: BitProbabilities,
    rho,
    quad: QuadratureSpec | None = None,
) -> float:
    """gmi_exact under the symbol distribution induced by the bit probabilities."""
    return gmi_exact(c, induced_distribution(lab, bp), lab, rho, quad)


def log_gmi_gap_exact(
    c: Constellation,
    p: InputDistribution,
    lab: Labeling,
    rho,
    quad: QuadratureSpec | None = None,
) -> float:
    """log(H(X) - GMI), evaluated from conditional-entropy pieces.

    H - GMI decomposes into per-bit conditional entropies of the full and
    restricted constellations, each available in log domain, so the gap is
    computable when H - GMI itself underflows.
    """
    rho = _check_inputs(c, p, rho)
    if lab.size != c.size:
        raise ValueError("labeling size must match the constellation size")
    quad = _quad(quad)
    full = log_conditional_entropy_exact(c, p, rho, quad)
    logs = [math.log(lab.bits) + full]
    signs = [1.0]
    for _k, _b, mass, sub_c, sub_p in _sub_parts(c, p, lab):
        if sub_c is None:
            continue
        logs.append(math.log(mass) + log_conditional_entropy_exact(sub_c, sub_p, rho, quad))
        signs.append(-1.0)
    val, sign = special.logsumexp(logs, b=signs, return_sign=True)
    if sign <= 0.0 and math.isfinite(val):
        # the decomposition is non-negative; a negative residue is roundoff
        return -math.inf
    return float(val)


def gmi_gap_exact(
    c: Constellation,
    p: InputDistribution,
    lab: Labeling,
    rho,
    quad: QuadratureSpec | None = None,
) -> float:
    """H(X) - GMI in nats."""
    return math.exp(log_gmi_gap_exact(c, p, lab, rho, quad))


def log_bicm_mmse_exact(
    c: Constellation,
    p: InputDistribution,
    lab: Labeling,
    rho,
    quad: QuadratureSpec | None = None,
) -> float:
    """log of the bit-level MMSE companion of the GMI.

    Difference of full and per-subconstellation MMSE terms; twice the snr
    derivative of gmi_exact, evaluated without numeric differentiation.
    """
    rho = _check_inputs(c, p, rho)
    if lab.size != c.size:
        raise ValueError("labeling size must match the constellation size")
    quad = _quad(quad)
    full = log_mmse_exact(c, p, rho, quad)
    logs = [math.log(lab.bits) + full]
    signs = [1.0]
    for _k, _b, mass, sub_c, sub_p in _sub_parts(c, p, lab):
        if sub_c is None:
            continue
        logs.append(math.log(mass) + log_mmse_exact(sub_c, sub_p, rho, quad))
        signs.append(-1.0)
    val, sign = special.logsumexp(logs, b=signs, return_sign=True)
    if sign <= 0.0 and math.isfinite(val):
        return -math.inf
    return float(val)


def bicm_mmse_exact(
    c: Constellation,
    p: InputDistribution,
    lab: Labeling,
    rho,
    quad: QuadratureSpec | None = None,
) -> float:
    """Bit-level MMSE companion of the GMI (twice its snr derivative)."""
    return math.exp(log_bicm_mmse_exact(c, p, lab, rho, quad))


def bicm_mmse(
    c: Constellation,
    lab: Labeling,
    bp: BitProbabilities,
    rho,
    quad: QuadratureSpec | None = None,
) -> float:
    """bicm_mmse_exact under the distribution induced by the bit probabilities."""
    return bicm_mmse_exact(c, induced_distribution(lab, bp), lab, rho, quad)


def _finite_ratio(num: float, den: float, what: str) -> float:
    if not (math.isfinite(num) and math.isfinite(den)):
        raise OverflowError(
            f"{what}: numerator and denominator underflow even in log domain"
        )
    return math.exp(num - den)


def k_mi(
    c: Constellation,
    p: InputDistribution,
    lab: Labeling,
    rho,
    quad: QuadratureSpec | None = None,
) -> float:
    """Ratio (H - GMI) / (H - MI); approaches r_value as snr grows."""
    num = log_gmi_gap_exact(c, p, lab, rho, quad)
    den = log_conditional_entropy_exact(c, p, rho, quad)
    return _finite_ratio(num, den, "k_mi")


def k_mmse(
    c: Constellation,
    p: InputDistribution,
    lab: Labeling,
    rho,
    quad: QuadratureSpec | None = None,
) -> float:
    """Ratio of bit-level to symbol-level MMSE; approaches r_value as snr grows."""
    num = log_bicm_mmse_exact(c, p, lab, rho, quad)
    den = log_mmse_exact(c, p, rho, quad)
    return _finite_ratio(num, den, "k_mmse")


def llr(c: Constellation, p: InputDistribution, lab: Labeling, rho, y):
    """Per-bit log likelihood ratios log f(y | bit=1) / f(y | bit=0).

    Returns shape (m,) for scalar y, else y.shape + (m,).
    """
    rho = _check_inputs(c, p, rho)
    if lab.size != c.size:
        raise ValueError("labeling size must match the constellation size")
    y = np.asarray(y, dtype=float)
    sc = np.log(p.probs) - 0.5 * (y[..., None] - math.sqrt(rho) * c.points) ** 2
    out = np.empty(y.shape + (lab.bits,))
    for k in range(1, lab.bits + 1):
        parts = []
        for b in (0, 1):
            idx = [i - 1 for i in subconstellation(lab, k, b).indices]
            mass = p.probs[idx].sum()
            parts.append(special.logsumexp(sc[..., idx], axis=-1) - np.log(mass))
        out[..., k - 1] = parts[1] - parts[0]
    return out
