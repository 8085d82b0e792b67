"""Binary labelings, bit-level distributions, and labeling-class combinatorics."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .constellation import (
    Constellation,
    InputDistribution,
    a_constant,
    b_constant,
    med,
    med_pairs,
)

__all__ = [
    "Labeling",
    "BitProbabilities",
    "SubconstellationIndex",
    "hamming",
    "bit_of",
    "subconstellation",
    "nbc",
    "brgc",
    "agc",
    "is_gray",
    "c_constant",
    "c_constant_from_partition",
    "subconstellation_a",
    "induced_distribution",
    "bit_marginal",
    "conditional_distribution",
    "d_constant",
    "r_value",
    "c_upper_bound",
    "r_upper_bound",
    "class_count_bound",
    "enumerate_classes",
    "class_representatives",
    "sample_classes",
]

_POPCOUNT = np.array([bin(v).count("1") for v in range(1 << 16)], dtype=np.uint8)

# labelings per sampling chunk; fixed so results depend only on (n, seed)
_SAMPLE_CHUNK = 1 << 18


def hamming(a: int, b: int) -> int:
    """Hamming distance between two label values."""
    return int(_POPCOUNT[a ^ b])


@dataclass(frozen=True)
class Labeling:
    """Assignment of distinct binary labels to constellation points.

    ``codes[i]`` is the integer label of the i-th point (in increasing point
    order); the codes are a permutation of 0..M-1. Bit positions are 1-based
    and count from the most significant bit.
    """

    codes: np.ndarray

    def __post_init__(self):
        codes = np.array(self.codes, dtype=np.int64)
        if codes.ndim != 1:
            raise ValueError("labeling codes must form a 1-D array")
        n = codes.size
        if n < 2 or n & (n - 1):
            raise ValueError("number of labels must be a power of two, at least 2")
        if np.any(np.sort(codes) != np.arange(n)):
            raise ValueError("labeling codes must be a permutation of 0..M-1")
        codes.flags.writeable = False
        object.__setattr__(self, "codes", codes)

    @property
    def size(self) -> int:
        return self.codes.size

    @property
    def bits(self) -> int:
        return self.codes.size.bit_length() - 1


@dataclass(frozen=True)
class BitProbabilities:
    """Per-bit probabilities of the bit value 0, independent across positions.

    ``p0[k-1]`` is P(bit k = 0) for the 1-based bit position k.
    """

    p0: np.ndarray

    def __post_init__(self):
        p0 = np.array(self.p0, dtype=float)
        if p0.ndim != 1 or p0.size < 1:
            raise ValueError("bit probabilities must form a non-empty 1-D array")
        if not np.all(np.isfinite(p0)) or np.any(p0 <= 0.0) or np.any(p0 >= 1.0):
            raise ValueError("bit probabilities must lie strictly inside (0, 1)")
        p0.flags.writeable = False
        object.__setattr__(self, "p0", p0)

    @property
    def bits(self) -> int:
        return self.p0.size


@dataclass(frozen=True)
class SubconstellationIndex:
    """Symbol positions (1-based) whose label has value ``value`` at bit ``bit``."""

    bit: int
    value: int
    indices: tuple[int, ...]


def _check_bit(lab: Labeling, k: int) -> None:
    if not 1 <= k <= lab.bits:
        raise ValueError(f"bit position must be in 1..{lab.bits}")


def bit_of(lab: Labeling, i: int, k: int) -> int:
    """Bit k (1-based, MSB first) of the label at symbol position i (1-based)."""
    if not 1 <= i <= lab.size:
        raise ValueError(f"symbol index must be in 1..{lab.size}")
    _check_bit(lab, k)
    return int(lab.codes[i - 1]) >> (lab.bits - k) & 1


def subconstellation(lab: Labeling, k: int, b: int) -> SubconstellationIndex:
    """Index set of symbols whose bit k equals b."""
    _check_bit(lab, k)
    if b not in (0, 1):
        raise ValueError("bit value must be 0 or 1")
    shift = lab.bits - k
    idx = np.nonzero((lab.codes >> shift & 1) == b)[0]
    return SubconstellationIndex(k, b, tuple(int(i) + 1 for i in idx))


def nbc(m: int) -> Labeling:
    """Natural binary labeling 0, 1, 2, ..."""
    if m < 1:
        raise ValueError("m must be at least 1")
    return Labeling(np.arange(1 << m))


def brgc(m: int) -> Labeling:
    """Binary reflected Gray labeling."""
    if m < 1:
        raise ValueError("m must be at least 1")
    v = np.arange(1 << m)
    return Labeling(v ^ (v >> 1))


def agc(m: int) -> Labeling:
    """Anti-Gray labeling: odd-position labels complement their predecessors.

    Even positions carry the reflected Gray labels of m-1 bits shifted left;
    for m = 1 this degenerates to the identity [0, 1].
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    if m == 1:
        return Labeling(np.array([0, 1]))
    half = brgc(m - 1).codes
    codes = np.empty(2 * half.size, dtype=np.int64)
    codes[0::2] = 2 * half
    codes[1::2] = codes[0::2] ^ ((1 << m) - 1)
    return Labeling(codes)


def _check_pairing(c: Constellation, lab: Labeling) -> None:
    if lab.size != c.size:
        raise ValueError("labeling size must match the constellation size")


def is_gray(c: Constellation, lab: Labeling) -> bool:
    """True when every minimum-distance pair differs in exactly one bit."""
    _check_pairing(c, lab)
    codes = lab.codes
    return all(hamming(codes[i], codes[j]) == 1 for i, j in med_pairs(c))


def c_constant(c: Constellation, lab: Labeling) -> int:
    """Hamming-weighted count of ordered minimum-distance pairs."""
    _check_pairing(c, lab)
    codes = lab.codes
    return 2 * sum(hamming(codes[i], codes[j]) for i, j in med_pairs(c))


def c_constant_from_partition(c: Constellation, lab: Labeling) -> int:
    """Same constant computed from the bit-plane partitions.

    For every bit position, pairs at minimum distance that cross the 0/1
    split contribute; summing A - A_{k,0} - A_{k,1} over positions recovers
    the pair-scan value.
    """
    _check_pairing(c, lab)
    a = a_constant(c)
    total = 0
    for k in range(1, lab.bits + 1):
        total += a - subconstellation_a(c, lab, k, 0) - subconstellation_a(c, lab, k, 1)
    return total


def subconstellation_a(c: Constellation, lab: Labeling, k: int, b: int) -> int:
    """Ordered pairs inside subconstellation (k, b) at the full-constellation
    minimum distance."""
    _check_pairing(c, lab)
    sub = subconstellation(lab, k, b)
    pts = c.points[[i - 1 for i in sub.indices]]
    d = med(c)
    gaps = np.diff(pts)
    return 2 * int(np.count_nonzero(gaps <= d * (1.0 + 1e-9)))


def _bit_matrix(lab: Labeling) -> np.ndarray:
    # (M, m) matrix of label bits, MSB first
    shifts = np.arange(lab.bits - 1, -1, -1)
    return (lab.codes[:, None] >> shifts[None, :]) & 1


def induced_distribution(lab: Labeling, bp: BitProbabilities) -> InputDistribution:
    """Symbol distribution induced by independent bit probabilities."""
    if bp.bits != lab.bits:
        raise ValueError("bit probability count must match the labeling bit count")
    bits = _bit_matrix(lab)
    per_bit = np.where(bits == 0, bp.p0[None, :], 1.0 - bp.p0[None, :])
    return InputDistribution(per_bit.prod(axis=1))


def bit_marginal(lab: Labeling, p: InputDistribution, k: int, b: int) -> float:
    """P(bit k = b) under the symbol distribution p."""
    if p.size != lab.size:
        raise ValueError("distribution size must match the labeling size")
    sub = subconstellation(lab, k, b)
    return float(sum(p.probs[i - 1] for i in sub.indices))


def conditional_distribution(
    lab: Labeling, p: InputDistribution, k: int, b: int
) -> InputDistribution:
    """Symbol distribution over subconstellation (k, b), renormalized."""
    sub = subconstellation(lab, k, b)
    idx = [i - 1 for i in sub.indices]
    mass = p.probs[idx]
    return InputDistribution(mass / mass.sum())


def d_constant(c: Constellation, p: InputDistribution, lab: Labeling) -> float:
    """Hamming- and distribution-weighted minimum-distance pair count.

    Reduces to c_constant(c, lab) / M under the uniform distribution, and to
    b_constant(c, p) whenever the labeling is Gray.
    """
    _check_pairing(c, lab)
    if p.size != c.size:
        raise ValueError("distribution size must match the constellation size")
    pr = p.probs
    codes = lab.codes
    return float(
        sum(
            2.0 * hamming(codes[i], codes[j]) * math.sqrt(pr[i] * pr[j])
            for i, j in med_pairs(c)
        )
    )


def r_value(c: Constellation, p: InputDistribution, lab: Labeling) -> float:
    """Ratio of the labeling-weighted to the plain pair constant, D / B.

    Equals 1 exactly when the labeling is Gray; larger values mean a larger
    bit-level penalty at high SNR.
    """
    return d_constant(c, p, lab) / b_constant(c, p)


def c_upper_bound(c: Constellation) -> int:
    """Largest value c_constant can take on this constellation."""
    m = c.bits
    a = a_constant(c)
    return min(m * a, (m - 1) * a + c.size)


def r_upper_bound(c: Constellation) -> float:
    """Largest value r_value can take under the uniform distribution."""
    return c_upper_bound(c) / a_constant(c)


def class_count_bound(c: Constellation) -> int:
    """Upper bound on the number of distinct c_constant values over labelings."""
    m = c.bits
    a = a_constant(c)
    if m == 1:
        return 1
    return min((m - 1) * a + 2, (m - 2) * a + c.size + 2) // 2


def _class_counts(c: Constellation, want_reps: bool):
    if c.size > 8:
        raise ValueError("exhaustive enumeration is limited to at most 8 points")
    pair_idx = np.array(med_pairs(c))
    lo, hi = pair_idx[:, 0], pair_idx[:, 1]
    perms = np.array(list(itertools.permutations(range(c.size))), dtype=np.int64)
    ham = _POPCOUNT[perms[:, lo] ^ perms[:, hi]].astype(np.int64)
    cvals = 2 * ham.sum(axis=1)
    values, counts = np.unique(cvals, return_counts=True)
    table = {int(v): int(n) for v, n in zip(values, counts)}
    if not want_reps:
        return table
    reps = {}
    for v in values:
        first = int(np.argmax(cvals == v))
        reps[int(v)] = Labeling(perms[first])
    return table, reps


def enumerate_classes(c: Constellation) -> dict[int, int]:
    """Map c_constant value -> number of labelings attaining it.

    Walks all M! labelings, so the constellation may have at most 8 points.
    """
    return _class_counts(c, want_reps=False)


def class_representatives(c: Constellation) -> dict[int, Labeling]:
    """One labeling per c_constant class, for the same enumeration."""
    return _class_counts(c, want_reps=True)[1]


def sample_classes(c: Constellation, n: int, seed: int) -> dict[int, int]:
    """Map c_constant value -> occurrence count over n uniform random labelings.

    Deterministic for fixed (n, seed): chunk i uses a Philox stream keyed by
    (seed, i) and permutations come from argsort of uniform draws.
    """
    if n < 1:
        raise ValueError("sample count must be positive")
    pair_idx = np.array(med_pairs(c))
    lo, hi = pair_idx[:, 0], pair_idx[:, 1]
    counts: dict[int, int] = {}
    done = 0
    chunk = 0
    while done < n:
        take = min(_SAMPLE_CHUNK, n - done)
        rng = np.random.Generator(np.random.Philox(key=[seed, chunk]))
        perms = np.argsort(rng.random((take, c.size)), axis=1)
        ham = _POPCOUNT[perms[:, lo] ^ perms[:, hi]].astype(np.int64)
        cvals = 2 * ham.sum(axis=1)
        values, reps = np.unique(cvals, return_counts=True)
        for v, r in zip(values, reps):
            counts[int(v)] = counts.get(int(v), 0) + int(r)
        done += take
        chunk += 1
    return counts
