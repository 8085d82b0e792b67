"""Acceptance suite: the headline numerical claims, one test per claim.

Each test pins its tolerance up front and exercises the public API only.
The reference values are hard-coded; they were produced by independent
integration routines (adaptive quadrature, dense trapezoid grids, subset
dynamic programming) before this suite was written.
"""

import itertools
import math

import numpy as np
import pytest

import constinfo as ci
from constinfo import cli

WIDE4 = ci.Constellation([-4.0, -2.0, 2.0, 4.0])
P_WIDE4 = ci.InputDistribution([0.1, 0.2, 0.3, 0.4])
GC4 = ci.Labeling([0, 1, 3, 2])


def _unit_mpam(bits):
    p = ci.uniform_distribution(1 << bits)
    return ci.normalize_energy(ci.mpam(bits), p), p


def test_01_reference_constants():
    # d, average energy, and A are exact; B to 1e-12
    assert ci.med(WIDE4) == pytest.approx(2.0, rel=1e-12)
    assert ci.avg_energy(WIDE4, P_WIDE4) == pytest.approx(10.0, rel=1e-12)
    assert ci.a_constant(WIDE4) == 4
    want_b = 2.0 * math.sqrt(0.02) + 2.0 * math.sqrt(0.12)
    assert ci.b_constant(WIDE4, P_WIDE4) == pytest.approx(want_b, abs=1e-12)
    assert ci.b_constant(WIDE4, P_WIDE4) == pytest.approx(
        0.9756630355021699, abs=1e-12
    )


def test_02_induced_distribution_table():
    # entropy, bit-weighted distance constant, and normalized minimum
    # distance for three bit-probability pairs, against 4-decimal references
    cases = [
        ((0.5, 0.5), 1.3863, 1.0000, 0.6325),
        ((0.5, 0.25), 1.2555, 0.8660, 0.7559),
        ((0.8, 0.8), 1.0008, 0.8000, 0.5423),
    ]
    for p0, want_h, want_d, want_dn in cases:
        p = ci.induced_distribution(GC4, ci.BitProbabilities(p0))
        assert ci.entropy(p) == pytest.approx(want_h, abs=5e-5)
        assert ci.d_constant(WIDE4, p, GC4) == pytest.approx(want_d, abs=5e-5)
        scaled = ci.normalize_energy(WIDE4, p)
        assert ci.med(scaled) == pytest.approx(want_dn, abs=5e-5)


def test_03_closed_form_labeling_identities():
    # pair-counted C must equal the closed forms for both constructions,
    # and the alternating construction must attain its ratio formula
    for m in range(1, 7):
        big = 1 << m
        c = ci.mpam(m)
        p = ci.uniform_distribution(big)
        assert ci.c_constant(c, ci.nbc(m)) == 2 * (2 * big - m - 2)
        assert ci.c_constant(c, ci.agc(m)) == 2 * m * big - 2 * m - big + 2
        want_r = m - (big - 2) / (2 * big - 2)
        assert ci.r_value(c, p, ci.agc(m)) == pytest.approx(want_r, rel=1e-12)


def test_04_class_enumeration():
    four = ci.enumerate_classes(ci.mpam(2))
    a4 = ci.a_constant(ci.mpam(2))
    assert len(four) == 3
    assert sorted(cv / a4 for cv in four) == pytest.approx([1.0, 4 / 3, 5 / 3])

    c8 = ci.mpam(3)
    eight = ci.enumerate_classes(c8)
    a8 = ci.a_constant(c8)
    assert len(eight) == 12
    assert sum(eight.values()) == math.factorial(8)
    # smallest class is the single-bit-flip one, largest is the alternating
    # construction's
    assert min(eight) == a8 == ci.c_constant(c8, ci.brgc(3))
    assert max(eight) == ci.c_constant(c8, ci.agc(3))
    assert max(eight) / a8 == pytest.approx(18 / 7, rel=1e-12)


def test_05_gray_equivalence():
    # single-bit-flip labelings are exactly those with C == A; exhaustive
    # over every labeling of the 4- and 8-point constellations
    for bits in (2, 3):
        c = ci.mpam(bits)
        a = ci.a_constant(c)
        for perm in itertools.permutations(range(1 << bits)):
            lab = ci.Labeling(np.array(perm))
            assert ci.is_gray(c, lab) == (ci.c_constant(c, lab) == a)


def test_06_tail_ratio_convergence():
    # exact/asymptote within [0.92, 1.08] where sqrt(rho) d / 2 = 6, with
    # |ratio - 1| non-increasing over the last 7 grid points (1 dB apart);
    # deviations under 1e-9 count as converged since the closed-form
    # metrics match their asymptote to roundoff
    quad600 = ci.QuadratureSpec(600)
    symbol_cases = [("4pam", *_unit_mpam(2)), ("8pam", *_unit_mpam(3)),
                    ("wide4", WIDE4, P_WIDE4)]
    labeled_cases = [
        (f"{name}-{lname}", c, p, builder(c.bits))
        for name, c, p in symbol_cases[:2]
        for lname, builder in (("gc", ci.brgc), ("nbc", ci.nbc), ("agc", ci.agc))
    ]
    jobs = []
    for name, c, p in symbol_cases:
        jobs.append((f"conditional_entropy/{name}", "conditional_entropy", c, p, None, None))
        jobs.append((f"mmse/{name}", "mmse", c, p, None, quad600))
        jobs.append((f"sep/{name}", "sep", c, p, None, None))
    for name, c, p, lab in labeled_cases:
        jobs.append((f"gmi_gap/{name}", "gmi_gap", c, p, lab, None))
        jobs.append((f"bicm_mmse/{name}", "bicm_mmse", c, p, lab, quad600))
        jobs.append((f"bep/{name}", "bep", c, p, lab, None))

    for name, metric, c, p, lab, quad in jobs:
        d = ci.med(c)
        end_db = 10.0 * math.log10((12.0 / d) ** 2)
        grid = end_db - 15.0 + np.arange(16.0)
        rep = ci.verify_limit(metric, c, p, lab, grid_db=grid, quad=quad)
        assert rep.truncated == 0, name
        assert 0.92 <= rep.ratio[-1] <= 1.08, (name, rep.ratio[-1])
        dev = np.maximum(np.abs(rep.ratio[-7:] - 1.0), 1e-9)
        assert np.all(np.diff(dev) <= 0.0), (name, dev)


def test_07_derivative_identities():
    # twice the central-difference snr derivative of the information
    # quantities must reproduce the estimation-error quantities
    c, p = _unit_mpam(2)
    h = 1e-4
    for rho in (0.5, 1.0, 2.0, 5.0):
        diff = (ci.mi_exact(c, p, rho + h) - ci.mi_exact(c, p, rho - h)) / (2 * h)
        assert diff == pytest.approx(ci.mmse_exact(c, p, rho) / 2.0, abs=1e-5)
    for lab, bp in ((GC4, ci.BitProbabilities([0.5, 0.25])),
                    (ci.nbc(2), ci.BitProbabilities([0.5, 0.5]))):
        for rho in (0.5, 1.0, 2.0, 5.0):
            diff = (
                ci.bicm_gmi(c, lab, bp, rho + h) - ci.bicm_gmi(c, lab, bp, rho - h)
            ) / (2 * h)
            assert diff == pytest.approx(
                ci.bicm_mmse(c, lab, bp, rho) / 2.0, abs=1e-5
            )


def test_08_penalty_ratio_limits():
    rho = 10.0**2.5  # 25 dB
    quad600 = ci.QuadratureSpec(600)
    c4, p4 = _unit_mpam(2)
    c8, p8 = _unit_mpam(3)
    cases = [
        (c4, p4, GC4, 1.0),
        (c4, p4, ci.nbc(2), 4 / 3),
        (c4, p4, ci.agc(2), 5 / 3),
        (c8, p8, ci.nbc(3), 11 / 7),
    ]
    for c, p, lab, want in cases:
        assert ci.k_mi(c, p, lab, rho) == pytest.approx(want, rel=0.05)
        assert ci.k_mmse(c, p, lab, rho, quad600) == pytest.approx(want, rel=0.05)


def test_09_monte_carlo_agreement():
    # analytic values against seeded million-sample simulations, 4 standard
    # errors; the corpus includes a skewed prior whose inner symbols own no
    # decision region
    for i, (name, c, p, lab, rho) in enumerate(cli.oracle_cases()):
        for metric, exact, est in cli.oracle_checks(
            c, p, lab, rho, samples=1_000_000, seed=1000 + i
        ):
            slack = 4.0 * est.standard_error
            assert abs(exact - est.estimate) <= slack, (name, metric)


def test_10_gmi_dominance():
    # the bit-metric rate never exceeds the symbol-metric rate, for random
    # labelings and bit probabilities across a 61-point snr grid
    rng = np.random.default_rng(20260825)
    grid = ci.db_to_snr(0.5 * np.arange(61))
    for bits in (2, 3):
        raw = ci.mpam(bits)
        for _ in range(10):
            lab = ci.Labeling(rng.permutation(1 << bits))
            bp = ci.BitProbabilities(rng.uniform(0.1, 0.9, size=bits))
            p = ci.induced_distribution(lab, bp)
            c = ci.normalize_energy(raw, p)
            for rho in grid:
                gmi = ci.gmi_exact(c, p, lab, rho)
                mi = ci.mi_exact(c, p, rho)
                assert gmi <= mi + 1e-9


def test_11_class_count_bounds():
    assert ci.class_count_bound(ci.mpam(2)) == 3
    assert len(ci.enumerate_classes(ci.mpam(2))) == 3
    assert ci.class_count_bound(ci.mpam(3)) == 12
    assert len(ci.enumerate_classes(ci.mpam(3))) == 12

    c16 = ci.mpam(4)
    bound = ci.class_count_bound(c16)
    assert bound == 39
    sampled = set(ci.sample_classes(c16, 80_000_000, seed=3))
    # random sampling cannot reach the rarest classes; add the alternating
    # construction, a variant one transposition away from it, and the two
    # standard codes
    variant = ci.agc(4).codes.copy()
    variant[[0, 2]] = variant[[2, 0]]
    constructed = {
        ci.c_constant(c16, lab)
        for lab in (ci.brgc(4), ci.nbc(4), ci.agc(4), ci.Labeling(variant))
    }
    assert ci.c_constant(c16, ci.agc(4)) == ci.c_upper_bound(c16) == 106
    assert 104 in constructed
    found = sampled | constructed
    assert len(found) >= 38
    assert len(found) <= bound
