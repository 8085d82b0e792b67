import json
import math

import numpy as np
import pytest

import constinfo as ci


def _tail_grid(c, arg_end=6.0, points=16):
    # 1 dB spacing ending where sqrt(rho) * d / 2 reaches arg_end
    d = ci.med(c)
    end_db = 10.0 * math.log10((2.0 * arg_end / d) ** 2)
    return end_db - (points - 1) + np.arange(points)


class TestTailConstants:
    def test_gap_constant_is_pi_b(self, wide4, p_wide4):
        want = math.pi * ci.b_constant(wide4, p_wide4)
        assert ci.limit_constant("conditional_entropy", wide4, p_wide4) == pytest.approx(
            want, rel=1e-14
        )

    def test_mmse_and_sep_constants(self, wide4, p_wide4):
        d = ci.med(wide4)
        b = ci.b_constant(wide4, p_wide4)
        assert ci.limit_constant("mmse", wide4, p_wide4) == pytest.approx(
            math.pi * d * d * b / 4.0, rel=1e-14
        )
        assert ci.limit_constant("sep", wide4, p_wide4) == pytest.approx(b, rel=1e-14)

    def test_labeled_constants(self, c4u, p4u):
        lab = ci.nbc(2)
        dd = ci.d_constant(c4u, p4u, lab)
        d = ci.med(c4u)
        assert ci.limit_constant("gmi_gap", c4u, p4u, lab) == pytest.approx(
            math.pi * dd, rel=1e-14
        )
        assert ci.limit_constant("bicm_mmse", c4u, p4u, lab) == pytest.approx(
            math.pi * d * d * dd / 4.0, rel=1e-14
        )
        assert ci.limit_constant("bep", c4u, p4u, lab) == pytest.approx(
            dd / 2.0, rel=1e-14
        )

    def test_labeled_constants_require_labeling(self, c4u, p4u):
        with pytest.raises(ValueError):
            ci.limit_constant("bep", c4u, p4u)

    def test_unknown_metric_rejected(self, c4u, p4u):
        with pytest.raises(ValueError):
            ci.limit_constant("throughput", c4u, p4u)

    def test_equally_spaced_closed_forms(self):
        # the general constants must collapse to the closed forms on
        # unit-energy equally spaced points
        for m in range(1, 7):
            big = 1 << m
            p = ci.uniform_distribution(big)
            c = ci.normalize_energy(ci.mpam(m), p)
            assert ci.mpam_gap_constant(big) == pytest.approx(
                2.0 * math.pi * (big - 1) / big, rel=1e-14
            )
            assert ci.limit_constant("conditional_entropy", c, p) == pytest.approx(
                ci.mpam_gap_constant(big), rel=1e-13
            )
            assert ci.limit_constant("mmse", c, p) == pytest.approx(
                ci.mpam_mmse_constant(big), rel=1e-13
            )
            assert ci.mpam_mmse_constant(big) == pytest.approx(
                6.0 * math.pi / (big * (big + 1)), rel=1e-14
            )
            assert ci.limit_constant("sep", c, p) == pytest.approx(
                ci.mpam_sep_constant(big), rel=1e-13
            )
            assert ci.mpam_sep_constant(big) == pytest.approx(
                2.0 * (big - 1) / big, rel=1e-14
            )

    def test_gray_bit_gap_equals_symbol_gap(self, c8u, p8u):
        # Gray labelings make the bit-level constant coincide exactly
        rho = np.array([1.0, 10.0, 100.0])
        lhs = ci.asym_bicm_gmi_gap(c8u, p8u, ci.brgc(3), rho)
        rhs = ci.asym_conditional_entropy(c8u, p8u, rho)
        np.testing.assert_array_equal(lhs, rhs)

    def test_asym_functions_vectorize(self, c4u, p4u):
        rho = np.array([1.0, 4.0, 9.0])
        out = ci.asym_sep(c4u, p4u, rho)
        assert out.shape == rho.shape
        d = ci.med(c4u)
        want = ci.b_constant(c4u, p4u) * ci.q_function(np.sqrt(rho) * d / 2.0)
        np.testing.assert_allclose(out, want, rtol=1e-14)


class TestVerifyLimit:
    def test_closed_form_metric_converges(self, c4u, p4u):
        rep = ci.verify_limit("sep", c4u, p4u, grid_db=_tail_grid(c4u))
        assert rep.converged
        assert rep.truncated == 0
        assert rep.nodes is None
        assert abs(rep.ratio[-1] - 1.0) < 1e-12
        assert rep.constant == pytest.approx(ci.b_constant(c4u, p4u), rel=1e-14)

    def test_quadrature_metric_converges(self, c4u, p4u):
        rep = ci.verify_limit(
            "conditional_entropy", c4u, p4u, grid_db=_tail_grid(c4u)
        )
        assert rep.converged
        assert rep.nodes == 300
        assert rep.ratio[-1] == pytest.approx(1.0, abs=0.05)

    def test_labeled_metric_converges(self, c4u, p4u):
        rep = ci.verify_limit(
            "bep", c4u, p4u, ci.agc(2), grid_db=_tail_grid(c4u)
        )
        assert rep.converged
        assert rep.constant == pytest.approx(
            ci.d_constant(c4u, p4u, ci.agc(2)) / 2.0, rel=1e-14
        )

    def test_trust_region_truncation_warns(self, c4u, p4u):
        grid = _tail_grid(c4u, arg_end=12.0, points=26)
        with pytest.warns(UserWarning, match="trust region"):
            rep = ci.verify_limit("conditional_entropy", c4u, p4u, grid_db=grid)
        assert rep.truncated > 0
        assert rep.rho_db.size + rep.truncated == 26

    def test_q_floor_truncation_warns(self, c4u, p4u):
        grid = np.linspace(20.0, 80.0, 31)
        with pytest.warns(UserWarning, match="below 1e-300"):
            rep = ci.verify_limit("sep", c4u, p4u, grid_db=grid)
        assert rep.truncated > 0

    def test_deeper_reach_with_more_nodes(self, c4u, p4u):
        # tail argument 9 sits just past the 300-node trust region
        grid = _tail_grid(c4u, arg_end=9.0)
        with pytest.warns(UserWarning, match="trust region"):
            shallow = ci.verify_limit("conditional_entropy", c4u, p4u, grid_db=grid)
        deep = ci.verify_limit(
            "conditional_entropy", c4u, p4u, grid_db=grid,
            quad=ci.QuadratureSpec(600),
        )
        assert shallow.truncated > 0 and deep.truncated == 0
        assert deep.converged

    def test_rejects_bad_grids(self, c4u, p4u):
        with pytest.raises(ValueError, match="span"):
            ci.verify_limit("sep", c4u, p4u, grid_db=np.linspace(0, 10, 11))
        with pytest.raises(ValueError, match="increasing"):
            ci.verify_limit("sep", c4u, p4u, grid_db=[20.0, 18.0, 25.0, 40.0])
        with pytest.raises(ValueError, match="1-D"):
            ci.verify_limit("sep", c4u, p4u, grid_db=[[1.0, 20.0]])

    def test_rejects_fully_truncated_grid(self, c4u, p4u):
        with pytest.warns(UserWarning):
            with pytest.raises(ValueError, match="fewer than three"):
                ci.verify_limit("sep", c4u, p4u, grid_db=np.linspace(60, 80, 5))

    def test_labeled_metric_requires_labeling(self, c4u, p4u):
        with pytest.raises(ValueError, match="labeling"):
            ci.verify_limit("bep", c4u, p4u, grid_db=_tail_grid(c4u))


@pytest.fixture(scope="module")
def rep(c4u, p4u):
    return ci.verify_limit("sep", c4u, p4u, grid_db=_tail_grid(c4u))


class TestReportSerialization:
    def test_csv_layout(self, rep):
        text = rep.to_csv()
        lines = text.splitlines()
        assert lines[0].startswith("# ")
        meta = json.loads(lines[0][2:])
        assert meta["metric"] == "sep"
        assert meta["converged"] is True
        assert meta["truncated_points"] == 0
        assert lines[1] == "rho_db,exact,asymptotic,ratio"
        assert len(lines) == 2 + rep.rho_db.size
        first = lines[2].split(",")
        assert float(first[0]) == rep.rho_db[0]
        assert float(first[3]) == rep.ratio[0]

    def test_csv_deterministic(self, rep):
        assert rep.to_csv() == rep.to_csv()

    def test_json_round_trip(self, rep):
        doc = json.loads(rep.to_json())
        assert doc["meta"]["metric"] == "sep"
        assert doc["columns"] == ["rho_db", "exact", "asymptotic", "ratio"]
        back = np.array(doc["rows"], dtype=float)
        np.testing.assert_array_equal(back[:, 0], rep.rho_db)
        np.testing.assert_array_equal(back[:, 3], rep.ratio)

    def test_write_to_file(self, rep, tmp_path):
        out = tmp_path / "sep.csv"
        text = rep.to_csv(out)
        assert out.read_text(encoding="utf-8") == text
