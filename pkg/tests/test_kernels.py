"""Kernel families: closed forms vs the quadrature oracle, hypotheses checks."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlburgers import kernels as kk


def family_suite():
    return [
        kk.exponential_kernel(1.0),
        kk.exponential_kernel(2.0),
        kk.gaussian_kernel(1.0),
        kk.gaussian_kernel(2.0),
        kk.uniform_kernel(1.0),
        kk.triangular_kernel(1.0),
    ]


class TestClosedForms:
    def test_exponential_peak(self):
        assert kk.exponential_kernel(1.0).density(0.0) == pytest.approx(0.5, abs=0)

    def test_exponential_moments(self):
        k1 = kk.exponential_kernel(1.0)
        assert k1.m1 == pytest.approx(1.0, abs=1e-15)
        assert k1.m2 == pytest.approx(2.0, abs=1e-15)
        assert kk.exponential_kernel(2.0).m1 == pytest.approx(0.5, abs=1e-15)

    def test_exponential_criterion_constant(self):
        # the discontinuity criterion constant 4 M1 equals 4/k
        for k in (0.5, 1.0, 2.0, 3.7):
            ker = kk.exponential_kernel(k)
            assert abs(4.0 * ker.m1 - 4.0 / k) <= 1e-12

    def test_gaussian_second_moment(self):
        assert kk.gaussian_kernel(2.0).m2 == pytest.approx(4.0, rel=1e-14)

    def test_uniform_second_moment_vs_oracle(self):
        ker = kk.uniform_kernel(1.0)
        m1q, m2q = kk.moment_quadrature(ker)
        assert ker.m2 == pytest.approx(1.0 / 3.0, rel=1e-13)
        assert m2q == pytest.approx(ker.m2, rel=1e-10)

    @pytest.mark.parametrize("ker", family_suite(), ids=lambda k: f"{k.family}-{k.param}")
    def test_moments_match_quadrature(self, ker):
        m1q, m2q = kk.moment_quadrature(ker)
        assert m1q == pytest.approx(ker.m1, rel=1e-10)
        assert m2q == pytest.approx(ker.m2, rel=1e-10)

    @pytest.mark.parametrize("ker", family_suite(), ids=lambda k: f"{k.family}-{k.param}")
    def test_mass_quadrature_consistency(self, ker):
        r = ker.radius(1e-13)
        mass = kk.mass_quadrature(ker)
        span = float(ker.cdf(r) - ker.cdf(-r))
        assert abs(mass - span) <= 1e-10


class TestCdf:
    def test_uniform_cdf_value(self):
        assert kk.uniform_kernel(1.0).cdf(0.5) == pytest.approx(0.75, abs=0)

    def test_gaussian_far_tail(self):
        assert kk.gaussian_kernel(1.0).cdf(-8.0) <= 1e-14

    def test_half_mass_at_origin(self):
        for ker in family_suite():
            assert float(ker.cdf(0.0)) == pytest.approx(0.5, abs=1e-14)

    @pytest.mark.parametrize("ker", family_suite(), ids=lambda k: f"{k.family}-{k.param}")
    def test_cdf_monotone_and_limits(self, ker):
        x = np.linspace(-ker.radius(1e-13) - 1.0, ker.radius(1e-13) + 1.0, 501)
        phi = ker.cdf(x)
        assert np.all(np.diff(phi) >= -1e-15)
        assert phi[0] <= 1e-12 and abs(phi[-1] - 1.0) <= 1e-12

    @given(x=st.floats(-50, 50), k=st.floats(0.3, 4.0))
    @settings(max_examples=60, deadline=None)
    def test_cdf_symmetry_exponential(self, x, k):
        ker = kk.exponential_kernel(k)
        assert abs(float(ker.cdf(x) + ker.cdf(-x)) - 1.0) <= 1e-12

    @given(x=st.floats(-10, 10), a=st.floats(0.2, 5.0))
    @settings(max_examples=60, deadline=None)
    def test_cdf_symmetry_triangular(self, x, a):
        ker = kk.triangular_kernel(a)
        assert abs(float(ker.cdf(x) + ker.cdf(-x)) - 1.0) <= 1e-12


class TestValidation:
    @pytest.mark.parametrize("ker", family_suite(), ids=lambda k: f"{k.family}-{k.param}")
    def test_families_pass(self, ker):
        report = kk.validate_kernel(ker, 256)
        assert report.all_passed

    def test_probe_count_floor(self):
        with pytest.raises(ValueError):
            kk.validate_kernel(kk.exponential_kernel(1.0), 8)

    def test_planted_negative_entry(self):
        y = np.linspace(-6.0, 6.0, 601)
        vals = 0.5 * np.exp(-np.abs(y))
        vals[300] = -1e-3  # defect at y = 0, symmetric by construction
        cdf = np.concatenate(([0.0], np.cumsum(0.5 * (vals[1:] + vals[:-1]) * np.diff(y))))
        bad = kk.Kernel("tabulated", 0.0, 1.0, 2.0, table_y=y, table_k=vals,
                        table_cdf=cdf)
        report = kk.validate_kernel(bad, 256)
        check = report.checks["nonnegativity"]
        assert not check.passed
        assert check.worst == pytest.approx(1e-3, rel=1e-6)

    def test_uniform_constant_counts_as_nonincreasing(self):
        report = kk.validate_kernel(kk.uniform_kernel(1.0), 256)
        assert report.checks["monotone_decay"].passed
        assert not report.density_continuous

    def test_smooth_families_flagged_continuous(self):
        for ker in (kk.exponential_kernel(1.0), kk.gaussian_kernel(1.0),
                    kk.triangular_kernel(1.0)):
            assert kk.validate_kernel(ker, 256).density_continuous


class TestBuilders:
    @pytest.mark.parametrize("bad", [0.0, -1.0, float("nan"), float("inf")])
    def test_nonpositive_parameters(self, bad):
        for builder in (kk.exponential_kernel, kk.gaussian_kernel,
                        kk.uniform_kernel, kk.triangular_kernel):
            with pytest.raises(kk.KernelError):
                builder(bad)

    def test_build_kernel_dispatch(self):
        assert kk.build_kernel("exp", k=2.0).family == "exponential"
        assert kk.build_kernel("gauss", sigma=1.0).family == "gaussian"
        assert kk.build_kernel("tri", a=1.0).family == "triangular"
        with pytest.raises(kk.KernelError):
            kk.build_kernel("cauchy", gamma=1.0)


class TestTabulated:
    def make_table(self, n=2001, r=8.0):
        y = np.linspace(-r, r, n)
        return y, 0.5 * np.exp(-np.abs(y))

    def test_renormalization_consent(self):
        y, vals = self.make_table()
        with pytest.raises(kk.KernelError, match="renormalize"):
            kk.tabulated_kernel(y, 1.05 * vals)
        ker = kk.tabulated_kernel(y, 1.05 * vals, renormalize=True)
        assert abs(float(ker.cdf(y[-1])) - 1.0) <= 1e-12

    def test_moments_close_to_exponential(self):
        # truncation at r leaves (r+1)e^-r and (r^2+2r+2)e^-r tails
        y, vals = self.make_table(n=8001, r=16.0)
        ker = kk.tabulated_kernel(y, vals, renormalize=True)
        assert ker.m1 == pytest.approx(1.0, abs=1e-5)
        assert ker.m2 == pytest.approx(2.0, abs=1e-4)

    def test_evenness_rejected(self):
        y, vals = self.make_table()
        vals = vals.copy()
        vals[10] += 1e-3
        with pytest.raises(kk.KernelError, match="evenness"):
            kk.tabulated_kernel(y, vals, renormalize=True)

    def test_nonuniform_spacing_rejected(self):
        y, vals = self.make_table()
        y = y.copy()
        y[5] += 1e-3
        with pytest.raises(kk.KernelError, match="spaced"):
            kk.tabulated_kernel(y, vals, renormalize=True)

    def test_divergent_tail_rejected(self):
        y = np.linspace(-50.0, 50.0, 4001)
        with pytest.raises(kk.DivergentMomentError):
            kk.tabulated_kernel(y, 1.0 / (np.pi * (1.0 + y * y)), renormalize=True)

    def test_read_table_roundtrip(self, tmp_path):
        y, vals = self.make_table(n=801)
        path = tmp_path / "kernel.csv"
        np.savetxt(path, np.column_stack([y, vals]), delimiter=",")
        y2, v2 = kk.read_kernel_table(path)
        np.testing.assert_allclose(y2, y, rtol=0, atol=1e-15)
        np.testing.assert_allclose(v2, vals, rtol=1e-15)
        ker = kk.tabulated_kernel(y2, v2, renormalize=True)
        assert kk.validate_kernel(ker, 128).all_passed
