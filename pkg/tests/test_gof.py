import math

import numpy as np
import pytest
from scipy import stats

from hextreme import dist
from hextreme.estimate import Dataset, FitOptions
from hextreme.gof import (bootstrap_pvalues, cvm_statistic, info_criteria,
                          ks_statistic, rq_residuals)
from hextreme.params import ParamVector
from hextreme.specfun import DomainError

EXP1 = ParamVector(1.0, 0.0, 1.0, 0.0, 1.0, 0.0)


@pytest.fixture(scope="module")
def exp_data():
    return Dataset(dist.sample(200, EXP1, seed=5), name="exp")


class TestStatistics:
    def test_ks_matches_scipy(self, exp_data):
        got = ks_statistic(exp_data, EXP1)
        want = stats.kstest(exp_data.values, "expon").statistic
        assert got == pytest.approx(want, rel=1e-10)

    def test_cvm_matches_scipy(self, exp_data):
        got = cvm_statistic(exp_data, EXP1)
        want = stats.cramervonmises(exp_data.values, "expon").statistic
        assert got == pytest.approx(want, rel=1e-8)

    def test_statistics_increase_under_misfit(self, exp_data):
        bad = ParamVector(3.0, 0.0, 1.0, 0.0, 1.0, 0.0)
        assert ks_statistic(exp_data, bad) > ks_statistic(exp_data, EXP1)
        assert cvm_statistic(exp_data, bad) > cvm_statistic(exp_data, EXP1)


class TestCriteria:
    def test_formulas(self):
        rep = info_criteria(-100.0, 6, 50)
        assert rep.aic == pytest.approx(212.0)
        assert rep.bic == pytest.approx(200.0 + 6 * math.log(50))
        assert rep.edc == pytest.approx(200.0 + 6 * 0.2 * math.sqrt(50))

    def test_domain(self):
        with pytest.raises(DomainError):
            info_criteria(-10.0, 0, 50)


class TestResiduals:
    def test_normal_under_true_model(self, exp_data):
        res = rq_residuals(exp_data, EXP1)
        assert res.shape == (exp_data.n,)
        assert stats.kstest(res, "norm").pvalue > 0.01

    def test_matches_cdf_transform(self, exp_data):
        res = rq_residuals(exp_data, EXP1)
        want = stats.norm.ppf(-np.expm1(-exp_data.values))
        np.testing.assert_allclose(res, want, rtol=1e-8)


class TestBootstrap:
    def test_deterministic_and_sane(self, exp_data):
        kwargs = dict(M=60, seed=123, refit=FitOptions(max_iterations=300, restarts=1))
        a = bootstrap_pvalues(exp_data, EXP1, **kwargs)
        b = bootstrap_pvalues(exp_data, EXP1, **kwargs)
        assert a.ks_pvalue == b.ks_pvalue
        assert a.cvm_pvalue == b.cvm_pvalue
        # true model: p-values should not be extreme
        assert a.ks_pvalue > 0.05
        assert a.cvm_pvalue > 0.05
        assert a.failures <= 6

    def test_threads_do_not_change_pvalues(self, exp_data):
        kwargs = dict(M=24, seed=9, refit=FitOptions(max_iterations=200, restarts=1))
        serial = bootstrap_pvalues(exp_data, EXP1, threads=1, **kwargs)
        parallel = bootstrap_pvalues(exp_data, EXP1, threads=4, **kwargs)
        assert serial.ks_pvalue == parallel.ks_pvalue
        assert serial.cvm_pvalue == parallel.cvm_pvalue

    def test_small_m_warns(self, exp_data):
        rep = bootstrap_pvalues(exp_data, EXP1, M=12, seed=1,
                                refit=FitOptions(max_iterations=100, restarts=1))
        assert "resolution" in rep.warning

    def test_m_domain(self, exp_data):
        with pytest.raises(DomainError):
            bootstrap_pvalues(exp_data, EXP1, M=0, seed=1)
