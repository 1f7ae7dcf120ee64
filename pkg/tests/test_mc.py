import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, stats

from normmax import mc, specfn
from normmax.distance import bracket, normalized_max_pdf, sup_distance
from normmax.errors import DomainError
from normmax.norming import AuxiliaryKind, LogSize, Method, NormingPair, norming_pair

AF, AH = AuxiliaryKind.FISHER_TIPPETT, AuxiliaryKind.HALL
IDENTITY = NormingPair(0.0, 1.0)


def test_single_variable_median():
    assert mc.sample_max(1, 0.5) == 0.0


@pytest.mark.parametrize("n", [1, 2, 7, 30])
def test_median_transform(n):
    assert mc.sample_max(n, 0.5**n) == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("n", [1, 3, 10, 1000])
def test_matches_ppf_of_root(n):
    u = np.linspace(0.001, 0.999, 101)
    np.testing.assert_allclose(mc.sample_max(n, u), stats.norm.ppf(u ** (1 / n)), rtol=1e-9, atol=1e-12)


@given(st.floats(1e-300, 1 - 1e-16))
def test_no_saturation_at_huge_n(u):
    n = LogSize.pow10(30)
    x = mc.sample_max(n, u)
    assert math.isfinite(x)
    # the upper tail is about -log(u)/n, so x sits near the tail quantile there
    target = specfn.std_normal_quantile_upper(specfn.TailProbability.from_log(math.log(-math.log(u)) - n.log_n))
    assert x == pytest.approx(target, rel=1e-12)


def test_monotone_in_u():
    u = np.linspace(1e-6, 1 - 1e-6, 5001)
    x = mc.sample_max(LogSize.pow10(100), u)
    assert np.all(np.diff(x) > 0)


@pytest.mark.parametrize("u", [0.0, 1.0, -0.1, 2.0, math.nan])
def test_sample_max_domain(u):
    with pytest.raises(DomainError):
        mc.sample_max(10, u)


def test_uniforms_inside_unit_interval():
    u = mc.uniforms(5, 0, 100_000)
    assert np.all((u > 0) & (u < 1))
    assert stats.kstest(u, "uniform").pvalue > 1e-4


def test_config_validation():
    p = norming_pair(Method.EXACT, AF, 10)
    with pytest.raises(DomainError):
        mc.SimConfig(LogSize.of(10), 0, 1, p)
    with pytest.raises(DomainError):
        mc.SimConfig(LogSize.of(10), mc.MAX_REPS + 1, 1, p)
    with pytest.raises(DomainError):
        mc.SimConfig(LogSize.of(10), 10, -1, p)
    with pytest.raises(DomainError):
        mc.SimConfig(LogSize.of(10), 10, 2**64, p)


@given(st.lists(st.floats(-5, 10), min_size=1, max_size=200))
def test_ks_statistic_matches_scipy(xs):
    ours = mc.ks_statistic(np.array(xs), specfn.gumbel_cdf)
    assert ours == pytest.approx(stats.kstest(xs, stats.gumbel_r.cdf).statistic, abs=1e-12)


def test_single_variable_law():
    reps = 10**6
    cfg = mc.SimConfig(LogSize.of(1), reps, 11, IDENTITY)
    z = mc.draw(cfg)
    assert mc.ks_statistic(z, stats.norm.cdf) < 2 / math.sqrt(reps)


def test_deterministic_and_independent_of_jobs():
    cfg = mc.SimConfig(LogSize.of(100), 600_000, 3, norming_pair(Method.EXACT, AF, 100))
    a = mc.simulate(cfg, jobs=1)
    b = mc.simulate(cfg, jobs=4)
    assert a == b
    assert a == mc.simulate(cfg, jobs=1)
    other = mc.simulate(mc.SimConfig(cfg.n, cfg.reps, 4, cfg.pair))
    assert other.ks_distance != a.ks_distance


@pytest.mark.parametrize("n, method, aux", [(10, Method.EXACT, AF), (100, Method.HALL_STAR, AH)])
def test_ks_near_analytic_distance(n, method, aux):
    reps = 10**6
    pair = norming_pair(method, aux, n)
    rep = mc.simulate(mc.SimConfig(LogSize.of(n), reps, 1, pair), jobs=4)
    d = sup_distance(n, pair).sup
    assert abs(rep.ks_distance - d) <= 5 / math.sqrt(reps)
    assert abs(rep.ks_distance - d) <= 4 / math.sqrt(reps)


def test_mean_matches_quadrature():
    n, reps = 100, 10**6
    pair = norming_pair(Method.EXACT, AF, n)
    lo, hi = bracket(n, pair)
    mean, _ = integrate.quad(lambda x: x * normalized_max_pdf(n, pair, x), lo, hi, limit=200, epsabs=1e-12)
    rep = mc.simulate(mc.SimConfig(LogSize.of(n), reps, 1, pair), jobs=4)
    assert abs(rep.sample_mean - mean) < 3 * rep.sample_sd / math.sqrt(reps)
    # the normalised maximum is still visibly off the Gumbel mean at n = 100
    assert abs(mean - np.euler_gamma) < 0.3


def test_raw_dump(tmp_path):
    path = tmp_path / "raw.txt"
    cfg = mc.SimConfig(LogSize.of(50), 1000, 9, norming_pair(Method.EXACT, AF, 50))
    rep = mc.simulate(cfg, raw_path=path)
    z = np.loadtxt(path)
    assert z.shape == (1000,)
    np.testing.assert_array_equal(z, mc.draw(cfg))
    assert rep.ks_distance == mc.ks_statistic(z, specfn.gumbel_cdf)
