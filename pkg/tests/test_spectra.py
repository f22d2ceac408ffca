import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from realign.random_states import RngSeed, q_matrix, sample_wishart
from realign.spectra import (
    QUARTER_CIRCLE,
    EmpiricalSpectrum,
    histogram,
    ks_distance,
    qc_cdf,
    qc_density,
    qc_mean,
    qc_moment,
    schatten_norm,
    singular_values,
    spectrum_moment,
    trace_norm,
)
from realign.tensor_ops import BipartiteShape

from conftest import random_complex


def quad_moment(k):
    val, _ = integrate.quad(lambda x: x**k * qc_density(x), 0, 2, epsabs=1e-13, epsrel=1e-13, limit=200)
    return val


def random_unitary(rng, n):
    q, r = np.linalg.qr(random_complex(rng, n, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def test_singular_values_basic():
    sp = singular_values(np.eye(5))
    assert len(sp) == 5 and np.all(sp.values == 1)
    np.testing.assert_allclose(singular_values(np.diag([3, -4]).astype(complex)).values, [4, 3])
    u = np.array([1, 1j, 0]) / math.sqrt(2)
    v = np.array([0, 1, 0, 0])
    sv = singular_values(np.outer(u, v.conj())).values
    np.testing.assert_allclose(sv, [1, 0, 0], atol=1e-15)


def test_singular_values_rejects_nonfinite():
    m = np.eye(3)
    m[1, 1] = np.nan
    with pytest.raises(ValueError):
        singular_values(m)
    m[1, 1] = np.inf
    with pytest.raises(ValueError):
        singular_values(m)


def test_spectrum_is_sorted_and_sized(rng):
    sp = singular_values(random_complex(rng, 4, 7))
    assert len(sp) == 4
    assert np.all(np.diff(sp.values) <= 0)


def test_norms():
    assert trace_norm(np.eye(6)) == pytest.approx(6)
    with pytest.raises(ValueError):
        schatten_norm(np.eye(2), 0.5)
    m = np.diag([3.0, 4.0])
    assert schatten_norm(m, 2) == pytest.approx(5)
    assert schatten_norm(m, math.inf) == pytest.approx(4)
    assert schatten_norm(m, 3) == pytest.approx((27 + 64) ** (1 / 3))


def test_trace_norm_of_density_matrix():
    ws = sample_wishart(BipartiteShape(2, 3, 3), RngSeed(0))
    assert trace_norm(ws.w / ws.trace) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 8), m=st.integers(1, 8), seed=st.integers(0, 2**32 - 1))
def test_frobenius_identity(n, m, seed):
    a = random_complex(np.random.default_rng(seed), n, m)
    assert schatten_norm(a, 2) ** 2 == pytest.approx(np.sum(np.abs(a) ** 2), rel=1e-10)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 8), seed=st.integers(0, 2**32 - 1))
def test_trace_norm_unitarily_invariant(n, seed):
    rng = np.random.default_rng(seed)
    a = random_complex(rng, n, n)
    u, v = random_unitary(rng, n), random_unitary(rng, n)
    assert trace_norm(u @ a @ v) == pytest.approx(trace_norm(a), abs=1e-9)


def test_holder_sandwich_on_q():
    d, s = 10, 20
    shape = BipartiteShape(d, d, s)
    for t in range(10):
        q = q_matrix(sample_wishart(shape, RngSeed(1, t)))
        n1, n2, n4 = (schatten_norm(q, p) for p in (1, 2, 4))
        assert n2**3 / n4**2 <= n1 * (1 + 1e-12)
        assert n1 <= d * n2 * (1 + 1e-12)


def test_qc_moments_closed_form():
    assert [qc_moment(k) for k in (0, 2, 4, 6)] == [1, 1, 2, 5]
    assert qc_mean() == pytest.approx(8 / (3 * math.pi), abs=1e-15)
    assert qc_mean() == pytest.approx(0.84883, abs=1e-5)
    # odd formula at p = 0 written out
    assert 2**5 * math.factorial(0) * math.factorial(2) / (math.pi * math.factorial(4)) == pytest.approx(
        8 / (3 * math.pi), abs=1e-14
    )


@pytest.mark.parametrize("k", range(9))
def test_qc_moments_match_quadrature(k):
    assert qc_moment(k) == pytest.approx(quad_moment(k), abs=1e-8)


def test_qc_density_normalised_and_supported():
    total, _ = integrate.quad(qc_density, 0, 2, epsabs=1e-13)
    assert total == pytest.approx(1.0, abs=1e-9)
    assert qc_density(-0.1) == 0 and qc_density(2.1) == 0


@pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 1.3, 1.9, 2.0])
def test_qc_cdf_matches_quadrature(x):
    val, _ = integrate.quad(qc_density, 0, x, epsabs=1e-13, epsrel=1e-13)
    assert qc_cdf(x) == pytest.approx(val, abs=1e-10)


def test_qc_cdf_shape():
    xs = np.linspace(-1, 3, 401)
    f = qc_cdf(xs)
    assert np.all(np.diff(f) >= 0)
    assert qc_cdf(0.0) == 0 and qc_cdf(2.0) == 1


def test_spectrum_moment():
    sp = EmpiricalSpectrum([2.0, 0.0], 2)
    assert spectrum_moment(sp, 2) == 2
    assert spectrum_moment(sp, 0) == 1


def test_ks_of_quantile_sample_is_small():
    n = 1000
    vals = [QUARTER_CIRCLE.ppf((i + 0.5) / n) for i in range(n)]
    assert ks_distance(EmpiricalSpectrum(vals, n)) <= 1 / n + 1e-9


def test_ks_of_constant_spectrum():
    cdf1, _ = integrate.quad(qc_density, 0, 1, epsabs=1e-13)
    # two-sided statistic: the left limit of the step at 1 gives CDF(1) > 1 - CDF(1)
    d = ks_distance(EmpiricalSpectrum(np.ones(10), 10))
    assert d == pytest.approx(max(1 - cdf1, cdf1), abs=1e-10)
    assert d == pytest.approx(cdf1, abs=1e-10)


def test_ks_rejects_empty():
    with pytest.raises(ValueError):
        ks_distance(EmpiricalSpectrum([], 1))


def test_histogram_binning():
    sp = EmpiricalSpectrum([0.1, 0.5, 3.0], 3)
    edges, counts, dens = histogram(sp)
    assert len(counts) == 64 and edges[-1] == 3.0
    assert counts.sum() == 3
    assert np.sum(dens * np.diff(edges)) == pytest.approx(1.0)
    edges, _, _ = histogram(EmpiricalSpectrum([0.2], 1))
    assert edges[-1] == 2.5


def test_q_spectrum_small_scale_moments():
    d = s = 20
    q = q_matrix(sample_wishart(BipartiteShape(d, d, s), RngSeed(3)))
    sp = singular_values(q)
    assert sp.dimension == d * d
    assert spectrum_moment(sp, 2) == pytest.approx(1.0, abs=0.15)
