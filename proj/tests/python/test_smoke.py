import math

import numpy as np
import pytest

try:
    import szego as sz
except ImportError:
    import _szego as sz


def free_coeffs():
    return sz.CoeffSeq({1: 1.0, -1: 1.0})


def linear_symbol():
    return sz.DiagonalSymbol(
        1,
        [
            sz.ScalarField("const", value=1.0),
            sz.ScalarField("poly", coeffs=[0.0, 1.0]),
            sz.ScalarField("const", value=1.0),
        ],
        hermitian=True,
    )


def test_coeffs_and_series():
    c = free_coeffs()
    assert c.wiener_norm() == pytest.approx(2.0)
    assert c(0.0) == pytest.approx(2.0)
    assert c(math.pi / 2).real == pytest.approx(0.0, abs=1e-12)


def test_toeplitz_eigenvalues_match_numpy():
    a = sz.build_toeplitz(free_coeffs(), 64)
    assert a.hermitian
    ours = np.array(sz.eigenvalues(a).reals())
    theirs = np.linalg.eigvalsh(a.to_dense())
    assert np.max(np.abs(ours - theirs)) < 1e-10


def test_moment_routes_agree():
    a = sz.build_kms(linear_symbol(), sz.KmsSampling.uniform, 32)
    for r, s in [(1, 0), (2, 0), (1, 1), (2, 2)]:
        dense = sz.moment_trace_dense(a, r, s)
        diag = sz.moment_trace_diagonal(a, r, s)
        assert abs(dense - diag) < 1e-10


def test_vmv_and_bounds():
    a = sz.build_toeplitz(free_coeffs(), 128)
    assert sz.vmv_variation(a, 1) == 0.0
    assert sz.gershgorin_bound(a) == pytest.approx(2.0)
    k = sz.build_kms(linear_symbol(), sz.KmsSampling.uniform, 256)
    assert sz.vmv_variation(k, 0) == pytest.approx(255.0 / 256.0)
    assert max(sz.singular_values(k)) <= sz.gershgorin_bound(k) + 1e-9


def test_predicted_values():
    law = sz.LimitLaw.dirac(free_coeffs())
    assert sz.predicted_moment(law, 2, 0).real == pytest.approx(2.0)
    assert sz.predicted_phi_integral(law, sz.TestFunction.power(4)) == pytest.approx(6.0)
    assert sz.nevai_limit(free_coeffs(), sz.TestFunction.power(6)) == pytest.approx(20.0)


def test_density_model():
    ramp = sz.DensityModel([0.0, 2.0])
    assert sz.schrodinger_density(ramp, 1.0) == pytest.approx(1.0 / 6.0)
    assert sz.density_integral(ramp) == pytest.approx(1.0, abs=1e-6)
    flat = sz.DensityModel([0.0])
    cdf = sz.predicted_cdf(flat, [0.0, math.sqrt(2.0)])
    assert cdf[0] == pytest.approx(0.5, abs=1e-9)
    assert cdf[1] == pytest.approx(0.75, abs=1e-9)


def test_empirical_against_arcsine():
    n = 1024
    sample = sz.eigenvalues(sz.build_toeplitz(free_coeffs(), n))
    grid = [x / 100.0 for x in range(-250, 251)]
    emp = sz.empirical_cdf(sample, grid)
    pred = sz.predicted_cdf(sz.DensityModel([0.0]), grid)
    assert sz.ks_distance(emp, pred) < 0.02


def test_perturbation_keeps_spectrum_close():
    n = 512
    base = sz.build_toeplitz(free_coeffs(), n)
    bumped = sz.perturb_density_one(free_coeffs(), sz.RateRule.sqrt(), 1.0, 3, n)
    grid = [x / 50.0 for x in range(-200, 201)]
    gap = sz.ks_distance(
        sz.empirical_cdf(sz.eigenvalues(base), grid),
        sz.empirical_cdf(sz.eigenvalues(bumped), grid),
    )
    assert gap <= 0.1
