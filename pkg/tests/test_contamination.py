import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate

from agnostic import (
    AxisPair,
    BernoulliProduct,
    Composite,
    Gaussian,
    GaussianTVSwap,
    PointMass,
    StudentT,
    ThreePointTail,
    TwoPoint,
    UniformBall,
    geom_median_instance,
    sample_contaminated,
    tv_swap_means,
)
from agnostic.contamination import fourth_moment_ratio


def test_eta_zero_all_clean():
    ld = sample_contaminated(Gaussian.isotropic(3), PointMass(np.ones(3)), 0.0, 500, 1)
    assert not ld.labels.any() and ld.n_corrupt == 0


def test_exact_count():
    ld = sample_contaminated(Gaussian.isotropic(2), PointMass([9.0, 9.0]), 0.1, 1000, 2)
    assert ld.n_corrupt == 100
    assert np.all(ld.rows[ld.labels] == 9.0)


def test_bernoulli_placement():
    ld = sample_contaminated(Gaussian.isotropic(2), PointMass([9.0, 9.0]), 0.1, 20000, 3, placement="bernoulli")
    assert abs(ld.n_corrupt - 2000) < 5 * math.sqrt(20000 * 0.09)


def test_seed_determinism():
    fam, adv = Gaussian.isotropic(4), AxisPair(1, 5.0)
    a = sample_contaminated(fam, adv, 0.2, 300, 17)
    b = sample_contaminated(fam, adv, 0.2, 300, 17)
    assert a.data == b.data and np.array_equal(a.labels, b.labels)
    assert not sample_contaminated(fam, adv, 0.2, 300, 18).data == a.data


def test_three_point_tail_example():
    adv = ThreePointTail(1.0, 0.0625)
    assert adv.atom == 2.0
    ld = sample_contaminated(TwoPoint(1.0), adv, 0.0625, 1600, 5)
    assert np.all(ld.rows[ld.labels] == 2.0)
    # population mean of the mixture: eta * atom
    assert 0.0625 * adv.atom == pytest.approx(0.0625 ** 0.75) == 0.125


@pytest.mark.parametrize("k", range(1, 41))
def test_three_point_tail_fourth_moment_exact(k):
    # r = eta^(1/4) sweeps (0, 0.707]; rational r keeps every moment exact
    r = Fraction(k, 40) * Fraction(707, 1000)
    eta = r ** 4
    atoms = [Fraction(-1), Fraction(1), 1 / r]
    probs = [(1 - eta) / 2, (1 - eta) / 2, eta]
    mu = sum(a * p for a, p in zip(atoms, probs))
    var = sum((a - mu) ** 2 * p for a, p in zip(atoms, probs))
    c4 = sum((a - mu) ** 4 * p for a, p in zip(atoms, probs)) / var ** 2
    assert eta <= Fraction(1, 4) and c4 <= 8
    assert fourth_moment_ratio([float(a) for a in atoms], [float(p) for p in probs]) == pytest.approx(float(c4))


@pytest.mark.parametrize("eta", [0.01, 0.05, 0.2])
def test_tv_swap_density_identity(eta):
    mu1, mu2 = tv_swap_means(eta)
    adv = GaussianTVSwap(mu1, mu2)
    t = np.linspace(-12, 12 + mu2, 20001)
    lhs = (1 - eta) * adv.pdf_clean(t) + eta * adv.noise_pdf(t, eta)
    rhs = (1 - eta) * adv.pdf_alt(t) + eta * adv.alt_noise_pdf(t, eta)
    assert np.max(np.abs(lhs - rhs)) <= 1e-10
    mass = integrate.quad(lambda s: float(adv.noise_pdf(s, eta)), -20, 20 + mu2, points=[(mu1 + mu2) / 2], limit=200)[0]
    assert mass == pytest.approx(1.0, abs=1e-8)


def test_tv_swap_sampler_matches_density():
    eta = 0.1
    mu1, mu2 = tv_swap_means(eta)
    adv = GaussianTVSwap(mu1, mu2)
    mean_q1 = integrate.quad(lambda s: s * float(adv.noise_pdf(s, eta)), -20, 20 + mu2, limit=200)[0]
    ld = sample_contaminated(Gaussian.isotropic(1), adv, eta, 200000, 7)
    draws = ld.rows[ld.labels, 0]
    assert np.all(draws >= (mu1 + mu2) / 2)
    assert draws.mean() == pytest.approx(mean_q1, abs=0.02)


def test_geom_median_instance_layout():
    ld = geom_median_instance(6, 0.1, 500, 3)
    assert np.all(ld.rows[~ld.labels, 0] == 0.0)
    assert np.all(ld.rows[ld.labels] == np.eye(6)[0] * 6)
    assert ld.n_corrupt == 50


def test_gaussian_moments_converge():
    g = Gaussian(np.array([1.0, -2.0, 3.0]), np.array([[4.0, 1, 0], [1, 2, 0], [0, 0, 1]]))
    ld = sample_contaminated(g, PointMass(np.zeros(3)), 0.0, 20000, 9)
    op = np.linalg.eigvalsh(g.covariance)[-1]
    assert np.linalg.norm(ld.rows.mean(0) - g.mean) <= 4 * math.sqrt(op * 3 / 20000)


@pytest.mark.parametrize("fam", [
    BernoulliProduct(np.array([0.2, 0.5, 0.9]), centered=True),
    UniformBall(3, 2.0),
    StudentT(3, 6.0),
    TwoPoint(2.0),
])
def test_family_moments(fam):
    x = fam.sample(np.random.default_rng(0), 200000)
    assert np.allclose(x.mean(0), fam.mean, atol=0.03)
    assert np.allclose(np.cov(x.T, bias=True).reshape(fam.covariance.shape), fam.covariance, atol=0.05 * max(1, np.max(fam.covariance)))


def test_composite_split():
    fam = Gaussian.isotropic(3)
    adv = Composite(((0.1, AxisPair(0, 20.0)), (0.9, PointMass(np.full(3, 4.0)))))
    out = adv.sample(np.random.default_rng(0), 100, fam)
    assert out.shape == (100, 3)
    assert np.sum(np.all(out == 4.0, axis=1)) == 90
