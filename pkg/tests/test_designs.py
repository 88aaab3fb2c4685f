"""
Catalogue des designs : densités, échantillonnage et constantes log-Lipschitz
"""

import math

import numpy as np
import pytest
from scipy import integrate, stats

from nwbound.errors import DomainError
from nwbound.services.designs import (
    DESIGN_FACTORIES,
    as_product,
    log_lipschitz_constant,
    make_design,
    make_product_design,
    sample,
)
from nwbound.services.geometry import BoxInterval

CATALOG = [
    ("laplace", {"mu": 0.0, "lam": 1.0}),
    ("cauchy", {"mu": 0.0, "gamma": 1.0}),
    ("uniform", {"a": -2.0, "b": 2.0}),
    ("pareto", {"alpha": 2.0}),
    ("normal", {"mu": 0.5, "sigma": 2.0}),
]


def interval(a, b):
    return BoxInterval.from_bounds([a], [b])


def numerical_slope_sup(design, a, b, points=400):
    grid = np.linspace(a, b, points)
    return float(np.max(np.abs(design.log_pdf_slope(grid))))


class TestCatalog:
    def test_known_names(self):
        assert set(DESIGN_FACTORIES) == {"laplace", "cauchy", "uniform", "pareto", "normal"}

    def test_unknown_design_lists_names(self):
        with pytest.raises(DomainError, match="laplace"):
            make_design("gaussian")

    def test_invalid_parameters(self):
        with pytest.raises(DomainError):
            make_design("laplace", lam=-1.0)
        with pytest.raises(DomainError):
            make_design("uniform", a=1.0, b=0.0)
        with pytest.raises(DomainError):
            make_design("pareto", shape=2.0)

    @pytest.mark.parametrize("kind,params", CATALOG)
    def test_density_integrates_to_one(self, kind, params):
        design = make_design(kind, **params)
        lo, hi = design.support.lower[0], design.support.upper[0]
        mass, _ = integrate.quad(design.pdf, lo, hi, limit=200)
        assert mass == pytest.approx(1.0, abs=1e-7)

    @pytest.mark.parametrize("kind,params", CATALOG)
    def test_pdf_prime_matches_finite_difference(self, kind, params):
        design = make_design(kind, **params)
        x = np.array([1.3, 1.7, 2.4])  # hors des points anguleux
        eps = 1e-6
        numeric = (design.pdf(x + eps) - design.pdf(x - eps)) / (2 * eps)
        np.testing.assert_allclose(design.pdf_prime(x), numeric, rtol=1e-5, atol=1e-9)

    @pytest.mark.parametrize("kind,params", CATALOG)
    def test_samples_follow_distribution(self, kind, params):
        design = make_design(kind, **params)
        draws = sample(design, 100_000, seed=7)
        assert np.all(np.isfinite(draws))
        statistic = stats.kstest(draws, design.cdf).statistic
        assert statistic <= 0.01

    def test_sampling_is_deterministic(self):
        design = make_design("cauchy", mu=1.0, gamma=0.5)
        np.testing.assert_array_equal(sample(design, 1000, seed=3), sample(design, 1000, seed=3))

    def test_label(self):
        assert make_design("laplace", mu=0.0, lam=1.0).label == "laplace(mu=0, lam=1)"


class TestLogLipschitzConstants:
    def test_laplace(self):
        assert log_lipschitz_constant(make_design("laplace", lam=2.0), BoxInterval.real_line()) == 0.5

    def test_uniform(self):
        assert log_lipschitz_constant(make_design("uniform", a=-2.0, b=2.0), interval(-1.0, 1.0)) == 0.0

    def test_pareto(self):
        design = make_design("pareto", alpha=2.0)
        assert log_lipschitz_constant(design, interval(1.0, math.inf)) == 3.0
        assert log_lipschitz_constant(design, interval(2.0, 5.0)) == 1.5

    def test_interval_outside_support(self):
        with pytest.raises(DomainError):
            log_lipschitz_constant(make_design("pareto", alpha=2.0), interval(0.5, 2.0))

    def test_normal_matches_numerical_sup(self, rng):
        for _ in range(20):
            mu, sigma = rng.uniform(-1.0, 1.0), rng.uniform(0.5, 2.0)
            a = rng.uniform(-3.0, 2.0)
            b = a + rng.uniform(0.1, 2.0)
            design = make_design("normal", mu=mu, sigma=sigma)
            exact = log_lipschitz_constant(design, interval(a, b))
            assert numerical_slope_sup(design, a, b) == pytest.approx(exact, rel=1e-4)

    def test_cauchy_matches_numerical_sup(self, rng):
        for _ in range(20):
            mu, gamma = rng.uniform(-1.0, 1.0), rng.uniform(1.0, 2.0)
            a = rng.uniform(-3.0, 2.0)
            b = a + rng.uniform(0.1, 2.0)
            design = make_design("cauchy", mu=mu, gamma=gamma)
            exact = log_lipschitz_constant(design, interval(a, b))
            numeric = numerical_slope_sup(design, a, b)
            assert numeric <= exact * (1 + 1e-12)
            assert numeric == pytest.approx(exact, rel=1e-4)

    def test_cauchy_unbounded_interval(self):
        design = make_design("cauchy", mu=0.0, gamma=1.0)
        assert log_lipschitz_constant(design, BoxInterval.real_line()) == 1.0
        # pente maximale hors de [3, ∞) : atteinte en 3
        assert log_lipschitz_constant(design, interval(3.0, math.inf)) == pytest.approx(0.6)

    def test_difference_quotients_are_dominated(self, rng):
        """|log f(x) − log f(y)| ≤ L_f|x − y| sur 50 intervalles tirés dans chaque support"""
        for kind, params in CATALOG:
            design = make_design(kind, **params)
            lo = max(design.support.lower[0], -3.0) + 0.01
            hi = min(design.support.upper[0], 4.0) - 0.01
            for _ in range(50):
                a, b = np.sort(rng.uniform(lo, hi, size=2))
                L_f = log_lipschitz_constant(design, interval(a, b))
                x, y = rng.uniform(a, b, size=(2, 200))
                keep = np.abs(x - y) > 1e-9
                quotient = np.abs(design.log_pdf(x[keep]) - design.log_pdf(y[keep])) / np.abs(x[keep] - y[keep])
                assert np.all(quotient <= L_f * (1 + 1e-9) + 1e-12), f"{kind} sur ({a:g}, {b:g})"


class TestProductDesign:
    def test_joint_density_is_product(self):
        laplace = make_design("laplace")
        uniform = make_design("uniform", a=-1.0, b=1.0)
        product = make_product_design([laplace, uniform])
        points = np.array([[0.3, 0.2], [-1.0, 0.9]])
        expected = laplace.pdf(points[:, 0]) * uniform.pdf(points[:, 1])
        np.testing.assert_allclose(product.pdf(points), expected, rtol=1e-15)

    def test_support_and_sample_shape(self):
        product = make_product_design([make_design("pareto", alpha=2.0), make_design("laplace")])
        assert product.support == BoxInterval.from_bounds([1.0, -math.inf], [math.inf, math.inf])
        assert product.sample(50, np.random.default_rng(0)).shape == (50, 2)

    def test_log_lipschitz_is_max_over_factors(self):
        product = make_product_design([make_design("laplace", lam=0.5), make_design("laplace", lam=1.0)])
        assert product.log_lipschitz_constant(BoxInterval.real_line(2)) == 2.0

    def test_as_product_wraps_single_design(self):
        wrapped = as_product(make_design("laplace"))
        assert wrapped.dim == 1
        assert as_product(wrapped) is wrapped

    def test_empty_product(self):
        with pytest.raises(DomainError):
            make_product_design([])
