import unittest
from unittest import mock

import numpy as np

from crossover import genfunc
from crossover.errors import DivergentInversion, ParamMismatch
from crossover.fixpoint import analytic_random, analytic_takahata
from crossover.genfunc import (CoeffVector, coefficient_lipschitz_bound, coeffs_from_distribution,
                               contraction_factor, decay_rate, distribution_from_coeffs, expansion_at_one,
                               fixed_coeffs_recursion, fragment_generating_function, generating_function,
                               geometric_coeffs, induced_recombinator, iterate_coeffs, membership,
                               takahata_coeffs, weighted_metric)
from crossover.measure import mean, new_distribution, point_mass, tv_distance
from crossover.recombinator_random import RandomRecombinator, fragment_measure
from crossover.test.common import random_distributions


def _random_coeffs(rng, alpha, delta=1.5, gamma=0.25, K=32):
    values = rng.random(K + 1) * delta ** np.arange(K + 1)
    values[:2] = 1., alpha
    return CoeffVector(values, alpha=alpha, delta=delta, gamma=gamma)


class Test(unittest.TestCase):

    def test_coeffs_examples(self):
        """
        This test verifies the coefficients of point masses and of the random UC fixed point.
        """
        a = coeffs_from_distribution(point_mass(0), K=5)
        assert (a.values == np.array([1., 0., 0., 0., 0., 0.])).all()
        a = coeffs_from_distribution(point_mass(1), K=5)
        assert (a.values == np.array([1., 0.5, 0., 0., 0., 0.])).all()

        fixed = analytic_random(2., 256).distribution
        a = coeffs_from_distribution(fixed, K=20)
        assert (abs(a.values - 1.) < 1.e-6).all()

    # -----------------------------------------------------------------

    def test_first_coefficient_is_half_mean(self):
        """
        This test verifies a_1 = mean(p) / 2.
        """
        for p in random_distributions(20, 30):
            a = coeffs_from_distribution(p, K=8)
            assert abs(a.values[1] - 0.5 * mean(p)) < 1.e-12
            assert a.alpha == a.values[1]

    # -----------------------------------------------------------------

    def test_inversion(self):
        """
        This test verifies that coefficients are turned back into the distribution they came from.
        """
        assert distribution_from_coeffs(CoeffVector(np.array([1., 0., 0., 0.])), 3).values[0] == 1.
        p = distribution_from_coeffs(CoeffVector(np.array([1., 0.5, 0., 0.])), 3)
        assert (abs(p.values - np.array([0., 1., 0., 0.])) < 1.e-15).all()

        # a_k = 2^-k belongs to the random UC fixed point with mean 1
        a = CoeffVector(0.5 ** np.arange(201))
        with mock.patch.object(genfunc.LOG, 'warning') as warning:
            p = distribution_from_coeffs(a, 10)
        warning.assert_not_called()
        assert (abs(p.values - analytic_random(1., 256).distribution.values[:11]) < 1.e-8).all()

        for p in random_distributions(20, 20, decay=0.4):
            back = distribution_from_coeffs(coeffs_from_distribution(p, p.nmax + 4), p.nmax)
            assert tv_distance(back, p) <= 1.e-8

    # -----------------------------------------------------------------

    def test_divergent_inversion(self):
        """
        This test verifies that coefficients growing like 2^k cannot be inverted.
        """
        a = CoeffVector(2. ** np.arange(41))
        with mock.patch.object(genfunc.LOG, 'warning') as warning:
            self.assertRaises(DivergentInversion, distribution_from_coeffs, a, 10)
        warning.assert_called_once()

    # -----------------------------------------------------------------

    def test_induced_recombinator(self):
        """
        This test verifies the induced recombinator on the geometric vectors and on a short example.
        """
        for alpha in (0., 0.5, 1., 1.5):
            a = geometric_coeffs(alpha, 20)
            assert (abs(induced_recombinator(a).values - a.values) <= 1.e-12 * np.maximum(1., a.values)).all()
        a = CoeffVector(np.array([1., 1., 0., 0.]))
        assert (abs(induced_recombinator(a).values - np.array([1., 1., 1. / 3., 0.])) < 1.e-15).all()

    # -----------------------------------------------------------------

    def test_commuting_diagram(self):
        """
        This test verifies that random UC on distributions and the induced map on coefficients agree.
        """
        for p in random_distributions(20, 16):
            K = 2 * p.nmax
            a = induced_recombinator(coeffs_from_distribution(p, K))
            b = coeffs_from_distribution(RandomRecombinator(truncation=K).apply(p), K)
            assert weighted_metric(a, a.with_values(b.values)) <= 1.e-9

    # -----------------------------------------------------------------

    def test_weighted_metric(self):
        """
        This test verifies the weighted metric and that vectors from different spaces are not compared.
        """
        a = CoeffVector(np.array([1., 0.5, 0.3]), delta=2., gamma=0.25)
        assert weighted_metric(a, a) == 0.
        b = a.with_values(np.array([1., 0.5, 0.3 + 4.]))
        assert abs(weighted_metric(a, b) - 0.25 ** 2) < 1.e-15
        c = CoeffVector(np.array([1., 0.5, 0.3]), delta=1.5, gamma=0.25)
        self.assertRaises(ParamMismatch, weighted_metric, a, c)

    # -----------------------------------------------------------------

    def test_membership(self):
        """
        This test verifies the membership test of X_{alpha,delta}.
        """
        assert membership(CoeffVector(np.array([1., 0.7, 0., 0.]), delta=1.2))
        assert not membership(CoeffVector(np.array([1., 0.7, 1.2 ** 2 * 1.01]), delta=1.2))
        fixed = analytic_random(2., 256).distribution
        assert membership(coeffs_from_distribution(fixed, 64, delta=1.05))
        assert not membership(CoeffVector(np.array([1., 0.7, 0.1]), alpha=0.6))

    # -----------------------------------------------------------------

    def test_fixed_coeffs_recursion(self):
        """
        This test verifies that the recursion reproduces a_k = alpha^k.
        """
        assert (abs(fixed_coeffs_recursion(1., 5).values - 1.) < 1.e-15).all()
        assert (fixed_coeffs_recursion(0., 6).values[1:] == 0.).all()
        expected = np.array([1., 0.5, 0.25, 0.125, 0.0625])
        assert (abs(fixed_coeffs_recursion(0.5, 4).values - expected) < 1.e-15).all()

        for alpha in (0.25, 0.5, 1., 2.):
            fixed = analytic_random(2. * alpha, 256).distribution
            a = coeffs_from_distribution(fixed, 10)
            recursion = fixed_coeffs_recursion(alpha, 10)
            assert (abs(a.values - recursion.values) <= 1.e-8 * np.maximum(1., recursion.values)).all()

    # -----------------------------------------------------------------

    def test_contraction(self):
        """
        This test verifies the contraction factor 2/(3-3 gamma) and the Lipschitz bound 2/(1-2 gamma).
        """
        assert abs(contraction_factor(0.25) - 8. / 9.) < 1.e-15
        assert abs(coefficient_lipschitz_bound(0.25) - 4.) < 1.e-15
        self.assertRaises(ValueError, contraction_factor, 0.4)

        rng = np.random.default_rng(42)
        for _ in range(50):
            alpha = rng.uniform(0.1, 1.)
            a, b = _random_coeffs(rng, alpha), _random_coeffs(rng, alpha)
            c = _random_coeffs(rng, rng.uniform(0.1, 1.))
            ratio = weighted_metric(induced_recombinator(a), induced_recombinator(b)) / weighted_metric(a, b)
            assert ratio <= contraction_factor(0.25) + 1.e-12
            ratio = weighted_metric(induced_recombinator(a), induced_recombinator(c)) / weighted_metric(a, c)
            assert ratio <= coefficient_lipschitz_bound(0.25)

    # -----------------------------------------------------------------

    def test_iterate_coeffs(self):
        """
        This test verifies that iterating the induced map converges to (1, alpha, alpha^2, ...).
        """
        a = CoeffVector(np.array([1., 1., 0., 0., 0., 0., 0., 0., 0.]), delta=1.)
        target = geometric_coeffs(1., 8, delta=1.)
        assert weighted_metric(iterate_coeffs(a, 400), target) < 1.e-10

    # -----------------------------------------------------------------

    def test_generating_functions(self):
        """
        This test verifies psi(1) = 1, that random UC squares the fragment generating function, and that the
        coefficients rebuild psi around z = 1.
        """
        z = np.linspace(-0.9, 0.9, 7)
        for p in random_distributions(10, 12):
            assert abs(generating_function(p, 1.) - 1.) < 1.e-14
            assert abs(generating_function(fragment_measure(p), 1.) - 1.) < 1.e-14
            assert (abs(fragment_generating_function(p, z) - generating_function(fragment_measure(p), z)) < 1.e-12).all()
            out = RandomRecombinator(truncation=2 * p.nmax).apply(p)
            assert (abs(generating_function(out, z) - fragment_generating_function(p, z) ** 2) < 1.e-12).all()
            a = coeffs_from_distribution(p, p.nmax)
            assert (abs(expansion_at_one(a, z) - generating_function(p, z)) < 1.e-8).all()
        assert abs(fragment_generating_function(point_mass(3), 1.) - 1.) < 1.e-15

    # -----------------------------------------------------------------

    def test_takahata_coeffs(self):
        """
        This test verifies that the Takahata fixed point with mean m has b_k = m^k.
        """
        fixed = analytic_takahata(1., 128).distribution
        b = takahata_coeffs(coeffs_from_distribution(fixed, 15))
        assert (abs(b.values - 1.) < 1.e-6).all()

    # -----------------------------------------------------------------

    def test_decay_rate(self):
        """
        This test verifies the decay estimate on geometric tails and on finite vectors.
        """
        assert abs(decay_rate(0.5 ** np.arange(60)) - 0.5) < 1.e-3
        assert decay_rate(new_distribution([1.])) == 0.

    # -----------------------------------------------------------------

    def test_invalid_vectors(self):
        """
        This test verifies that a_0 must be 1 and gamma must lie in (0, 1/3).
        """
        self.assertRaises(ValueError, CoeffVector, np.array([0.9, 0.5]))
        self.assertRaises(ValueError, CoeffVector, np.array([1., 0.5]), gamma=0.4)
        self.assertRaises(ValueError, coeffs_from_distribution, point_mass(1), 0)


if __name__ == "__main__":
    unittest.main()
