import unittest

import numpy as np

from crossover.errors import NegativeMass, NotNormalized, ValidationError
from crossover.measure import (Distribution, centered_moment, mean, mix, moment_report, new_distribution,
                               point_mass, random_distribution, tv_distance)
from crossover.test.common import random_distributions


class Test(unittest.TestCase):

    def test_new_distribution(self):
        """
        This test verifies that valid vectors are accepted and invalid ones rejected with the right error.
        """
        p = new_distribution([0.5, 0.5])
        assert p.nmax == 1 and p.tail_mass == 0.
        self.assertRaises(NotNormalized, new_distribution, [0.5, 0.4])
        self.assertRaises(NegativeMass, new_distribution, [1.1, -0.1])
        # both are validation errors, and therefore value errors
        self.assertRaises(ValidationError, new_distribution, [0.5, 0.4])
        self.assertRaises(ValueError, new_distribution, [1.1, -0.1])
        # roundoff below 1e-15 is clipped
        p = new_distribution([1. + 1.e-16, -1.e-16])
        assert p.values[1] == 0.

    # -----------------------------------------------------------------

    def test_values_are_read_only(self):
        """
        This test verifies that the probabilities of a distribution cannot be modified in place.
        """
        p = point_mass(2, 4)
        with self.assertRaises(ValueError):
            p.values[0] = 1.

    # -----------------------------------------------------------------

    def test_tail_mass(self):
        """
        This test verifies that stored mass plus tail mass must add up to one.
        """
        p = Distribution(np.array([0.5, 0.5 - 1.e-9]), 1.e-9)
        assert abs(p.mass + p.tail_mass - 1.) < 1.e-15
        self.assertRaises(NegativeMass, Distribution, np.array([1.]), -1.e-3)

    # -----------------------------------------------------------------

    def test_tv_distance(self):
        """
        This test verifies the total variation examples and the metric axioms on random distributions.
        """
        assert abs(tv_distance(new_distribution([1., 0.]), new_distribution([0., 1.])) - 2.) < 1.e-15
        assert abs(tv_distance(new_distribution([0.5, 0.5]), new_distribution([0.5, 0.5]))) < 1.e-15
        assert abs(tv_distance(point_mass(0), point_mass(3)) - 2.) < 1.e-15

        sample = random_distributions(30, 12)
        for p, q, r in zip(sample[:10], sample[10:20], sample[20:]):
            assert abs(tv_distance(p, q) - tv_distance(q, p)) < 1.e-15
            assert tv_distance(p, r) <= tv_distance(p, q) + tv_distance(q, r) + 1.e-15
            assert tv_distance(p, p) == 0.

    # -----------------------------------------------------------------

    def test_moments(self):
        """
        This test verifies the mean and the centered moments on small examples.
        """
        p = new_distribution([0., 0.5, 0.5])
        assert abs(mean(p) - 1.5) < 1.e-15
        assert abs(centered_moment(p, 1, 1.5) - 0.5) < 1.e-15
        assert abs(centered_moment(p, 2, 1.5) - 0.25) < 1.e-15
        assert centered_moment(point_mass(3, 5), 1) == 0.
        self.assertRaises(ValueError, centered_moment, p, 0.5)

        report = moment_report(p, r=3.)
        assert abs(report.M1 - 0.5) < 1.e-15
        assert abs(report.Mr - 0.125) < 1.e-15
        self.assertRaises(ValueError, moment_report, p, 1.)

    # -----------------------------------------------------------------

    def test_mean_is_linear(self):
        """
        This test verifies that the mean of a mixture is the mixture of the means.
        """
        p, q = random_distributions(2, 10)
        for weight in (0., 0.3, 1.):
            mixture = mix(p, q, weight)
            assert abs(mean(mixture) - (weight * mean(p) + (1. - weight) * mean(q))) < 1.e-12
        self.assertRaises(ValueError, mix, p, q, 1.5)

    # -----------------------------------------------------------------

    def test_random_distribution(self):
        """
        This test verifies that random distributions are valid, seeded and hit a prescribed mean.
        """
        first = random_distribution(np.random.default_rng(7), 10, 2.5)
        second = random_distribution(np.random.default_rng(7), 10, 2.5)
        assert (first.values == second.values).all()
        assert abs(mean(first) - 2.5) < 1.e-12
        assert (first.values > 0.).all()

        p = random_distribution(np.random.default_rng(1), 6, nmax=20)
        assert p.nmax == 20 and p.support() == 6
        self.assertRaises(ValueError, random_distribution, np.random.default_rng(1), 4, 5.)

    # -----------------------------------------------------------------

    def test_resized(self):
        """
        This test verifies that resizing keeps the probabilities and refuses to drop mass.
        """
        p = new_distribution([0.25, 0.75])
        larger = p.resized(5)
        assert larger.nmax == 5 and tv_distance(p, larger) == 0.
        assert larger.resized(1).nmax == 1
        self.assertRaises(ValueError, p.resized, 0)


if __name__ == "__main__":
    unittest.main()
