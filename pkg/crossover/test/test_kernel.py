import unittest
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from crossover.kernel import (KernelQ, c_coefficient_closed_form, takahata_transition, validate_row, weight)

Q_GRID = (0., 0.25, 0.5, 0.75, 1.)


class Test(unittest.TestCase):

    def test_weight(self):
        """
        This test verifies the unnormalized weights, including 0**0 = 1 at q = 0.
        """
        assert weight(0., 2, 2, 1, 3) == 2.
        assert weight(0., 0, 4, 1, 3) == 0.
        assert abs(weight(0.5, 0, 2, 1, 1) - 0.5) < 1.e-15
        assert weight(0.5, 0, 1, 1, 1) == 0.
        self.assertRaises(ValueError, weight, 0.5, -1, 3, 1, 1)

    # -----------------------------------------------------------------

    def test_c_coefficient(self):
        """
        This test verifies the normalization constants at q = 0, 1/2 and 1.
        """
        assert abs(KernelQ(0.5).c_coefficient(1, 1) - 1. / 3.) < 1.e-15
        assert abs(KernelQ(0.).c_coefficient(1, 3) - 1. / 6.) < 1.e-15
        assert abs(KernelQ(1.).c_coefficient(1, 3) - 1. / 8.) < 1.e-15

    # -----------------------------------------------------------------

    def test_closed_form(self):
        """
        This test verifies that the closed-form constant agrees with the direct sum for q < 1.
        """
        for q in (0., 0.1, 0.5, 0.9, 0.999):
            kernel = KernelQ(q)
            for k in range(31):
                for l in range(31):
                    direct = kernel.c_coefficient(k, l)
                    assert abs(direct - c_coefficient_closed_form(q, k, l)) <= 1.e-10 * direct
        self.assertRaises(ValueError, c_coefficient_closed_form, 1., 1, 1)

    # -----------------------------------------------------------------

    def test_transition(self):
        """
        This test verifies single transition probabilities, and that internal UC splits uniformly.
        """
        assert abs(KernelQ(0.5).transition(1, 1, 1, 1) - 2. / 3.) < 1.e-15
        assert abs(KernelQ(1.).transition(1, 1, 1, 1) - 0.5) < 1.e-15
        assert abs(KernelQ(0.).transition(2, 2, 1, 3) - 1. / 3.) < 1.e-15
        assert KernelQ(0.5).transition(1, 2, 1, 1) == 0.

        internal = KernelQ(0.)
        for k in range(12):
            for l in range(12):
                row = internal.row(k, l)
                inside = np.arange(row.size)
                inside = (inside >= min(k, l)) & (inside <= max(k, l))
                assert (abs(row[inside] - 1. / (1 + abs(k - l))) < 1.e-15).all()
                assert (row[~inside] == 0.).all()

    # -----------------------------------------------------------------

    def test_random_uc_row(self):
        """
        This test verifies that at q = 1 the outcome probabilities are min(i, j, k, l) + 1 over (k+1)(l+1).
        """
        kernel = KernelQ(1.)
        assert (abs(kernel.row(2, 2) - np.array([1., 2., 3., 2., 1.]) / 9.) < 1.e-15).all()
        for k in range(10):
            for l in range(10):
                i = np.arange(k + l + 1)
                expected = (1. + np.minimum(np.minimum(i, k + l - i), min(k, l))) / ((k + 1) * (l + 1))
                assert (abs(kernel.row(k, l) - expected) < 1.e-14).all()

    # -----------------------------------------------------------------

    def test_takahata_transition(self):
        """
        This test verifies the uniform Takahata kernel.
        """
        assert abs(takahata_transition(0, 2, 1, 1) - 1. / 3.) < 1.e-15
        assert abs(takahata_transition(1, 1, 1, 1) - 1. / 3.) < 1.e-15
        assert takahata_transition(0, 1, 1, 1) == 0.

    # -----------------------------------------------------------------

    def test_rows_conserve(self):
        """
        This test verifies that every row sums to one and conserves the mean copy number.
        """
        assert validate_row(KernelQ(0.5), 1, 1).passed()
        assert (abs(KernelQ(0.5).row(1, 1) - np.array([1., 4., 1.]) / 6.) < 1.e-15).all()
        report = validate_row(KernelQ(0.), 0, 0)
        assert report.sum_deviation == 0. and report.mean_deviation == 0.
        assert validate_row(KernelQ(1.), 2, 2).passed()

        for q in Q_GRID:
            kernel = KernelQ(q)
            for k in range(41):
                for l in range(41):
                    assert validate_row(kernel, k, l).passed(1.e-12)

    # -----------------------------------------------------------------

    def test_symmetry(self):
        """
        This test verifies that T is bitwise symmetric under swapping the parents and under swapping
        the offspring.
        """
        for q in (0.25, 0.6, 1.):
            kernel = KernelQ(q)
            for n in range(25):
                for k in range(n + 1):
                    for i in range(n + 1):
                        t = kernel.transition(i, n - i, k, n - k)
                        assert t == kernel.transition(i, n - i, n - k, k)
                        assert t == kernel.transition(n - i, i, k, n - k)

    # -----------------------------------------------------------------

    def test_identity_outcome(self):
        """
        This test verifies that the outcome equal to the parents carries weight min(k, l) + 1 for every q.
        """
        for q in Q_GRID:
            for k in range(15):
                for l in range(15):
                    assert weight(q, k, l, k, l) == 1. + min(k, l)

    # -----------------------------------------------------------------

    def test_fault_injection(self):
        """
        This test verifies that skipping the normalization breaks the row sums.
        """
        faulty = KernelQ(0.5, normalize=False)
        assert not validate_row(faulty, 2, 3).passed()
        assert validate_row(faulty, 0, 0).passed()

    # -----------------------------------------------------------------

    def test_shared_between_threads(self):
        """
        This test verifies that one kernel queried from several threads gives the same blocks.
        """
        kernel = KernelQ(0.3)
        reference = [np.array(KernelQ(0.3).block(n)) for n in range(60)]
        with ThreadPoolExecutor(max_workers=8) as pool:
            blocks = list(pool.map(kernel.block, list(range(60)) * 4))
        for index, block in enumerate(blocks):
            assert (block == reference[index % 60]).all()

    # -----------------------------------------------------------------

    def test_invalid_q(self):
        """
        This test verifies that penalties outside [0, 1] are rejected.
        """
        self.assertRaises(ValueError, KernelQ, -0.1)
        self.assertRaises(ValueError, KernelQ, 1.5)


if __name__ == "__main__":
    unittest.main()
