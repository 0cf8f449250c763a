# -*- coding: utf-8 -*-
"""
Size-biased generating-function coefficients of copy-number distributions.

For a distribution p with generating function psi(z) = sum_k p_k z^k, the expansion around z = 1 reads
psi(z) = sum_k (k+1) a_k (z-1)^k with a_k = psi^(k)(1) / (k+1)!. Random unequal crossover acts on these
coefficients as a simple quadratic map that contracts the weighted metric sum_k (gamma/delta)^k |a_k - b_k|.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial import Polynomial

from crossover.base_utils import binomial_matrix, hide_zero_padding, pad_vector, support_bound
from crossover.errors import CoefficientOverflow, DivergentInversion, ParamMismatch
from crossover.measure import Distribution

LOG = logging.getLogger(__name__)

DEFAULT_K = 64
DEFAULT_GAMMA = 0.25
MEMBERSHIP_RTOL = 1.e-12
# Tail terms of the inversion series must fall below this to be accepted.
INVERSION_TAIL_TOL = 1.e-10
INVERSION_NEGATIVITY_TOL = 1.e-12


def _default_delta(values):
    """max(1, max_{k >= 2} a_k^(1/k)) over the positive stored coefficients."""
    k = np.arange(values.size)
    mask = (k >= 2) & (values > 0)
    if not mask.any():
        return 1.
    return max(1., float(np.max(values[mask] ** (1. / k[mask]))))


@dataclass(frozen=True, eq=False)
class CoeffVector:
    """
    Coefficients a_0..a_K, with the parameters of the space X_{alpha,delta} they are compared in.

    Attributes
    ----------
    values : ndarray
        Read-only coefficients; a_0 is exactly 1.
    alpha : float
        Prescribed first coefficient; defaults to values[1].
    delta : float
        Growth bound a_k <= delta^k; defaults to max(1, max_k a_k^(1/k)).
    gamma : float
        Metric parameter, 0 < gamma < 1/3.
    """
    values: np.ndarray
    alpha: Optional[float] = None
    delta: Optional[float] = None
    gamma: float = DEFAULT_GAMMA

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or values.size < 2:
            raise ValueError('A coefficient vector needs at least a_0 and a_1.')
        if not np.isfinite(values).all():
            raise CoefficientOverflow('Coefficient vector contains non-finite entries.')
        if abs(values[0] - 1.) > 1.e-12:
            raise ValueError('The zeroth coefficient must be 1, got {0!r}.'.format(values[0]))
        values[0] = 1.
        if not 0. < self.gamma < 1. / 3.:
            raise ValueError('The metric parameter gamma must lie in (0, 1/3), got {0}.'.format(self.gamma))
        alpha = float(values[1]) if self.alpha is None else float(self.alpha)
        delta = _default_delta(values) if self.delta is None else float(self.delta)
        if delta <= 0.:
            raise ValueError('delta must be positive, got {0}.'.format(delta))
        values.flags.writeable = False
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'alpha', alpha)
        object.__setattr__(self, 'delta', delta)
        object.__setattr__(self, 'gamma', float(self.gamma))

    @property
    def order(self):
        """Coefficient truncation K."""
        return self.values.size - 1

    def with_values(self, values):
        """New vector in the same space (same alpha, delta and gamma)."""
        return CoeffVector(values, alpha=self.alpha, delta=self.delta, gamma=self.gamma)


def geometric_coeffs(alpha, K=DEFAULT_K, delta=None, gamma=DEFAULT_GAMMA):
    """The coefficients (1, alpha, alpha^2, ...) of the random UC fixed point with mean 2*alpha."""
    return CoeffVector(float(alpha) ** np.arange(K + 1), alpha=alpha, delta=delta, gamma=gamma)


def coeffs_from_distribution(p: Distribution, K=DEFAULT_K, gamma=DEFAULT_GAMMA, delta=None):
    """
    Size-biased coefficients a_k = (1/(k+1)) sum_{l >= k} binom(l, k) p_l for k = 0..K.

    Parameters
    ----------
    p : Distribution
    K : int
        Coefficient truncation.
    gamma, delta : float
        Metric parameters of the returned vector.

    Returns
    ----------
    CoeffVector with a_0 set to exactly 1; a_1 equals mean(p)/2.
    """
    if K < 1:
        raise ValueError('The coefficient truncation K must be at least 1, got {0}.'.format(K))
    values = hide_zero_padding(p.values)
    a = np.dot(binomial_matrix(K + 1, values.size), values) / np.arange(1, K + 2)
    if not np.isfinite(a).all():
        raise CoefficientOverflow('Coefficients overflow for K={0} and support {1}.'.format(K, values.size - 1))
    a[0] = 1.
    return CoeffVector(a, delta=delta, gamma=gamma)


def decay_rate(values, window=8):
    """
    Estimate of limsup_k |v_k|^(1/k) from the last ``window`` nonzero entries.

    Parameters
    ----------
    values : Distribution, CoeffVector or array
    """
    if isinstance(values, (Distribution, CoeffVector)):
        values = values.values
    values = np.abs(hide_zero_padding(values))
    k = np.flatnonzero(values)
    k = k[k >= 1][-window:]
    if k.size == 0:
        return 0.
    return float(np.max(values[k] ** (1. / k)))


def radius_estimate(values, window=8):
    """Estimated radius of convergence 1/decay_rate; infinite for a vector with no tail."""
    rate = decay_rate(values, window)
    return np.inf if rate == 0. else 1. / rate


def distribution_from_coeffs(a: CoeffVector, N):
    """
    Inverts the coefficient map: p_k = sum_{l >= k} (-1)^(l-k) binom(l, k) (l+1) a_l for k = 0..N.

    The alternating series is ill-conditioned. If the coefficients do not end inside the stored range, the
    tail terms of every series must decrease and fall below 1e-10, otherwise DivergentInversion is raised.
    Entries in (-1e-12, 0) are clipped to 0; whatever is missing from unit mass goes to the tail mass.
    """
    K = a.order
    terminated = support_bound(a.values) < K
    # the coefficients expand psi around z = 1, so their radius is that of psi minus 1
    radius = radius_estimate(a.values) + 1.
    if not terminated and radius <= 2.:
        LOG.warning('Inverting coefficients of a generating function with estimated radius %.3g <= 2; '
                    'the result is ill-conditioned.', radius)

    sign = np.where((np.arange(K + 1)[None, :] - np.arange(N + 1)[:, None]) % 2 == 0, 1., -1.)
    terms = sign * binomial_matrix(N + 1, K + 1) * (np.arange(1, K + 2) * a.values)[None, :]
    if not terminated:
        last = np.abs(terms[:, -1])
        previous = np.abs(terms[:, -2])
        bad = (last > INVERSION_TAIL_TOL) | ((last > previous) & (last > 0.))
        if bad.any():
            k = int(np.flatnonzero(bad)[0])
            raise DivergentInversion('The inversion series for p_{0} does not converge within K={1}; '
                                     'last term {2:.3e}.'.format(k, K, terms[k, -1]))
    p = terms.sum(axis=1)
    if (p < -INVERSION_NEGATIVITY_TOL).any():
        raise DivergentInversion('Inversion produced the negative probability {0:.3e} at k={1}.'
                                 .format(p.min(), int(p.argmin())))
    p[p < 0.] = 0.
    return Distribution(p, max(0., 1. - float(p.sum())))


def induced_recombinator(a: CoeffVector):
    """
    Random UC on coefficients: out_k = (1/(k+1)) sum_{n=0}^{k} a_n a_{k-n}.
    """
    K = a.order
    out = np.convolve(a.values, a.values)[:K + 1] / np.arange(1, K + 2)
    return a.with_values(out)


def iterate_coeffs(a: CoeffVector, steps):
    """Applies the induced recombinator ``steps`` times."""
    for _ in range(steps):
        a = induced_recombinator(a)
    return a


def weighted_metric(a: CoeffVector, b: CoeffVector):
    """
    d(a, b) = sum_k (gamma/delta)^k |a_k - b_k| over the stored range.
    """
    if a.gamma != b.gamma or a.delta != b.delta:
        raise ParamMismatch('Cannot compare coefficients with (gamma, delta) = ({0}, {1}) and ({2}, {3}).'
                            .format(a.gamma, a.delta, b.gamma, b.delta))
    x, y = pad_vector(a.values, b.values)
    ratio = (a.gamma / a.delta) ** np.arange(x.size)
    return float(np.dot(ratio, np.abs(x - y)))


def membership(a: CoeffVector):
    """True iff a_0 = 1, a_1 = alpha and 0 <= a_k <= delta^k for all stored k >= 2."""
    values = a.values
    if values[0] != 1.:
        return False
    if abs(values[1] - a.alpha) > MEMBERSHIP_RTOL * max(1., abs(a.alpha)):
        return False
    k = np.arange(2, values.size)
    bound = a.delta ** k
    rest = values[2:]
    return bool(((rest >= -MEMBERSHIP_RTOL * bound) & (rest <= bound * (1. + MEMBERSHIP_RTOL))).all())


def fixed_coeffs_recursion(alpha, K, gamma=DEFAULT_GAMMA, delta=None):
    """
    Fixed point of the induced recombinator with a_1 = alpha.

    a_0 = 1, a_1 = alpha and a_k = (1/(k-1)) sum_{n=1}^{k-1} a_n a_{k-n} for 2 <= k <= K; the solution is
    a_k = alpha^k.
    """
    if K < 2:
        raise ValueError('The recursion needs K >= 2, got {0}.'.format(K))
    a = np.zeros(K + 1)
    a[0] = 1.
    a[1] = alpha
    for k in range(2, K + 1):
        a[k] = np.dot(a[1:k], a[k - 1:0:-1]) / (k - 1)
    if not np.isfinite(a).all():
        raise CoefficientOverflow('Coefficient recursion overflows for alpha={0}, K={1}.'.format(alpha, K))
    return CoeffVector(a, alpha=alpha, delta=delta, gamma=gamma)


def contraction_factor(gamma=DEFAULT_GAMMA):
    """Contraction constant 2/(3 - 3 gamma) of the induced recombinator in the weighted metric."""
    if not 0. < gamma < 1. / 3.:
        raise ValueError('gamma must lie in (0, 1/3), got {0}.'.format(gamma))
    return 2. / (3. - 3. * gamma)


def coefficient_lipschitz_bound(gamma=DEFAULT_GAMMA):
    """Lipschitz constant 2/(1 - 2 gamma) of the induced recombinator on the bounded coefficient set."""
    if not 0. < gamma < 1. / 3.:
        raise ValueError('gamma must lie in (0, 1/3), got {0}.'.format(gamma))
    return 2. / (1. - 2. * gamma)


def takahata_coeffs(a: CoeffVector):
    """
    b_k = (k+1) a_k = psi^(k)(1)/k!, the coefficients on which the Takahata model acts quadratically.
    """
    b = np.arange(1, a.order + 2) * a.values
    return CoeffVector(b, gamma=a.gamma)


def generating_function(p, z):
    """psi(z) = sum_k p_k z^k for a Distribution or array; z may be an array."""
    values = p.values if isinstance(p, Distribution) else np.asarray(p, dtype=float)
    return Polynomial(values)(z)


def fragment_generating_function(p, z):
    """
    phi(z) = (1/(1-z)) int_z^1 psi(t) dt, the generating function of the fragment measure of p.

    Random UC maps psi to phi**2.
    """
    values = p.values if isinstance(p, Distribution) else np.asarray(p, dtype=float)
    psi = Polynomial(values)
    integral = psi.integ()
    z = np.asarray(z, dtype=float)
    with np.errstate(divide='ignore', invalid='ignore'):
        phi = (integral(1.) - integral(z)) / (1. - z)
    return np.where(z == 1., psi(1.), phi)


def expansion_at_one(a: CoeffVector, z):
    """sum_k (k+1) a_k (z-1)^k, the generating function rebuilt from its size-biased coefficients."""
    return Polynomial(np.arange(1, a.order + 2) * a.values)(np.asarray(z, dtype=float) - 1.)
