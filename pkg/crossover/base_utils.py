import numpy as np
from scipy.special import binom

from crossover.errors import CoefficientOverflow


def hide_zero_padding(values: np.ndarray, tol=0.):
    """
    Removes any trailing zero-padding that may be on a probability vector.

    Parameters
    -------------------
    values: A 1D array whose relevant information is contained in its leading entries.

    tol: Entries with absolute value <= tol at the end of the vector are removed.

    Returns
    --------------------
    Returns the input vector with any trailing zero-padding removed. At least one entry
    is always kept, so a vector of zeros comes back as array([0.]).
    """
    values = np.asarray(values, dtype=float)
    nonzero = np.flatnonzero(np.abs(values) > tol)
    if nonzero.size == 0:
        return values[:1].copy() if values.size else np.zeros(1)
    return values[:nonzero[-1] + 1]


def support_bound(values: np.ndarray):
    """Index of the last strictly nonzero entry (0 for the zero vector)."""
    return hide_zero_padding(values).size - 1


def pad_vector(x1, x2=None, set_length=None):
    """
    Parameters
    ----------
    x1 : ndarray
        A 1D array
    x2 : ndarray
        A 1D array
    set_length: int
        An integer value

    Returns
    -------
    If x2 is not None and set_length is None:
        Returns x1 and x2, where the shorter vector is zero-padded to the length of the longer one.

    If x2 is not None and set_length is not None:
        Returns x1 and x2, both zero-padded to set_length entries. set_length must be at least
        the length of the longer input.

    If x2 is None and set_length is not None:
        Returns x1 zero-padded to set_length entries.
    """
    if x2 is None and set_length is None:
        raise ValueError('Both x2 and set_length cannot be None. Please adjust the parameters.')

    x1 = np.asarray(x1, dtype=float)
    if set_length is None:
        x2 = np.asarray(x2, dtype=float)
        set_length = max(x1.size, x2.size)

    if x1.size > set_length:
        raise ValueError('x1 has more entries than set_length. Padding cannot continue.')
    x1 = np.concatenate((x1, np.zeros(set_length - x1.size)))
    if x2 is None:
        return x1

    x2 = np.asarray(x2, dtype=float)
    if x2.size > set_length:
        raise ValueError('x2 has more entries than set_length. Padding cannot continue.')
    x2 = np.concatenate((x2, np.zeros(set_length - x2.size)))
    return x1, x2


def l1_norm(values: np.ndarray):
    """
    Parameters
    -----------------------------
    values: 1D array

    Returns
    ------------------------------
    Returns the L1 norm sum_k |x_k|, which equals the total variation norm on Z_{>=0}.
    """
    return float(np.abs(values).sum())


def l1_distance(x1, x2):
    """L1 distance of two vectors of possibly different length; the shorter one is zero-padded."""
    x1, x2 = pad_vector(x1, x2)
    return l1_norm(x1 - x2)


def truncate(values: np.ndarray, nmax: int):
    """
    Cuts a vector back to the entries 0..nmax.

    Returns
    ------------
    (kept, overflow): kept is a vector of length nmax+1 (zero-padded if the input was shorter),
    overflow is the total mass found beyond index nmax.
    """
    values = np.asarray(values, dtype=float)
    if values.size <= nmax + 1:
        return pad_vector(values, set_length=nmax + 1), 0.
    return values[:nmax + 1].copy(), float(values[nmax + 1:].sum())


def binomial_matrix(rows: int, columns: int):
    """
    Floating-point binomial coefficients B[k, l] = binom(l, k) for 0 <= k < rows, 0 <= l < columns.

    Entries with l < k are zero. Raises CoefficientOverflow if an entry leaves the floating-point range.
    """
    k = np.arange(rows)[:, None]
    ell = np.arange(columns)[None, :]
    matrix = binom(ell, k)
    matrix[ell < k] = 0.
    if not np.isfinite(matrix).all():
        raise CoefficientOverflow('Binomial coefficients overflow for {0} x {1}; reduce K or the support.'
                                  .format(rows, columns))
    return matrix
