"""Statistical layer for the matrix normal model with Kronecker covariance.

Likelihood functions are parameterized by concentration matrices
K1 = Sigma1^-1 (rows) and K2 = Sigma2^-1 (columns), so the covariance of
the vectorized data is kron(Sigma2, Sigma1).  The mean is fixed at zero.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .linalg import (
    Matrix,
    NotPD,
    SingularMatrix,
    cholesky,
    format_matrix,
    logdet_pd,
    parse_matrix,
)


@dataclass(frozen=True)
class SampleSet:
    """n data matrices of shape (m1, m2); exact (Matrix) or float (ndarray)."""

    m1: int
    m2: int
    n: int
    data: tuple

    def __post_init__(self):
        if len(self.data) != self.n:
            raise ValueError("need exactly n data matrices")
        for y in self.data:
            if y.shape != (self.m1, self.m2):
                raise ValueError("data matrix has wrong shape")

    @property
    def k(self):
        return self.n * self.m2 - self.m1

    @property
    def is_exact(self):
        return isinstance(self.data[0], Matrix)

    def concatenated(self):
        """The m1 x (n*m2) concatenation [Y1 | ... | Yn]."""
        if self.is_exact:
            out = self.data[0]
            for y in self.data[1:]:
                out = out.hstack(y)
            return out
        return np.hstack(self.data)

    def to_float(self):
        if not self.is_exact:
            return self
        return SampleSet(self.m1, self.m2, self.n, tuple(y.to_numpy() for y in self.data))


@dataclass(frozen=True)
class ThresholdBounds:
    """Bounds on the minimum sample size for MLE existence/uniqueness."""

    lower: Fraction
    upper: int


def thresholds(m1, m2):
    """Sample-size bounds: lower max{m1/m2, m2/m1}, upper floor(m1/m2 + m2/m1) + 1."""
    if m1 < 1 or m2 < 1:
        raise ValueError("dimensions must be positive")
    lower = max(Fraction(m1, m2), Fraction(m2, m1))
    upper = math.floor(Fraction(m1, m2) + Fraction(m2, m1)) + 1
    return ThresholdBounds(lower=lower, upper=upper)


def _as_array(a):
    return a.to_numpy() if isinstance(a, Matrix) else np.asarray(a, dtype=float)


def gaussian_loglik(s, k_mat, n):
    """Zero-mean Gaussian log-likelihood n*logdet(K) - n*tr(S K), constants dropped."""
    s = _as_array(s)
    k_mat = _as_array(k_mat)
    if s.shape != k_mat.shape:
        raise ValueError("S and K must share dimensions")
    return n * logdet_pd(k_mat) - n * float(np.trace(s @ k_mat))


def scatter_k2(sample, k2):
    """The m1 x m1 matrix sum_i Yi K2 Yi^T."""
    k2 = _as_array(k2)
    ys = [_as_array(y) for y in sample.data]
    out = np.zeros((sample.m1, sample.m1))
    for y in ys:
        out += y @ k2 @ y.T
    return out


def scatter_k1(sample, k1):
    """The m2 x m2 matrix sum_i Yi^T K1 Yi."""
    k1 = _as_array(k1)
    ys = [_as_array(y) for y in sample.data]
    out = np.zeros((sample.m2, sample.m2))
    for y in ys:
        out += y.T @ k1 @ y
    return out


def kron_loglik(sample, k1, k2):
    """Kronecker-model log-likelihood.

    n*m2*logdet(K1) + n*m1*logdet(K2) - tr(sum_i K1 Yi K2 Yi^T).
    """
    k1 = _as_array(k1)
    k2 = _as_array(k2)
    if k1.shape != (sample.m1, sample.m1) or k2.shape != (sample.m2, sample.m2):
        raise ValueError("K1/K2 dimension mismatch")
    trace_term = float(np.trace(k1 @ scatter_k2(sample, k2)))
    return (
        sample.n * sample.m2 * logdet_pd(k1)
        + sample.n * sample.m1 * logdet_pd(k2)
        - trace_term
    )


def profile_k1(sample, k2):
    """Maximizer of the likelihood over K1 for fixed K2.

    Returns ((1/(n*m2)) * sum_i Yi K2 Yi^T)^-1; requires n*m2 >= m1.
    """
    if sample.n * sample.m2 < sample.m1:
        raise ValueError("profile update needs n*m2 >= m1")
    cholesky(k2)  # raises NotPD early
    avg = scatter_k2(sample, k2) / (sample.n * sample.m2)
    sign, _ = np.linalg.slogdet(avg)
    if sign <= 0 or np.linalg.cond(avg) > 1e14:
        raise SingularMatrix("sum_i Yi K2 Yi^T is rank-deficient")
    return np.linalg.inv(avg)


def g_objective(sample, k2):
    """Profile objective m2*logdet(sum_i Yi K2 Yi^T) - m1*logdet(K2).

    Scale invariant: g(c*K2) = g(K2).  Minimizing g over PD(m2) yields the
    second Kronecker factor of the MLE.
    """
    k2 = _as_array(k2)
    s = scatter_k2(sample, k2)
    try:
        ld_s = logdet_pd(s)
    except NotPD:
        raise SingularMatrix("sum_i Yi K2 Yi^T is not positive definite") from None
    return sample.m2 * ld_s - sample.m1 * logdet_pd(k2)


def sample_matrix_normal(a, b, n, seed):
    """Draw n iid matrices A @ Z @ B with Z filled with standard normals.

    Deterministic in the seed; the implied covariance factors are
    Sigma1 = A A^T and Sigma2 = B^T B.
    """
    a = _as_array(a)
    b = _as_array(b)
    m1 = a.shape[0]
    m2 = b.shape[1]
    rng = np.random.default_rng(seed)
    data = tuple(a @ rng.standard_normal((a.shape[1], b.shape[0])) @ b for _ in range(n))
    return SampleSet(m1=m1, m2=m2, n=n, data=data)


def format_sample_set(sample):
    """Serialize: header "m1 m2 n", then the concatenation [Y1|...|Yn]."""
    return f"{sample.m1} {sample.m2} {sample.n}\n" + format_matrix(sample.concatenated())


def parse_sample_set(text, exact=False):
    lines = iter(io.StringIO(text).read().splitlines())
    m1, m2, n = (int(t) for t in next(lines).split())
    y = parse_matrix(lines, exact=exact)
    if y.shape != (m1, n * m2):
        raise ValueError("concatenated data has wrong shape")
    if exact:
        data = tuple(
            y.submatrix(range(m1), range(i * m2, (i + 1) * m2)) for i in range(n)
        )
    else:
        data = tuple(y[:, i * m2 : (i + 1) * m2] for i in range(n))
    return SampleSet(m1=m1, m2=m2, n=n, data=data)
