"""Subspace sum/intersection transfer tensors and dimension distributions.

A decoder message is summarized by the probability vector of its subspace
dimension, 0..m.  Check nodes combine messages by subspace sum, variable
nodes by intersection; both reduce to a bilinear convolution against a
precomputed (m+1)^3 tensor of transition probabilities.  Tensor entries are
evaluated as exact reduced rationals and converted to float64 once, since
ratios of Gaussian binomials become ill-conditioned well before m = 12.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from .gf2 import gaussian_binomial

MAX_M = 12

# Per-call drift in the output mass: renormalize above the first threshold,
# treat anything above the second as a coefficient bug.
RENORM_TOL = 1e-14
DRIFT_FAIL_TOL = 1e-9


class NormalizationError(ValueError):
    """A distribution drifted too far from unit mass to be trusted."""


@dataclass(frozen=True)
class DimDistribution:
    """Probability vector over message dimensions 0..m."""

    m: int
    p: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.p, dtype=np.float64)
        if arr.shape != (self.m + 1,):
            raise ValueError(f"expected {self.m + 1} entries, got shape {arr.shape}")
        if arr.min() < -1e-15:
            raise ValueError(f"negative probability {arr.min()!r}")
        s = arr.sum()
        if abs(s - 1.0) > 1e-12:
            raise NormalizationError(f"mass {s!r} is not 1 within 1e-12")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "p", arr)

    @classmethod
    def delta(cls, m: int, k: int) -> "DimDistribution":
        """Point mass on dimension k."""
        p = np.zeros(m + 1)
        p[k] = 1.0
        return cls(m, p)

    def __getitem__(self, k: int) -> float:
        return float(self.p[k])


@dataclass(frozen=True)
class TransferTensor:
    """Dense (m+1)^3 transition tensor for one node type.

    coeff[i, j, k] is the probability that combining a fixed dimension-i
    subspace with a uniformly random dimension-j subspace yields dimension k
    (sum for kind="check", intersection for kind="variable").
    """

    m: int
    kind: str
    coeff: np.ndarray
    # flattened views for the fast convolution paths
    _ik_by_j: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in ("check", "variable"):
            raise ValueError(f"unknown tensor kind {self.kind!r}")
        c = np.ascontiguousarray(self.coeff, dtype=np.float64)
        if c.shape != (self.m + 1,) * 3:
            raise ValueError(f"bad tensor shape {c.shape}")
        sums = c.sum(axis=2)
        if np.abs(sums - 1.0).max() > 1e-12:
            raise NormalizationError("tensor rows do not sum to 1")
        c.flags.writeable = False
        object.__setattr__(self, "coeff", c)
        m1 = self.m + 1
        # [j, i*(m+1)+k] layout: one GEMM against the j axis, then contract i
        flat = np.ascontiguousarray(c.transpose(1, 0, 2).reshape(m1, m1 * m1))
        flat.flags.writeable = False
        object.__setattr__(self, "_ik_by_j", flat)


@lru_cache(maxsize=None)
def check_coefficients_exact(m: int) -> tuple:
    """Exact rational sum-transfer coefficients, indexed [i][j][k]."""
    _require_m(m)
    out = []
    for i in range(m + 1):
        plane = []
        for j in range(m + 1):
            row = [Fraction(0)] * (m + 1)
            den = gaussian_binomial(m, m - j)
            for k in range(max(i, j), min(i + j, m) + 1):
                num = (gaussian_binomial(m - i, m - k)
                       * gaussian_binomial(i, k - j)
                       * (1 << ((k - i) * (k - j))))
                row[k] = Fraction(num, den)
            plane.append(tuple(row))
        out.append(tuple(plane))
    return tuple(out)


@lru_cache(maxsize=None)
def variable_coefficients_exact(m: int) -> tuple:
    """Exact rational intersection-transfer coefficients, indexed [i][j][k]."""
    _require_m(m)
    out = []
    for i in range(m + 1):
        plane = []
        for j in range(m + 1):
            row = [Fraction(0)] * (m + 1)
            den = gaussian_binomial(m, j)
            for k in range(max(0, i + j - m), min(i, j) + 1):
                num = (gaussian_binomial(i, k)
                       * gaussian_binomial(m - i, j - k)
                       * (1 << ((i - k) * (j - k))))
                row[k] = Fraction(num, den)
            plane.append(tuple(row))
        out.append(tuple(plane))
    return tuple(out)


def _require_m(m: int) -> None:
    if not 1 <= m <= MAX_M:
        raise ValueError(f"alphabet bits m must be in 1..{MAX_M}, got {m}")


def _tensor_from_exact(m: int, kind: str, exact) -> TransferTensor:
    c = np.array([[[float(exact[i][j][k]) for k in range(m + 1)]
                   for j in range(m + 1)] for i in range(m + 1)])
    return TransferTensor(m, kind, c)


@lru_cache(maxsize=None)
def check_coefficients(m: int) -> TransferTensor:
    """Float transfer tensor for subspace sums at check nodes."""
    return _tensor_from_exact(m, "check", check_coefficients_exact(m))


@lru_cache(maxsize=None)
def variable_coefficients(m: int) -> TransferTensor:
    """Float transfer tensor for subspace intersections at variable nodes."""
    return _tensor_from_exact(m, "variable", variable_coefficients_exact(m))


def channel_distribution(m: int, eps: float) -> DimDistribution:
    """Dimension distribution of the channel message: binomial(m, eps)."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"erasure probability must be in [0, 1], got {eps}")
    return DimDistribution(m, channel_vector(m, eps))


def channel_vector(m: int, eps: float) -> np.ndarray:
    p = np.array([comb(m, i) * eps**i * (1.0 - eps) ** (m - i)
                  for i in range(m + 1)])
    s = p.sum()
    if abs(s - 1.0) > RENORM_TOL:
        p /= s
    return p


def convolve(t: TransferTensor, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """out[k] = sum_ij coeff[i,j,k] a[i] b[j], with drift policing."""
    m1 = t.m + 1
    out = a @ (t._ik_by_j.T @ b).reshape(m1, m1)
    s = out.sum()
    drift = abs(s - 1.0)
    if drift > DRIFT_FAIL_TOL:
        raise NormalizationError(f"convolution drifted by {drift:.3e}")
    if drift > RENORM_TOL:
        out /= s
    return out


def convolve_batch(t: TransferTensor, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Row-wise convolution of two (n, m+1) stacks of distributions."""
    m1 = t.m + 1
    tmp = (B @ t._ik_by_j).reshape(-1, m1, m1)
    out = np.matmul(A[:, None, :], tmp)[:, 0, :]
    s = out.sum(axis=1)
    drift = np.abs(s - 1.0)
    worst = drift.max()
    if worst > DRIFT_FAIL_TOL:
        raise NormalizationError(f"batch convolution drifted by {worst:.3e}")
    if worst > RENORM_TOL:
        np.divide(out, s[:, None], out=out, where=(drift > RENORM_TOL)[:, None])
    return out


def _checked_pair(a: DimDistribution, b: DimDistribution, t: TransferTensor,
                  kind: str) -> None:
    if t.kind != kind:
        raise ValueError(f"expected a {kind} tensor, got {t.kind}")
    if not (a.m == b.m == t.m):
        raise ValueError(f"dimension mismatch: {a.m}, {b.m}, tensor {t.m}")


def check_convolve(a: DimDistribution, b: DimDistribution,
                   t: TransferTensor) -> DimDistribution:
    """Dimension distribution of the sum of two independent subspaces."""
    _checked_pair(a, b, t, "check")
    return DimDistribution(t.m, convolve(t, a.p, b.p))


def variable_convolve(a: DimDistribution, b: DimDistribution,
                      t: TransferTensor) -> DimDistribution:
    """Dimension distribution of the intersection of two independent subspaces."""
    _checked_pair(a, b, t, "variable")
    return DimDistribution(t.m, convolve(t, a.p, b.p))
