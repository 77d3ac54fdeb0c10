"""Extrinsic transfer curves and the area-rule MAP threshold bound.

The extrinsic bit-erasure probability of a fixed-point decoder splits into
(a) the dimension distribution of the extrinsic message and (b) an exact
per-dimension weight polynomial in the channel erasure probability.  The
weights come from enumerating every subspace of each dimension, treating
its echelon matrix as the parity check of a short code and summing rank
increments over all erasure patterns of the other bit positions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable

import numpy as np

from .de import DeOptions, EnsembleSpec, de_fixed_point
from .gf2 import Gf2Matrix, enumerate_subspaces, gaussian_binomial
from .transfer import (
    DimDistribution,
    TransferTensor,
    convolve,
    variable_coefficients,
)

Poly = tuple[Fraction, ...]


class MapBoundError(RuntimeError):
    """The EXIT curve does not enclose enough area to invert the rate."""


def poly_eval(coeffs, x):
    """Horner evaluation; exact when coeffs and x are both rational."""
    acc = coeffs[-1] * 0  # zero of the right type
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _subset_ranks(R: Gf2Matrix) -> list[int]:
    """Rank of every column-subset of R, indexed by bitmask (bit j = column j)."""
    m = R.cols
    cols = []
    for j in range(m):
        v = 0
        for i in range(R.num_rows):
            v |= R.entry(i, j) << i
        cols.append(v)
    rank = [0] * (1 << m)
    # reduced bases stored sorted by decreasing leading bit
    bases: list[tuple[int, ...]] = [()] * (1 << m)
    for mask in range(1, 1 << m):
        low = mask & -mask
        prev = mask ^ low
        v = cols[low.bit_length() - 1]
        base = bases[prev]
        for w in base:
            if v >> (w.bit_length() - 1) & 1:
                v ^= w
        if v:
            rank[mask] = rank[prev] + 1
            pos = 0
            while pos < len(base) and base[pos] > v:
                pos += 1
            bases[mask] = base[:pos] + (v,) + base[pos:]
        else:
            rank[mask] = rank[prev]
            bases[mask] = base
    return rank


def _erasure_counts_to_poly(counts: list[int], m: int) -> list[Fraction]:
    """Expand sum_e counts[e] eps^e (1-eps)^(m-1-e) into monomial coefficients."""
    d = m - 1
    coeffs = [Fraction(0)] * m
    for e, c in enumerate(counts):
        if c:
            for t in range(d - e + 1):
                coeffs[e + t] += c * comb(d - e, t) * (-1) ** t
    return coeffs


def subspace_bit_erasure(R: Gf2Matrix, bit: int, m: int) -> Poly:
    """Extrinsic erasure polynomial of one bit under the parity checks R.

    Sums over all erasure subsets of the other m-1 positions; a pattern
    leaves the bit erased exactly when adding its column to the erased
    columns does not raise the rank.
    """
    if R.cols != m:
        raise ValueError(f"matrix has {R.cols} columns, expected {m}")
    if not 0 <= bit < m:
        raise IndexError(f"bit {bit} out of range for m={m}")
    ranks = _subset_ranks(R)
    others = [j for j in range(m) if j != bit]
    bit_mask = 1 << bit
    counts = [0] * m
    for sub in range(1 << (m - 1)):
        mask = 0
        for pos, j in enumerate(others):
            if sub >> pos & 1:
                mask |= 1 << j
        if ranks[mask] == ranks[mask | bit_mask]:
            counts[mask.bit_count()] += 1
    return tuple(_erasure_counts_to_poly(counts, m))


@dataclass(frozen=True)
class ExitWeightTable:
    """Per-dimension extrinsic bit-erasure polynomials, averaged exactly.

    w[k] is the mean erasure polynomial over all dimension-k subspaces and
    all m bit positions; w[0] = 0 and w[m] = 1 identically.
    """

    m: int
    w: tuple[Poly, ...]
    _wf: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.w) != self.m + 1:
            raise ValueError("need one polynomial per dimension 0..m")
        if any(c != 0 for c in self.w[0]):
            raise ValueError("dimension 0 must decode perfectly")
        if self.w[self.m][0] != 1 or any(c != 0 for c in self.w[self.m][1:]):
            raise ValueError("dimension m must stay fully erased")
        wf = np.array([[float(c) for c in poly] for poly in self.w])
        wf.flags.writeable = False
        object.__setattr__(self, "_wf", wf)

    def weights_at(self, eps: float) -> np.ndarray:
        """Vector of w[k](eps) for k = 0..m."""
        powers = eps ** np.arange(self._wf.shape[1])
        return self._wf @ powers


@lru_cache(maxsize=None)
def exit_weight_table(m: int) -> ExitWeightTable:
    if not 1 <= m <= 10:
        raise ValueError(f"weight tables supported for m in 1..10, got {m}")
    polys = []
    for k in range(m + 1):
        catalog = enumerate_subspaces(m, k)
        counts = [0] * m
        for R in catalog.matrices:
            ranks = _subset_ranks(R)
            for bit in range(m):
                bit_mask = 1 << bit
                others = [j for j in range(m) if j != bit]
                for sub in range(1 << (m - 1)):
                    mask = 0
                    for pos, j in enumerate(others):
                        if sub >> pos & 1:
                            mask |= 1 << j
                    if ranks[mask] == ranks[mask | bit_mask]:
                        counts[mask.bit_count()] += 1
        den = m * gaussian_binomial(m, k)
        poly = [c / Fraction(den) for c in _erasure_counts_to_poly(counts, m)]
        polys.append(tuple(poly))
    return ExitWeightTable(m, tuple(polys))


def _extrinsic(pc: np.ndarray, dv: int, t: TransferTensor) -> np.ndarray:
    acc = pc
    for _ in range(dv - 1):
        acc = convolve(t, acc, pc)
    return acc


def extrinsic_distribution(p_c: DimDistribution, dv: int,
                           t: TransferTensor) -> DimDistribution:
    """Dimension distribution of the all-checks extrinsic message.

    Intersection of the dv check messages reaching a variable node; the
    channel observation is deliberately left out.
    """
    if dv < 2:
        raise ValueError(f"dv must be >= 2, got {dv}")
    if p_c.m != t.m or t.kind != "variable":
        raise ValueError("tensor does not match the message")
    return DimDistribution(t.m, _extrinsic(p_c.p, dv, t))


@dataclass(frozen=True)
class ExitCurve:
    """Sampled transfer curve h(eps), eps strictly increasing."""

    eps: np.ndarray
    h: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.eps, dtype=np.float64)
        hh = np.asarray(self.h, dtype=np.float64)
        if e.shape != hh.shape or e.ndim != 1:
            raise ValueError("eps and h must be matching 1-D arrays")
        if np.any(np.diff(e) <= 0):
            raise ValueError("eps grid must be strictly increasing")
        if e.size and (e[0] < 0 or e[-1] > 1):
            raise ValueError("eps grid must lie in [0, 1]")
        if np.any(hh < -1e-12) or np.any(hh > 1 + 1e-9):
            raise ValueError("curve values outside [0, 1]")
        if e.size and e[-1] == 1.0 and abs(hh[-1] - 1.0) > 1e-9:
            raise ValueError(f"h(1) = {hh[-1]!r}, expected 1")
        for a in (e, hh):
            a.flags.writeable = False
        object.__setattr__(self, "eps", e)
        object.__setattr__(self, "h", hh)

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.eps.tolist(), self.h.tolist()))


def _exit_evaluator(spec: EnsembleSpec, opts: DeOptions,
                    ) -> Callable[[float, DimDistribution | None],
                                  tuple[float, DimDistribution | None]]:
    """(eps, warm p_c) -> (h, fixed-point p_c).  h is 0 once decoded."""
    wt = exit_weight_table(spec.m)
    tv = variable_coefficients(spec.m)

    def evaluate(eps, state):
        fp = de_fixed_point(spec, eps, opts, p_c_init=state)
        if fp.decoded:
            return 0.0, fp.p_c
        pext = _extrinsic(fp.p_c.p, spec.dv, tv)
        return float(pext @ wt.weights_at(eps)), fp.p_c

    return evaluate


def bp_exit_point(spec: EnsembleSpec, eps: float,
                  opts: DeOptions = DeOptions()) -> float:
    """Extrinsic erasure probability at the cold-start fixed point; 0 if decoded."""
    h, _ = _exit_evaluator(spec, opts)(eps, None)
    return h


def bp_exit_curve(spec: EnsembleSpec, grid, opts: DeOptions = DeOptions()) -> ExitCurve:
    """Transfer curve on a grid, swept from high eps down with warm starts.

    The warm start keeps each point on the stable undecoded branch reached
    from full uncertainty at eps = 1, so the sampled curve is the one whose
    area encodes the rate.
    """
    return _sweep_curve(_exit_evaluator(spec, opts), grid)


def _sweep_curve(evaluate, grid) -> ExitCurve:
    eps = np.asarray(grid, dtype=np.float64)
    if eps.ndim != 1 or eps.size == 0:
        raise ValueError("grid must be a non-empty 1-D array")
    if np.any(np.diff(eps) <= 0):
        raise ValueError("grid must be strictly increasing")
    if eps[0] < 0 or eps[-1] > 1:
        raise ValueError("grid must lie in [0, 1]")
    h = np.empty_like(eps)
    state = None
    for idx in range(eps.size - 1, -1, -1):
        h[idx], state = evaluate(eps[idx], state)
    return ExitCurve(eps, h)


def map_bound(spec: EnsembleSpec, opts: DeOptions = DeOptions(),
              panel: float = 2e-3, area_tol: float = 5e-5) -> float:
    """Area-rule upper bound on the MAP threshold.

    Integrates the downward-swept transfer curve from eps = 1 until the
    accumulated area reaches the design rate, then inverts inside the last
    Simpson panel.  Raises MapBoundError when the curve's whole area is
    short of the rate.
    """
    return invert_exit_area(_exit_evaluator(spec, opts), spec.rate,
                            panel=panel, area_tol=area_tol)


def invert_exit_area(evaluate, rate: float, panel: float = 2e-3,
                     area_tol: float = 5e-5) -> float:
    """Find x with integral_x^1 h = rate for a downward-swept curve.

    ``evaluate(eps, state) -> (h, state)`` must accept warm states produced
    at any higher eps.  Composite Simpson panels of width ``panel``; if the
    curve drops to zero (decoding sets in) before the area target is met,
    the jump edge is bisected until its remaining area uncertainty is below
    ``area_tol``.
    """
    if rate <= 0.0:
        return 1.0
    h_hi, state = evaluate(1.0, None)
    eps_hi = 1.0
    area = 0.0
    while eps_hi > 0.0:
        eps_lo = max(0.0, eps_hi - panel)
        eps_mid = 0.5 * (eps_hi + eps_lo)
        h_mid, state_mid = evaluate(eps_mid, state)
        if h_mid == 0.0:
            return _invert_at_jump(evaluate, rate, area, eps_hi, h_hi, state,
                                   eps_mid, area_tol)
        h_lo, state_lo = evaluate(eps_lo, state_mid)
        if h_lo == 0.0:
            return _invert_at_jump(evaluate, rate, area, eps_mid, h_mid,
                                   state_mid, eps_lo, area_tol,
                                   upper_pts=[(eps_hi, h_hi, state)])
        width = eps_hi - eps_lo
        panel_area = width / 6.0 * (h_hi + 4.0 * h_mid + h_lo)
        if area + panel_area >= rate:
            coeffs = np.polyfit([eps_hi, eps_mid, eps_lo], [h_hi, h_mid, h_lo], 2)
            return _invert_in_segment(coeffs, eps_lo, eps_hi, rate - area)
        area += panel_area
        eps_hi, h_hi, state = eps_lo, h_lo, state_lo
    raise MapBoundError(f"curve area {area:.6f} never reached the rate {rate:.6f}")


def _invert_in_segment(coeffs, lo: float, hi: float, target: float) -> float:
    """Solve integral_x^hi q = target for the quadratic q on [lo, hi]."""
    p = np.polyint(coeffs)
    top = np.polyval(p, hi)

    def remaining(x):
        return top - np.polyval(p, x)

    a, b = lo, hi
    for _ in range(80):
        midp = 0.5 * (a + b)
        if remaining(midp) >= target:
            a = midp
        else:
            b = midp
    return 0.5 * (a + b)


def _invert_at_jump(evaluate, rate, area, eps_nz, h_nz, state_nz, eps_z,
                    area_tol, upper_pts=None) -> float:
    """Handle the tail where the curve falls to zero inside a panel.

    Bisects the jump edge (probing always from the last undecoded state),
    integrates the refined tail by trapezoids, and either inverts inside it
    or reports that the total area falls short of the rate.
    """
    pts = list(upper_pts or [])
    pts.append((eps_nz, h_nz, state_nz))
    while (eps_nz - eps_z) * max(h_nz, 1e-3) > area_tol:
        probe = 0.5 * (eps_nz + eps_z)
        h_p, state_p = evaluate(probe, state_nz)
        if h_p == 0.0:
            eps_z = probe
        else:
            eps_nz, h_nz, state_nz = probe, h_p, state_p
            pts.append((probe, h_p, state_p))
    pts.sort(key=lambda t: -t[0])
    for (e1, h1, _), (e2, h2, _) in zip(pts, pts[1:]):
        seg = (e1 - e2) * 0.5 * (h1 + h2)
        if area + seg >= rate:
            coeffs = np.polyfit([e1, e2], [h1, h2], 1)
            return _invert_in_segment(coeffs, e2, e1, rate - area)
        area += seg
    if rate - area <= area_tol:
        # the unresolved sliver at the edge absorbs the residual
        return eps_nz
    raise MapBoundError(
        f"curve area {area:.6f} (down to the jump at ~{eps_nz:.6f}) "
        f"is short of the rate {rate:.6f}")
