"""Fixed-point density evolution and BP threshold search for regular ensembles."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .transfer import (
    DimDistribution,
    TransferTensor,
    channel_vector,
    check_coefficients,
    convolve,
    variable_coefficients,
)

MONOTONE_TOL = 1e-12

# Observational hook for the CLI --trace plumbing: called as
# hook(iteration, p0_by_position) on every DE iteration of any run.
_trace_hook: Callable[[int, np.ndarray], None] | None = None


def set_trace_hook(hook: Callable[[int, np.ndarray], None] | None) -> None:
    global _trace_hook
    _trace_hook = hook


@dataclass(frozen=True)
class EnsembleSpec:
    """Regular ensemble: variable degree dv, check degree dc, m bits per symbol."""

    dv: int
    dc: int
    m: int

    def __post_init__(self):
        if self.dv < 2:
            raise ValueError(f"dv must be >= 2, got {self.dv}")
        if self.dc < 3:
            raise ValueError(f"dc must be >= 3, got {self.dc}")
        if not 1 <= self.m <= 12:
            raise ValueError(f"m must be in 1..12, got {self.m}")
        if not 0.0 < self.rate < 1.0:
            raise ValueError(f"design rate {self.rate} outside (0, 1)")

    @property
    def rate(self) -> float:
        return 1.0 - self.dv / self.dc


@dataclass(frozen=True)
class DeOptions:
    """Numeric knobs shared by all fixed-point and threshold routines."""

    max_iters: int = 50_000
    conv_tol: float = 1e-12
    success_tol: float = 1e-9
    bisect_tol: float = 1e-6

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if min(self.conv_tol, self.success_tol, self.bisect_tol) <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class DeFixedPoint:
    p_v: DimDistribution
    p_c: DimDistribution
    iterations: int
    decoded: bool


def _check_update(pv: np.ndarray, dc: int, t: TransferTensor) -> np.ndarray:
    # sum of dc-1 independent copies, folded pairwise
    acc = convolve(t, pv, pv)
    for _ in range(dc - 3):
        acc = convolve(t, acc, pv)
    return acc


def _variable_update(pc: np.ndarray, ch: np.ndarray, dv: int,
                     t: TransferTensor) -> np.ndarray:
    # channel message intersected with dv-1 check messages
    acc = ch
    for _ in range(dv - 1):
        acc = convolve(t, acc, pc)
    return acc


def check_update(p_v: DimDistribution, dc: int, t: TransferTensor) -> DimDistribution:
    """Outgoing check message from dc-1 incoming variable messages."""
    if dc < 3:
        raise ValueError(f"dc must be >= 3, got {dc}")
    if p_v.m != t.m or t.kind != "check":
        raise ValueError("tensor does not match the message")
    return DimDistribution(t.m, _check_update(p_v.p, dc, t))


def variable_update(p_c: DimDistribution, eps: float, dv: int,
                    t: TransferTensor) -> DimDistribution:
    """Outgoing variable message from the channel and dv-1 check messages."""
    if dv < 2:
        raise ValueError(f"dv must be >= 2, got {dv}")
    if p_c.m != t.m or t.kind != "variable":
        raise ValueError("tensor does not match the message")
    return DimDistribution(t.m, _variable_update(p_c.p, channel_vector(t.m, eps), dv, t))


def de_fixed_point(spec: EnsembleSpec, eps: float, opts: DeOptions = DeOptions(),
                   p_c_init: DimDistribution | None = None,
                   on_iteration: Callable[[int, np.ndarray], None] | None = None,
                   ) -> DeFixedPoint:
    """Iterate density evolution at erasure probability eps until it settles.

    Stops when the variable message stops changing (L-inf below conv_tol),
    when its dimension-0 mass reaches 1 - success_tol (decoded), or at
    max_iters.  Non-convergence is visible as iterations == max_iters, never
    an exception.  ``p_c_init`` warm-starts the check message; it must not
    start better than the target fixed point (the default, full uncertainty,
    and fixed points from a larger eps both qualify), which keeps the
    recovered-mass trajectory monotone -- enforced as a runtime check.
    """
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"erasure probability must be in [0, 1], got {eps}")
    m = spec.m
    tc = check_coefficients(m)
    tv = variable_coefficients(m)
    ch = channel_vector(m, eps)

    if p_c_init is None:
        pc = np.zeros(m + 1)
        pc[m] = 1.0
    else:
        if p_c_init.m != m:
            raise ValueError("warm-start message has the wrong dimension")
        pc = p_c_init.p

    prev_pv = None
    pv = None
    iterations = 0
    for it in range(1, opts.max_iters + 1):
        pv = _variable_update(pc, ch, spec.dv, tv)
        iterations = it
        if on_iteration is not None:
            on_iteration(it, pv)
        if _trace_hook is not None:
            _trace_hook(it, pv[:1])
        if prev_pv is not None and pv[0] < prev_pv[0] - MONOTONE_TOL:
            raise RuntimeError(
                f"recovered-symbol mass decreased at iteration {it} "
                f"({prev_pv[0]!r} -> {pv[0]!r}); bad warm start or coefficient bug")
        if pv[0] >= 1.0 - opts.success_tol:
            break
        if prev_pv is not None and np.abs(pv - prev_pv).max() < opts.conv_tol:
            break
        prev_pv = pv
        pc = _check_update(pv, spec.dc, tc)

    decoded = bool(pv[0] >= 1.0 - opts.success_tol)
    pc = _check_update(pv, spec.dc, tc)
    return DeFixedPoint(DimDistribution(m, pv), DimDistribution(m, pc),
                        iterations, decoded)


def bp_threshold(spec: EnsembleSpec, opts: DeOptions = DeOptions()) -> float:
    """Largest eps with successful decoding, by bisection on the decoded flag."""
    lo, hi = 0.0, 1.0  # decoding always succeeds at 0 and fails at 1
    while hi - lo >= opts.bisect_tol:
        mid = 0.5 * (lo + hi)
        if de_fixed_point(spec, mid, opts).decoded:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
