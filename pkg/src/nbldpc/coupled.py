"""Terminated protograph chains: positional DE, EXIT, and saturation thresholds.

A chain couples L copies of the regular protograph; variable position i
sends one edge bundle to each of the check positions i..i+dv-1, and every
position pair carries b = dc/dv parallel edges.  Boundary checks see fewer
positions, so their degree drops off linearly toward the ends; the rate
loss that buys is the price of threshold saturation.

DE state is tracked per edge class (position pair + offset): ensemble
averaging over the edge labels makes parallel edges i.i.d., so one
distribution per class is exact.  All class updates are batched with numpy
over positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import de
from .de import DeOptions
from .exitchart import exit_weight_table, invert_exit_area, ExitCurve, _sweep_curve
from .transfer import (
    TransferTensor,
    channel_vector,
    check_coefficients,
    convolve_batch,
    variable_coefficients,
)


def design_rate(dv: int, dc: int, L: int) -> float:
    """Rate of the terminated chain: 1 - (L+dv-1)/((dc/dv) L)."""
    _validate_chain_args(dv, dc, L)
    b = dc // dv
    return 1.0 - (L + dv - 1) / (b * L)


def _validate_chain_args(dv: int, dc: int, L: int) -> None:
    if dv < 2:
        raise ValueError(f"dv must be >= 2, got {dv}")
    if dc % dv:
        raise ValueError(f"dc={dc} is not divisible by dv={dv}; "
                         "protograph replication needs an integer edge bundle")
    if L < 2:
        raise ValueError(f"termination length must be >= 2, got {L}")


@dataclass(frozen=True)
class CoupledChain:
    """Geometry of a terminated chain of L coupled protographs."""

    dv: int
    dc: int
    L: int

    def __post_init__(self):
        _validate_chain_args(self.dv, self.dc, self.L)

    @property
    def b(self) -> int:
        """Parallel edges per (variable position, check position) pair."""
        return self.dc // self.dv

    @property
    def num_check_positions(self) -> int:
        return self.L + self.dv - 1

    @property
    def rate(self) -> float:
        return design_rate(self.dv, self.dc, self.L)

    def check_window(self, j: int) -> range:
        """Variable positions wired to check position j."""
        return range(max(0, j - self.dv + 1), min(self.L - 1, j) + 1)

    @property
    def check_degrees(self) -> tuple[int, ...]:
        return tuple(self.b * len(self.check_window(j))
                     for j in range(self.num_check_positions))


def build_chain(dv: int, dc: int, L: int) -> CoupledChain:
    return CoupledChain(dv, dc, L)


@dataclass(frozen=True)
class ChainState:
    """Edge-class message distributions of one DE iterate.

    v2c[i, t] is the distribution sent from variable position i toward check
    position i+t; c2v[j, s] the one from check position j toward variable
    position j-s.  c2v rows with j-s outside the chain are padding.
    """

    m: int
    v2c: np.ndarray
    c2v: np.ndarray

    def __post_init__(self):
        for name, arr in (("v2c", self.v2c), ("c2v", self.c2v)):
            a = np.asarray(arr, dtype=np.float64)
            if a.ndim != 3 or a.shape[2] != self.m + 1:
                raise ValueError(f"{name} must be (positions, offsets, m+1)")
            if np.abs(a.sum(axis=2) - 1.0).max() > 1e-10:
                raise ValueError(f"{name} contains unnormalized distributions")
            a = a.copy()
            a.flags.writeable = False
            object.__setattr__(self, name, a)


@dataclass(frozen=True)
class ScFixedPoint:
    state: ChainState
    iterations: int
    decoded: bool


def _exclude_one_folds(t: TransferTensor, parts: np.ndarray,
                       identity: np.ndarray) -> np.ndarray:
    """out[u] = fold of all parts except parts[u].

    ``parts`` is (n, rows, m+1); the prefix and suffix chains are folded in
    lockstep with one stacked convolution per step, so the whole thing costs
    n batched calls instead of 3n-2.
    """
    n, rows, m1 = parts.shape
    if n == 1:
        return np.broadcast_to(identity, parts.shape).copy()
    pre = [identity]
    suf = [identity]
    for s in range(n - 1):
        a = np.concatenate([pre[s], suf[s]])
        b = np.concatenate([parts[s], parts[n - 1 - s]])
        res = convolve_batch(t, a, b)
        pre.append(res[:rows])
        suf.append(res[rows:])
    a = np.concatenate([pre[u] for u in range(n)])
    b = np.concatenate([suf[n - 1 - u] for u in range(n)])
    return convolve_batch(t, a, b).reshape(n, rows, m1)


class _ChainDe:
    """Vectorized flooding DE over the chain's edge classes."""

    def __init__(self, chain: CoupledChain, m: int):
        self.chain = chain
        self.m = m
        self.tc = check_coefficients(m)
        self.tv = variable_coefficients(m)
        L, dv, m1 = chain.L, chain.dv, m + 1
        self.delta0 = np.zeros(m1)
        self.delta0[0] = 1.0
        self.deltam = np.zeros(m1)
        self.deltam[m] = 1.0
        self.id_var = np.broadcast_to(self.deltam, (L, m1))
        self.id_chk = np.broadcast_to(self.delta0, (chain.num_check_positions, m1))

    def fresh_c2v(self) -> np.ndarray:
        chain, m1 = self.chain, self.m + 1
        c2v = np.zeros((chain.num_check_positions, chain.dv, m1))
        c2v[:, :, self.m] = 1.0
        return c2v

    def incoming_c2v(self, c2v: np.ndarray) -> np.ndarray:
        """Stack (dv, L, m+1): messages reaching position i from check i+t, per offset t."""
        L = self.chain.L
        return np.stack([c2v[t:t + L, t] for t in range(self.chain.dv)])

    def variable_step(self, c2v: np.ndarray, ch_rows: np.ndarray) -> np.ndarray:
        L, dv, m1 = self.chain.L, self.chain.dv, self.m + 1
        parts = self.incoming_c2v(c2v)
        folds = _exclude_one_folds(self.tv, parts, self.id_var)
        ch = np.broadcast_to(ch_rows, (dv, L, m1)).reshape(dv * L, m1)
        out = convolve_batch(self.tv, ch, folds.reshape(dv * L, m1))
        return out.reshape(dv, L, m1).transpose(1, 0, 2)

    def check_step(self, v2c: np.ndarray) -> np.ndarray:
        chain, m1 = self.chain, self.m + 1
        Lc, dv, b = chain.num_check_positions, chain.dv, chain.b
        # e[u] carries class (i = j-u) into check row j, zero-subspace padded
        e = np.tile(self.delta0, (dv, Lc, 1))
        for u in range(dv):
            e[u, u:u + chain.L] = v2c[:, u]
        e = e.reshape(dv * Lc, m1)
        acc = e  # b-1 copies of the addressed class stay in the fold
        for _ in range(b - 2):
            acc = convolve_batch(self.tc, acc, e)
        pow_b = convolve_batch(self.tc, acc, e).reshape(dv, Lc, m1)
        folds = _exclude_one_folds(self.tc, pow_b, self.id_chk)
        out = convolve_batch(self.tc, folds.reshape(dv * Lc, m1), acc)
        return out.reshape(dv, Lc, m1).transpose(1, 0, 2)

    def extrinsic(self, c2v: np.ndarray) -> np.ndarray:
        """All-checks extrinsic distribution per variable position (no channel)."""
        parts = self.incoming_c2v(c2v)
        acc = parts[0]
        for p in parts[1:]:
            acc = convolve_batch(self.tv, acc, p)
        return acc


def sc_de_fixed_point(chain: CoupledChain, m: int, eps: float,
                      opts: DeOptions = DeOptions(),
                      state_init: ChainState | None = None,
                      on_iteration: Callable[[int, np.ndarray], None] | None = None,
                      ) -> ScFixedPoint:
    """Flooding DE over the chain until the worst position settles.

    Success means every variable-to-check class has put mass 1 - success_tol
    on dimension 0; a vanishing L-inf change across all classes with the
    worst position still undecoded counts as a stall (decoded = False).
    ``state_init`` warm-starts the sweep-from-above continuation.
    """
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"erasure probability must be in [0, 1], got {eps}")
    eng = _ChainDe(chain, m)
    ch_rows = np.broadcast_to(channel_vector(m, eps), (chain.L, m + 1))
    if state_init is None:
        c2v = eng.fresh_c2v()
    else:
        if state_init.m != m or state_init.v2c.shape[0] != chain.L:
            raise ValueError("warm-start state does not match the chain")
        c2v = state_init.c2v
    prev_v2c = None
    v2c = None
    iterations = 0
    for it in range(1, opts.max_iters + 1):
        v2c = eng.variable_step(c2v, ch_rows)
        iterations = it
        if on_iteration is not None:
            on_iteration(it, v2c)
        if de._trace_hook is not None:
            de._trace_hook(it, v2c[:, :, 0].min(axis=1))
        if v2c[:, :, 0].min() >= 1.0 - opts.success_tol:
            break
        if prev_v2c is not None and np.abs(v2c - prev_v2c).max() < opts.conv_tol:
            break
        prev_v2c = v2c
        c2v = eng.check_step(v2c)
    decoded = bool(v2c[:, :, 0].min() >= 1.0 - opts.success_tol)
    c2v = eng.check_step(v2c)
    return ScFixedPoint(ChainState(m, v2c, c2v), iterations, decoded)


def sc_bp_threshold(chain: CoupledChain, m: int,
                    opts: DeOptions = DeOptions()) -> float:
    """Bisection on the decoded flag of the chain DE."""
    lo, hi = 0.0, 1.0
    while hi - lo >= opts.bisect_tol:
        mid = 0.5 * (lo + hi)
        if sc_de_fixed_point(chain, m, mid, opts).decoded:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _sc_exit_evaluator(chain: CoupledChain, m: int, opts: DeOptions):
    """(eps, warm ChainState) -> (chain-averaged h, new state)."""
    wt = exit_weight_table(m)
    eng = _ChainDe(chain, m)

    def evaluate(eps, state):
        fp = sc_de_fixed_point(chain, m, eps, opts, state_init=state)
        if fp.decoded:
            return 0.0, fp.state
        ext = eng.extrinsic(fp.state.c2v)
        h_pos = ext @ wt.weights_at(eps)
        return float(h_pos.mean()), fp.state

    return evaluate


def sc_exit_curve(chain: CoupledChain, m: int, grid,
                  opts: DeOptions = DeOptions()) -> ExitCurve:
    """Chain-averaged transfer curve, swept downward with warm starts."""
    return _sweep_curve(_sc_exit_evaluator(chain, m, opts), grid)


def sc_map_bound(chain: CoupledChain, m: int, opts: DeOptions = DeOptions(),
                 panel: float = 2e-3, area_tol: float = 5e-5) -> float:
    """Area-rule MAP bound for the chain, against its reduced design rate."""
    return invert_exit_area(_sc_exit_evaluator(chain, m, opts), chain.rate,
                            panel=panel, area_tol=area_tol)
