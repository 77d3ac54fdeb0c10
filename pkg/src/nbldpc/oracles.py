"""Brute-force validators for the analytic machinery.

Everything here favors obviousness over speed: explicit vector sets for
subspace arithmetic, scalar recursions for the binary special case, and
seeded Monte-Carlo erasure decoding of the small codes behind the EXIT
weight polynomials.  The CLI exposes these through ``--self-check``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf2 import Gf2Matrix, enumerate_subspaces, gaussian_binomial


@dataclass(frozen=True)
class ExplicitSubspace:
    """A subspace of GF(2)^m as the explicit set of its vectors.

    Vectors are integers with coordinate j at bit (m-1-j), the same packing
    used by Gf2Matrix rows.
    """

    m: int
    elements: tuple[int, ...]

    def __post_init__(self):
        elems = set(self.elements)
        if 0 not in elems:
            raise ValueError("a subspace must contain the zero vector")
        n = len(elems)
        if n & (n - 1):
            raise ValueError(f"subspace size {n} is not a power of two")
        for a in elems:
            for b in elems:
                if a ^ b not in elems:
                    raise ValueError("set is not closed under XOR")
        object.__setattr__(self, "elements", tuple(sorted(elems)))

    @property
    def dim(self) -> int:
        return len(self.elements).bit_length() - 1


def expand_nullspace(R: Gf2Matrix) -> ExplicitSubspace:
    """All vectors x with R x = 0, found by scanning the 2^m candidates."""
    m = R.cols
    if m > 10:
        raise ValueError("nullspace expansion is a desk-scale oracle (m <= 10)")
    elems = [x for x in range(1 << m)
             if all((r & x).bit_count() % 2 == 0 for r in R.rows)]
    return ExplicitSubspace(m, tuple(elems))


def sum_dim(a: ExplicitSubspace, b: ExplicitSubspace) -> int:
    """Dimension of span(a | b)."""
    if a.m != b.m:
        raise ValueError("ambient dimensions differ")
    pivots: dict[int, int] = {}
    for v in a.elements + b.elements:
        while v:
            top = v.bit_length() - 1
            if top not in pivots:
                pivots[top] = v
                break
            v ^= pivots[top]
    return len(pivots)


def intersect_dim(a: ExplicitSubspace, b: ExplicitSubspace) -> int:
    """Dimension of the set intersection (itself a subspace)."""
    if a.m != b.m:
        raise ValueError("ambient dimensions differ")
    common = set(a.elements) & set(b.elements)
    return len(common).bit_length() - 1


def all_subspaces(m: int, k: int) -> list[ExplicitSubspace]:
    """Every k-dimensional subspace of GF(2)^m, expanded from the catalogs."""
    return [expand_nullspace(R) for R in enumerate_subspaces(m, k).matrices]


def mc_erasure_probability(R: Gf2Matrix, bit: int, eps: float, trials: int,
                           seed: int) -> tuple[float, float]:
    """Monte-Carlo extrinsic bit-erasure probability of the code {x: Rx=0}.

    Each trial erases the other m-1 bits independently with probability eps;
    the bit stays erased when some codeword with a one in that position is
    consistent with the surviving (all-zero) observations.  Returns the
    estimate and its binomial standard error.  Randomness comes from numpy's
    default PCG64 generator seeded with ``seed``, so runs are reproducible.
    """
    m = R.cols
    if m > 10:
        raise ValueError("Monte-Carlo oracle is desk scale only (m <= 10)")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= bit < m:
        raise IndexError(f"bit {bit} out of range for m={m}")
    bit_mask = 1 << (m - 1 - bit)
    # codewords that could leave the bit ambiguous, stripped of that bit
    witnesses = [c ^ bit_mask for c in expand_nullspace(R).elements if c & bit_mask]

    rng = np.random.default_rng(seed)
    others = [j for j in range(m) if j != bit]
    erased_masks = np.zeros(trials, dtype=np.uint64)
    for j in others:
        draw = rng.random(trials) < eps
        erased_masks |= draw.astype(np.uint64) << np.uint64(m - 1 - j)

    erased = np.zeros(trials, dtype=bool)
    for w in witnesses:
        # witness fits iff its support is inside the erased set
        erased |= (np.uint64(w) & ~erased_masks) == 0
    p_hat = float(np.mean(erased))
    se = float(np.sqrt(p_hat * (1.0 - p_hat) / trials))
    return p_hat, se


def binary_de_trajectory(dv: int, dc: int, eps: float, iters: int) -> list[float]:
    """Scalar erasure-probability recursion for the binary (m=1) ensemble.

    Returns [x_1, ..., x_iters] with x_1 = eps and
    x_next = eps * (1 - (1 - x)^(dc-1))^(dv-1).
    """
    traj = []
    x = eps
    for _ in range(iters):
        traj.append(x)
        x = eps * (1.0 - (1.0 - x) ** (dc - 1)) ** (dv - 1)
    return traj


def binary_coupled_de_trajectory(dv: int, dc: int, L: int, eps: float,
                                 iters: int) -> list[np.ndarray]:
    """Scalar per-edge-class recursion for the coupled binary chain.

    Mirrors the chain geometry (variable position i talks to checks
    i..i+dv-1, b = dc/dv parallel edges per position pair) with plain float
    erasure probabilities.  Returns the v2c arrays, shape (L, dv), for each
    iteration.
    """
    if dc % dv:
        raise ValueError("dc must be divisible by dv")
    b = dc // dv
    Lc = L + dv - 1
    y = np.ones((Lc, dv))  # c2v, init: no check information
    out = []
    for _ in range(iters):
        x = np.zeros((L, dv))
        for i in range(L):
            for t in range(dv):
                prod = eps
                for t2 in range(dv):
                    if t2 != t:
                        prod *= y[i + t2, t2]
                x[i, t] = prod
        out.append(x)
        y = np.ones((Lc, dv))
        for j in range(Lc):
            for s in range(dv):
                if not 0 <= j - s < L:
                    continue
                ok = (1.0 - x[j - s, s]) ** (b - 1)
                for u in range(dv):
                    if u != s and 0 <= j - u < L:
                        ok *= (1.0 - x[j - u, u]) ** b
                y[j, s] = 1.0 - ok
    return out


def self_check(seed: int = 12345) -> list[tuple[str, bool, str]]:
    """Fast cross-validation of the analytic pipeline against brute force.

    Returns (name, passed, detail) triples; used by the CLI --self-check.
    """
    from fractions import Fraction

    from . import de, exitchart, transfer

    results = []

    ok = all(len(enumerate_subspaces(m, k)) == gaussian_binomial(m, k)
             for m in range(1, 6) for k in range(m + 1))
    results.append(("catalog sizes match Gaussian binomials (m<=5)", ok, ""))

    ok = True
    detail = ""
    for m in range(1, 4):
        spaces = {k: all_subspaces(m, k) for k in range(m + 1)}
        c_exact = transfer.check_coefficients_exact(m)
        v_exact = transfer.variable_coefficients_exact(m)
        for i in range(m + 1):
            for j in range(m + 1):
                a = spaces[i][0]
                sums = [sum_dim(a, s) for s in spaces[j]]
                meets = [intersect_dim(a, s) for s in spaces[j]]
                for k in range(m + 1):
                    cf = Fraction(sums.count(k), len(sums))
                    vf = Fraction(meets.count(k), len(meets))
                    if cf != c_exact[i][j][k] or vf != v_exact[i][j][k]:
                        ok = False
                        detail = f"mismatch at m={m} (i={i}, j={j}, k={k})"
    results.append(("transfer tensors match subspace arithmetic (m<=3)", ok, detail))

    spec = de.EnsembleSpec(3, 6, 1)
    opts = de.DeOptions(max_iters=60)
    got = []
    de.de_fixed_point(spec, 0.4, opts, on_iteration=lambda it, pv: got.append(pv[1]))
    want = binary_de_trajectory(3, 6, 0.4, len(got))
    ok = max(abs(g - w) for g, w in zip(got, want)) < 1e-12
    results.append(("m=1 density evolution matches scalar recursion", ok, ""))

    R = Gf2Matrix.from_rows([[1, 1]])
    p_hat, se = mc_erasure_probability(R, 0, 0.5, 100_000, seed)
    w = exitchart.subspace_bit_erasure(R, 0, 2)
    p_true = float(exitchart.poly_eval(w, Fraction(1, 2)))
    ok = abs(p_hat - p_true) <= 3.0 * max(se, 1e-12)
    results.append(("Monte-Carlo erasure decoding matches rank formula",
                    ok, f"got {p_hat:.5f}, want {p_true:.5f}"))
    return results
