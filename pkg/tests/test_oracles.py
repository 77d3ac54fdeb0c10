"""The validators themselves: explicit subspaces and Monte-Carlo decoding."""

import pytest

from nbldpc.gf2 import Gf2Matrix
from nbldpc.oracles import (
    ExplicitSubspace,
    all_subspaces,
    binary_de_trajectory,
    expand_nullspace,
    intersect_dim,
    mc_erasure_probability,
    self_check,
    sum_dim,
)


def vecs(m, *strings):
    return tuple(int(s, 2) for s in strings)


class TestExplicitSubspace:
    def test_dim(self):
        s = ExplicitSubspace(2, vecs(2, "00", "01"))
        assert s.dim == 1

    def test_requires_zero(self):
        with pytest.raises(ValueError):
            ExplicitSubspace(2, vecs(2, "01", "10"))

    def test_requires_closure(self):
        with pytest.raises(ValueError):
            ExplicitSubspace(2, vecs(2, "00", "01", "10", "00"))

    def test_requires_power_of_two(self):
        with pytest.raises(ValueError):
            ExplicitSubspace(2, vecs(2, "00", "01", "10"))


class TestNullspaceExpansion:
    def test_single_check(self):
        assert expand_nullspace(Gf2Matrix.from_rows([[1, 0]])).elements == vecs(2, "00", "01")

    def test_parity_check(self):
        assert expand_nullspace(Gf2Matrix.from_rows([[1, 1]])).elements == vecs(2, "00", "11")

    def test_whole_space(self):
        empty = Gf2Matrix((), 2)
        assert len(expand_nullspace(empty).elements) == 4


class TestSubspaceArithmetic:
    def test_independent_lines_span_plane(self):
        a = ExplicitSubspace(2, vecs(2, "00", "01"))
        b = ExplicitSubspace(2, vecs(2, "00", "10"))
        assert sum_dim(a, b) == 2
        assert intersect_dim(a, b) == 0

    def test_idempotence(self):
        s = ExplicitSubspace(2, vecs(2, "00", "11"))
        assert sum_dim(s, s) == 1
        assert intersect_dim(s, s) == 1

    def test_identity_elements(self):
        zero = ExplicitSubspace(2, vecs(2, "00"))
        whole = ExplicitSubspace(2, vecs(2, "00", "01", "10", "11"))
        s = ExplicitSubspace(2, vecs(2, "00", "11"))
        assert sum_dim(zero, s) == s.dim
        assert intersect_dim(whole, s) == s.dim

    def test_mismatched_ambient(self):
        with pytest.raises(ValueError):
            sum_dim(ExplicitSubspace(1, (0, 1)), ExplicitSubspace(2, (0, 1)))

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_modular_identity(self, m):
        spaces = [s for k in range(m + 1) for s in all_subspaces(m, k)]
        for a in spaces:
            for b in spaces:
                assert a.dim + b.dim == sum_dim(a, b) + intersect_dim(a, b)


class TestMonteCarlo:
    def test_forced_bit_is_never_erased(self):
        R = Gf2Matrix.from_rows([[1, 0]])
        p, se = mc_erasure_probability(R, 0, 0.7, 5000, seed=1)
        assert p == 0.0 and se == 0.0

    def test_unprotected_bit_is_always_erased(self):
        R = Gf2Matrix.from_rows([[1, 0]])
        p, _ = mc_erasure_probability(R, 1, 0.3, 5000, seed=2)
        assert p == 1.0

    def test_parity_pair_matches_closed_form(self):
        R = Gf2Matrix.from_rows([[1, 1]])
        p, se = mc_erasure_probability(R, 0, 0.5, 1_000_000, seed=3)
        assert abs(p - 0.5) <= 3 * se

    def test_deterministic_given_seed(self):
        R = Gf2Matrix.from_rows([[1, 1, 0], [0, 1, 1]])
        a = mc_erasure_probability(R, 1, 0.4, 20_000, seed=99)
        b = mc_erasure_probability(R, 1, 0.4, 20_000, seed=99)
        assert a == b

    def test_trials_validation(self):
        with pytest.raises(ValueError):
            mc_erasure_probability(Gf2Matrix.from_rows([[1]]), 0, 0.5, 0, seed=0)


def test_binary_de_starts_at_eps():
    traj = binary_de_trajectory(3, 6, 0.4, 3)
    assert traj[0] == 0.4
    assert traj[1] == pytest.approx(0.4 * (1 - 0.6**5) ** 2)


def test_self_check_passes():
    assert all(passed for _, passed, _ in self_check(seed=2024))
