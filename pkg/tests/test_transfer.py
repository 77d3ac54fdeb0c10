"""Transfer tensors against explicit subspace arithmetic, plus convolution laws."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nbldpc.oracles import all_subspaces, intersect_dim, sum_dim
from nbldpc.transfer import (
    DimDistribution,
    NormalizationError,
    channel_distribution,
    check_coefficients,
    check_coefficients_exact,
    check_convolve,
    variable_coefficients,
    variable_coefficients_exact,
    variable_convolve,
)


def dist(m, values):
    return DimDistribution(m, np.array(values, dtype=float))


@st.composite
def distributions(draw, m):
    raw = draw(st.lists(st.floats(0.0, 1.0, allow_nan=False),
                        min_size=m + 1, max_size=m + 1).filter(lambda w: sum(w) > 1e-3))
    p = np.array(raw) / sum(raw)
    return DimDistribution(m, p)


class TestCoefficientValues:
    def test_check_sum_with_zero_subspace_is_identity(self):
        c = check_coefficients(2).coeff
        for j in range(3):
            for k in range(3):
                assert c[0, j, k] == (1.0 if k == j else 0.0)

    def test_check_two_lines_of_the_plane(self):
        # oracle: all ordered pairs of the three dimension-1 subspaces
        lines = all_subspaces(2, 1)
        dims = [sum_dim(a, b) for a in lines for b in lines]
        assert Fraction(dims.count(2), 9) == Fraction(2, 3)
        c = check_coefficients_exact(2)
        assert c[1][1][2] == Fraction(2, 3)
        assert c[1][1][1] == Fraction(1, 3)

    def test_check_whole_space_absorbs(self):
        c = check_coefficients_exact(1)
        assert c[1][1][1] == 1

    def test_variable_whole_space_is_identity(self):
        for m in (1, 2, 3):
            v = variable_coefficients(m).coeff
            for j in range(m + 1):
                for k in range(m + 1):
                    assert v[m, j, k] == (1.0 if k == j else 0.0)
            for i in range(m + 1):  # intersecting with the whole space
                for k in range(m + 1):
                    assert v[i, m, k] == (1.0 if k == i else 0.0)

    def test_variable_two_lines_of_the_plane(self):
        lines = all_subspaces(2, 1)
        dims = [intersect_dim(a, b) for a in lines for b in lines]
        assert Fraction(dims.count(0), 9) == Fraction(2, 3)
        v = variable_coefficients_exact(2)
        assert v[1][1][0] == Fraction(2, 3)
        assert v[1][1][1] == Fraction(1, 3)

    def test_variable_zero_subspace_absorbs(self):
        v = variable_coefficients_exact(3)
        for j in range(4):
            assert v[0][j][0] == 1

    @pytest.mark.parametrize("m", range(1, 9))
    def test_rows_sum_to_one_exactly(self, m):
        for exact in (check_coefficients_exact(m), variable_coefficients_exact(m)):
            for i in range(m + 1):
                for j in range(m + 1):
                    assert sum(exact[i][j]) == 1

    @pytest.mark.parametrize("m", range(1, 5))
    def test_exact_match_with_subspace_arithmetic(self, m):
        """Primary oracle: combine every subspace pair explicitly."""
        spaces = {k: all_subspaces(m, k) for k in range(m + 1)}
        c = check_coefficients_exact(m)
        v = variable_coefficients_exact(m)
        for i in range(m + 1):
            for a in spaces[i]:
                for j in range(m + 1):
                    sums = [sum_dim(a, b) for b in spaces[j]]
                    meets = [intersect_dim(a, b) for b in spaces[j]]
                    n = len(spaces[j])
                    for k in range(m + 1):
                        assert c[i][j][k] == Fraction(sums.count(k), n)
                        assert v[i][j][k] == Fraction(meets.count(k), n)

    def test_support_bounds(self):
        m = 4
        c = check_coefficients(m).coeff
        v = variable_coefficients(m).coeff
        for i in range(m + 1):
            for j in range(m + 1):
                for k in range(m + 1):
                    if not max(i, j) <= k <= min(i + j, m):
                        assert c[i, j, k] == 0.0
                    if not max(0, i + j - m) <= k <= min(i, j):
                        assert v[i, j, k] == 0.0

    def test_m_out_of_range(self):
        with pytest.raises(ValueError):
            check_coefficients(0)
        with pytest.raises(ValueError):
            variable_coefficients(13)


class TestChannelDistribution:
    def test_endpoints(self):
        assert channel_distribution(2, 0.0).p.tolist() == [1, 0, 0]
        assert channel_distribution(2, 1.0).p.tolist() == [0, 0, 1]

    def test_half(self):
        assert channel_distribution(2, 0.5).p.tolist() == [0.25, 0.5, 0.25]

    def test_eps_out_of_range(self):
        with pytest.raises(ValueError):
            channel_distribution(2, -0.1)
        with pytest.raises(ValueError):
            channel_distribution(2, 1.5)


class TestConvolutions:
    def test_check_identity_element(self):
        t = check_coefficients(3)
        b = dist(3, [0.1, 0.2, 0.3, 0.4])
        out = check_convolve(DimDistribution.delta(3, 0), b, t)
        np.testing.assert_allclose(out.p, b.p, atol=1e-15)

    def test_check_whole_space_absorbs(self):
        t = check_coefficients(3)
        d = DimDistribution.delta(3, 3)
        out = check_convolve(d, d, t)
        np.testing.assert_allclose(out.p, d.p, atol=0)

    def test_check_m1_is_erasure_union(self):
        t = check_coefficients(1)
        x, y = 0.3, 0.8
        out = check_convolve(dist(1, [1 - x, x]), dist(1, [1 - y, y]), t)
        np.testing.assert_allclose(out.p, [(1 - x) * (1 - y), x + y - x * y],
                                   rtol=1e-14)

    def test_variable_identity_element(self):
        t = variable_coefficients(3)
        b = dist(3, [0.4, 0.3, 0.2, 0.1])
        out = variable_convolve(DimDistribution.delta(3, 3), b, t)
        np.testing.assert_allclose(out.p, b.p, atol=1e-15)

    def test_variable_zero_absorbs(self):
        t = variable_coefficients(2)
        out = variable_convolve(DimDistribution.delta(2, 0),
                                dist(2, [0.5, 0.25, 0.25]), t)
        np.testing.assert_allclose(out.p, [1, 0, 0], atol=1e-15)

    def test_variable_m1_is_erasure_product(self):
        t = variable_coefficients(1)
        x, y = 0.6, 0.25
        out = variable_convolve(dist(1, [1 - x, x]), dist(1, [1 - y, y]), t)
        np.testing.assert_allclose(out.p, [1 - x * y, x * y], rtol=1e-14)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            check_convolve(dist(1, [1, 0]), dist(2, [1, 0, 0]), check_coefficients(1))
        with pytest.raises(ValueError):
            check_convolve(dist(1, [1, 0]), dist(1, [1, 0]), variable_coefficients(1))

    @given(st.data())
    @settings(max_examples=40, deadline=None)
    def test_commutative_and_normalized(self, data):
        m = data.draw(st.integers(1, 5))
        a = data.draw(distributions(m))
        b = data.draw(distributions(m))
        for conv, coeffs in ((check_convolve, check_coefficients),
                             (variable_convolve, variable_coefficients)):
            t = coeffs(m)
            ab = conv(a, b, t)
            ba = conv(b, a, t)
            assert np.abs(ab.p - ba.p).max() < 1e-12
            assert abs(ab.p.sum() - 1.0) < 1e-12

    @given(st.data())
    @settings(max_examples=40, deadline=None)
    def test_associative(self, data):
        m = data.draw(st.integers(1, 5))
        a = data.draw(distributions(m))
        b = data.draw(distributions(m))
        c = data.draw(distributions(m))
        for conv, coeffs in ((check_convolve, check_coefficients),
                             (variable_convolve, variable_coefficients)):
            t = coeffs(m)
            left = conv(conv(a, b, t), c, t)
            right = conv(a, conv(b, c, t), t)
            assert np.abs(left.p - right.p).max() < 1e-12


class TestDimDistribution:
    def test_rejects_unnormalized(self):
        with pytest.raises(NormalizationError):
            DimDistribution(1, np.array([0.5, 0.6]))

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            DimDistribution(1, np.array([-0.1, 1.1]))

    def test_rejects_bad_shape(self):
        with pytest.raises(ValueError):
            DimDistribution(2, np.array([1.0, 0.0]))

    def test_read_only(self):
        d = DimDistribution.delta(2, 0)
        with pytest.raises(ValueError):
            d.p[0] = 0.5
