"""Operator construction, the SBP identity, and accuracy conditions."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sbpfdtd.errors import InvalidArgument, OperatorUnderdetermined
from sbpfdtd.sbp1d import (
    FAMILIES,
    accuracy_residuals,
    apply_d_minus,
    apply_d_plus,
    build_sbp_1d,
    build_staggered_axis,
    format_operator_dump,
    sbp_identity_residual,
)


def ops_pair(n, h, family="uniform-first-order"):
    axis = build_staggered_axis(n, h)
    return axis, build_sbp_1d(axis, family)


class TestStaggeredAxis:
    def test_unit_axis_coordinates(self):
        ax = build_staggered_axis(4, 1.0)
        np.testing.assert_array_equal(ax.x_minus, [0, 1, 2, 3, 4])
        np.testing.assert_array_equal(ax.x_plus, [0.5, 1.5, 2.5, 3.5])

    def test_smallest_axis(self):
        ax = build_staggered_axis(1, 0.5)
        np.testing.assert_array_equal(ax.x_minus, [0.0, 0.5])
        np.testing.assert_array_equal(ax.x_plus, [0.25])

    def test_length_relation(self):
        ax = build_staggered_axis(3, 2.0)
        assert len(ax.x_minus) == 4 and len(ax.x_plus) == 3
        np.testing.assert_allclose(np.diff(ax.x_minus), 2.0)
        np.testing.assert_allclose(np.diff(ax.x_plus), 2.0)

    @pytest.mark.parametrize("n,h", [(0, 1.0), (-2, 1.0), (3, 0.0), (3, -1.0)])
    def test_rejects_bad_arguments(self, n, h):
        with pytest.raises(InvalidArgument):
            build_staggered_axis(n, h)

    @given(n=st.integers(1, 300), h=st.floats(1e-6, 1e3))
    def test_exact_node_placement(self, n, h):
        ax = build_staggered_axis(n, h)
        # i*h and (i+1/2)*h exactly, not cumulative sums
        assert ax.x_minus[-1] == n * h
        assert ax.x_plus[0] == 0.5 * h


class TestBuildSbp1d:
    def test_d_minus_rows_n4(self):
        _, ops = ops_pair(4, 1.0)
        np.testing.assert_array_equal(ops.d_minus[0], [-1, 1, 0, 0])
        np.testing.assert_array_equal(ops.d_minus[2], [0, -1, 1, 0])
        np.testing.assert_array_equal(ops.d_minus[4], [0, 0, -1, 1])

    def test_uniform_family_norms_and_projection(self):
        _, ops = ops_pair(4, 1.0)
        np.testing.assert_array_equal(ops.p_left, [2, -1, 0, 0])
        np.testing.assert_array_equal(ops.p_minus, [1, 1, 1, 1, 1])
        np.testing.assert_array_equal(ops.p_plus, [1, 1, 1, 1])
        assert ops.a1 == ops.a2 == 1.0

    def test_trapezoid_family_projection_kills_linears(self):
        axis, ops = ops_pair(4, 1.0, "trapezoid-second-order")
        np.testing.assert_array_equal(ops.p_left, [1.5, -0.5, 0, 0])
        # extrapolation to x = 0 is exact for linear data
        assert abs(ops.p_left @ axis.x_plus) < 1e-15
        assert abs(ops.p_right @ axis.x_plus - axis.x_minus[-1]) < 1e-13

    def test_projection_consistency(self):
        for family in FAMILIES:
            _, ops = ops_pair(7, 0.3, family)
            assert abs(ops.p_left.sum() - 1.0) < 1e-15
            assert abs(ops.p_right.sum() - 1.0) < 1e-15

    def test_two_nonzeros_nearest_boundary(self):
        _, ops = ops_pair(9, 0.1)
        assert np.count_nonzero(ops.p_left) == 2
        assert np.count_nonzero(ops.p_left[:2]) == 2
        assert np.count_nonzero(ops.p_right) == 2
        assert np.count_nonzero(ops.p_right[-2:]) == 2

    def test_positive_norms(self):
        for family in FAMILIES:
            _, ops = ops_pair(5, 0.25, family)
            assert (ops.p_plus > 0).all() and (ops.p_minus > 0).all()

    def test_underdetermined(self):
        axis = build_staggered_axis(1, 1.0)
        with pytest.raises(OperatorUnderdetermined):
            build_sbp_1d(axis)

    def test_unknown_family(self):
        axis = build_staggered_axis(4, 1.0)
        with pytest.raises(InvalidArgument):
            build_sbp_1d(axis, "fourth-order")

    def test_mirror_symmetry(self):
        # reversing both index orders negates D and swaps left/right
        for family in FAMILIES:
            _, ops = ops_pair(6, 0.7, family)
            np.testing.assert_array_equal(np.flip(ops.d_plus), -ops.d_plus)
            np.testing.assert_array_equal(np.flip(ops.d_minus), -ops.d_minus)
            np.testing.assert_array_equal(ops.p_left[::-1], ops.p_right)
            np.testing.assert_array_equal(ops.p_minus[::-1], ops.p_minus)


class TestSbpIdentity:
    @pytest.mark.parametrize("family", FAMILIES)
    @pytest.mark.parametrize("n", [2, 3, 4, 8, 17, 64, 128])
    def test_identity_holds(self, n, family):
        _, ops = ops_pair(n, 1.0, family)
        assert sbp_identity_residual(ops) <= 1e-14

    @given(n=st.integers(2, 128), h=st.floats(1e-3, 1e3),
           family=st.sampled_from(FAMILIES))
    @settings(max_examples=60, deadline=None)
    def test_identity_any_h(self, n, h, family):
        _, ops = ops_pair(n, h, family)
        # Q is h-free, so the tolerance does not scale with h
        assert sbp_identity_residual(ops) <= 1e-14

    def test_tampered_projection(self):
        _, ops = ops_pair(4, 1.0)
        bad = ops.__class__(**{**ops.__dict__, "p_left": np.array([1.0, 0, 0, 0])})
        assert abs(sbp_identity_residual(bad) - np.sqrt(2)) < 1e-14

    def test_repeat_calls_identical(self):
        _, ops = ops_pair(5, 0.5)
        assert sbp_identity_residual(ops) == sbp_identity_residual(ops)

    def test_dimension_mismatch(self):
        _, ops = ops_pair(4, 1.0)
        bad = ops.__class__(**{**ops.__dict__, "p_left": np.zeros(7)})
        with pytest.raises(InvalidArgument):
            sbp_identity_residual(bad)


class TestAccuracy:
    @pytest.mark.parametrize("family", FAMILIES)
    @pytest.mark.parametrize("n", [2, 5, 33, 128])
    @pytest.mark.parametrize("h", [1.0, 0.025, 3.0])
    def test_degree_01_exactness(self, n, h, family):
        axis, ops = ops_pair(n, h, family)
        res = accuracy_residuals(ops, axis)
        assert res.max() <= 1e-13 / h

    def test_constants_exactly_zero(self):
        axis, ops = ops_pair(6, 0.5)
        res = accuracy_residuals(ops, axis)
        assert res.d_minus_k0 == 0.0 and res.d_plus_k0 == 0.0

    def test_quadratic_probe_closure_rows_only(self):
        # d_minus closures are first order: on x^2 the end rows miss by 2h,
        # interior rows and all of d_plus stay exact
        h = 0.5
        axis, ops = ops_pair(8, h)
        err_minus = ops.d_minus @ axis.x_plus**2 - 2 * axis.x_minus
        assert abs(err_minus[0] - 2 * h) < 1e-13
        assert abs(err_minus[-1] + 2 * h) < 1e-13
        assert np.max(np.abs(err_minus[1:-1])) < 1e-13
        err_plus = ops.d_plus @ axis.x_minus**2 - 2 * axis.x_plus
        assert np.max(np.abs(err_plus)) < 1e-13

    def test_wrong_axis_rejected(self):
        axis, ops = ops_pair(4, 1.0)
        other = build_staggered_axis(5, 1.0)
        with pytest.raises(InvalidArgument):
            accuracy_residuals(ops, other)


class TestScaling:
    @given(n=st.integers(2, 40), s=st.floats(0.01, 100.0))
    @settings(max_examples=40, deadline=None)
    def test_h_scaling_leaves_q_unchanged(self, n, s):
        _, a = ops_pair(n, 1.0)
        _, b = ops_pair(n, s)
        qa = a.p_minus[:, None] * a.d_minus
        qb = b.p_minus[:, None] * b.d_minus
        np.testing.assert_allclose(qa, qb, atol=1e-13)
        np.testing.assert_allclose(b.p_plus, s * a.p_plus, rtol=1e-15)
        np.testing.assert_allclose(b.d_plus, a.d_plus / s, rtol=1e-12)


class TestStencilForms:
    @pytest.mark.parametrize("family", FAMILIES)
    @pytest.mark.parametrize("axis_dim", [0, 1])
    def test_unit_probe_agreement_bitwise(self, family, axis_dim):
        _, ops = ops_pair(5, 0.3, family)
        m = 3
        for j in range(6):
            u = np.zeros((6, m) if axis_dim == 0 else (m, 6))
            u[(j, slice(None)) if axis_dim == 0 else (slice(None), j)] = 1.0
            got = apply_d_plus(ops, u, axis=axis_dim)
            want = np.apply_along_axis(lambda v: ops.d_plus @ v, axis_dim, u)
            assert (got == want).all()
        for j in range(5):
            u = np.zeros((5, m) if axis_dim == 0 else (m, 5))
            u[(j, slice(None)) if axis_dim == 0 else (slice(None), j)] = 1.0
            got = apply_d_minus(ops, u, axis=axis_dim)
            want = np.apply_along_axis(lambda v: ops.d_minus @ v, axis_dim, u)
            assert (got == want).all()

    @given(n=st.integers(2, 30), seed=st.integers(0, 2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_random_field_agreement(self, n, seed):
        rng = np.random.default_rng(seed)
        _, ops = ops_pair(n, 0.7)
        f = rng.standard_normal((n + 1, 4))
        np.testing.assert_allclose(
            apply_d_plus(ops, f, 0), ops.d_plus @ f, atol=1e-12)
        g = rng.standard_normal((4, n))
        np.testing.assert_allclose(
            apply_d_minus(ops, g, 1), g @ ops.d_minus.T, atol=1e-12)

    def test_layout_checks(self):
        _, ops = ops_pair(4, 1.0)
        with pytest.raises(InvalidArgument):
            apply_d_plus(ops, np.zeros((4, 3)), 0)
        with pytest.raises(InvalidArgument):
            apply_d_minus(ops, np.zeros((5, 3)), 0)


def test_operator_dump_round_trips():
    _, ops = ops_pair(3, 0.1)
    text = format_operator_dump(ops)
    lines = text.strip().splitlines()
    assert lines[0].startswith("family uniform-first-order")
    # d_plus stanza: header then 3 rows whose parsed values match exactly
    assert lines[1] == "d_plus 3 4"
    parsed = np.array([[float(t) for t in lines[2 + i].split()] for i in range(3)])
    assert (parsed == ops.d_plus).all()
