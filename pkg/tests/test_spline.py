import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sbmpc.spline import (
    ControlPlan,
    interpolate,
    interpolate_many,
    make_plan,
    resample_plan,
    shift_plan,
)


def test_make_plan_two_knots_endpoints():
    plan = make_plan(np.zeros((2, 1)), t_start=0.0, horizon=1.0)
    assert plan.knot_times.tolist() == [0.0, 1.0]


def test_make_plan_uniform_spacing():
    plan = make_plan(np.zeros((5, 1)), t_start=2.0, horizon=1.0)
    assert plan.knot_times.tolist() == [2.0, 2.25, 2.5, 2.75, 3.0]


def test_make_plan_rejects_zero_horizon():
    with pytest.raises(ValueError):
        make_plan(np.zeros((2, 1)), t_start=0.0, horizon=0.0)


def test_make_plan_rejects_single_knot():
    with pytest.raises(ValueError):
        make_plan(np.zeros((1, 3)), t_start=0.0, horizon=1.0)


def test_plan_rejects_decreasing_times():
    with pytest.raises(ValueError):
        ControlPlan(np.zeros((2, 1)), np.array([1.0, 0.0]))


def test_plan_rejects_unknown_kind():
    with pytest.raises(ValueError):
        make_plan(np.zeros((2, 1)), 0.0, 1.0, kind="quintic")


def test_linear_midpoint():
    plan = make_plan(np.array([[0.0], [2.0]]), 0.0, 1.0, kind="linear")
    assert interpolate(plan, 0.5).tolist() == [1.0]


def test_zoh_holds_until_next_knot():
    plan = make_plan(np.array([[0.0], [2.0]]), 0.0, 1.0, kind="zoh")
    assert interpolate(plan, 0.99).tolist() == [0.0]
    assert interpolate(plan, 1.0).tolist() == [2.0]


def test_clamp_beyond_last_knot():
    plan = make_plan(np.array([[0.0], [2.0]]), 0.0, 1.0, kind="linear")
    assert interpolate(plan, 5.0).tolist() == [2.0]
    assert interpolate(plan, -3.0).tolist() == [0.0]


@pytest.mark.parametrize("kind", ["zoh", "linear", "cubic"])
def test_knot_reproduction(kind):
    rng = np.random.default_rng(3)
    knots = rng.normal(size=(6, 3))
    plan = make_plan(knots, 1.0, 2.0, kind=kind)
    values = interpolate_many(plan, plan.knot_times)
    np.testing.assert_allclose(values, knots, atol=1e-9)


@pytest.mark.parametrize("kind", ["zoh", "linear"])
def test_knot_reproduction_exact_for_piecewise_kinds(kind):
    rng = np.random.default_rng(4)
    knots = rng.normal(size=(5, 2))
    plan = make_plan(knots, 0.0, 1.0, kind=kind)
    for i, t in enumerate(plan.knot_times):
        assert interpolate(plan, t).tolist() == knots[i].tolist()


@given(
    st.integers(min_value=2, max_value=8),
    st.floats(min_value=0.05, max_value=10.0),
    st.floats(min_value=-5.0, max_value=5.0),
    st.randoms(use_true_random=False),
)
@settings(max_examples=50, deadline=None)
def test_linear_is_affine_within_segments(num_nodes, horizon, t_start, pyrandom):
    rng = np.random.default_rng(pyrandom.randint(0, 2**31))
    plan = make_plan(rng.normal(size=(num_nodes, 2)), t_start, horizon, kind="linear")
    seg = rng.integers(0, num_nodes - 1)
    t0, t1 = plan.knot_times[seg], plan.knot_times[seg + 1]
    a = t0 + 0.25 * (t1 - t0)
    b = t0 + 0.75 * (t1 - t0)
    mid = (a + b) / 2
    expected = (interpolate(plan, a) + interpolate(plan, b)) / 2
    np.testing.assert_allclose(interpolate(plan, mid), expected, atol=1e-12)


@pytest.mark.parametrize("kind", ["zoh", "linear", "cubic"])
def test_clamping_matches_boundary_knots(kind):
    rng = np.random.default_rng(7)
    plan = make_plan(rng.normal(size=(4, 2)), 0.0, 1.5, kind=kind)
    np.testing.assert_array_equal(interpolate(plan, -10.0), plan.knots[0])
    np.testing.assert_array_equal(interpolate(plan, 99.0), plan.knots[-1])


def test_shift_identity_resample():
    rng = np.random.default_rng(11)
    plan = make_plan(rng.normal(size=(4, 2)), 1.0, 0.75, kind="zoh")
    shifted = shift_plan(plan, 1.0, 0.75)
    np.testing.assert_array_equal(shifted.knots, plan.knots)
    np.testing.assert_array_equal(shifted.knot_times, plan.knot_times)


def test_shift_linear_two_knot_example():
    plan = make_plan(np.array([[0.0], [2.0]]), 0.0, 1.0, kind="linear")
    shifted = shift_plan(plan, 0.5, 1.0)
    np.testing.assert_allclose(shifted.knots, [[1.0], [2.0]])


def test_shift_cubic_matches_pointwise_interpolation():
    rng = np.random.default_rng(13)
    plan = make_plan(rng.normal(size=(6, 2)), 0.0, 2.0, kind="cubic")
    shifted = shift_plan(plan, 0.4, 2.0)
    for i, t in enumerate(shifted.knot_times):
        np.testing.assert_allclose(shifted.knots[i], interpolate(plan, t), atol=1e-12)


@pytest.mark.parametrize("kind", ["zoh", "linear", "cubic"])
def test_shift_idempotent_on_same_grid(kind):
    rng = np.random.default_rng(17)
    plan = make_plan(rng.normal(size=(5, 3)), 0.0, 1.0, kind=kind)
    once = shift_plan(plan, 0.3, 1.0)
    twice = shift_plan(once, 0.3, 1.0)
    np.testing.assert_allclose(twice.knots, once.knots, atol=1e-12)


def test_shift_rejects_backwards():
    plan = make_plan(np.zeros((3, 1)), 1.0, 1.0)
    with pytest.raises(ValueError):
        shift_plan(plan, 0.5, 1.0)


def test_shift_preserves_shape_and_kind():
    plan = make_plan(np.ones((5, 2)), 0.0, 1.0, kind="cubic")
    shifted = shift_plan(plan, 0.25, 2.0)
    assert shifted.num_nodes == 5
    assert shifted.nu == 2
    assert shifted.kind == "cubic"
    assert shifted.t_start == 0.25
    assert shifted.t_end == 2.25


def test_resample_changes_node_count():
    plan = make_plan(np.array([[0.0], [1.0], [2.0]]), 0.0, 1.0, kind="linear")
    dense = resample_plan(plan, 0.0, 1.0, num_nodes=5)
    np.testing.assert_allclose(dense.knots[:, 0], [0.0, 0.5, 1.0, 1.5, 2.0])


def test_cubic_c1_continuity_at_interior_knot():
    rng = np.random.default_rng(19)
    plan = make_plan(rng.normal(size=(5, 1)), 0.0, 1.0, kind="cubic")
    t_knot = plan.knot_times[2]
    eps = 1e-6
    left = (interpolate(plan, t_knot) - interpolate(plan, t_knot - eps)) / eps
    right = (interpolate(plan, t_knot + eps) - interpolate(plan, t_knot)) / eps
    np.testing.assert_allclose(left, right, atol=1e-4)


def test_plans_are_immutable():
    plan = make_plan(np.zeros((2, 1)), 0.0, 1.0)
    with pytest.raises(ValueError):
        plan.knots[0, 0] = 5.0
