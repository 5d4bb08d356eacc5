import numpy as np
import pytest

from sbmpc.controller import ControllerConfig
from sbmpc.rollout import evaluate_batch, top_traces
from sbmpc.tasks import (
    Cartpole,
    CylinderPush,
    DoubleIntegrator,
    DoubleIntegratorConfig,
    TaskState,
)


def di_reward_oracle(states, controls, cfg=DoubleIntegratorConfig()):
    """Independent scalar re-computation of the double-integrator reward."""
    total = 0.0
    for q, v in states:
        total -= cfg.w_pos * (np.sqrt(q * q + 0.1**2) - 0.1)
        total -= cfg.w_vel * 0.5 * v * v
    for (u,) in controls:
        total -= cfg.w_ctrl * 0.5 * u * u
    return total


def test_single_ballistic_rollout_matches_hand_computed_trajectory():
    task = DoubleIntegrator()
    x0 = TaskState(t=0.0, q=np.array([0.2]), v=np.array([0.5]))
    cfg = ControllerConfig(horizon=0.1, dt_rollout=0.02)
    batch = evaluate_batch(task, x0, np.zeros((1, 2, 1)), cfg, workers=1)
    assert batch.states.shape == (1, 6, 2)
    # zero control: v constant, q advances by dt*v each step
    expected_q = 0.2 + 0.5 * 0.02 * np.arange(6)
    np.testing.assert_allclose(batch.states[0, :, 0], expected_q, atol=1e-15)
    np.testing.assert_allclose(batch.states[0, :, 1], 0.5, atol=1e-15)
    np.testing.assert_allclose(batch.rewards[0], di_reward_oracle(batch.states[0], np.zeros((5, 1))), atol=1e-12)


def test_first_state_is_x0_for_all_rollouts(rng):
    task = Cartpole()
    x0 = task.reset(rng)
    cfg = ControllerConfig()
    batch = evaluate_batch(task, x0, rng.normal(size=(8, 4, 1)), cfg, workers=1)
    np.testing.assert_array_equal(batch.states[:, 0], np.broadcast_to(x0.as_array(), (8, 4)))


def test_duplicated_samples_get_identical_rewards(rng):
    task = Cartpole()
    x0 = task.reset(rng)
    row = rng.normal(size=(1, 4, 1))
    samples = np.concatenate([row, row, row])
    batch = evaluate_batch(task, x0, samples, ControllerConfig(), workers=1)
    assert batch.rewards[0] == batch.rewards[1] == batch.rewards[2]
    np.testing.assert_array_equal(batch.states[0], batch.states[1])


@pytest.mark.parametrize("task_cls", [Cartpole, CylinderPush, DoubleIntegrator])
def test_worker_count_bitwise_independence(task_cls, rng):
    task = task_cls()
    x0 = task.reset(rng)
    samples = rng.normal(size=(16, 4, task.nu))
    cfg = ControllerConfig()
    results = {w: evaluate_batch(task, x0, samples, cfg, workers=w) for w in (1, 2, 8)}
    for w in (2, 8):
        np.testing.assert_array_equal(results[w].states, results[1].states)
        np.testing.assert_array_equal(results[w].rewards, results[1].rewards)


def test_controls_interpolated_at_step_start(rng):
    # zoh, 2 knots over [0, h]: every step before the last knot uses knot 0
    task = DoubleIntegrator()
    x0 = TaskState(t=0.0, q=np.zeros(1), v=np.zeros(1))
    cfg = ControllerConfig(horizon=0.1, dt_rollout=0.02, spline_kind="zoh")
    knots = np.array([[[0.5], [-0.5]]])
    batch = evaluate_batch(task, x0, knots, cfg, workers=1)
    # v after first step = dt * 0.5
    np.testing.assert_allclose(batch.states[0, 1, 1], 0.01, atol=1e-15)
    # and the final step still uses knot 0 (its start 0.08 < 0.1)
    np.testing.assert_allclose(batch.states[0, -1, 1], 0.05, atol=1e-15)


def test_failed_rollout_gets_minus_inf_but_batch_survives(rng):
    task = DoubleIntegrator()
    x0 = TaskState(t=0.0, q=np.zeros(1), v=np.zeros(1))
    samples = np.zeros((3, 2, 1))
    samples[1, 0, 0] = np.nan
    batch = evaluate_batch(task, x0, samples, ControllerConfig(horizon=0.1, dt_rollout=0.02), workers=1)
    assert batch.rewards[1] == -np.inf
    assert np.isfinite(batch.rewards[[0, 2]]).all()
    assert batch.ok.tolist() == [True, False, True]


def test_all_rollouts_failed_raises(rng):
    task = DoubleIntegrator()
    x0 = TaskState(t=0.0, q=np.zeros(1), v=np.zeros(1))
    samples = np.full((3, 2, 1), np.nan)
    with pytest.raises(RuntimeError):
        evaluate_batch(task, x0, samples, ControllerConfig(horizon=0.1, dt_rollout=0.02), workers=1)


def test_rejects_degenerate_horizon(rng):
    task = DoubleIntegrator()
    x0 = TaskState(t=0.0, q=np.zeros(1), v=np.zeros(1))
    with pytest.raises(ValueError):
        evaluate_batch(task, x0, np.zeros((2, 2, 1)), ControllerConfig(horizon=0.001, dt_rollout=0.02))
    with pytest.raises(ValueError):
        evaluate_batch(task, x0, np.zeros((2, 2, 1)), ControllerConfig(), workers=0)


def test_trace_paths_shape(rng):
    task = CylinderPush()
    x0 = task.reset(rng)
    batch = evaluate_batch(task, x0, rng.normal(size=(4, 4, 2)), ControllerConfig(), workers=1)
    steps = round(0.75 / 0.02)
    assert batch.traces.shape == (4, 2, steps + 1, 3)


# -- top_traces ----------------------------------------------------------------------


def make_batch(rewards):
    rewards = np.asarray(rewards, dtype=np.float64)
    n = rewards.shape[0]
    batch_states = np.zeros((n, 3, 2))
    traces = np.zeros((n, 1, 3, 3))
    traces[:, 0, :, 0] = np.arange(n)[:, None]  # identify each rollout by x coord
    from sbmpc.rollout import RolloutBatch

    return RolloutBatch(
        knots=np.zeros((n, 2, 1)),
        knot_times=np.array([0.0, 1.0]),
        kind="zoh",
        states=batch_states,
        rewards=rewards,
        ok=np.ones(n, dtype=bool),
        traces=traces,
        dt=0.02,
    )


def test_top_traces_k_zero_nominal_only():
    entries = top_traces(make_batch([2.0, 9.0, 1.0, 5.0]), k=0)
    assert len(entries) == 1
    assert entries[0].nominal


def test_top_traces_ordering():
    entries = top_traces(make_batch([2.0, 9.0, 1.0, 5.0]), k=2)
    ids = [e.points[0, 0] for e in entries]
    assert ids == [0.0, 1.0, 3.0]  # nominal first, then rewards 9, 5
    assert [e.nominal for e in entries] == [True, False, False]
    assert [e.reward for e in entries] == [2.0, 9.0, 5.0]


def test_top_traces_k_clamped():
    entries = top_traces(make_batch([2.0, 9.0, 1.0, 5.0]), k=99)
    assert len(entries) == 4


def test_top_traces_rejects_negative_k():
    with pytest.raises(ValueError):
        top_traces(make_batch([1.0, 2.0]), k=-1)


def test_top_traces_multi_point_tasks_flatten(rng):
    task = CylinderPush()
    x0 = task.reset(rng)
    batch = evaluate_batch(task, x0, rng.normal(size=(4, 4, 2)), ControllerConfig(), workers=1)
    entries = top_traces(batch, k=1, labels=task.trace_labels)
    assert len(entries) == 4  # 2 rollouts x 2 trace points
    assert {e.label for e in entries} == {"pusher", "target"}
