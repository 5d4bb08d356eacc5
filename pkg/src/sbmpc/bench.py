"""Control-update timing benchmark.

Times `Controller.update` only (no bus or GUI in the measured path), after a
few discarded warmup updates so JIT compilation and allocator noise stay out
of the numbers.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass

import numpy as np

from sbmpc.controller import Controller
from sbmpc.registry import Registry

CSV_COLUMNS = (
    "task",
    "optimizer",
    "threads",
    "num_rollouts",
    "horizon_s",
    "mean_ms",
    "std_ms",
    "rollouts_per_s",
)


@dataclass
class BenchmarkResult:
    task: str
    optimizer: str
    threads: int
    num_rollouts: int
    horizon_s: float
    mean_ms: float
    std_ms: float
    rollouts_per_s: float
    steps_per_s: float
    iterations: int
    total_rollouts: int

    def row(self) -> str:
        return (
            f"{self.task:<18} {self.optimizer:<6} {self.threads:>3} {self.num_rollouts:>5} "
            f"{self.mean_ms:8.2f} ± {self.std_ms:<6.2f} {self.rollouts_per_s:12.0f} {self.steps_per_s:14.0f}"
        )

    @staticmethod
    def header() -> str:
        return (
            f"{'task':<18} {'opt':<6} {'thr':>3} {'N':>5} {'update (ms)':>16} "
            f"{'rollouts/s':>12} {'rollout steps/s':>15}"
        )


def run_benchmark(
    registry: Registry,
    task_name: str,
    optimizer_name: str,
    threads: int = 10,
    iters: int = 50,
    warmup: int = 5,
    seed: int = 0,
) -> BenchmarkResult:
    """Time `iters` controller updates from reset states."""
    if iters < 10:
        raise ValueError(f"need at least 10 timed iterations, got {iters}")
    task = registry.make_task(task_name)
    task_cfg, opt_cfg, ctrl_cfg = registry.resolve_config(task_name, optimizer_name)
    optimizer = registry.make_optimizer(optimizer_name, opt_cfg, task.nu, task.control_bounds)
    controller = Controller(task, optimizer, ctrl_cfg, task_config=task_cfg, workers=threads)
    rng = np.random.default_rng(seed)

    for _ in range(warmup):
        controller.update(task.reset(rng), rng)

    durations = np.empty(iters)
    for i in range(iters):
        x0 = task.reset(rng)
        t0 = time.perf_counter()
        controller.update(x0, rng)
        durations[i] = time.perf_counter() - t0

    steps = int(round(ctrl_cfg.horizon / ctrl_cfg.dt_rollout))
    n = optimizer.num_rollouts
    total_time = float(durations.sum())
    return BenchmarkResult(
        task=task_name,
        optimizer=optimizer_name,
        threads=threads,
        num_rollouts=n,
        horizon_s=ctrl_cfg.horizon,
        mean_ms=float(durations.mean() * 1e3),
        std_ms=float(durations.std() * 1e3),
        rollouts_per_s=n * iters / total_time,
        steps_per_s=n * steps * iters / total_time,
        iterations=iters,
        total_rollouts=n * iters,
    )


def write_csv(path, results: list[BenchmarkResult]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for res in results:
            writer.writerow(
                [
                    res.task,
                    res.optimizer,
                    res.threads,
                    res.num_rollouts,
                    res.horizon_s,
                    f"{res.mean_ms:.4f}",
                    f"{res.std_ms:.4f}",
                    f"{res.rollouts_per_s:.1f}",
                ]
            )
