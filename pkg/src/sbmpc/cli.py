"""Command line entry point: run the live stack, or benchmark control updates.

    sbmpc                             # cartpole + ps, GUI on port 8008
    sbmpc run -cp ./configs -cn lab   # load ./configs/lab.yaml
    sbmpc benchmark --task cartpole --optimizer ps --threads 10
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from sbmpc import bench, registry as registry_mod
from sbmpc.nodes import launch_stack

log = logging.getLogger(__name__)


def _default_gui_dir() -> Path | None:
    candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    return candidate if candidate.exists() else None


def _add_run_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-cp", dest="config_path", metavar="DIR", help="directory holding YAML configs")
    parser.add_argument("-cn", dest="config_name", metavar="NAME", help="YAML config name (without .yaml)")
    parser.add_argument("--port", type=int, default=8008, help="websocket/GUI port (default 8008)")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--headless", action="store_true", help="run without the websocket bridge")
    parser.add_argument("--task", default=None, help="initial task (overrides YAML)")
    parser.add_argument("--optimizer", default=None, help="initial optimizer (default ps)")
    parser.add_argument("--threads", type=int, default=4, help="rollout worker threads")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--gui-dir", default=None, help="directory with the built GUI bundle")


def cmd_run(args: argparse.Namespace) -> int:
    reg = registry_mod.default_registry()
    settings = registry_mod.StackSettings()
    if args.config_path or args.config_name:
        if not (args.config_path and args.config_name):
            print("error: -cp and -cn must be given together", file=sys.stderr)
            return 2
        yaml_path = Path(args.config_path) / f"{args.config_name}.yaml"
        if not yaml_path.exists():
            print(f"error: config file {yaml_path} not found", file=sys.stderr)
            return 2
        try:
            reg, settings = registry_mod.load_yaml(yaml_path)
        except (ValueError, KeyError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    task_name = args.task or settings.task
    optimizer_name = args.optimizer or settings.optimizer
    try:
        reg.task_entry(task_name)
        reg.optimizer_entry(optimizer_name)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 2

    gui_dir = args.gui_dir or _default_gui_dir()
    try:
        stack = launch_stack(
            reg,
            task_name,
            optimizer_name,
            workers=args.threads,
            seed=args.seed,
            headless=args.headless,
            host=args.host,
            port=args.port,
            gui_dir=gui_dir,
        )
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if stack.bridge is not None:
        print(f"GUI: {stack.bridge.url}  (Ctrl-C to stop)")
    else:
        print("running headless (Ctrl-C to stop)")
    try:
        while stack.simulator.alive or stack.controller.alive:
            time.sleep(0.2)
    except KeyboardInterrupt:
        print("\nshutting down")
    finally:
        stack.stop()
    return 0


def cmd_benchmark(args: argparse.Namespace) -> int:
    reg = registry_mod.default_registry()
    tasks = args.task.split(",") if args.task else ["cartpole"]
    optimizers = args.optimizer.split(",") if args.optimizer else ["ps"]
    results = []
    print(bench.BenchmarkResult.header())
    for task_name in tasks:
        for optimizer_name in optimizers:
            try:
                res = bench.run_benchmark(
                    reg,
                    task_name,
                    optimizer_name,
                    threads=args.threads,
                    iters=args.iters,
                    seed=args.seed,
                )
            except (KeyError, ValueError) as exc:
                print(f"error: {exc}", file=sys.stderr)
                return 2
            results.append(res)
            print(res.row())
    if args.csv:
        bench.write_csv(args.csv, results)
        print(f"wrote {args.csv}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sbmpc", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command")

    run_parser = sub.add_parser("run", help="run the simulator/controller/GUI stack")
    _add_run_args(run_parser)
    run_parser.set_defaults(func=cmd_run)

    bench_parser = sub.add_parser("benchmark", help="time controller updates")
    bench_parser.add_argument("--task", default="cartpole", help="task name, or comma-separated list")
    bench_parser.add_argument("--optimizer", default="ps", help="optimizer name, or comma-separated list")
    bench_parser.add_argument("--threads", type=int, default=10)
    bench_parser.add_argument("--iters", type=int, default=50)
    bench_parser.add_argument("--seed", type=int, default=0)
    bench_parser.add_argument("--csv", default=None, help="also write results to this CSV file")
    bench_parser.set_defaults(func=cmd_benchmark)

    # bare `sbmpc` behaves like `sbmpc run`
    _add_run_args(parser)
    parser.set_defaults(func=cmd_run)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
