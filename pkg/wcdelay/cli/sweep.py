"""
sweep 子命令
对一组 τ 逐个模拟，每个 τ 写出一份轨道 CSV，并汇总行为判定
"""
import argparse

import numpy as np
import pandas as pd

from wcdelay.cli.common import add_model_arguments, collect_overrides, output_path, require_model, select_equilibrium
from wcdelay.cli.simulate import add_sim_arguments, initial_history
from wcdelay.core.errors import ConfigError
from wcdelay.core.logging import logger
from wcdelay.schemas.run import RunConfig, SweepOptions
from wcdelay.services import export
from wcdelay.services.behavior import detect_behavior
from wcdelay.services.dde import simulate


def register(subparsers, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(
        "sweep",
        parents=[common],
        help="沿 τ 扫描模拟，归档相图数据",
        description="--output 为目录：每个 τ 写出 tau_<τ>.csv，汇总写出 summary.csv（或 summary.json）",
    )
    add_model_arguments(parser)
    parser.add_argument("--kernel", help="时滞核: dirac | gamma:p=<int> | uniform:eps=<real> (默认: dirac)")
    parser.add_argument("--tau-min", dest="tau_min", type=float, help="扫描下限 (默认: 0.07)")
    parser.add_argument("--tau-max", dest="tau_max", type=float, help="扫描上限 (默认: 1.5)")
    parser.add_argument("--points", type=int, help="τ 取值个数 (默认: 30)")
    parser.add_argument("--spacing", choices=["linear", "log"], help="等距方式 (默认: linear)")
    add_sim_arguments(parser)
    parser.set_defaults(handler=run, overrides=sweep_overrides)


def sweep_overrides(args: argparse.Namespace) -> dict:
    overrides = collect_overrides(
        args, ["preset", "equilibrium_index", "kernel", "perturbation", "engine", "output", "format"],
    )
    overrides["sim"] = collect_overrides(args, ["dt", "t_end", "record_stride"])
    # --tau-max 在 sweep 中指扫描上限，不是临界时滞搜索上限
    overrides["sweep"] = collect_overrides(args, ["tau_min", "tau_max", "points", "spacing"])
    return overrides


def sweep_taus(options: SweepOptions) -> np.ndarray:
    if options.spacing == "log":
        return np.geomspace(options.tau_min, options.tau_max, options.points)
    return np.linspace(options.tau_min, options.tau_max, options.points)


def run(args: argparse.Namespace, config: RunConfig) -> int:
    directory = output_path(config)
    if directory is None:
        raise ConfigError("sweep 需要 --output 指定输出目录")

    model = require_model(config, "sweep")
    eq = select_equilibrium(config, "sweep")
    kernel = config.kernel_spec
    history = initial_history(config, eq)

    rows = []
    for tau in sweep_taus(config.sweep):
        tau = float(tau)
        traj = simulate(model.params, model.activation, kernel, tau, history, config.sim, engine=config.engine)
        report = detect_behavior(traj, eq.point)
        logger.info(f"τ={tau:.6g}: {report.verdict.value}")
        export.write_text(
            export.render_frame(export.trajectory_frame(traj), "csv"),
            directory / f"tau_{tau:.6g}.csv",
        )
        rows.append({"tau": tau, **report.model_dump(mode="json")})

    summary = pd.DataFrame(rows, columns=["tau", "verdict", "amplitude", "period", "final_distance_to_equilibrium"])
    name = "summary.json" if config.format == "json" else "summary.csv"
    export.write_text(export.render_frame(summary, config.format), directory / name)
    return 0
