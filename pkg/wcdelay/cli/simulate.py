"""
simulate 子命令
从平衡点附近的常值初始函数出发积分时滞系统，输出轨道并判定渐近行为
"""
import argparse

from wcdelay.cli.common import (
    add_kernel_arguments,
    add_model_arguments,
    collect_overrides,
    default_perturbation,
    output_path,
    require_model,
    select_equilibrium,
)
from wcdelay.core.logging import logger
from wcdelay.schemas.model import Equilibrium
from wcdelay.schemas.run import RunConfig
from wcdelay.schemas.simulation import ConstantHistory, HistoryFunction
from wcdelay.services import export
from wcdelay.services.behavior import detect_behavior
from wcdelay.services.dde import simulate


def register(subparsers, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(
        "simulate",
        parents=[common],
        help="数值模拟并判定轨道行为",
        description=(
            "轨道写到 --output（列 t,u,v[,x1..xp,y1..yp]），行为判定写到同目录的 <名称>.behavior.json；"
            "τ = 0 时退化为无时滞常微分方程"
        ),
    )
    add_model_arguments(parser)
    add_kernel_arguments(parser, tau_help="平均时滞 τ，0 表示无时滞 (默认: 1)")
    add_sim_arguments(parser)
    parser.set_defaults(handler=run, overrides=sim_overrides)


def add_sim_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dt", type=float, help="积分步长")
    parser.add_argument("--t-end", dest="t_end", type=float, help="积分终止时刻")
    parser.add_argument("--record-stride", dest="record_stride", type=int, help="每隔多少步记录一次")
    parser.add_argument("--perturbation", type=float, help="初始函数相对平衡点的偏移")
    parser.add_argument(
        "--engine",
        choices=["auto", "quadrature"],
        help="auto: Gamma 核用线性链；quadrature: Gamma 核也用直接求积",
    )


def sim_overrides(args: argparse.Namespace) -> dict:
    overrides = collect_overrides(
        args, ["preset", "equilibrium_index", "kernel", "tau", "perturbation", "engine", "output", "format"],
    )
    overrides["sim"] = collect_overrides(args, ["dt", "t_end", "record_stride"])
    return overrides


def initial_history(config: RunConfig, eq: Equilibrium) -> HistoryFunction:
    """配置未给出初始函数时，使用平衡点加偏移的常值函数"""
    if config.history is not None:
        return config.history
    eps = default_perturbation(config)
    return ConstantHistory(u0=eq.u_star + eps, v0=eq.v_star + eps)


def run(args: argparse.Namespace, config: RunConfig) -> int:
    model = require_model(config, "simulate")
    eq = select_equilibrium(config, "simulate")
    traj = simulate(
        model.params,
        model.activation,
        config.kernel_spec,
        config.tau,
        initial_history(config, eq),
        config.sim,
        engine=config.engine,
    )
    report = detect_behavior(traj, eq.point)
    logger.info(f"行为判定: {report.verdict.value}，振幅 {report.amplitude:.6g}")

    path = output_path(config)
    export.write_text(export.render_frame(export.trajectory_frame(traj), config.format), path)
    if path is not None:
        export.write_text(export.render_json(report.model_dump(mode="json")), export.companion_path(path, "behavior.json"))
    return 0
