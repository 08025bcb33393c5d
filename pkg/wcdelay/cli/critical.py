"""
critical-tau 子命令
计算使平衡点失稳的最小平均时滞 τ*，结果始终为 JSON
"""
import argparse

from wcdelay.cli.common import (
    add_model_arguments,
    add_point_arguments,
    collect_overrides,
    output_path,
    resolve_point,
)
from wcdelay.config import settings
from wcdelay.schemas.run import RunConfig
from wcdelay.services import export
from wcdelay.services.critical import critical_delay, direct_crossings


def register(subparsers, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(
        "critical-tau",
        parents=[common],
        help="计算临界平均时滞 τ*",
        description="(α, β) 在 τ ≤ tau_max 内始终稳定时输出 \"tau_star\": null",
    )
    add_model_arguments(parser)
    add_point_arguments(parser)
    parser.add_argument("--kernel", help="时滞核: dirac | gamma:p=<int> | uniform:eps=<real> (默认: dirac)")
    parser.add_argument("--tau-max", dest="tau_max", type=float, help=f"搜索上限 (默认: {settings.tau_max:g})")
    parser.set_defaults(
        handler=run,
        overrides=lambda args: collect_overrides(
            args, ["preset", "equilibrium_index", "alpha", "beta", "kernel", "tau_max", "output"],
        ),
    )


def run(args: argparse.Namespace, config: RunConfig) -> int:
    alpha, beta = resolve_point(config, "critical-tau")
    kernel = config.kernel_spec
    tau_max = config.tau_max or settings.tau_max

    result = critical_delay(kernel, alpha, beta, tau_max=tau_max)
    document = {
        "kernel": kernel.label,
        "alpha": alpha,
        "beta": beta,
        "tau_max": tau_max,
        "tau_star": result.tau_star if result else None,
        "crossing_omega": result.crossing_omega if result else None,
        "crossing_type": result.crossing_type.value if result else None,
        "direct_candidates": [
            {"tau": c.tau, "omega": c.omega, "crossing_type": c.crossing_type.value}
            for c in direct_crossings(kernel, alpha, beta, tau_max)
        ],
    }
    export.write_text(export.render_json(document), output_path(config))
    return 0
