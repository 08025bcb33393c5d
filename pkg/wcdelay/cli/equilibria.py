"""
equilibria 子命令
列出全部平衡点及斜率 φ₁、φ₂ 与特征参数 α、β
"""
import argparse

from wcdelay.cli.common import add_model_arguments, collect_overrides, output_path, require_model
from wcdelay.core.logging import logger
from wcdelay.schemas.run import RunConfig
from wcdelay.services import export
from wcdelay.services import model as model_service


def register(subparsers, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(
        "equilibria",
        parents=[common],
        help="求解平衡点",
        description="求解代数系统 u=f(θ_u+au+bv), v=f(θ_v+cu+dv) 的全部平衡点，输出 u*, v*, φ₁, φ₂, α, β",
    )
    add_model_arguments(parser)
    parser.set_defaults(handler=run, overrides=lambda args: collect_overrides(args, ["preset", "output", "format"]))


def run(args: argparse.Namespace, config: RunConfig) -> int:
    model = require_model(config, "equilibria")
    equilibria = model_service.find_equilibria(model.params, model.activation)
    logger.info(f"找到 {len(equilibria)} 个平衡点")
    frame = export.equilibria_frame(equilibria)
    export.write_text(export.render_frame(frame, config.format), output_path(config))
    return 0
