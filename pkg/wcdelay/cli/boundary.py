"""
boundary 子命令
导出稳定区域边界（l0、ltau、gamma 三类元素）以及余维二分岔点
"""
import argparse

from wcdelay.cli.common import add_kernel_arguments, collect_overrides, output_path
from wcdelay.core.errors import PreconditionError
from wcdelay.core.logging import logger
from wcdelay.schemas.run import RunConfig
from wcdelay.services import export
from wcdelay.services.stability import build_boundary


def register(subparsers, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(
        "boundary",
        parents=[common],
        help="导出 (α, β) 平面稳定区域边界",
        description=(
            "csv 格式：边界写到 --output，余维二点与有界性写到同目录的 <名称>.codim2.json；"
            "json 格式：两者合并为一个文档"
        ),
    )
    add_kernel_arguments(parser)
    parser.add_argument("--arc-tol", dest="arc_tol", type=float, help="相邻曲线采样点的最大间距")
    parser.set_defaults(
        handler=run,
        overrides=lambda args: collect_overrides(args, ["kernel", "tau", "arc_tol", "output", "format"]),
    )


def run(args: argparse.Namespace, config: RunConfig) -> int:
    if config.tau <= 0:
        raise PreconditionError(f"边界计算需要 τ > 0: τ={config.tau}")

    boundary = build_boundary(config.kernel_spec, config.tau, arc_tol=config.arc_tol)
    frame = export.boundary_frame(boundary)
    summary = export.boundary_summary(boundary)
    path = output_path(config)

    if config.format == "json":
        document = {**summary, "segments": frame.to_dict(orient="records")}
        export.write_text(export.render_json(document), path)
        return 0

    export.write_text(export.render_frame(frame, "csv"), path)
    if path is not None:
        export.write_text(export.render_json(summary), export.companion_path(path, "codim2.json"))
    else:
        logger.info(f"余维二点: {summary}")
    return 0
