"""
scan 子命令
在 (α, β) 栅格上逐点判定稳定性，输出 alpha,beta,verdict 栅格
"""
import argparse

from wcdelay.cli.common import add_kernel_arguments, collect_overrides, output_path
from wcdelay.core.errors import PreconditionError
from wcdelay.schemas.run import RunConfig
from wcdelay.services import export
from wcdelay.services.stability import region_scan


def register(subparsers, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(
        "scan",
        parents=[common],
        help="(α, β) 平面稳定性栅格",
        description="在给定范围内的均匀栅格上判定 Stable / Unstable / Marginal",
    )
    add_kernel_arguments(parser)
    parser.add_argument("--alpha-range", dest="alpha_range", type=float, nargs=2, metavar=("MIN", "MAX"))
    parser.add_argument("--beta-range", dest="beta_range", type=float, nargs=2, metavar=("MIN", "MAX"))
    parser.add_argument("--resolution", type=int, nargs=2, metavar=("N_ALPHA", "N_BETA"))
    parser.set_defaults(handler=run, overrides=scan_overrides)


def scan_overrides(args: argparse.Namespace) -> dict:
    overrides = collect_overrides(args, ["kernel", "tau", "output", "format"])
    overrides["scan"] = collect_overrides(args, ["alpha_range", "beta_range", "resolution"])
    return overrides


def run(args: argparse.Namespace, config: RunConfig) -> int:
    if config.tau <= 0:
        raise PreconditionError(f"栅格扫描需要 τ > 0: τ={config.tau}")
    options = config.scan
    alphas, betas, grid = region_scan(
        config.kernel_spec, config.tau, options.alpha_range, options.beta_range, options.resolution,
    )
    frame = export.raster_frame(alphas, betas, grid)
    export.write_text(export.render_frame(frame, config.format), output_path(config))
    return 0
