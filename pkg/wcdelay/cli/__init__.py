# 命令行模块
import argparse
from typing import Optional

from wcdelay import __version__
from wcdelay.cli import boundary, critical, equilibria, presets, scan, simulate, sweep
from wcdelay.cli.common import global_arguments, parse_tol_overrides
from wcdelay.config import override_settings
from wcdelay.core.errors import WcDelayError
from wcdelay.core.logging import logger, setup_logging
from wcdelay.services.preload import load_run_config


# 注册子命令
COMMANDS = [equilibria, boundary, critical, simulate, scan, sweep, presets]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wcdelay",
        description="wcdelay - 分布时滞 Wilson-Cowan 系统的稳定性与分岔分析",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    common = global_arguments()
    for command in COMMANDS:
        command.register(subparsers, common)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    """
    命令行入口

    退出码：0 成功，2 配置错误，3 数值不收敛，4 定义域/范围错误
    """
    args = build_parser().parse_args(argv)
    setup_logging(args.debug)
    if args.seed is not None:
        logger.debug(f"--seed={args.seed} 已忽略：所有算法均为确定性")

    try:
        with override_settings(parse_tol_overrides(args.tol_override)):
            config = load_run_config(args.config, args.overrides(args))
            return args.handler(args, config)
    except WcDelayError as e:
        logger.error(str(e))
        return e.exit_code
