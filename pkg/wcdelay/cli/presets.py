"""
presets 子命令
列出 experiments.yaml 中的预置模型参数
"""
import argparse

import pandas as pd

from wcdelay.cli.common import collect_overrides, output_path
from wcdelay.schemas.run import RunConfig
from wcdelay.services import export
from wcdelay.services.preload import load_presets


def register(subparsers, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(
        "presets",
        parents=[common],
        help="列出预置模型参数",
    )
    parser.set_defaults(handler=run, overrides=lambda args: collect_overrides(args, ["output", "format"]))


def run(args: argparse.Namespace, config: RunConfig) -> int:
    rows = [
        {"name": name, "description": entry.get("description", ""), **entry["model"]}
        for name, entry in sorted(load_presets().items())
    ]
    frame = pd.DataFrame(rows)
    export.write_text(export.render_frame(frame, config.format), output_path(config))
    return 0
