"""
子命令共用的参数与辅助函数
"""
import argparse
from pathlib import Path
from typing import Optional

from wcdelay.config import settings
from wcdelay.core.errors import ConfigError
from wcdelay.schemas.model import Equilibrium
from wcdelay.schemas.run import RunConfig
from wcdelay.services import model as model_service


def global_arguments() -> argparse.ArgumentParser:
    """所有子命令共享的全局参数"""
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument(
        "--config",
        type=Path,
        help="运行配置文件（.json 或 .yaml）",
    )
    parser.add_argument(
        "--output",
        help="输出路径（默认写到标准输出）",
    )
    parser.add_argument(
        "--format",
        choices=["csv", "json"],
        help="输出格式 (默认: csv)",
    )
    parser.add_argument(
        "--seed",
        type=int,
        help="保留参数，所有算法均为确定性",
    )
    parser.add_argument(
        "--tol-override",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="覆盖数值容差，例如 marginal_tol=1e-8（可重复）",
    )
    parser.add_argument(
        "--debug",
        action="store_true",
        help="启用调试日志",
    )
    return parser


def add_model_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--preset", help="experiments.yaml 中的预置模型参数")
    parser.add_argument(
        "--equilibrium-index",
        dest="equilibrium_index",
        type=int,
        help="存在多个平衡点时选用的序号（按 u* 升序，默认 0）",
    )


def add_point_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--alpha", type=float, help="直接给出特征参数 α（跳过平衡点求解）")
    parser.add_argument("--beta", type=float, help="直接给出特征参数 β")


def add_kernel_arguments(parser: argparse.ArgumentParser, tau_help: str = "平均时滞 τ (默认: 1)") -> None:
    parser.add_argument("--kernel", help="时滞核: dirac | gamma:p=<int> | uniform:eps=<real> (默认: dirac)")
    parser.add_argument("--tau", type=float, help=tau_help)


def parse_tol_overrides(items: list[str]) -> dict[str, str]:
    overrides = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"--tol-override 需要 KEY=VALUE 形式: '{item}'")
        overrides[key.strip()] = value.strip()
    return overrides


def collect_overrides(args: argparse.Namespace, keys: list[str]) -> dict:
    """把命令行上给出的参数整理成 RunConfig 覆盖项"""
    return {key: getattr(args, key, None) for key in keys}


def output_path(run: RunConfig) -> Optional[Path]:
    return Path(run.output) if run.output else None


def require_model(run: RunConfig, command: str):
    if run.model is None:
        raise ConfigError(f"{command} 需要 model 或 preset")
    return run.model


def select_equilibrium(run: RunConfig, command: str) -> Equilibrium:
    """求出全部平衡点并按 equilibrium_index 选取（按 u* 升序）"""
    model = require_model(run, command)
    equilibria = model_service.find_equilibria(model.params, model.activation)
    if run.equilibrium_index >= len(equilibria):
        raise ConfigError(
            f"equilibrium_index={run.equilibrium_index} 超出范围，共找到 {len(equilibria)} 个平衡点"
        )
    return equilibria[run.equilibrium_index]


def resolve_point(run: RunConfig, command: str) -> tuple[float, float]:
    """特征参数 (α, β)：配置直接给出时优先，否则由平衡点计算"""
    if run.alpha is not None:
        return run.alpha, run.beta
    eq = select_equilibrium(run, command)
    return eq.alpha, eq.beta


def default_perturbation(run: RunConfig) -> float:
    return settings.perturbation if run.perturbation is None else run.perturbation
