"""
配置文件加载器
支持从 experiments.yaml 加载预置模型参数，以及读取 JSON / YAML 格式的运行配置
"""
import json
from pathlib import Path
from typing import Any, Optional

import yaml
from pydantic import ValidationError

from wcdelay.config import BASE_DIR
from wcdelay.core.errors import ConfigError
from wcdelay.schemas.run import RunConfig


def load_presets(config_path: Optional[Path] = None) -> dict[str, dict]:
    """
    加载预置参数文件

    Args:
        config_path: 预置文件路径，默认为项目根目录下的 experiments.yaml

    Returns:
        预置名称到 {description, model} 的映射
    """
    if config_path is None:
        config_path = BASE_DIR / "experiments.yaml"

    if not config_path.exists():
        return {}

    config = _parse_yaml(config_path.read_text(encoding="utf-8"), config_path) or {}
    return config.get("presets", {}) or {}


def _parse_yaml(text: str, path: Path) -> Any:
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        where = f"第 {mark.line + 1} 行" if mark is not None else "未知位置"
        raise ConfigError(f"无法解析 {path} ({where}): {getattr(e, 'problem', e)}")


def read_document(path: Path) -> dict:
    """读取 JSON（.json 后缀）或 YAML 配置文件，顶层必须是映射"""
    if not path.exists():
        raise ConfigError(f"配置文件不存在: {path}")
    text = path.read_text(encoding="utf-8")

    if path.suffix.lower() == ".json":
        try:
            document = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"无法解析 {path} (第 {e.lineno} 行, 第 {e.colno} 列): {e.msg}")
    else:
        document = _parse_yaml(text, path)

    if document is None:
        return {}
    if not isinstance(document, dict):
        raise ConfigError(f"{path} 的顶层必须是键值映射")
    return document


def resolve_preset(data: dict, presets: Optional[dict[str, dict]] = None) -> dict:
    """把 "preset": "<名称>" 展开为 model；配置中已显式给出 model 时以配置为准"""
    name = data.get("preset")
    if not name:
        return data
    presets = load_presets() if presets is None else presets
    if name not in presets:
        known = ", ".join(sorted(presets)) or "无"
        raise ConfigError(f"未知的预置参数 '{name}'（可用: {known}）")
    resolved = dict(data)
    resolved.setdefault("model", presets[name]["model"])
    return resolved


def load_run_config(
    config_path: Optional[Path] = None,
    overrides: Optional[dict] = None,
    presets: Optional[dict[str, dict]] = None,
) -> RunConfig:
    """
    读取运行配置并应用命令行覆盖项（命令行优先）

    Raises:
        ConfigError: 文件无法解析，或校验失败（信息中包含出错的键）
    """
    data = read_document(config_path) if config_path is not None else {}
    overrides = overrides or {}
    if overrides.get("preset"):
        # 命令行指定的预置参数覆盖配置文件中的 model
        data.pop("model", None)
    for key, value in overrides.items():
        if isinstance(value, dict):
            value = {k: v for k, v in value.items() if v is not None}
            if not value:
                continue
            base = data.get(key)
            data[key] = {**base, **value} if isinstance(base, dict) else value
        elif value is not None:
            data[key] = value

    data = resolve_preset(data, presets)
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        error = e.errors()[0]
        location = ".".join(str(part) for part in error["loc"]) or "<root>"
        raise ConfigError(f"配置项 '{location}' 无效: {error['msg']}")
