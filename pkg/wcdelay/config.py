"""
配置管理模块
使用 pydantic-settings 管理数值容差与默认参数，支持环境变量覆盖（前缀 WCDELAY_）
"""
import math
from contextlib import contextmanager
from pathlib import Path

from pydantic import TypeAdapter, ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from wcdelay.core.errors import ConfigError


class Settings(BaseSettings):
    """应用配置"""

    model_config = SettingsConfigDict(
        env_prefix="WCDELAY_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # 稳定性判定
    marginal_tol: float = 1e-6           # (α, β) 平面内距边界小于此值判为 Marginal
    nondelayed_marginal_tol: float = 1e-9
    saddle_node_tol: float = 1e-9

    # 边界曲线采样
    arc_tol: float = 0.05                # 相邻曲线采样点的最大间距
    max_curve_samples: int = 50000
    initial_curve_samples: int = 64
    alpha_min: float = -100.0            # 无界区域的截断位置（仅用于展示和封闭多边形）
    closure_factor: float = 10.0         # 无界区域封闭半径 = closure_factor × 查询点模长

    # 方程 ω cosθ + τ sinθ = 0 的求根
    theta_scan_step: float = math.pi / 64
    root_tol: float = 1e-12

    # 平衡点求解
    equilibrium_grid: int = 64
    newton_tol: float = 1e-12
    newton_max_iter: int = 100
    newton_max_halvings: int = 20
    dedup_tol: float = 1e-8
    residual_check_tol: float = 1e-8

    # 临界时滞
    tau_max: float = 10.0
    bisection_rel_tol: float = 1e-9
    bisection_max_iter: int = 200
    tau_scan_points: int = 400

    # 数值模拟
    sim_dt: float = 1e-3
    sim_t_end: float = 100.0
    record_stride: int = 1
    quadrature_cutoff_mass: float = 1e-8
    perturbation: float = 1e-3

    # 轨道行为判定
    decay_tol: float = 1e-6
    min_cycle_peaks: int = 5
    period_variation: float = 0.01
    amplitude_variation: float = 0.02
    settle_fraction: float = 0.5

    def with_overrides(self, overrides: dict[str, str]) -> "Settings":
        """
        返回应用了 key=value 覆盖项的新配置

        未知键或无法转换的值抛出 ConfigError
        """
        update = {}
        for key, raw in overrides.items():
            field = type(self).model_fields.get(key)
            if field is None:
                raise ConfigError(f"未知的容差配置项: '{key}'")
            try:
                update[key] = TypeAdapter(field.annotation).validate_python(raw)
            except ValidationError:
                raise ConfigError(f"配置项 '{key}' 的值无效: {raw!r}")
        return self.model_copy(update=update)


# 全局配置实例
settings = Settings()

# 项目根目录
BASE_DIR = Path(__file__).resolve().parent.parent


@contextmanager
def override_settings(overrides: dict[str, str]):
    """在上下文内就地修改全局配置，退出时恢复"""
    patched = settings.with_overrides(overrides)
    saved = {key: getattr(settings, key) for key in overrides}
    for key in overrides:
        setattr(settings, key, getattr(patched, key))
    try:
        yield settings
    finally:
        for key, value in saved.items():
            setattr(settings, key, value)
