"""
稳定性分析相关的模式
判定结果、临界时滞使用 Pydantic 模型；包含 numpy 数组的边界曲线使用 dataclass
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from wcdelay.schemas.kernel import KernelSpec


class Verdict(str, Enum):
    STABLE = "Stable"
    UNSTABLE = "Unstable"
    MARGINAL = "Marginal"


class Cause(str, Enum):
    DELAY_INDEPENDENT_STABLE = "DelayIndependentStable"
    DELAY_INDEPENDENT_UNSTABLE = "DelayIndependentUnstable"
    INSIDE_REGION = "InsideRegion"
    OUTSIDE_REGION = "OutsideRegion"
    ON_BOUNDARY = "OnBoundary"


class DelayIndependence(str, Enum):
    STABLE_FOR_ALL_KERNELS = "StableForAllKernels"
    UNSTABLE_FOR_ALL_KERNELS = "UnstableForAllKernels"
    INDETERMINATE = "Indeterminate"


class CrossingType(str, Enum):
    HOPF_LINE = "HopfLine"
    HOPF_CURVE = "HopfCurve"
    SADDLE_NODE = "SaddleNode"


class OmegaTau(BaseModel):
    """方程 ω cosθ(ω) + τ sinθ(ω) = 0 的最小正根及 μ_τ = (ρ(ω_τ)cosθ(ω_τ))⁻¹"""

    model_config = ConfigDict(frozen=True)

    omega_tau: float = Field(..., gt=0.0)
    mu_tau: float


class ClassificationResult(BaseModel):
    """(α, β) 点的稳定性判定"""

    model_config = ConfigDict(frozen=True)

    verdict: Verdict
    cause: Cause
    distance_to_boundary: float = Field(..., ge=0.0)


class CriticalDelay(BaseModel):
    """使 (α, β) 离开稳定区域的最小平均时滞"""

    model_config = ConfigDict(frozen=True)

    tau_star: float = Field(..., gt=0.0)
    crossing_omega: float = Field(..., ge=0.0, description="根 ±iω/τ* 到达虚轴时的 ω")
    crossing_type: CrossingType


@dataclass(frozen=True)
class BoundaryCurve:
    """
    (α, β) 平面内稳定区域的边界

    hopf_curve_samples 为 (ω, α, β) 三列数组，ω 从 0 递增；
    有界时最后一个样本落在双 Hopf 点上
    """

    kernel: KernelSpec
    tau: float
    bounded: bool
    saddle_node_segment: tuple[float, float]
    hopf_curve_samples: np.ndarray
    bt_point: tuple[float, float] = (2.0, 1.0)
    hopf_line_segment: Optional[tuple[float, float]] = None
    double_hopf_point: Optional[tuple[float, float]] = None
    zero_hopf_point: Optional[tuple[float, float]] = None
    omega_tau: Optional[OmegaTau] = None
    # 无界情形下用于封闭多边形的远端半径（仅展示用截断）
    closure_radius: Optional[float] = None
    polygon: np.ndarray = field(default=None, repr=False)

    def codim2_points(self) -> dict:
        return {
            "bt": list(self.bt_point),
            "double_hopf": list(self.double_hopf_point) if self.double_hopf_point else None,
            "zero_hopf": list(self.zero_hopf_point) if self.zero_hopf_point else None,
        }
