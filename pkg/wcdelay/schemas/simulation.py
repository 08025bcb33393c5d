"""
数值模拟相关的模式
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Annotated, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from wcdelay.config import settings
from wcdelay.schemas.kernel import KernelSpec
from wcdelay.schemas.model import ModelParams


class SimConfig(BaseModel):
    """定步长积分配置"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    dt: float = Field(default_factory=lambda: settings.sim_dt, gt=0.0)
    t_end: float = Field(default_factory=lambda: settings.sim_t_end, gt=0.0)
    record_stride: int = Field(default_factory=lambda: settings.record_stride, ge=1)
    quadrature_cutoff_mass: float = Field(
        default_factory=lambda: settings.quadrature_cutoff_mass, gt=0.0, lt=1.0,
    )


class ConstantHistory(BaseModel):
    """(−∞, 0] 上的常值初始函数"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["constant"] = "constant"
    u0: float
    v0: float


class SampledHistory(BaseModel):
    """
    采样初始函数，三次样条插值，最早样本左侧按常值外推
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["sampled"] = "sampled"
    times: list[float]
    u: list[float]
    v: list[float]

    @model_validator(mode="after")
    def check_samples(self):
        if not (len(self.times) == len(self.u) == len(self.v)):
            raise ValueError("times、u、v 长度必须一致")
        if len(self.times) < 2:
            raise ValueError("至少需要两个采样点")
        if any(t > 0 for t in self.times):
            raise ValueError("采样时刻必须 ≤ 0")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValueError("采样时刻必须严格递增")
        return self


HistoryFunction = Annotated[
    Union[ConstantHistory, SampledHistory],
    Field(discriminator="kind"),
]


@dataclass
class Trajectory:
    """
    模拟轨道

    aux 为线性链状态（Gamma 核），列依次为 x1..xp, y1..yp
    """

    times: np.ndarray
    u: np.ndarray
    v: np.ndarray
    kernel: Optional[KernelSpec]
    tau: float
    params: ModelParams
    aux: Optional[np.ndarray] = field(default=None, repr=False)

    def __len__(self) -> int:
        return self.times.size


class BehaviorVerdict(str, Enum):
    DECAY = "Decay"
    LIMIT_CYCLE = "LimitCycle"
    IRREGULAR = "Irregular"


class BehaviorReport(BaseModel):
    """轨道渐近行为"""

    model_config = ConfigDict(frozen=True)

    verdict: BehaviorVerdict
    amplitude: float = Field(..., ge=0.0)
    period: Optional[float] = Field(default=None, gt=0.0)
    final_distance_to_equilibrium: float
