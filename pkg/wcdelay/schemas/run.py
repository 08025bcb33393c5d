"""
运行配置模式
命令行的配置文件（JSON / YAML）经此校验后再分发给各子命令，未知键直接拒绝
"""
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from wcdelay.core.errors import KernelParseError
from wcdelay.schemas.kernel import KernelSpec, parse_kernel
from wcdelay.schemas.model import ModelConfig
from wcdelay.schemas.simulation import HistoryFunction, SimConfig


class ScanOptions(BaseModel):
    """(α, β) 栅格扫描范围"""

    model_config = ConfigDict(extra="forbid")

    alpha_range: tuple[float, float] = (-5.0, 3.0)
    beta_range: tuple[float, float] = (-3.0, 5.0)
    resolution: tuple[int, int] = (50, 50)


class SweepOptions(BaseModel):
    """τ 扫描：对数或线性等距"""

    model_config = ConfigDict(extra="forbid")

    tau_min: float = Field(default=0.07, gt=0.0)
    tau_max: float = Field(default=1.5, gt=0.0)
    points: int = Field(default=30, ge=1)
    spacing: Literal["linear", "log"] = "linear"

    @model_validator(mode="after")
    def check_range(self):
        if self.tau_max < self.tau_min:
            raise ValueError(f"tau_max ({self.tau_max}) 小于 tau_min ({self.tau_min})")
        return self


class RunConfig(BaseModel):
    """
    一次命令行运行的全部输入

    model 与 preset 二选一；直接给出 alpha、beta 时跳过平衡点求解
    """

    model_config = ConfigDict(extra="forbid")

    preset: Optional[str] = None
    model: Optional[ModelConfig] = None
    equilibrium_index: int = Field(default=0, ge=0, description="存在多个平衡点时选用的序号（按 u* 升序）")
    alpha: Optional[float] = None
    beta: Optional[float] = None

    kernel: str = "dirac"
    tau: float = Field(default=1.0, ge=0.0)
    tau_max: Optional[float] = Field(default=None, gt=0.0)
    arc_tol: Optional[float] = Field(default=None, gt=0.0)

    scan: ScanOptions = Field(default_factory=ScanOptions)
    sweep: SweepOptions = Field(default_factory=SweepOptions)
    sim: SimConfig = Field(default_factory=SimConfig)
    history: Optional[HistoryFunction] = None
    perturbation: Optional[float] = None
    engine: Literal["auto", "quadrature"] = "auto"

    output: Optional[str] = None
    format: Literal["csv", "json"] = "csv"

    @field_validator("kernel")
    @classmethod
    def check_kernel(cls, value: str) -> str:
        try:
            parse_kernel(value)
        except KernelParseError as e:
            raise ValueError(str(e))
        return value

    @model_validator(mode="after")
    def check_point(self):
        if (self.alpha is None) != (self.beta is None):
            raise ValueError("alpha 与 beta 必须同时给出")
        return self

    @property
    def kernel_spec(self) -> KernelSpec:
        return parse_kernel(self.kernel)
