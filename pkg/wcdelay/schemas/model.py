"""
Wilson-Cowan 模型相关的 Pydantic 模式
"""
from pydantic import BaseModel, ConfigDict, Field


class ModelParams(BaseModel):
    """连接权重与背景驱动"""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    a: float = Field(..., description="u → u 连接权重")
    b: float = Field(..., description="v → u 连接权重")
    c: float = Field(..., description="u → v 连接权重")
    d: float = Field(..., description="v → v 连接权重")
    theta_u: float = Field(..., description="u 群体的背景驱动")
    theta_v: float = Field(..., description="v 群体的背景驱动")

    def swapped(self) -> "ModelParams":
        """交换两个群体的角色 (a↔d, b↔c, θ_u↔θ_v)"""
        return ModelParams(
            a=self.d, b=self.c, c=self.b, d=self.a,
            theta_u=self.theta_v, theta_v=self.theta_u,
        )


class Activation(BaseModel):
    """Logistic 激活函数 f(x) = 1/(1+exp(-δx))"""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    delta: float = Field(..., gt=0.0, description="sigmoid 陡度 δ")


class ModelConfig(BaseModel):
    """
    模型参数 JSON 模式
    {"a":…, "b":…, "c":…, "d":…, "theta_u":…, "theta_v":…, "delta":…}
    """

    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    a: float
    b: float
    c: float
    d: float
    theta_u: float
    theta_v: float
    delta: float = Field(..., gt=0.0)

    @property
    def params(self) -> ModelParams:
        return ModelParams(
            a=self.a, b=self.b, c=self.c, d=self.d,
            theta_u=self.theta_u, theta_v=self.theta_v,
        )

    @property
    def activation(self) -> Activation:
        return Activation(delta=self.delta)


class Equilibrium(BaseModel):
    """平衡点及其特征参数"""

    model_config = ConfigDict(frozen=True)

    u_star: float
    v_star: float
    phi1: float = Field(..., description="f'(θ_u + a·u* + b·v*)")
    phi2: float = Field(..., description="f'(θ_v + c·u* + d·v*)")
    alpha: float = Field(..., description="a·φ₁ + d·φ₂")
    beta: float = Field(..., description="(ad − bc)·φ₁·φ₂")

    @property
    def point(self) -> tuple[float, float]:
        return (self.u_star, self.v_star)
