"""
时滞核相关的 Pydantic 模式
支持 Dirac、Gamma(p)、Uniform(ε) 三类核，以及命令行使用的字符串描述
"""
import re
from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError

from wcdelay.core.errors import KernelParseError


class DiracKernel(BaseModel):
    """离散时滞（全部质量集中在 τ 处）"""

    model_config = ConfigDict(frozen=True)

    kind: Literal["dirac"] = "dirac"

    @property
    def label(self) -> str:
        return "dirac"


class GammaKernel(BaseModel):
    """Gamma 核，p=1 为弱核，p=2 为强核"""

    model_config = ConfigDict(frozen=True)

    kind: Literal["gamma"] = "gamma"
    p: int = Field(..., ge=1, description="Gamma 阶数（正整数，保证线性链化简精确）")

    @property
    def label(self) -> str:
        return f"gamma:p={self.p}"


class UniformKernel(BaseModel):
    """均匀分布核，支撑集为 [τ(1-ε), τ(1+ε)]"""

    model_config = ConfigDict(frozen=True)

    kind: Literal["uniform"] = "uniform"
    eps: float = Field(..., gt=0.0, le=1.0, description="相对半宽 ε ∈ (0, 1]")

    @property
    def label(self) -> str:
        return f"uniform:eps={self.eps:g}"


KernelSpec = Annotated[
    Union[DiracKernel, GammaKernel, UniformKernel],
    Field(discriminator="kind"),
]

_kernel_adapter = TypeAdapter(KernelSpec)


class PolarTransform(BaseModel):
    """归一化变换在虚轴上的极坐标形式 Ĥ(iω) = ρ(ω)·exp(-iθ(ω))"""

    model_config = ConfigDict(frozen=True)

    rho: float = Field(..., ge=0.0)
    theta: float
    omega: float = Field(..., ge=0.0)


_PARAM_RE = re.compile(r"^([a-z]+)=(.+)$")


def parse_kernel(text: str) -> KernelSpec:
    """
    解析时滞核描述字符串

    语法（不区分大小写）：
      dirac
      gamma:p=<int>
      uniform:eps=<real>

    Raises:
        KernelParseError: 错误信息中包含出错的片段
    """
    if not isinstance(text, str):
        raise KernelParseError(f"时滞核描述必须是字符串: {text!r}")
    tokens = text.strip().lower().split(":")
    name = tokens[0].strip()

    if name == "dirac":
        if len(tokens) > 1:
            raise KernelParseError(f"dirac 核不接受参数: '{tokens[1]}'")
        return DiracKernel()

    expected = {"gamma": "p", "uniform": "eps"}
    if name not in expected:
        raise KernelParseError(f"未知的时滞核类型: '{name}'")
    if len(tokens) != 2:
        raise KernelParseError(f"{name} 核需要参数 '{expected[name]}=<值>': '{text}'")

    match = _PARAM_RE.match(tokens[1].strip())
    if not match or match.group(1) != expected[name]:
        raise KernelParseError(f"无法解析的参数: '{tokens[1]}'")

    raw = match.group(2)
    try:
        value = int(raw) if name == "gamma" else float(raw)
    except ValueError:
        raise KernelParseError(f"参数值无效: '{raw}'")

    try:
        return _kernel_adapter.validate_python({"kind": name, expected[name]: value})
    except ValidationError as e:
        raise KernelParseError(f"参数超出范围: '{tokens[1]}' ({e.errors()[0]['msg']})")
