"""
时滞核业务逻辑
提供核密度、拉普拉斯变换以及均值归一化变换 Ĥ 的极坐标形式，
是所有稳定性计算的解析基础
"""
import math

import numpy as np
from scipy import stats

from wcdelay.core.errors import DomainError, KernelRangeError, NoPointwiseDensityError
from wcdelay.schemas.kernel import (
    DiracKernel,
    GammaKernel,
    KernelSpec,
    PolarTransform,
    UniformKernel,
)


def omega_limit(kernel: KernelSpec) -> float:
    """
    极坐标形式有效的频率上界

    Uniform 核的模在 εω = π 处第一次为零，之后相位不再连续
    """
    if isinstance(kernel, UniformKernel):
        return math.pi / kernel.eps
    return math.inf


def theta_limit(kernel: KernelSpec) -> float:
    """相位 θ(ω) 在有效频率范围内的上确界"""
    if isinstance(kernel, GammaKernel):
        return kernel.p * math.pi / 2
    return omega_limit(kernel)


def omega_of_theta(kernel: KernelSpec, theta):
    """θ(ω) 的反函数，用于按相位步长扫描频率"""
    theta = np.asarray(theta, dtype=float)
    if isinstance(kernel, GammaKernel):
        return kernel.p * np.tan(theta / kernel.p)
    return theta


def polar_arrays(kernel: KernelSpec, omega) -> tuple[np.ndarray, np.ndarray]:
    """
    向量化计算 (ρ(ω), θ(ω))

    Raises:
        KernelRangeError: Uniform 核在第一个模零点之后调用
    """
    omega = np.asarray(omega, dtype=float)

    if isinstance(kernel, DiracKernel):
        return np.ones_like(omega), omega.copy()

    if isinstance(kernel, GammaKernel):
        p = kernel.p
        rho = (p / np.hypot(p, omega)) ** p
        theta = p * np.arctan(omega / p)
        return rho, theta

    if np.any(kernel.eps * omega >= math.pi):
        raise KernelRangeError(
            f"极坐标形式在第一个模零点之后无效: εω ≥ π (ε={kernel.eps:g}, ω={float(np.max(omega)):g})"
        )
    # np.sinc(x) = sin(πx)/(πx)，在 x=0 处取极限值 1
    rho = np.sinc(kernel.eps * omega / math.pi)
    return rho, omega.copy()


def polar_transform(kernel: KernelSpec, omega: float) -> PolarTransform:
    """
    Ĥ(iω) 的极坐标形式

    Dirac → (1, ω)；Gamma(p) → ((p/√(p²+ω²))^p, p·arctan(ω/p))；
    Uniform(ε) → (sin(εω)/(εω), ω)
    """
    if omega < 0:
        raise DomainError(f"频率必须非负: ω={omega}")
    rho, theta = polar_arrays(kernel, omega)
    return PolarTransform(rho=float(rho), theta=float(theta), omega=float(omega))


def normalized_transform(kernel: KernelSpec, s):
    """
    均值为 1 的归一化核的拉普拉斯变换 Ĥ(s)，支持复数数组

    Raises:
        DomainError: Gamma 核在极点 s = -p 处求值
    """
    s = np.asarray(s, dtype=complex)

    if isinstance(kernel, DiracKernel):
        return np.exp(-s)

    if isinstance(kernel, GammaKernel):
        p = kernel.p
        denom = p + s
        if np.any(np.abs(denom) == 0.0):
            raise DomainError(f"Gamma 核的拉普拉斯变换在极点 z = -p/τ 处无定义 (p={p})")
        return (p / denom) ** p

    # 盒子 [1-ε, 1+ε] 上的均匀密度：Ĥ(s) = e^{-s}·sinh(εs)/(εs)
    # sinh(x)/x = sinc(x/(iπ))，np.sinc 已处理 x=0 的极限
    x = kernel.eps * s
    return np.exp(-s) * np.sinc(x / (1j * math.pi))


def normalized_transform_derivative(kernel: KernelSpec, s):
    """Ĥ'(s)，用于 Hopf 横截性检验"""
    s = np.asarray(s, dtype=complex)
    h = normalized_transform(kernel, s)

    if isinstance(kernel, DiracKernel):
        return -h

    if isinstance(kernel, GammaKernel):
        return -kernel.p * h / (kernel.p + s)

    eps = kernel.eps
    x = eps * s
    small = np.abs(x) < 1e-4
    safe_x = np.where(small, 1.0, x)
    # g(x) = sinh(x)/x，g'(x) = (x cosh x - sinh x)/x²，小 x 时 g'(x) ≈ x/3
    g_prime = np.where(small, x / 3.0, (safe_x * np.cosh(safe_x) - np.sinh(safe_x)) / safe_x**2)
    return -h + np.exp(-s) * eps * g_prime


def laplace(kernel: KernelSpec, tau: float, z: complex) -> complex:
    """
    核的拉普拉斯变换 H(z) = Ĥ(τz)

    在虚轴上满足 H(iω) = ρ(τω)·exp(-iθ(τω))
    """
    if tau <= 0:
        raise DomainError(f"平均时滞必须为正: τ={tau}")
    return complex(normalized_transform(kernel, tau * complex(z)))


def density(kernel: KernelSpec, tau: float, t):
    """
    时滞核概率密度 h(t)，均值为 τ

    Raises:
        NoPointwiseDensityError: Dirac 核没有逐点密度，调用方需单独处理
    """
    if tau <= 0:
        raise DomainError(f"平均时滞必须为正: τ={tau}")
    if isinstance(kernel, DiracKernel):
        raise NoPointwiseDensityError("Dirac 核没有逐点密度，请单独处理离散时滞")
    value = _frozen_distribution(kernel, tau).pdf(t)
    return float(value) if np.ndim(value) == 0 else value


def tail_cutoff(kernel: KernelSpec, tau: float, mass: float) -> float:
    """尾部质量降到 mass 以下的截断时刻（Dirac 核返回 τ）"""
    if isinstance(kernel, DiracKernel):
        return tau
    return float(_frozen_distribution(kernel, tau).isf(mass))


def mean_delay(kernel: KernelSpec, tau: float) -> float:
    """核的一阶矩，按分布数值计算；归一化正确时等于 τ"""
    if isinstance(kernel, DiracKernel):
        return tau
    return float(_frozen_distribution(kernel, tau).mean())


def _frozen_distribution(kernel: KernelSpec, tau: float):
    if isinstance(kernel, GammaKernel):
        return stats.gamma(a=kernel.p, scale=tau / kernel.p)
    return stats.uniform(loc=tau * (1.0 - kernel.eps), scale=2.0 * kernel.eps * tau)
