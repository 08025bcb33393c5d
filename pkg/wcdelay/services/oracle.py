"""
基于特征根的稳定性检验
与几何分类完全独立，用于交叉验证 stability 模块
"""
import math

import numpy as np
from numpy.polynomial import polynomial as P

from wcdelay.core.errors import DomainError
from wcdelay.schemas.kernel import DiracKernel, GammaKernel, KernelSpec
from wcdelay.services.kernel import normalized_transform
from wcdelay.services.model import nondelayed_eigenvalues


def characteristic_function(kernel: KernelSpec, tau: float, alpha: float, beta: float, z):
    """Δ(z) = (z+1)² − α(z+1)H(z) + βH(z)²，支持复数数组"""
    z = np.asarray(z, dtype=complex)
    h = normalized_transform(kernel, tau * z)
    return (z + 1.0) ** 2 - alpha * (z + 1.0) * h + beta * h * h


def nondelayed_stable(alpha: float, beta: float) -> bool:
    return bool(np.all(nondelayed_eigenvalues(alpha, beta).real < 0))


def gamma_characteristic_roots(p: int, tau: float, alpha: float, beta: float) -> np.ndarray:
    """
    Gamma(p) 核特征方程乘以 q^{2p}（q = 1 + τz/p）后的多项式
    (z+1)²q^{2p} − α(z+1)q^p + β 的全部根，次数 2p+2
    """
    if tau <= 0:
        raise DomainError(f"平均时滞必须为正: τ={tau}")
    q = np.array([1.0, tau / p])
    zp1 = np.array([1.0, 1.0])
    qp = P.polypow(q, p)
    coeffs = P.polyadd(
        P.polysub(P.polymul(P.polypow(zp1, 2), P.polymul(qp, qp)), alpha * P.polymul(zp1, qp)),
        [beta],
    )
    return P.polyroots(coeffs)


def gamma_rightmost_real_part(p: int, tau: float, alpha: float, beta: float) -> float:
    return float(np.max(gamma_characteristic_roots(p, tau, alpha, beta).real))


def gamma_stable(p: int, tau: float, alpha: float, beta: float) -> bool:
    return gamma_rightmost_real_part(p, tau, alpha, beta) < 0


def dirac_rhp_zero_count(tau: float, alpha: float, beta: float, n_min: int = 20000) -> int:
    """
    辐角原理统计 Dirac 核特征拟多项式在闭右半平面内的零点个数

    |z+1| > |α| + √|β| 且 Re z ≥ 0 时 (z+1)² 项占优，
    因此取半径 R = |α| + √|β| + 2 的右半圆围道即可包住全部右半平面零点
    """
    if tau <= 0:
        raise DomainError(f"平均时滞必须为正: τ={tau}")
    radius = abs(alpha) + math.sqrt(abs(beta)) + 2.0
    # 虚轴上 e^{-iτω} 每转一圈至少取 64 个点
    n = max(n_min, int(64 * radius * tau / math.pi) + 1)

    axis = 1j * np.linspace(radius, -radius, 2 * n)
    arc = radius * np.exp(1j * np.linspace(-math.pi / 2, math.pi / 2, n))
    contour = np.concatenate([axis, arc[1:]])

    values = characteristic_function(DiracKernel(), tau, alpha, beta, contour)
    phase = np.unwrap(np.angle(values))
    return int(round((phase[-1] - phase[0]) / (2 * math.pi)))


def dirac_stable(tau: float, alpha: float, beta: float) -> bool:
    return dirac_rhp_zero_count(tau, alpha, beta) == 0


def root_stable(kernel: KernelSpec, tau: float, alpha: float, beta: float) -> bool:
    """按核类型选择多项式求根或辐角原理"""
    if isinstance(kernel, GammaKernel):
        return gamma_stable(kernel.p, tau, alpha, beta)
    if isinstance(kernel, DiracKernel):
        return dirac_stable(tau, alpha, beta)
    raise DomainError(f"没有适用于 {kernel.label} 的特征根检验")
