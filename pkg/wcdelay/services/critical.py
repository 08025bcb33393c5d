"""
临界平均时滞计算
先由穿越方程直接给出候选 τ，再用稳定性谓词在候选附近定界并二分确认；
候选全部失败时退回到 τ 网格扫描
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from wcdelay.config import settings
from wcdelay.core.errors import ConvergenceError, UnstableWithoutDelayError
from wcdelay.core.logging import logger
from wcdelay.schemas.kernel import KernelSpec
from wcdelay.schemas.stability import CriticalDelay, CrossingType, Verdict
from wcdelay.services.kernel import omega_of_theta, polar_arrays, theta_limit
from wcdelay.services.stability import (
    boundary_segments,
    build_boundary,
    classify_nondelayed,
    hopf_curve_arrays,
    is_stable,
    omega_tau,
)


@dataclass(frozen=True)
class Crossing:
    """穿越方程给出的候选"""

    tau: float
    omega: float
    crossing_type: CrossingType


def _sheet_thetas(kernel: KernelSpec, n: int = 2048) -> np.ndarray:
    """θ ∈ (π/2, π) 内的采样；该区间内 cosθ < 0 < sinθ，对应 τ > 0"""
    theta_hi = min(math.pi, theta_limit(kernel))
    if theta_hi <= math.pi / 2:
        return np.empty(0)
    thetas = np.linspace(math.pi / 2, theta_hi, n + 1)[1:-1]
    if theta_hi == theta_limit(kernel):
        tail = theta_hi - (theta_hi - thetas[-1]) * 0.5 ** np.arange(1, 50)
        thetas = np.concatenate([thetas, tail])
    return thetas


def line_crossings(kernel: KernelSpec, alpha: float, beta: float) -> list[Crossing]:
    """
    α² ≥ 4β：对 λ² − αλ + β 的每个实根 λ，在各单调分支上解 ρ(ω)cosθ(ω) = 1/λ，
    再令 τ(ω) = −ω cosθ(ω)/sinθ(ω)
    """
    disc = alpha * alpha - 4.0 * beta
    roots = {(alpha + s * math.sqrt(disc)) / 2.0 for s in (-1.0, 1.0)}

    thetas = _sheet_thetas(kernel)
    if thetas.size < 2:
        return []
    omegas = omega_of_theta(kernel, thetas)
    rho, theta = polar_arrays(kernel, omegas)
    projection = rho * np.cos(theta)

    def projection_at(omega: float) -> float:
        r, t = polar_arrays(kernel, omega)
        return float(r * np.cos(t))

    found = []
    for lam in roots:
        if lam >= 0:
            continue
        target = 1.0 / lam
        shifted = projection - target
        for k in np.nonzero(np.sign(shifted[:-1]) * np.sign(shifted[1:]) < 0)[0]:
            omega = brentq(lambda w: projection_at(w) - target, omegas[k], omegas[k + 1],
                           xtol=settings.root_tol, rtol=4 * np.finfo(float).eps)
            _, t = polar_arrays(kernel, omega)
            tau = float(-omega * np.cos(t) / np.sin(t))
            if tau > 0:
                found.append(Crossing(tau=tau, omega=omega, crossing_type=CrossingType.HOPF_LINE))
    return sorted(found, key=lambda c: c.tau)


def _curve_omega(kernel: KernelSpec, tau: float, beta: float) -> Optional[float]:
    """在 γ_τ 的有效参数范围内解 β_τ(ω) = β（β_τ 单调递增）"""
    if beta <= 1.0:
        return None

    def excess(omega: float) -> float:
        return float(hopf_curve_arrays(kernel, tau, omega)[1]) - beta

    ot = omega_tau(kernel, tau)
    if ot is not None:
        hi = ot.omega_tau
        if excess(hi) < 0:
            return None
    else:
        hi = 1.0
        while excess(hi) < 0:
            hi *= 2.0
    return brentq(excess, 0.0, hi, xtol=settings.root_tol)


def curve_crossings(kernel: KernelSpec, alpha: float, beta: float, tau_max: float) -> list[Crossing]:
    """
    α² < 4β：解 Re Q_τ(iω) = α/2、|Q_τ(iω)|² = β。
    内层对 ω 求根，外层在对数 τ 网格上找 α_τ(ω(τ)) − α 的变号并求根
    """
    def mismatch(tau: float) -> float:
        omega = _curve_omega(kernel, tau, beta)
        if omega is None:
            return math.nan
        return float(hopf_curve_arrays(kernel, tau, omega)[0]) - alpha

    taus = np.geomspace(tau_max * 1e-4, tau_max, settings.tau_scan_points)
    values = np.array([mismatch(t) for t in taus])

    found = []
    for k in range(taus.size - 1):
        a, b = values[k], values[k + 1]
        if np.isnan(a) or np.isnan(b) or a * b > 0:
            continue
        tau = taus[k] if a == 0 else brentq(mismatch, taus[k], taus[k + 1], xtol=1e-14, rtol=1e-13)
        found.append(Crossing(tau=tau, omega=_curve_omega(kernel, tau, beta), crossing_type=CrossingType.HOPF_CURVE))
    return found


def direct_crossings(kernel: KernelSpec, alpha: float, beta: float, tau_max: float) -> list[Crossing]:
    """穿越方程给出的全部候选，按 τ 升序"""
    if alpha * alpha >= 4.0 * beta:
        found = line_crossings(kernel, alpha, beta)
    else:
        found = curve_crossings(kernel, alpha, beta, tau_max)
    return [c for c in found if c.tau <= tau_max]


def _bisect(kernel: KernelSpec, alpha: float, beta: float, lo: float, hi: float) -> float:
    """lo 稳定、hi 不稳定，二分到相对精度 bisection_rel_tol"""
    for _ in range(settings.bisection_max_iter):
        if hi - lo <= settings.bisection_rel_tol * hi:
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        if is_stable(kernel, mid, alpha, beta):
            lo = mid
        else:
            hi = mid
    raise ConvergenceError(f"临界时滞二分在 {settings.bisection_max_iter} 次迭代内未收敛")


def _stable_below(kernel: KernelSpec, alpha: float, beta: float, tau: float, n: int = 40) -> bool:
    """在 (0, tau) 的对数网格上确认始终稳定，防止漏掉更小的穿越"""
    return all(is_stable(kernel, t, alpha, beta) for t in np.geomspace(tau * 1e-4, tau, n, endpoint=False))


def _nearest_element(kernel: KernelSpec, tau: float, alpha: float, beta: float) -> tuple[CrossingType, float]:
    """τ* 处距离 (α, β) 最近的边界元素及其 ω"""
    boundary = build_boundary(kernel, tau)
    segments = boundary_segments(boundary)
    n_curve = boundary.hopf_curve_samples.shape[0] - 1

    ax, ay, bx, by = segments.T
    dx, dy = bx - ax, by - ay
    t = np.clip(((alpha - ax) * dx + (beta - ay) * dy) / np.maximum(dx * dx + dy * dy, 1e-300), 0.0, 1.0)
    index = int(np.argmin(np.hypot(alpha - ax - t * dx, beta - ay - t * dy)))

    if index < n_curve:
        omegas = boundary.hopf_curve_samples[:, 0]
        return CrossingType.HOPF_CURVE, float(omegas[index] + t[index] * (omegas[index + 1] - omegas[index]))
    if index == n_curve:
        return CrossingType.SADDLE_NODE, 0.0
    return CrossingType.HOPF_LINE, boundary.omega_tau.omega_tau


def _scan(kernel: KernelSpec, alpha: float, beta: float, tau_max: float) -> Optional[CriticalDelay]:
    taus = np.geomspace(tau_max * 1e-4, tau_max, settings.tau_scan_points)
    previous = None
    for tau in taus:
        if not is_stable(kernel, tau, alpha, beta):
            lo = previous if previous is not None else tau * 1e-4
            tau_star = _bisect(kernel, alpha, beta, lo, tau)
            crossing_type, omega = _nearest_element(kernel, tau_star, alpha, beta)
            return CriticalDelay(tau_star=tau_star, crossing_omega=omega, crossing_type=crossing_type)
        previous = tau
    return None


def critical_delay(
    kernel: KernelSpec,
    alpha: float,
    beta: float,
    tau_max: Optional[float] = None,
) -> Optional[CriticalDelay]:
    """
    使 (α, β) 离开稳定区域的最小平均时滞 τ*

    (α, β) 在 τ ≤ tau_max 内始终稳定时返回 None

    Raises:
        UnstableWithoutDelayError: τ→0⁺ 时已不稳定
        ConvergenceError: 二分未收敛
    """
    tau_max = tau_max or settings.tau_max
    if classify_nondelayed(alpha, beta).verdict is not Verdict.STABLE:
        raise UnstableWithoutDelayError(f"(α, β) = ({alpha:g}, {beta:g}) 在无时滞时已不稳定")

    for candidate in direct_crossings(kernel, alpha, beta, tau_max):
        lo, hi = candidate.tau * (1 - 1e-3), candidate.tau * (1 + 1e-3)
        if (
            is_stable(kernel, lo, alpha, beta)
            and not is_stable(kernel, hi, alpha, beta)
            and _stable_below(kernel, alpha, beta, lo)
        ):
            tau_star = _bisect(kernel, alpha, beta, lo, hi)
            return CriticalDelay(
                tau_star=tau_star,
                crossing_omega=candidate.omega,
                crossing_type=candidate.crossing_type,
            )
        logger.debug(f"候选 τ={candidate.tau:.9g} ({candidate.crossing_type.value}) 未通过定界确认")

    return _scan(kernel, alpha, beta, tau_max)
