"""
稳定性与分岔业务逻辑
时滞无关判据、鞍结点线、Hopf 曲线与直线、稳定区域边界的组装、
(α, β) 平面内的点分类以及栅格扫描
"""
import math
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from wcdelay.config import settings
from wcdelay.core.errors import KernelRangeError, PreconditionError, UnsupportedKernelError
from wcdelay.core.logging import logger
from wcdelay.schemas.kernel import KernelSpec, UniformKernel
from wcdelay.schemas.stability import (
    BoundaryCurve,
    Cause,
    ClassificationResult,
    DelayIndependence,
    OmegaTau,
    Verdict,
)
from wcdelay.services.kernel import (
    normalized_transform,
    normalized_transform_derivative,
    omega_limit,
    omega_of_theta,
    polar_arrays,
    theta_limit,
)


# ---------------------------------------------------------------------------
# 时滞无关判据

def classify_nondelayed(alpha: float, beta: float) -> ClassificationResult:
    """无时滞情形：当且仅当 α < min{2, β+1} 时渐近稳定"""
    margin = min(2.0 - alpha, beta + 1.0 - alpha)
    distance = min(abs(2.0 - alpha), abs(beta + 1.0 - alpha) / math.sqrt(2.0))

    if abs(margin) < settings.nondelayed_marginal_tol:
        return ClassificationResult(verdict=Verdict.MARGINAL, cause=Cause.ON_BOUNDARY, distance_to_boundary=abs(margin))
    if margin > 0:
        return ClassificationResult(verdict=Verdict.STABLE, cause=Cause.INSIDE_REGION, distance_to_boundary=distance)
    return ClassificationResult(verdict=Verdict.UNSTABLE, cause=Cause.OUTSIDE_REGION, distance_to_boundary=distance)


def delay_independent_test(alpha: float, beta: float) -> DelayIndependence:
    """|α|+|β| < 1 对任意核稳定；β < α−1 对任意核不稳定"""
    if abs(alpha) + abs(beta) < 1.0:
        return DelayIndependence.STABLE_FOR_ALL_KERNELS
    if beta < alpha - 1.0:
        return DelayIndependence.UNSTABLE_FOR_ALL_KERNELS
    return DelayIndependence.INDETERMINATE


def saddle_node_test(alpha: float, beta: float) -> bool:
    """鞍结点分岔当且仅当 β = α−1 且 α ≠ 2"""
    tol = settings.saddle_node_tol
    return abs(beta - (alpha - 1.0)) < tol and abs(alpha - 2.0) > tol


def saddle_node_rate(alpha: float, tau: float) -> float:
    """鞍结点线上零根随 β 的变化率 dz/dβ = 1/((α−2)(τ+1))"""
    return 1.0 / ((alpha - 2.0) * (tau + 1.0))


# ---------------------------------------------------------------------------
# Hopf 曲线与直线

def _root_function(kernel: KernelSpec, tau: float):
    def g(omega: float) -> float:
        rho, theta = polar_arrays(kernel, omega)
        return float(omega * np.cos(theta) + tau * np.sin(theta))
    return g


def _theta_grid(kernel: KernelSpec) -> np.ndarray:
    """
    按相位步长生成扫描网格；θ 的上确界有限时在其下方按间隙减半继续加密
    """
    step = settings.theta_scan_step
    theta_sup = theta_limit(kernel)
    stop = min(theta_sup, math.pi + step)
    thetas = np.arange(1, int(math.ceil(stop / step)) + 1) * step
    thetas = thetas[thetas < theta_sup]
    if math.isfinite(theta_sup) and thetas[-1] < math.pi:
        last = thetas[-1]
        extra = theta_sup - (theta_sup - last) * 0.5 ** np.arange(1, 61)
        thetas = np.concatenate([thetas, extra[extra > last]])
    return thetas


def omega_tau(kernel: KernelSpec, tau: float) -> Optional[OmegaTau]:
    """
    方程 ω cosθ(ω) + τ sinθ(ω) = 0 的最小正根 ω_τ 以及 μ_τ

    没有正根时（例如弱 Gamma 核 θ < π/2）返回 None

    Raises:
        KernelRangeError: Uniform 核在找到根之前扫出了有效频率范围
        UnsupportedKernelError: μ_τ ≥ 0
    """
    g = _root_function(kernel, tau)
    omegas = omega_of_theta(kernel, _theta_grid(kernel))
    values = np.array([g(w) for w in omegas])

    crossing = np.nonzero((values[:-1] > 0) & (values[1:] <= 0))[0]
    if crossing.size == 0:
        if isinstance(kernel, UniformKernel):
            raise KernelRangeError(
                f"超出分析范围: 在 ω < π/ε = {omega_limit(kernel):g} 内未找到根 ({kernel.label}, τ={tau:g})"
            )
        return None

    k = crossing[0]
    if values[k + 1] == 0.0:
        root = float(omegas[k + 1])
    else:
        root = brentq(g, omegas[k], omegas[k + 1], xtol=settings.root_tol, rtol=4 * np.finfo(float).eps)

    rho, theta = polar_arrays(kernel, root)
    mu = 1.0 / float(rho * np.cos(theta))
    if mu >= 0:
        raise UnsupportedKernelError(f"μ_τ = {mu:g} ≥ 0，不满足边界构造的假设 ({kernel.label}, τ={tau:g})")
    return OmegaTau(omega_tau=root, mu_tau=mu)


def hopf_curve_arrays(kernel: KernelSpec, tau: float, omega) -> tuple[np.ndarray, np.ndarray]:
    """向量化的 Hopf 曲线 α = (2/ρ)[cosθ − (ω/τ)sinθ]，β = (1+ω²/τ²)/ρ²"""
    omega = np.asarray(omega, dtype=float)
    rho, theta = polar_arrays(kernel, omega)
    alpha = 2.0 / rho * (np.cos(theta) - omega / tau * np.sin(theta))
    beta = (1.0 + (omega / tau) ** 2) / rho**2
    return alpha, beta


def hopf_curve_point(kernel: KernelSpec, tau: float, omega: float) -> tuple[float, float]:
    """曲线 γ_τ 上参数为 ω 的点；ω→0⁺ 时趋于 (2, 1)"""
    alpha, beta = hopf_curve_arrays(kernel, tau, omega)
    return float(alpha), float(beta)


def line_through_root(kernel: KernelSpec, tau: float, omega: float) -> tuple[float, float]:
    """
    方程 ω cosθ + τ sinθ = 0 的任意根 ω 对应的直线 β = μ(α − μ)

    Returns:
        (斜率 μ, 截距 −μ²)
    """
    rho, theta = polar_arrays(kernel, omega)
    mu = 1.0 / float(rho * np.cos(theta))
    return mu, -mu * mu


def hopf_transversality(kernel: KernelSpec, tau: float, omega: float) -> float:
    """
    曲线 γ_τ 上 Re z 沿单位外法向的方向导数（横截性条件要求为正）

    z 为缩放后的特征根 iω，Q_τ(z) = (z+τ)/(τĤ(z))
    """
    z = 1j * omega
    h = complex(normalized_transform(kernel, z))
    q = (z + tau) / (tau * h)
    dq = (1.0 - tau * q * complex(normalized_transform_derivative(kernel, z))) / (tau * h)

    normal = np.array([(q * dq.conjugate()).imag, dq.imag])
    gradient = normal / (2.0 * q.imag * abs(dq) ** 2)
    return float(gradient @ normal / np.linalg.norm(normal))


# ---------------------------------------------------------------------------
# 边界组装

def _sample_curve(kernel: KernelSpec, tau: float, omega_end: float, arc_tol: float) -> np.ndarray:
    """在 [0, omega_end] 上自适应加密，使相邻样本间距小于 arc_tol"""
    omegas = np.linspace(0.0, omega_end, settings.initial_curve_samples + 1)
    while True:
        alpha, beta = hopf_curve_arrays(kernel, tau, omegas)
        gaps = np.hypot(np.diff(alpha), np.diff(beta))
        coarse = np.nonzero(gaps > arc_tol)[0]
        if coarse.size == 0:
            break
        if omegas.size + coarse.size > settings.max_curve_samples:
            logger.debug(f"曲线采样达到上限 {settings.max_curve_samples}，最大间距 {gaps.max():.3g}")
            break
        midpoints = 0.5 * (omegas[coarse] + omegas[coarse + 1])
        omegas = np.sort(np.concatenate([omegas, midpoints]))
    return np.column_stack([omegas, alpha, beta])


def _far_omega(kernel: KernelSpec, tau: float, radius: float) -> float:
    """曲线离原点的距离首次达到 radius 时的 ω（倍增定界后求根）"""
    def excess(omega: float) -> float:
        return math.hypot(*hopf_curve_point(kernel, tau, omega)) - radius

    lo, hi = 1.0, 1.0
    while excess(hi) < 0:
        lo, hi = hi, 2.0 * hi
    while excess(lo) >= 0:
        lo *= 0.5
    return brentq(excess, lo, hi)


def build_boundary(
    kernel: KernelSpec,
    tau: float,
    arc_tol: Optional[float] = None,
    radius: Optional[float] = None,
) -> BoundaryCurve:
    """
    组装稳定区域 S(α, β) 的边界

    有界情形：鞍结点线段 l₀、Hopf 直线段 l_τ 与 Hopf 曲线 γ_τ (ω ∈ (0, ω_τ))；
    无界情形：鞍结点半直线与 γ_τ (ω > 0)，在 radius 处截断用于采样
    """
    arc_tol = arc_tol or settings.arc_tol
    ot = omega_tau(kernel, tau)

    if ot is not None:
        mu = ot.mu_tau
        samples = _sample_curve(kernel, tau, ot.omega_tau, arc_tol)
        zero_hopf = (1.0 + mu, mu)
        double_hopf = (2.0 * mu, mu * mu)
        polygon = np.vstack([samples[:, 1:], [double_hopf, zero_hopf]])
        return BoundaryCurve(
            kernel=kernel,
            tau=tau,
            bounded=True,
            saddle_node_segment=(1.0 + mu, 2.0),
            hopf_line_segment=(2.0 * mu, 1.0 + mu),
            hopf_curve_samples=samples,
            double_hopf_point=double_hopf,
            zero_hopf_point=zero_hopf,
            omega_tau=ot,
            polygon=polygon,
        )

    radius = max(radius or 0.0, abs(settings.alpha_min))
    samples = _sample_curve(kernel, tau, _far_omega(kernel, tau, radius), arc_tol)
    alpha_far, beta_far = samples[-1, 1], samples[-1, 2]
    alpha_lo = min(-radius, alpha_far)
    polygon = np.vstack([
        [(alpha_lo, alpha_lo - 1.0)],
        samples[:, 1:],
        [(alpha_lo, beta_far)],
    ])
    return BoundaryCurve(
        kernel=kernel,
        tau=tau,
        bounded=False,
        saddle_node_segment=(alpha_lo, 2.0),
        hopf_curve_samples=samples,
        closure_radius=radius,
        polygon=polygon,
    )


def boundary_segments(boundary: BoundaryCurve) -> np.ndarray:
    """
    真实边界元素（不含无界情形的远端封闭边）的线段集合，形状 (n, 4)：α₀, β₀, α₁, β₁
    """
    curve = boundary.hopf_curve_samples[:, 1:]
    pieces = [np.hstack([curve[:-1], curve[1:]])]
    lo, hi = boundary.saddle_node_segment
    pieces.append([[lo, lo - 1.0, hi, hi - 1.0]])
    if boundary.bounded:
        mu = boundary.omega_tau.mu_tau
        a0, a1 = boundary.hopf_line_segment
        pieces.append([[a0, mu * (a0 - mu), a1, mu * (a1 - mu)]])
    return np.vstack(pieces)


# ---------------------------------------------------------------------------
# 点分类

_CHUNK_ELEMENTS = 4_000_000


def _chunks(n_points: int, n_edges: int):
    size = max(1, _CHUNK_ELEMENTS // max(n_edges, 1))
    for start in range(0, n_points, size):
        yield slice(start, min(start + size, n_points))


def region_contains(boundary: BoundaryCurve, alpha, beta) -> np.ndarray:
    """射线穿越法判断点是否在封闭边界多边形内部（奇偶规则）"""
    qa = np.atleast_1d(np.asarray(alpha, dtype=float))
    qb = np.atleast_1d(np.asarray(beta, dtype=float))
    poly = boundary.polygon
    x0, y0 = poly[:, 0], poly[:, 1]
    x1, y1 = np.roll(x0, -1), np.roll(y0, -1)

    inside = np.zeros(qa.shape, dtype=bool)
    for part in _chunks(qa.size, x0.size):
        pa, pb = qa[part, None], qb[part, None]
        straddles = (y0 > pb) != (y1 > pb)
        with np.errstate(divide="ignore", invalid="ignore"):
            x_cross = x0 + (pb - y0) * (x1 - x0) / (y1 - y0)
        crossings = np.count_nonzero(straddles & (pa < x_cross), axis=1)
        inside[part] = crossings % 2 == 1
    return inside


def distance_to_boundary(boundary: BoundaryCurve, alpha, beta) -> np.ndarray:
    """到边界线段集合的最小欧氏距离"""
    qa = np.atleast_1d(np.asarray(alpha, dtype=float))
    qb = np.atleast_1d(np.asarray(beta, dtype=float))
    seg = boundary_segments(boundary)
    ax, ay, bx, by = seg.T
    dx, dy = bx - ax, by - ay
    length2 = np.where(dx * dx + dy * dy > 0, dx * dx + dy * dy, 1.0)

    result = np.empty(qa.shape)
    for part in _chunks(qa.size, ax.size):
        pa, pb = qa[part, None], qb[part, None]
        t = np.clip(((pa - ax) * dx + (pb - ay) * dy) / length2, 0.0, 1.0)
        result[part] = np.hypot(pa - ax - t * dx, pb - ay - t * dy).min(axis=1)
    return result


def _closure_radius(alpha, beta) -> float:
    magnitude = float(np.max(np.hypot(alpha, beta))) if np.size(alpha) else 0.0
    return settings.closure_factor * max(magnitude, 1.0)


def classify_points(boundary: BoundaryCurve, alpha, beta) -> list[ClassificationResult]:
    """对一批 (α, β) 点做分类，边界只构造一次"""
    qa = np.atleast_1d(np.asarray(alpha, dtype=float))
    qb = np.atleast_1d(np.asarray(beta, dtype=float))
    distance = distance_to_boundary(boundary, qa, qb)
    inside = region_contains(boundary, qa, qb)

    results = []
    for a, b, dist, ins in zip(qa, qb, distance, inside):
        shortcut = delay_independent_test(a, b)
        if dist < settings.marginal_tol:
            verdict, cause = Verdict.MARGINAL, Cause.ON_BOUNDARY
        elif shortcut is DelayIndependence.STABLE_FOR_ALL_KERNELS:
            verdict, cause = Verdict.STABLE, Cause.DELAY_INDEPENDENT_STABLE
        elif shortcut is DelayIndependence.UNSTABLE_FOR_ALL_KERNELS:
            verdict, cause = Verdict.UNSTABLE, Cause.DELAY_INDEPENDENT_UNSTABLE
        elif ins:
            verdict, cause = Verdict.STABLE, Cause.INSIDE_REGION
        else:
            verdict, cause = Verdict.UNSTABLE, Cause.OUTSIDE_REGION
        results.append(ClassificationResult(verdict=verdict, cause=cause, distance_to_boundary=float(dist)))
    return results


def classify(kernel: KernelSpec, tau: float, alpha: float, beta: float) -> ClassificationResult:
    """
    判断 (α, β) 在给定核与平均时滞下的稳定性

    先做时滞无关判据，再对组装好的边界多边形做射线穿越检验；
    距边界小于 marginal_tol 时判为 Marginal
    """
    boundary = build_boundary(kernel, tau, radius=_closure_radius(alpha, beta))
    return classify_points(boundary, alpha, beta)[0]


def is_stable(kernel: KernelSpec, tau: float, alpha: float, beta: float) -> bool:
    """不含 Marginal 容差带的稳定性谓词，用于二分"""
    shortcut = delay_independent_test(alpha, beta)
    if shortcut is not DelayIndependence.INDETERMINATE:
        return shortcut is DelayIndependence.STABLE_FOR_ALL_KERNELS
    boundary = build_boundary(kernel, tau, radius=_closure_radius(alpha, beta))
    return bool(region_contains(boundary, alpha, beta)[0])


def region_scan(
    kernel: KernelSpec,
    tau: float,
    alpha_range: tuple[float, float],
    beta_range: tuple[float, float],
    resolution: tuple[int, int],
) -> tuple[np.ndarray, np.ndarray, list[list[ClassificationResult]]]:
    """
    在 (α, β) 栅格上逐点分类

    Returns:
        (alpha 轴, beta 轴, verdicts[i][j] 对应 alpha[i], beta[j])
    """
    n_alpha, n_beta = resolution
    if n_alpha < 2 or n_beta < 2:
        raise PreconditionError(f"每个方向的分辨率至少为 2: {resolution}")

    alphas = np.linspace(alpha_range[0], alpha_range[1], n_alpha)
    betas = np.linspace(beta_range[0], beta_range[1], n_beta)
    aa, bb = np.meshgrid(alphas, betas, indexing="ij")

    boundary = build_boundary(kernel, tau, radius=_closure_radius(aa.ravel(), bb.ravel()))
    flat = classify_points(boundary, aa.ravel(), bb.ravel())
    grid = [flat[i * n_beta:(i + 1) * n_beta] for i in range(n_alpha)]
    return alphas, betas, grid
