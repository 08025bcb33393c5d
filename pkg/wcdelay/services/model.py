"""
Wilson-Cowan 模型业务逻辑
激活函数、平衡点求解（网格扫描 + 阻尼牛顿）与特征参数 (α, β) 的计算
"""
from typing import Optional

import numpy as np
from scipy.special import expit

from wcdelay.config import settings
from wcdelay.core.errors import ConvergenceError, PreconditionError
from wcdelay.core.logging import logger
from wcdelay.schemas.model import Activation, Equilibrium, ModelParams


def activation_value(act: Activation, x):
    """Logistic 函数值，expit 对大 |δx| 不会溢出"""
    value = expit(act.delta * np.asarray(x, dtype=float))
    return float(value) if np.ndim(value) == 0 else value


def activation_slope(act: Activation, x):
    """f'(x) = δ·f(x)·(1 − f(x))"""
    f = activation_value(act, x)
    return act.delta * f * (1.0 - f)


def _arguments(params: ModelParams, u, v):
    x_u = params.theta_u + params.a * u + params.b * v
    x_v = params.theta_v + params.c * u + params.d * v
    return x_u, x_v


def residual(params: ModelParams, act: Activation, u, v):
    """
    不动点方程的残差 F(u, v) = (u − f(θ_u+au+bv), v − f(θ_v+cu+dv))

    支持数组输入（网格扫描时使用）
    """
    x_u, x_v = _arguments(params, u, v)
    return u - activation_value(act, x_u), v - activation_value(act, x_v)


def jacobian(params: ModelParams, act: Activation, u: float, v: float) -> np.ndarray:
    """残差映射的雅可比矩阵"""
    x_u, x_v = _arguments(params, u, v)
    phi1 = activation_slope(act, x_u)
    phi2 = activation_slope(act, x_v)
    return np.array([
        [1.0 - params.a * phi1, -params.b * phi1],
        [-params.c * phi2, 1.0 - params.d * phi2],
    ])


def _sup_residual(params: ModelParams, act: Activation, x: np.ndarray) -> float:
    r1, r2 = residual(params, act, x[0], x[1])
    return max(abs(r1), abs(r2))


def _newton(params: ModelParams, act: Activation, seed: np.ndarray) -> Optional[np.ndarray]:
    """
    阻尼牛顿迭代：残差上升时步长减半（最多 newton_max_halvings 次）
    收敛返回解，否则返回 None
    """
    x = seed.astype(float)
    norm = _sup_residual(params, act, x)

    for _ in range(settings.newton_max_iter):
        if norm < settings.newton_tol:
            return x
        r = np.array(residual(params, act, x[0], x[1]))
        try:
            step = np.linalg.solve(jacobian(params, act, x[0], x[1]), -r)
        except np.linalg.LinAlgError:
            return None

        lam = 1.0
        for _ in range(settings.newton_max_halvings + 1):
            trial = x + lam * step
            trial_norm = _sup_residual(params, act, trial)
            if trial_norm < norm:
                break
            lam *= 0.5
        else:
            # 步长减半用尽仍无下降：已在浮点精度极限附近
            return x if norm < 10 * settings.newton_tol else None
        x, norm = trial, trial_norm

    return x if norm < settings.newton_tol else None


def _candidate_seeds(params: ModelParams, act: Activation, grid_n: int) -> np.ndarray:
    """
    在 (0,1)² 上扫描 grid_n × grid_n 网格，
    返回两个残差分量在角点上都变号的单元中心
    """
    nodes = np.linspace(0.0, 1.0, grid_n + 1)
    uu, vv = np.meshgrid(nodes, nodes, indexing="ij")
    r1, r2 = residual(params, act, uu, vv)

    def changes_sign(r: np.ndarray) -> np.ndarray:
        corners = np.stack([r[:-1, :-1], r[1:, :-1], r[:-1, 1:], r[1:, 1:]])
        return (corners.min(axis=0) <= 0.0) & (corners.max(axis=0) >= 0.0)

    mask = changes_sign(r1) & changes_sign(r2)
    centers = 0.5 * (nodes[:-1] + nodes[1:])
    iu, iv = np.nonzero(mask)

    if iu.size == 0:
        # 没有变号单元时，退回到残差最小的单元
        cu, cv = np.meshgrid(centers, centers, indexing="ij")
        c1, c2 = residual(params, act, cu, cv)
        flat = np.argmin(np.maximum(np.abs(c1), np.abs(c2)))
        iu, iv = np.unravel_index(flat, c1.shape)
        iu, iv = np.atleast_1d(iu), np.atleast_1d(iv)

    return np.column_stack([centers[iu], centers[iv]])


def _deduplicate(points: list[np.ndarray], tol: float) -> list[np.ndarray]:
    """按字典序排序后去重，结果与网格单元的求值顺序无关"""
    unique: list[np.ndarray] = []
    for x in sorted(points, key=lambda q: (q[0], q[1])):
        if all(np.max(np.abs(x - y)) > tol for y in unique):
            unique.append(x)
    return unique


def build_equilibrium(params: ModelParams, act: Activation, u: float, v: float) -> Equilibrium:
    """根据平衡点坐标填充斜率与特征参数"""
    x_u, x_v = _arguments(params, u, v)
    phi1 = float(activation_slope(act, x_u))
    phi2 = float(activation_slope(act, x_v))
    return Equilibrium(
        u_star=float(u),
        v_star=float(v),
        phi1=phi1,
        phi2=phi2,
        alpha=params.a * phi1 + params.d * phi2,
        beta=(params.a * params.d - params.b * params.c) * phi1 * phi2,
    )


def find_equilibria(
    params: ModelParams,
    act: Activation,
    grid_n: Optional[int] = None,
) -> list[Equilibrium]:
    """
    求出代数系统 u=f(θ_u+au+bv), v=f(θ_v+cu+dv) 的全部解

    Raises:
        PreconditionError: grid_n < 16
        ConvergenceError: 所有种子的牛顿迭代都失败
    """
    grid_n = grid_n or settings.equilibrium_grid
    if grid_n < 16:
        raise PreconditionError(f"网格分辨率至少为 16: grid_n={grid_n}")

    seeds = _candidate_seeds(params, act, grid_n)
    converged = []
    dropped = 0
    for seed in seeds:
        x = _newton(params, act, seed)
        if x is None:
            dropped += 1
        else:
            converged.append(x)

    if dropped:
        logger.warning(f"{dropped} 个候选点牛顿迭代未收敛，已丢弃")
    if not converged:
        raise ConvergenceError("所有候选点的牛顿迭代均未收敛")

    return [
        build_equilibrium(params, act, x[0], x[1])
        for x in _deduplicate(converged, settings.dedup_tol)
    ]


def characteristic_params(
    params: ModelParams,
    act: Activation,
    u_star: float,
    v_star: float,
) -> tuple[float, float]:
    """
    特征参数 α = aφ₁ + dφ₂，β = (ad − bc)φ₁φ₂

    Raises:
        PreconditionError: (u*, v*) 不是平衡点
    """
    r1, r2 = residual(params, act, u_star, v_star)
    if max(abs(r1), abs(r2)) >= settings.residual_check_tol:
        raise PreconditionError(
            f"({u_star}, {v_star}) 不满足平衡点方程，残差 {max(abs(r1), abs(r2)):.3e}"
        )
    eq = build_equilibrium(params, act, u_star, v_star)
    return eq.alpha, eq.beta


def nondelayed_eigenvalues(alpha: float, beta: float) -> np.ndarray:
    """无时滞特征方程 z² + (2−α)z + β − α + 1 = 0 的根"""
    return np.roots([1.0, 2.0 - alpha, beta - alpha + 1.0])
