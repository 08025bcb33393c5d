"""
时滞系统数值模拟

- Dirac 核：步长对齐时滞的四阶 Runge-Kutta 步进法，时滞中点取三次 Hermite 插值
- Gamma 核：线性链化简为 2+2p 维常微分方程
- Gamma / Uniform 核：直接卷积求积（校验线性链化简用）
- τ = 0：无时滞常微分方程
"""
import math
from typing import Callable

import numpy as np
from scipy import stats
from scipy.integrate import quad
from scipy.interpolate import CubicSpline
from scipy.special import expit

from wcdelay.core.errors import ConfigError, DomainError, UnsupportedKernelError
from wcdelay.core.logging import logger
from wcdelay.schemas.kernel import DiracKernel, GammaKernel, KernelSpec, UniformKernel
from wcdelay.schemas.model import Activation, ModelParams
from wcdelay.schemas.simulation import (
    ConstantHistory,
    HistoryFunction,
    SimConfig,
    Trajectory,
)
from wcdelay.services.kernel import density, tail_cutoff


def history_evaluator(history: HistoryFunction) -> Callable[[np.ndarray], np.ndarray]:
    """
    返回 t ↦ (u, v) 的向量化求值函数，输入 t ≤ 0，输出形状 (n, 2)

    采样初始函数在采样区间两侧按端点常值外推
    """
    if isinstance(history, ConstantHistory):
        value = np.array([history.u0, history.v0])
        return lambda t: np.broadcast_to(value, (np.size(t), 2)).copy()

    times = np.asarray(history.times)
    spline = CubicSpline(times, np.column_stack([history.u, history.v]))
    return lambda t: spline(np.clip(np.atleast_1d(t), times[0], times[-1]))


class _Rhs:
    """u′ = −u + f(θ_u + a·c_u + b·c_v)，v′ = −v + f(θ_v + c·c_u + d·c_v)，c 为时滞（或卷积）后的状态"""

    def __init__(self, params: ModelParams, act: Activation):
        self.weights = np.array([[params.a, params.b], [params.c, params.d]])
        self.drive = np.array([params.theta_u, params.theta_v])
        self.delta = act.delta

    def __call__(self, state: np.ndarray, lagged: np.ndarray) -> np.ndarray:
        return -state + expit(self.delta * (self.drive + self.weights @ lagged))


def _integrate_lagged(
    rhs: _Rhs,
    offsets: np.ndarray,
    weights: np.ndarray,
    history: HistoryFunction,
    h: float,
    n_steps: int,
) -> np.ndarray:
    """
    四阶 Runge-Kutta 积分 y′ = F(y, Σ_j w_j·y(t − j·h))

    offsets 为非负整数步数，offsets = 0 的项取当前级的状态；
    半步处的时滞值由已存储解的三次 Hermite 插值给出：
    y(t_i + h/2) ≈ (y_i + y_{i+1})/2 + h(y′_i − y′_{i+1})/8
    """
    depth = int(offsets.max()) if offsets.size else 0
    values = history_evaluator(history)

    ext = np.empty((depth + n_steps + 1, 2))
    mid = np.empty_like(ext)
    slope = np.empty_like(ext)
    past = -h * np.arange(depth, 0, -1)
    if depth:
        ext[:depth] = values(past)
        mid[:depth] = values(past + 0.5 * h)
    ext[depth] = values(0.0)[0]

    lagged = offsets > 0
    lag_offsets, lag_weights = offsets[lagged], weights[lagged]
    w0 = float(weights[~lagged].sum())

    def convolve(store: np.ndarray, index: int, state: np.ndarray) -> np.ndarray:
        return w0 * state + lag_weights @ store[index - lag_offsets]

    for k in range(n_steps):
        i = depth + k
        y = ext[i]
        k1 = rhs(y, convolve(ext, i, y))
        slope[i] = k1
        if k > 0:
            mid[i - 1] = 0.5 * (ext[i - 1] + y) + h * (slope[i - 1] - k1) / 8.0

        y2 = y + 0.5 * h * k1
        k2 = rhs(y2, convolve(mid, i, y2))
        y3 = y + 0.5 * h * k2
        k3 = rhs(y3, convolve(mid, i, y3))
        y4 = y + h * k3
        k4 = rhs(y4, convolve(ext, i + 1, y4))
        ext[i + 1] = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    return ext[depth:]


def _rk4(rhs: Callable[[np.ndarray], np.ndarray], y0: np.ndarray, h: float, n_steps: int) -> np.ndarray:
    out = np.empty((n_steps + 1, y0.size))
    out[0] = y = y0
    for k in range(n_steps):
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * h * k1)
        k3 = rhs(y + 0.5 * h * k2)
        k4 = rhs(y + h * k3)
        y = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[k + 1] = y
    return out


def _trajectory(
    states: np.ndarray,
    h: float,
    cfg: SimConfig,
    kernel,
    tau: float,
    params: ModelParams,
) -> Trajectory:
    stride = cfg.record_stride
    times = h * np.arange(states.shape[0])
    aux = states[::stride, 2:] if states.shape[1] > 2 else None
    return Trajectory(
        times=times[::stride],
        u=states[::stride, 0].copy(),
        v=states[::stride, 1].copy(),
        kernel=kernel,
        tau=tau,
        params=params,
        aux=aux,
    )


def simulate_nondelayed(
    params: ModelParams,
    act: Activation,
    history: HistoryFunction,
    cfg: SimConfig,
) -> Trajectory:
    """H ≡ 1 的无时滞系统，初值取初始函数在 t=0 处的值"""
    n_steps = math.ceil(cfg.t_end / cfg.dt - 1e-9)
    states = _integrate_lagged(_Rhs(params, act), np.array([0]), np.array([1.0]), history, cfg.dt, n_steps)
    return _trajectory(states, cfg.dt, cfg, None, 0.0, params)


def simulate_dirac(
    params: ModelParams,
    act: Activation,
    tau: float,
    history: HistoryFunction,
    cfg: SimConfig,
) -> Trajectory:
    """
    离散时滞系统 u′ = −u + f(θ_u + a·u(t−τ) + b·v(t−τ))（v 同理）

    步长调整为 τ/round(τ/dt)，时滞点恰好落在网格上

    Raises:
        ConfigError: dt > τ
    """
    if tau <= 0:
        raise DomainError(f"平均时滞必须为正: τ={tau}")
    if cfg.dt > tau:
        raise ConfigError(f"步长超过时滞 (step exceeds delay): dt={cfg.dt:g} > τ={tau:g}")

    lag_steps = max(1, round(tau / cfg.dt))
    h = tau / lag_steps
    if abs(h - cfg.dt) > 1e-15 * tau:
        logger.info(f"步长由 {cfg.dt:g} 调整为 {h:.12g}，使 τ/dt = {lag_steps}")

    n_steps = math.ceil(cfg.t_end / h - 1e-9)
    states = _integrate_lagged(
        _Rhs(params, act), np.array([lag_steps]), np.array([1.0]), history, h, n_steps,
    )
    return _trajectory(states, h, cfg, DiracKernel(), tau, params)


def _chain_initial_stage(
    history: HistoryFunction,
    feed: np.ndarray,
    order: int,
    rate: float,
) -> float:
    """第 order 级的初值：初始函数的输入项与 Gamma(order, 1/rate) 密度的卷积"""
    if isinstance(history, ConstantHistory):
        return float(feed @ [history.u0, history.v0])

    values = history_evaluator(history)
    partial = stats.gamma(a=order, scale=1.0 / rate)
    span = -history.times[0]

    def integrand(s: float) -> float:
        return partial.pdf(s) * float(values(-s)[0] @ feed)

    inner = quad(integrand, 0.0, span, limit=200)[0] if span > 0 else 0.0
    tail = partial.sf(span) * float(values(history.times[0])[0] @ feed)
    return inner + tail


def simulate_gamma_chain(
    params: ModelParams,
    act: Activation,
    tau: float,
    p: int,
    history: HistoryFunction,
    cfg: SimConfig,
) -> Trajectory:
    """
    Gamma(p) 核的线性链化简

    x₁′ = (p/τ)(a·u + b·v − x₁)，x_k′ = (p/τ)(x_{k−1} − x_k)，y 链同理；
    x_p, y_p 即卷积积分
    """
    if tau <= 0:
        raise DomainError(f"平均时滞必须为正: τ={tau}")
    if p < 1:
        raise DomainError(f"Gamma 阶数必须为正整数: p={p}")

    rate = p / tau
    weights = np.array([[params.a, params.b], [params.c, params.d]])
    drive = np.array([params.theta_u, params.theta_v])
    delta = act.delta

    start = history_evaluator(history)(0.0)[0]
    y0 = np.concatenate([
        start,
        [_chain_initial_stage(history, weights[0], k, rate) for k in range(1, p + 1)],
        [_chain_initial_stage(history, weights[1], k, rate) for k in range(1, p + 1)],
    ])

    def rhs(state: np.ndarray) -> np.ndarray:
        uv = state[:2]
        chains = state[2:].reshape(2, p)
        feed = weights @ uv
        upstream = np.column_stack([feed, chains[:, :-1]])
        out = np.empty_like(state)
        out[:2] = -uv + expit(delta * (drive + chains[:, -1]))
        out[2:] = (rate * (upstream - chains)).ravel()
        return out

    n_steps = math.ceil(cfg.t_end / cfg.dt - 1e-9)
    states = _rk4(rhs, y0, cfg.dt, n_steps)
    return _trajectory(states, cfg.dt, cfg, GammaKernel(p=p), tau, params)


def quadrature_weights(kernel: KernelSpec, tau: float, h: float, cutoff_mass: float) -> tuple[np.ndarray, np.ndarray]:
    """
    核密度在 s_j = j·h 上的梯形权重，截断到尾部质量 cutoff_mass，归一化为总和 1

    Returns:
        (非零权重对应的步数, 权重)
    """
    span = tail_cutoff(kernel, tau, cutoff_mass)
    n = max(1, math.ceil(span / h))
    s = h * np.arange(n + 1)
    w = density(kernel, tau, s) * h
    w[0] *= 0.5
    w[-1] *= 0.5
    total = w.sum()
    if total <= 0:
        raise ConfigError(f"步长 {h:g} 过大，无法分辨 {kernel.label} 核 (τ={tau:g})")
    keep = np.nonzero(w)[0]
    return keep, w[keep] / total


def simulate_quadrature(
    params: ModelParams,
    act: Activation,
    kernel: KernelSpec,
    tau: float,
    history: HistoryFunction,
    cfg: SimConfig,
) -> Trajectory:
    """
    直接对 ∫h(t−s)(a·u(s)+b·v(s))ds 做梯形求积

    Raises:
        UnsupportedKernelError: Dirac 核请使用 simulate_dirac
    """
    if isinstance(kernel, DiracKernel):
        raise UnsupportedKernelError("直接求积不支持 Dirac 核，请使用 simulate_dirac")
    if tau <= 0:
        raise DomainError(f"平均时滞必须为正: τ={tau}")

    offsets, weights = quadrature_weights(kernel, tau, cfg.dt, cfg.quadrature_cutoff_mass)
    logger.debug(f"{kernel.label} 核求积窗口 {offsets.max() + 1} 步")
    n_steps = math.ceil(cfg.t_end / cfg.dt - 1e-9)
    states = _integrate_lagged(_Rhs(params, act), offsets, weights, history, cfg.dt, n_steps)
    return _trajectory(states, cfg.dt, cfg, kernel, tau, params)


def simulate(
    params: ModelParams,
    act: Activation,
    kernel: KernelSpec,
    tau: float,
    history: HistoryFunction,
    cfg: SimConfig,
    engine: str = "auto",
) -> Trajectory:
    """
    按核类型选择积分器

    engine: auto（Gamma 用线性链）或 quadrature（Gamma 也用直接求积）
    """
    if tau == 0:
        return simulate_nondelayed(params, act, history, cfg)
    if isinstance(kernel, DiracKernel):
        return simulate_dirac(params, act, tau, history, cfg)
    if isinstance(kernel, GammaKernel) and engine != "quadrature":
        return simulate_gamma_chain(params, act, tau, kernel.p, history, cfg)
    if isinstance(kernel, (GammaKernel, UniformKernel)):
        return simulate_quadrature(params, act, kernel, tau, history, cfg)
    raise UnsupportedKernelError(f"没有适用于 {kernel.label} 的积分器")
