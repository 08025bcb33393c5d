"""
轨道渐近行为判定
"""
from typing import Optional

import numpy as np
from scipy.signal import find_peaks

from wcdelay.config import settings
from wcdelay.core.errors import PreconditionError
from wcdelay.schemas.simulation import BehaviorReport, BehaviorVerdict, Trajectory


def _refined_peak_times(times: np.ndarray, values: np.ndarray, peaks: np.ndarray) -> np.ndarray:
    """抛物线插值修正峰值时刻，周期估计不受采样步长限制"""
    inner = peaks[(peaks > 0) & (peaks < values.size - 1)]
    left, centre, right = values[inner - 1], values[inner], values[inner + 1]
    curvature = left - 2.0 * centre + right
    shift = np.where(curvature != 0, 0.5 * (left - right) / np.where(curvature != 0, curvature, 1.0), 0.0)
    step = times[inner + 1] - times[inner]
    return times[inner] + shift * step


def _spread(x: np.ndarray) -> float:
    mean = float(np.mean(x))
    return float((x.max() - x.min()) / abs(mean)) if mean != 0 else np.inf


def detect_behavior(
    traj: Trajectory,
    equilibrium: tuple[float, float],
    settle_fraction: Optional[float] = None,
) -> BehaviorReport:
    """
    丢弃前 settle_fraction 的样本后判定：
    末端距平衡点 < decay_tol 为 Decay；
    至少 min_cycle_peaks 个峰且周期、峰高的相对变化都在阈值内为 LimitCycle；
    其余为 Irregular

    Raises:
        PreconditionError: 轨道过短
    """
    settle_fraction = settings.settle_fraction if settle_fraction is None else settle_fraction
    if not 0.0 <= settle_fraction < 1.0:
        raise PreconditionError(f"settle_fraction 必须在 [0, 1) 内: {settle_fraction}")

    start = int(settle_fraction * len(traj))
    if len(traj) - start < 3:
        raise PreconditionError(f"轨道过短: 共 {len(traj)} 个样本，稳定窗口不足 3 个")

    times = traj.times[start:]
    u = traj.u[start:]
    v = traj.v[start:]
    u_star, v_star = equilibrium

    final_distance = float(np.hypot(u[-1] - u_star, v[-1] - v_star))
    amplitude = 0.5 * float(np.ptp(u))

    if final_distance < settings.decay_tol:
        return BehaviorReport(
            verdict=BehaviorVerdict.DECAY,
            amplitude=amplitude,
            final_distance_to_equilibrium=final_distance,
        )

    peaks, _ = find_peaks(u, prominence=max(1e-12, 0.1 * np.ptp(u)))
    peak_times = _refined_peak_times(times, u, peaks)

    if peak_times.size >= settings.min_cycle_peaks:
        periods = np.diff(peak_times)
        heights = u[peaks] - u_star
        period = float(np.mean(periods))
        if (
            _spread(periods) < settings.period_variation
            and _spread(heights) < settings.amplitude_variation
        ):
            return BehaviorReport(
                verdict=BehaviorVerdict.LIMIT_CYCLE,
                amplitude=amplitude,
                period=period,
                final_distance_to_equilibrium=final_distance,
            )
        return BehaviorReport(
            verdict=BehaviorVerdict.IRREGULAR,
            amplitude=amplitude,
            period=period,
            final_distance_to_equilibrium=final_distance,
        )

    return BehaviorReport(
        verdict=BehaviorVerdict.IRREGULAR,
        amplitude=amplitude,
        final_distance_to_equilibrium=final_distance,
    )
