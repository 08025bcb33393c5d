"""
结果导出
所有表格数据统一转换为 pandas DataFrame，再按 csv / json 写出，供外部绘图工具使用
"""
import json
import sys
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd

from wcdelay.core.logging import logger
from wcdelay.schemas.model import Equilibrium
from wcdelay.schemas.stability import BoundaryCurve, ClassificationResult
from wcdelay.schemas.simulation import Trajectory

FLOAT_FORMAT = "%.10g"


def boundary_frame(boundary: BoundaryCurve) -> pd.DataFrame:
    """边界元素表，segment ∈ {l0, ltau, gamma}"""
    curve = boundary.hopf_curve_samples
    frames = [pd.DataFrame({
        "segment": "gamma",
        "omega": curve[:, 0],
        "alpha": curve[:, 1],
        "beta": curve[:, 2],
    })]

    lo, hi = boundary.saddle_node_segment
    frames.append(pd.DataFrame({
        "segment": "l0",
        "omega": [0.0, 0.0],
        "alpha": [lo, hi],
        "beta": [lo - 1.0, hi - 1.0],
    }))

    if boundary.bounded:
        mu = boundary.omega_tau.mu_tau
        a0, a1 = boundary.hopf_line_segment
        frames.append(pd.DataFrame({
            "segment": "ltau",
            "omega": boundary.omega_tau.omega_tau,
            "alpha": [a0, a1],
            "beta": [mu * (a0 - mu), mu * (a1 - mu)],
        }))

    return pd.concat(frames, ignore_index=True)[["segment", "omega", "alpha", "beta"]]


def boundary_summary(boundary: BoundaryCurve) -> dict:
    """余维二点及有界性"""
    summary = {
        "kernel": boundary.kernel.label,
        "tau": boundary.tau,
        "bounded": boundary.bounded,
        **boundary.codim2_points(),
    }
    if boundary.omega_tau is not None:
        summary["omega_tau"] = boundary.omega_tau.omega_tau
        summary["mu_tau"] = boundary.omega_tau.mu_tau
    if boundary.closure_radius is not None:
        summary["closure_radius"] = boundary.closure_radius
    return summary


def raster_frame(
    alphas: np.ndarray,
    betas: np.ndarray,
    grid: list[list[ClassificationResult]],
) -> pd.DataFrame:
    aa, bb = np.meshgrid(alphas, betas, indexing="ij")
    return pd.DataFrame({
        "alpha": aa.ravel(),
        "beta": bb.ravel(),
        "verdict": [cell.verdict.value for row in grid for cell in row],
    })


def equilibria_frame(equilibria: list[Equilibrium]) -> pd.DataFrame:
    return pd.DataFrame([eq.model_dump() for eq in equilibria], columns=list(Equilibrium.model_fields))


def trajectory_frame(traj: Trajectory) -> pd.DataFrame:
    """t, u, v 以及 Gamma 链状态 x1..xp, y1..yp"""
    frame = pd.DataFrame({"t": traj.times, "u": traj.u, "v": traj.v})
    if traj.aux is not None:
        p = traj.aux.shape[1] // 2
        names = [f"x{k}" for k in range(1, p + 1)] + [f"y{k}" for k in range(1, p + 1)]
        frame = pd.concat([frame, pd.DataFrame(traj.aux, columns=names)], axis=1)
    return frame


def render_frame(frame: pd.DataFrame, fmt: str) -> str:
    if fmt == "json":
        return frame.to_json(orient="records", double_precision=10) + "\n"
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def render_json(document) -> str:
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


def write_text(text: str, path: Optional[Path]) -> None:
    """写入文件，path 为空时写到标准输出"""
    if path is None:
        sys.stdout.write(text)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info(f"已写出 {path}")


def companion_path(path: Path, suffix: str) -> Path:
    """与主输出同目录的附属文件，例如 boundary.csv → boundary.codim2.json"""
    return path.with_name(f"{path.stem}.{suffix}")
