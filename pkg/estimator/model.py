"""
秩 K 因子化二次模型

单层网络的 K 个子网络各持有复权重 w_k = w_{k,1} + j·w_{k,2}，实值前向
Σ_k ‖u^T W_k‖² 与 Σ_k |v^H w_k|² 代数等价，因此直接存储复向量。
自相关估计 R̂ = Σ_k w_k w_k^H。
"""
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np

from channel.ofdm import VectorLike, as_extended
from core.exceptions import InvalidArgumentError
from core.io import atomic_write_text


@dataclass(frozen=True)
class EstimatorModel:
    """
    Attributes:
        weights: (K, N+1) 复矩阵，第 k 行为 w_k
    """

    weights: np.ndarray

    def __post_init__(self) -> None:
        weights = np.array(self.weights, dtype=complex, copy=True)
        if weights.ndim == 1:
            weights = weights.reshape(1, -1)
        if weights.ndim != 2 or weights.shape[0] < 1 or weights.shape[1] < 1:
            raise InvalidArgumentError(f"weights must be (K, N+1) with K >= 1, got {weights.shape}")
        if not np.all(np.isfinite(weights)):
            raise InvalidArgumentError("weights must be finite")
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)

    @property
    def k_rank(self) -> int:
        return int(self.weights.shape[0])

    @property
    def dimension(self) -> int:
        """N+1"""
        return int(self.weights.shape[1])


def forward_power(model: EstimatorModel, v: VectorLike) -> float:
    """p̂(v) = Σ_k |v^H w_k|²"""
    vec = as_extended(v)
    if vec.size != model.dimension:
        raise InvalidArgumentError(
            f"reflection length {vec.size} does not match model dimension {model.dimension}"
        )
    outputs = model.weights @ vec.conj()
    return float(np.sum(np.abs(outputs) ** 2))


def forward_batch(weights: np.ndarray, reflections: np.ndarray) -> np.ndarray:
    """
    批量前向

    Args:
        weights: (K, N+1)
        reflections: (B, N+1) 扩展向量

    Returns:
        (B,) 预测功率
    """
    outputs = reflections.conj() @ weights.T
    return np.sum(np.abs(outputs) ** 2, axis=1)


def reconstruct_autocorrelation(model: EstimatorModel) -> np.ndarray:
    """R̂ = Σ_k w_k w_k^H（Hermitian 半正定，秩 ≤ K）"""
    return model.weights.T @ model.weights.conj()


def nmse(estimate: np.ndarray, truth: np.ndarray) -> float:
    """‖R̂ − R‖²_F / ‖R‖²_F"""
    estimate = np.asarray(estimate, dtype=complex)
    truth = np.asarray(truth, dtype=complex)
    if estimate.shape != truth.shape:
        raise InvalidArgumentError(
            f"shape mismatch: estimate {estimate.shape} vs truth {truth.shape}"
        )
    denom = float(np.linalg.norm(truth, "fro") ** 2)
    if denom == 0:
        raise InvalidArgumentError("truth matrix has zero Frobenius norm")
    return float(np.linalg.norm(estimate - truth, "fro") ** 2) / denom


# ============================================================
# JSON 序列化（实部/虚部交错，double 精度无损）
# ============================================================

def _interleave(vector: np.ndarray) -> list:
    pairs = np.stack([vector.real, vector.imag], axis=-1).reshape(-1)
    return [float(x) for x in pairs]


def _deinterleave(values: list) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.size % 2:
        raise InvalidArgumentError("interleaved array must have even length")
    return arr[0::2] + 1j * arr[1::2]


def model_to_dict(model: EstimatorModel) -> Dict[str, Any]:
    return {
        "k_rank": model.k_rank,
        "dimension": model.dimension,
        "weights": [_interleave(row) for row in model.weights],
    }


def model_from_dict(data: Dict[str, Any]) -> EstimatorModel:
    try:
        rows = [_deinterleave(row) for row in data["weights"]]
        k_rank = int(data["k_rank"])
    except (KeyError, TypeError) as exc:
        raise InvalidArgumentError(f"malformed model JSON: {exc}", cause=exc) from exc
    if len(rows) != k_rank:
        raise InvalidArgumentError(f"k_rank={k_rank} but {len(rows)} weight vectors given")
    return EstimatorModel(np.vstack(rows))


def save_model(model: EstimatorModel, path: Union[str, Path]) -> Path:
    # repr 精度的 float 可无损往返
    return atomic_write_text(path, json.dumps(model_to_dict(model), indent=2))


def load_model(path: Union[str, Path]) -> EstimatorModel:
    path = Path(path)
    if not path.exists():
        raise InvalidArgumentError(f"model file not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        return model_from_dict(json.load(f))


def autocorr_to_dict(autocorr: np.ndarray) -> Dict[str, Any]:
    autocorr = np.asarray(autocorr, dtype=complex)
    return {
        "dimension": int(autocorr.shape[0]),
        "rows": [_interleave(row) for row in autocorr],
    }


def autocorr_from_dict(data: Dict[str, Any]) -> np.ndarray:
    try:
        matrix = np.vstack([_deinterleave(row) for row in data["rows"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidArgumentError(f"malformed autocorrelation JSON: {exc}", cause=exc) from exc
    if matrix.shape != (int(data.get("dimension", matrix.shape[0])),) * 2:
        raise InvalidArgumentError(f"autocorrelation must be square, got {matrix.shape}")
    return matrix


def save_autocorr(autocorr: np.ndarray, path: Union[str, Path]) -> Path:
    return atomic_write_text(path, json.dumps(autocorr_to_dict(autocorr), indent=2))


def load_autocorr(path: Union[str, Path]) -> np.ndarray:
    path = Path(path)
    if not path.exists():
        raise InvalidArgumentError(f"autocorrelation file not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        return autocorr_from_dict(json.load(f))
