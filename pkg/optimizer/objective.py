"""
二次型目标 v^H R v 及输入校验
"""
import numpy as np

from channel.ofdm import VectorLike, as_extended
from core.exceptions import InvalidArgumentError

PSD_TOL = 1e-9


def hermitian_part(autocorr: np.ndarray) -> np.ndarray:
    autocorr = np.asarray(autocorr, dtype=complex)
    return 0.5 * (autocorr + autocorr.conj().T)


def check_psd(autocorr: np.ndarray, tol: float = PSD_TOL) -> np.ndarray:
    """
    校验方阵、Hermitian 且半正定（容差相对最大特征值）

    Returns:
        Hermitian 部分
    """
    autocorr = np.asarray(autocorr, dtype=complex)
    if autocorr.ndim != 2 or autocorr.shape[0] != autocorr.shape[1]:
        raise InvalidArgumentError(f"matrix must be square, got shape {autocorr.shape}")
    scale = max(float(np.max(np.abs(autocorr))), np.finfo(float).tiny)
    if np.max(np.abs(autocorr - autocorr.conj().T)) > tol * scale:
        raise InvalidArgumentError("matrix must be Hermitian")
    herm = hermitian_part(autocorr)
    eigvals = np.linalg.eigvalsh(herm)
    if eigvals[0] < -tol * max(float(eigvals[-1]), scale):
        raise InvalidArgumentError(
            f"matrix must be positive semidefinite, min eigenvalue {eigvals[0]:.3e}"
        )
    return herm


def quadratic_objective(autocorr: np.ndarray, v: VectorLike) -> float:
    """v^H R v（实部）"""
    vec = as_extended(v)
    autocorr = np.asarray(autocorr, dtype=complex)
    if vec.size != autocorr.shape[0]:
        raise InvalidArgumentError(
            f"reflection length {vec.size} does not match matrix dimension {autocorr.shape[0]}"
        )
    return float(np.real(np.vdot(vec, autocorr @ vec)))


def batch_objective(autocorr: np.ndarray, reflections: np.ndarray) -> np.ndarray:
    """
    批量二次型

    Args:
        autocorr: (n, n)
        reflections: (T, n) 扩展向量

    Returns:
        (T,) 目标值
    """
    return np.real(np.sum(reflections.conj() * (reflections @ autocorr.T), axis=1))
