"""
复参数优化器

梯度约定为 ∂L/∂Re + j·∂L/∂Im，更新量直接加到复参数上。
"""
from abc import ABC, abstractmethod
from typing import Tuple

import numpy as np

from config.system_config import TrainingHyper
from core.exceptions import InvalidArgumentError


class ComplexOptimizer(ABC):
    """优化器基类"""

    def __init__(self, shape: Tuple[int, ...], step_size: float) -> None:
        self.shape = shape
        self.step_size = step_size
        self.steps = 0

    @abstractmethod
    def update(self, gradient: np.ndarray) -> np.ndarray:
        """返回参数增量"""

    def decay(self, factor: float) -> None:
        self.step_size *= factor


class MomentumSGD(ComplexOptimizer):
    """经典动量 SGD"""

    def __init__(self, shape: Tuple[int, ...], step_size: float, momentum: float = 0.9) -> None:
        super().__init__(shape, step_size)
        self.momentum = momentum
        self.velocity = np.zeros(shape, dtype=complex)

    def update(self, gradient: np.ndarray) -> np.ndarray:
        self.steps += 1
        self.velocity *= self.momentum
        self.velocity -= self.step_size * gradient
        return self.velocity.copy()


class AdamComplex(ComplexOptimizer):
    """实部、虚部分别维护二阶矩的 Adam"""

    def __init__(
        self,
        shape: Tuple[int, ...],
        step_size: float,
        beta1: float = 0.9,
        beta2: float = 0.999,
        epsilon: float = 1e-8,
    ) -> None:
        super().__init__(shape, step_size)
        self.beta1, self.beta2, self.eps = beta1, beta2, epsilon
        self.m = np.zeros(shape, dtype=complex)
        self.v = np.zeros(shape, dtype=complex)

    def update(self, gradient: np.ndarray) -> np.ndarray:
        self.steps += 1
        self.m = self.beta1 * self.m + (1 - self.beta1) * gradient
        grad2 = gradient.real**2 + 1j * gradient.imag**2
        self.v = self.beta2 * self.v + (1 - self.beta2) * grad2

        beta1t, beta2t = self.beta1**self.steps, self.beta2**self.steps
        mhat = self.m / (1 - beta1t)
        vhat = self.v / (1 - beta2t)

        re = mhat.real / (np.sqrt(vhat.real) + self.eps)
        im = mhat.imag / (np.sqrt(vhat.imag) + self.eps)
        return -self.step_size * (re + 1j * im)


def make_optimizer(hyper: TrainingHyper, shape: Tuple[int, ...]) -> ComplexOptimizer:
    """按超参数构造优化器"""
    if hyper.optimizer == "sgd":
        return MomentumSGD(shape, hyper.step_size, hyper.momentum)
    if hyper.optimizer == "adam":
        return AdamComplex(shape, hyper.step_size, hyper.beta1, hyper.beta2, hyper.adam_eps)
    raise InvalidArgumentError(f"unknown optimizer: {hyper.optimizer}")
