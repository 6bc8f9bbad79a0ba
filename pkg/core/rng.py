"""
随机数流派生

每个蒙特卡洛试验、每个 L 取值、每个方法都从 (seed, key...) 派生独立子流，
结果与线程数和调度顺序无关。
"""
import numpy as np

# 子流用途标签（spawn_key 中的第二层）
STREAM_CHANNEL = 0
STREAM_DATASET = 1
STREAM_TRAIN = 2
STREAM_OPTIMIZE = 3


def derive_rng(seed: int, *keys: int) -> np.random.Generator:
    """
    由种子和整数键路径派生独立随机数流

    Args:
        seed: 实验种子
        keys: 试验编号、用途标签等

    Returns:
        numpy Generator
    """
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.default_rng(sequence)

