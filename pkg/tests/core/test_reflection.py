"""
离散相位字母表与反射向量测试

测试覆盖:
- 相位量化（圆周距离、平局规则、幂等）
- ReflectionVector 构造与校验
- 单位换算与随机数流派生
"""
import math

import numpy as np
import pytest

from core.exceptions import InvalidArgumentError
from core.reflection import (
    ReflectionVector,
    level_phasors,
    phase_alphabet,
    phase_step,
    quantize_levels,
    quantize_to_alphabet,
    reflection_matrix,
)
from core.rng import STREAM_CHANNEL, STREAM_DATASET, derive_rng
from core.units import db_to_linear, dbm_to_watts, linear_to_db, watts_to_dbm


class TestQuantize:
    """相位量化测试"""

    def test_on_grid_value_unchanged(self):
        """测试网格点 2π 保持不变"""
        assert quantize_to_alphabet(2 * math.pi, 1) == pytest.approx(2 * math.pi)

    def test_circular_distance(self):
        """测试 0.3π 在 μ=1 时量化到 2π（圆周距离更近）"""
        assert quantize_to_alphabet(0.3 * math.pi, 1) == pytest.approx(2 * math.pi)

    def test_mu2_nearest(self):
        """测试 1.9 rad 在 μ=2 时量化到 π/2"""
        assert quantize_to_alphabet(1.9, 2) == pytest.approx(math.pi / 2)

    def test_tie_goes_to_smaller_value(self):
        """测试平局时取较小网格值"""
        # π/2 到 π 与到 2π 的圆周距离相等
        assert quantize_to_alphabet(math.pi / 2, 1) == pytest.approx(math.pi)
        # 3π/2 到 π 与到 2π 距离相等
        assert quantize_to_alphabet(1.5 * math.pi, 1) == pytest.approx(math.pi)

    def test_zero_maps_to_two_pi(self):
        """测试 0 与 2π 视为同一网格点"""
        assert quantize_levels(0.0, 2) == 4
        assert quantize_levels(-2 * math.pi, 3) == 8

    def test_idempotent(self):
        """测试量化幂等"""
        rng = np.random.default_rng(3)
        phases = rng.uniform(-10, 10, size=200)
        for bits in (1, 2, 3):
            once = quantize_to_alphabet(phases, bits)
            twice = quantize_to_alphabet(once, bits)
            np.testing.assert_allclose(once, twice)

    def test_invalid_bits(self):
        """测试 μ < 1 报错"""
        with pytest.raises(InvalidArgumentError):
            phase_step(0)


class TestAlphabet:
    """字母表测试"""

    def test_alphabet_values(self):
        """测试 Φ_2 = {π/2, π, 3π/2, 2π}"""
        np.testing.assert_allclose(
            phase_alphabet(2), [math.pi / 2, math.pi, 1.5 * math.pi, 2 * math.pi]
        )

    def test_axis_phasors_exact(self):
        """测试轴上的单位复数为精确值"""
        np.testing.assert_array_equal(level_phasors(2), [1j, -1, -1j, 1])


class TestReflectionVector:
    """反射向量测试"""

    def test_extended_leading_one(self):
        """测试扩展向量首元素为 1 且全部单位模"""
        v = ReflectionVector(np.array([1, 2, 3, 4]), 2)
        assert v.extended[0] == 1
        np.testing.assert_allclose(np.abs(v.extended), 1.0)
        assert v.n_elements == 4

    def test_from_phases_quantizes(self):
        """测试由相位构造时先量化"""
        v = ReflectionVector.from_phases([0.1, 3.0], 1)
        np.testing.assert_array_equal(v.levels, [2, 1])
        np.testing.assert_allclose(v.phases, [2 * math.pi, math.pi])

    def test_uniform_default_zero_phase(self):
        """测试 uniform 缺省为全 1 扩展向量"""
        v = ReflectionVector.uniform(3, 2)
        np.testing.assert_array_equal(v.extended, np.ones(4))

    def test_level_out_of_range(self):
        """测试下标越界报错"""
        with pytest.raises(InvalidArgumentError):
            ReflectionVector(np.array([0, 1]), 1)
        with pytest.raises(InvalidArgumentError):
            ReflectionVector(np.array([3]), 1)

    def test_immutable(self):
        """测试下标数组只读"""
        v = ReflectionVector(np.array([1, 2]), 1)
        with pytest.raises(ValueError):
            v.levels[0] = 2

    def test_equality_and_hash(self):
        """测试相等与哈希按 (μ, 下标)"""
        a = ReflectionVector(np.array([1, 2]), 2)
        b = ReflectionVector.from_phases([math.pi / 2, math.pi], 2)
        assert a == b
        assert hash(a) == hash(b)
        assert a != ReflectionVector(np.array([1, 2]), 3)

    def test_reflection_matrix(self):
        """测试堆叠为 L×(N+1)"""
        matrix = reflection_matrix([ReflectionVector.uniform(2, 1), ReflectionVector(np.array([1, 1]), 1)])
        np.testing.assert_array_equal(matrix, [[1, 1, 1], [1, -1, -1]])


class TestUnits:
    """单位换算测试"""

    def test_dbm_watts(self):
        """测试 30 dBm = 1 W，-90 dBm = 1e-12 W"""
        assert dbm_to_watts(30.0) == pytest.approx(1.0)
        assert dbm_to_watts(-90.0) == pytest.approx(1e-12)
        assert watts_to_dbm(1e-3) == pytest.approx(0.0)

    def test_db_linear(self):
        """测试 dB 与线性值互换"""
        assert db_to_linear(10.0) == pytest.approx(10.0)
        assert linear_to_db(100.0) == pytest.approx(20.0)
        assert linear_to_db(0.0) == float("-inf")


class TestRng:
    """随机数流派生测试"""

    def test_same_keys_same_stream(self):
        """测试相同键得到相同序列"""
        a = derive_rng(5, 0, STREAM_CHANNEL).standard_normal(8)
        b = derive_rng(5, 0, STREAM_CHANNEL).standard_normal(8)
        np.testing.assert_array_equal(a, b)

    def test_different_keys_differ(self):
        """测试不同用途标签得到不同序列"""
        a = derive_rng(5, 0, STREAM_CHANNEL).standard_normal(8)
        b = derive_rng(5, 0, STREAM_DATASET).standard_normal(8)
        c = derive_rng(5, 1, STREAM_CHANNEL).standard_normal(8)
        assert not np.array_equal(a, b)
        assert not np.array_equal(a, c)
