"""
宽带信道模型测试

测试覆盖:
- 路径损耗
- 级联抽头卷积与 CIR 矩阵拼接
- 自相关矩阵（Hermitian、半正定、秩 ≤ K）
- 信道实现生成的确定性与各抽头经验功率
- 频域响应（单抽头平坦、线性、Parseval）
"""
import numpy as np
import pytest

from channel.geometry import irs_element_positions, link_distances, los_phasors
from channel.ofdm import channel_frequency_response, dft_matrix
from channel.pathloss import LinkType, path_loss_db
from channel.realization import (
    ChannelRealization,
    assemble_cir_matrix,
    autocorrelation,
    cascade_taps,
    exponential_pdp,
    generate_realization,
    link_gains,
)
from config.system_config import SystemConfig
from core.exceptions import InvalidArgumentError
from core.reflection import ReflectionVector
from core.rng import STREAM_CHANNEL, derive_rng


def _numerical_rank(matrix: np.ndarray) -> int:
    eigvals = np.linalg.eigvalsh(matrix)
    return int(np.sum(eigvals > 1e-9 * eigvals.max()))


class TestPathLoss:
    """路径损耗测试"""

    def test_direct_link(self):
        """测试直连链路 10 m → 70 dB"""
        assert path_loss_db(LinkType.DIRECT, 10.0) == pytest.approx(70.0)

    def test_bs_irs_unit_distance(self):
        """测试 BS-IRS 链路 1 m → 30 dB"""
        assert path_loss_db("bs_irs", 1.0) == pytest.approx(30.0)

    def test_irs_user_link(self):
        """测试 IRS-用户链路 100 m → 70 dB"""
        assert path_loss_db("irs_user", 100.0) == pytest.approx(70.0)

    @pytest.mark.parametrize("distance", [0.0, -1.0])
    def test_non_positive_distance(self, distance):
        """测试非正距离报错"""
        with pytest.raises(InvalidArgumentError):
            path_loss_db("direct", distance)

    def test_unknown_link(self):
        """测试未知链路类型"""
        with pytest.raises(InvalidArgumentError):
            path_loss_db("satellite", 1.0)


class TestCascadeTaps:
    """级联抽头测试"""

    def test_delta(self):
        """测试冲激卷积"""
        np.testing.assert_allclose(cascade_taps([1, 0], [1, 0, 0]), [1, 0, 0, 0])

    def test_binomial(self):
        """测试 [1,1]*[1,1] = [1,2,1]"""
        np.testing.assert_allclose(cascade_taps([1, 1], [1, 1]), [1, 2, 1])

    def test_scalar_scale(self):
        """测试标量缩放"""
        np.testing.assert_allclose(cascade_taps([1, 1j], [2]), [2, 2j])

    def test_empty_input(self):
        """测试空输入报错"""
        with pytest.raises(InvalidArgumentError):
            cascade_taps([], [1])


class TestCirMatrix:
    """CIR 矩阵拼接测试"""

    def test_direct_only(self):
        """测试无 IRS 列时只有直连列"""
        cir = assemble_cir_matrix(np.array([1.0]), np.zeros((0, 1)), 4)
        assert cir.shape == (4, 1)
        np.testing.assert_allclose(cir[:, 0], [1, 0, 0, 0])

    def test_two_columns(self):
        """测试直连 [1,2] 与级联 [3] 的零填充"""
        cir = assemble_cir_matrix(np.array([1.0, 2.0]), np.array([[3.0]]), 3)
        np.testing.assert_allclose(cir, [[1, 3], [2, 0], [0, 0]])

    def test_random_rows_beyond_k_zero(self, small_config):
        """测试第 K 行之后全为零"""
        for seed in range(5):
            realization = generate_realization(small_config, np.random.default_rng(seed))
            k = realization.max_taps
            assert np.all(realization.cir_matrix[k:] == 0)
            assert realization.cir_matrix.shape == (16, 5)
            gain = realization.gain_matrix()
            assert gain.shape == (k, 5)
            np.testing.assert_allclose(
                realization.autocorr,
                (small_config.tx_power / 16) * gain.conj().T @ gain,
                atol=1e-12 * np.abs(realization.autocorr).max(),
            )

    def test_tap_length_exceeds_m(self):
        """测试抽头数超过 M 报错"""
        with pytest.raises(InvalidArgumentError):
            assemble_cir_matrix(np.ones(5), np.ones((1, 2)), 4)
        with pytest.raises(InvalidArgumentError):
            assemble_cir_matrix(np.ones(2), np.ones((1, 5)), 4)


class TestAutocorrelation:
    """自相关矩阵测试"""

    def test_scalar(self):
        """测试 G=[[1],[0]], P=2, M=2 → [[1]]"""
        np.testing.assert_allclose(autocorrelation(np.array([[1.0], [0.0]]), 2.0, 2), [[1.0]])

    def test_all_ones(self):
        """测试 P=M 时 G=[[1,1],[0,0]] → 全 1"""
        np.testing.assert_allclose(
            autocorrelation(np.array([[1.0, 1.0], [0.0, 0.0]]), 2.0, 2), np.ones((2, 2))
        )

    def test_random_hermitian_psd(self):
        """测试随机 G 的 R 为 Hermitian 半正定"""
        rng = np.random.default_rng(0)
        cir = rng.standard_normal((16, 5)) + 1j * rng.standard_normal((16, 5))
        autocorr = autocorrelation(cir, 1.0, 16)
        assert np.max(np.abs(autocorr - autocorr.conj().T)) < 1e-12
        assert np.linalg.eigvalsh(autocorr).min() > -1e-12


class TestRealization:
    """信道实现生成测试"""

    def test_default_config_rank(self):
        """测试默认配置下 rank(R) ≤ K = 6"""
        config = SystemConfig()
        for trial in range(3):
            realization = generate_realization(config, derive_rng(1, trial, STREAM_CHANNEL))
            assert realization.autocorr.shape == (33, 33)
            assert _numerical_rank(realization.autocorr) <= 6

    def test_narrowband_rank_one(self):
        """测试单抽头（窄带）时 R 秩为 1"""
        config = SystemConfig(
            n_elements=4, irs_rows=2, irs_cols=2, n_subcarriers=8, n_rs_subcarriers=4,
            taps_direct=1, taps_bs_irs=1, taps_irs_user=1, path_loss_enabled=False,
        )
        realization = generate_realization(config, np.random.default_rng(2))
        row = realization.cir_matrix[:1]
        expected = (config.tx_power / config.n_subcarriers) * row.conj().T @ row
        np.testing.assert_allclose(realization.autocorr, expected, atol=1e-15)
        assert _numerical_rank(realization.autocorr) == 1

    def test_los_tap_full_power_single_tap(self):
        """测试 K3=1 时 LoS 抽头占全部链路功率"""
        config = SystemConfig(
            n_elements=4, irs_rows=2, irs_cols=2, n_subcarriers=8, n_rs_subcarriers=4,
            taps_direct=1, taps_bs_irs=1, taps_irs_user=1, path_loss_enabled=False,
        )
        realization = generate_realization(config, np.random.default_rng(2))
        np.testing.assert_allclose(np.abs(realization.irs_user[:, 0]), 1.0)

    def test_deterministic(self, small_config):
        """测试相同种子得到逐位相同的实现"""
        a = generate_realization(small_config, derive_rng(4, 0, STREAM_CHANNEL))
        b = generate_realization(small_config, derive_rng(4, 0, STREAM_CHANNEL))
        np.testing.assert_array_equal(a.cir_matrix, b.cir_matrix)
        np.testing.assert_array_equal(a.autocorr, b.autocorr)

    def test_immutable_arrays(self, small_config):
        """测试实现中的数组只读"""
        realization = generate_realization(small_config, np.random.default_rng(0))
        with pytest.raises(ValueError):
            realization.autocorr[0, 0] = 0

    def test_from_taps_mismatch(self):
        """测试 BS-IRS 与 IRS-用户单元数不一致报错"""
        with pytest.raises(InvalidArgumentError):
            ChannelRealization.from_taps(np.ones(1), np.ones((2, 1)), np.ones((3, 1)), 4, 1.0)

    def test_empirical_tap_power(self, small_config):
        """测试 10⁴ 次实现的各抽头平均功率与 10^{-β/10}·ζ_k 相差不超过 5%"""
        rng = np.random.default_rng(21)
        n_draws = 10_000
        direct = np.zeros(small_config.taps_direct)
        bs_irs = np.zeros(small_config.taps_bs_irs)
        nlos = np.zeros(small_config.taps_irs_user - 1)
        for _ in range(n_draws):
            realization = generate_realization(small_config, rng)
            direct += np.abs(realization.direct) ** 2
            bs_irs += np.mean(np.abs(realization.bs_irs) ** 2, axis=0)
            nlos += np.mean(np.abs(realization.irs_user[:, 1:]) ** 2, axis=0)

        gains = link_gains(small_config)
        kappa = small_config.rician_factor
        np.testing.assert_allclose(
            direct / n_draws,
            gains["direct"] * exponential_pdp(small_config.taps_direct, small_config.pdp_decay),
            rtol=0.05,
        )
        np.testing.assert_allclose(
            bs_irs / n_draws,
            gains["bs_irs"] * exponential_pdp(small_config.taps_bs_irs, small_config.pdp_decay),
            rtol=0.05,
        )
        np.testing.assert_allclose(
            nlos / n_draws,
            gains["irs_user"] / (1 + kappa)
            * exponential_pdp(small_config.taps_irs_user - 1, small_config.effective_nlos_decay),
            rtol=0.05,
        )
        los_power = np.abs(realization.irs_user[:, 0]) ** 2
        np.testing.assert_allclose(los_power, gains["irs_user"] * kappa / (1 + kappa), rtol=1e-12)

    def test_pdp_normalized(self):
        """测试功率时延谱归一化且递减"""
        profile = exponential_pdp(4, 2.0)
        assert profile.sum() == pytest.approx(1.0)
        assert np.all(np.diff(profile) < 0)


class TestGeometry:
    """几何测试"""

    def test_element_positions(self, small_config):
        """测试参考单元位于左下角，列沿 y、行沿 z"""
        positions = irs_element_positions(small_config)
        spacing = small_config.element_spacing * small_config.wavelength_m
        np.testing.assert_allclose(positions[0], small_config.irs_ref_pos)
        np.testing.assert_allclose(positions[1] - positions[0], [0, spacing, 0])
        np.testing.assert_allclose(positions[2] - positions[0], [0, 0, spacing])

    def test_link_distances(self):
        """测试参考单元到用户的距离"""
        distances = link_distances(SystemConfig())
        assert distances["irs_user"] == pytest.approx(np.sqrt(8.0))

    def test_los_phasors_unit(self, small_config):
        """测试 LoS 相位为单位模"""
        np.testing.assert_allclose(np.abs(los_phasors(small_config)), 1.0)


class TestFrequencyResponse:
    """频域响应测试"""

    def test_single_tap_flat(self):
        """测试单抽头信道频率平坦"""
        cir = np.zeros((8, 1), dtype=complex)
        cir[0, 0] = 0.5 - 0.25j
        response = channel_frequency_response(cir, np.array([1.0]))
        np.testing.assert_allclose(response, np.full(8, 0.5 - 0.25j))

    def test_all_ones_is_dft_of_row_sums(self):
        """测试全 1 反射下 CFR 为行和的 DFT"""
        rng = np.random.default_rng(1)
        cir = rng.standard_normal((8, 3)) + 1j * rng.standard_normal((8, 3))
        v = ReflectionVector.uniform(2, 2)
        np.testing.assert_allclose(
            channel_frequency_response(cir, v), dft_matrix(8) @ cir.sum(axis=1), atol=1e-12
        )

    def test_parseval(self):
        """测试 ‖h‖² = M·v^H G^H G v"""
        rng = np.random.default_rng(2)
        cir = rng.standard_normal((16, 5)) + 1j * rng.standard_normal((16, 5))
        v = ReflectionVector(rng.integers(1, 5, size=4), 2)
        response = channel_frequency_response(cir, v)
        gram = cir.conj().T @ cir
        expected = 16 * np.real(np.vdot(v.extended, gram @ v.extended))
        assert np.sum(np.abs(response) ** 2) == pytest.approx(expected, rel=1e-9)

    def test_subset_indices(self):
        """测试限制到子载波子集"""
        rng = np.random.default_rng(3)
        cir = rng.standard_normal((8, 2)) + 0j
        v = np.array([1.0, -1.0])
        full = channel_frequency_response(cir, v)
        np.testing.assert_allclose(channel_frequency_response(cir, v, [0, 4]), full[[0, 4]])

    def test_out_of_range_index(self):
        """测试越界下标报错"""
        with pytest.raises(InvalidArgumentError):
            channel_frequency_response(np.ones((4, 1)), np.array([1.0]), [4])

    def test_length_mismatch(self):
        """测试反射向量长度不匹配"""
        with pytest.raises(InvalidArgumentError):
            channel_frequency_response(np.ones((4, 2)), np.array([1.0]))
