"""Unit tests for random center cropping, flips and normalization."""

import unittest

import numpy as np
import pytest

from effnet_mini.augment import channel_stats, crop_at, draw_crop_offsets, normalize, random_center_crop, random_flip
from effnet_mini.exceptions import ConfigurationError, UsageError
from effnet_mini.models import AugmentConfig, ImagePatch
from effnet_mini.utils.rng import substream


def random_patch(seed: int = 0, side: int = 96) -> ImagePatch:
    pixels = np.random.default_rng(seed).integers(1, 256, size=(side, side, 3), dtype=np.uint8)
    return ImagePatch(pixels, 1, f"patch-{seed}")


def contains_center(output: np.ndarray, original: np.ndarray, offsets) -> bool:
    row, col = offsets
    top, left = 8 + 32 - row, 8 + 32 - col
    return np.array_equal(output[top : top + 32, left : left + 32], original[32:64, 32:64])


class TestRandomCenterCrop(unittest.TestCase):
    """Test cases for random center cropping."""

    def setUp(self):
        self.cfg = AugmentConfig()
        self.patch = random_patch()

    def test_zero_offsets_shift_content_down_right(self):
        out = crop_at(self.patch, self.cfg, (0, 0)).pixels

        self.assertEqual(out.shape, (96, 96, 3))
        np.testing.assert_array_equal(out[:8], 0)
        np.testing.assert_array_equal(out[:, :8], 0)
        np.testing.assert_array_equal(out[8:, 8:], self.patch.pixels[:88, :88])

    def test_offsets_sixteen_move_center_to_twenty_four(self):
        out = crop_at(self.patch, self.cfg, (16, 16)).pixels

        np.testing.assert_array_equal(out[24, 24], self.patch.pixels[32, 32])
        np.testing.assert_array_equal(out[24:56, 24:56], self.patch.pixels[32:64, 32:64])

    def test_random_crop_keeps_size(self):
        rng = substream(1, 0)
        for _ in range(20):
            self.assertEqual(random_center_crop(self.patch, self.cfg, rng).pixels.shape, (96, 96, 3))

    def test_center_preserved_and_border_loss_bounded(self):
        rng = substream(2, 0)
        for _ in range(500):
            offsets = draw_crop_offsets(self.cfg, rng)
            out = crop_at(self.patch, self.cfg, offsets).pixels
            self.assertTrue(contains_center(out, self.patch.pixels, offsets))
            self.assertTrue(all(0 <= o <= 16 for o in offsets))

    @pytest.mark.slow
    def test_center_preserved_over_ten_thousand_draws(self):
        rng = substream(3, 0)
        for trial in range(10_000):
            patch = random_patch(seed=trial + 1)
            offsets = draw_crop_offsets(self.cfg, rng)
            out = crop_at(patch, self.cfg, offsets).pixels
            self.assertTrue(contains_center(out, patch.pixels, offsets), f"trial {trial} offsets {offsets}")

    @pytest.mark.slow
    def test_offset_pairs_are_uniform(self):
        """Each of the 17×17 pairs occurs with frequency 1/289 within five standard deviations."""
        # Arrange
        draws = 1_000_000
        rng = substream(4, 0)
        counts = np.zeros((17, 17), dtype=np.int64)

        # Act
        for _ in range(draws):
            row, col = draw_crop_offsets(self.cfg, rng)
            counts[row, col] += 1

        # Assert
        p = 1.0 / 289
        sigma = np.sqrt(draws * p * (1 - p))
        self.assertLess(np.abs(counts - draws * p).max(), 5 * sigma)

    def test_reflect_padding(self):
        cfg = AugmentConfig(padding_mode="reflect")

        out = crop_at(self.patch, cfg, (0, 0)).pixels

        np.testing.assert_array_equal(out[0, 8], self.patch.pixels[8, 0])

    def test_crop_larger_than_canvas(self):
        with self.assertRaises(ConfigurationError):
            draw_crop_offsets(AugmentConfig(), substream(0, 0), height=64, width=64)


class TestRandomFlip(unittest.TestCase):
    """Test cases for random flips."""

    def setUp(self):
        self.patch = random_patch(5)

    def test_zero_probability_is_identity(self):
        out = random_flip(self.patch, 0.0, 0.0, substream(0, 0))

        np.testing.assert_array_equal(out.pixels, self.patch.pixels)

    def test_certain_flips_reverse_columns_and_rows(self):
        horizontal = random_flip(self.patch, 1.0, 0.0, substream(0, 0))
        vertical = random_flip(self.patch, 0.0, 1.0, substream(0, 0))

        np.testing.assert_array_equal(horizontal.pixels, self.patch.pixels[:, ::-1])
        np.testing.assert_array_equal(vertical.pixels, self.patch.pixels[::-1])

    def test_flips_are_involutions_and_commute(self):
        rng = substream(0, 0)

        twice = random_flip(random_flip(self.patch, 1.0, 0.0, rng), 1.0, 0.0, rng)
        hv = random_flip(random_flip(self.patch, 1.0, 0.0, rng), 0.0, 1.0, rng)
        vh = random_flip(random_flip(self.patch, 0.0, 1.0, rng), 1.0, 0.0, rng)

        np.testing.assert_array_equal(twice.pixels, self.patch.pixels)
        np.testing.assert_array_equal(hv.pixels, vh.pixels)

    def test_fixed_seed_repeats_decisions(self):
        def decisions(seed):
            rng = substream(seed, 0)
            outcomes = []
            for _ in range(50):
                out = random_flip(self.patch, 0.5, 0.5, rng).pixels
                outcomes.append((out[0, 0] == self.patch.pixels[0, -1]).all())
            return outcomes

        self.assertEqual(decisions(9), decisions(9))

    def test_probability_outside_unit_interval(self):
        with self.assertRaises(ConfigurationError):
            random_flip(self.patch, 1.2, 0.0, substream(0, 0))


class TestNormalization(unittest.TestCase):
    """Test cases for normalize and channel_stats."""

    def test_image_equal_to_mean_normalizes_to_zero(self):
        patch = ImagePatch(np.tile(np.array([10, 20, 30], dtype=np.uint8), (4, 4, 1)), 0, "flat")

        out = normalize(patch, (10.0, 20.0, 30.0), (2.0, 2.0, 2.0))

        np.testing.assert_array_equal(out.data, np.zeros((3, 4, 4)))

    def test_identity_scaling_transposes_layout(self):
        patch = random_patch(6, side=8)

        out = normalize(patch, (0.0, 0.0, 0.0), (1.0, 1.0, 1.0))

        np.testing.assert_array_equal(out.data, patch.pixels.transpose(2, 0, 1).astype(np.float64))

    def test_matches_scalar_loop(self):
        patch = random_patch(7, side=6)
        mean, std = (120.0, 110.0, 100.0), (50.0, 40.0, 30.0)

        out = normalize(patch, mean, std).data

        for c in range(3):
            for i in range(6):
                for j in range(6):
                    self.assertAlmostEqual(out[c, i, j], (float(patch.pixels[i, j, c]) - mean[c]) / std[c], places=12)

    def test_non_positive_std(self):
        with self.assertRaises(ConfigurationError):
            normalize(random_patch(side=4), (0.0, 0.0, 0.0), (1.0, -1.0, 1.0))

    def test_two_point_population_std(self):
        patches = [
            ImagePatch(np.zeros((1, 1, 3), dtype=np.uint8), 0, "zero"),
            ImagePatch(np.ones((1, 1, 3), dtype=np.uint8), 1, "one"),
        ]

        mean, std = channel_stats(patches)

        self.assertEqual(mean, (0.5, 0.5, 0.5))
        self.assertEqual(std, (0.5, 0.5, 0.5))

    def test_constant_dataset_clamps_std_with_warning(self):
        patches = [ImagePatch(np.full((4, 4, 3), 7, dtype=np.uint8), 0, f"c{i}") for i in range(3)]

        with self.assertLogs("effnet_mini.augment.transforms", level="WARNING"):
            mean, std = channel_stats(patches)

        self.assertEqual(mean, (7.0, 7.0, 7.0))
        self.assertEqual(std, (1e-6, 1e-6, 1e-6))

    def test_matches_two_pass_oracle(self):
        patches = [random_patch(seed, side=12) for seed in range(50)]
        pixels = np.concatenate([p.pixels.reshape(-1, 3).astype(np.float64) for p in patches])

        mean, std = channel_stats(patches)

        np.testing.assert_allclose(mean, pixels.mean(axis=0), rtol=0, atol=1e-10)
        np.testing.assert_allclose(std, pixels.std(axis=0), rtol=0, atol=1e-10)

    def test_empty_dataset(self):
        with self.assertRaises(UsageError):
            channel_stats([])


if __name__ == "__main__":
    unittest.main()
