"""Unit tests for the counter-based random streams."""

import unittest

import numpy as np

from effnet_mini.utils.rng import derive_seed, substream


class TestRandomStreams(unittest.TestCase):
    """Test cases for substream and derive_seed."""

    def test_same_key_same_draws(self):
        np.testing.assert_array_equal(substream(3, 7).random(5), substream(3, 7).random(5))

    def test_streams_differ_by_index_and_seed(self):
        base = substream(3, 7).random(5)

        self.assertFalse(np.array_equal(base, substream(3, 8).random(5)))
        self.assertFalse(np.array_equal(base, substream(4, 7).random(5)))

    def test_stream_does_not_depend_on_other_streams(self):
        expected = substream(1, 5).integers(0, 100, size=10)
        for index in range(5):
            substream(1, index).random(1000)

        np.testing.assert_array_equal(substream(1, 5).integers(0, 100, size=10), expected)

    def test_derive_seed_is_stable_and_word_sensitive(self):
        self.assertEqual(derive_seed(0, 4), derive_seed(0, 4))
        self.assertNotEqual(derive_seed(0, 4), derive_seed(0, 3))
        self.assertNotEqual(derive_seed(0, 1, 2), derive_seed(0, 2, 1))
        self.assertLess(derive_seed(123, 9), 2**64)

    def test_negative_seed_is_masked(self):
        self.assertEqual(substream(-1, 0).random(), substream(2**64 - 1, 0).random())


if __name__ == "__main__":
    unittest.main()
