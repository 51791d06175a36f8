"""Unit tests for Module registration and the trainable layers."""

import unittest

import numpy as np

from effnet_mini.exceptions import ConfigurationError, ShapeError
from effnet_mini.nn import ChannelAffine, Conv2d, Dense, Module, ModuleList, Parameter
from effnet_mini.tensor import Tensor


class TwoLayers(Module):
    def __init__(self):
        super().__init__()
        self.gain = Parameter(np.ones(2))
        self.first = Dense(2, 3)
        self.second = Dense(3, 1, bias=False)


class TestModule(unittest.TestCase):
    """Test cases for Module and ModuleList."""

    def test_named_parameters_follow_assignment_order(self):
        names = [name for name, _ in TwoLayers().named_parameters()]

        self.assertEqual(names, ["gain", "first.weight", "first.bias", "second.weight"])

    def test_module_list_registers_by_index(self):
        modules = ModuleList([Dense(2, 2), Dense(2, 1)])

        names = [name for name, _ in modules.named_parameters()]

        self.assertEqual(len(modules), 2)
        self.assertEqual(names, ["0.weight", "0.bias", "1.weight", "1.bias"])

    def test_zero_grad_clears_every_parameter(self):
        model = TwoLayers()
        for parameter in model.parameters():
            parameter.grad = np.ones(parameter.shape)

        model.zero_grad()

        self.assertTrue(all(p.grad is None for p in model.parameters()))

    def test_reset_is_deterministic_per_seed(self):
        first, second = TwoLayers(), TwoLayers()

        first.reset_parameters(np.random.default_rng(5))
        second.reset_parameters(np.random.default_rng(5))

        for (name, a), (_, b) in zip(first.state_dict().items(), second.state_dict().items()):
            np.testing.assert_array_equal(a, b, err_msg=name)

    def test_parameter_update_checks_shape(self):
        parameter = Parameter(np.zeros((2, 2)))

        with self.assertRaises(ShapeError):
            parameter.update(np.zeros(4))

        parameter.update(np.ones((2, 2)))
        np.testing.assert_array_equal(parameter.data, np.ones((2, 2)))


class TestLayers(unittest.TestCase):
    """Test cases for Conv2d, ChannelAffine and Dense."""

    def test_dense_parameter_count(self):
        """A 4→1 dense layer with bias holds five scalars."""
        layer = Dense(4, 1)

        self.assertEqual(sum(p.size for p in layer.parameters()), 5)

    def test_dense_init_within_fan_in_bound(self):
        layer = Dense(16, 8)

        layer.reset_parameters(np.random.default_rng(0))

        bound = np.sqrt(1.0 / 16)
        self.assertTrue(np.all(np.abs(layer.weight.data) <= bound))
        self.assertTrue(np.all(np.abs(layer.bias.data) <= bound))
        self.assertGreater(np.abs(layer.weight.data).max(), 0.0)

    def test_conv_has_no_bias(self):
        conv = Conv2d(4, 8, 3, padding=1)

        self.assertEqual([name for name, _ in conv.named_parameters()], ["weight"])
        self.assertEqual(conv.weight.shape, (8, 4, 3, 3))
        self.assertEqual(conv.fan_in, 36)

    def test_depthwise_conv_fan_in(self):
        conv = Conv2d(6, 6, 5, padding=2, groups=6)

        self.assertEqual(conv.weight.shape, (6, 1, 5, 5))
        self.assertEqual(conv.fan_in, 25)

    def test_conv_rejects_indivisible_groups(self):
        with self.assertRaises(ConfigurationError):
            Conv2d(6, 4, 3, groups=4)

    def test_conv_forward_shape(self):
        conv = Conv2d(3, 5, 3, stride=2, padding=1)
        conv.reset_parameters(np.random.default_rng(1))

        out = conv(Tensor(np.ones((2, 3, 8, 8))))

        self.assertEqual(out.shape, (2, 5, 4, 4))

    def test_channel_affine_starts_at_identity(self):
        affine = ChannelAffine(3)
        affine.reset_parameters(np.random.default_rng(2))
        x = np.random.default_rng(3).normal(size=(2, 3, 4, 4))

        out = affine(Tensor(x))

        np.testing.assert_array_equal(out.data, x)

    def test_channel_affine_scales_per_channel(self):
        affine = ChannelAffine(2)
        affine.scale.update(np.array([2.0, 3.0]))
        affine.shift.update(np.array([1.0, -1.0]))

        out = affine(Tensor(np.ones((1, 2, 2, 2))))

        np.testing.assert_array_equal(out.data[0, 0], np.full((2, 2), 3.0))
        np.testing.assert_array_equal(out.data[0, 1], np.full((2, 2), 2.0))


if __name__ == "__main__":
    unittest.main()
