"""Unit tests for the finite-difference gradient checker."""

import unittest

import numpy as np

from effnet_mini.exceptions import UsageError
from effnet_mini.nn.blocks import se_scale
from effnet_mini.tensor import Function, Tensor, activation, conv2d, dense, grad_check, reduce_mean_spatial, sigmoid


class SquareWithBiasedGradient(Function):
    """x*x whose backward is off by a constant 0.1"""

    def forward(self, x):
        self.x = x
        return x * x

    def backward(self, grad):
        return (grad * 2.0 * self.x + 0.1,)


class TestGradCheck(unittest.TestCase):
    """Test cases for grad_check."""

    def test_linear_sum_is_nearly_exact(self):
        vector = np.random.default_rng(0).normal(size=10)

        result = grad_check(lambda t: t[0].sum(), [vector])

        self.assertLess(result.max_relative_error, 1e-8)
        self.assertEqual(len(result.per_input_errors), 1)

    def test_sigmoid_of_convolution(self):
        """Both the input and the kernel gradients agree with central differences."""
        # Arrange
        rng = np.random.default_rng(1)
        x = rng.normal(size=(1, 2, 5, 5))
        kernel = rng.normal(size=(3, 2, 3, 3))

        # Act
        result = grad_check(lambda t: sigmoid(conv2d(t[0], t[1], padding=1)).sum(), [x, kernel])

        # Assert
        self.assertLess(result.max_relative_error, 1e-4)
        self.assertEqual(len(result.per_input_errors), 2)

    def test_full_squeeze_excitation_block(self):
        # Arrange
        rng = np.random.default_rng(2)
        features = rng.normal(size=(1, 4, 6, 6))
        reduce = rng.normal(size=(1, 4))
        expand = rng.normal(size=(4, 1))
        projection = rng.normal(size=(1, 4, 6, 6))

        def builder(t):
            squeezed = reduce_mean_spatial(t[0]).reshape(1, 4)
            weights = activation(dense(activation(dense(squeezed, t[1]), "relu"), t[2]), "sigmoid")
            return (se_scale(t[0], weights) * projection).sum()

        # Act
        result = grad_check(builder, [features, reduce, expand])

        # Assert
        self.assertLess(result.max_relative_error, 1e-4)

    def test_detects_injected_gradient_bug(self):
        """An analytic gradient shifted by 0.1 is reported."""
        x = np.array([0.3, -0.7, 1.2])

        result = grad_check(lambda t: SquareWithBiasedGradient.apply(t[0]).sum(), [x])

        self.assertGreater(result.max_relative_error, 1e-2)
        self.assertFalse(result.passed())
        self.assertEqual(result.worst_input, 0)

    def test_inputs_are_not_modified(self):
        x = np.array([1.0, 2.0])

        grad_check(lambda t: (t[0] * t[0]).sum(), [x])

        np.testing.assert_array_equal(x, [1.0, 2.0])

    def test_non_scalar_builder_raises(self):
        with self.assertRaises(UsageError):
            grad_check(lambda t: t[0] * 2.0, [np.ones(3)])

    def test_non_positive_epsilon_raises(self):
        with self.assertRaises(UsageError):
            grad_check(lambda t: t[0].sum(), [np.ones(3)], epsilon=0.0)

    def test_unused_input_has_zero_gradient(self):
        result = grad_check(lambda t: t[0].sum(), [np.ones(2), np.ones(2)])

        self.assertEqual(result.per_input_errors[1], 0.0)


if __name__ == "__main__":
    unittest.main()
