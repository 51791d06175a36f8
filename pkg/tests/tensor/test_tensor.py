"""Unit tests for the autodiff Tensor."""

import unittest

import numpy as np

from effnet_mini.exceptions import NumericalError, UsageError
from effnet_mini.tensor import Tensor, describe_graph, is_grad_enabled, no_grad


class TestTensor(unittest.TestCase):
    """Test cases for Tensor and backward."""

    def test_construction_copies_and_freezes(self):
        """Data is float64, copied from the source and read-only."""
        # Arrange
        source = np.array([[1, 2, 3], [4, 5, 6]])

        # Act
        tensor = Tensor(source)
        source[0, 0] = 100

        # Assert
        self.assertEqual(tensor.shape, (2, 3))
        self.assertEqual(tensor.data.dtype, np.float64)
        self.assertEqual(tensor.data[0, 0], 1.0)
        with self.assertRaises(ValueError):
            tensor.data[0, 0] = 7.0

    def test_sum_gradient_is_ones(self):
        """loss = sum(x) gives grad 1 everywhere."""
        x = Tensor(np.arange(6.0).reshape(2, 3), requires_grad=True)

        x.sum().backward()

        np.testing.assert_array_equal(x.grad, np.ones((2, 3)))

    def test_square_gradient(self):
        """loss = sum(x*x) at [1, 2] gives [2, 4]."""
        x = Tensor([1.0, 2.0], requires_grad=True)

        (x * x).sum().backward()

        np.testing.assert_array_equal(x.grad, [2.0, 4.0])

    def test_broadcast_gradients_are_reduced(self):
        """Gradients of broadcast operands are summed back to their own shapes."""
        # Arrange
        x = Tensor(np.ones((3, 4)), requires_grad=True)
        bias = Tensor(np.zeros((4,)), requires_grad=True)
        scale = Tensor(np.full((3, 1), 2.0), requires_grad=True)

        # Act
        ((x + bias) * scale).sum().backward()

        # Assert
        np.testing.assert_array_equal(x.grad, np.full((3, 4), 2.0))
        np.testing.assert_array_equal(bias.grad, np.full((4,), 6.0))
        np.testing.assert_array_equal(scale.grad, np.full((3, 1), 4.0))

    def test_shared_subexpression_accumulates(self):
        """A tensor used twice receives the sum of both paths."""
        x = Tensor([3.0], requires_grad=True)
        y = x * 2.0

        (y + y * x).sum().backward()

        # d/dx (2x + 2x^2) = 2 + 4x
        np.testing.assert_allclose(x.grad, [14.0])

    def test_subtraction_and_negation(self):
        x = Tensor([1.0, 2.0], requires_grad=True)
        y = Tensor([5.0, 5.0], requires_grad=True)

        (x - y - (-x)).sum().backward()

        np.testing.assert_array_equal(x.grad, [2.0, 2.0])
        np.testing.assert_array_equal(y.grad, [-1.0, -1.0])

    def test_leaf_gradients_accumulate_across_graphs(self):
        """A second graph adds to an existing leaf grad until zero_grad."""
        x = Tensor([1.0, 1.0], requires_grad=True)

        x.sum().backward()
        x.sum().backward()
        self.assertEqual(x.grad.tolist(), [2.0, 2.0])

        x.zero_grad()
        self.assertIsNone(x.grad)

    def test_backward_non_scalar_raises(self):
        x = Tensor(np.ones((2, 2)), requires_grad=True)

        with self.assertRaises(UsageError):
            (x * 2.0).backward()

    def test_backward_twice_raises(self):
        """A graph is released after its first backward."""
        x = Tensor([1.0, 2.0], requires_grad=True)
        loss = (x * x).sum()
        loss.backward()

        with self.assertRaises(UsageError):
            loss.backward()

    def test_backward_on_leaf_raises(self):
        with self.assertRaises(UsageError):
            Tensor(1.0, requires_grad=True).backward()

    def test_non_finite_forward_raises(self):
        """Ops refuse to produce NaN or Inf."""
        x = Tensor([np.inf, 1.0])

        with self.assertRaises(NumericalError):
            x + 1.0

    def test_no_grad_records_nothing(self):
        x = Tensor([1.0, 2.0], requires_grad=True)

        with no_grad():
            self.assertFalse(is_grad_enabled())
            y = (x * x).sum()

        self.assertTrue(is_grad_enabled())
        self.assertFalse(y.requires_grad)
        self.assertTrue(y.is_leaf)

    def test_constants_do_not_receive_grad(self):
        x = Tensor([1.0, 2.0], requires_grad=True)
        constant = Tensor([3.0, 4.0])

        (x * constant).sum().backward()

        self.assertIsNone(constant.grad)
        np.testing.assert_array_equal(x.grad, [3.0, 4.0])

    def test_detach_cuts_the_graph(self):
        x = Tensor([2.0], requires_grad=True)

        detached = (x * x).detach()

        self.assertFalse(detached.requires_grad)
        self.assertEqual(detached.item(), 4.0)

    def test_item_requires_single_element(self):
        with self.assertRaises(UsageError):
            Tensor([1.0, 2.0]).item()

    def test_mean_and_reshape(self):
        x = Tensor(np.arange(6.0), requires_grad=True)

        loss = x.reshape(2, 3).sum(axis=0).mean()
        loss.backward()

        self.assertAlmostEqual(loss.item(), 5.0)
        np.testing.assert_allclose(x.grad, np.full(6, 1.0 / 3.0))

    def test_describe_graph_lists_ops_in_order(self):
        """Leaves come before the ops that consume them."""
        x = Tensor([1.0, 2.0], requires_grad=True)
        y = Tensor([3.0, 4.0], requires_grad=True)

        nodes = describe_graph((x * y).sum())

        kinds = [node.kind for node in nodes]
        self.assertEqual(kinds, ["leaf", "leaf", "Mul", "Sum"])
        self.assertEqual(nodes[2].input_ids, (0, 1))
        self.assertEqual(nodes[3].shape, ())


if __name__ == "__main__":
    unittest.main()
