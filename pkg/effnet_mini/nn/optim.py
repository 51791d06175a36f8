"""Adam optimizer over Module parameters"""

import logging
from typing import Dict, List, Sequence

import numpy as np

from effnet_mini.exceptions import CheckpointError
from effnet_mini.nn.module import Parameter


class Adam:
    """Adam with bias-corrected moment estimates; the learning rate is passed per step"""

    def __init__(self, parameters: Sequence[Parameter], beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.logger = logging.getLogger("effnet_mini.nn.Adam")
        self.parameters: List[Parameter] = list(parameters)
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.step_count = 0
        self.first_moments = [np.zeros(p.shape) for p in self.parameters]
        self.second_moments = [np.zeros(p.shape) for p in self.parameters]

    def zero_grad(self) -> None:
        for parameter in self.parameters:
            parameter.zero_grad()

    def step(self, lr: float) -> None:
        self.step_count += 1
        correction1 = 1.0 - self.beta1**self.step_count
        correction2 = 1.0 - self.beta2**self.step_count
        for index, parameter in enumerate(self.parameters):
            if parameter.grad is None:
                continue
            grad = parameter.grad
            m = self.beta1 * self.first_moments[index] + (1.0 - self.beta1) * grad
            v = self.beta2 * self.second_moments[index] + (1.0 - self.beta2) * grad * grad
            self.first_moments[index] = m
            self.second_moments[index] = v
            m_hat = m / correction1
            v_hat = v / correction2
            parameter.update(parameter.data - lr * m_hat / (np.sqrt(v_hat) + self.eps))

    def state_dict(self) -> Dict[str, object]:
        return {
            "step_count": self.step_count,
            "first_moments": [m.copy() for m in self.first_moments],
            "second_moments": [v.copy() for v in self.second_moments],
        }

    def load_state_dict(self, state: Dict[str, object]) -> None:
        first, second = state["first_moments"], state["second_moments"]
        if len(first) != len(self.parameters) or len(second) != len(self.parameters):
            raise CheckpointError(
                f"Optimizer state holds {len(first)} moments for {len(self.parameters)} parameters"
            )
        for index, parameter in enumerate(self.parameters):
            if first[index].shape != parameter.shape or second[index].shape != parameter.shape:
                raise CheckpointError(
                    f"Optimizer moment {index} has shape {first[index].shape}, expected {parameter.shape}"
                )
        self.step_count = int(state["step_count"])
        self.first_moments = [np.array(m, dtype=np.float64) for m in first]
        self.second_moments = [np.array(v, dtype=np.float64) for v in second]
        self.logger.debug(f"Restored optimizer state at step {self.step_count}")
