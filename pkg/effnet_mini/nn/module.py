"""Parameter containers for trainable layers"""

from collections import OrderedDict
from typing import Any, Dict, Iterable, Iterator, List, Tuple

import numpy as np

from effnet_mini.exceptions import ShapeError
from effnet_mini.tensor import Tensor


class Parameter(Tensor):
    """A leaf tensor that always requires grad and can be replaced by the optimizer"""

    def __init__(self, data: Any):
        super().__init__(data, requires_grad=True)

    def update(self, values: np.ndarray) -> None:
        """Swap in new values of the same shape (used by optimizers and checkpoint restore)"""
        values = np.array(values, dtype=np.float64)
        if values.shape != self.shape:
            raise ShapeError(f"Parameter update shape {values.shape} does not match {self.shape}")
        values.flags.writeable = False
        self.data = values


class Module:
    """Base class for layers and blocks.

    Parameters and sub-modules assigned as attributes are registered in assignment
    order, which fixes the order of ``named_parameters`` and therefore of
    initialization and checkpoint records.
    """

    def __init__(self):
        object.__setattr__(self, "_parameters", OrderedDict())
        object.__setattr__(self, "_modules", OrderedDict())

    def __setattr__(self, name: str, value: Any) -> None:
        if isinstance(value, Parameter):
            self._parameters[name] = value
        elif isinstance(value, Module):
            self._modules[name] = value
        object.__setattr__(self, name, value)

    def named_parameters(self, prefix: str = "") -> Iterator[Tuple[str, Parameter]]:
        for name, parameter in self._parameters.items():
            yield f"{prefix}{name}", parameter
        for name, module in self._modules.items():
            yield from module.named_parameters(prefix=f"{prefix}{name}.")

    def parameters(self) -> List[Parameter]:
        return [parameter for _, parameter in self.named_parameters()]

    def state_dict(self) -> Dict[str, np.ndarray]:
        return OrderedDict((name, parameter.data) for name, parameter in self.named_parameters())

    def zero_grad(self) -> None:
        for parameter in self.parameters():
            parameter.zero_grad()

    def reset_parameters(self, rng: np.random.Generator) -> None:
        for module in self._modules.values():
            module.reset_parameters(rng)

    def forward(self, *args: Any, **kwargs: Any) -> Tensor:
        raise NotImplementedError(f"{type(self).__name__} has no forward")

    def __call__(self, *args: Any, **kwargs: Any) -> Tensor:
        return self.forward(*args, **kwargs)


class ModuleList(Module):
    """An ordered list of modules registered under their index"""

    def __init__(self, modules: Iterable[Module] = ()):
        super().__init__()
        self._items: List[Module] = []
        for module in modules:
            self.append(module)

    def append(self, module: Module) -> None:
        setattr(self, str(len(self._items)), module)
        self._items.append(module)

    def __iter__(self) -> Iterator[Module]:
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __getitem__(self, index: int) -> Module:
        return self._items[index]
