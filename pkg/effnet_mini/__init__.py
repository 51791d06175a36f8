"""EffNet-mini"""

from effnet_mini.experiment_runner import ExperimentRunner

__version__ = "0.1.0"

__all__ = ["ExperimentRunner"]
