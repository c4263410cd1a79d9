"""Numpy transformer encoder with a masked-LM head, checkpoints and training."""

from .checkpoint import Checkpoint, CheckpointError, checkpoints_equal, load_checkpoint, save_checkpoint
from .config import ConfigError, ModelConfig, TrainSpec, preset
from .model import ShapeError, forward, mlm_loss, mlm_loss_and_grads
from .training import NumericError, finetune, init, mlm_corrupt, perplexity, train_step

__all__ = [
    "Checkpoint", "CheckpointError", "checkpoints_equal", "load_checkpoint", "save_checkpoint",
    "ConfigError", "ModelConfig", "TrainSpec", "preset",
    "ShapeError", "forward", "mlm_loss", "mlm_loss_and_grads",
    "NumericError", "finetune", "init", "mlm_corrupt", "perplexity", "train_step",
]
