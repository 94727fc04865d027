from .checkpoint import CheckpointFormatError, checkpoint_document, load_checkpoint, save_checkpoint
from .network import ForwardCache, backward, forward, init_params
from .params import GradientBundle, LayerStack, LifterParams, layer_shapes

__all__ = [
    "CheckpointFormatError",
    "ForwardCache",
    "GradientBundle",
    "LayerStack",
    "LifterParams",
    "backward",
    "checkpoint_document",
    "forward",
    "init_params",
    "layer_shapes",
    "load_checkpoint",
    "save_checkpoint",
]
