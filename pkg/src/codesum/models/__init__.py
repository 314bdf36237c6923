"""Attentional GRU encoder-decoder summarization models."""

from .checkpoint import (
    MAGIC,
    VERSION,
    CheckpointError,
    decode_checkpoint,
    encode_checkpoint,
    load_checkpoint,
    save_checkpoint,
)
from .network import (
    KINDS,
    AST_VIEWS,
    TXT_VIEWS,
    ModelConfig,
    Seq2SeqModel,
    forward_ast_attendgru,
    forward_attendgru,
    forward_sbt,
    init_model,
    init_params,
    param_shapes,
)

__all__ = [
    "AST_VIEWS", "KINDS", "MAGIC", "TXT_VIEWS", "VERSION", "CheckpointError", "ModelConfig", "Seq2SeqModel",
    "decode_checkpoint", "encode_checkpoint", "forward_ast_attendgru", "forward_attendgru",
    "forward_sbt", "init_model", "init_params", "load_checkpoint", "param_shapes",
    "save_checkpoint",
]
