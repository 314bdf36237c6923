"""Dense numpy layers with analytic gradients, a gradient checker and Adam."""

from .gradcheck import grad_check, max_relative_error, numeric_gradient, relative_error
from .ops import (
    assert_finite,
    batched_dot_backward,
    batched_dot_forward,
    concatenate_backward,
    concatenate_forward,
    cross_entropy,
    dense_backward,
    dense_forward,
    embedding_backward,
    embedding_forward,
    flatten_backward,
    flatten_forward,
    gru_backward,
    gru_forward,
    relu_backward,
    relu_forward,
    sigmoid,
    softmax_backward,
    softmax_cross_entropy,
    softmax_forward,
    time_distributed_dense_backward,
    time_distributed_dense_forward,
)
from .optim import Adam
from .params import ParamSet, glorot_uniform, uniform

__all__ = [
    "Adam", "ParamSet", "assert_finite", "batched_dot_backward", "batched_dot_forward",
    "concatenate_backward", "concatenate_forward", "cross_entropy", "dense_backward",
    "dense_forward", "embedding_backward", "embedding_forward", "flatten_backward",
    "flatten_forward", "glorot_uniform", "grad_check", "gru_backward", "gru_forward",
    "max_relative_error", "numeric_gradient", "relative_error", "relu_backward",
    "relu_forward", "sigmoid", "softmax_backward", "softmax_cross_entropy",
    "softmax_forward", "time_distributed_dense_backward",
    "time_distributed_dense_forward", "uniform",
]
