"""Forward/backward pairs for every layer the summarization models use.

Tensors are plain numpy arrays (rank <= 3, row-major). Each ``*_forward``
returns its output and whatever the matching ``*_backward`` needs; backward
functions return gradients in the order of the forward inputs.
"""

from __future__ import annotations

import numpy as np


def assert_finite(name: str, arr: np.ndarray):
    if not np.all(np.isfinite(arr)):
        raise FloatingPointError(f"non-finite values in {name}")


def _shape_error(what: str, *shapes):
    raise ValueError(f"{what}: incompatible shapes {', '.join(str(tuple(s)) for s in shapes)}")


# -- embedding ---------------------------------------------------------------


def embedding_forward(indices: np.ndarray, table: np.ndarray) -> np.ndarray:
    """Row gather: ``indices[b, t]`` -> ``table[indices[b, t]]``."""
    indices = np.asarray(indices)
    if indices.size and (indices.min() < 0 or indices.max() >= table.shape[0]):
        raise IndexError(
            f"embedding index out of range [0, {table.shape[0]}): "
            f"min {indices.min()}, max {indices.max()}"
        )
    return table[indices]


def embedding_backward(dout: np.ndarray, indices: np.ndarray, vocab_size: int) -> np.ndarray:
    dtable = np.zeros((vocab_size, dout.shape[-1]), dtype=dout.dtype)
    np.add.at(dtable, np.asarray(indices).reshape(-1), dout.reshape(-1, dout.shape[-1]))
    return dtable


# -- elementwise -------------------------------------------------------------


def sigmoid(x: np.ndarray) -> np.ndarray:
    # split by sign so exp never overflows
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def relu_forward(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0)


def relu_backward(dout: np.ndarray, out: np.ndarray) -> np.ndarray:
    return dout * (out > 0)


def softmax_forward(x: np.ndarray) -> np.ndarray:
    """Softmax over the last axis."""
    shifted = x - x.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def softmax_backward(dout: np.ndarray, out: np.ndarray) -> np.ndarray:
    return out * (dout - (dout * out).sum(axis=-1, keepdims=True))


# -- dense / reshape ---------------------------------------------------------


def dense_forward(x: np.ndarray, kernel: np.ndarray, bias: np.ndarray) -> np.ndarray:
    """Affine map on the last axis; on rank-3 input this is the time-distributed layer."""
    if x.shape[-1] != kernel.shape[0] or bias.shape != (kernel.shape[1],):
        _shape_error("dense", x.shape, kernel.shape, bias.shape)
    return x @ kernel + bias


def dense_backward(dout: np.ndarray, x: np.ndarray, kernel: np.ndarray):
    x2 = x.reshape(-1, x.shape[-1])
    d2 = dout.reshape(-1, dout.shape[-1])
    return dout @ kernel.T, x2.T @ d2, d2.sum(axis=0)


def time_distributed_dense_forward(x: np.ndarray, kernel: np.ndarray, bias: np.ndarray) -> np.ndarray:
    if x.ndim != 3:
        _shape_error("time_distributed_dense expects rank 3", x.shape)
    return dense_forward(x, kernel, bias)


time_distributed_dense_backward = dense_backward


def flatten_forward(x: np.ndarray) -> np.ndarray:
    return x.reshape(x.shape[0], -1)


def flatten_backward(dout: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    return dout.reshape(shape)


def concatenate_forward(xs: list[np.ndarray]) -> np.ndarray:
    lead = xs[0].shape[:-1]
    if any(x.shape[:-1] != lead for x in xs):
        _shape_error("concatenate", *(x.shape for x in xs))
    return np.concatenate(xs, axis=-1)


def concatenate_backward(dout: np.ndarray, widths: list[int]) -> list[np.ndarray]:
    cuts = np.cumsum(widths)[:-1]
    return np.split(dout, cuts, axis=-1)


# -- batched dot -------------------------------------------------------------

_LETTERS = "ijklmnopqrstuvwxyz"


def _batched_dot_subscripts(ndim_a: int, ndim_b: int, axes: tuple[int, int]) -> tuple[str, str, str]:
    ia, ib = axes
    if not (1 <= ia < ndim_a and 1 <= ib < ndim_b):
        raise ValueError(f"batched_dot axes {axes} invalid for ranks {ndim_a}, {ndim_b}")
    letters = iter(_LETTERS)
    sa = ["b"] + [next(letters) for _ in range(ndim_a - 1)]
    sb = ["b"] + [next(letters) for _ in range(ndim_b - 1)]
    sb[ib] = sa[ia]
    out = [s for k, s in enumerate(sa) if k != ia] + [s for k, s in enumerate(sb) if k not in (0, ib)]
    return "".join(sa), "".join(sb), "".join(out)


def batched_dot_forward(a: np.ndarray, b: np.ndarray, axes: tuple[int, int]) -> np.ndarray:
    """Per-sample contraction of ``a`` axis ``axes[0]`` with ``b`` axis ``axes[1]``.

    Axis 0 is the batch axis of both operands. The result keeps a's free axes
    followed by b's, e.g. (b,13,256)x(b,100,256) on (2,2) -> (b,13,100).
    """
    if a.shape[0] != b.shape[0] or a.shape[axes[0]] != b.shape[axes[1]]:
        _shape_error(f"batched_dot axes {tuple(axes)}", a.shape, b.shape)
    sa, sb, so = _batched_dot_subscripts(a.ndim, b.ndim, axes)
    return np.einsum(f"{sa},{sb}->{so}", a, b)


def batched_dot_backward(dout: np.ndarray, a: np.ndarray, b: np.ndarray, axes: tuple[int, int]):
    sa, sb, so = _batched_dot_subscripts(a.ndim, b.ndim, axes)
    return np.einsum(f"{so},{sb}->{sa}", dout, b), np.einsum(f"{so},{sa}->{sb}", dout, a)


# -- GRU ---------------------------------------------------------------------


def gru_forward(x, h0, kernel, recurrent_kernel, bias):
    """Standard GRU over ``x[batch, T, D]`` from ``h0[batch, H]``.

    Gate blocks in the kernels are ordered (z, r, candidate)::

        z  = sigmoid(x Wz + h Uz + bz)
        r  = sigmoid(x Wr + h Ur + br)
        c  = tanh(x Wh + (r * h) Uh + bh)
        h' = (1 - z) * h + z * c

    Returns ``(states[batch, T, H], h_T, cache)``.
    """
    batch, steps, dim = x.shape
    units = recurrent_kernel.shape[0]
    if (
        kernel.shape != (dim, 3 * units)
        or recurrent_kernel.shape != (units, 3 * units)
        or bias.shape != (3 * units,)
        or h0.shape != (batch, units)
    ):
        _shape_error("gru", x.shape, h0.shape, kernel.shape, recurrent_kernel.shape, bias.shape)
    xproj = x @ kernel + bias
    u_zr = recurrent_kernel[:, : 2 * units]
    u_h = recurrent_kernel[:, 2 * units :]
    states = np.empty((batch, steps, units), dtype=np.result_type(x, h0, kernel))
    zs = np.empty_like(states)
    rs = np.empty_like(states)
    cs = np.empty_like(states)
    h = h0
    for t in range(steps):
        zr = sigmoid(xproj[:, t, : 2 * units] + h @ u_zr)
        z, r = zr[:, :units], zr[:, units:]
        c = np.tanh(xproj[:, t, 2 * units :] + (r * h) @ u_h)
        h = (1 - z) * h + z * c
        states[:, t] = h
        zs[:, t], rs[:, t], cs[:, t] = z, r, c
    cache = (x, h0, kernel, recurrent_kernel, states, zs, rs, cs)
    return states, h, cache


def gru_backward(dstates, dh_final, cache):
    """Backpropagation through time. ``dstates`` may be None (final state only)."""
    x, h0, kernel, recurrent_kernel, states, zs, rs, cs = cache
    batch, steps, _ = x.shape
    units = recurrent_kernel.shape[0]
    u_z = recurrent_kernel[:, :units]
    u_r = recurrent_kernel[:, units : 2 * units]
    u_h = recurrent_kernel[:, 2 * units :]
    dxproj = np.zeros((batch, steps, 3 * units), dtype=states.dtype)
    drec = np.zeros_like(recurrent_kernel)
    dh = np.zeros((batch, units), dtype=states.dtype) if dh_final is None else dh_final.copy()
    for t in reversed(range(steps)):
        if dstates is not None:
            dh = dh + dstates[:, t]
        h_prev = states[:, t - 1] if t > 0 else h0
        z, r, c = zs[:, t], rs[:, t], cs[:, t]
        da_h = dh * z * (1 - c * c)
        da_z = dh * (c - h_prev) * z * (1 - z)
        rh = r * h_prev
        drh = da_h @ u_h.T
        da_r = drh * h_prev * r * (1 - r)
        drec[:, :units] += h_prev.T @ da_z
        drec[:, units : 2 * units] += h_prev.T @ da_r
        drec[:, 2 * units :] += rh.T @ da_h
        dh = dh * (1 - z) + drh * r + da_z @ u_z.T + da_r @ u_r.T
        dxproj[:, t, :units] = da_z
        dxproj[:, t, units : 2 * units] = da_r
        dxproj[:, t, 2 * units :] = da_h
    flat = dxproj.reshape(-1, 3 * units)
    dkernel = x.reshape(-1, x.shape[-1]).T @ flat
    dbias = flat.sum(axis=0)
    dx = dxproj @ kernel.T
    return dx, dh, dkernel, drec, dbias


# -- loss --------------------------------------------------------------------


def cross_entropy(probs: np.ndarray, targets: np.ndarray) -> float:
    """Mean negative log-likelihood of integer ``targets`` under row distributions."""
    targets = np.asarray(targets)
    if targets.ndim == 2:
        targets = targets.argmax(axis=1)
    if targets.size and (targets.min() < 0 or targets.max() >= probs.shape[1]):
        raise IndexError(f"target index out of range [0, {probs.shape[1]})")
    picked = probs[np.arange(len(targets)), targets]
    return float(-np.mean(np.log(np.maximum(picked, np.finfo(probs.dtype).tiny))))


def softmax_cross_entropy(logits: np.ndarray, targets: np.ndarray) -> tuple[float, np.ndarray]:
    """Loss and gradient w.r.t. the pre-softmax logits: ``(probs - onehot) / batch``."""
    targets = np.asarray(targets)
    if targets.size and (targets.min() < 0 or targets.max() >= logits.shape[1]):
        raise IndexError(f"target index out of range [0, {logits.shape[1]})")
    n = logits.shape[0]
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_z = np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    log_probs = shifted - log_z
    loss = float(-log_probs[np.arange(n), targets].mean())
    grad = np.exp(log_probs)
    grad[np.arange(n), targets] -= 1
    return loss, grad / n
